/** Context menu for a tree node: the server's applicability list drives the
 * "add child" suggestions; structural actions ride along. */

import type { GatewayClient, TreeNode } from "./api.js";

export interface MenuAction {
  label: string;
  action: "add" | "delete" | "move";
  factoryId?: string;
  enabled: boolean;
  reason?: string;
}

export async function contextMenu(
  client: GatewayClient,
  node: TreeNode,
  online: boolean,
): Promise<MenuAction[]> {
  if (!online) {
    return [
      {
        label: "Unavailable",
        action: "add",
        enabled: false,
        reason: "server unreachable",
      },
    ];
  }
  const actions: MenuAction[] = [];
  if (node.kind !== "module" && node.kind !== "scene") {
    const entries = await client.applicable(node.id);
    for (const entry of entries) {
      actions.push({
        label: entry.menu_name,
        action: "add",
        factoryId: entry.factory_id,
        enabled: true,
      });
    }
  }
  if (node.kind !== "scene") {
    actions.push({ label: "Delete", action: "delete", enabled: true });
    if (node.kind !== "module") {
      actions.push({ label: "Move…", action: "move", enabled: true });
    }
  }
  return actions;
}
