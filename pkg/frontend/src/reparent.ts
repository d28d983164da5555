/** Drag-and-drop reparenting with a client-side legality pre-check that
 * mirrors the server's tree rules, so illegal drops never hit the network. */

import type { GatewayClient, NodeKind } from "./api.js";
import type { TreeViewModel } from "./tree.js";

const LEGAL_CHILDREN: Record<NodeKind, NodeKind[]> = {
  scene: ["source"],
  source: ["filter", "module_manager"],
  filter: ["filter", "module_manager"],
  module_manager: ["module"],
  module: [],
};

/** Can a node of `child` kind live under a `parent` kind? Modules may be
 * dropped on sources/filters because the server interposes a manager. */
export function dropAllowed(child: NodeKind, parent: NodeKind): boolean {
  if (LEGAL_CHILDREN[parent].includes(child)) return true;
  if (
    child === "module" &&
    LEGAL_CHILDREN[parent].includes("module_manager")
  ) {
    return true; // a module manager gets interposed server-side
  }
  return false;
}

export interface DropVerdict {
  allowed: boolean;
  reason?: string;
}

export function checkDrop(
  tree: TreeViewModel,
  nodeId: number,
  targetId: number,
): DropVerdict {
  const node = tree.find(nodeId);
  const target = tree.find(targetId);
  if (!node || !target) return { allowed: false, reason: "unknown node" };
  if (nodeId === targetId) {
    return { allowed: false, reason: "cannot drop a node onto itself" };
  }
  if (tree.isDescendant(nodeId, targetId)) {
    return { allowed: false, reason: "cannot drop onto own descendant" };
  }
  if (!dropAllowed(node.kind, target.kind)) {
    return {
      allowed: false,
      reason: `a ${node.kind} cannot be a child of a ${target.kind}`,
    };
  }
  return { allowed: true };
}

/** Pre-check locally, then ask the server to move the subtree. */
export async function dragReparent(
  client: GatewayClient,
  tree: TreeViewModel,
  nodeId: number,
  targetId: number,
): Promise<DropVerdict> {
  const verdict = checkDrop(tree, nodeId, targetId);
  if (!verdict.allowed) return verdict; // no request
  await client.reparent(nodeId, targetId);
  return verdict;
}
