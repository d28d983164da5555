/** View model for the pipeline tree panel.
 *
 * The server tree is the single source of truth: the model stores the last
 * document received and re-syncs wholesale on every mutation event, keeping
 * only UI-local state (selection, expansion) of its own.
 */

import type { NodeKind, TreeNode } from "./api.js";

export interface TreeRow {
  id: number;
  depth: number;
  label: string;
  icon: string;
  errorBadge: boolean;
  expanded: boolean;
  selected: boolean;
}

const KIND_ICONS: Record<NodeKind, string> = {
  scene: "🎬",
  source: "📦",
  filter: "⚙",
  module_manager: "🎨",
  module: "👁",
};

export class TreeViewModel {
  private scenes: TreeNode[] = [];
  private collapsed = new Set<number>();
  selection: number | null = null;

  /** Replace the mirrored tree with a fresh GET /pipeline document. */
  sync(scenes: TreeNode[]): void {
    this.scenes = scenes;
    const ids = new Set<number>();
    const walk = (n: TreeNode) => {
      ids.add(n.id);
      n.children.forEach(walk);
    };
    scenes.forEach(walk);
    // drop UI state for nodes that no longer exist
    for (const id of [...this.collapsed]) if (!ids.has(id)) this.collapsed.delete(id);
    if (this.selection !== null && !ids.has(this.selection)) this.selection = null;
  }

  find(id: number): TreeNode | null {
    const search = (n: TreeNode): TreeNode | null => {
      if (n.id === id) return n;
      for (const child of n.children) {
        const hit = search(child);
        if (hit) return hit;
      }
      return null;
    };
    for (const scene of this.scenes) {
      const hit = search(scene);
      if (hit) return hit;
    }
    return null;
  }

  isDescendant(ancestorId: number, nodeId: number): boolean {
    const ancestor = this.find(ancestorId);
    if (!ancestor) return false;
    const search = (n: TreeNode): boolean =>
      n.id === nodeId || n.children.some(search);
    return ancestor.children.some(search);
  }

  select(id: number | null): void {
    this.selection = id;
  }

  toggle(id: number): void {
    if (this.collapsed.has(id)) this.collapsed.delete(id);
    else this.collapsed.add(id);
  }

  /** Flattened visible rows: one per node, indented by depth. */
  rows(): TreeRow[] {
    const out: TreeRow[] = [];
    const visit = (node: TreeNode, depth: number) => {
      const expanded = !this.collapsed.has(node.id);
      out.push({
        id: node.id,
        depth,
        label: node.name,
        icon: KIND_ICONS[node.kind] ?? "?",
        errorBadge: node.status === "error",
        expanded,
        selected: node.id === this.selection,
      });
      if (expanded) node.children.forEach((c) => visit(c, depth + 1));
    };
    this.scenes.forEach((s) => visit(s, 0));
    return out;
  }

  /** Render to a plain DOM-ish description; a placeholder when empty. */
  renderRows(): string[] {
    const rows = this.rows();
    if (rows.length === 0) return ["(no pipeline — add a source)"];
    return rows.map(
      (r) =>
        "  ".repeat(r.depth) +
        `${r.icon} ${r.label}` +
        (r.errorBadge ? " ⚠" : "") +
        (r.selected ? " *" : ""),
    );
  }
}
