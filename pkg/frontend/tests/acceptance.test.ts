/** End-to-end checks against a live gateway process.
 *
 * A real server is spawned for the suite; the client talks plain HTTP with
 * an instrumented fetch so request counts can be asserted exactly.
 */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import type { FetchLike, TreeNode } from "../src/api.js";
import { GatewayClient } from "../src/api.js";
import { PropertyFormModel } from "../src/form.js";
import { FrameView } from "../src/frame.js";
import { contextMenu } from "../src/menu.js";
import { TreeViewModel } from "../src/tree.js";

const PORT = 8700 + (process.pid % 200);
const BASE = `http://127.0.0.1:${PORT}`;

let server: ChildProcess;
const log: { method: string; path: string }[] = [];

const countingFetch: FetchLike = async (url, init) => {
  log.push({
    method: init?.method ?? "GET",
    path: url.replace(/^https?:\/\/[^/]+/, ""),
  });
  return fetch(url, init as RequestInit) as any;
};

const client = new GatewayClient(BASE, countingFetch);

const VOLUME_VTK = [
  "# vtk DataFile Version 2.0",
  "test volume",
  "ASCII",
  "DATASET STRUCTURED_POINTS",
  "DIMENSIONS 3 3 3",
  "ORIGIN 0.0 0.0 0.0",
  "SPACING 1.0 1.0 1.0",
  "POINT_DATA 27",
  "SCALARS scalars double 1",
  "LOOKUP_TABLE default",
  ...Array.from({ length: 27 }, (_, i) => `${i}.0`),
  "",
].join("\n");

beforeAll(async () => {
  server = spawn("python3", ["-m", "vizpipe", "serve", "--port", String(PORT)], {
    stdio: "ignore",
  });
  const deadline = Date.now() + 30_000;
  for (;;) {
    try {
      const r = await fetch(`${BASE}/pipeline`);
      if (r.ok) break;
    } catch {
      /* not up yet */
    }
    if (Date.now() > deadline) throw new Error("gateway did not start");
    await new Promise((r) => setTimeout(r, 150));
  }
}, 40_000);

afterAll(() => {
  server?.kill();
});

async function expectTreeMatchesServer(tree: TreeViewModel): Promise<void> {
  const doc = await client.pipeline();
  tree.sync(doc.scenes);
  const mirrored = tree.rows().map((r) => r.id);
  const flat: number[] = [];
  const walk = (n: TreeNode) => {
    flat.push(n.id);
    n.children.forEach(walk);
  };
  doc.scenes.forEach(walk);
  expect(mirrored).toEqual(flat);
}

describe("live gateway", () => {
  it("tree stays equal to GET /pipeline across add, patch, and delete", async () => {
    const tree = new TreeViewModel();
    await expectTreeMatchesServer(tree);

    const sourceId = await client.createNode("parametric_curve_source");
    await expectTreeMatchesServer(tree);

    const moduleId = await client.createNode("surface", { parent: sourceId });
    await expectTreeMatchesServer(tree);
    // the server interposed a module manager between source and module
    const sourceNode = tree.find(sourceId)!;
    expect(sourceNode.children[0]!.kind).toBe("module_manager");
    expect(sourceNode.children[0]!.children[0]!.id).toBe(moduleId);

    await client.patchNode(sourceId, { n_turns: 17 });
    await expectTreeMatchesServer(tree);

    await client.deleteNode(moduleId);
    await expectTreeMatchesServer(tree);
    expect(tree.find(moduleId)).toBeNull();

    await client.deleteNode(sourceId);
    await expectTreeMatchesServer(tree);
  }, 30_000);

  it("a slider edit sends exactly one PATCH and refetches one frame", async () => {
    const sourceId = await client.createNode("parametric_curve_source");
    await client.createNode("surface", { parent: sourceId });

    const frames = new FrameView(client, 160, 120);
    await frames.invalidate(); // initial frame
    const form = new PropertyFormModel(client, sourceId, () => frames.invalidate());
    await form.load();
    expect(form.fields.get("n_turns")!.widget).toBe("integer-spinner");

    const before = log.length;
    const beforeFrames = frames.fetchCount;
    const ok = await form.edit("n_turns", 17);
    expect(ok).toBe(true);

    const during = log.slice(before);
    expect(during.filter((r) => r.method === "PATCH")).toHaveLength(1);
    expect(during.filter((r) => r.path.startsWith("/render"))).toHaveLength(1);
    expect(frames.fetchCount).toBe(beforeFrames + 1);

    await client.deleteNode(sourceId);
  }, 30_000);

  it("context menus equal the server's applicability lists for three fixtures", async () => {
    const dir = mkdtempSync(join(tmpdir(), "studio-ui-"));
    const volumePath = join(dir, "volume.vtk");
    writeFileSync(volumePath, VOLUME_VTK);

    const volumeId = await client.createNode("vtk_file_source", {
      properties: { file_name: volumePath },
    });
    const curveId = await client.createNode("parametric_curve_source");
    const emptyId = await client.createNode("array_source");

    const doc = await client.pipeline();
    const tree = new TreeViewModel();
    tree.sync(doc.scenes);

    for (const id of [volumeId, curveId, emptyId]) {
      const node = tree.find(id)!;
      const actions = await contextMenu(client, node, true);
      const offered = actions
        .filter((a) => a.action === "add")
        .map((a) => a.factoryId)
        .sort();
      const serverList = (await client.applicable(id))
        .map((e) => e.factory_id)
        .sort();
      expect(offered).toEqual(serverList);
    }

    // spot-check the expected contents per dataset kind
    const volumeList = (await client.applicable(volumeId)).map((e) => e.factory_id);
    expect(volumeList.sort()).toEqual(["iso_surface", "outline"]);
    expect(volumeList).not.toContain("poly_data_normals");
    const curveList = (await client.applicable(curveId)).map((e) => e.factory_id);
    expect(curveList.sort()).toEqual(["outline", "poly_data_normals", "surface"]);
    expect(await client.applicable(emptyId)).toEqual([]);

    for (const id of [volumeId, curveId, emptyId]) await client.deleteNode(id);
  }, 30_000);
});
