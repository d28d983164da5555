import { describe, expect, it } from "vitest";

import { GatewayClient } from "../src/api.js";
import { checkDrop, dragReparent, dropAllowed } from "../src/reparent.js";
import { TreeViewModel } from "../src/tree.js";
import { MockServer, node } from "./mock.js";

function fixture() {
  const moduleA = node("module", { id: 5 });
  const manager = node("module_manager", { id: 4, children: [moduleA] });
  const filter = node("filter", { id: 3, children: [manager] });
  const sourceB = node("source", { id: 6 });
  const source = node("source", { id: 2, children: [filter] });
  const scene = node("scene", { id: 1, children: [source, sourceB] });
  const tree = new TreeViewModel();
  tree.sync([scene]);
  return { tree, scene, source, sourceB, filter, manager, moduleA };
}

describe("dropAllowed", () => {
  it("follows the pipeline tree rules", () => {
    expect(dropAllowed("source", "scene")).toBe(true);
    expect(dropAllowed("filter", "source")).toBe(true);
    expect(dropAllowed("filter", "filter")).toBe(true);
    expect(dropAllowed("module", "module_manager")).toBe(true);
    expect(dropAllowed("source", "source")).toBe(false);
    expect(dropAllowed("filter", "scene")).toBe(false);
    expect(dropAllowed("module", "module")).toBe(false);
  });

  it("allows modules on sources and filters because a manager is interposed", () => {
    expect(dropAllowed("module", "source")).toBe(true);
    expect(dropAllowed("module", "filter")).toBe(true);
  });
});

describe("checkDrop", () => {
  it("rejects dropping a node onto its own descendant", () => {
    const { tree } = fixture();
    expect(checkDrop(tree, 2, 4).allowed).toBe(false);
    expect(checkDrop(tree, 2, 4).reason).toMatch(/descendant/);
  });

  it("rejects dropping a node onto itself", () => {
    const { tree } = fixture();
    expect(checkDrop(tree, 3, 3).allowed).toBe(false);
  });

  it("allows moving a filter under a sibling source", () => {
    const { tree } = fixture();
    expect(checkDrop(tree, 3, 6)).toEqual({ allowed: true });
  });

  it("reports unknown ids without throwing", () => {
    const { tree } = fixture();
    expect(checkDrop(tree, 99, 1).allowed).toBe(false);
  });
});

describe("dragReparent", () => {
  function withServer() {
    const server = new MockServer();
    server.on("POST", /^\/reparent$/, (body) => ({
      json: { id: (body as any).node, parent: (body as any).parent },
    }));
    return { server, client: new GatewayClient("http://test", server.fetch) };
  }

  it("posts /reparent for a legal drop", async () => {
    const { server, client } = withServer();
    const { tree } = fixture();
    const verdict = await dragReparent(client, tree, 3, 6);
    expect(verdict.allowed).toBe(true);
    expect(server.requests("POST", "/reparent")).toHaveLength(1);
    expect(server.log[0]!.body).toEqual({ node: 3, parent: 6 });
  });

  it("an illegal drop is rejected locally with no request", async () => {
    const { server, client } = withServer();
    const { tree } = fixture();
    const verdict = await dragReparent(client, tree, 5, 5 + 0); // module onto itself
    expect(verdict.allowed).toBe(false);
    const cycle = await dragReparent(client, tree, 2, 4);
    expect(cycle.allowed).toBe(false);
    expect(server.log).toHaveLength(0);
  });
});
