import { describe, expect, it } from "vitest";

import type { Descriptor, DescriptorKind } from "../src/api.js";
import { GatewayClient } from "../src/api.js";
import { PropertyFormModel, validate, widgetFor } from "../src/form.js";
import { MockServer } from "./mock.js";

const ALL_KINDS: DescriptorKind[] = [
  "float",
  "int",
  "bool",
  "string",
  "enum",
  "float_list",
  "float_triplet",
  "color_rgba",
];

function desc(overrides: Partial<Descriptor>): Descriptor {
  return {
    name: "p",
    kind: "float",
    default: 0,
    bounds: null,
    choices: null,
    value: 0,
    ...overrides,
  };
}

describe("widgetFor", () => {
  it("maps every descriptor kind to a distinct widget", () => {
    const widgets = ALL_KINDS.map(widgetFor);
    expect(new Set(widgets).size).toBe(ALL_KINDS.length);
    expect(widgetFor("float")).toBe("slider");
    expect(widgetFor("enum")).toBe("select");
    expect(widgetFor("color_rgba")).toBe("color-picker");
  });
});

describe("validate", () => {
  it("enforces numeric bounds", () => {
    const d = desc({ kind: "float", bounds: [0, 180] });
    expect(validate(d, 90)).toBeNull();
    expect(validate(d, 181)).toMatch(/bounds/);
    expect(validate(d, "90")).toMatch(/number/);
  });

  it("rejects non-integers for int descriptors", () => {
    const d = desc({ kind: "int" });
    expect(validate(d, 3)).toBeNull();
    expect(validate(d, 3.5)).toMatch(/integer/);
  });

  it("checks enum membership", () => {
    const d = desc({ kind: "enum", choices: ["surface", "wireframe"] });
    expect(validate(d, "surface")).toBeNull();
    expect(validate(d, "dots")).toMatch(/one of/);
  });

  it("requires colors to have four components in [0, 1]", () => {
    const d = desc({ kind: "color_rgba" });
    expect(validate(d, [0, 0.5, 1, 1])).toBeNull();
    expect(validate(d, [0, 0.5, 1])).toMatch(/four/);
    expect(validate(d, [0, 0.5, 2, 1])).toMatch(/\[0, 1\]/);
  });

  it("requires triplets to be exactly three numbers", () => {
    const d = desc({ kind: "float_triplet" });
    expect(validate(d, [1, 2, 3])).toBeNull();
    expect(validate(d, [1, 2])).toMatch(/three/);
  });
});

function formFixture(options: { rejectPatch?: string } = {}) {
  const server = new MockServer();
  server.on("GET", /^\/describe\/7$/, () => ({
    json: {
      id: 7,
      descriptors: [
        desc({ name: "azimuth", kind: "float", bounds: [0, 360], value: 45 }),
        desc({ name: "name", kind: "string", value: "camera", default: "" }),
      ],
    },
  }));
  server.on("PATCH", /^\/nodes\/7$/, (body) => {
    if (options.rejectPatch) {
      return { status: 400, json: { error: options.rejectPatch } };
    }
    return { json: { id: 7, changed: Object.keys(body as object) } };
  });
  const client = new GatewayClient("http://test", server.fetch);
  let refetches = 0;
  const form = new PropertyFormModel(client, 7, () => {
    refetches += 1;
  });
  return { server, form, refetches: () => refetches };
}

describe("PropertyFormModel", () => {
  it("loads one field per descriptor with the right widget", async () => {
    const { form } = formFixture();
    await form.load();
    expect(form.fields.get("azimuth")!.widget).toBe("slider");
    expect(form.fields.get("name")!.widget).toBe("text");
    expect(form.fields.get("azimuth")!.value).toBe(45);
  });

  it("a slider edit issues exactly one PATCH and one frame refetch", async () => {
    const { server, form, refetches } = formFixture();
    await form.load();
    const ok = await form.edit("azimuth", 90);
    expect(ok).toBe(true);
    expect(server.requests("PATCH", "/nodes/7")).toHaveLength(1);
    expect(refetches()).toBe(1);
    expect(form.fields.get("azimuth")!.value).toBe(90);
  });

  it("client-side validation failure sends no request", async () => {
    const { server, form, refetches } = formFixture();
    await form.load();
    const ok = await form.edit("azimuth", 999);
    expect(ok).toBe(false);
    expect(server.requests("PATCH", "/nodes/7")).toHaveLength(0);
    expect(refetches()).toBe(0);
    expect(form.fields.get("azimuth")!.error).toMatch(/bounds/);
    expect(form.fields.get("azimuth")!.value).toBe(45);
  });

  it("server rejection reverts the value and surfaces the message", async () => {
    const { form, refetches } = formFixture({ rejectPatch: "azimuth is locked" });
    await form.load();
    const ok = await form.edit("azimuth", 90);
    expect(ok).toBe(false);
    const field = form.fields.get("azimuth")!;
    expect(field.value).toBe(45);
    expect(field.error).toBe("azimuth is locked");
    expect(refetches()).toBe(0);
  });

  it("concurrent edits serialize into one request at a time", async () => {
    const { server, form } = formFixture();
    await form.load();
    await Promise.all([form.edit("azimuth", 10), form.edit("azimuth", 20)]);
    const patches = server.requests("PATCH", "/nodes/7");
    expect(patches).toHaveLength(2);
    expect(form.fields.get("azimuth")!.value).toBe(20);
  });

  it("editing an unknown property throws", async () => {
    const { form } = formFixture();
    await form.load();
    await expect(form.edit("nope", 1)).rejects.toThrow(/unknown property/);
  });
});
