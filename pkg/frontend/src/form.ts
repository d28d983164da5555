/** Schema-driven property editor model.
 *
 * Widget choice is an exhaustive switch over the descriptor kind — there is
 * deliberately no text-input fallthrough, so an unknown kind fails loudly
 * instead of silently degrading.
 */

import type { Descriptor, DescriptorKind, GatewayClient } from "./api.js";
import { GatewayError } from "./api.js";

export type WidgetType =
  | "slider"
  | "integer-spinner"
  | "checkbox"
  | "text"
  | "select"
  | "number-list"
  | "vector3"
  | "color-picker";

export function widgetFor(kind: DescriptorKind): WidgetType {
  switch (kind) {
    case "float":
      return "slider";
    case "int":
      return "integer-spinner";
    case "bool":
      return "checkbox";
    case "string":
      return "text";
    case "enum":
      return "select";
    case "float_list":
      return "number-list";
    case "float_triplet":
      return "vector3";
    case "color_rgba":
      return "color-picker";
    default: {
      const never: never = kind;
      throw new Error(`no widget for descriptor kind ${String(never)}`);
    }
  }
}

export function validate(descriptor: Descriptor, value: unknown): string | null {
  const numeric = (v: unknown) => typeof v === "number" && Number.isFinite(v);
  const inBounds = (v: number) =>
    !descriptor.bounds || (v >= descriptor.bounds[0] && v <= descriptor.bounds[1]);
  switch (descriptor.kind) {
    case "float":
      if (!numeric(value)) return "expected a number";
      if (!inBounds(value as number)) return `outside bounds [${descriptor.bounds}]`;
      return null;
    case "int":
      if (!numeric(value) || !Number.isInteger(value)) return "expected an integer";
      if (!inBounds(value as number)) return `outside bounds [${descriptor.bounds}]`;
      return null;
    case "bool":
      return typeof value === "boolean" ? null : "expected true/false";
    case "string":
      return typeof value === "string" ? null : "expected text";
    case "enum":
      return descriptor.choices && descriptor.choices.includes(value as string)
        ? null
        : `expected one of ${descriptor.choices?.join(", ")}`;
    case "float_list":
      return Array.isArray(value) && value.every(numeric)
        ? null
        : "expected a list of numbers";
    case "float_triplet":
      return Array.isArray(value) && value.length === 3 && value.every(numeric)
        ? null
        : "expected three numbers";
    case "color_rgba":
      return Array.isArray(value) &&
        value.length === 4 &&
        value.every((v) => numeric(v) && v >= 0 && v <= 1)
        ? null
        : "expected four numbers in [0, 1]";
  }
}

export interface FieldState {
  descriptor: Descriptor;
  widget: WidgetType;
  value: unknown;
  dirty: boolean;
  error: string | null;
}

/** One form bound to one node; edits PATCH immediately and refetch a frame. */
export class PropertyFormModel {
  fields = new Map<string, FieldState>();
  private inFlight: Promise<void> | null = null;

  constructor(
    private readonly client: GatewayClient,
    private readonly nodeId: number,
    private readonly onFrameInvalid: () => Promise<void> | void,
  ) {}

  async load(): Promise<void> {
    const descriptors = await this.client.describe(this.nodeId);
    this.fields = new Map(
      descriptors.map((d) => [
        d.name,
        {
          descriptor: d,
          widget: widgetFor(d.kind),
          value: d.value,
          dirty: false,
          error: null,
        },
      ]),
    );
  }

  /** Apply one edit: client validation, a single PATCH, a single refetch. */
  async edit(name: string, value: unknown): Promise<boolean> {
    const field = this.fields.get(name);
    if (!field) throw new Error(`unknown property ${name}`);
    const problem = validate(field.descriptor, value);
    if (problem) {
      field.error = problem; // blocked client-side: no request
      return false;
    }
    // serialize per-node edits: one request in flight at a time
    while (this.inFlight) await this.inFlight;
    const run = async () => {
      const previous = field.value;
      field.value = value;
      field.dirty = true;
      try {
        await this.client.patchNode(this.nodeId, { [name]: value });
        field.dirty = false;
        field.error = null;
        await this.onFrameInvalid();
      } catch (err) {
        if (err instanceof GatewayError) {
          field.value = previous; // server rejected: revert and surface it
          field.dirty = false;
          field.error = err.message;
          return;
        }
        throw err;
      }
    };
    this.inFlight = run();
    try {
      await this.inFlight;
    } finally {
      this.inFlight = null;
    }
    const after = this.fields.get(name)!;
    return after.error === null;
  }
}
