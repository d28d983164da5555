/** Typed client for the pipeline gateway's HTTP contract.
 *
 * Every call goes through an injectable `fetch`, so tests can point the
 * client at a mock transport or at a live server interchangeably.
 */

export type NodeKind =
  | "scene"
  | "source"
  | "filter"
  | "module_manager"
  | "module";

export interface TreeNode {
  id: number;
  kind: NodeKind;
  factory_id: string;
  name: string;
  status: string;
  children: TreeNode[];
}

export interface PipelineDoc {
  scenes: TreeNode[];
}

export type DescriptorKind =
  | "float"
  | "int"
  | "bool"
  | "string"
  | "enum"
  | "float_list"
  | "float_triplet"
  | "color_rgba";

export interface Descriptor {
  name: string;
  kind: DescriptorKind;
  default: unknown;
  bounds: [number, number] | null;
  choices: string[] | null;
  value: unknown;
}

export interface RegistryEntry {
  factory_id: string;
  kind: "source" | "filter" | "module";
  menu_name: string;
  extensions: string[];
  wildcards: string;
}

export interface GatewayEvent {
  event: string;
  node_id?: number;
  property?: string;
}

export type FetchLike = (
  url: string,
  init?: {
    method?: string;
    headers?: Record<string, string>;
    body?: string;
  },
) => Promise<{
  ok: boolean;
  status: number;
  json(): Promise<any>;
  text(): Promise<string>;
  arrayBuffer(): Promise<ArrayBuffer>;
}>;

export class GatewayError extends Error {
  constructor(
    message: string,
    public readonly status: number,
  ) {
    super(message);
  }
}

export class GatewayClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike,
  ) {}

  private async request(path: string, method = "GET", body?: unknown) {
    const init: Parameters<FetchLike>[1] = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const resp = await this.fetchImpl(this.baseUrl + path, init);
    if (!resp.ok) {
      let detail = `HTTP ${resp.status}`;
      try {
        const payload = await resp.json();
        if (payload && typeof payload.error === "string") detail = payload.error;
      } catch {
        /* non-JSON error body */
      }
      throw new GatewayError(detail, resp.status);
    }
    return resp;
  }

  async pipeline(): Promise<PipelineDoc> {
    return (await this.request("/pipeline")).json();
  }

  async registry(): Promise<RegistryEntry[]> {
    return (await (await this.request("/registry")).json()).entries;
  }

  async describe(id: number): Promise<Descriptor[]> {
    return (await (await this.request(`/describe/${id}`)).json()).descriptors;
  }

  async applicable(id: number): Promise<RegistryEntry[]> {
    return (await (await this.request(`/applicable/${id}`)).json()).entries;
  }

  async createNode(
    factory: string,
    options: { parent?: number; properties?: Record<string, unknown> } = {},
  ): Promise<number> {
    const body: Record<string, unknown> = { factory };
    if (options.parent !== undefined) body.parent = options.parent;
    if (options.properties) body.properties = options.properties;
    return (await (await this.request("/nodes", "POST", body)).json()).id;
  }

  async patchNode(
    id: number,
    properties: Record<string, unknown>,
  ): Promise<string[]> {
    const resp = await this.request(`/nodes/${id}`, "PATCH", properties);
    return (await resp.json()).changed;
  }

  async deleteNode(id: number): Promise<void> {
    await this.request(`/nodes/${id}`, "DELETE");
  }

  async reparent(node: number, parent: number): Promise<void> {
    await this.request("/reparent", "POST", { node, parent });
  }

  async renderFrame(width: number, height: number): Promise<ArrayBuffer> {
    const resp = await this.request(`/render?width=${width}&height=${height}`);
    return resp.arrayBuffer();
  }

  async state(): Promise<unknown> {
    return (await this.request("/state")).json();
  }

  async recordActive(): Promise<boolean> {
    return (await (await this.request("/record")).json()).active;
  }

  async startRecording(): Promise<void> {
    await this.request("/record/start", "POST");
  }

  /** Stop recording; returns the line-delimited command script. */
  async stopRecording(): Promise<string> {
    return (await this.request("/record/stop", "POST")).text();
  }
}
