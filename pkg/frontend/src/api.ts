/** Typed client for the look-up service. Only the documented endpoints are
 * ever requested: /lookup for interpretation data (format=json) and the
 * version-scoped concept URIs for RDF (format=ttl or json). URIs from
 * reports are dereferenced by their path on the service origin, never
 * re-minted client-side. */

export interface OpenSuperclass {
  notation: string;
  uri: string;
}

export interface ComponentDoc {
  notation: string;
  kind: string;
  status: "valid" | "deprecated" | "unknown" | "tier-blocked";
  resolvable: boolean;
  span: [number, number];
  uri: string | null;
  replaced_by: string[];
  open_superclass: OpenSuperclass | null;
}

export interface TreeNode {
  node: string;
  kind?: string;
  text?: string;
  span?: [number, number];
  base?: TreeNode;
  auxiliaries?: TreeNode[];
  members?: TreeNode[];
}

export interface ReportDoc {
  classmark: { raw: string; normalized: string };
  snapshot_version: string;
  tier: string;
  components: ComponentDoc[];
  composed_uri: string | null;
  tree: TreeNode;
}

export interface ErrorDoc {
  error: string;
  position?: number;
  expected?: string;
  found?: string;
  notation?: string;
  required_tier?: string;
  open_superclass?: OpenSuperclass | null;
}

export type LookupResult =
  | { ok: true; report: ReportDoc }
  | { ok: false; status: number; body: ErrorDoc };

export type FetchResult =
  | { ok: true; text: string }
  | { ok: false; status: number; body: ErrorDoc };

export type FetchLike = (url: string, init?: { headers?: Record<string, string> }) =>
  Promise<{ status: number; text(): Promise<string> }>;

/** Path-and-query of a concept URI, for dereferencing on the service origin. */
export function uriToPath(uri: string): string {
  const withoutScheme = uri.replace(/^[a-z][a-z0-9+.-]*:\/\//i, "");
  const slash = withoutScheme.indexOf("/");
  return slash < 0 ? "/" : withoutScheme.slice(slash);
}

export class ApiClient {
  readonly origin: string;
  apiKey: string | null = null;
  private readonly fetchFn: FetchLike;

  constructor(origin = "", fetchFn?: FetchLike) {
    this.origin = origin.replace(/\/$/, "");
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  private headers(): Record<string, string> {
    return this.apiKey ? { Authorization: `Bearer ${this.apiKey}` } : {};
  }

  private async request(pathAndQuery: string): Promise<{ status: number; text: string }> {
    const response = await this.fetchFn(this.origin + pathAndQuery, { headers: this.headers() });
    return { status: response.status, text: await response.text() };
  }

  /** Interpret a classmark; data panels always use format=json. */
  async lookup(classmark: string, tier?: string, version?: string): Promise<LookupResult> {
    const params = new URLSearchParams({ classmark, format: "json" });
    if (tier) params.set("tier", tier);
    if (version) params.set("version", version);
    const { status, text } = await this.request(`/lookup?${params}`);
    if (status === 200) {
      return { ok: true, report: JSON.parse(text) as ReportDoc };
    }
    return { ok: false, status, body: parseErrorBody(text) };
  }

  /** One concept record in the chosen RDF rendering, via its minted URI. */
  async fetchConcept(uri: string, format: "turtle" | "json"): Promise<FetchResult> {
    const path = uriToPath(uri);
    const sep = path.includes("?") ? "&" : "?";
    const { status, text } = await this.request(
      `${path}${sep}format=${format === "turtle" ? "ttl" : "json"}`);
    if (status === 200) return { ok: true, text };
    return { ok: false, status, body: parseErrorBody(text) };
  }

  /** The whole-report graph (component records plus composed nodes). */
  async fetchReportGraph(classmark: string, format: "turtle" | "json",
                         tier?: string, version?: string): Promise<FetchResult> {
    const params = new URLSearchParams(
      { classmark, format: format === "turtle" ? "ttl" : "json" });
    if (tier) params.set("tier", tier);
    if (version) params.set("version", version);
    const { status, text } = await this.request(`/lookup?${params}`);
    if (status === 200) return { ok: true, text };
    return { ok: false, status, body: parseErrorBody(text) };
  }
}

function parseErrorBody(text: string): ErrorDoc {
  try {
    return JSON.parse(text) as ErrorDoc;
  } catch {
    return { error: text || "request failed" };
  }
}
