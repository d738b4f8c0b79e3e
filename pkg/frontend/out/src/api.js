/** Typed client for the look-up service. Only the documented endpoints are
 * ever requested: /lookup for interpretation data (format=json) and the
 * version-scoped concept URIs for RDF (format=ttl or json). URIs from
 * reports are dereferenced by their path on the service origin, never
 * re-minted client-side. */
/** Path-and-query of a concept URI, for dereferencing on the service origin. */
export function uriToPath(uri) {
    const withoutScheme = uri.replace(/^[a-z][a-z0-9+.-]*:\/\//i, "");
    const slash = withoutScheme.indexOf("/");
    return slash < 0 ? "/" : withoutScheme.slice(slash);
}
export class ApiClient {
    origin;
    apiKey = null;
    fetchFn;
    constructor(origin = "", fetchFn) {
        this.origin = origin.replace(/\/$/, "");
        this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
    }
    headers() {
        return this.apiKey ? { Authorization: `Bearer ${this.apiKey}` } : {};
    }
    async request(pathAndQuery) {
        const response = await this.fetchFn(this.origin + pathAndQuery, { headers: this.headers() });
        return { status: response.status, text: await response.text() };
    }
    /** Interpret a classmark; data panels always use format=json. */
    async lookup(classmark, tier, version) {
        const params = new URLSearchParams({ classmark, format: "json" });
        if (tier)
            params.set("tier", tier);
        if (version)
            params.set("version", version);
        const { status, text } = await this.request(`/lookup?${params}`);
        if (status === 200) {
            return { ok: true, report: JSON.parse(text) };
        }
        return { ok: false, status, body: parseErrorBody(text) };
    }
    /** One concept record in the chosen RDF rendering, via its minted URI. */
    async fetchConcept(uri, format) {
        const path = uriToPath(uri);
        const sep = path.includes("?") ? "&" : "?";
        const { status, text } = await this.request(`${path}${sep}format=${format === "turtle" ? "ttl" : "json"}`);
        if (status === 200)
            return { ok: true, text };
        return { ok: false, status, body: parseErrorBody(text) };
    }
    /** The whole-report graph (component records plus composed nodes). */
    async fetchReportGraph(classmark, format, tier, version) {
        const params = new URLSearchParams({ classmark, format: format === "turtle" ? "ttl" : "json" });
        if (tier)
            params.set("tier", tier);
        if (version)
            params.set("version", version);
        const { status, text } = await this.request(`/lookup?${params}`);
        if (status === 200)
            return { ok: true, text };
        return { ok: false, status, body: parseErrorBody(text) };
    }
}
function parseErrorBody(text) {
    try {
        return JSON.parse(text);
    }
    catch {
        return { error: text || "request failed" };
    }
}
