import assert from "node:assert/strict";
import { test } from "node:test";
import { ApiClient, uriToPath } from "../src/api.js";
function recordingFetch(status = 200, body = "{}") {
    const calls = [];
    const fetchFn = async (url, init) => {
        calls.push({ url, headers: init?.headers ?? {} });
        return { status, text: async () => body };
    };
    return { calls, fetchFn };
}
test("uriToPath keeps only path and query", () => {
    assert.equal(uriToPath("https://udcdata.info/MRF93/%3D162.3"), "/MRF93/%3D162.3");
    assert.equal(uriToPath("http://127.0.0.1:8080/MRF98/004"), "/MRF98/004");
    assert.equal(uriToPath("https://udcdata.info"), "/");
});
test("lookup requests the documented endpoint with format=json", async () => {
    const { calls, fetchFn } = recordingFetch(200, JSON.stringify({ components: [] }));
    const client = new ApiClient("http://svc", fetchFn);
    await client.lookup("681.3(035)", "full");
    assert.equal(calls.length, 1);
    const url = new URL(calls[0].url);
    assert.equal(url.origin + url.pathname, "http://svc/lookup");
    assert.equal(url.searchParams.get("classmark"), "681.3(035)");
    assert.equal(url.searchParams.get("format"), "json");
    assert.equal(url.searchParams.get("tier"), "full");
});
test("api key travels as a bearer header, only when set", async () => {
    const { calls, fetchFn } = recordingFetch();
    const client = new ApiClient("http://svc", fetchFn);
    await client.lookup("5");
    assert.deepEqual(calls[0].headers, {});
    client.apiKey = "sesame";
    await client.lookup("5");
    assert.equal(calls[1].headers.Authorization, "Bearer sesame");
});
test("fetchConcept dereferences the minted URI path with format=ttl", async () => {
    const { calls, fetchFn } = recordingFetch(200, "@prefix …");
    const client = new ApiClient("http://svc", fetchFn);
    await client.fetchConcept("https://udcdata.info/MRF93/%3D162.3", "turtle");
    assert.equal(calls[0].url, "http://svc/MRF93/%3D162.3?format=ttl");
});
test("fetchConcept json variant", async () => {
    const { calls, fetchFn } = recordingFetch();
    const client = new ApiClient("http://svc", fetchFn);
    await client.fetchConcept("https://udcdata.info/MRF98/004", "json");
    assert.equal(calls[0].url, "http://svc/MRF98/004?format=json");
});
test("fetchReportGraph asks /lookup for the composed rendering", async () => {
    const { calls, fetchFn } = recordingFetch(200, "@prefix …");
    const client = new ApiClient("http://svc", fetchFn);
    await client.fetchReportGraph("681.3(035)", "turtle", "full");
    const url = new URL(calls[0].url);
    assert.equal(url.pathname, "/lookup");
    assert.equal(url.searchParams.get("format"), "ttl");
});
test("error bodies are surfaced with status", async () => {
    const sparse = JSON.stringify({
        error: "denied", notation: "621.039", required_tier: "full",
        open_superclass: { notation: "621", uri: "https://udcdata.info/MRF93/621" },
    });
    const { fetchFn } = recordingFetch(403, sparse);
    const client = new ApiClient("http://svc", fetchFn);
    const result = await client.fetchConcept("https://udcdata.info/MRF93/621.039", "turtle");
    assert.equal(result.ok, false);
    if (!result.ok) {
        assert.equal(result.status, 403);
        assert.equal(result.body.open_superclass?.notation, "621");
    }
});
test("non-json error bodies degrade to plain text", async () => {
    const { fetchFn } = recordingFetch(502, "bad gateway");
    const client = new ApiClient("http://svc", fetchFn);
    const result = await client.lookup("5");
    assert.equal(result.ok, false);
    if (!result.ok)
        assert.equal(result.body.error, "bad gateway");
});
