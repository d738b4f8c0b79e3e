/** End-to-end flow against the real service on the shipped sample data:
 * spawn the Python process, then drive the documented endpoints through the
 * client exactly as the page does. */
import assert from "node:assert/strict";
import { spawn } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";
import { after, before, test } from "node:test";
import { ApiClient } from "../src/api.js";
import { renderComponents } from "../src/render.js";
import { UiSession } from "../src/state.js";
// compiled tests run from frontend/out/tests/, three levels under the repo
const REPO_ROOT = resolve(import.meta.dirname, "..", "..", "..");
let proc;
let origin;
function freePort() {
    return new Promise((resolvePort, reject) => {
        const server = createServer();
        server.on("error", reject);
        server.listen(0, "127.0.0.1", () => {
            const address = server.address();
            if (address === null || typeof address === "string") {
                reject(new Error("no port"));
                return;
            }
            server.close(() => resolvePort(address.port));
        });
    });
}
before(async () => {
    const port = await freePort();
    origin = `http://127.0.0.1:${port}`;
    const dir = mkdtempSync(join(tmpdir(), "webui-test-"));
    const config = join(dir, "config.json");
    writeFileSync(config, JSON.stringify({
        base_uri: origin,
        host: "127.0.0.1",
        port,
        keys: { "full-key": "full" },
        snapshot: join(REPO_ROOT, "sample"),
    }));
    proc = spawn("python3", ["-m", "classmarks.cli", "serve", config], { cwd: REPO_ROOT, stdio: ["ignore", "pipe", "pipe"] });
    await new Promise((resolveReady, reject) => {
        const timer = setTimeout(() => reject(new Error("service not ready")), 20000);
        proc.stderr.on("data", (chunk) => {
            if (chunk.toString().includes("ready:")) {
                clearTimeout(timer);
                resolveReady();
            }
        });
        proc.on("exit", (code) => reject(new Error(`service exited: ${code}`)));
    });
});
after(() => {
    proc.kill("SIGTERM");
});
test("licensed session: deprecated component is flagged and linked", async () => {
    const api = new ApiClient(origin);
    api.apiKey = "full-key";
    const session = new UiSession();
    session.setInput("681.3(035)");
    session.tier = "full";
    const token = session.beginSubmit();
    const result = await api.lookup(session.input, session.tier);
    assert.ok(result.ok);
    if (!result.ok)
        return;
    assert.ok(session.applyReport(token, result.report));
    assert.equal(result.report.components.length, 2);
    const [first, second] = result.report.components;
    assert.equal(first.status, "deprecated");
    assert.equal(first.uri, `${origin}/MRF93/681.3`);
    assert.deepEqual(first.replaced_by, [`${origin}/MRF98/004`]);
    assert.equal(second.status, "valid");
    const html = renderComponents(result.report, session.selection);
    assert.match(html, /<b><u>681\.3<\/u><\/b>/);
    assert.match(html, /data-follow="0"/);
});
test("following the redirect loads the replacement report", async () => {
    const api = new ApiClient(origin);
    api.apiKey = "full-key";
    const session = new UiSession();
    session.setInput("681.3");
    session.tier = "full";
    let result = await api.lookup("681.3", "full");
    assert.ok(result.ok);
    if (!result.ok)
        return;
    session.applyReport(session.beginSubmit(), result.report);
    const target = session.redirectTarget(result.report.components[0]);
    assert.equal(target, "004");
    session.setInput(target);
    const token = session.beginSubmit();
    result = await api.lookup(target, "full");
    assert.ok(result.ok);
    if (!result.ok)
        return;
    session.applyReport(token, result.report);
    assert.equal(result.report.components[0].status, "valid");
    assert.equal(result.report.components[0].notation, "004");
});
test("selecting both components yields Turtle with the composed node", async () => {
    const api = new ApiClient(origin);
    api.apiKey = "full-key";
    const session = new UiSession();
    session.setInput("681.3(035)");
    const result = await api.lookup("681.3(035)", "full");
    assert.ok(result.ok);
    if (!result.ok)
        return;
    session.applyReport(session.beginSubmit(), result.report);
    session.selectAll();
    const chunks = [];
    for (const component of session.selectedComponents()) {
        const fetched = await api.fetchConcept(component.uri, "turtle");
        assert.ok(fetched.ok);
        if (fetched.ok)
            chunks.push(fetched.text);
    }
    const composed = await api.fetchReportGraph(result.report.classmark.normalized, "turtle", "full");
    assert.ok(composed.ok);
    if (composed.ok)
        chunks.push(composed.text);
    const joined = chunks.join("\n");
    assert.match(joined, /skos:notation "681\.3"/);
    assert.match(joined, /skos:notation "\(035\)"/);
    assert.match(joined, /udc:operator "attachment"/);
    assert.match(joined, /nonAuthoritative "true"/);
    assert.ok(joined.includes("/composed/681.3%28035%29"));
});
test("keyless session completes the whole flow on an open classmark", async () => {
    const api = new ApiClient(origin); // no key at all
    const session = new UiSession();
    session.setInput("=162.3");
    const result = await api.lookup("=162.3");
    assert.ok(result.ok);
    if (!result.ok)
        return;
    session.applyReport(session.beginSubmit(), result.report);
    const component = result.report.components[0];
    assert.equal(component.status, "valid");
    assert.equal(component.uri, `${origin}/MRF93/%3D162.3`);
    session.toggleSelect(0);
    const fetched = await api.fetchConcept(component.uri, "turtle");
    assert.ok(fetched.ok);
    if (fetched.ok) {
        assert.match(fetched.text, /skos:notation "=162\.3"/);
        assert.match(fetched.text, /"Czech language"@en/);
    }
    const asJson = await api.fetchConcept(component.uri, "json");
    assert.ok(asJson.ok);
    if (asJson.ok) {
        const doc = JSON.parse(asJson.text);
        assert.ok(Object.keys(doc).includes(`${origin}/MRF93/%3D162.3`));
    }
});
test("parse errors carry the caret position through the API", async () => {
    const api = new ApiClient(origin);
    const result = await api.lookup("68.13");
    assert.equal(result.ok, false);
    if (!result.ok) {
        assert.equal(result.status, 400);
        assert.equal(result.body.position, 2);
    }
});
test("keyless dereference of licensed content returns the sparse denial", async () => {
    const api = new ApiClient(origin);
    const result = await api.fetchConcept(`${origin}/MRF93/621.039`, "turtle");
    assert.equal(result.ok, false);
    if (!result.ok) {
        assert.equal(result.status, 403);
        assert.equal(result.body.open_superclass?.notation, "621");
    }
});
