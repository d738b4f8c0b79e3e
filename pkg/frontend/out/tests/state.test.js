import assert from "node:assert/strict";
import { test } from "node:test";
import { UiSession, decodeNotationFromUri } from "../src/state.js";
function component(notation, status = "valid", replaced_by = []) {
    return {
        notation, kind: "main", status,
        resolvable: status === "valid" || status === "deprecated",
        span: [0, notation.length],
        uri: status === "unknown" ? null : `https://udcdata.info/MRF93/${notation}`,
        replaced_by, open_superclass: null,
    };
}
function report(...components) {
    return {
        classmark: { raw: "x", normalized: "x" },
        snapshot_version: "MRF11", tier: "summary",
        components, composed_uri: null,
        tree: { node: "main", text: "x" },
    };
}
test("clearing the input clears the selection and report", () => {
    const session = new UiSession();
    session.applyReport(session.beginSubmit(), report(component("5")));
    session.toggleSelect(0);
    assert.equal(session.selection.size, 1);
    session.setInput("");
    assert.equal(session.selection.size, 0);
    assert.equal(session.report, null);
});
test("selection stays within the live report's components", () => {
    const session = new UiSession();
    session.applyReport(session.beginSubmit(), report(component("5"), component("6")));
    session.toggleSelect(0);
    session.toggleSelect(5); // out of range: ignored
    session.toggleSelect(-1); // out of range: ignored
    assert.deepEqual([...session.selection], [0]);
});
test("a new report invalidates the previous selection", () => {
    const session = new UiSession();
    session.applyReport(session.beginSubmit(), report(component("5"), component("6")));
    session.selectAll();
    assert.equal(session.selection.size, 2);
    session.applyReport(session.beginSubmit(), report(component("7")));
    assert.equal(session.selection.size, 0);
});
test("stale submissions are discarded by sequence number", () => {
    const session = new UiSession();
    const stale = session.beginSubmit();
    const fresh = session.beginSubmit();
    assert.equal(session.applyReport(fresh, report(component("9"))), true);
    assert.equal(session.applyReport(stale, report(component("5"))), false);
    assert.equal(session.report.components[0].notation, "9");
    assert.equal(session.applyFailure(stale), false);
    assert.equal(session.report.components[0].notation, "9");
});
test("panel tokens supersede each other", () => {
    const session = new UiSession();
    const first = session.beginPanel();
    const second = session.beginPanel();
    assert.equal(session.panelCurrent(first), false);
    assert.equal(session.panelCurrent(second), true);
});
test("selected components come back in component order", () => {
    const session = new UiSession();
    session.applyReport(session.beginSubmit(), report(component("5"), component("6"), component("7")));
    session.toggleSelect(2);
    session.toggleSelect(0);
    assert.deepEqual(session.selectedComponents().map((c) => c.notation), ["5", "7"]);
});
test("redirect target decodes the replacement notation", () => {
    const session = new UiSession();
    const deprecated = component("681.3", "deprecated", ["https://udcdata.info/MRF98/004"]);
    assert.equal(session.redirectTarget(deprecated), "004");
    assert.equal(session.redirectTarget(component("5")), null);
});
test("withdrawn classes have no redirect target", () => {
    const session = new UiSession();
    const withdrawn = component("100", "deprecated", []);
    assert.equal(session.redirectTarget(withdrawn), null);
});
test("fan-out picks the chosen target", () => {
    const session = new UiSession();
    const fanout = component("100", "deprecated", [
        "https://udcdata.info/MRF98/200",
        "https://udcdata.info/MRF98/%3D162.3",
    ]);
    assert.equal(session.redirectTarget(fanout, 0), "200");
    assert.equal(session.redirectTarget(fanout, 1), "=162.3");
    assert.equal(session.redirectTarget(fanout, 2), null);
});
test("decodeNotationFromUri round-trips percent-encoding", () => {
    assert.equal(decodeNotationFromUri("https://udcdata.info/MRF93/%3D162.3"), "=162.3");
    assert.equal(decodeNotationFromUri("https://udcdata.info/MRF93/681.3%28035%29"), "681.3(035)");
});
