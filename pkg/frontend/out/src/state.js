/** Session state for the verification flow: one classmark under inspection,
 * a component selection for RDF generation, and sequence numbers so stale
 * responses (from superseded submissions) are discarded. No persistence:
 * the API key lives only in memory for the session. */
export class UiSession {
    input = "";
    tier = "summary";
    version = null;
    format = "turtle";
    report = null;
    /** Indexes into report.components; always a subset of the live report. */
    selection = new Set();
    submitSeq = 0;
    panelSeq = 0;
    setInput(text) {
        this.input = text;
        if (text.trim() === "") {
            this.selection.clear();
            this.report = null;
        }
    }
    /** Start a submission; the returned token validates the response. */
    beginSubmit() {
        return ++this.submitSeq;
    }
    /** Adopt a report if it answers the latest submission. A new report
     * invalidates the previous selection. */
    applyReport(token, report) {
        if (token !== this.submitSeq)
            return false;
        this.report = report;
        this.selection.clear();
        return true;
    }
    /** Drop state for a failed submission (parse error, denial, network). */
    applyFailure(token) {
        if (token !== this.submitSeq)
            return false;
        this.report = null;
        this.selection.clear();
        return true;
    }
    beginPanel() {
        return ++this.panelSeq;
    }
    panelCurrent(token) {
        return token === this.panelSeq;
    }
    toggleSelect(index) {
        if (!this.report)
            return;
        if (index < 0 || index >= this.report.components.length)
            return;
        if (this.selection.has(index)) {
            this.selection.delete(index);
        }
        else {
            this.selection.add(index);
        }
    }
    selectAll() {
        if (!this.report)
            return;
        this.report.components.forEach((_, i) => this.selection.add(i));
    }
    selectedComponents() {
        if (!this.report)
            return [];
        return [...this.selection].sort((a, b) => a - b)
            .map((i) => this.report.components[i]);
    }
    /** Replacement notation to load when following a deprecation redirect;
     * null when the component is not deprecated or was withdrawn. With a
     * fan-out the caller must pick one target first. */
    redirectTarget(component, choice = 0) {
        if (component.status !== "deprecated")
            return null;
        const target = component.replaced_by[choice];
        if (!target)
            return null;
        return decodeNotationFromUri(target);
    }
}
/** Last path segment of a concept URI, percent-decoded back to a notation. */
export function decodeNotationFromUri(uri) {
    const segment = uri.slice(uri.lastIndexOf("/") + 1);
    return decodeURIComponent(segment);
}
