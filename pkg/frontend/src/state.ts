/** Session state for the verification flow: one classmark under inspection,
 * a component selection for RDF generation, and sequence numbers so stale
 * responses (from superseded submissions) are discarded. No persistence:
 * the API key lives only in memory for the session. */

import type { ComponentDoc, ReportDoc } from "./api.js";

export type Tier = "summary" | "abridged" | "full";
export type RdfFormat = "turtle" | "json";

export class UiSession {
  input = "";
  tier: Tier = "summary";
  version: string | null = null;
  format: RdfFormat = "turtle";
  report: ReportDoc | null = null;
  /** Indexes into report.components; always a subset of the live report. */
  readonly selection = new Set<number>();

  private submitSeq = 0;
  private panelSeq = 0;

  setInput(text: string): void {
    this.input = text;
    if (text.trim() === "") {
      this.selection.clear();
      this.report = null;
    }
  }

  /** Start a submission; the returned token validates the response. */
  beginSubmit(): number {
    return ++this.submitSeq;
  }

  /** Adopt a report if it answers the latest submission. A new report
   * invalidates the previous selection. */
  applyReport(token: number, report: ReportDoc): boolean {
    if (token !== this.submitSeq) return false;
    this.report = report;
    this.selection.clear();
    return true;
  }

  /** Drop state for a failed submission (parse error, denial, network). */
  applyFailure(token: number): boolean {
    if (token !== this.submitSeq) return false;
    this.report = null;
    this.selection.clear();
    return true;
  }

  beginPanel(): number {
    return ++this.panelSeq;
  }

  panelCurrent(token: number): boolean {
    return token === this.panelSeq;
  }

  toggleSelect(index: number): void {
    if (!this.report) return;
    if (index < 0 || index >= this.report.components.length) return;
    if (this.selection.has(index)) {
      this.selection.delete(index);
    } else {
      this.selection.add(index);
    }
  }

  selectAll(): void {
    if (!this.report) return;
    this.report.components.forEach((_, i) => this.selection.add(i));
  }

  selectedComponents(): ComponentDoc[] {
    if (!this.report) return [];
    return [...this.selection].sort((a, b) => a - b)
      .map((i) => this.report!.components[i]);
  }

  /** Replacement notation to load when following a deprecation redirect;
   * null when the component is not deprecated or was withdrawn. With a
   * fan-out the caller must pick one target first. */
  redirectTarget(component: ComponentDoc, choice = 0): string | null {
    if (component.status !== "deprecated") return null;
    const target = component.replaced_by[choice];
    if (!target) return null;
    return decodeNotationFromUri(target);
  }
}

/** Last path segment of a concept URI, percent-decoded back to a notation. */
export function decodeNotationFromUri(uri: string): string {
  const segment = uri.slice(uri.lastIndexOf("/") + 1);
  return decodeURIComponent(segment);
}
