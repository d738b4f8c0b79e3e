/** DOM wiring for the verification flow: submit a classmark, inspect the
 * parse with resolvable terms highlighted, follow deprecation redirects,
 * then select components and generate RDF. The API key is entered in the
 * settings drawer and kept only in memory. */

import { ApiClient } from "./api.js";
import {
  renderComponents, renderDenial, renderNetworkFailure, renderParseError,
  renderRdfPanel, renderSelectionPrompt, renderTree,
} from "./render.js";
import { UiSession, decodeNotationFromUri, type RdfFormat, type Tier } from "./state.js";

const api = new ApiClient("");
const session = new UiSession();

const $ = <T extends HTMLElement>(selector: string): T => {
  const el = document.querySelector(selector);
  if (!el) throw new Error(`missing element ${selector}`);
  return el as T;
};

const inputEl = $<HTMLInputElement>("#classmark");
const tierEl = $<HTMLSelectElement>("#tier");
const versionEl = $<HTMLInputElement>("#version");
const keyEl = $<HTMLInputElement>("#api-key");
const formatEl = $<HTMLSelectElement>("#rdf-format");
const parsePanel = $<HTMLElement>("#parse-panel");
const rdfPanel = $<HTMLElement>("#rdf-panel");

async function submit(pushHistory = true): Promise<void> {
  session.setInput(inputEl.value);
  session.tier = tierEl.value as Tier;
  session.version = versionEl.value.trim() || null;
  api.apiKey = keyEl.value.trim() || null;
  rdfPanel.innerHTML = "";
  if (!session.input.trim()) {
    parsePanel.innerHTML = "";
    return;
  }
  const token = session.beginSubmit();
  parsePanel.innerHTML = `<p class="loading">interpreting…</p>`;
  let result;
  try {
    result = await api.lookup(session.input, session.tier, session.version ?? undefined);
  } catch (err) {
    if (session.applyFailure(token)) {
      parsePanel.innerHTML = renderNetworkFailure(String(err));
    }
    return;
  }
  if (!result.ok) {
    if (!session.applyFailure(token)) return;  // superseded by a newer submit
    parsePanel.innerHTML = result.status === 400
      ? renderParseError(session.input, result.body)
      : renderDenial(result.body);
    return;
  }
  if (!session.applyReport(token, result.report)) return;
  if (pushHistory) {
    const state = { classmark: session.input, tier: session.tier };
    history.pushState(state, "", `#${encodeURIComponent(session.input)}`);
  }
  renderReport();
}

function renderReport(): void {
  if (!session.report) return;
  parsePanel.innerHTML =
    renderComponents(session.report, session.selection) +
    `<details class="tree"><summary>parse tree</summary>` +
    renderTree(session.report.tree) + `</details>` +
    `<p><button id="generate">generate RDF for selection</button></p>`;
}

async function generate(): Promise<void> {
  const selected = session.selectedComponents();
  if (selected.length === 0) {
    rdfPanel.innerHTML = renderSelectionPrompt();
    return;
  }
  session.format = formatEl.value as RdfFormat;
  const token = session.beginPanel();
  rdfPanel.innerHTML = `<p class="loading">generating…</p>`;
  const chunks: { title: string; text: string }[] = [];
  try {
    for (const component of selected) {
      if (!component.uri) continue;
      const result = await api.fetchConcept(component.uri, session.format);
      chunks.push({
        title: `${component.notation} — ${component.uri}`,
        text: result.ok ? result.text
          : `${result.body.error}` + (result.body.open_superclass
            ? `\nnearest open superclass: ${result.body.open_superclass.notation} ` +
              `<${result.body.open_superclass.uri}>\n(add an API key for the ` +
              `${result.body.required_tier ?? "licensed"} tier)`
            : ""),
      });
    }
    if (selected.length >= 2 && session.report) {
      const composed = await api.fetchReportGraph(
        session.report.classmark.normalized, session.format,
        session.tier, session.version ?? undefined);
      if (composed.ok) {
        chunks.push({
          title: session.report.composed_uri
            ? `composed expression — ${session.report.composed_uri}`
            : "composed expression",
          text: composed.text,
        });
      }
    }
  } catch (err) {
    if (session.panelCurrent(token)) rdfPanel.innerHTML = renderNetworkFailure(String(err));
    return;
  }
  if (!session.panelCurrent(token)) return;  // superseded
  rdfPanel.innerHTML = renderRdfPanel(chunks, session.format);
}

function followRedirect(componentKey: string, choice: number): void {
  const component = session.report?.components.find(
    (c) => `${c.span[0]}:${c.span[1]}` === componentKey);
  if (!component) return;
  const targetUri = component.replaced_by[choice];
  if (!targetUri) return;
  inputEl.value = decodeNotationFromUri(targetUri);
  void submit();
}

function wire(): void {
  $<HTMLButtonElement>("#submit").addEventListener("click", () => void submit());
  inputEl.addEventListener("keydown", (event) => {
    if (event.key === "Enter") void submit();
  });
  parsePanel.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.id === "generate") {
      void generate();
      return;
    }
    const follow = target.getAttribute("data-follow");
    if (follow !== null) {
      followRedirect(target.getAttribute("data-component") ?? "", Number(follow));
      return;
    }
    const select = target.getAttribute("data-select");
    if (select !== null) {
      session.toggleSelect(Number(select));
    }
  });
  rdfPanel.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    if (target.getAttribute("data-action") === "copy") {
      const text = [...rdfPanel.querySelectorAll("pre.rdf")]
        .map((pre) => pre.textContent ?? "").join("\n");
      void navigator.clipboard.writeText(text);
    }
  });
  window.addEventListener("popstate", (event) => {
    const state = event.state as { classmark?: string; tier?: Tier } | null;
    if (state?.classmark) {
      inputEl.value = state.classmark;
      if (state.tier) tierEl.value = state.tier;
      void submit(false);
    }
  });
  if (location.hash.length > 1) {
    inputEl.value = decodeURIComponent(location.hash.slice(1));
    void submit(false);
  }
}

wire();
