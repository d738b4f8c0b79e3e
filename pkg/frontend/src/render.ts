/** HTML renderers for the two panels. Pure string-in, string-out so they run
 * under node tests; main.ts owns all DOM wiring. Resolvable primitive terms
 * are set in bold underline; the parse is shown as an indented component
 * list with connector badges rather than a graphical tree. */

import type { ComponentDoc, ErrorDoc, ReportDoc, TreeNode } from "./api.js";

export function escapeHtml(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;")
    .replace(/>/g, "&gt;").replace(/"/g, "&quot;");
}

export function renderComponents(report: ReportDoc, selection: Set<number>): string {
  const rows = report.components.map((c, i) => componentRow(c, i, selection.has(i)));
  const composed = report.composed_uri
    ? `<p class="composed">composed URI: <a href="${escapeHtml(report.composed_uri)}">` +
      `${escapeHtml(report.composed_uri)}</a></p>`
    : "";
  return `<p class="meta">snapshot ${escapeHtml(report.snapshot_version)}, ` +
    `tier ${escapeHtml(report.tier)}</p>` +
    `<ol class="components">${rows.join("")}</ol>${composed}`;
}

function componentRow(c: ComponentDoc, index: number, selected: boolean): string {
  const name = c.resolvable
    ? `<b><u>${escapeHtml(c.notation)}</u></b>`
    : escapeHtml(c.notation);
  const checkbox = `<input type="checkbox" data-select="${index}"` +
    `${selected ? " checked" : ""}${c.resolvable ? "" : " disabled"}>`;
  let detail = "";
  if (c.status === "deprecated") {
    detail = ` ${redirectDetail(c)}`;
  } else if (c.status === "tier-blocked") {
    detail = ` ${blockedDetail(c)}`;
  }
  const uri = c.uri
    ? ` <a class="uri" href="${escapeHtml(c.uri)}">${escapeHtml(c.uri)}</a>`
    : "";
  return `<li class="component status-${c.status}">${checkbox} ${name}` +
    ` <span class="badge">${escapeHtml(c.kind)}</span>` +
    ` <span class="status">${escapeHtml(c.status)}</span>${uri}${detail}</li>`;
}

function redirectDetail(c: ComponentDoc): string {
  if (c.replaced_by.length === 0) {
    return `<span class="withdrawn">withdrawn, no successor</span>`;
  }
  if (c.replaced_by.length === 1) {
    return `&rarr; <button data-follow="0" data-component="${componentKey(c)}">` +
      `${escapeHtml(c.replaced_by[0])}</button>`;
  }
  const options = c.replaced_by.map((uri, i) =>
    `<li><button data-follow="${i}" data-component="${componentKey(c)}">` +
    `${escapeHtml(uri)}</button></li>`).join("");
  return `<span class="fanout">replaced by ${c.replaced_by.length} classes:` +
    `<ul class="chooser">${options}</ul></span>`;
}

function blockedDetail(c: ComponentDoc): string {
  if (!c.open_superclass) {
    return `<span class="blocked">licensed content; no open superclass</span>`;
  }
  return `<span class="blocked">licensed content; nearest open superclass ` +
    `<a href="${escapeHtml(c.open_superclass.uri)}">` +
    `${escapeHtml(c.open_superclass.notation)}</a></span>`;
}

function componentKey(c: ComponentDoc): string {
  return escapeHtml(`${c.span[0]}:${c.span[1]}`);
}

const CONNECTOR_BADGES: Record<string, string> = {
  "coordination": "+",
  "range": "/",
  "relation": ":",
  "ordered-relation": "::",
  "attachment": "attach",
  "group": "[ ]",
};

export function renderTree(tree: TreeNode, depth = 0): string {
  const pad = depth * 16;
  if (tree.node === "main" || tree.node === "common-aux" || tree.node === "special-aux") {
    const kind = tree.kind ? `${tree.kind}-aux` : "main";
    return `<div class="tree-leaf" style="margin-left:${pad}px">` +
      `<code>${escapeHtml(tree.text ?? "")}</code> ` +
      `<span class="badge">${escapeHtml(kind)}</span></div>`;
  }
  const badge = CONNECTOR_BADGES[tree.node] ?? tree.node;
  const children = tree.node === "attachment"
    ? [tree.base!, ...(tree.auxiliaries ?? [])]
    : tree.members ?? [];
  return `<div class="tree-node" style="margin-left:${pad}px">` +
    `<span class="badge connector">${escapeHtml(badge)}</span></div>` +
    children.map((child) => renderTree(child, depth + 1)).join("");
}

/** Parse failure, caret under the offending character. */
export function renderParseError(input: string, body: ErrorDoc): string {
  const position = body.position ?? 0;
  const caret = " ".repeat(position) + "^";
  return `<p class="error">${escapeHtml(body.error)}</p>` +
    `<pre class="caret">${escapeHtml(input)}\n${caret}</pre>`;
}

export function renderDenial(body: ErrorDoc): string {
  const superclass = body.open_superclass
    ? ` Nearest open superclass: <a href="${escapeHtml(body.open_superclass.uri)}">` +
      `${escapeHtml(body.open_superclass.notation)}</a>.`
    : "";
  return `<p class="error denied">${escapeHtml(body.error)}.${superclass}` +
    ` <span class="hint">Add an API key in the settings drawer for licensed tiers.</span></p>`;
}

export function renderNetworkFailure(detail: string): string {
  return `<p class="error network">service unreachable: ${escapeHtml(detail)}</p>`;
}

export function renderSelectionPrompt(): string {
  return `<p class="prompt">Select at least one resolvable component to generate RDF.</p>`;
}

export function renderRdfPanel(chunks: { title: string; text: string }[],
                               format: "turtle" | "json"): string {
  const sections = chunks.map(({ title, text }) =>
    `<section><h3>${escapeHtml(title)}</h3>` +
    `<pre class="rdf ${format}">${escapeHtml(text)}</pre></section>`).join("");
  return `${sections}<button data-action="copy">copy</button>`;
}
