/**
 * Pure view-model and HTML builders for the explanation panel.
 *
 * Everything here derives exclusively from the loaded documents; nothing
 * recomputes aggregation. Inline-highlight mapping is best-effort: only
 * features with a line-level reading of the open file get decorations,
 * everything else stays panel-only.
 */

import { PanelState, ViewMode } from "./state";
import {
    AggregationDocument,
    ExplanationDocument,
    SIGN_GLYPHS,
    glyphForWeight,
} from "./types";

export interface AggregatedRow {
    rank: number;
    feature: string;
    glyph: string;
    meanWeight: number;
    support: number;
    explainerCount: number;
    /** 0..100, |mean weight| relative to the largest entry */
    barPercent: number;
}

export function aggregatedRows(
    aggregation: AggregationDocument,
    document: ExplanationDocument | null,
): AggregatedRow[] {
    const explainerCount = document?.explanations.length ?? 0;
    const maxMagnitude = Math.max(...aggregation.features.map((f) => Math.abs(f.mean_weight)), 0);
    return aggregation.features.map((entry) => ({
        rank: entry.consensus_rank,
        feature: entry.feature,
        glyph: SIGN_GLYPHS[entry.sign],
        meanWeight: entry.mean_weight,
        support: entry.support,
        explainerCount,
        barPercent:
            maxMagnitude > 0 ? Math.round((Math.abs(entry.mean_weight) / maxMagnitude) * 100) : 0,
    }));
}

export interface ExplainerColumn {
    explainer: string;
    rows: Array<{ rank: number; feature: string; glyph: string; weight: number }>;
}

export function explainerColumns(document: ExplanationDocument): ExplainerColumn[] {
    return document.explanations.map((explanation) => ({
        explainer: explanation.explainer,
        rows: explanation.attributions.map((attribution, index) => ({
            rank: index + 1,
            feature: attribution.feature,
            glyph: glyphForWeight(attribution.weight),
            weight: attribution.weight,
        })),
    }));
}

/** Sign-consistency tooltip, e.g. `signs: +, -, + (majority positive, 2/3 support)`. */
export function tooltipFor(
    document: ExplanationDocument,
    aggregation: AggregationDocument | null,
    feature: string,
): string {
    const glyphs = document.explanations.map((explanation) => {
        const hit = explanation.attributions.find((a) => a.feature === feature);
        return hit ? glyphForWeight(hit.weight) : "0";
    });
    const total = glyphs.length;
    const aggregated = aggregation?.features.find((f) => f.feature === feature);
    let verdict: string;
    if (aggregated) {
        const word = aggregated.sign;
        verdict =
            aggregated.support === total
                ? `unanimous ${word}, ${aggregated.support}/${total} support`
                : `majority ${word}, ${aggregated.support}/${total} support`;
    } else {
        const counts = new Map<string, number>();
        for (const glyph of glyphs) {
            counts.set(glyph, (counts.get(glyph) ?? 0) + 1);
        }
        const [topGlyph, topCount] = [...counts.entries()].sort((a, b) => b[1] - a[1])[0];
        const names: Record<string, string> = { "+": "positive", "-": "negative", "0": "neutral" };
        verdict =
            topCount * 2 > total
                ? `majority ${names[topGlyph]}, ${topCount}/${total} support`
                : "no majority";
    }
    return `signs: ${glyphs.join(", ")} (${verdict})`;
}

export interface HighlightPlan {
    decorations: Array<{ feature: string; lines: number[] }>;
    panelOnly: string[];
}

interface LineMatcher {
    pattern: RegExp;
    lines: (fileLines: string[], changedLines?: number[]) => number[];
}

// Extensible feature-to-line mapping table; 0-based line numbers.
const LINE_MATCHERS: LineMatcher[] = [
    {
        pattern: /^(Added_lines|Del_lines|ADD_LINE|DEL_LINE)$/i,
        lines: (_file, changedLines) => changedLines ?? [],
    },
    {
        pattern: /^CountDeclMethod/i,
        lines: (file) =>
            collectLines(file, (line) =>
                /\b(def |function |fn |void |public |private |protected )\w*\s*\(/.test(line),
            ),
    },
    {
        pattern: /^CountLineBlank/i,
        lines: (file) => collectLines(file, (line) => line.trim().length === 0),
    },
    {
        pattern: /^CountSemicolon/i,
        lines: (file) => collectLines(file, (line) => line.includes(";")),
    },
    {
        pattern: /^CountPath/i,
        lines: (file) =>
            collectLines(file, (line) => /\b(if|else|for|while|case|catch)\b/.test(line)),
    },
];

function collectLines(fileLines: string[], predicate: (line: string) => boolean): number[] {
    const hits: number[] = [];
    fileLines.forEach((line, index) => {
        if (predicate(line)) {
            hits.push(index);
        }
    });
    return hits;
}

export function highlightPlan(
    aggregation: AggregationDocument | null,
    fileText: string,
    changedLines?: number[],
): HighlightPlan {
    if (!aggregation || aggregation.features.length === 0) {
        return { decorations: [], panelOnly: [] };
    }
    const fileLines = fileText.split(/\r?\n/);
    const decorations: HighlightPlan["decorations"] = [];
    const panelOnly: string[] = [];
    for (const entry of aggregation.features) {
        const matcher = LINE_MATCHERS.find((m) => m.pattern.test(entry.feature));
        const lines = matcher ? matcher.lines(fileLines, changedLines) : [];
        if (lines.length > 0) {
            decorations.push({ feature: entry.feature, lines });
        } else {
            panelOnly.push(entry.feature);
        }
    }
    return { decorations, panelOnly };
}

const MODE_LABELS: Record<ViewMode, string> = {
    aggregated: "Aggregated",
    "per-explainer": "Per explainer",
    "side-by-side": "Side by side",
};

function escapeHtml(text: string): string {
    return text
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;");
}

function aggregatedListHtml(state: PanelState): string {
    if (!state.aggregation) {
        return `<p class="empty">No aggregation yet.</p>`;
    }
    const rows = aggregatedRows(state.aggregation, state.document);
    if (rows.length === 0) {
        return `<p class="empty">No feature survived the consistency stages for this instance.</p>`;
    }
    const items = rows
        .map((row) => {
            const tooltip = state.document
                ? escapeHtml(tooltipFor(state.document, state.aggregation, row.feature))
                : "";
            return (
                `<li class="feature" data-feature="${escapeHtml(row.feature)}" title="${tooltip}">` +
                `<span class="rank">${row.rank}.</span> ` +
                `<span class="name">${escapeHtml(row.feature)}</span> ` +
                `<span class="sign">(${row.glyph})</span> ` +
                `<span class="support">${row.support}/${row.explainerCount}</span>` +
                `<div class="bar" style="width:${row.barPercent}%"></div>` +
                `</li>`
            );
        })
        .join("\n");
    return `<ol class="aggregated">\n${items}\n</ol>`;
}

function explainerColumnsHtml(document: ExplanationDocument): string {
    return document.explanations
        .map((explanation) => {
            const rows = explanation.attributions
                .map(
                    (a, index) =>
                        `<li>${index + 1}. ${escapeHtml(a.feature)} (${glyphForWeight(a.weight)}) ` +
                        `<span class="weight">${a.weight.toFixed(4)}</span></li>`,
                )
                .join("");
            return (
                `<div class="column"><h3>${escapeHtml(explanation.explainer)}</h3>` +
                `<ol>${rows}</ol></div>`
            );
        })
        .join("\n");
}

function traceHtml(aggregation: AggregationDocument): string {
    const trace = aggregation.trace;
    if (!trace) {
        return "";
    }
    const ranked = (entries: Array<{ feature: string; rank: number }>) =>
        entries.map((e) => `${escapeHtml(e.feature)}@${e.rank}`).join(" ") || "(none)";
    return (
        `<details class="trace"><summary>Stage trace (k=${trace.k_used})</summary><dl>` +
        `<dt>strict rank</dt><dd>${ranked(trace.strict_rank_set)}</dd>` +
        `<dt>blacklist</dt><dd>${trace.blacklist.map(escapeHtml).join(" ") || "(empty)"}</dd>` +
        `<dt>loose rank</dt><dd>${ranked(trace.loose_rank_set)}</dd>` +
        `<dt>strict sign</dt><dd>${trace.strict_sign_set.map(escapeHtml).join(" ") || "(none)"}</dd>` +
        `<dt>loose sign</dt><dd>${trace.loose_sign_set.map(escapeHtml).join(" ") || "(none)"}</dd>` +
        `<dt>modes used</dt><dd>${trace.modes_used.join(", ") || "(strict only)"}</dd>` +
        `</dl></details>`
    );
}

export interface RenderOptions {
    showTrace?: boolean;
}

export function renderHtml(state: PanelState, options: RenderOptions = {}): string {
    let body: string;
    if (state.engine.kind === "missing") {
        body = `<div class="banner error"><strong>Engine unavailable.</strong> ${escapeHtml(state.engine.guidance)}</div>`;
    } else if (state.engine.kind === "error") {
        body = `<div class="banner error"><strong>Engine error.</strong> <pre>${escapeHtml(state.engine.message)}</pre></div>`;
    } else if (!state.document) {
        body = `<p class="empty">Open an explanation document (.xm) to see the unified view.</p>`;
    } else {
        const header =
            `<header><span class="instance">${escapeHtml(state.document.instance_id)}</span>` +
            (state.document.prediction?.label
                ? ` <span class="label">${escapeHtml(state.document.prediction.label)}</span>`
                : "") +
            (typeof state.document.prediction?.score === "number"
                ? ` <span class="score">${state.document.prediction.score.toFixed(3)}</span>`
                : "") +
            `</header>`;
        const toggle =
            `<button id="toggle" data-mode="${state.viewMode}">` +
            `View: ${MODE_LABELS[state.viewMode]}</button>`;
        let view: string;
        if (state.viewMode === "aggregated") {
            view = aggregatedListHtml(state);
        } else if (state.viewMode === "per-explainer") {
            view = `<div class="columns">${explainerColumnsHtml(state.document)}</div>`;
        } else {
            view =
                `<div class="columns side-by-side"><div class="column"><h3>Aggregated</h3>` +
                aggregatedListHtml(state) +
                `</div>${explainerColumnsHtml(state.document)}</div>`;
        }
        const trace =
            options.showTrace && state.aggregation ? traceHtml(state.aggregation) : "";
        const working = state.engine.kind === "working" ? `<div class="banner">Refreshing…</div>` : "";
        body = [header, toggle, working, view, trace].filter(Boolean).join("\n");
    }
    return `<!DOCTYPE html>
<html>
<head>
<meta charset="UTF-8">
<style>
body { font-family: var(--vscode-font-family, sans-serif); padding: 0.5em; }
ol.aggregated { list-style: none; padding: 0; }
li.feature { position: relative; margin: 0.3em 0; padding: 0.2em 0.3em; }
li.feature .bar { height: 3px; background: var(--vscode-charts-blue, #4a90d9); }
.banner.error { color: var(--vscode-errorForeground, #c00); }
.columns { display: flex; gap: 1em; }
.weight { opacity: 0.7; font-size: 0.9em; }
</style>
</head>
<body>
${body}
<script>
const vscode = typeof acquireVsCodeApi === "function" ? acquireVsCodeApi() : null;
const toggle = document.getElementById("toggle");
if (toggle && vscode) {
    toggle.addEventListener("click", () => vscode.postMessage({ type: "cycle-view-mode" }));
}
for (const item of document.querySelectorAll("li.feature")) {
    item.addEventListener("mouseenter", () =>
        vscode && vscode.postMessage({ type: "select-feature", feature: item.dataset.feature }));
}
</script>
</body>
</html>`;
}
