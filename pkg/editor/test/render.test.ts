import { describe, expect, it } from "vitest";

import { aggregatedRows, explainerColumns, highlightPlan, renderHtml, tooltipFor } from "../src/render";
import { INITIAL_STATE, withDocuments, withEngineStatus, withViewMode } from "../src/state";
import { GOLDEN_AGGREGATION, GOLDEN_DOCUMENT } from "./fixtures";

const LOADED = withDocuments(INITIAL_STATE, GOLDEN_DOCUMENT, GOLDEN_AGGREGATION);

describe("aggregated view model", () => {
    it("keeps the engine's order and ranks", () => {
        const rows = aggregatedRows(GOLDEN_AGGREGATION, GOLDEN_DOCUMENT);
        expect(rows.map((r) => r.feature)).toEqual(["F1", "F3", "F2", "F5", "F6"]);
        expect(rows.map((r) => r.rank)).toEqual([1, 2, 3, 4, 5]);
        expect(rows.map((r) => r.glyph)).toEqual(["+", "+", "-", "-", "0"]);
    });

    it("normalizes bar lengths against the largest magnitude", () => {
        const rows = aggregatedRows(GOLDEN_AGGREGATION, GOLDEN_DOCUMENT);
        expect(rows[0].barPercent).toBe(100);
        for (const row of rows) {
            expect(row.barPercent).toBeGreaterThanOrEqual(0);
            expect(row.barPercent).toBeLessThanOrEqual(100);
        }
        expect(rows[4].barPercent).toBeLessThan(rows[0].barPercent);
    });

    it("per-explainer columns mirror the document", () => {
        const columns = explainerColumns(GOLDEN_DOCUMENT);
        expect(columns.map((c) => c.explainer)).toEqual(["LIME", "SHAP", "BreakDown"]);
        expect(columns[1].rows[0]).toMatchObject({ rank: 1, feature: "F1", glyph: "+" });
        expect(columns[0].rows[1]).toMatchObject({ rank: 2, feature: "F2", glyph: "-" });
    });
});

describe("tooltips", () => {
    it("shows the per-explainer sign profile with majority and support", () => {
        expect(tooltipFor(GOLDEN_DOCUMENT, GOLDEN_AGGREGATION, "F3")).toBe(
            "signs: +, -, + (majority positive, 2/3 support)",
        );
    });

    it("marks unanimous features", () => {
        expect(tooltipFor(GOLDEN_DOCUMENT, GOLDEN_AGGREGATION, "F1")).toBe(
            "signs: +, +, + (unanimous positive, 3/3 support)",
        );
    });

    it("treats a missing feature as neutral and reports no majority", () => {
        expect(tooltipFor(GOLDEN_DOCUMENT, GOLDEN_AGGREGATION, "F4")).toBe(
            "signs: +, 0, - (no majority)",
        );
    });
});

describe("inline highlight mapping", () => {
    const file = [
        "public void compute() {",
        "",
        "    int total = 0;",
        "    if (total > 0) { total += 1; }",
        "}",
    ].join("\n");

    it("maps declaration-count features to declaration lines", () => {
        const aggregation = {
            ...GOLDEN_AGGREGATION,
            features: [
                { feature: "CountDeclMethod", consensus_rank: 1, sign: "positive" as const, mean_weight: 0.5, support: 3 },
            ],
        };
        const plan = highlightPlan(aggregation, file);
        expect(plan.decorations).toEqual([{ feature: "CountDeclMethod", lines: [0] }]);
        expect(plan.panelOnly).toEqual([]);
    });

    it("maps changed-line features only when a diff is available", () => {
        const aggregation = {
            ...GOLDEN_AGGREGATION,
            features: [
                { feature: "Added_lines", consensus_rank: 1, sign: "positive" as const, mean_weight: 0.5, support: 3 },
            ],
        };
        expect(highlightPlan(aggregation, file).panelOnly).toEqual(["Added_lines"]);
        expect(highlightPlan(aggregation, file, [2, 3]).decorations).toEqual([
            { feature: "Added_lines", lines: [2, 3] },
        ]);
    });

    it("keeps abstract features panel-only", () => {
        const aggregation = {
            ...GOLDEN_AGGREGATION,
            features: [
                { feature: "OWN_LINE", consensus_rank: 1, sign: "negative" as const, mean_weight: -0.5, support: 3 },
            ],
        };
        const plan = highlightPlan(aggregation, file);
        expect(plan.decorations).toEqual([]);
        expect(plan.panelOnly).toEqual(["OWN_LINE"]);
    });

    it("empty aggregation produces no decorations", () => {
        const plan = highlightPlan({ ...GOLDEN_AGGREGATION, features: [] }, file);
        expect(plan).toEqual({ decorations: [], panelOnly: [] });
    });
});

describe("html rendering", () => {
    it("renders the aggregated order", () => {
        const html = renderHtml(LOADED);
        const positions = ["F1", "F3", "F2", "F5", "F6"].map((f) =>
            html.indexOf(`<span class="name">${f}</span>`),
        );
        expect(positions.every((p) => p >= 0)).toBe(true);
        expect([...positions].sort((a, b) => a - b)).toEqual(positions);
    });

    it("side-by-side shows aggregated plus one column per explainer", () => {
        const html = renderHtml(withViewMode(LOADED, "side-by-side"));
        expect(html).toContain("Aggregated");
        expect(html).toContain("LIME");
        expect(html).toContain("SHAP");
        expect(html).toContain("BreakDown");
    });

    it("engine-missing state shows setup guidance", () => {
        const state = withEngineStatus(LOADED, {
            kind: "missing",
            guidance: "Install it with pip install xmentor.",
        });
        const html = renderHtml(state);
        expect(html).toContain("Engine unavailable");
        expect(html).toContain("pip install xmentor");
        expect(html).not.toContain('<span class="name">F1</span>');
    });

    it("trace section appears only when requested", () => {
        expect(renderHtml(LOADED)).not.toContain("Stage trace");
        const withTrace = renderHtml(LOADED, { showTrace: true });
        expect(withTrace).toContain("Stage trace (k=5)");
        expect(withTrace).toContain("F5@4");
    });

    it("escapes markup in document fields", () => {
        const sneaky = {
            ...GOLDEN_DOCUMENT,
            instance_id: '<img src=x onerror="alert(1)">',
        };
        const html = renderHtml(withDocuments(INITIAL_STATE, sneaky, GOLDEN_AGGREGATION));
        expect(html).not.toContain('<img src=x');
        expect(html).toContain("&lt;img");
    });
});
