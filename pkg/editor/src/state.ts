/**
 * Panel state and its pure transitions.
 *
 * View-mode changes and selections never mutate the loaded documents;
 * every transition returns a fresh state value, so a stale async engine
 * reply can simply be dropped without touching what is on screen.
 */

import { AggregationDocument, ExplanationDocument } from "./types";

export type ViewMode = "aggregated" | "per-explainer" | "side-by-side";

export const VIEW_MODE_ORDER: ViewMode[] = ["aggregated", "per-explainer", "side-by-side"];

export type EngineStatus =
    | { kind: "idle" }
    | { kind: "working" }
    | { kind: "ready" }
    | { kind: "missing"; guidance: string }
    | { kind: "error"; message: string };

export interface PanelState {
    readonly document: ExplanationDocument | null;
    readonly aggregation: AggregationDocument | null;
    readonly viewMode: ViewMode;
    readonly selectedFeature: string | null;
    readonly engine: EngineStatus;
}

export const INITIAL_STATE: PanelState = {
    document: null,
    aggregation: null,
    viewMode: "aggregated",
    selectedFeature: null,
    engine: { kind: "idle" },
};

export function withDocuments(
    state: PanelState,
    document: ExplanationDocument,
    aggregation: AggregationDocument,
): PanelState {
    return { ...state, document, aggregation, selectedFeature: null, engine: { kind: "ready" } };
}

export function withViewMode(state: PanelState, viewMode: ViewMode): PanelState {
    return { ...state, viewMode };
}

export function cycleViewMode(state: PanelState): PanelState {
    const index = VIEW_MODE_ORDER.indexOf(state.viewMode);
    const next = VIEW_MODE_ORDER[(index + 1) % VIEW_MODE_ORDER.length];
    return withViewMode(state, next);
}

export function withSelectedFeature(state: PanelState, feature: string | null): PanelState {
    return { ...state, selectedFeature: feature };
}

export function withEngineStatus(state: PanelState, engine: EngineStatus): PanelState {
    if (engine.kind === "missing" || engine.kind === "error") {
        // a broken engine invalidates the aggregation but keeps the raw document
        return { ...state, aggregation: null, engine };
    }
    return { ...state, engine };
}
