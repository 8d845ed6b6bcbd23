"use strict";
/**
 * Panel state and its pure transitions.
 *
 * View-mode changes and selections never mutate the loaded documents;
 * every transition returns a fresh state value, so a stale async engine
 * reply can simply be dropped without touching what is on screen.
 */
Object.defineProperty(exports, "__esModule", { value: true });
exports.INITIAL_STATE = exports.VIEW_MODE_ORDER = void 0;
exports.withDocuments = withDocuments;
exports.withViewMode = withViewMode;
exports.cycleViewMode = cycleViewMode;
exports.withSelectedFeature = withSelectedFeature;
exports.withEngineStatus = withEngineStatus;
exports.VIEW_MODE_ORDER = ["aggregated", "per-explainer", "side-by-side"];
exports.INITIAL_STATE = {
    document: null,
    aggregation: null,
    viewMode: "aggregated",
    selectedFeature: null,
    engine: { kind: "idle" },
};
function withDocuments(state, document, aggregation) {
    return { ...state, document, aggregation, selectedFeature: null, engine: { kind: "ready" } };
}
function withViewMode(state, viewMode) {
    return { ...state, viewMode };
}
function cycleViewMode(state) {
    const index = exports.VIEW_MODE_ORDER.indexOf(state.viewMode);
    const next = exports.VIEW_MODE_ORDER[(index + 1) % exports.VIEW_MODE_ORDER.length];
    return withViewMode(state, next);
}
function withSelectedFeature(state, feature) {
    return { ...state, selectedFeature: feature };
}
function withEngineStatus(state, engine) {
    if (engine.kind === "missing" || engine.kind === "error") {
        // a broken engine invalidates the aggregation but keeps the raw document
        return { ...state, aggregation: null, engine };
    }
    return { ...state, engine };
}
//# sourceMappingURL=state.js.map