"use strict";
/**
 * The "xmentor/1" interchange documents as TypeScript shapes.
 *
 * The panel never computes aggregation itself: every displayed number
 * originates from a machine document produced by the engine CLI.
 */
Object.defineProperty(exports, "__esModule", { value: true });
exports.SIGN_GLYPHS = void 0;
exports.glyphForWeight = glyphForWeight;
exports.isExplanationDocument = isExplanationDocument;
exports.isAggregationDocument = isAggregationDocument;
exports.SIGN_GLYPHS = {
    positive: "+",
    negative: "-",
    neutral: "0",
};
function glyphForWeight(weight, neutralEps = 0) {
    if (Math.abs(weight) <= neutralEps) {
        return "0";
    }
    return weight > 0 ? "+" : "-";
}
function isExplanationDocument(value) {
    const doc = value;
    return (!!doc &&
        typeof doc === "object" &&
        doc.schema_version === "xmentor/1" &&
        typeof doc.instance_id === "string" &&
        Array.isArray(doc.explanations));
}
function isAggregationDocument(value) {
    const doc = value;
    return (!!doc &&
        typeof doc === "object" &&
        doc.schema_version === "xmentor/1" &&
        typeof doc.instance_id === "string" &&
        Array.isArray(doc.features));
}
//# sourceMappingURL=types.js.map