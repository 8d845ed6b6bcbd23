import { AggregationDocument, ExplanationDocument } from "../src/types";

/** The three-explainer/seven-feature document the engine's golden trace uses. */
export const GOLDEN_DOCUMENT: ExplanationDocument = {
    schema_version: "xmentor/1",
    instance_id: "golden-1",
    prediction: { label: "Defect", score: 0.83 },
    explanations: [
        {
            explainer: "LIME",
            attributions: [
                { feature: "F1", weight: 0.91 },
                { feature: "F2", weight: -0.82 },
                { feature: "F3", weight: 0.73 },
                { feature: "F5", weight: -0.64 },
                { feature: "F4", weight: 0.55 },
                { feature: "F6", weight: 0.0 },
                { feature: "F7", weight: 0.0 },
            ],
        },
        {
            explainer: "SHAP",
            attributions: [
                { feature: "F1", weight: 0.88 },
                { feature: "F3", weight: -0.77 },
                { feature: "F2", weight: 0.66 },
                { feature: "F6", weight: 0.55 },
                { feature: "F5", weight: -0.44 },
                { feature: "F7", weight: 0.0 },
                { feature: "F4", weight: 0.0 },
            ],
        },
        {
            explainer: "BreakDown",
            attributions: [
                { feature: "F1", weight: 0.95 },
                { feature: "F3", weight: 0.85 },
                { feature: "F2", weight: -0.75 },
                { feature: "F5", weight: -0.65 },
                { feature: "F4", weight: -0.55 },
                { feature: "F6", weight: 0.0 },
                { feature: "F7", weight: 0.0 },
            ],
        },
    ],
};

/** What the engine emits for GOLDEN_DOCUMENT (values from the golden trace). */
export const GOLDEN_AGGREGATION: AggregationDocument = {
    schema_version: "xmentor/1",
    instance_id: "golden-1",
    features: [
        { feature: "F1", consensus_rank: 1, sign: "positive", mean_weight: 0.9133333333333333, support: 3 },
        { feature: "F3", consensus_rank: 2, sign: "positive", mean_weight: 0.27, support: 2 },
        { feature: "F2", consensus_rank: 3, sign: "negative", mean_weight: -0.30333333333333334, support: 2 },
        { feature: "F5", consensus_rank: 4, sign: "negative", mean_weight: -0.5766666666666667, support: 3 },
        { feature: "F6", consensus_rank: 5, sign: "neutral", mean_weight: 0.18333333333333332, support: 2 },
    ],
    trace: {
        k_used: 5,
        modes_used: ["loose_rank", "loose_sign"],
        strict_rank_set: [
            { feature: "F1", rank: 1 },
            { feature: "F3", rank: 2 },
            { feature: "F5", rank: 4 },
            { feature: "F4", rank: 5 },
        ],
        blacklist: ["F2", "F6", "F7"],
        loose_rank_set: [
            { feature: "F1", rank: 1 },
            { feature: "F3", rank: 2 },
            { feature: "F2", rank: 3 },
            { feature: "F5", rank: 4 },
            { feature: "F4", rank: 5 },
            { feature: "F6", rank: 6 },
            { feature: "F7", rank: 7 },
        ],
        strict_sign_set: ["F1", "F5", "F7"],
        loose_sign_set: ["F1", "F3", "F2", "F5", "F6", "F7"],
    },
};
