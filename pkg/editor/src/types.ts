/**
 * The "xmentor/1" interchange documents as TypeScript shapes.
 *
 * The panel never computes aggregation itself: every displayed number
 * originates from a machine document produced by the engine CLI.
 */

export type Sign = "positive" | "negative" | "neutral";

export interface Attribution {
    feature: string;
    weight: number;
}

export interface ExplainerExplanation {
    explainer: string;
    attributions: Attribution[];
}

export interface ExplanationDocument {
    schema_version: string;
    instance_id: string;
    prediction?: { label?: string; score?: number };
    explanations: ExplainerExplanation[];
}

export interface AggregatedFeatureEntry {
    feature: string;
    consensus_rank: number;
    sign: Sign;
    mean_weight: number;
    support: number;
}

export interface StageTraceDocument {
    k_used: number;
    modes_used: string[];
    strict_rank_set: Array<{ feature: string; rank: number }>;
    blacklist: string[];
    loose_rank_set: Array<{ feature: string; rank: number }>;
    strict_sign_set: string[];
    loose_sign_set: string[];
}

export interface AggregationDocument {
    schema_version: string;
    instance_id: string;
    features: AggregatedFeatureEntry[];
    trace?: StageTraceDocument;
}

export const SIGN_GLYPHS: Record<Sign, string> = {
    positive: "+",
    negative: "-",
    neutral: "0",
};

export function glyphForWeight(weight: number, neutralEps = 0): string {
    if (Math.abs(weight) <= neutralEps) {
        return "0";
    }
    return weight > 0 ? "+" : "-";
}

export function isExplanationDocument(value: unknown): value is ExplanationDocument {
    const doc = value as ExplanationDocument;
    return (
        !!doc &&
        typeof doc === "object" &&
        doc.schema_version === "xmentor/1" &&
        typeof doc.instance_id === "string" &&
        Array.isArray(doc.explanations)
    );
}

export function isAggregationDocument(value: unknown): value is AggregationDocument {
    const doc = value as AggregationDocument;
    return (
        !!doc &&
        typeof doc === "object" &&
        doc.schema_version === "xmentor/1" &&
        typeof doc.instance_id === "string" &&
        Array.isArray(doc.features)
    );
}
