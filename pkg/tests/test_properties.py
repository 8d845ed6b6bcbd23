"""Invariant checks over hypothesis-generated explanation sets."""

from hypothesis import given, settings, strategies as st

from xmentor.aggregate import aggregate, threshold_k
from xmentor.formats import parse_document, write_document
from xmentor.metrics import pair_metrics
from xmentor.model import Explanation, ExplanationSet, FeatureAttribution
from xmentor.oracle import reference_aggregate, reference_metrics

WEIGHT_GRID = [round(0.1 * i, 1) for i in range(-10, 11)]  # -1.0 .. 1.0, zeros and ties
SCALES = [0.25, 0.5, 2.0, 8.0]  # powers of two: float-exact rescaling


@st.composite
def explanation_sets(draw, max_n=8, max_m=4):
    n = draw(st.integers(min_value=1, max_value=max_n))
    m = draw(st.integers(min_value=2, max_value=max_m))
    features = [f"f{i}" for i in range(1, n + 1)]
    explanations = []
    for i in range(m):
        kept = draw(
            st.lists(st.sampled_from(features), unique=True, min_size=0, max_size=n)
        )
        weights = [draw(st.sampled_from(WEIGHT_GRID)) for _ in kept]
        rows = sorted(zip(kept, weights), key=lambda fw: -abs(fw[1]))
        explanations.append(
            Explanation(f"e{i}", tuple(FeatureAttribution(f, w) for f, w in rows))
        )
    if not any(e.attributions for e in explanations):
        explanations[0] = Explanation("e0", (FeatureAttribution(features[0], 0.5),))
    return ExplanationSet("h-1", "Defect", tuple(explanations))


def scaled(explanation: Explanation, c: float) -> Explanation:
    return Explanation(
        explanation.explainer,
        tuple(FeatureAttribution(a.feature, a.weight * c) for a in explanation.attributions),
    )


@given(explanation_sets())
def test_aggregate_is_deterministic_and_order_independent(s):
    result = aggregate(s)
    assert aggregate(s) == result
    reversed_set = ExplanationSet(s.instance_id, s.prediction_label, tuple(reversed(s.explanations)))
    assert aggregate(reversed_set) == result


@given(explanation_sets())
def test_output_bounded_by_threshold_and_universe(s):
    result = aggregate(s)
    assert len(result.features) <= threshold_k(s.universe_size)
    assert set(result.feature_names) <= s.feature_universe
    ranks = [f.consensus_rank for f in result.features]
    assert ranks == sorted(ranks) and len(set(ranks)) == len(ranks)


@given(explanation_sets())
def test_strict_stages_are_subsets_of_loose_stages(s):
    trace = aggregate(s).trace
    assert {f for f, _ in trace.strict_rank_set} <= {f for f, _ in trace.loose_rank_set}
    assert set(trace.strict_sign_set) <= set(trace.loose_sign_set)


@given(explanation_sets())
def test_loose_modes_fire_iff_strict_is_short(s):
    trace = aggregate(s).trace
    assert ("loose_rank" in trace.modes_used) == (len(trace.strict_rank_set) < trace.k_used)
    assert ("loose_sign" in trace.modes_used) == (len(trace.strict_sign_set) < trace.k_used)


@given(explanation_sets(), st.integers(1, 9))
def test_metric_bounds_symmetry_and_identity(s, k):
    for e1 in s.explanations:
        identity = pair_metrics(e1, e1, k)
        expected = min(k, len(e1)) / k
        assert identity.fa == identity.ra == identity.sa == expected
        for e2 in s.explanations:
            forward = pair_metrics(e1, e2, k)
            backward = pair_metrics(e2, e1, k)
            assert forward == backward
            assert 0.0 <= forward.ra <= forward.fa <= 1.0
            assert 0.0 <= forward.sa <= forward.fa <= 1.0
            assert round(k * forward.fa) == k * forward.fa
            assert forward.rank_mismatch_count == round(k * (forward.fa - forward.ra))
            assert forward.sign_mismatch_count == round(k * (forward.fa - forward.sa))


@given(explanation_sets(), st.sampled_from(SCALES), st.integers(0, 3), st.integers(1, 9))
def test_positive_scale_invariance(s, c, which, k):
    index = which % len(s.explanations)
    rescaled = ExplanationSet(
        s.instance_id,
        s.prediction_label,
        tuple(
            scaled(e, c) if i == index else e for i, e in enumerate(s.explanations)
        ),
    )
    base = aggregate(s)
    other = aggregate(rescaled)
    assert other.feature_names == base.feature_names
    assert [f.sign for f in other.features] == [f.sign for f in base.features]
    for e1, r1 in zip(s.explanations, rescaled.explanations):
        for e2, r2 in zip(s.explanations, rescaled.explanations):
            pm_base = pair_metrics(e1, e2, k)
            pm_scaled = pair_metrics(r1, r2, k)
            assert (pm_base.fa, pm_base.ra, pm_base.sa) == (pm_scaled.fa, pm_scaled.ra, pm_scaled.sa)


@settings(max_examples=150)
@given(explanation_sets(max_n=6, max_m=4))
def test_oracle_equivalence_within_envelope(s):
    assert aggregate(s) == reference_aggregate(s)
    k = max(1, min(3, s.universe_size))
    for e1 in s.explanations:
        for e2 in s.explanations:
            assert pair_metrics(e1, e2, k) == reference_metrics(e1, e2, k)


@given(explanation_sets())
def test_serialization_round_trip(s):
    assert parse_document(write_document(s)) == s


@given(explanation_sets())
def test_unanimity_fixed_point(s):
    # Replace all explainers with copies of the first non-empty one: the
    # aggregate must be its top-k with its own signs.
    source = next((e for e in s.explanations if e.attributions), None)
    if source is None:
        return
    clones = tuple(
        Explanation(f"c{i}", source.attributions) for i in range(len(s.explanations))
    )
    unanimous = ExplanationSet("u-1", "Defect", clones)
    result = aggregate(unanimous)
    k = threshold_k(unanimous.universe_size)
    assert result.feature_names == source.features[:k]
    assert [f.sign for f in result.features] == [
        source.sign_of(f) for f in source.features[:k]
    ]
