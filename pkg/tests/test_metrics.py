import pytest

from helpers import build_explanation, make_random_set
import numpy as np

from xmentor.metrics import (
    corpus_histograms,
    disagreement_counts,
    feature_agreement,
    pair_metrics,
    pairwise_matrix,
    rank_agreement,
    sign_agreement,
)
from xmentor.oracle import reference_metrics
from xmentor.synth import GeneratorSpec, Perturbation, generate


@pytest.fixture
def pair(lime_shap_pair):
    e1 = lime_shap_pair.explanation_for("LIME")
    e2 = lime_shap_pair.explanation_for("SHAP")
    return e1, e2


class TestPairFixture:
    # Frozen values verified with the reference oracle: both top-5 sets are
    # equal; only CountLine shares its rank; CountPath_Mean flips sign.
    def test_feature_agreement(self, pair):
        assert feature_agreement(*pair, 5) == 1.0

    def test_rank_agreement(self, pair):
        assert rank_agreement(*pair, 5) == 0.2

    def test_sign_agreement(self, pair):
        assert sign_agreement(*pair, 5) == 0.8

    def test_disagreement_counts(self, pair):
        assert disagreement_counts(*pair, 5) == (4, 1)

    def test_matches_reference(self, pair):
        assert pair_metrics(*pair, 5) == reference_metrics(*pair, 5)


class TestTrivialCases:
    def test_identity_pair(self, pair):
        e1, _ = pair
        assert feature_agreement(e1, e1, 5) == 1.0
        assert rank_agreement(e1, e1, 5) == 1.0
        assert sign_agreement(e1, e1, 5) == 1.0
        assert disagreement_counts(e1, e1, 5) == (0, 0)

    def test_identity_with_k_beyond_length(self, pair):
        e1, _ = pair
        assert feature_agreement(e1, e1, 10) == len(e1) / 10

    def test_disjoint_lists(self):
        e1 = build_explanation("a", [("x", 0.9), ("y", 0.5)])
        e2 = build_explanation("b", [("u", 0.8), ("v", 0.3)])
        assert feature_agreement(e1, e2, 2) == 0.0
        assert rank_agreement(e1, e2, 2) == 0.0
        assert sign_agreement(e1, e2, 2) == 0.0
        assert disagreement_counts(e1, e2, 2) == (0, 0)

    def test_k_must_be_positive(self, pair):
        with pytest.raises(ValueError):
            feature_agreement(*pair, 0)


class TestGoldenTrioMetrics:
    # Hand-counted over the fixture rankings, then verified against the
    # reference oracle before freezing.
    def test_rank_agreement_top3(self, golden_trio):
        lime = golden_trio.explanation_for("LIME")
        breakdown = golden_trio.explanation_for("BreakDown")
        assert rank_agreement(lime, breakdown, 3) == pytest.approx(1 / 3)

    def test_sign_agreement_top3(self, golden_trio):
        # All three shared top-3 features match in sign: F1 (+,+),
        # F2 (-,-), F3 (+,+); the oracle recount gives 3/3.
        lime = golden_trio.explanation_for("LIME")
        breakdown = golden_trio.explanation_for("BreakDown")
        assert sign_agreement(lime, breakdown, 3) == 1.0
        assert reference_metrics(lime, breakdown, 3).sa == 1.0

    def test_full_depth_matrices(self, golden_trio):
        fa = pairwise_matrix(golden_trio, 7, "fa")
        ra = pairwise_matrix(golden_trio, 7, "ra")
        sa = pairwise_matrix(golden_trio, 7, "sa")
        for a in golden_trio.explainer_names:
            for b in golden_trio.explainer_names:
                assert fa.at(a, b) == 1.0
        assert ra.at("LIME", "LIME") == 1.0
        assert ra.at("LIME", "SHAP") == pytest.approx(1 / 7)
        assert ra.at("LIME", "BreakDown") == pytest.approx(5 / 7)
        assert ra.at("SHAP", "BreakDown") == pytest.approx(3 / 7)
        assert sa.at("LIME", "SHAP") == pytest.approx(3 / 7)
        assert sa.at("LIME", "BreakDown") == pytest.approx(6 / 7)
        assert sa.at("SHAP", "BreakDown") == pytest.approx(3 / 7)

    def test_matrix_is_symmetric(self, golden_trio):
        matrix = pairwise_matrix(golden_trio, 5, "ra")
        for i in range(3):
            for j in range(3):
                assert matrix.values[i][j] == matrix.values[j][i]

    def test_unknown_explainer_raises(self, golden_trio):
        with pytest.raises(KeyError):
            pairwise_matrix(golden_trio, 5, "fa").at("LIME", "Anchors")

    def test_unknown_metric_name(self, golden_trio):
        with pytest.raises(ValueError):
            pairwise_matrix(golden_trio, 5, "tau")


class TestBoundsAndProducts:
    def test_bounds_on_random_sets(self):
        rng = np.random.default_rng(7)
        for i in range(200):
            s = make_random_set(rng, f"r{i}")
            for k in (1, 2, 5):
                for e1 in s.explanations:
                    for e2 in s.explanations:
                        pm = pair_metrics(e1, e2, k)
                        assert 0.0 <= pm.ra <= pm.fa <= 1.0
                        assert 0.0 <= pm.sa <= pm.fa <= 1.0
                        assert pm.rank_mismatch_count >= 0
                        assert pm.sign_mismatch_count >= 0
                        # each metric is an exact count over k
                        assert round(pm.fa * k) == pytest.approx(pm.fa * k)
                        assert round(pm.k * (pm.fa - pm.ra)) == pm.rank_mismatch_count
                        assert round(pm.k * (pm.fa - pm.sa)) == pm.sign_mismatch_count


class TestCorpusHistograms:
    def test_identical_explainers_mass_at_zero(self):
        from xmentor.model import ExplanationSet

        rows = [("x", 0.9), ("y", -0.5), ("z", 0.2)]
        sets = [
            ExplanationSet(
                f"i{i}",
                "Defect",
                (build_explanation("a", rows), build_explanation("b", rows)),
            )
            for i in range(4)
        ]
        report = corpus_histograms(sets)
        assert report.rank_histogram == {0: 4}
        assert report.sign_histogram == {0: 4}

    def test_empty_corpus(self):
        report = corpus_histograms([])
        assert report.pairs == ()
        assert report.rank_histogram == {}
        assert report.sign_histogram == {}
        assert report.mean_rank_mismatch() is None

    def test_single_pair_corpus(self, lime_shap_pair):
        report = corpus_histograms([lime_shap_pair], k=5)
        assert report.rank_histogram == {4: 1}
        assert report.sign_histogram == {1: 1}

    def test_total_mass_counts_instance_pairs(self):
        rng = np.random.default_rng(11)
        sets = [make_random_set(rng, f"i{i:03d}", m_range=(3, 3)) for i in range(5)]
        report = corpus_histograms(sets)
        assert sum(report.rank_histogram.values()) == 5 * 3
        assert sum(report.sign_histogram.values()) == 5 * 3

    def test_jittered_corpus_keeps_sign_mass_at_zero(self):
        spec = GeneratorSpec(seed=3, n_features=(4, 6), perturbation=Perturbation.RANK_JITTER_SIGN_PRESERVING)
        sets = generate(spec, 20)
        report = corpus_histograms(sets)
        assert report.sign_histogram == {0: sum(report.sign_histogram.values())}
        assert sum(count * freq for count, freq in report.rank_histogram.items()) > 0
