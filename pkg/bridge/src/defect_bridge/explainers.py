"""Three deterministic post-hoc attribution explainers for tabular models.

The usual third-party explainer distributions are not available in the
build environment, so this module carries small in-house implementations
of the three classic approaches, each named after the method family it
realizes (the aggregation engine treats explainer ids as opaque):

- lime_surrogate: local weighted ridge surrogate fitted on Gaussian
  perturbations around the instance.
- shapley_sampling: Monte Carlo permutation sampling of Shapley values
  against background rows.
- breakdown_sequential: greedy sequential contributions, fixing the most
  impactful remaining feature at each step.

All three attribute the model's positive-class probability and are
deterministic given the seed.
"""

from __future__ import annotations

import numpy as np

EXPLAINER_IDS = ("lime_surrogate", "shapley_sampling", "breakdown_sequential")


def _positive_probability(model, rows: np.ndarray) -> np.ndarray:
    return model.predict_proba(rows)[:, 1]


def lime_surrogate(
    model,
    background: np.ndarray,
    instance: np.ndarray,
    rng: np.random.Generator,
    n_samples: int = 600,
) -> np.ndarray:
    """Weights of a distance-weighted ridge surrogate around the instance.

    Coefficients are rescaled by each feature's perturbation scale so the
    returned weights are comparable across features.
    """
    from sklearn.linear_model import Ridge

    scale = background.std(axis=0)
    scale[scale == 0.0] = 1.0
    noise = rng.normal(0.0, 1.0, (n_samples, instance.shape[0]))
    samples = instance + noise * scale
    samples[0] = instance
    predictions = _positive_probability(model, samples)

    distances = np.sqrt(((samples - instance) / scale) ** 2 @ np.ones(instance.shape[0]))
    kernel_width = np.sqrt(instance.shape[0]) * 0.75
    weights = np.exp(-(distances**2) / kernel_width**2)

    surrogate = Ridge(alpha=1.0)
    surrogate.fit((samples - instance) / scale, predictions, sample_weight=weights)
    return surrogate.coef_


def shapley_sampling(
    model,
    background: np.ndarray,
    instance: np.ndarray,
    rng: np.random.Generator,
    n_permutations: int = 120,
) -> np.ndarray:
    """Permutation-sampling Shapley estimate of per-feature contributions.

    For each sampled permutation a background row is morphed into the
    instance feature by feature; the change in predicted probability at
    each step is that feature's marginal contribution.
    """
    d = instance.shape[0]
    contributions = np.zeros(d)
    for _ in range(n_permutations):
        order = rng.permutation(d)
        base = background[int(rng.integers(0, len(background)))].copy()
        trail = np.empty((d + 1, d))
        trail[0] = base
        current = base.copy()
        for step, feature in enumerate(order, start=1):
            current[feature] = instance[feature]
            trail[step] = current
        predictions = _positive_probability(model, trail)
        deltas = np.diff(predictions)
        contributions[order] += deltas
    return contributions / n_permutations


def breakdown_sequential(
    model,
    background: np.ndarray,
    instance: np.ndarray,
    rng: np.random.Generator | None = None,
    max_background: int = 200,
) -> np.ndarray:
    """Greedy sequential contributions against a background expectation.

    At every round, each still-free feature is tentatively fixed to the
    instance value; the feature moving the mean prediction the most is
    fixed for real and credited with that change. Ties break on column
    order, so the result is deterministic.
    """
    rows = background[:max_background].copy()
    d = instance.shape[0]
    remaining = list(range(d))
    contributions = np.zeros(d)
    current_mean = float(_positive_probability(model, rows).mean())
    while remaining:
        trials = np.repeat(rows[None, :, :], len(remaining), axis=0)
        for slot, feature in enumerate(remaining):
            trials[slot, :, feature] = instance[feature]
        stacked = trials.reshape(-1, d)
        means = _positive_probability(model, stacked).reshape(len(remaining), -1).mean(axis=1)
        deltas = means - current_mean
        slot = int(np.argmax(np.abs(deltas)))
        feature = remaining.pop(slot)
        contributions[feature] = float(deltas[slot])
        rows[:, feature] = instance[feature]
        current_mean = float(means[slot])
    return contributions


def explain_instance(
    explainer_id: str,
    model,
    background: np.ndarray,
    instance: np.ndarray,
    rng: np.random.Generator,
) -> np.ndarray:
    if explainer_id == "lime_surrogate":
        return lime_surrogate(model, background, instance, rng)
    if explainer_id == "shapley_sampling":
        return shapley_sampling(model, background, instance, rng)
    if explainer_id == "breakdown_sequential":
        return breakdown_sequential(model, background, instance, rng)
    raise ValueError(f"unknown explainer id {explainer_id!r}")
