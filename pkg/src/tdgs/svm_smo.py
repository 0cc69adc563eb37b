"""Soft-margin linear SVM trained by sequential minimal optimization.

SMO with maximal-violating-pair working-set selection: each iteration
analytically re-optimizes the two multipliers whose KKT violation brackets
the bias interval.  The linear kernel lets the decision function be carried
as an explicit weight vector, updated incrementally, so an iteration costs
O(n + d).  Training is fully deterministic; the config seed is echoed into
saved models for provenance but the optimizer does not consume randomness.

Features are z-scored internally; the standardization statistics live in
the model so scoring sees the same space as training.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

ALPHA_CHANGE_EPS = 1e-12
# Multipliers this close to 0 or C (relative) count as being on the bound.
BOUND_SNAP = 1e-10


@dataclass(frozen=True)
class TrainConfig:
    penalty_c: float = 20.0
    kkt_tol: float = 1e-3
    max_passes: int = 50
    seed: int = 0

    def __post_init__(self):
        if self.penalty_c <= 0:
            raise ValueError("penalty_c must be positive")
        if self.kkt_tol <= 0:
            raise ValueError("kkt_tol must be positive")
        if self.max_passes < 1:
            raise ValueError("max_passes must be positive")


@dataclass
class SvmModel:
    weights: np.ndarray  # in standardized feature space
    bias: float
    alphas: list[tuple[int, float]]  # nonzero multipliers by training index
    feature_mean: np.ndarray
    feature_std: np.ndarray
    config: TrainConfig
    metadata: dict = field(default_factory=dict)

    @property
    def dimension(self) -> int:
        return len(self.weights)

    def standardize(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dimension:
            raise ValueError(
                f"feature dimension {x.shape[-1]} does not match model "
                f"dimension {self.dimension}"
            )
        return (x - self.feature_mean) / self.feature_std


def decision_value(model: SvmModel, x: np.ndarray) -> float:
    return float(model.standardize(x) @ model.weights + model.bias)


def predict(model: SvmModel, x: np.ndarray) -> int:
    # Ties go to +1 (dissimilar): conservative for cleaning.
    return 1 if decision_value(model, x) >= 0 else -1


def predict_many(model: SvmModel, xs: np.ndarray) -> np.ndarray:
    scores = model.standardize(np.atleast_2d(xs)) @ model.weights + model.bias
    return np.where(scores >= 0, 1, -1)


def dual_objective(alphas: np.ndarray, w: np.ndarray) -> float:
    # Linear kernel: alpha' Q alpha collapses to |w|^2.
    return float(alphas.sum() - 0.5 * (w @ w))


def train(features, labels, config: TrainConfig = TrainConfig()) -> SvmModel:
    """SMO on the dual of the C-soft-margin problem; labels in {+1, -1}."""
    X = np.asarray(features, dtype=float)
    y = np.asarray(labels, dtype=float)
    if X.ndim != 2 or len(X) != len(y):
        raise ValueError("features must be (n, d) with one label per row")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ValueError("labels must be +1 or -1")
    if len(set(y)) < 2:
        raise ValueError("training set must contain both classes")
    if not np.all(np.isfinite(X)):
        raise ValueError("features must be finite")

    mean = X.mean(axis=0)
    std = X.std(axis=0)
    std[std == 0] = 1.0
    Z = (X - mean) / std

    n, d = Z.shape
    C = config.penalty_c
    tol = config.kkt_tol

    alphas = np.zeros(n)
    w = np.zeros(d)
    diag = np.einsum("ij,ij->i", Z, Z)
    prev_obj = 0.0
    pos = y > 0

    def take_step(i: int, j: int) -> bool:
        nonlocal w, prev_obj
        ai, aj = alphas[i], alphas[j]
        yi, yj = y[i], y[j]
        # Bias-free errors: only their difference enters the update.
        Ei = float(Z[i] @ w) - yi
        Ej = float(Z[j] @ w) - yj
        if yi != yj:
            L, H = max(0.0, aj - ai), min(C, C + aj - ai)
        else:
            L, H = max(0.0, ai + aj - C), min(C, ai + aj)
        if L >= H:
            return False
        kij = float(Z[i] @ Z[j])
        # eta = |z_i - z_j|^2; floor it so duplicate points still step to
        # the box edge instead of stalling.
        eta = max(diag[i] + diag[j] - 2.0 * kij, 1e-12)
        aj_new = min(max(aj + yj * (Ei - Ej) / eta, L), H)
        # Snap to the box so float dust never leaves a bound multiplier
        # looking interior (which would get it reselected forever).
        snap = BOUND_SNAP * C
        if aj_new < snap:
            aj_new = 0.0
        elif aj_new > C - snap:
            aj_new = C
        if abs(aj_new - aj) < ALPHA_CHANGE_EPS:
            return False
        # Derived from the snapped aj_new so the equality constraint stays
        # exact; residual dust on ai_new is handled by the tolerant masks.
        ai_new = ai + yi * yj * (aj - aj_new)

        d_ai, d_aj = ai_new - ai, aj_new - aj
        alphas[i], alphas[j] = ai_new, aj_new
        w = w + yi * d_ai * Z[i] + yj * d_aj * Z[j]

        obj = dual_objective(alphas, w)
        if obj < prev_obj - 1e-9 * max(1.0, abs(prev_obj)):
            raise AssertionError(f"dual objective decreased: {prev_obj} -> {obj}")
        prev_obj = obj
        return True

    def bias_bounds(g: np.ndarray):
        """Admissible bias interval [lo, hi] implied by the box status of
        every multiplier; g[t] is the bias putting sample t on its margin.
        Bound membership is tolerant so float dust on a derived multiplier
        cannot masquerade as an interior point."""
        snap = BOUND_SNAP * C
        below_c = alphas < C - snap
        above_0 = alphas > snap
        lower = (pos & below_c) | (~pos & above_0)
        upper = (~pos & below_c) | (pos & above_0)
        lo = float(g[lower].max()) if lower.any() else -np.inf
        hi = float(g[upper].min()) if upper.any() else np.inf
        return lower, upper, lo, hi

    # Working-set selection: the most violating sample on the lower side of
    # the bias interval is paired with the partner giving the largest
    # analytic objective gain (second-order selection).  The interval gap
    # is exactly the worst KKT violation, so gap <= tol is the stopping rule.
    # Generous cap: decomposition methods have a slow zig-zag tail on
    # ill-conditioned instances; the gap test is the real stopping rule.
    max_iter = config.max_passes * max(100 * n, 2000)
    for _ in range(max_iter):
        g = y - Z @ w
        lower, upper, lo, hi = bias_bounds(g)
        if lo - hi <= tol:
            break
        i = int(np.flatnonzero(lower)[np.argmax(g[lower])])
        diffs = g[i] - g
        candidates = upper & (diffs > 0)
        if not candidates.any():
            break
        eta_row = np.maximum(diag[i] + diag - 2.0 * (Z @ Z[i]), 1e-12)
        # Second-order partner selection on the *clipped* step: the update
        # moves both multipliers by t (alpha_i by +y_i t, alpha_j by -y_j t),
        # so t is capped by whichever box wall either multiplier hits.
        # Scoring the Newton gain without the cap can chase near-duplicate
        # samples whose permitted step is microscopic.
        t_box_i = C - alphas[i] if y[i] > 0 else alphas[i]
        t_box = np.where(pos, alphas, C - alphas)
        t = np.minimum(diffs / eta_row, np.minimum(t_box, t_box_i))
        gain = np.where(candidates, t * diffs - 0.5 * eta_row * t * t, -np.inf)
        j = int(np.argmax(gain))
        if not take_step(i, j):
            break

    # Final cleanup: land dust multipliers exactly on their bound and
    # rebuild w from the cleaned alphas, so the returned model satisfies
    # the box constraints exactly.
    snap = BOUND_SNAP * C
    alphas[alphas <= snap] = 0.0
    alphas[alphas >= C - snap] = C
    w = ((alphas * y)[:, None] * Z).sum(axis=0)

    g = y - Z @ w
    _, _, lo, hi = bias_bounds(g)
    if np.isinf(lo) and np.isinf(hi):
        b = 0.0
    elif np.isinf(lo):
        b = hi
    elif np.isinf(hi):
        b = lo
    else:
        b = 0.5 * (lo + hi)

    support = [(int(i), float(alphas[i])) for i in np.flatnonzero(alphas > 0)]
    return SvmModel(
        weights=w,
        bias=b,
        alphas=support,
        feature_mean=mean,
        feature_std=std,
        config=config,
        metadata={},
    )


def model_to_dict(model: SvmModel) -> dict:
    return {
        "weights": [float(v) for v in model.weights],
        "bias": float(model.bias),
        "alphas": [[i, a] for i, a in model.alphas],
        "feature_mean": [float(v) for v in model.feature_mean],
        "feature_std": [float(v) for v in model.feature_std],
        "config": {
            "penalty_c": model.config.penalty_c,
            "kkt_tol": model.config.kkt_tol,
            "max_passes": model.config.max_passes,
            "seed": model.config.seed,
        },
        "metadata": model.metadata,
    }


def model_from_dict(doc: dict) -> SvmModel:
    try:
        cfg = doc["config"]
        return SvmModel(
            weights=np.asarray(doc["weights"], dtype=float),
            bias=float(doc["bias"]),
            alphas=[(int(i), float(a)) for i, a in doc["alphas"]],
            feature_mean=np.asarray(doc["feature_mean"], dtype=float),
            feature_std=np.asarray(doc["feature_std"], dtype=float),
            config=TrainConfig(
                penalty_c=float(cfg["penalty_c"]),
                kkt_tol=float(cfg["kkt_tol"]),
                max_passes=int(cfg["max_passes"]),
                seed=int(cfg["seed"]),
            ),
            metadata=dict(doc.get("metadata", {})),
        )
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed model document: {exc}") from exc


def save_model(model: SvmModel, path) -> None:
    with open(path, "w") as f:
        json.dump(model_to_dict(model), f, indent=1, sort_keys=True)
        f.write("\n")


def load_model(path) -> SvmModel:
    with open(path) as f:
        return model_from_dict(json.load(f))
