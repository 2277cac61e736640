"""Statistical uncertainty of the witness and conclusive-verdict classification.

Covariance matrix elements measured by homodyne tomography carry statistical
errors. This module propagates a per-element error model into delta(nu^2)
two ways, first order (gradient) and Monte Carlo (sampling), and classifies
a verdict as conclusive only when the distance from the separability
threshold exceeds twice the uncertainty.

The shipped default element errors are calibration placeholders in
vacuum-variance units, chosen to reproduce the qualitative contrast between
a marginal squeezing level (ambiguous verdict at the curve peak) and a
comfortable one (conclusive verdict over a finite transmissivity range).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .symplectic import CovMatrix, PHYSICAL_TOL, symplectic_form
from .witness import SEPARABILITY_THRESHOLD, nu_squared_closed_form

DEFAULT_RELATIVE_SIGMA = 0.02
DEFAULT_ABSOLUTE_FLOOR = 0.005
DEFAULT_SAMPLES = 10000
DEFAULT_SEED = 20260810

CONCLUSIVE_EB = "conclusive-eb"
CONCLUSIVE_ENTANGLED = "conclusive-entangled"
AMBIGUOUS = "ambiguous"


class PropagationError(RuntimeError):
    """Uncertainty propagation failed numerically (distinct from bad arguments)."""


@dataclass(frozen=True)
class UncertaintyModel:
    """Per-element error model for a measured covariance matrix.

    Each independent (upper-triangle) element carries standard deviation
    max(relative_sigma * |V_ij|, absolute_floor); elements are treated as
    statistically independent, which matches how distinct quadrature
    settings are measured one at a time.
    """

    relative_sigma: float = DEFAULT_RELATIVE_SIGMA
    absolute_floor: float = DEFAULT_ABSOLUTE_FLOOR
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED

    def __post_init__(self):
        if not np.isfinite(self.relative_sigma) or self.relative_sigma < 0:
            raise ValueError(f"relative_sigma must be finite and >= 0, got {self.relative_sigma}")
        if not np.isfinite(self.absolute_floor) or self.absolute_floor < 0:
            raise ValueError(f"absolute_floor must be finite and >= 0, got {self.absolute_floor}")
        if self.samples < 100:
            raise ValueError(f"samples must be >= 100, got {self.samples}")

    def sigma_matrix(self, state: CovMatrix) -> np.ndarray:
        return np.maximum(self.relative_sigma * np.abs(state.entries), self.absolute_floor)


@dataclass(frozen=True)
class ConfidenceVerdict:
    """Witness value with its uncertainty and three-way classification."""

    nu_squared: float
    delta: float
    classification: str


@dataclass(frozen=True)
class MonteCarloDelta:
    """Sample statistics of nu^2 under the error model.

    skipped counts draws rejected as unphysical (they are dropped, not
    projected back, to avoid biasing the distribution).
    """

    mean: float
    std: float
    skipped: int


def propagate_first_order(state: CovMatrix, model: UncertaintyModel) -> float:
    """Gaussian error propagation: sqrt(sum_ij (d nu^2/d V_ij * sigma_ij)^2).

    The sum runs over independent upper-triangle elements; off-diagonal
    perturbations move the mirrored element too. Gradients are central
    finite differences with step max(1e-6, 1e-6 |V_ij|).
    """
    sigma = model.sigma_matrix(state)
    m = state.entries
    dim = m.shape[0]
    total = 0.0
    for i in range(dim):
        for j in range(i, dim):
            h = max(1e-6, 1e-6 * abs(m[i, j]))
            plus = m.copy()
            minus = m.copy()
            plus[i, j] += h
            minus[i, j] -= h
            if i != j:
                plus[j, i] += h
                minus[j, i] -= h
            try:
                up = nu_squared_closed_form(CovMatrix(plus)).nu_squared
                down = nu_squared_closed_form(CovMatrix(minus)).nu_squared
            except ValueError as exc:
                raise PropagationError(
                    f"gradient step at element ({i},{j}) left the physical region: {exc}"
                ) from exc
            gradient = (up - down) / (2.0 * h)
            if not np.isfinite(gradient):
                raise PropagationError(
                    f"non-finite gradient at element ({i},{j}) near the radicand boundary"
                )
            total += (gradient * sigma[i, j]) ** 2
    return float(np.sqrt(total))


def _nu_squared_batch(matrices: np.ndarray) -> np.ndarray:
    """Vectorized witness closed form over a stack of 4x4 matrices."""
    a = matrices[:, :2, :2]
    b = matrices[:, 2:, 2:]
    c = matrices[:, :2, 2:]
    det_a = a[:, 0, 0] * a[:, 1, 1] - a[:, 0, 1] * a[:, 1, 0]
    det_b = b[:, 0, 0] * b[:, 1, 1] - b[:, 0, 1] * b[:, 1, 0]
    det_c = c[:, 0, 0] * c[:, 1, 1] - c[:, 0, 1] * c[:, 1, 0]
    sigma = det_a + det_b - 2.0 * det_c
    radicand = sigma * sigma - 4.0 * np.linalg.det(matrices)
    return 0.5 * (sigma - np.sqrt(np.maximum(radicand, 0.0)))


def _physical_mask(matrices: np.ndarray) -> np.ndarray:
    """Vectorized physicality check (all symplectic eigenvalues >= 1/2 - tol)."""
    n = matrices.shape[-1] // 2
    eigenvalues = np.linalg.eigvals(symplectic_form(n) @ matrices)
    vals = np.sort(np.abs(eigenvalues.imag), axis=-1)
    nu_min = 0.5 * (vals[:, 0] + vals[:, 1])
    return nu_min >= 0.5 - PHYSICAL_TOL


def propagate_monte_carlo(state: CovMatrix, model: UncertaintyModel) -> MonteCarloDelta:
    """Sample nu^2 under element-wise normal perturbations of the CM.

    Draws are generated in one batch from the seeded generator, so the result
    is bit-reproducible for a fixed seed regardless of how the evaluation is
    scheduled. Unphysical draws are skipped and counted; more than 50%
    skipped means the error model is too coarse for this state.
    """
    sigma = model.sigma_matrix(state)
    dim = state.entries.shape[0]
    rng = np.random.default_rng(model.seed)
    noise = rng.normal(0.0, 1.0, size=(model.samples, dim, dim)) * sigma
    upper = np.triu(noise)
    perturbation = upper + np.transpose(np.triu(noise, 1), (0, 2, 1))
    draws = state.entries + perturbation

    mask = _physical_mask(draws)
    skipped = int(model.samples - mask.sum())
    if skipped > model.samples // 2:
        raise PropagationError(
            f"{skipped} of {model.samples} Monte Carlo draws were unphysical; "
            "the error model is too coarse for this state"
        )
    values = _nu_squared_batch(draws[mask])
    return MonteCarloDelta(
        mean=float(values.mean()),
        std=float(values.std(ddof=1)) if values.size > 1 else 0.0,
        skipped=skipped,
    )


def classify(nu_squared: float, delta: float) -> ConfidenceVerdict:
    """Three-way verdict: conclusive only with a 2*delta margin from threshold."""
    if delta < 0 or not np.isfinite(delta):
        raise ValueError(f"delta must be finite and >= 0, got {delta}")
    excess = nu_squared - SEPARABILITY_THRESHOLD
    if excess > 2.0 * delta:
        label = CONCLUSIVE_EB
    elif -excess > 2.0 * delta:
        label = CONCLUSIVE_ENTANGLED
    else:
        label = AMBIGUOUS
    return ConfidenceVerdict(nu_squared=float(nu_squared), delta=float(delta), classification=label)
