"""Full optical-bench pipeline: resource preparation, channel stage, sweeps.

A single parametric source (two-mode squeeze parameter r) feeds the whole
bench. Splitting its output on a balanced beam splitter yields a squeezed
ancilla and an independent squeezed mode; mixing the latter with vacuum on a
second balanced beam splitter produces the entangled probe pair (c1, c2),
which up to local squeezers is a twin beam with parameter r' = -r/2. The
channel stage then passes c1 through two beam splitters of transmissivity
eta, fed either by the ancilla (amendable route) or by vacuum (plain
double-attenuation route). Fictitious beam splitters of transmissivity t0
(source loss) and tm (detector inefficiency) model the realistic bench.

Everything here is a pure function of the configuration, so sweep points can
be evaluated in any order or in parallel with identical results.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import uncertainty as unc
from .channels import attenuation, apply_to_mode
from .symplectic import (
    CovMatrix,
    MAX_SQUEEZE,
    apply_symplectic,
    beam_splitter,
    embed_two_mode,
    partial_trace,
    tensor,
    tmsv_cm,
    vacuum_cm,
)
from .uncertainty import UncertaintyModel
from .witness import WitnessValue, nu_squared_closed_form

VARIANTS = ("phi1", "phi2")

DELTA_METHODS = ("first-order", "monte-carlo")


def _check_variant(variant: str) -> str:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    return variant


@dataclass(frozen=True)
class ExperimentConfig:
    """All knobs of the bench.

    r is the source two-mode squeeze parameter; the probe twin-beam
    parameter r' = -r/2 is structurally tied to it (there is no independent
    r' knob). eta is the channel transmissivity, t0 the preparation-loss and
    tm the detection transmissivity.
    """

    r: float
    eta: float
    t0: float = 1.0
    tm: float = 1.0
    variant: str = "phi1"
    uncertainty: UncertaintyModel | None = None

    def __post_init__(self):
        if not np.isfinite(self.r) or abs(self.r) > MAX_SQUEEZE:
            raise ValueError(f"|r| must be finite and <= {MAX_SQUEEZE}, got {self.r}")
        for name in ("eta", "t0", "tm"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        _check_variant(self.variant)

    @property
    def r_prime(self) -> float:
        """Probe twin-beam squeeze parameter, forced to -r/2 by the bench layout."""
        return -self.r / 2.0


@dataclass(frozen=True)
class PointResult:
    """Witness outcome at one grid point, with uncertainty when configured."""

    witness: WitnessValue
    delta: float | None = None
    classification: str | None = None


@dataclass(frozen=True)
class SweepResult:
    """Per-point results over a strictly increasing transmissivity grid."""

    grid: tuple
    points: tuple
    config: ExperimentConfig


def prepare_resources(r: float, t0: float) -> tuple[CovMatrix, CovMatrix]:
    """Build the squeezed ancilla and the two-mode probe from one source.

    Steps: twin beam with parameter r; attenuation t0 on both co-propagating
    modes (source loss acts before the polarizing split, but it commutes with
    the balanced splitter so the placement is unobservable); balanced beam
    splitter separating ancilla a1 and mode b1; b1 mixed with vacuum on a
    second balanced splitter to give the probe pair (c1, c2).

    Returns (ancilla, probe). For t0 = 1 the ancilla is the pure squeezed
    vacuum with parameter r and the probe is a twin beam with parameter -r/2
    squeezed locally by -r/4 on each arm.
    """
    source = tmsv_cm(r)
    loss = attenuation(t0)
    source = apply_to_mode(loss, source, 0)
    source = apply_to_mode(loss, source, 1)
    split = apply_symplectic(beam_splitter(0.5), source)
    ancilla = partial_trace(split, [0])
    b1 = partial_trace(split, [1])
    probe = apply_symplectic(beam_splitter(0.5), tensor(b1, vacuum_cm()))
    return ancilla, probe


def run_channel_stage(
    probe: CovMatrix, ancilla_or_vacuum: CovMatrix, eta: float, variant: str
) -> CovMatrix:
    """Pass probe mode c1 through the two-beam-splitter channel stage.

    c1 is mixed with the ancilla (variant "phi1") or with vacuum (variant
    "phi2") on the first splitter of transmissivity eta, the idler is traced
    out, and the survivor is mixed with vacuum on the second splitter in the
    same way; c2 is untouched.
    """
    _check_variant(variant)
    if probe.n_modes != 2:
        raise ValueError(f"probe must have two modes, got {probe.n_modes}")
    aux = vacuum_cm() if variant == "phi2" else ancilla_or_vacuum
    if aux.n_modes != 1:
        raise ValueError(f"ancilla must be a single mode, got {aux.n_modes}")

    splitter = beam_splitter(eta)
    state = tensor(probe, aux)
    state = apply_symplectic(embed_two_mode(splitter, 0, 2, 3), state)
    state = partial_trace(state, [0, 1])

    state = tensor(state, vacuum_cm())
    state = apply_symplectic(embed_two_mode(splitter, 0, 2, 3), state)
    return partial_trace(state, [0, 1])


def apply_detection_loss(state: CovMatrix, tm: float) -> CovMatrix:
    """Detector inefficiency: attenuation tm on each detected mode."""
    if state.n_modes != 2:
        raise ValueError(f"expected a two-mode state, got {state.n_modes}")
    loss = attenuation(tm)
    return apply_to_mode(loss, apply_to_mode(loss, state, 0), 1)


def output_state(config: ExperimentConfig) -> CovMatrix:
    """Covariance matrix arriving at the detectors for this configuration."""
    ancilla, probe = prepare_resources(config.r, config.t0)
    out = run_channel_stage(probe, ancilla, config.eta, config.variant)
    return apply_detection_loss(out, config.tm)


def run_point(config: ExperimentConfig, delta_method: str = "first-order") -> PointResult:
    """Full pipeline for one configuration: prepare, channel, detect, witness."""
    if delta_method not in DELTA_METHODS:
        raise ValueError(f"delta_method must be one of {DELTA_METHODS}, got {delta_method!r}")
    state = output_state(config)
    witness = nu_squared_closed_form(state)
    if config.uncertainty is None:
        return PointResult(witness=witness)
    if delta_method == "first-order":
        delta = unc.propagate_first_order(state, config.uncertainty)
    else:
        delta = unc.propagate_monte_carlo(state, config.uncertainty).std
    verdict = unc.classify(witness.nu_squared, delta)
    return PointResult(witness=witness, delta=delta, classification=verdict.classification)


def sweep_eta(
    config: ExperimentConfig,
    eta_min: float,
    eta_max: float,
    steps: int,
    delta_method: str = "first-order",
) -> SweepResult:
    """Evaluate run_point over a uniform transmissivity grid, in grid order."""
    if not (0.0 <= eta_min < eta_max <= 1.0):
        raise ValueError(f"need 0 <= eta_min < eta_max <= 1, got [{eta_min}, {eta_max}]")
    if steps < 2:
        raise ValueError(f"steps must be >= 2, got {steps}")
    grid = np.linspace(eta_min, eta_max, steps)
    points = tuple(
        run_point(replace(config, eta=float(eta)), delta_method=delta_method) for eta in grid
    )
    return SweepResult(grid=tuple(float(e) for e in grid), points=points, config=config)


def find_flip_eta(
    config: ExperimentConfig,
    tol: float = 1e-4,
    bracket: tuple[float, float] = (1e-6, 0.99),
) -> float:
    """Bisect the transmissivity at which the separability verdict flips.

    Works for lossy configurations too, where no analytic threshold exists.
    Raises ValueError when the verdict is the same at both bracket ends (the
    plain double-attenuation route never flips, for instance).
    """
    lo, hi = bracket
    if not (0.0 <= lo < hi <= 1.0):
        raise ValueError(f"invalid bracket {bracket}")
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")

    def verdict(eta: float) -> bool:
        probe_config = replace(config, eta=eta, uncertainty=None)
        return run_point(probe_config).witness.entangled

    verdict_lo = verdict(lo)
    if verdict(hi) == verdict_lo:
        raise ValueError(
            f"no verdict flip in bracket [{lo}, {hi}] for variant {config.variant!r}"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if verdict(mid) == verdict_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
