"""Gaussian channels in (X, Y) form and the amendability test maps.

A channel acts on covariance matrices as V -> X V X^T + Y. Storing channels
this way makes composition two matrix multiplies and gives a uniform
complete-positivity check; optical circuits (beam splitter dilations) are
lowered to (X, Y) on construction or verified against it.

The two maps under study are built from the attenuation channel At(eta) and
the unitary squeezer S(r):

    amendable route:  At(eta) . S(r) . At(eta)   (squeezing filter in between)
    plain route:      At(eta) . At(eta)          (= At(eta^2))

The first becomes entanglement breaking below a transmissivity threshold,
the second never does.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .symplectic import (
    CovMatrix,
    _check_squeeze,
    _check_transmissivity,
    _checked_square,
    apply_symplectic,
    beam_splitter,
    partial_trace,
    squeeze_transform,
    squeezed_vacuum_cm,
    symplectic_form,
    tensor,
    vacuum_cm,
)

# Congruence chains accumulate ~1e-13 roundoff; this margin tolerates that
# while still catching genuine CP violations at the 1e-6 level.
CP_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class GaussianChannelXY:
    """Gaussian channel V -> X V X^T + Y on n modes.

    Y is symmetrized and both matrices are frozen on construction.
    """

    X: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        x = _checked_square(self.X, "channel X matrix")
        y = _checked_square(self.Y, "channel Y matrix")
        if x.shape != y.shape:
            raise ValueError(f"X and Y must have equal shapes, got {x.shape} and {y.shape}")
        asym = np.max(np.abs(y - y.T))
        if asym > 1e-8 * max(1.0, np.max(np.abs(y))):
            raise ValueError(f"channel Y matrix is not symmetric (max asymmetry {asym:.3g})")
        x = x.copy()
        y = 0.5 * (y + y.T)
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", x)
        object.__setattr__(self, "Y", y)

    @property
    def n_modes(self) -> int:
        return self.X.shape[0] // 2

    def is_completely_positive(self, tol: float = CP_TOL) -> bool:
        """Check Y + (i/2)(Omega - X Omega X^T) >= 0 via its real embedding.

        The Hermitian matrix A + iB with A symmetric and B antisymmetric is
        positive semidefinite iff the real matrix [[A, -B], [B, A]] is, so no
        complex arithmetic is needed.
        """
        omega = symplectic_form(self.n_modes)
        b = 0.5 * (omega - self.X @ omega @ self.X.T)
        dim = self.X.shape[0]
        embedding = np.zeros((2 * dim, 2 * dim))
        embedding[:dim, :dim] = self.Y
        embedding[dim:, dim:] = self.Y
        embedding[:dim, dim:] = -b
        embedding[dim:, :dim] = b
        return bool(np.linalg.eigvalsh(embedding).min() >= -tol)


def identity_channel(n_modes: int = 1) -> GaussianChannelXY:
    """Channel that leaves every state unchanged."""
    dim = 2 * n_modes
    return GaussianChannelXY(np.eye(dim), np.zeros((dim, dim)))


def attenuation(eta: float) -> GaussianChannelXY:
    """Single-mode attenuation (lossy) channel: V -> eta V + (1 - eta) V_vac."""
    eta = _check_transmissivity(eta)
    return GaussianChannelXY(np.sqrt(eta) * np.eye(2), 0.5 * (1.0 - eta) * np.eye(2))


def squeeze_channel(r: float) -> GaussianChannelXY:
    """Single-mode squeezing as a (noiseless, unitary) channel: X = S(r), Y = 0."""
    r = _check_squeeze(r)
    return GaussianChannelXY(squeeze_transform(r).entries, np.zeros((2, 2)))


def compose(later: GaussianChannelXY, earlier: GaussianChannelXY) -> GaussianChannelXY:
    """Channel performing `earlier` first, then `later`."""
    if later.n_modes != earlier.n_modes:
        raise ValueError(
            f"mode count mismatch: {later.n_modes} vs {earlier.n_modes}"
        )
    x = later.X @ earlier.X
    y = later.X @ earlier.Y @ later.X.T + later.Y
    return GaussianChannelXY(x, y)


def apply(channel: GaussianChannelXY, state: CovMatrix) -> CovMatrix:
    """Apply the channel to a full register: X V X^T + Y."""
    if channel.n_modes != state.n_modes:
        raise ValueError(
            f"mode count mismatch: channel on {channel.n_modes} modes, "
            f"state has {state.n_modes}"
        )
    return CovMatrix(channel.X @ state.entries @ channel.X.T + channel.Y)


def apply_to_mode(channel: GaussianChannelXY, state: CovMatrix, mode: int) -> CovMatrix:
    """Apply a single-mode channel to one mode of a register, identity elsewhere."""
    if channel.n_modes != 1:
        raise ValueError("apply_to_mode expects a single-mode channel")
    if not 0 <= mode < state.n_modes:
        raise ValueError(f"mode index {mode} out of range for {state.n_modes} modes")
    dim = 2 * state.n_modes
    x_full = np.eye(dim)
    y_full = np.zeros((dim, dim))
    sl = slice(2 * mode, 2 * mode + 2)
    x_full[sl, sl] = channel.X
    y_full[sl, sl] = channel.Y
    return CovMatrix(x_full @ state.entries @ x_full.T + y_full)


def dilation_attenuation(eta: float, state: CovMatrix) -> CovMatrix:
    """Attenuation realized as its beam splitter dilation.

    Mixes the state with vacuum on a beam splitter of transmissivity eta and
    traces out the idler. Serves as the independent oracle for the closed
    form eta V + (1 - eta) V_vac.
    """
    eta = _check_transmissivity(eta)
    if state.n_modes != 1:
        raise ValueError("dilation_attenuation expects a single-mode state")
    mixed = apply_symplectic(beam_splitter(eta), tensor(state, vacuum_cm()))
    return partial_trace(mixed, [0])


def ancilla_squeezer_step(eta: float, state: CovMatrix, s_ancilla: float) -> CovMatrix:
    """Mix the state with a squeezed-vacuum ancilla on a beam splitter, trace idler.

    Because the squeezer commutes with the beam splitter when applied to both
    arms, this single passive element acts on the surviving mode as
    S(s/2) . At(eta) . S(-s/2) with s the ancilla squeeze parameter: a
    squeezed ancilla effectively realizes a squeezing operation without a
    second nonlinear source.
    """
    eta = _check_transmissivity(eta)
    s_ancilla = _check_squeeze(s_ancilla)
    if state.n_modes != 1:
        raise ValueError("ancilla_squeezer_step expects a single-mode state")
    mixed = apply_symplectic(
        beam_splitter(eta), tensor(state, squeezed_vacuum_cm(s_ancilla))
    )
    return partial_trace(mixed, [0])


def phi1(eta: float, r: float) -> GaussianChannelXY:
    """Attenuate, squeeze by r, attenuate again: the amendable-route map."""
    att = attenuation(eta)
    return compose(att, compose(squeeze_channel(r), att))


def phi2(eta: float) -> GaussianChannelXY:
    """Attenuate twice with no filter in between; equals attenuation(eta^2)."""
    att = attenuation(eta)
    return compose(att, att)
