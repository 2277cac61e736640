"""Covariance matrices and symplectic linear algebra for Gaussian optical modes.

Quadratures are ordered (q1, p1, ..., qn, pn) and the vacuum variance is 1/2,
so every pure mode has symplectic eigenvalue exactly 1/2. All entanglement
thresholds elsewhere in the package (the 1/4 separability bound in
particular) assume this normalization.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# cosh(2 * 20) is still comfortably inside double range; larger squeeze
# parameters are rejected instead of silently overflowing to inf.
MAX_SQUEEZE = 20.0

SYMMETRY_TOL = 1e-12
SYMPLECTIC_TOL = 1e-10
PHYSICAL_TOL = 1e-9

_OMEGA_BLOCK = np.array([[0.0, 1.0], [-1.0, 0.0]])


def symplectic_form(n_modes: int) -> np.ndarray:
    """Canonical symplectic form: block diagonal 2x2 antisymmetric blocks."""
    omega = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        omega[2 * k:2 * k + 2, 2 * k:2 * k + 2] = _OMEGA_BLOCK
    return omega


def _checked_square(entries, what: str) -> np.ndarray:
    m = np.asarray(entries, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"{what} must be a square matrix, got shape {m.shape}")
    if m.shape[0] == 0 or m.shape[0] % 2 != 0:
        raise ValueError(f"{what} must be 2n x 2n with n >= 1, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{what} entries must be finite")
    return m


def _check_squeeze(r: float) -> float:
    r = float(r)
    if not np.isfinite(r):
        raise ValueError("squeeze parameter must be finite")
    if abs(r) > MAX_SQUEEZE:
        raise ValueError(f"squeeze parameter {r} exceeds overflow guard |r| <= {MAX_SQUEEZE}")
    return r


def _check_transmissivity(eta: float, name: str = "eta") -> float:
    eta = float(eta)
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {eta}")
    return eta


@dataclass(frozen=True, eq=False)
class CovMatrix:
    """Second-moment matrix of an n-mode Gaussian state.

    Entries are symmetrized as (M + M^T)/2 and frozen on construction, so a
    long chain of congruence transformations cannot accumulate asymmetry.
    Instances are immutable values, safe to share across threads.
    """

    entries: np.ndarray

    def __post_init__(self):
        m = _checked_square(self.entries, "covariance matrix")
        asym = np.max(np.abs(m - m.T))
        if asym > 1e-8 * max(1.0, np.max(np.abs(m))):
            raise ValueError(f"covariance matrix is not symmetric (max asymmetry {asym:.3g})")
        sym = 0.5 * (m + m.T)
        sym.setflags(write=False)
        object.__setattr__(self, "entries", sym)

    @property
    def n_modes(self) -> int:
        return self.entries.shape[0] // 2

    def is_physical(self, tol: float = PHYSICAL_TOL) -> bool:
        """Whether every symplectic eigenvalue is >= 1/2 (up to tol)."""
        return bool(symplectic_spectrum_oracle(self).min() >= 0.5 - tol)


@dataclass(frozen=True, eq=False)
class SymplecticTransform:
    """Real linear quadrature map S acting on covariance matrices as S V S^T.

    Construction verifies S Omega S^T = Omega, i.e. that the map preserves
    the canonical commutation relations.
    """

    entries: np.ndarray

    def __post_init__(self):
        m = _checked_square(self.entries, "symplectic matrix")
        omega = symplectic_form(m.shape[0] // 2)
        defect = np.max(np.abs(m @ omega @ m.T - omega))
        if defect > SYMPLECTIC_TOL:
            raise ValueError(f"matrix is not symplectic (S Omega S^T defect {defect:.3g})")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def n_modes(self) -> int:
        return self.entries.shape[0] // 2


def vacuum_cm() -> CovMatrix:
    """Single-mode vacuum state, (1/2) * identity."""
    return CovMatrix(0.5 * np.eye(2))


def squeezed_vacuum_cm(r: float) -> CovMatrix:
    """Single-mode squeezed vacuum, (1/2) * diag(e^r, e^-r)."""
    r = _check_squeeze(r)
    return CovMatrix(0.5 * np.diag([np.exp(r), np.exp(-r)]))


def tmsv_cm(r: float) -> CovMatrix:
    """Two-mode squeezed vacuum with cosh(r)/2 diagonal and +-sinh(r)/2 cross block.

    The sign pattern of the cross block is (q1 q2) positive, (p1 p2) negative,
    which is the twin-beam correlation of a parametric source.
    """
    r = _check_squeeze(r)
    c = 0.5 * np.cosh(r)
    s = 0.5 * np.sinh(r)
    return CovMatrix(np.array([
        [c, 0.0, s, 0.0],
        [0.0, c, 0.0, -s],
        [s, 0.0, c, 0.0],
        [0.0, -s, 0.0, c],
    ]))


def beam_splitter(eta: float) -> SymplecticTransform:
    """Two-mode beam splitter of transmissivity eta.

    The matrix is orthogonal and symmetric (hence self-inverse), with the
    -sqrt(eta) sign convention on the reflected arm:

        [  sqrt(eta) I    sqrt(1-eta) I ]
        [ sqrt(1-eta) I    -sqrt(eta) I ]
    """
    eta = _check_transmissivity(eta)
    t = np.sqrt(eta)
    u = np.sqrt(1.0 - eta)
    return SymplecticTransform(np.array([
        [t, 0.0, u, 0.0],
        [0.0, t, 0.0, u],
        [u, 0.0, -t, 0.0],
        [0.0, u, 0.0, -t],
    ]))


def squeeze_transform(r: float) -> SymplecticTransform:
    """Single-mode squeezer diag(e^r, e^-r); determinant 1."""
    r = _check_squeeze(r)
    return SymplecticTransform(np.diag([np.exp(r), np.exp(-r)]))


def apply_symplectic(transform: SymplecticTransform, state: CovMatrix) -> CovMatrix:
    """Congruence action V -> S V S^T (re-symmetrized on construction)."""
    if transform.n_modes != state.n_modes:
        raise ValueError(
            f"mode count mismatch: transform acts on {transform.n_modes} modes, "
            f"state has {state.n_modes}"
        )
    s = transform.entries
    return CovMatrix(s @ state.entries @ s.T)


def tensor(state_a: CovMatrix, state_b: CovMatrix) -> CovMatrix:
    """Direct sum of two covariance matrices (uncorrelated subsystems)."""
    na = 2 * state_a.n_modes
    nb = 2 * state_b.n_modes
    out = np.zeros((na + nb, na + nb))
    out[:na, :na] = state_a.entries
    out[na:, na:] = state_b.entries
    return CovMatrix(out)


def partial_trace(state: CovMatrix, keep) -> CovMatrix:
    """Discard all modes except `keep` (ordered list of mode indices)."""
    keep = list(keep)
    if not keep:
        raise ValueError("keep list must not be empty")
    if len(set(keep)) != len(keep):
        raise ValueError(f"keep indices must be distinct, got {keep}")
    for m in keep:
        if not 0 <= m < state.n_modes:
            raise ValueError(f"mode index {m} out of range for {state.n_modes} modes")
    rows = [2 * m + k for m in keep for k in (0, 1)]
    return CovMatrix(state.entries[np.ix_(rows, rows)])


def embed_two_mode(transform: SymplecticTransform, i: int, j: int, n_modes: int) -> SymplecticTransform:
    """Embed a two-mode transform so it acts on modes (i, j) of an n-mode register.

    All other quadratures are left untouched; the result is again symplectic.
    """
    if transform.n_modes != 2:
        raise ValueError("embed_two_mode expects a two-mode transform")
    if i == j:
        raise ValueError(f"target modes must differ, got i=j={i}")
    for idx in (i, j):
        if not 0 <= idx < n_modes:
            raise ValueError(f"mode index {idx} out of range for {n_modes} modes")
    full = np.eye(2 * n_modes)
    s4 = transform.entries
    targets = (i, j)
    for a, ma in enumerate(targets):
        for b, mb in enumerate(targets):
            full[2 * ma:2 * ma + 2, 2 * mb:2 * mb + 2] = s4[2 * a:2 * a + 2, 2 * b:2 * b + 2]
    return SymplecticTransform(full)


def symplectic_spectrum_oracle(state) -> np.ndarray:
    """Symplectic eigenvalues of a (possibly partially transposed) CM, ascending.

    Computed from the raw spectrum of Omega V: the eigenvalues come in pairs
    +-i nu_k, so the absolute imaginary parts are sorted and averaged in
    adjacent pairs. Works for any symmetric positive definite matrix, not
    only physical states, which is what the separability test needs.
    """
    m = np.asarray(getattr(state, "entries", state), dtype=float)
    n = m.shape[0] // 2
    eigenvalues = np.linalg.eigvals(symplectic_form(n) @ m)
    vals = np.sort(np.abs(eigenvalues.imag))
    return 0.5 * (vals[0::2] + vals[1::2])
