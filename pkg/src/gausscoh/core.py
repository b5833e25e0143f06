"""Phase-space representation of m-mode Gaussian states.

A state is the pair (V, d): a 2m x 2m real symmetric covariance matrix and
a mean vector of length 2m, in quadrature ordering (x1, p1, ..., xm, pm)
with vacuum variance normalized to 1 (V_vac = I).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    NotSymmetricError,
    NumericError,
    ShapeError,
    UncertaintyViolationError,
)

DEFAULT_TOL_REL = 1e-9

#: tolerance used when pairing the +-iv eigenvalues of Omega V
PAIRING_TOL = 1e-8


def default_tol(cov: np.ndarray, tol: float | None = None) -> float:
    """Absolute tolerance for comparisons involving ``cov``.

    Scales as ``DEFAULT_TOL_REL * max(1, ||cov||_F)`` unless an explicit
    override is given.
    """
    if tol is not None:
        return float(tol)
    return DEFAULT_TOL_REL * max(1.0, float(np.linalg.norm(cov)))


def symplectic_form(m: int) -> np.ndarray:
    """Return the 2m x 2m symplectic form, a direct sum of [[0,1],[-1,0]]."""
    if m < 1:
        raise ValueError(f"mode count must be a positive integer, got {m}")
    omega2 = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return np.kron(np.eye(m), omega2)


@dataclass(frozen=True)
class GaussianState:
    """Immutable validated Gaussian state (V, d).

    Do not construct directly; use :func:`validate_state` (or the helpers
    in :mod:`gausscoh.zoo`), which symmetrizes and checks the uncertainty
    relation.
    """

    cov: np.ndarray
    mean: np.ndarray
    modes: int = field(default=0)

    def __post_init__(self):
        object.__setattr__(self, "modes", self.cov.shape[0] // 2)
        self.cov.setflags(write=False)
        self.mean.setflags(write=False)

    def mode_cov(self, i: int) -> np.ndarray:
        """2x2 diagonal covariance block of mode ``i`` (0-based)."""
        return self.cov[2 * i : 2 * i + 2, 2 * i : 2 * i + 2]

    def mode_mean(self, i: int) -> np.ndarray:
        """Length-2 mean subvector of mode ``i`` (0-based)."""
        return self.mean[2 * i : 2 * i + 2]

    def cross_cov(self, i: int, j: int) -> np.ndarray:
        """2x2 off-diagonal covariance block between modes ``i`` and ``j``."""
        return self.cov[2 * i : 2 * i + 2, 2 * j : 2 * j + 2]


def validate_state(
    cov: np.ndarray, mean: np.ndarray, tol: float | None = None
) -> GaussianState:
    """Validate (cov, mean) and return an immutable :class:`GaussianState`.

    The covariance is symmetrized as (V + V^t)/2 when the asymmetry is
    within tolerance, and the minimum symplectic eigenvalue is required to
    be >= 1 - tol (uncertainty relation).
    """
    cov = np.asarray(cov, dtype=float)
    mean = np.asarray(mean, dtype=float)
    if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
        raise ShapeError(f"covariance must be a square matrix, got shape {cov.shape}")
    n = cov.shape[0]
    if n % 2 != 0 or n == 0:
        raise ShapeError(f"covariance must be 2m x 2m with m >= 1, got {n} x {n}")
    if mean.shape != (n,):
        raise ShapeError(
            f"mean must have length {n} to match covariance, got shape {mean.shape}"
        )
    t = default_tol(cov, tol)
    asym = np.max(np.abs(cov - cov.T))
    if asym > t:
        raise NotSymmetricError(
            f"covariance asymmetry {asym:.3e} exceeds tolerance {t:.3e}"
        )
    cov = (cov + cov.T) / 2.0
    state = GaussianState(cov=cov, mean=mean.copy())
    spectrum = williamson_spectrum(state)
    if spectrum[0] < 1.0 - t:
        raise UncertaintyViolationError(
            f"minimum symplectic eigenvalue {spectrum[0]:.12g} violates the "
            f"uncertainty relation (must be >= 1)",
            value=float(spectrum[0]),
        )
    return state


def williamson_spectrum(state: GaussianState, tol: float | None = None) -> np.ndarray:
    """Symplectic eigenvalues of the covariance matrix, sorted ascending.

    Computed as the moduli of the purely imaginary, +-paired eigenvalues of
    Omega V. A failure of the +- pairing structure raises
    :class:`NumericError` instead of silently sorting.
    """
    m = state.modes
    omega = symplectic_form(m)
    try:
        eigs = np.linalg.eigvals(omega @ state.cov)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NumericError(f"eigenvalue computation failed: {exc}") from exc
    scale = max(1.0, float(np.linalg.norm(state.cov)))
    pairing_tol = PAIRING_TOL * scale if tol is None else tol
    if np.max(np.abs(eigs.real)) > pairing_tol:
        raise NumericError(
            "eigenvalues of Omega V are not purely imaginary "
            f"(max real part {np.max(np.abs(eigs.real)):.3e})"
        )
    imag = np.sort(eigs.imag)
    neg, pos = imag[:m], imag[m:]
    if np.max(np.abs(pos + neg[::-1])) > pairing_tol:
        raise NumericError("eigenvalues of Omega V do not come in +-iv pairs")
    return np.sort(pos)


def is_pure(state: GaussianState, tol: float | None = None) -> bool:
    """True iff det V = 1 within tolerance (the purity criterion)."""
    t = default_tol(state.cov, tol)
    return abs(np.linalg.det(state.cov) - 1.0) <= max(t, DEFAULT_TOL_REL)


def is_incoherent_state(
    state: GaussianState, tol: float | None = None
) -> list[float] | None:
    """Mean photon numbers [n_1, ..., n_m] if the state is incoherent.

    An incoherent Gaussian state is a tensor product of thermal states:
    zero mean, no cross-mode correlations, and each mode block equal to
    (2 n_i + 1) I_2. Returns ``None`` for coherent states.
    """
    t = default_tol(state.cov, tol)
    if np.linalg.norm(state.mean) > t:
        return None
    m = state.modes
    for i in range(m):
        for j in range(i + 1, m):
            if np.linalg.norm(state.cross_cov(i, j)) > t:
                return None
    n_bars = []
    for i in range(m):
        block = state.mode_cov(i)
        lam = (block[0, 0] + block[1, 1]) / 2.0
        if np.linalg.norm(block - lam * np.eye(2)) > t:
            return None
        n_bars.append(max((lam - 1.0) / 2.0, 0.0))
    return n_bars
