"""Closed-form coherence quantities for Gaussian states.

All entropic quantities are reported in bits (log base 2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import GaussianState, default_tol, is_incoherent_state, williamson_spectrum
from .errors import InvariantViolationError

# below this occupation a mode is treated as exactly empty (0 log 0 = 0)
_ZERO_OCCUPATION = 1e-300


def _g(x: float) -> float:
    """Bosonic entropy function (x+1) log2(x+1) - x log2 x, with g(0) = 0."""
    if x <= _ZERO_OCCUPATION:
        return 0.0
    return float((x + 1.0) * np.log2(x + 1.0) - x * np.log2(x))


@dataclass(frozen=True)
class CoherenceReport:
    """Coherence summary of a state.

    Attributes:
        n_bar: per-mode mean photon numbers.
        entropy: von Neumann entropy in bits.
        c_rel_ent: relative entropy of coherence in bits.
        reference: nearest incoherent reference, the thermal product with
            occupations ``n_bar``.
    """

    n_bar: list[float]
    entropy: float
    c_rel_ent: float
    reference: GaussianState


def mean_photon_numbers(state: GaussianState, tol: float | None = None) -> list[float]:
    """Per-mode mean photon numbers n_i = [tr V^(i) + ||d^(i)||^2 - 2] / 4."""
    t = default_tol(state.cov, tol)
    out = []
    for i in range(state.modes):
        block = state.mode_cov(i)
        d_i = state.mode_mean(i)
        n = (block[0, 0] + block[1, 1] + float(d_i @ d_i) - 2.0) / 4.0
        if n < -t:
            raise InvariantViolationError(
                f"negative mean photon number {n:.3e} in mode {i}: corrupted state"
            )
        out.append(max(n, 0.0))
    return out


def von_neumann_entropy(state: GaussianState) -> float:
    """Von Neumann entropy in bits, sum of g((v_i - 1)/2) over the symplectic spectrum."""
    spectrum = williamson_spectrum(state)
    return sum(_g(max(v - 1.0, 0.0) / 2.0) for v in spectrum)


def relative_entropy_coherence(state: GaussianState) -> CoherenceReport:
    """Relative entropy of coherence and its nearest thermal reference.

    C_R = -S(rho) + sum_i g(n_i) with n_i the mean photon numbers; the
    infimum over incoherent states is attained at the thermal product with
    the same occupations.
    """
    from .zoo import thermal

    n_bar = mean_photon_numbers(state)
    entropy = von_neumann_entropy(state)
    c = -entropy + sum(_g(n) for n in n_bar)
    return CoherenceReport(
        n_bar=n_bar,
        entropy=entropy,
        c_rel_ent=max(c, 0.0),
        reference=thermal(n_bar),
    )


def relative_entropy_to_thermal(state: GaussianState, n_ref: list[float]) -> float:
    """Relative entropy S(rho || thermal(n_ref)) in bits.

    Serves as the minimization objective over thermal references; its
    minimum over ``n_ref`` equals :func:`relative_entropy_coherence`.
    """
    if len(n_ref) != state.modes:
        raise ValueError(
            f"expected {state.modes} reference occupations, got {len(n_ref)}"
        )
    if any(n <= 0.0 for n in n_ref):
        raise ValueError("thermal reference occupations must be strictly positive")
    n_bar = mean_photon_numbers(state)
    cross = sum(
        (n + 1.0) * np.log2(nr + 1.0) - n * np.log2(nr)
        for n, nr in zip(n_bar, n_ref)
    )
    return float(-von_neumann_entropy(state) + cross)


def coherence_is_zero(state: GaussianState, tol: float | None = None) -> bool:
    """True iff the state carries no coherence (is a thermal product)."""
    return is_incoherent_state(state, tol) is not None
