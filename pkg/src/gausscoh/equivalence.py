"""Equivalence of Gaussian states under incoherent operations.

Two coherent states are mutually convertible by incoherent Gaussian
channels iff they are related by an incoherent unitary: a mode permutation
composed with per-mode SO(2) rotations. The decider searches that finite
family (permutations pruned by mode fingerprints, angles solved from
alignment constraints) and emits the unitary as a verifiable certificate.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.optimize

from .coherence import relative_entropy_coherence
from .core import GaussianState, default_tol, is_incoherent_state, validate_state
from .errors import ShapeError

#: default relative residual tolerance for accepting a certificate
RESIDUAL_TOL_REL = 1e-8


def rotation(theta: float) -> np.ndarray:
    """The SO(2) block [[cos, sin], [-sin, cos]] used throughout."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, s], [-s, c]])


@dataclass(frozen=True)
class IncoherentUnitary:
    """Mode permutation plus per-mode rotation angles.

    ``perm[i]`` is the target slot of source mode i (0-based); the matrix
    carries R(angles[i]) in the rows of slot perm[i] and columns of mode i.
    All blocks have determinant +1, so the matrix is orthogonal symplectic.
    """

    perm: tuple[int, ...]
    angles: tuple[float, ...]

    def __post_init__(self):
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"perm {self.perm} is not a permutation")
        if len(self.angles) != len(self.perm):
            raise ValueError("need one angle per mode")

    @property
    def modes(self) -> int:
        return len(self.perm)

    def matrix(self) -> np.ndarray:
        u = np.zeros((2 * self.modes, 2 * self.modes))
        for i, target in enumerate(self.perm):
            u[2 * target : 2 * target + 2, 2 * i : 2 * i + 2] = rotation(
                self.angles[i]
            )
        return u

    def inverse(self) -> "IncoherentUnitary":
        perm_inv = [0] * self.modes
        angles_inv = [0.0] * self.modes
        for i, target in enumerate(self.perm):
            perm_inv[target] = i
            angles_inv[target] = -self.angles[i]
        return IncoherentUnitary(perm=tuple(perm_inv), angles=tuple(angles_inv))


class EquivalenceVerdict:
    """Base class for the outcomes of the equivalence decision."""


@dataclass(frozen=True)
class Equivalent(EquivalenceVerdict):
    certificate: IncoherentUnitary
    residual: float


@dataclass(frozen=True)
class NotEquivalent(EquivalenceVerdict):
    witness: str
    best_residual: float | None = None


@dataclass(frozen=True)
class AllIncoherent(EquivalenceVerdict):
    """Both states are thermal products; they form one conversion class."""


@dataclass(frozen=True)
class HypothesisViolated(EquivalenceVerdict):
    mode: int
    reason: str


def apply_incoherent_unitary(
    unitary: IncoherentUnitary, state: GaussianState
) -> GaussianState:
    """Conjugate a state by an incoherent unitary: (V, d) -> (UVU^t, Ud)."""
    if unitary.modes != state.modes:
        raise ShapeError(
            f"unitary has {unitary.modes} modes but state has {state.modes}"
        )
    u = unitary.matrix()
    return validate_state(u @ state.cov @ u.T, u @ state.mean)


@dataclass(frozen=True)
class HypothesisViolation:
    mode: int
    reason: str


def check_hypothesis(
    state: GaussianState, tol: float | None = None
) -> HypothesisViolation | None:
    """Check the structural hypothesis of the equivalence theorems.

    Multimode: every mode must have at least one nonzero off-diagonal
    covariance block. One mode: the state must be coherent (nonzero mean or
    anisotropic covariance). Returns the first violation, or None.
    """
    t = default_tol(state.cov, tol)
    m = state.modes
    if m == 1:
        if np.linalg.norm(state.mean) > t:
            return None
        block = state.mode_cov(0)
        lam = (block[0, 0] + block[1, 1]) / 2.0
        if np.linalg.norm(block - lam * np.eye(2)) > t:
            return None
        return HypothesisViolation(
            mode=0, reason="one-mode state is incoherent (d = 0 and V is isotropic)"
        )
    for i in range(m):
        if all(
            np.linalg.norm(state.cross_cov(i, j)) <= t for j in range(m) if j != i
        ):
            return HypothesisViolation(
                mode=i, reason=f"mode {i} has no nonzero off-diagonal block"
            )
    return None


# ---------------------------------------------------------------------------
# permutation pruning
# ---------------------------------------------------------------------------


def _mode_fingerprint(state: GaussianState, i: int, tol: float):
    eigs = np.linalg.eigvalsh(state.mode_cov(i))
    d_norm = float(np.linalg.norm(state.mode_mean(i)))
    blocks = sorted(
        tuple(np.linalg.svd(state.cross_cov(i, j), compute_uv=False))
        for j in range(state.modes)
        if j != i and np.linalg.norm(state.cross_cov(i, j)) > tol
    )
    return (tuple(eigs), d_norm, blocks)


def _fingerprints_match(fp_a, fp_b, tol: float) -> bool:
    eigs_a, d_a, blocks_a = fp_a
    eigs_b, d_b, blocks_b = fp_b
    if len(blocks_a) != len(blocks_b):
        return False
    if abs(d_a - d_b) > tol:
        return False
    if any(abs(x - y) > tol for x, y in zip(eigs_a, eigs_b)):
        return False
    for pa, pb in zip(blocks_a, blocks_b):
        if any(abs(x - y) > tol for x, y in zip(pa, pb)):
            return False
    return True


def _candidate_permutations(rho: GaussianState, sigma: GaussianState, tol: float):
    """Yield permutations consistent with the per-mode fingerprints, lexicographically."""
    m = rho.modes
    band = max(tol, 1e-6 * max(1.0, float(np.linalg.norm(rho.cov))))
    fp_rho = [_mode_fingerprint(rho, i, tol) for i in range(m)]
    fp_sig = [_mode_fingerprint(sigma, i, tol) for i in range(m)]
    compatible = [
        [k for k in range(m) if _fingerprints_match(fp_rho[i], fp_sig[k], band)]
        for i in range(m)
    ]

    def recurse(i: int, used: set, acc: list):
        if i == m:
            yield tuple(acc)
            return
        for k in compatible[i]:
            if k not in used:
                acc.append(k)
                yield from recurse(i + 1, used | {k}, acc)
                acc.pop()

    yield from recurse(0, set(), [])


# ---------------------------------------------------------------------------
# angle solving
# ---------------------------------------------------------------------------


def _solve_rotation_left(mat: np.ndarray, target: np.ndarray, tol: float):
    """Angle theta with R(theta) @ mat = target, or None.

    The equation is linear in (cos theta, sin theta); solved by least
    squares and accepted only when the solution lies on the unit circle.
    """
    coeff = np.array(
        [
            [mat[0, 0], mat[1, 0]],
            [mat[0, 1], mat[1, 1]],
            [mat[1, 0], -mat[0, 0]],
            [mat[1, 1], -mat[0, 1]],
        ]
    )
    rhs = np.array([target[0, 0], target[0, 1], target[1, 0], target[1, 1]])
    (c, s), *_ = np.linalg.lstsq(coeff, rhs, rcond=None)
    norm = math.hypot(c, s)
    if abs(norm - 1.0) > max(100.0 * tol, 1e-6):
        return None
    return math.atan2(s / norm, c / norm)


def _diag_angle_candidates(block_a: np.ndarray, block_b: np.ndarray) -> list[float]:
    """Angles with R(theta) A R(theta)^t = B for symmetric anisotropic A."""
    # conjugation by R(theta) rotates the traceless part's phase by -2 theta
    psi_a = 0.5 * math.atan2(block_a[0, 1], (block_a[0, 0] - block_a[1, 1]) / 2.0)
    psi_b = 0.5 * math.atan2(block_b[0, 1], (block_b[0, 0] - block_b[1, 1]) / 2.0)
    theta = psi_a - psi_b
    return [theta, theta + math.pi]


def _block_graph(rho: GaussianState, tol: float) -> list[list[int]]:
    m = rho.modes
    adj = [[] for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            if np.linalg.norm(rho.cross_cov(i, j)) > tol:
                adj[i].append(j)
                adj[j].append(i)
    return adj


def _golden_section(f, lo: float, hi: float, iters: int = 40) -> float:
    """Minimize a unimodal scalar function on [lo, hi]; returns the argmin."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - inv_phi * (b - a)
    x2 = a + inv_phi * (b - a)
    f1, f2 = f(x1), f(x2)
    for _ in range(iters):
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - inv_phi * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + inv_phi * (b - a)
            f2 = f(x2)
    return (a + b) / 2.0


def _residual(
    rho: GaussianState, sigma: GaussianState, perm, angles
) -> float:
    u = IncoherentUnitary(perm=tuple(perm), angles=tuple(angles)).matrix()
    return max(
        float(np.linalg.norm(u @ rho.cov @ u.T - sigma.cov)),
        float(np.linalg.norm(u @ rho.mean - sigma.mean)),
    )


def _propagate_component(
    rho, sigma, perm, component, root, theta_root, adj, angles, tol
) -> bool:
    """BFS-assign angles over a component from the root; False on dead end."""
    angles[root] = theta_root
    queue = [root]
    seen = {root}
    while queue:
        i = queue.pop(0)
        for j in adj[i]:
            if j in seen:
                continue
            # want R(theta_i) V_ij R(theta_j)^t = B; with A = R(theta_i) V_ij
            # this is R(theta_j) A^t = B^t, linear in (cos, sin)
            block = rotation(angles[i]) @ rho.cross_cov(i, j)
            target = sigma.cross_cov(perm[i], perm[j])
            theta = _solve_rotation_left(block.T, target.T, tol)
            if theta is None:
                return False
            angles[j] = theta
            seen.add(j)
            queue.append(j)
    return True


def _component_residual(rho, sigma, perm, component, angles) -> float:
    total = 0.0
    comp = set(component)
    for i in component:
        r_i = rotation(angles[i])
        total += float(
            np.linalg.norm(r_i @ rho.mode_cov(i) @ r_i.T - sigma.mode_cov(perm[i]))
            ** 2
        )
        total += float(
            np.linalg.norm(r_i @ rho.mode_mean(i) - sigma.mode_mean(perm[i])) ** 2
        )
        for j in component:
            if j <= i or j not in comp:
                continue
            r_j = rotation(angles[j])
            total += float(
                np.linalg.norm(
                    r_i @ rho.cross_cov(i, j) @ r_j.T
                    - sigma.cross_cov(perm[i], perm[j])
                )
                ** 2
            )
    return math.sqrt(total)


def _solve_angles(rho, sigma, perm, tol) -> list[float] | None:
    """Solve per-mode angles for a fixed permutation, or None on failure."""
    m = rho.modes
    adj = _block_graph(rho, tol)
    angles = [0.0] * m

    # connected components of the nonzero-block graph
    unvisited = set(range(m))
    components = []
    while unvisited:
        start = min(unvisited)
        comp, queue = [], [start]
        unvisited.discard(start)
        while queue:
            i = queue.pop()
            comp.append(i)
            for j in adj[i]:
                if j in unvisited:
                    unvisited.discard(j)
                    queue.append(j)
        components.append(sorted(comp))

    # anchors below this scale give unreliable angles; fall back to blocks
    anchor_tol = max(100.0 * tol, 1e-6)
    for component in components:
        candidates: list[tuple[int, list[float]]] = []
        root = None
        for i in component:
            if np.linalg.norm(rho.mode_mean(i)) > anchor_tol:
                phi_a = math.atan2(rho.mode_mean(i)[1], rho.mode_mean(i)[0])
                phi_b = math.atan2(
                    sigma.mode_mean(perm[i])[1], sigma.mode_mean(perm[i])[0]
                )
                root, candidates = i, [(i, [phi_a - phi_b])]
                break
        if root is None:
            for i in component:
                eigs = np.linalg.eigvalsh(rho.mode_cov(i))
                if eigs[1] - eigs[0] > anchor_tol:
                    root = i
                    candidates = [
                        (
                            i,
                            _diag_angle_candidates(
                                rho.mode_cov(i), sigma.mode_cov(perm[i])
                            ),
                        )
                    ]
                    break
        best = None
        if root is not None:
            for theta in candidates[0][1]:
                trial = list(angles)
                if not _propagate_component(
                    rho, sigma, perm, component, root, theta, adj, trial, tol
                ):
                    continue
                res = _component_residual(rho, sigma, perm, component, trial)
                if best is None or res < best[0]:
                    best = (res, trial)
        else:
            # fully degenerate component: scan the single free angle
            root = component[0]

            def comp_res(theta: float) -> float:
                trial = list(angles)
                if not _propagate_component(
                    rho, sigma, perm, component, root, theta, adj, trial, tol
                ):
                    return math.inf
                return _component_residual(rho, sigma, perm, component, trial)

            grid = np.linspace(0.0, 2.0 * math.pi, 360, endpoint=False)
            values = [comp_res(t) for t in grid]
            k = int(np.argmin(values))
            if math.isinf(values[k]):
                return None
            width = 2.0 * math.pi / 360
            theta = _golden_section(comp_res, grid[k] - width, grid[k] + width)
            trial = list(angles)
            if not _propagate_component(
                rho, sigma, perm, component, root, theta, adj, trial, tol
            ):
                return None
            best = (comp_res(theta), trial)
        if best is None:
            return None
        for i in component:
            angles[i] = best[1][i]
    return angles


def decide_equivalence(
    rho: GaussianState, sigma: GaussianState, tol: float | None = None
) -> EquivalenceVerdict:
    """Decide incoherent Gaussian equivalence of two states.

    Returns :class:`Equivalent` with an incoherent-unitary certificate,
    :class:`NotEquivalent` with a witness, :class:`AllIncoherent` when both
    states are thermal products, or :class:`HypothesisViolated` when a
    coherent multimode state falls outside the theorem's hypothesis.
    """
    if rho.modes != sigma.modes:
        raise ShapeError(f"mode mismatch: {rho.modes} vs {sigma.modes}")
    inc_r = is_incoherent_state(rho)
    inc_s = is_incoherent_state(sigma)
    if inc_r is not None and inc_s is not None:
        return AllIncoherent()
    if (inc_r is None) != (inc_s is None):
        return NotEquivalent(witness="coherence mismatch")
    for state in (rho, sigma):
        violation = check_hypothesis(state)
        if violation is not None and rho.modes >= 2:
            return HypothesisViolated(mode=violation.mode, reason=violation.reason)

    accept = RESIDUAL_TOL_REL * max(1.0, float(np.linalg.norm(rho.cov)))
    if tol is not None:
        accept = tol
    t = default_tol(rho.cov)

    from .core import williamson_spectrum

    spec_r = williamson_spectrum(rho)
    spec_s = williamson_spectrum(sigma)
    if np.max(np.abs(spec_r - spec_s)) > max(accept, t):
        return NotEquivalent(witness="symplectic spectrum")

    best_residual = math.inf
    found_candidate = False
    for perm in _candidate_permutations(rho, sigma, t):
        found_candidate = True
        angles = _solve_angles(rho, sigma, perm, t)
        if angles is None:
            continue
        res = _residual(rho, sigma, perm, angles)
        if res < best_residual:
            best_residual = res
        if res <= accept:
            return Equivalent(
                certificate=IncoherentUnitary(perm=perm, angles=tuple(angles)),
                residual=res,
            )
    if not found_candidate:
        return NotEquivalent(witness="mode fingerprints")
    return NotEquivalent(
        witness="search exhausted",
        best_residual=None if math.isinf(best_residual) else best_residual,
    )


# ---------------------------------------------------------------------------
# brute-force oracle
# ---------------------------------------------------------------------------


def _coordinate_descent(f_coord, f_full, m, start, grid, sweeps=8):
    angles = list(start)
    value = f_full(angles)
    for _ in range(sweeps):
        moved = False
        for k in range(m):
            values = f_coord(angles, k, grid)
            j = int(np.argmin(values))
            if values[j] < value - 1e-15:
                angles[k] = float(grid[j])
                value = values[j]
                moved = True
        if not moved:
            break
    return angles, value


def brute_force_equivalence(
    rho: GaussianState,
    sigma: GaussianState,
    grid_size: int = 360,
    refine_iters: int = 3,
    tol: float | None = None,
) -> EquivalenceVerdict:
    """Independent search oracle for :func:`decide_equivalence`.

    Loops over all mode permutations; for each, minimizes the residual over
    the per-mode angles by multi-start coordinate descent on a dense angle
    grid, followed by golden-section refinement of each angle. Limited to
    three modes.
    """
    if rho.modes != sigma.modes:
        raise ShapeError(f"mode mismatch: {rho.modes} vs {sigma.modes}")
    m = rho.modes
    if m > 3:
        raise ValueError("brute-force oracle supports at most 3 modes")
    inc_r = is_incoherent_state(rho)
    inc_s = is_incoherent_state(sigma)
    if inc_r is not None and inc_s is not None:
        return AllIncoherent()
    if (inc_r is None) != (inc_s is None):
        return NotEquivalent(witness="coherence mismatch")

    accept = RESIDUAL_TOL_REL * max(1.0, float(np.linalg.norm(rho.cov)))
    if tol is not None:
        accept = tol
    grid = np.linspace(0.0, 2.0 * math.pi, grid_size, endpoint=False)
    rots = np.stack([rotation(t) for t in grid])
    rng = np.random.default_rng(0)
    starts = [np.zeros(m)] + [rng.uniform(0.0, 2.0 * math.pi, size=m) for _ in range(5)]

    best_residual = math.inf
    best = None
    for perm in itertools.permutations(range(m)):
        # targets permuted back to source order: residual becomes
        # ||blkdiag(R) V blkdiag(R)^t - covp||_F^2 + ||blkdiag(R) d - dp||^2
        idx = np.concatenate([[2 * p, 2 * p + 1] for p in perm])
        covp = sigma.cov[np.ix_(idx, idx)]
        dp = sigma.mean[idx]

        def f_sq(angles):
            blk = np.zeros((2 * m, 2 * m))
            for i, a in enumerate(angles):
                c, s = math.cos(a), math.sin(a)
                blk[2 * i, 2 * i] = c
                blk[2 * i, 2 * i + 1] = s
                blk[2 * i + 1, 2 * i] = -s
                blk[2 * i + 1, 2 * i + 1] = c
            return float(
                np.linalg.norm(blk @ rho.cov @ blk.T - covp) ** 2
                + np.linalg.norm(blk @ rho.mean - dp) ** 2
            )

        def f_coord(angles, k, _grid):
            # f_sq over the grid for angle k, other angles fixed
            fixed = [rotation(a) for a in angles]
            base = 0.0
            for i in range(m):
                if i == k:
                    continue
                base += (
                    np.linalg.norm(
                        fixed[i] @ rho.mode_cov(i) @ fixed[i].T
                        - sigma.mode_cov(perm[i])
                    )
                    ** 2
                )
                base += (
                    np.linalg.norm(
                        fixed[i] @ rho.mode_mean(i) - sigma.mode_mean(perm[i])
                    )
                    ** 2
                )
                for j in range(i + 1, m):
                    if j == k:
                        continue
                    base += (
                        2.0
                        * np.linalg.norm(
                            fixed[i] @ rho.cross_cov(i, j) @ fixed[j].T
                            - sigma.cross_cov(perm[i], perm[j])
                        )
                        ** 2
                    )
            var = np.zeros(len(_grid))
            diag = np.einsum(
                "tab,bc,tdc->tad", rots, rho.mode_cov(k), rots
            ) - sigma.mode_cov(perm[k])
            var += np.einsum("tad,tad->t", diag, diag)
            dvec = rots @ rho.mode_mean(k) - sigma.mode_mean(perm[k])
            var += np.einsum("ta,ta->t", dvec, dvec)
            for j in range(m):
                if j == k:
                    continue
                block = rho.cross_cov(k, j) @ fixed[j].T
                target = sigma.cross_cov(perm[k], perm[j])
                diff = np.einsum("tab,bc->tac", rots, block) - target
                var += 2.0 * np.einsum("tac,tac->t", diff, diff)
            return base + var

        candidates = []
        for start in starts:
            angles, value = _coordinate_descent(f_coord, f_sq, m, start, grid)
            candidates.append((value, angles))
        candidates.sort(key=lambda pair: pair[0])
        width = 2.0 * math.pi / grid_size
        for _, angles in candidates[:2]:
            for _ in range(refine_iters):
                for k in range(m):

                    def f_k(theta, k=k):
                        trial = list(angles)
                        trial[k] = theta
                        return f_sq(trial)

                    angles[k] = _golden_section(
                        f_k, angles[k] - width, angles[k] + width
                    )
            # coordinate-wise refinement stalls on coupled angles; polish jointly
            polish = scipy.optimize.minimize(
                f_sq,
                angles,
                method="Nelder-Mead",
                options={"xatol": 1e-13, "fatol": 1e-26, "maxiter": 4000},
            )
            angles = list(polish.x)
            res = _residual(rho, sigma, perm, angles)
            if res < best_residual:
                best_residual = res
                best = (perm, tuple(float(a) for a in angles))
            if best_residual <= accept:
                break
        if best_residual <= accept:
            break

    if best is not None and best_residual <= accept:
        return Equivalent(
            certificate=IncoherentUnitary(perm=best[0], angles=best[1]),
            residual=best_residual,
        )
    return NotEquivalent(witness="search exhausted", best_residual=best_residual)


# ---------------------------------------------------------------------------
# frozen coherence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FrozenReport:
    frozen: bool
    coherence_in: float
    coherence_out: float
    certificate: IncoherentUnitary | None = None


def is_frozen(rho: GaussianState, channel, tol: float = 1e-9) -> FrozenReport:
    """Whether a strictly incoherent channel leaves the state's coherence unchanged.

    When frozen, the channel's input and output are incoherent-equivalent
    and the report carries the certificate from :func:`decide_equivalence`.
    """
    from .channels import apply_channel, classify_incoherent

    cls = classify_incoherent(channel)
    if not cls.is_strict:
        raise ValueError(f"channel is not strictly incoherent: {cls.verdict}")
    out = apply_channel(channel, rho)
    c_in = relative_entropy_coherence(rho).c_rel_ent
    c_out = relative_entropy_coherence(out).c_rel_ent
    frozen = abs(c_in - c_out) <= tol
    certificate = None
    if frozen:
        verdict = decide_equivalence(rho, out)
        if isinstance(verdict, Equivalent):
            certificate = verdict.certificate
    return FrozenReport(
        frozen=frozen, coherence_in=c_in, coherence_out=c_out, certificate=certificate
    )
