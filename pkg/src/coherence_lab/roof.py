"""Convex roof of the geometric-mean coherence.

The roof of a mixed state is the infimum of the ensemble-averaged pure-state
measure over all pure-state decompositions.  Decompositions of a rank-r state
are parameterized through its spectral form: every size-m ensemble arises
from an m x r isometry V acting on the square-root-weighted eigenvectors,

    psi~_k = sum_j V_kj sqrt(lam_j) |e_j>,    V^dag V = I.

The objective is evaluated in homogeneous form, d * sum_k prod_i
|<i|psi~_k>|^(2/d), which equals the ensemble average without dividing by the
member weights.  The search parameterizes V as the first r columns of
exp(H) for a skew-Hermitian H (m^2 real parameters) and runs a derivative-free
pattern search over all restarts as one batched population; the returned
value is therefore an upper bound on the true infimum.

For rank-2 inputs the chart search is augmented with a structured candidate
family: minimizing ensembles of this measure concentrate weight on the
per-coordinate range directions whose corresponding amplitude vanishes
(those members cost nothing), so the family enumerates zero-, one-, two-,
and three-line configurations with the leftover weight split among one or
two generic members.  The best candidate from either route wins.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RoofOptimizerError
from .measures import Ensemble, average_g, g_coherence_pure
from .states import DensityMatrix, PureState, eigendecompose, make_rng

DEFAULT_RESTARTS = 20
DEFAULT_TOL = 1e-8

# Search hyperparameters: initial coordinate step, spread of random restart
# points, expansion/shrink factors, and the step size at which a population
# member is considered finished.
_STEP_INIT = 0.5
_RESTART_SPREAD = 0.7
_STEP_SHRINK = 0.5
_STEP_EXPAND = 2.0
_STEP_STOP = 1e-8
_MAX_SWEEPS = 500

# Ensemble members below this weight are dropped from the reported
# decomposition; their contribution to both the mixture and the average is
# bounded by the weight itself.
_MEMBER_WEIGHT_CUTOFF = 1e-12


@dataclass(frozen=True)
class RoofResult:
    """Outcome of a decomposition search.

    ``value`` is the averaged pure-state measure of ``ensemble`` (an upper
    bound on the infimum).  ``converged`` records whether the two best
    restarts agreed; a False here flags a value that should be treated as a
    loose bound.
    """

    value: float
    ensemble: Ensemble
    restarts_used: int
    converged: bool


def _spectral_root(rho: DensityMatrix) -> np.ndarray:
    """Columns sqrt(lam_j) |e_j> for the eigenvalues surviving the clamp."""
    lam, vecs = eigendecompose(rho)
    keep = lam > 0.0
    return vecs[:, keep] * np.sqrt(lam[keep])


def _skew_from_params(theta: np.ndarray, m: int) -> np.ndarray:
    """Map (B, m*m) real parameters to a stack of skew-Hermitian matrices."""
    batch = theta.shape[0]
    iu = np.triu_indices(m, k=1)
    n_off = iu[0].size
    re = theta[:, :n_off]
    im = theta[:, n_off : 2 * n_off]
    diag = theta[:, 2 * n_off :]
    mats = np.zeros((batch, m, m), dtype=complex)
    mats[:, iu[0], iu[1]] = re + 1j * im
    mats[:, iu[1], iu[0]] = -re + 1j * im
    mats[:, np.arange(m), np.arange(m)] = 1j * diag
    return mats


def _isometries_from_params(theta: np.ndarray, m: int, r: int) -> np.ndarray:
    """First r columns of exp(H) for each parameter vector, via eigh of iH."""
    herm = 1j * _skew_from_params(theta, m)
    lam, w = np.linalg.eigh(herm)
    phases = np.exp(-1j * lam)
    unitary = np.einsum("bij,bj,bkj->bik", w, phases, w.conj())
    return unitary[:, :, :r]


def _objective_batch(isometries: np.ndarray, root: np.ndarray, d: int) -> np.ndarray:
    """Homogeneous ensemble average for a stack of m x r isometries."""
    # members psi~_k = root @ V[k, :]^T, laid out as columns
    members = np.einsum("ir,bkr->bik", root, isometries)
    mods = np.abs(members)
    return d * np.prod(mods ** (2.0 / d), axis=1).sum(axis=1)


def _ensemble_from_members(members: np.ndarray) -> Ensemble:
    """Ensemble from a d x k matrix of unnormalized member columns."""
    weights = np.sum(np.abs(members) ** 2, axis=0)
    keep = weights > _MEMBER_WEIGHT_CUTOFF
    weights = weights[keep]
    states = tuple(
        PureState(members[:, k] / np.sqrt(w))
        for k, w in zip(np.nonzero(keep)[0], weights)
    )
    return Ensemble(probabilities=weights / weights.sum(), states=states)


def _ensemble_from_isometry(isometry: np.ndarray, root: np.ndarray) -> Ensemble:
    return _ensemble_from_members(root @ isometry.T)


def _pair_split_values(
    sroot: np.ndarray, alphas: np.ndarray, betas: np.ndarray, d: int
) -> np.ndarray:
    """Averaged measure of all two-member splits of a rank-2 block.

    ``sroot`` is a stack (..., d, 2) of square-root factors; the two members
    mix the factor columns through the one-parameter-family unitary
    [[cos a, -sin a e^{ib}], [sin a e^{-ib}, cos a]] (any U(2) reduces to
    this modulo member phases, which the measure ignores).  Returns values
    with shape (..., n_alpha, n_beta).
    """
    ca = np.cos(alphas)[:, None]
    sa = np.sin(alphas)[:, None]
    eb = np.exp(1j * betas)[None, :]
    r1 = sroot[..., 0][..., None, None, :]  # (..., 1, 1, d)
    r2 = sroot[..., 1][..., None, None, :]
    m1 = r1 * ca[..., None] + r2 * (sa * eb)[..., None]
    m2 = -r1 * (sa * np.conj(eb))[..., None] + r2 * ca[..., None]
    vals = np.prod(np.abs(m1) ** (2.0 / d), axis=-1) + np.prod(
        np.abs(m2) ** (2.0 / d), axis=-1
    )
    return d * vals


class _Rank2CuspFamily:
    """Structured decompositions for rank-2 states.

    A member whose i-th amplitude vanishes contributes nothing to the
    ensemble average, and within a rank-2 range each coordinate pins such
    members to a single direction.  The family places weights (c_i, c_j) on
    two of those directions and splits the remainder between two generic
    members; minimizing over the weights and the split angles covers the
    zero-, one-, and two-line configurations (weights may sit at 0), which
    is where the minimizing ensembles of this measure live.
    """

    def __init__(self, rho: DensityMatrix, root: np.ndarray):
        self.d = rho.dim
        self.q, _ = np.linalg.qr(root)  # orthonormal range basis, d x 2
        self.tau = self.q.conj().T @ rho.matrix @ self.q
        # kernel direction of each coordinate row; None when the whole range
        # already lies in that coordinate plane
        self.lines = []
        for i in range(self.d):
            row = self.q[i, :]
            norm = np.linalg.norm(row)
            if norm < 1e-14:
                self.lines.append(None)
            else:
                self.lines.append(np.array([-row[1], row[0]]) / norm)

    def _sigma(self, pair, c) -> np.ndarray:
        sigma = self.tau.copy()
        for (i, ci) in zip(pair, c):
            u = self.lines[i]
            sigma -= ci * np.outer(u, u.conj())
        return sigma

    def _split_root(self, sigma: np.ndarray) -> np.ndarray | None:
        lam, vecs = np.linalg.eigh(sigma)
        if lam[0] < -1e-11:
            return None
        lam = np.clip(lam, 0.0, None)
        return self.q @ (vecs * np.sqrt(lam))

    def _value(self, pair, x) -> float:
        ci, cj, alpha, beta = x
        if ci < 0.0 or cj < 0.0:
            return np.inf
        sroot = self._split_root(self._sigma(pair, (ci, cj)))
        if sroot is None:
            return np.inf
        return float(
            _pair_split_values(sroot, np.array([alpha]), np.array([beta]), self.d)[0, 0]
        )

    def _members(self, pair, x) -> np.ndarray:
        ci, cj, alpha, beta = x
        sroot = self._split_root(self._sigma(pair, (ci, cj)))
        ca, sa, eb = np.cos(alpha), np.sin(alpha), np.exp(1j * beta)
        m1 = sroot[:, 0] * ca + sroot[:, 1] * sa * eb
        m2 = -sroot[:, 0] * sa * np.conj(eb) + sroot[:, 1] * ca
        cols = [m1, m2]
        for (i, c) in zip(pair, (ci, cj)):
            if c > _MEMBER_WEIGHT_CUTOFF:
                cols.append(np.sqrt(c) * (self.q @ self.lines[i]))
        return np.stack(cols, axis=1)

    def _cmax(self, i: int) -> float:
        u = self.lines[i]
        return 1.0 / float(np.real(u.conj() @ np.linalg.solve(self.tau, u)))

    def _polish(self, pair, x0, steps0) -> tuple[float, np.ndarray]:
        x = np.asarray(x0, dtype=float)
        steps = np.asarray(steps0, dtype=float)
        val = self._value(pair, x)
        for _ in range(400):
            improved = False
            for j in range(4):
                for sign in (1.0, -1.0):
                    cand = x.copy()
                    cand[j] += sign * steps[j]
                    fv = self._value(pair, cand)
                    if fv < val - 1e-17:
                        x, val = cand, fv
                        improved = True
            if not improved:
                steps *= 0.4
                if steps.max() < 1e-11:
                    break
        return val, x

    def _rank1_weight(self, reduced: np.ndarray, u: np.ndarray) -> float | None:
        """Weight c with det(reduced - c u u^dag) = 0, the rank-1-remainder point."""
        adj = np.array(
            [[reduced[1, 1], -reduced[0, 1]], [-reduced[1, 0], reduced[0, 0]]]
        )
        den = float(np.real(u.conj() @ adj @ u))
        if den <= 1e-300:
            return None
        c = float(np.real(np.linalg.det(reduced))) / den
        return c if c >= 0.0 else None

    def _rank1_remainder_value(self, pair_weights: list) -> tuple[float, np.ndarray] | None:
        """Value and members for line weights whose remainder has rank <= 1.

        ``pair_weights`` is a list of (line index, weight).  Returns None when
        the configuration is infeasible.
        """
        sigma = self.tau.copy()
        for i, c in pair_weights:
            if c < 0.0:
                return None
            u = self.lines[i]
            sigma -= c * np.outer(u, u.conj())
        lam, vecs = np.linalg.eigh(sigma)
        if lam[0] < -1e-11:
            return None
        top = np.clip(lam[1], 0.0, None)
        cols = []
        value = 0.0
        if top > _MEMBER_WEIGHT_CUTOFF:
            w = self.q @ (np.sqrt(top) * vecs[:, 1])
            value = float(self.d * np.prod(np.abs(w) ** (2.0 / self.d)))
            cols.append(w)
        for i, c in pair_weights:
            if c > _MEMBER_WEIGHT_CUTOFF:
                cols.append(np.sqrt(c) * (self.q @ self.lines[i]))
        if not cols:
            return None
        return value, np.stack(cols, axis=1)

    def _boundary_pair_candidates(self, n_c: int = 25) -> list:
        """Two line weights with a rank-1 remainder: one weight free, one solved."""
        out = []
        usable = [i for i in range(self.d) if self.lines[i] is not None]
        for i in usable:
            for j in usable:
                if i == j:
                    continue
                cmax_i = self._cmax(i)
                u_i, u_j = self.lines[i], self.lines[j]

                def value_at(ci: float):
                    if ci < 0.0 or ci > cmax_i:
                        return np.inf, None
                    reduced = self.tau - ci * np.outer(u_i, u_i.conj())
                    cj = self._rank1_weight(reduced, u_j)
                    if cj is None:
                        return np.inf, None
                    res = self._rank1_remainder_value([(i, ci), (j, cj)])
                    if res is None:
                        return np.inf, None
                    return res

                grid = np.linspace(0.0, cmax_i * 0.9999, n_c)
                vals = [value_at(c)[0] for c in grid]
                best_k = int(np.argmin(vals))
                if not np.isfinite(vals[best_k]):
                    continue
                ci, val = grid[best_k], vals[best_k]
                step = grid[1] - grid[0]
                for _ in range(200):
                    moved = False
                    for sign in (1.0, -1.0):
                        cand_val, _ = value_at(ci + sign * step)
                        if cand_val < val - 1e-17:
                            ci, val = ci + sign * step, cand_val
                            moved = True
                    if not moved:
                        step *= 0.4
                        if step < 1e-12 * max(1.0, cmax_i):
                            break
                final_val, members = value_at(ci)
                if members is not None:
                    out.append((final_val, members))
        return out

    def _boundary_triple_candidates(self, n_c: int = 13) -> list:
        """Three line weights with a rank-1 remainder: two free, one solved."""
        out = []
        usable = [i for i in range(self.d) if self.lines[i] is not None]
        if len(usable) < 3:
            return []
        triples = [
            (usable[a], usable[b], usable[c])
            for a in range(len(usable))
            for b in range(a + 1, len(usable))
            for c in range(b + 1, len(usable))
        ]
        for (i, j, k) in triples:
            for solved in (i, j, k):
                free = [x for x in (i, j, k) if x != solved]
                u_f0, u_f1 = self.lines[free[0]], self.lines[free[1]]
                u_s = self.lines[solved]
                cmax0, cmax1 = self._cmax(free[0]), self._cmax(free[1])

                def value_at(c0: float, c1: float):
                    if c0 < 0.0 or c1 < 0.0:
                        return np.inf, None
                    reduced = (
                        self.tau
                        - c0 * np.outer(u_f0, u_f0.conj())
                        - c1 * np.outer(u_f1, u_f1.conj())
                    )
                    if np.linalg.eigvalsh(reduced)[0] < -1e-13:
                        return np.inf, None
                    cs = self._rank1_weight(reduced, u_s)
                    if cs is None:
                        return np.inf, None
                    res = self._rank1_remainder_value(
                        [(free[0], c0), (free[1], c1), (solved, cs)]
                    )
                    if res is None:
                        return np.inf, None
                    return res

                grid0 = np.linspace(0.0, cmax0 * 0.9999, n_c)
                grid1 = np.linspace(0.0, cmax1 * 0.9999, n_c)
                best = (np.inf, None, None)
                for c0 in grid0:
                    for c1 in grid1:
                        v, _ = value_at(c0, c1)
                        if v < best[0]:
                            best = (v, c0, c1)
                if best[1] is None:
                    continue
                val, c0, c1 = best
                steps = np.array([grid0[1] - grid0[0], grid1[1] - grid1[0]])
                x = np.array([c0, c1])
                for _ in range(250):
                    moved = False
                    for axis in (0, 1):
                        for sign in (1.0, -1.0):
                            cand = x.copy()
                            cand[axis] += sign * steps[axis]
                            v, _ = value_at(*cand)
                            if v < val - 1e-17:
                                x, val = cand, v
                                moved = True
                    if not moved:
                        steps *= 0.4
                        if steps.max() < 1e-12 * max(1.0, cmax0, cmax1):
                            break
                final_val, members = value_at(*x)
                if members is not None:
                    out.append((final_val, members))
        return out

    def candidates(self, n_c: int = 13, n_angle: int = 17) -> list:
        """Polished (value, members) candidates from all family branches."""
        alphas = np.linspace(0.0, np.pi / 2, n_angle)
        betas = np.linspace(0.0, 2 * np.pi, n_angle, endpoint=False)
        pairs = [
            (i, j)
            for i in range(self.d)
            for j in range(i + 1, self.d)
            if self.lines[i] is not None and self.lines[j] is not None
        ]
        if not pairs:
            return []
        out = self._boundary_pair_candidates()
        out.extend(self._boundary_triple_candidates())
        for pair in pairs:
            ci_grid = np.linspace(0.0, self._cmax(pair[0]), n_c)
            cj_grid = np.linspace(0.0, self._cmax(pair[1]), n_c)
            sigmas = np.empty((n_c, n_c, 2, 2), dtype=complex)
            feasible = np.zeros((n_c, n_c), dtype=bool)
            for a, ci in enumerate(ci_grid):
                for b, cj in enumerate(cj_grid):
                    sigma = self._sigma(pair, (ci, cj))
                    sigmas[a, b] = sigma
                    feasible[a, b] = np.linalg.eigvalsh(sigma)[0] >= -1e-13
            lam, vecs = np.linalg.eigh(sigmas[feasible])
            lam = np.clip(lam, 0.0, None)
            sroots = np.einsum("ir,brj->bij", self.q, vecs * np.sqrt(lam)[:, None, :])
            vals = _pair_split_values(sroots, alphas, betas, self.d)  # (B, na, nb)
            flat = vals.reshape(vals.shape[0], -1)
            feas_idx = np.argwhere(feasible)
            # two distinct grid starts per pair, polished independently
            order = np.argsort(flat.min(axis=1))
            for b in order[:2]:
                k = int(flat[b].argmin())
                a_idx, b_idx = divmod(k, betas.size)
                ci, cj = ci_grid[feas_idx[b][0]], cj_grid[feas_idx[b][1]]
                x0 = np.array([ci, cj, alphas[a_idx], betas[b_idx]])
                step_c = max(ci_grid[1] - ci_grid[0], cj_grid[1] - cj_grid[0], 1e-4)
                val, x = self._polish(pair, x0, [step_c, step_c, 0.12, 0.25])
                if np.isfinite(val):
                    out.append((val, self._members(pair, x)))
        return out


def sampled_roof_bound(
    rho: DensityMatrix, n_samples: int, seed, members: int | None = None
) -> float:
    """Best ensemble average over uniformly sampled decompositions.

    Samples Haar isometries directly (QR of complex Gaussian blocks) rather
    than walking the exp(H) chart, so it provides an optimizer-independent
    upper bound on the roof for cross-checking the search.
    """
    root = _spectral_root(rho)
    d, r = rho.dim, root.shape[1]
    if r == 1:
        return g_coherence_pure(PureState(root[:, 0]))
    m = members if members is not None else r * r
    rng = make_rng(seed)
    best = np.inf
    chunk = 2048
    done = 0
    while done < n_samples:
        b = min(chunk, n_samples - done)
        g = rng.standard_normal((b, m, r)) + 1j * rng.standard_normal((b, m, r))
        q, _ = np.linalg.qr(g)
        vals = _objective_batch(q, root, d)
        best = min(best, float(vals.min()))
        done += b
    return best


def convex_roof_g(
    rho: DensityMatrix,
    restarts: int = DEFAULT_RESTARTS,
    tol: float = DEFAULT_TOL,
    seed=0,
) -> RoofResult:
    """Search for the minimizing pure-state decomposition of rho.

    Runs ``restarts`` independent pattern searches as one batched population
    over ensembles of m = r^2 members (r the numerical rank).  The first
    restart starts from the spectral decomposition itself, so the result
    never exceeds the eigen-ensemble average.  ``converged`` is True when the
    two best restarts agree within 100 * tol (a single restart counts as
    converged only if it is the rank-1 shortcut).
    """
    if restarts < 1:
        raise RoofOptimizerError(f"need at least one restart, got {restarts}")
    d = rho.dim
    root = _spectral_root(rho)
    r = root.shape[1]

    if r == 1:
        # unique decomposition up to phase: the state itself
        state = PureState(root[:, 0] / np.linalg.norm(root[:, 0]))
        ensemble = Ensemble(probabilities=np.array([1.0]), states=(state,))
        return RoofResult(
            value=average_g(ensemble), ensemble=ensemble, restarts_used=0, converged=True
        )

    structured = _Rank2CuspFamily(rho, root).candidates() if r == 2 else []

    m = r * r
    n_par = m * m
    rng = make_rng(seed)

    theta = rng.standard_normal((restarts, n_par)) * _RESTART_SPREAD
    theta[0] = 0.0  # spectral decomposition: exp(0) selects the eigenvectors
    values = _objective_batch(_isometries_from_params(theta, m, r), root, d)
    if not np.isfinite(values).any():
        raise RoofOptimizerError("no restart produced a finite objective")

    steps = np.full(restarts, _STEP_INIT)
    active = np.ones(restarts, dtype=bool)
    directions = np.vstack([np.eye(n_par), -np.eye(n_par)])

    for _ in range(_MAX_SWEEPS):
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        proposals = theta[idx, None, :] + steps[idx, None, None] * directions[None, :, :]
        n_act, n_dir, _ = proposals.shape
        flat = proposals.reshape(n_act * n_dir, n_par)
        trial_vals = _objective_batch(
            _isometries_from_params(flat, m, r), root, d
        ).reshape(n_act, n_dir)
        best_dir = trial_vals.argmin(axis=1)
        best_vals = trial_vals[np.arange(n_act), best_dir]
        for row, member in enumerate(idx):
            if best_vals[row] < values[member] - 1e-16:
                theta[member] = proposals[row, best_dir[row]]
                values[member] = best_vals[row]
                steps[member] = min(_STEP_EXPAND * steps[member], _STEP_INIT)
            else:
                steps[member] *= _STEP_SHRINK
                if steps[member] < _STEP_STOP:
                    active[member] = False

    if not np.isfinite(values.min()):
        raise RoofOptimizerError("no restart converged to a finite objective")

    # pool the chart restarts with the structured rank-2 candidates
    pool_values = list(values[np.isfinite(values)])
    pool_members = {}
    chart_best = float(values.min())
    if structured:
        pool_values.extend(v for v, _ in structured)
        for v, mem in structured:
            pool_members[v] = mem
    pool_values.sort()
    best_value = pool_values[0]
    converged = bool(
        len(pool_values) >= 2 and pool_values[1] - pool_values[0] <= 100.0 * tol
    )

    if best_value < chart_best and best_value in pool_members:
        ensemble = _ensemble_from_members(pool_members[best_value])
    else:
        isometry = _isometries_from_params(theta[int(np.argmin(values))][None, :], m, r)[0]
        ensemble = _ensemble_from_isometry(isometry, root)
    return RoofResult(
        value=average_g(ensemble),
        ensemble=ensemble,
        restarts_used=restarts,
        converged=converged,
    )
