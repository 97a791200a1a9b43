"""Coherence quantifiers over a fixed reference basis.

Two measures are provided: the l1 norm (sum of all off-diagonal moduli) and
the geometric-mean measure ``g_coherence`` (d times the geometric mean of all
d(d-1) off-diagonal moduli).  The latter vanishes exactly when any single
off-diagonal entry vanishes, so it quantifies *full* coherence; its value is 1
on the uniform-superposition state and it coincides with the l1 norm for
qubits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, InvariantViolation
from .states import DensityMatrix, PureState, projector

# Moduli below this are outside the double-precision log range and are
# treated as exact zeros by the geometric-mean measure.
ZERO_MODULUS = 1e-300

# Probability cutoff for selective-measurement branches: a branch with
# q <= cutoff contributes at most q*d to the average, which is negligible,
# and normalizing its state would divide by ~0.
BRANCH_PROB_CUTOFF = 1e-14


def _offdiag_moduli(mat: np.ndarray) -> np.ndarray:
    d = mat.shape[0]
    return np.abs(mat[~np.eye(d, dtype=bool)])


def l1_coherence(rho: DensityMatrix) -> float:
    """Sum of the moduli of all off-diagonal entries."""
    return float(_offdiag_moduli(rho.matrix).sum())


def g_coherence_of_matrix(mat: np.ndarray) -> float:
    """Geometric-mean formula d * prod |m_ij|^(1/(d(d-1))) on a raw square matrix.

    Evaluated in the log domain to avoid underflow; any off-diagonal modulus
    at or below the double-precision log range short-circuits to 0.  The
    formula is positively homogeneous: evaluating it on s*m gives s times the
    value on m, which is what the selective-measurement average relies on.
    """
    mat = np.asarray(mat)
    d = mat.shape[0]
    if d < 2:
        raise InvariantViolation(f"geometric-mean measure undefined for dimension {d}")
    off = _offdiag_moduli(mat)
    if (off <= ZERO_MODULUS).any():
        return 0.0
    return float(d * np.exp(np.log(off).sum() / (d * (d - 1))))


def g_coherence(rho: DensityMatrix) -> float:
    """d times the geometric mean of all off-diagonal moduli of rho."""
    return g_coherence_of_matrix(rho.matrix)


def g_coherence_pure(psi: PureState) -> float:
    """Closed form for pure states: d * prod_i |a_i|^(2/d).

    Agrees with ``g_coherence(projector(psi))`` because each amplitude enters
    the off-diagonal product 2(d-1) times.
    """
    a = np.abs(psi.amplitudes)
    if (a <= ZERO_MODULUS).any():
        return 0.0
    d = psi.dim
    return float(d * np.exp(2.0 * np.log(a).sum() / d))


@dataclass(frozen=True)
class Ensemble:
    """A pure-state ensemble {(p_k, |psi_k>)} with probabilities summing to 1."""

    probabilities: np.ndarray
    states: tuple[PureState, ...]

    def __post_init__(self):
        probs = np.asarray(self.probabilities, dtype=float).reshape(-1)
        if probs.size != len(self.states) or probs.size == 0:
            raise InvariantViolation("ensemble needs one probability per state")
        if (probs < -1e-12).any():
            raise InvariantViolation(f"negative ensemble probability: {probs.min()!r}")
        if abs(probs.sum() - 1.0) > 1e-10:
            raise InvariantViolation(f"ensemble probabilities sum to {probs.sum()!r}")
        dims = {s.dim for s in self.states}
        if len(dims) != 1:
            raise InvariantViolation(f"ensemble mixes dimensions {sorted(dims)}")
        probs.setflags(write=False)
        object.__setattr__(self, "probabilities", probs)
        object.__setattr__(self, "states", tuple(self.states))

    @property
    def dim(self) -> int:
        return self.states[0].dim

    def mixture(self) -> DensityMatrix:
        """The density matrix sum_k p_k |psi_k><psi_k|."""
        mix = np.zeros((self.dim, self.dim), dtype=complex)
        for p, s in zip(self.probabilities, self.states):
            mix += p * np.outer(s.amplitudes, s.amplitudes.conj())
        return DensityMatrix(mix)

    def assert_reproduces(self, rho: DensityMatrix, tol: float = 1e-8) -> None:
        dev = float(np.max(np.abs(self.mixture().matrix - rho.matrix)))
        if dev > tol:
            raise InvariantViolation(f"ensemble mixture deviates from target by {dev!r}")


def average_g(ensemble: Ensemble) -> float:
    """Ensemble-averaged pure-state coherence sum_k p_k G(psi_k)."""
    return float(
        sum(p * g_coherence_pure(s) for p, s in zip(ensemble.probabilities, ensemble.states))
    )


def geometric_mean_kernel(diagonal_factors: np.ndarray) -> float:
    """sum_n prod_i (|a_i^(n)|^2)^(1/d) for a stack of diagonal factor vectors.

    For factors satisfying the completeness condition sum_n |a_i^(n)|^2 = 1
    per index i, the arithmetic-geometric mean inequality bounds this by 1,
    which is exactly the contraction factor appearing in the
    selective-measurement average of the geometric-mean measure.
    """
    fac = np.asarray(diagonal_factors, dtype=complex)
    if fac.ndim != 2:
        raise InvariantViolation(f"expected (n_ops, d) factor stack, got shape {fac.shape}")
    d = fac.shape[1]
    return float(np.prod(np.abs(fac) ** (2.0 / d), axis=1).sum())


class MonotonicityCheck(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def check_strong_monotonicity_g(
    rho: DensityMatrix, kraus, tol: float = 1e-9
) -> MonotonicityCheck:
    """Compare G(rho) against the selective-measurement average.

    lhs = G(rho); rhs = sum_n q_n G(K_n rho K_n^dag / q_n) over branches with
    q_n above the probability cutoff.  ``holds`` is rhs <= lhs + tol.  The
    average never exceeds G(rho) for shared-permutation channels; callers may
    pass other channel types to probe where the bound breaks.
    """
    from .channels import KrausSet  # deferred: channels imports states only

    if not isinstance(kraus, KrausSet):
        raise InvariantViolation(f"expected a KrausSet, got {type(kraus).__name__}")
    if kraus.dim != rho.dim:
        raise DimensionMismatch(f"channel dim {kraus.dim} != state dim {rho.dim}")
    lhs = g_coherence(rho)
    rhs = 0.0
    for op in kraus.operators:
        branch = op @ rho.matrix @ op.conj().T
        q = float(np.trace(branch).real)
        if q > BRANCH_PROB_CUTOFF:
            # homogeneity: q * G(branch/q) == G(branch)
            rhs += g_coherence_of_matrix(branch)
    return MonotonicityCheck(lhs=lhs, rhs=rhs, holds=bool(rhs <= lhs + tol))
