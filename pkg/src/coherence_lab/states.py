"""Quantum-state substrate: pure states, density matrices, permutations, seeded RNG.

All objects are immutable after construction and validate their defining
invariants when built.  Every random generator is a pure function of an
explicit 64-bit seed (Philox counter-based generator), so draws are
bit-reproducible and parallel campaigns can partition seed space safely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvariantViolation

# Default absolute tolerances for constructor validation.
HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
NORM_TOL = 1e-12

# Eigenvalues below this are clamped to zero (Ginibre draws produce
# near-zero negative eigenvalues that would otherwise upset rank detection).
EIGENVALUE_CLAMP = 1e-12

def make_rng(seed) -> np.random.Generator:
    """Philox-backed generator for the given seed (generators pass through)."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.Philox(int(seed)))


@dataclass(frozen=True)
class PureState:
    """A d-component complex unit vector of amplitudes, d >= 2."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size < 2:
            raise InvariantViolation(f"pure state needs dimension >= 2, got {amps.size}")
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        if abs(norm_sq - 1.0) > 2 * NORM_TOL:
            raise InvariantViolation(
                f"pure state is not normalized: sum |a_i|^2 = {norm_sq!r}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True)
class DensityMatrix:
    """A d x d Hermitian, positive-semidefinite, trace-one matrix, d >= 2."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise InvariantViolation(f"density matrix must be square, got shape {mat.shape}")
        d = mat.shape[0]
        if d < 2:
            raise InvariantViolation(f"density matrix needs dimension >= 2, got {d}")
        herm_dev = float(np.max(np.abs(mat - mat.conj().T)))
        if herm_dev > HERMITICITY_TOL:
            raise InvariantViolation(f"matrix is not Hermitian: max |rho_ij - rho_ji*| = {herm_dev!r}")
        trace_dev = abs(complex(np.trace(mat)) - 1.0)
        if trace_dev > TRACE_TOL:
            raise InvariantViolation(f"trace deviates from 1 by {trace_dev!r}")
        min_eig = float(np.linalg.eigvalsh(mat)[0])
        if min_eig < -PSD_TOL:
            raise InvariantViolation(f"matrix is not positive semidefinite: min eigenvalue {min_eig!r}")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class Permutation:
    """A permutation of basis indices, stored as an index array.

    ``images[i]`` is the (0-based) image of index ``i``.  The dense unitary
    form U = sum_i |images[i]><i| is produced only on explicit request.
    """

    images: np.ndarray

    def __post_init__(self):
        imgs = np.asarray(self.images, dtype=np.intp).reshape(-1)
        d = imgs.size
        if d < 1 or sorted(imgs.tolist()) != list(range(d)):
            raise InvariantViolation(f"not a bijection on 0..{d - 1}: {imgs.tolist()}")
        imgs.setflags(write=False)
        object.__setattr__(self, "images", imgs)

    @property
    def dim(self) -> int:
        return self.images.size

    @classmethod
    def identity(cls, d: int) -> "Permutation":
        return cls(np.arange(d))

    @classmethod
    def random(cls, d: int, seed) -> "Permutation":
        return cls(make_rng(seed).permutation(d))

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.dim)
        return Permutation(inv)

    def to_matrix(self) -> np.ndarray:
        """Dense unitary with entry 1 at (images[i], i)."""
        mat = np.zeros((self.dim, self.dim), dtype=complex)
        mat[self.images, np.arange(self.dim)] = 1.0
        return mat

    def conjugate(self, rho: DensityMatrix) -> DensityMatrix:
        """U rho U^dagger via index shuffling, no dense products."""
        out = rho.matrix[np.ix_(self.inverse().images, self.inverse().images)]
        # matrix[inv, inv] puts entry (i,j) at (images[i], images[j])
        return DensityMatrix(out)


def maximally_coherent_state(d: int) -> PureState:
    """Uniform superposition: every amplitude equals 1/sqrt(d)."""
    if d < 2:
        raise InvariantViolation(f"dimension must be >= 2, got {d}")
    return PureState(np.full(d, 1.0 / np.sqrt(d), dtype=complex))


def random_pure_state(d: int, seed) -> PureState:
    """Haar-distributed pure state: normalized vector of standard complex Gaussians."""
    if d < 2:
        raise InvariantViolation(f"dimension must be >= 2, got {d}")
    rng = make_rng(seed)
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(v / np.linalg.norm(v))


def random_mixed_state(d: int, rank: int, seed) -> DensityMatrix:
    """Ginibre construction: rho = G G^dagger / tr(G G^dagger) for a d x rank Gaussian G."""
    if d < 2:
        raise InvariantViolation(f"dimension must be >= 2, got {d}")
    if not 1 <= rank <= d:
        raise InvariantViolation(f"rank must lie in 1..{d}, got {rank}")
    rng = make_rng(seed)
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real)


def projector(psi: PureState) -> DensityMatrix:
    """Rank-one density matrix |psi><psi|, entries a_i a_j*."""
    return DensityMatrix(np.outer(psi.amplitudes, psi.amplitudes.conj()))


def eigendecompose(rho: DensityMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Spectral decomposition with descending eigenvalues.

    Eigenvalues below the clamp threshold are set to zero and the spectrum is
    renormalized to unit sum, which stabilizes numerical rank detection for
    Ginibre draws.  Returns (eigenvalues, eigenvectors) with eigenvectors in
    columns; the reconstruction sum_j lam_j |e_j><e_j| agrees with rho to
    better than 1e-10 entrywise.
    """
    lam, vecs = np.linalg.eigh(rho.matrix)
    lam = lam[::-1].copy()
    vecs = vecs[:, ::-1].copy()
    lam[lam < EIGENVALUE_CLAMP] = 0.0
    lam /= lam.sum()
    return lam, vecs


def numerical_rank(rho: DensityMatrix) -> int:
    """Number of eigenvalues surviving the clamp threshold."""
    lam, _ = eigendecompose(rho)
    return int(np.count_nonzero(lam))
