"""Kraus-set algebra and the incoherent-operation hierarchy classifier.

The hierarchy, from most to least restrictive:

* GIO  — every Kraus operator is diagonal.
* FSIO — every operator factors as U_pi A_n with one shared permutation U_pi
         and diagonal A_n; equivalently, strictly incoherent with a shared
         sparsity form.
* FIO  — at most one nonzero entry per column in every operator, with a
         single column-to-row map shared by all operators.
* SIO  — at most one nonzero entry per column *and* per row in every operator.
* IO   — at most one nonzero entry per column in every operator.
* MIO  — the channel maps every incoherent state to an incoherent state.

Inclusions: GIO < FSIO < FIO < IO < MIO and GIO < FSIO < SIO < IO < MIO.
FIO and SIO are incomparable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, InvariantViolation
from .states import DensityMatrix, Permutation, make_rng

COMPLETENESS_TOL = 1e-10
PATTERN_ZERO_TOL = 1e-12
MIO_OFFDIAG_TOL = 1e-10

HIERARCHY_LABELS = ("GIO", "FSIO", "FIO", "SIO", "IO", "MIO")


@dataclass(frozen=True)
class KrausSet:
    """An ordered set of d x d operators K_n with sum_n K_n^dag K_n = I."""

    operators: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.operators) == 0:
            raise InvariantViolation("Kraus set must be nonempty")
        ops = []
        d = None
        for n, op in enumerate(self.operators):
            mat = np.asarray(op, dtype=complex)
            if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
                raise InvariantViolation(f"operator {n} is not square: shape {mat.shape}")
            if d is None:
                d = mat.shape[0]
            elif mat.shape[0] != d:
                raise DimensionMismatch(
                    f"operator {n} has dim {mat.shape[0]}, expected {d}"
                )
            mat.setflags(write=False)
            ops.append(mat)
        residual = self.completeness_residual_of(ops)
        if residual > COMPLETENESS_TOL:
            raise InvariantViolation(
                f"Kraus set is not trace preserving: ||sum K^dag K - I||_max = {residual!r}"
            )
        object.__setattr__(self, "operators", tuple(ops))

    @staticmethod
    def completeness_residual_of(ops) -> float:
        d = ops[0].shape[0]
        acc = np.zeros((d, d), dtype=complex)
        for op in ops:
            acc += op.conj().T @ op
        return float(np.max(np.abs(acc - np.eye(d))))

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    @classmethod
    def identity(cls, d: int) -> "KrausSet":
        return cls((np.eye(d, dtype=complex),))


def apply_channel(kraus: KrausSet, rho: DensityMatrix) -> DensityMatrix:
    """sum_n K_n rho K_n^dag; trace preserving and PSD by the completeness invariant."""
    if kraus.dim != rho.dim:
        raise DimensionMismatch(f"channel dim {kraus.dim} != state dim {rho.dim}")
    return DensityMatrix(apply_channel_matrix(kraus, rho.matrix))


def apply_channel_matrix(kraus: KrausSet, mat: np.ndarray) -> np.ndarray:
    out = np.zeros_like(mat, dtype=complex)
    for op in kraus.operators:
        out += op @ mat @ op.conj().T
    return out


@dataclass(frozen=True)
class FsioChannel:
    """A shared-permutation channel: K_n = U_pi A_n with diagonal A_n.

    ``diagonal_factors[n, i]`` is the i-th diagonal entry of A_n; completeness
    requires the factor vector across n to be a unit vector for every i.
    """

    permutation: Permutation
    diagonal_factors: np.ndarray

    def __post_init__(self):
        fac = np.asarray(self.diagonal_factors, dtype=complex)
        if fac.ndim != 2:
            raise InvariantViolation(
                f"diagonal_factors must be (n_kraus, d), got shape {fac.shape}"
            )
        if fac.shape[1] != self.permutation.dim:
            raise DimensionMismatch(
                f"factors have dim {fac.shape[1]}, permutation has dim {self.permutation.dim}"
            )
        col_norms = np.sum(np.abs(fac) ** 2, axis=0)
        worst = float(np.max(np.abs(col_norms - 1.0)))
        if worst > COMPLETENESS_TOL:
            raise InvariantViolation(
                f"factor completeness violated: max |sum_n |a_i^(n)|^2 - 1| = {worst!r}"
            )
        fac.setflags(write=False)
        object.__setattr__(self, "diagonal_factors", fac)

    @property
    def dim(self) -> int:
        return self.permutation.dim

    @property
    def n_kraus(self) -> int:
        return self.diagonal_factors.shape[0]


def fsio_to_kraus(channel: FsioChannel) -> KrausSet:
    """Materialize K_n with entry a_i^(n) at (pi(i), i) and zeros elsewhere."""
    d = channel.dim
    cols = np.arange(d)
    rows = channel.permutation.images
    ops = []
    for n in range(channel.n_kraus):
        op = np.zeros((d, d), dtype=complex)
        op[rows, cols] = channel.diagonal_factors[n]
        ops.append(op)
    return KrausSet(tuple(ops))


def apply_fsio(channel: FsioChannel, rho: DensityMatrix) -> DensityMatrix:
    """Apply via the factored form: U_pi (sum_n A_n rho A_n^dag) U_pi^dag."""
    if channel.dim != rho.dim:
        raise DimensionMismatch(f"channel dim {channel.dim} != state dim {rho.dim}")
    fac = channel.diagonal_factors
    # sum_n A_n rho A_n^dag has entries rho_ij * sum_n a_i^(n) a_j^(n)*
    weights = fac.T @ fac.conj()  # (d, d): sum_n a_i^(n) a_j^(n)*
    core = DensityMatrix(rho.matrix * weights)
    return channel.permutation.conjugate(core)


def random_fsio(d: int, n_kraus: int, seed) -> FsioChannel:
    """Uniform permutation; per basis index a Haar-random unit factor vector."""
    if d < 2:
        raise InvariantViolation(f"dimension must be >= 2, got {d}")
    if n_kraus < 1:
        raise InvariantViolation(f"need at least one Kraus operator, got {n_kraus}")
    rng = make_rng(seed)
    perm = Permutation(rng.permutation(d))
    fac = rng.standard_normal((n_kraus, d)) + 1j * rng.standard_normal((n_kraus, d))
    fac /= np.sqrt(np.sum(np.abs(fac) ** 2, axis=0, keepdims=True))
    return FsioChannel(permutation=perm, diagonal_factors=fac)


def gad_channel(p: float, eps: float) -> KrausSet:
    """Generalized amplitude damping on a qubit.

    Two decay branches weighted by p and 1-p, each an amplitude-damping pair
    with strength eps; p=1 reduces to standard amplitude damping and eps=0 to
    the identity channel.  Not an FSIO channel for eps > 0, yet the
    off-diagonal entry still just contracts by sqrt(1-eps), so the
    factorization checks hold for it.
    """
    if not 0.0 <= p <= 1.0:
        raise InvariantViolation(f"p must lie in [0, 1], got {p}")
    if not 0.0 <= eps <= 1.0:
        raise InvariantViolation(f"eps must lie in [0, 1], got {eps}")
    sp, sq = np.sqrt(p), np.sqrt(1.0 - p)
    se, sd = np.sqrt(eps), np.sqrt(1.0 - eps)
    k0 = sp * np.array([[1.0, 0.0], [0.0, sd]], dtype=complex)
    k1 = sp * np.array([[0.0, se], [0.0, 0.0]], dtype=complex)
    k2 = sq * np.array([[sd, 0.0], [0.0, 1.0]], dtype=complex)
    k3 = sq * np.array([[0.0, 0.0], [se, 0.0]], dtype=complex)
    return KrausSet((k0, k1, k2, k3))


@dataclass(frozen=True)
class SparsityPattern:
    """Positions of entries with modulus above the zero tolerance."""

    dim: int
    entries: frozenset

    @classmethod
    def of(cls, mat: np.ndarray, zero_tol: float = PATTERN_ZERO_TOL) -> "SparsityPattern":
        rows, cols = np.nonzero(np.abs(mat) > zero_tol)
        return cls(dim=mat.shape[0], entries=frozenset(zip(rows.tolist(), cols.tolist())))

    def max_per_column(self) -> int:
        counts = {}
        for _, c in self.entries:
            counts[c] = counts.get(c, 0) + 1
        return max(counts.values(), default=0)

    def max_per_row(self) -> int:
        counts = {}
        for r, _ in self.entries:
            counts[r] = counts.get(r, 0) + 1
        return max(counts.values(), default=0)

    def is_diagonal(self) -> bool:
        return all(r == c for r, c in self.entries)


@dataclass(frozen=True)
class ChannelClassification:
    """Membership flags over the hierarchy plus a supporting certificate.

    The flags always satisfy the lattice inclusions (gio implies fsio, fsio
    implies fio and sio, fio/sio imply io, io implies mio).
    ``most_specific`` is the smallest class containing the set, with FIO
    preferred over SIO when both hold without FSIO (the two are incomparable,
    so this is a reporting convention; the flags carry the full answer).
    """

    gio: bool
    fsio: bool
    fio: bool
    sio: bool
    io: bool
    mio: bool
    most_specific: str
    certificate: dict | None = field(default=None)

    def __post_init__(self):
        implications = [
            (self.gio, self.fsio, "gio implies fsio"),
            (self.fsio, self.fio, "fsio implies fio"),
            (self.fsio, self.sio, "fsio implies sio"),
            (self.fio, self.io, "fio implies io"),
            (self.sio, self.io, "sio implies io"),
            (self.io, self.mio, "io implies mio"),
        ]
        for pre, post, label in implications:
            if pre and not post:
                raise InvariantViolation(f"hierarchy inconsistency: {label}")

    def flags(self) -> dict:
        return {
            "gio": self.gio,
            "fsio": self.fsio,
            "fio": self.fio,
            "sio": self.sio,
            "io": self.io,
            "mio": self.mio,
        }


def _shared_column_map(patterns: list[SparsityPattern], d: int):
    """Column-to-row map common to all patterns, or the violating column."""
    col_rows = [set() for _ in range(d)]
    for pat in patterns:
        for r, c in pat.entries:
            col_rows[c].add(r)
    mapping = [None] * d
    for c in range(d):
        if len(col_rows[c]) > 1:
            return None, c
        if col_rows[c]:
            mapping[c] = next(iter(col_rows[c]))
    return mapping, None


def _complete_to_permutation(mapping: list) -> list | None:
    """Fill unconstrained columns with the smallest unused rows; None if stuck."""
    used = [r for r in mapping if r is not None]
    if len(set(used)) != len(used):
        return None  # two columns demand the same row: not injective
    free_rows = sorted(set(range(len(mapping))) - set(used))
    completed = list(mapping)
    for c in range(len(mapping)):
        if completed[c] is None:
            completed[c] = free_rows.pop(0)
    return completed


def classify_kraus(kraus: KrausSet, zero_tol: float = PATTERN_ZERO_TOL) -> ChannelClassification:
    """Classify a Kraus set within the incoherent-operation hierarchy.

    Pattern tests use ``zero_tol`` to decide which entries count as nonzero.
    Membership in the incoherent-output class (mio) is decided by pushing
    every basis projector through the channel and checking that all
    off-diagonals stay below tolerance; incoherent states are convex mixtures
    of basis projectors and the channel is linear, so this test is sound and
    complete up to tolerance.
    """
    d = kraus.dim
    patterns = [SparsityPattern.of(op, zero_tol) for op in kraus.operators]

    io = True
    sio = True
    io_witness = sio_witness = None
    for n, pat in enumerate(patterns):
        if pat.max_per_column() > 1:
            io = False
            sio = False
            col_counts = {}
            for _, c in pat.entries:
                col_counts[c] = col_counts.get(c, 0) + 1
            io_witness = {"operator": n, "kind": "column", "index": max(col_counts, key=col_counts.get)}
            break
        if sio and pat.max_per_row() > 1:
            sio = False
            row_counts = {}
            for r, _ in pat.entries:
                row_counts[r] = row_counts.get(r, 0) + 1
            sio_witness = {"operator": n, "kind": "row", "index": max(row_counts, key=row_counts.get)}

    gio = all(pat.is_diagonal() for pat in patterns)

    mapping, bad_col = (None, None)
    fio = False
    fsio = False
    perm_images = None
    if io:
        mapping, bad_col = _shared_column_map(patterns, d)
        fio = mapping is not None
        if fio and sio:
            perm_images = _complete_to_permutation(mapping)
            fsio = perm_images is not None

    # mio by the basis-projector test
    mio = True
    mio_witness = None
    for i in range(d):
        basis = np.zeros((d, d), dtype=complex)
        basis[i, i] = 1.0
        out = apply_channel_matrix(kraus, basis)
        off = np.abs(out - np.diag(np.diag(out)))
        if off.max() > MIO_OFFDIAG_TOL:
            r, c = np.unravel_index(int(off.argmax()), off.shape)
            mio = False
            mio_witness = {"kind": "basis_output", "basis_index": i, "entry": [int(r), int(c)]}
            break

    # closure over the hierarchy inclusions, so the flags are always consistent
    fsio = fsio or gio
    fio = fio or fsio
    sio = sio or fsio
    io = io or fio or sio
    mio = mio or io

    if gio:
        most_specific = "GIO"
    elif fsio:
        most_specific = "FSIO"
    elif fio:
        most_specific = "FIO"
    elif sio:
        most_specific = "SIO"
    elif io:
        most_specific = "IO"
    elif mio:
        most_specific = "MIO"
    else:
        most_specific = "NONE"

    certificate: dict | None
    if fsio:
        perm = Permutation(np.asarray(perm_images if perm_images is not None else range(d)))
        factors = np.stack([op[perm.images, np.arange(d)] for op in kraus.operators])
        certificate = {
            "pi": [int(r) + 1 for r in perm.images],
            "factors": [[[z.real, z.imag] for z in row] for row in factors],
        }
    elif fio:
        cert = {"column_to_row": [None if r is None else int(r) + 1 for r in mapping]}
        if sio_witness is not None:
            cert["fsio_violation"] = sio_witness
        else:
            cert["fsio_violation"] = {"kind": "form", "detail": "shared map is not injective"}
        certificate = cert
    elif io:
        certificate = {"fio_violation": {"kind": "column", "index": int(bad_col)}}
        if not sio and sio_witness is not None:
            certificate["sio_violation"] = sio_witness
    elif mio:
        certificate = {"io_violation": io_witness}
    else:
        certificate = {"mio_violation": mio_witness}

    return ChannelClassification(
        gio=gio, fsio=fsio, fio=fio, sio=sio, io=io, mio=mio,
        most_specific=most_specific, certificate=certificate,
    )
