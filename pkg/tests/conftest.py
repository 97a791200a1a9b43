"""Shared fixtures: hand-built channel fixtures and generic CPTP draws."""

import numpy as np
import pytest

from coherence_lab import KrausSet, make_rng


def build_swap12_fsio_kraus() -> KrausSet:
    """Two operators with the shared pattern (1->2, 2->1, 3->3), 1-based.

    Factor columns are unit vectors, so the set is trace preserving; the
    classifier should read off the permutation [2, 1, 3].
    """
    rows = [1, 0, 2]  # 0-based images per column
    fac = np.array([[0.6, 0.8, 1.0], [0.8, -0.6, 0.0]])
    ops = []
    for n in range(2):
        op = np.zeros((3, 3), dtype=complex)
        op[rows, np.arange(3)] = fac[n]
        ops.append(op)
    return KrausSet(tuple(ops))


def build_colliding_fio_kraus() -> KrausSet:
    """Two operators sharing the column map (1->2, 2->1, 3->2), 1-based.

    Columns 1 and 3 both feed row 2, so each operator has a doubled row and
    the map cannot extend to a permutation: fully incoherent but not strict.
    The colliding factor columns are orthogonal to keep completeness.
    """
    rows = [1, 0, 1]
    fac = np.array([[0.6, 0.8, 0.8], [0.8, 0.6, -0.6]])
    ops = []
    for n in range(2):
        op = np.zeros((3, 3), dtype=complex)
        op[rows, np.arange(3)] = fac[n]
        ops.append(op)
    return KrausSet(tuple(ops))


def random_cptp_kraus(d: int, n_kraus: int, seed) -> KrausSet:
    """Generic trace-preserving set: d-column blocks of a Haar isometry."""
    rng = make_rng(seed)
    g = rng.standard_normal((n_kraus * d, d)) + 1j * rng.standard_normal((n_kraus * d, d))
    q, r = np.linalg.qr(g)
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return KrausSet(tuple(q[i * d : (i + 1) * d, :] for i in range(n_kraus)))


@pytest.fixture
def swap12_fsio_kraus() -> KrausSet:
    return build_swap12_fsio_kraus()


@pytest.fixture
def colliding_fio_kraus() -> KrausSet:
    return build_colliding_fio_kraus()
