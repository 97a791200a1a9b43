"""JSON codecs for states, Kraus sets, roof results, and classifications.

Wire conventions: complex numbers are two-element arrays [re, im]; matrices
are row-major nested arrays of such pairs.  Document shapes:

* pure state      — {"dim": d, "amplitudes": [[re, im], ...]}
* density matrix  — {"dim": d, "rho": [[[re, im], ...], ...]}
* Kraus set       — {"dim": d, "kraus": [matrix, ...]}
* roof result     — {"value": x, "converged": b, "restarts_used": n,
                     "ensemble": [{"p": p, "psi": [[re, im], ...]}, ...]}
* classification  — {"flags": {...}, "most_specific": label,
                     "certificate": {...} or null}

Permutations inside certificates use 1-based images ("pi": [2, 1, 3] sends
basis index 1 to 2, 2 to 1, 3 to 3).
"""

from __future__ import annotations

import json
import numbers

import numpy as np

from .channels import ChannelClassification, KrausSet
from .errors import InvariantViolation, ParseError
from .measures import Ensemble
from .roof import RoofResult
from .states import DensityMatrix, PureState


def _as_complex(value, where: str) -> complex:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(x, numbers.Real) and not isinstance(x, bool) for x in value)
    ):
        raise ParseError(f"{where}: expected a [re, im] pair, got {value!r}")
    return complex(float(value[0]), float(value[1]))


def _pair(z: complex) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def matrix_to_json(mat: np.ndarray) -> list:
    return [[_pair(z) for z in row] for row in np.asarray(mat, dtype=complex)]


def matrix_from_json(doc, where: str = "matrix") -> np.ndarray:
    if not isinstance(doc, list) or not doc:
        raise ParseError(f"{where}: expected a nonempty list of rows")
    rows = []
    for i, row in enumerate(doc):
        if not isinstance(row, list):
            raise ParseError(f"{where}[{i}]: expected a list of [re, im] pairs")
        rows.append([_as_complex(v, f"{where}[{i}][{j}]") for j, v in enumerate(row)])
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise ParseError(f"{where}: ragged rows with lengths {sorted(widths)}")
    return np.array(rows, dtype=complex)


def _expect_dim(doc, where: str) -> int:
    dim = doc.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool):
        raise ParseError(f"{where}: 'dim' must be an integer, got {dim!r}")
    return dim


def pure_state_to_json(psi: PureState) -> dict:
    return {"dim": psi.dim, "amplitudes": [_pair(z) for z in psi.amplitudes]}


def pure_state_from_json(doc) -> PureState:
    if not isinstance(doc, dict) or "amplitudes" not in doc:
        raise ParseError("pure state document needs 'dim' and 'amplitudes'")
    dim = _expect_dim(doc, "pure state")
    amps = doc["amplitudes"]
    if not isinstance(amps, list) or len(amps) != dim:
        raise ParseError(f"pure state: expected {dim} amplitudes, got {len(amps) if isinstance(amps, list) else amps!r}")
    vec = np.array([_as_complex(v, f"amplitudes[{i}]") for i, v in enumerate(amps)])
    try:
        return PureState(vec)
    except InvariantViolation as exc:
        raise ParseError(f"pure state: {exc}") from exc


def density_matrix_to_json(rho: DensityMatrix) -> dict:
    return {"dim": rho.dim, "rho": matrix_to_json(rho.matrix)}


def density_matrix_from_json(doc) -> DensityMatrix:
    if not isinstance(doc, dict) or "rho" not in doc:
        raise ParseError("density matrix document needs 'dim' and 'rho'")
    dim = _expect_dim(doc, "density matrix")
    mat = matrix_from_json(doc["rho"], "rho")
    if mat.shape != (dim, dim):
        raise ParseError(f"density matrix: 'rho' has shape {mat.shape}, expected ({dim}, {dim})")
    try:
        return DensityMatrix(mat)
    except InvariantViolation as exc:
        raise ParseError(f"density matrix: {exc}") from exc


def state_from_json(doc) -> "PureState | DensityMatrix":
    """Parse either state document, keyed on which field is present."""
    if isinstance(doc, dict) and "amplitudes" in doc:
        return pure_state_from_json(doc)
    if isinstance(doc, dict) and "rho" in doc:
        return density_matrix_from_json(doc)
    raise ParseError("state document needs either 'amplitudes' or 'rho'")


def kraus_set_to_json(kraus: KrausSet) -> dict:
    return {"dim": kraus.dim, "kraus": [matrix_to_json(op) for op in kraus.operators]}


def kraus_set_from_json(doc) -> KrausSet:
    if not isinstance(doc, dict) or "kraus" not in doc:
        raise ParseError("Kraus document needs 'dim' and 'kraus'")
    dim = _expect_dim(doc, "Kraus set")
    ops_doc = doc["kraus"]
    if not isinstance(ops_doc, list) or not ops_doc:
        raise ParseError("Kraus set: 'kraus' must be a nonempty list of matrices")
    ops = []
    for n, op_doc in enumerate(ops_doc):
        mat = matrix_from_json(op_doc, f"kraus[{n}]")
        if mat.shape != (dim, dim):
            raise ParseError(f"kraus[{n}]: shape {mat.shape}, expected ({dim}, {dim})")
        ops.append(mat)
    try:
        return KrausSet(tuple(ops))
    except InvariantViolation as exc:
        raise ParseError(f"Kraus set: {exc}") from exc


def roof_result_to_json(result: RoofResult) -> dict:
    return {
        "value": result.value,
        "converged": result.converged,
        "restarts_used": result.restarts_used,
        "ensemble": [
            {"p": float(p), "psi": [_pair(z) for z in s.amplitudes]}
            for p, s in zip(result.ensemble.probabilities, result.ensemble.states)
        ],
    }


def roof_result_from_json(doc) -> RoofResult:
    try:
        members = doc["ensemble"]
        probs = np.array([float(m["p"]) for m in members])
        states = tuple(
            PureState(np.array([_as_complex(v, "psi") for v in m["psi"]]))
            for m in members
        )
        ensemble = Ensemble(probabilities=probs, states=states)
        return RoofResult(
            value=float(doc["value"]),
            ensemble=ensemble,
            restarts_used=int(doc["restarts_used"]),
            converged=bool(doc["converged"]),
        )
    except (KeyError, TypeError, InvariantViolation) as exc:
        raise ParseError(f"roof result: {exc}") from exc


def classification_to_json(cls: ChannelClassification) -> dict:
    return {
        "flags": cls.flags(),
        "most_specific": cls.most_specific,
        "certificate": cls.certificate,
    }


def dumps(doc) -> str:
    """Serialize a document deterministically (stable key order, repr floats)."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc
