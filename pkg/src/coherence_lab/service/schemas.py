"""Pydantic request/response models for the HTTP service.

The payload shapes mirror the package's JSON file formats, so a document
written by the CLI can be posted verbatim and vice versa.
"""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, Field

ComplexPair = tuple[float, float]
Matrix = list[list[ComplexPair]]


class PureStateDoc(BaseModel):
    dim: int
    amplitudes: list[ComplexPair]


class DensityMatrixDoc(BaseModel):
    dim: int
    rho: Matrix


StateDoc = Union[PureStateDoc, DensityMatrixDoc]


class KrausSetDoc(BaseModel):
    dim: int
    kraus: list[Matrix]


class MeasureRequest(BaseModel):
    state: StateDoc
    which: Literal["l1", "g", "both"] = "both"


class MeasureResponse(BaseModel):
    dim: int
    l1: Optional[float] = None
    g: Optional[float] = None
    # closed-form evaluation, reported when the input was a pure state
    g_pure_closed_form: Optional[float] = None


class RoofRequest(BaseModel):
    state: StateDoc
    restarts: int = Field(default=20, ge=1)
    tol: float = Field(default=1e-8, gt=0)
    seed: Optional[int] = None


class EnsembleMemberDoc(BaseModel):
    p: float
    psi: list[ComplexPair]


class RoofResponse(BaseModel):
    value: float
    converged: bool
    restarts_used: int
    ensemble: list[EnsembleMemberDoc]


class ClassifyRequest(BaseModel):
    kraus: KrausSetDoc
    zero_tol: float = Field(default=1e-12, gt=0)


class ClassificationFlags(BaseModel):
    gio: bool
    fsio: bool
    fio: bool
    sio: bool
    io: bool
    mio: bool


class ClassifyResponse(BaseModel):
    flags: ClassificationFlags
    most_specific: str
    certificate: Optional[dict] = None


class ApplyRequest(BaseModel):
    kraus: KrausSetDoc
    state: StateDoc


class RandomRequest(BaseModel):
    kind: Literal["state", "mixed", "fsio"]
    dim: int = Field(ge=2)
    rank: Optional[int] = None      # mixed only; defaults to dim
    n_kraus: Optional[int] = None   # fsio only; defaults to 2
    seed: Optional[int] = None


class RandomResponse(BaseModel):
    kind: Literal["state", "mixed", "fsio"]
    object: dict


class VerifyRequest(BaseModel):
    dims: list[int] = Field(default=[2, 3, 4, 5])
    trials_per_dim: int = Field(default=500, ge=1)
    n_kraus_min: int = Field(default=1, ge=1)
    n_kraus_max: int = Field(default=6, ge=1)
    eq_tol: float = 1e-8
    abs_floor: float = 1e-12
    ineq_tol: float = 1e-9
    with_roof: bool = False
    probe_fio: bool = False
    roof_restarts: int = Field(default=20, ge=1)
    roof_tol: float = Field(default=1e-8, gt=0)
    seed: Optional[int] = None


class RecordDoc(BaseModel):
    theorem_id: str
    d: int
    seed: int
    # None stands in for non-finite values (inconclusive optimizer outcomes)
    lhs: Optional[float]
    rhs: Optional[float]
    deviation: Optional[float]
    status: str


class VerifyResponse(BaseModel):
    records: list[RecordDoc]
    summary: dict
    csv: str


class HealthResponse(BaseModel):
    status: str
    version: str


class ErrorDetail(BaseModel):
    kind: Literal["invariant", "optimizer", "usage"]
    message: str
