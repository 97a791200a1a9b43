"""FastAPI service exposing the coherence toolbox.

Every endpoint is stateless: requests carry full state/channel documents in
the package's JSON formats and responses are pure functions of the request.
Domain validation failures map to 422 with an ``{"kind": "invariant"}``
detail; a decomposition-search breakdown maps to 500 with
``{"kind": "optimizer"}``.
"""

from __future__ import annotations

import math

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..channels import apply_channel, classify_kraus, fsio_to_kraus, random_fsio
from ..errors import CoherenceLabError, RoofOptimizerError
from ..harness import (
    DEFAULT_MASTER_SEED,
    CampaignConfig,
    RoofSettings,
    records_to_csv,
    run_campaign,
)
from ..measures import g_coherence, g_coherence_pure, l1_coherence
from ..roof import convex_roof_g
from ..serialize import (
    classification_to_json,
    density_matrix_to_json,
    kraus_set_to_json,
    pure_state_to_json,
    roof_result_to_json,
)
from ..states import PureState, projector, random_mixed_state, random_pure_state
from . import translate
from .schemas import (
    ApplyRequest,
    ClassifyRequest,
    ClassifyResponse,
    DensityMatrixDoc,
    HealthResponse,
    MeasureRequest,
    MeasureResponse,
    RandomRequest,
    RandomResponse,
    RecordDoc,
    RoofRequest,
    RoofResponse,
    VerifyRequest,
    VerifyResponse,
)


def create_app() -> FastAPI:
    app = FastAPI(title="coherence-lab", version=__version__)

    @app.exception_handler(RoofOptimizerError)
    async def _optimizer_error(request: Request, exc: RoofOptimizerError):
        return JSONResponse(
            status_code=500,
            content={"detail": {"kind": "optimizer", "message": str(exc)}},
        )

    @app.exception_handler(CoherenceLabError)
    async def _domain_error(request: Request, exc: CoherenceLabError):
        return JSONResponse(
            status_code=422,
            content={"detail": {"kind": "invariant", "message": str(exc)}},
        )

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok", version=__version__)

    @app.post("/measure", response_model=MeasureResponse)
    def measure(req: MeasureRequest) -> MeasureResponse:
        state = translate.state_from_doc(req.state)
        closed_form = None
        if isinstance(state, PureState):
            closed_form = g_coherence_pure(state)
            rho = projector(state)
        else:
            rho = state
        return MeasureResponse(
            dim=rho.dim,
            l1=l1_coherence(rho) if req.which in ("l1", "both") else None,
            g=g_coherence(rho) if req.which in ("g", "both") else None,
            g_pure_closed_form=closed_form if req.which in ("g", "both") else None,
        )

    @app.post("/roof", response_model=RoofResponse)
    def roof(req: RoofRequest) -> RoofResponse:
        state = translate.state_from_doc(req.state)
        rho = projector(state) if isinstance(state, PureState) else state
        seed = req.seed if req.seed is not None else DEFAULT_MASTER_SEED
        result = convex_roof_g(rho, restarts=req.restarts, tol=req.tol, seed=seed)
        return RoofResponse(**roof_result_to_json(result))

    @app.post("/classify", response_model=ClassifyResponse)
    def classify(req: ClassifyRequest) -> ClassifyResponse:
        kraus = translate.kraus_from_doc(req.kraus)
        cls = classify_kraus(kraus, zero_tol=req.zero_tol)
        return ClassifyResponse(**classification_to_json(cls))

    @app.post("/apply", response_model=DensityMatrixDoc)
    def apply(req: ApplyRequest) -> DensityMatrixDoc:
        kraus = translate.kraus_from_doc(req.kraus)
        state = translate.state_from_doc(req.state)
        rho = projector(state) if isinstance(state, PureState) else state
        out = apply_channel(kraus, rho)
        return DensityMatrixDoc(**density_matrix_to_json(out))

    @app.post("/random", response_model=RandomResponse)
    def random(req: RandomRequest) -> RandomResponse:
        seed = req.seed if req.seed is not None else DEFAULT_MASTER_SEED
        if req.kind == "state":
            doc = pure_state_to_json(random_pure_state(req.dim, seed))
        elif req.kind == "mixed":
            rank = req.rank if req.rank is not None else req.dim
            doc = density_matrix_to_json(random_mixed_state(req.dim, rank, seed))
        else:
            n_kraus = req.n_kraus if req.n_kraus is not None else 2
            channel = random_fsio(req.dim, n_kraus, seed)
            doc = kraus_set_to_json(fsio_to_kraus(channel))
        return RandomResponse(kind=req.kind, object=doc)

    @app.post("/verify", response_model=VerifyResponse)
    def verify(req: VerifyRequest) -> VerifyResponse:
        cfg = CampaignConfig(
            dims=tuple(req.dims),
            trials_per_dim=req.trials_per_dim,
            n_kraus_min=req.n_kraus_min,
            n_kraus_max=req.n_kraus_max,
            eq_tol=req.eq_tol,
            abs_floor=req.abs_floor,
            ineq_tol=req.ineq_tol,
            with_roof=req.with_roof,
            probe_fio=req.probe_fio,
            roof=RoofSettings(restarts=req.roof_restarts, tol=req.roof_tol),
            master_seed=req.seed if req.seed is not None else DEFAULT_MASTER_SEED,
        )
        result = run_campaign(cfg)
        records = [
            RecordDoc(
                theorem_id=r.theorem_id,
                d=r.dim,
                seed=r.seed,
                lhs=_finite_or_none(r.lhs),
                rhs=_finite_or_none(r.rhs),
                deviation=_finite_or_none(r.deviation),
                status=r.status,
            )
            for r in result.records
        ]
        return VerifyResponse(
            records=records, summary=result.summary, csv=records_to_csv(result.records)
        )

    return app


def _finite_or_none(x: float):
    return float(x) if math.isfinite(x) else None


app = create_app()
