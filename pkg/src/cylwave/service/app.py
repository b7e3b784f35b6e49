"""FastAPI application exposing the experiment runners."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, experiments
from ..errors import DomainError, NumericalError
from . import schemas


def create_app() -> FastAPI:
    app = FastAPI(title="cylwave", version=__version__)

    @app.exception_handler(DomainError)
    async def _domain_error(request: Request, exc: DomainError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(NumericalError)
    async def _numerical_error(request: Request, exc: NumericalError):
        return JSONResponse(status_code=500, content={"detail": str(exc)})

    @app.get("/v1/health", response_model=schemas.HealthResponse)
    def health():
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.post("/v1/mode-eval", response_model=schemas.FieldResponse)
    def mode_eval(req: schemas.ModeEvalRequest):
        outcome = experiments.run_mode_eval(
            req.config.to_config(), req.q, complex(*req.c1), complex(*req.c2),
            complex(*req.c3), complex(*req.c4), req.t)
        table = outcome.tables["mode_field"]
        return schemas.FieldResponse(manifest=outcome.manifest,
                                     columns=list(table.columns),
                                     rows=[list(r) for r in table.rows])

    @app.post("/v1/packet-field", response_model=schemas.FieldResponse)
    def packet_field(req: schemas.PacketFieldRequest):
        outcome = experiments.run_packet_field(req.config.to_config(), req.t)
        table = outcome.tables["field"]
        return schemas.FieldResponse(manifest=outcome.manifest,
                                     columns=list(table.columns),
                                     rows=[list(r) for r in table.rows])

    @app.post("/v1/residual", response_model=schemas.ResidualResponse)
    def residual(req: schemas.ResidualRequest):
        mode_args = None
        if req.mode is not None:
            mode_args = {"q": req.mode.q, "c1": list(req.mode.c1),
                         "c2": list(req.mode.c2), "c3": list(req.mode.c3),
                         "c4": list(req.mode.c4)}
        outcome = experiments.run_residual(
            req.config.to_config(), req.t, (req.h.dz, req.h.dr, req.h.dt),
            req.n_probes, req.target, mode_args)
        doc = outcome.documents["residual"]
        return schemas.ResidualResponse(manifest=outcome.manifest, **doc)

    @app.post("/v1/norm-scan", response_model=schemas.NormScanResponse)
    def norm_scan(req: schemas.NormScanRequest):
        outcome = experiments.run_norm_scan(req.config.to_config(),
                                            req.half_lengths, req.n_q, req.n_z)
        fit = outcome.documents["fit"]
        rows = outcome.tables["norms"].rows
        return schemas.NormScanResponse(
            manifest=outcome.manifest,
            half_lengths=[r[0] for r in rows],
            norms=[r[1] for r in rows],
            **fit,
        )

    @app.post("/v1/propagate-compare", response_model=schemas.PropagateCompareResponse)
    def propagate_compare(req: schemas.PropagateCompareRequest):
        outcome = experiments.run_propagate_compare(
            req.config.to_config(), req.t_final, req.sigma0, req.t_gauss)
        doc = outcome.documents["compare"]
        return schemas.PropagateCompareResponse(manifest=outcome.manifest, **doc)

    return app


app = create_app()
