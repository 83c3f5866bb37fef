"""HTTP service exposing coloring, reduction, and verification.

All substantive work lives in the library modules; this layer only maps
request/response documents onto library calls.  Errors carry a machine-
readable body ``{"error": {"kind": ..., "message": ...}}``; invalid
inputs map to HTTP 400 and reduction/verification failures to 422.
"""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import codec, coloring, moves, reduction
from .diagram import DiagramError

PRIMES = (2, 3, 5, 7, 11, 13, 17)


class DiagramIn(BaseModel):
    """A diagram document: PD text plus optional coloring."""

    pd: str
    p: int | None = None
    colors: list[int] | None = None
    name: str = ""


class ColorRequest(DiagramIn):
    p: int = 17


class ReduceRequest(DiagramIn):
    depth: int = reduction.DEFAULT_DEPTH_CAP
    node_cap: int = reduction.DEFAULT_NODE_CAP
    move_cap: int = reduction.DEFAULT_MOVE_CAP


class ReplayRequest(BaseModel):
    initial: DiagramIn
    trace: dict


class ServiceError(Exception):
    def __init__(self, kind: str, message: str, status: int):
        super().__init__(message)
        self.kind = kind
        self.status = status


def _diagram(doc: DiagramIn):
    try:
        d = codec.parse_pd(doc.pd)
    except (codec.PDSyntaxError, DiagramError, ValueError) as e:
        raise ServiceError("invalid-input", str(e), 400)
    return d


def _coloring(doc: DiagramIn, d, p: int | None = None):
    if doc.colors is None:
        return None
    modulus = doc.p if doc.p is not None else p
    if modulus is None:
        raise ServiceError("invalid-input", "coloring given without modulus", 400)
    col = coloring.FoxColoring(modulus, tuple(doc.colors))
    if len(col.colors) != len(d.arc_list):
        raise ServiceError("invalid-input",
                           f"expected {len(d.arc_list)} arc colors", 400)
    if not coloring.validate_coloring(d, col):
        raise ServiceError("invalid-input", "coloring violates a crossing", 400)
    return col


def create_app() -> FastAPI:
    app = FastAPI(title="foxknot", version="1.0")

    @app.exception_handler(ServiceError)
    async def _service_error(_, exc: ServiceError):
        return JSONResponse(
            status_code=exc.status,
            content={"error": {"kind": exc.kind, "message": str(exc)}})

    @app.post("/color")
    def color(req: ColorRequest):
        d = _diagram(req)
        space = coloring.solve_colorings(d, req.p)
        sample = next((c for c in space.colorings() if not c.is_trivial()), None)
        return {
            "p": req.p,
            "dimension": space.dimension,
            "count": space.count(),
            "nontrivial": sample is not None,
            "sample": list(sample.colors) if sample else None,
        }

    @app.post("/reduce")
    def reduce(req: ReduceRequest):
        d = _diagram(req)
        col = _coloring(req, d, p=17)
        if col is None:
            space = coloring.solve_colorings(d, 17)
            col = next((c for c in space.colorings() if not c.is_trivial()), None)
            if col is None:
                raise ServiceError("invalid-input",
                                   "diagram is not nontrivially 17-colorable", 400)
        if col.p != 17:
            raise ServiceError("invalid-input", "reduction requires p = 17", 400)
        try:
            d2, col2, trace, report = reduction.reduce_to_six(
                d, col, req.depth, req.node_cap, req.move_cap)
        except reduction.ReductionError as e:
            raise ServiceError("reduction-failure", str(e), 422)
        return {
            "report": report,
            "trace": trace.to_obj(),
            "result": {"pd": codec.pd_text(d2), "p": 17,
                       "colors": list(col2.colors)},
            "input_colors": list(col.colors),
        }

    @app.post("/verify")
    def verify(req: DiagramIn):
        d = _diagram(req)
        col = _coloring(req, d)
        chi = d.euler_characteristic()
        if chi != 2:
            raise ServiceError("verification-failure",
                               f"Euler characteristic {chi} != 2", 422)
        return {
            "valid": True,
            "crossings": len(d.crossings),
            "arcs": len(d.arc_list),
            "euler_characteristic": chi,
            "coloring_checked": col is not None,
            "checksum": codec.canonical_checksum(d, col),
        }

    @app.get("/tables")
    def tables():
        gen = reduction.special_case_tables()
        return {
            "schedule": list(reduction.SCHEDULE),
            "target_palette": sorted(reduction.TARGET),
            "minimum_palette_bound": {
                str(p): coloring.lower_bound(p) for p in (3, 5, 7, 11, 13, 17)},
            "special_cases": {
                name: [{"step": k[0], "colors": list(k[1:]),
                        "value": list(v) if isinstance(v, tuple) else v}
                       for k, v in sorted(table.items())]
                for name, table in gen.items()},
        }

    @app.post("/invariants")
    def invariants(req: DiagramIn):
        d = _diagram(req)
        det = coloring.determinant(d)
        return {
            "determinant": det,
            "colorable": {str(p): coloring.is_p_colorable(d, p) for p in PRIMES},
            "coloring_counts": {str(p): coloring.count_colorings(d, p)
                                for p in PRIMES},
        }

    @app.post("/replay")
    def replay(req: ReplayRequest):
        d = _diagram(req.initial)
        col = _coloring(req.initial, d)
        if col is None:
            raise ServiceError("invalid-input", "replay requires a coloring", 400)
        try:
            trace = moves.MoveTrace.from_obj(req.trace)
        except (KeyError, TypeError, ValueError) as e:
            raise ServiceError("invalid-input", f"malformed trace: {e}", 400)
        try:
            d2, col2 = moves.replay(d, col, trace)
        except moves.MoveError as e:
            raise ServiceError("verification-failure", str(e), 422)
        return {
            "verified_steps": len(trace.steps),
            "final_checksum": codec.canonical_checksum(d2, col2),
            "result": {"pd": codec.pd_text(d2), "p": col2.p,
                       "colors": list(col2.colors)},
        }

    return app


app = create_app()
