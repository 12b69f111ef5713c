"""Local HTTP facade for the interactive flag-and-rerun workflow.

Sessions live in memory only: each one holds the originally uploaded table,
the currently flagged cells, and the latest computed documents, all of which
are recomputable from the upload and the request log (session ids are
sequential, so replaying a log on a fresh server reproduces every response
byte for byte).  Requests within one session are serialized by a lock;
distinct sessions may compute concurrently.
"""

from __future__ import annotations

import itertools
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .core import ContingencyTable, fit_ca
from .diagnostics import decompose_inertia, outlier_report
from .errors import CellcaError, ParseError, UnknownLabel
from .io import parse_table, write_solution
from .reconstitution import CellSet, ReconstitutionConfig, reconstitute
from .supplementary import SupplementarySpec, fit_supplementary

DIAGNOSTICS_TOP_N = 10


class CellRef(BaseModel):
    row: str
    col: str


class CellsUpdate(BaseModel):
    add: list[CellRef] = []
    remove: list[CellRef] = []


class ReconstituteRequest(BaseModel):
    order: int = 2
    tolerance: float = 1e-8
    max_iterations: int = 10_000
    negative_policy: str = "fallback_to_order_0"


class SupplementaryRequest(BaseModel):
    sup_rows: list[str] = []
    sup_cols: list[str] = []


@dataclass
class Session:
    table: ContingencyTable
    cells: set[tuple[str, str]] = field(default_factory=set)
    document: dict = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)


def _fit_document(table: ContingencyTable) -> dict:
    sol = fit_ca(table)
    report = outlier_report(decompose_inertia(table, sol), top_n=DIAGNOSTICS_TOP_N)
    return write_solution(table, sol, diagnostics=report)


def create_app(static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="cellca", docs_url=None, redoc_url=None)
    sessions: dict[str, Session] = {}
    counter = itertools.count(1)
    registry_lock = threading.Lock()

    @app.exception_handler(CellcaError)
    async def _cellca_error(request: Request, exc: CellcaError):
        status = 400 if isinstance(exc, (ParseError, UnknownLabel)) else 422
        return JSONResponse(status_code=status, content=exc.payload())

    @app.exception_handler(RequestValidationError)
    async def _invalid_body(request: Request, exc: RequestValidationError):
        first = exc.errors()[0] if exc.errors() else {}
        where = ".".join(str(part) for part in first.get("loc", ()))
        return JSONResponse(
            status_code=400,
            content={"error": "ParseError",
                     "detail": f"invalid request body at {where}: {first.get('msg', 'invalid')}"})

    def _session(session_id: str) -> Session:
        try:
            return sessions[session_id]
        except KeyError:
            raise _NotFound(session_id) from None

    class _NotFound(Exception):
        def __init__(self, session_id: str):
            self.session_id = session_id

    @app.exception_handler(_NotFound)
    async def _not_found(request: Request, exc: _NotFound):
        return JSONResponse(
            status_code=404,
            content={"error": "UnknownSession", "detail": f"no session {exc.session_id!r}"})

    @app.post("/session")
    async def create_session(request: Request):
        body = (await request.body()).decode("utf-8")
        table = parse_table(body)
        with registry_lock:
            session_id = f"s{next(counter)}"
            session = Session(table=table)
            sessions[session_id] = session
        with session.lock:
            session.document = _fit_document(table)
            return {"session_id": session_id, "solution": session.document}

    @app.get("/session/{session_id}/solution")
    def get_solution(session_id: str):
        session = _session(session_id)
        with session.lock:
            return session.document

    @app.post("/session/{session_id}/cells")
    def update_cells(session_id: str, update: CellsUpdate):
        session = _session(session_id)
        with session.lock:
            table = session.table
            for ref in update.add + update.remove:
                table.row_index(ref.row)
                table.col_index(ref.col)
            session.cells |= {(ref.row, ref.col) for ref in update.add}
            session.cells -= {(ref.row, ref.col) for ref in update.remove}
            return {"cells": [{"row": r, "col": c} for r, c in sorted(session.cells)]}

    @app.post("/session/{session_id}/reconstitute")
    def run_reconstitution(session_id: str, req: ReconstituteRequest):
        session = _session(session_id)
        with session.lock:
            table = session.table
            cells = CellSet.from_labels(table, sorted(session.cells))
            cfg = ReconstitutionConfig(
                order=req.order, tolerance=req.tolerance,
                max_iterations=req.max_iterations,
                negative_policy=req.negative_policy)
            result = reconstitute(table, cells, cfg)
            if cells:
                session.document = write_solution(
                    result.table, result.solution,
                    diagnostics=outlier_report(
                        decompose_inertia(result.table, result.solution),
                        top_n=DIAGNOSTICS_TOP_N),
                    reconstitution=result)
            else:
                session.document = _fit_document(table)
            return session.document

    @app.post("/session/{session_id}/supplementary")
    def run_supplementary(session_id: str, req: SupplementaryRequest):
        session = _session(session_id)
        with session.lock:
            sup = fit_supplementary(
                session.table, SupplementarySpec.of(req.sup_rows, req.sup_cols))
            session.document = write_solution(sup.reduced, sup.base, supplementary=sup)
            return session.document

    @app.delete("/session/{session_id}", status_code=204)
    def delete_session(session_id: str):
        _session(session_id)
        with registry_lock:
            sessions.pop(session_id, None)
        return Response(status_code=204)

    static = _resolve_static(static_dir)
    if static is not None:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=static, html=True), name="ui")
    return app


def _resolve_static(static_dir: str | Path | None) -> Path | None:
    candidates = []
    if static_dir is not None:
        candidates.append(Path(static_dir))
    if os.environ.get("CELLCA_STATIC"):
        candidates.append(Path(os.environ["CELLCA_STATIC"]))
    candidates.append(Path.cwd() / "frontend" / "dist")
    for cand in candidates:
        if cand.is_dir():
            return cand
    return None


def run(port: int = 8640, static_dir: str | Path | None = None) -> None:
    """Run the service on localhost (blocking)."""
    import uvicorn
    uvicorn.run(create_app(static_dir), host="127.0.0.1", port=port, log_level="warning")
