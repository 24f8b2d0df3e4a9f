"""HTTP view over a completed run plus persistent analyst labels.

Read endpoints are pure views of the run artifacts; the only mutations are
label and narrative writes, which serialize behind a single-writer lock
and bump a store revision. Optimistic concurrency: clients send the
revision they saw in an If-Match header and get 409 on mismatch.
"""
from __future__ import annotations

import json
import socket
import threading
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import jsonio
from .concepts import FACETS
from .corpus import load_records
from .errors import DataError
from .pipeline import CONCEPTS_FILE, MANIFEST_FILE, RECORDS_FILE

LABELS_FILE = "labels.json"


class RunNotFound(DataError):
    pass


class PortInUse(DataError):
    pass


class LabelStore:
    """Single JSON document beside the run, written atomically.

    The revision increases by exactly one on every successful write; reads
    never mutate. Thread-safe for one process (the single-writer contract).
    """

    def __init__(self, path: Path, run_id: str):
        self.path = path
        self.run_id = run_id
        self._lock = threading.Lock()
        if not path.is_file():
            self._write({"run_id": run_id, "revision": 0, "labels": {}, "notes": {}})

    def _write(self, state: dict) -> None:
        jsonio.atomic_write_text(self.path, json.dumps(state, indent=2, sort_keys=True) + "\n")

    def _read(self) -> dict:
        return json.loads(self.path.read_text(encoding="utf-8"))

    def snapshot(self) -> dict:
        with self._lock:
            return self._read()

    def _mutate(self, expected_revision: int | None, apply) -> dict:
        with self._lock:
            state = self._read()
            if expected_revision is not None and expected_revision != state["revision"]:
                raise _RevisionConflict(state["revision"])
            apply(state)
            state["revision"] += 1
            self._write(state)
            return state

    def set_label(self, concept: str, term: str, facet: str,
                  expected_revision: int | None) -> dict:
        def apply(state):
            state["labels"].setdefault(concept, {})[term] = facet
        return self._mutate(expected_revision, apply)

    def set_narrative(self, concept: str, text: str,
                      expected_revision: int | None) -> dict:
        def apply(state):
            state["notes"][concept] = text
        return self._mutate(expected_revision, apply)


class _RevisionConflict(Exception):
    def __init__(self, revision: int):
        self.revision = revision


@dataclass
class ServiceHandle:
    app: FastAPI
    run_dir: Path
    host: str
    port: int

    def check_port(self) -> None:
        """uvicorn exits the process on a bind failure, so probe first."""
        if self.port == 0:
            return
        probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        try:
            probe.bind((self.host, self.port))
        except OSError:
            raise PortInUse(f"port {self.port} on {self.host} is already in use")
        finally:
            probe.close()

    def serve(self) -> None:
        import uvicorn
        self.check_port()
        uvicorn.run(self.app, host=self.host, port=self.port, log_level="warning")


def _load_concepts(run_dir: Path) -> dict:
    path = run_dir / CONCEPTS_FILE
    if not path.is_file():
        raise RunNotFound(f"{path} not found; run the pipeline first")
    return jsonio.load(path)


def _parse_if_match(request: Request) -> int | None:
    raw = request.headers.get("if-match")
    if raw is None:
        return None
    try:
        return int(raw.strip().strip('"'))
    except ValueError:
        raise HTTPException(status_code=400, detail="If-Match must be a revision integer")


def create_app(run_dir: str | Path, ui_dir: str | Path | None = None) -> FastAPI:
    run_dir = Path(run_dir)
    concepts_payload = _load_concepts(run_dir)
    concepts_by_name = {c["name"]: c for c in concepts_payload["concepts"]}

    manifest = {}
    manifest_path = run_dir / MANIFEST_FILE
    if manifest_path.is_file():
        manifest = jsonio.load(manifest_path)

    records_by_id = {}
    records_path = run_dir / RECORDS_FILE
    if records_path.is_file():
        records_by_id = {r.record_id: r for r in
                         load_records(records_path, allowed_components=None)}

    store = LabelStore(run_dir / LABELS_FILE, manifest.get("run_id", ""))

    app = FastAPI(title="fcm run explorer", version=manifest.get("tool_version", ""))
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(_RevisionConflict)
    async def _conflict(request, exc: _RevisionConflict):
        return JSONResponse(status_code=409, content={
            "detail": "revision mismatch", "revision": exc.revision})

    def _concept_or_404(name: str) -> dict:
        concept = concepts_by_name.get(name)
        if concept is None:
            raise HTTPException(status_code=404, detail=f"unknown concept {name!r}")
        return concept

    def _filtered(rows: list[dict], key: str, limit: int, min_loading: float | None):
        out = []
        for row in rows:
            if min_loading is not None and row["loading"] < min_loading:
                continue
            out.append(row)
            if len(out) == limit:
                break
        return out

    @app.get("/api/run")
    def get_run():
        return manifest

    @app.get("/api/singular-values")
    def get_singular_values():
        values = concepts_payload["singular_values"]
        if len(values) < 3:
            return {"values": values, "elbow": None, "detail": "TooFewValues"}
        from .concepts import detect_elbow
        return {"values": values, "elbow": detect_elbow(values), "detail": None}

    @app.get("/api/concepts")
    def get_concepts():
        return [
            {"name": c["name"], "sigma": c["sigma"],
             "term_count": len(c["terms"]), "document_count": len(c["documents"])}
            for c in concepts_payload["concepts"]
        ]

    @app.get("/api/concepts/{name}/terms")
    def get_terms(name: str, limit: int = 25, min_loading: float | None = None):
        if limit < 1:
            raise HTTPException(status_code=400, detail="limit must be >= 1")
        return _filtered(_concept_or_404(name)["terms"], "term", limit, min_loading)

    @app.get("/api/concepts/{name}/documents")
    def get_documents(name: str, limit: int = 10, min_loading: float | None = None):
        if limit < 1:
            raise HTTPException(status_code=400, detail="limit must be >= 1")
        return _filtered(_concept_or_404(name)["documents"], "record_id", limit, min_loading)

    @app.get("/api/documents/{record_id}")
    def get_document(record_id: str):
        rec = records_by_id.get(record_id)
        if rec is None:
            raise HTTPException(status_code=404, detail=f"unknown record {record_id!r}")
        return rec.to_dict()

    @app.get("/api/labels")
    def get_labels():
        return store.snapshot()

    @app.post("/api/labels")
    def post_label(body: dict, request: Request):
        for key in ("concept", "term", "facet"):
            if key not in body:
                raise HTTPException(status_code=400, detail=f"missing field {key!r}")
        concept = _concept_or_404(str(body["concept"]))
        term = str(body["term"])
        facet = str(body["facet"])
        if term not in {t["term"] for t in concept["terms"]}:
            raise HTTPException(
                status_code=400,
                detail=f"term {term!r} is not among the stored terms of {concept['name']}")
        if facet not in FACETS:
            raise HTTPException(
                status_code=400, detail=f"facet must be one of {list(FACETS)}")
        state = store.set_label(concept["name"], term, facet, _parse_if_match(request))
        return {"revision": state["revision"]}

    @app.post("/api/scenarios/{name}/narrative")
    def post_narrative(name: str, body: dict, request: Request):
        concept = _concept_or_404(name)
        if "narrative" not in body:
            raise HTTPException(status_code=400, detail="missing field 'narrative'")
        state = store.set_narrative(concept["name"], str(body["narrative"]),
                                    _parse_if_match(request))
        return {"revision": state["revision"]}

    @app.get("/api/export")
    def export_scenarios():
        state = store.snapshot()
        scenarios = []
        for concept in concepts_payload["concepts"]:
            labels = state["labels"].get(concept["name"], {})
            facets = {t["term"]: labels.get(t["term"], "other") for t in concept["terms"]}
            scenarios.append({
                "concept_name": concept["name"],
                "component": concepts_payload["component"],
                "singular_value": concept["sigma"],
                "top_terms": [[t["term"], t["loading"]] for t in concept["terms"]],
                "top_documents": [[d["record_id"], d["loading"]]
                                  for d in concept["documents"]],
                "facet_labels": facets,
                "narrative": state["notes"].get(concept["name"]),
            })
        return scenarios

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def serve_run(run_dir: str | Path, port: int = 8080, host: str = "127.0.0.1",
              ui_dir: str | Path | None = None) -> ServiceHandle:
    """Build the service for a finished run; call .serve() to block."""
    run_dir = Path(run_dir)
    app = create_app(run_dir, ui_dir=ui_dir)
    return ServiceHandle(app=app, run_dir=run_dir, host=host, port=port)
