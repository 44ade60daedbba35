"""Stateless HTTP JSON service for the viewer and for scripted what-ifs.

Every request carries the whole graph, so identical requests always produce
identical responses and the service scales horizontally without any session
store. Responses echo a hash of the request body for client-side cache keys.

What-if removals are applied with the same propagation rules as node removal
in the core; the surviving graph is analyzed as-is (remnants may legitimately
contain connectors with a single remaining input).
"""

from __future__ import annotations

import hashlib
import json
import logging
from typing import Any

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .costs import Cost, CostError
from .graph import remove_nodes, validate
from .graphjson import FormatError, parse_graph_document
from .hardening import HardeningError, harden_iterate
from .metric import MetricError, UndisruptableError, analyze, report_dict

log = logging.getLogger("criticut.service")


def _request_hash(body: Any) -> str:
    canonical = json.dumps(body, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _bad_request(violations: list[str], request_hash: str) -> JSONResponse:
    return JSONResponse(
        status_code=400,
        content={"violations": violations, "requestHash": request_hash},
    )


def _unprocessable(message: str, request_hash: str) -> JSONResponse:
    return JSONResponse(
        status_code=422,
        content={"error": message, "requestHash": request_hash},
    )


def _parse_overrides(raw: Any) -> dict[str, Cost]:
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise FormatError('"overrides" must be an object of node id -> cost')
    overrides = {}
    for name, value in raw.items():
        if isinstance(value, (int, float, str)):
            try:
                overrides[name] = Cost.of(value)
            except CostError as exc:
                raise FormatError(f"override for {name!r}: {exc}") from exc
        else:
            raise FormatError(f"override for {name!r} must be a number or string")
    return overrides


def create_app(static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="criticut", docs_url=None, redoc_url=None)

    @app.get("/api/health")
    async def health() -> dict:
        return {"status": "ok"}

    async def _body(request: Request):
        raw = await request.body()
        try:
            body = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON body: {exc.msg}") from exc
        if not isinstance(body, dict):
            raise FormatError("request body must be a JSON object")
        return body

    @app.post("/api/analyze")
    async def analyze_endpoint(request: Request):
        try:
            body = await _body(request)
        except FormatError as exc:
            return _bad_request([str(exc)], _request_hash(None))
        request_hash = _request_hash(body)
        try:
            unknown = set(body) - {"graph"}
            if unknown:
                raise FormatError(f"unknown field(s) {sorted(unknown)} in request")
            graph = parse_graph_document({"graph": body.get("graph")})
        except FormatError as exc:
            return _bad_request([str(exc)], request_hash)
        violations = validate(graph)
        if violations:
            return _bad_request(violations, request_hash)
        try:
            report = analyze(graph)
        except UndisruptableError:
            return _unprocessable("target undisruptable", request_hash)
        log.debug("analyze: %d nodes -> cut %s", len(graph), report.cut.nodes)
        payload = report_dict(report, graph)
        payload["requestHash"] = request_hash
        return payload

    @app.post("/api/whatif")
    async def whatif_endpoint(request: Request):
        try:
            body = await _body(request)
        except FormatError as exc:
            return _bad_request([str(exc)], _request_hash(None))
        request_hash = _request_hash(body)
        try:
            unknown = set(body) - {"graph", "overrides", "removedNodes"}
            if unknown:
                raise FormatError(f"unknown field(s) {sorted(unknown)} in request")
            graph = parse_graph_document({"graph": body.get("graph")})
            overrides = _parse_overrides(body.get("overrides"))
            removed = body.get("removedNodes") or []
            if not isinstance(removed, list) or not all(isinstance(r, str) for r in removed):
                raise FormatError('"removedNodes" must be an array of node ids')
        except FormatError as exc:
            return _bad_request([str(exc)], request_hash)

        violations = validate(graph)
        missing = [nid for nid in removed if nid not in graph]
        missing += [nid for nid in overrides if nid not in graph]
        violations += [f"unknown node {nid!r} referenced by request" for nid in missing]
        if violations:
            return _bad_request(violations, request_hash)

        remaining = remove_nodes(graph, set(removed)) if removed else graph
        if remaining.target is None:
            return _unprocessable(
                "target already non-operational after removals", request_hash
            )
        # Overrides for nodes that collapsed away with the removals are moot.
        effective = {k: v for k, v in overrides.items() if k in remaining}
        try:
            report = analyze(remaining, costs=effective)
        except UndisruptableError:
            return _unprocessable("target undisruptable", request_hash)
        except MetricError as exc:
            return _bad_request([str(exc)], request_hash)
        log.debug(
            "whatif: %d overrides, %d removals -> cut %s",
            len(effective), len(removed), report.cut.nodes,
        )
        payload = report_dict(report, remaining, costs=effective)
        payload["requestHash"] = request_hash
        return payload

    @app.post("/api/harden")
    async def harden_endpoint(request: Request):
        try:
            body = await _body(request)
        except FormatError as exc:
            return _bad_request([str(exc)], _request_hash(None))
        request_hash = _request_hash(body)
        try:
            unknown = set(body) - {"graph", "threshold", "maxRounds"}
            if unknown:
                raise FormatError(f"unknown field(s) {sorted(unknown)} in request")
            graph = parse_graph_document({"graph": body.get("graph")})
            threshold = None
            if body.get("threshold") is not None:
                threshold = Cost.of(body["threshold"])
            max_rounds = body.get("maxRounds")
            if max_rounds is not None and (not isinstance(max_rounds, int) or max_rounds < 1):
                raise FormatError('"maxRounds" must be a positive integer')
        except (FormatError, CostError) as exc:
            return _bad_request([str(exc)], request_hash)
        violations = validate(graph)
        if violations:
            return _bad_request(violations, request_hash)
        try:
            trace = harden_iterate(graph, threshold=threshold, max_rounds=max_rounds)
        except (HardeningError, MetricError) as exc:
            return _bad_request([str(exc)], request_hash)
        payload = trace.as_dict()
        payload["requestHash"] = request_hash
        return payload

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="viewer")

    return app
