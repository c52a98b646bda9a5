"""Stateless HTTP solve service.

``POST /solve?format=auto&trials=1&seed=0&columns=1`` with an instance file as
the body returns the versioned JSON payload; ``GET /health`` returns build
info.  Instances with nnz = M*N*density above the size cap are rejected with
413 before any solver work.
"""

from __future__ import annotations

import json
import os
import threading
from http import HTTPStatus
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlsplit

from . import __version__
from .errors import FormatError, InstanceError, ResourceExhausted
from .formats import parse, parse_auto
from .schema import SCHEMA_VERSION, error_payload, solution_payload

DEFAULT_SIZE_CAP = 3_000_000
MAX_TRIALS = 10
MAX_BODY_BYTES = 256 * 2**20


def _flag(value):
    return value.lower() in ("1", "true", "yes", "on")


class SolveService:
    """Request handling independent of the transport.

    ``max_concurrent`` bounds simultaneous solves; extra requests wait.
    """

    def __init__(self, size_cap=DEFAULT_SIZE_CAP, max_concurrent=None,
                 max_body_bytes=MAX_BODY_BYTES):
        self.size_cap = int(size_cap)
        self.max_body_bytes = int(max_body_bytes)
        self.max_concurrent = max_concurrent or os.cpu_count() or 1
        self._slots = threading.BoundedSemaphore(self.max_concurrent)

    def handle_health(self):
        return HTTPStatus.OK, {
            "schema": SCHEMA_VERSION, "status": "ok", "version": __version__,
            "size_cap": self.size_cap, "max_concurrent": self.max_concurrent,
        }

    def handle_solve(self, body, params=None):
        """Return ``(status, payload)`` for a solve request."""
        from .cli import run_solve

        params = params or {}
        if len(body) > self.max_body_bytes:
            return HTTPStatus.REQUEST_ENTITY_TOO_LARGE, error_payload(
                "SizeCap", f"request body exceeds {self.max_body_bytes} bytes")
        try:
            fmt = params.get("format", "auto")
            trials = int(params.get("trials", 1))
            seed = int(params.get("seed", 0))
            include = _flag(params.get("columns", "0"))
            if fmt not in ("row", "col", "auto"):
                raise ValueError(f"unknown format {fmt!r}")
            if not 1 <= trials <= MAX_TRIALS:
                raise ValueError(f"trials must lie in [1, {MAX_TRIALS}]")
        except ValueError as exc:
            return HTTPStatus.BAD_REQUEST, error_payload("BadParameter", str(exc))
        try:
            instance = parse_auto(body)[0] if fmt == "auto" else parse(body, fmt)
        except (FormatError, InstanceError) as exc:
            return HTTPStatus.BAD_REQUEST, error_payload(type(exc).__name__, str(exc))
        if instance.nnz > self.size_cap:
            return HTTPStatus.REQUEST_ENTITY_TOO_LARGE, error_payload(
                "SizeCap", f"M*N*density = {instance.nnz} exceeds B = {self.size_cap}")
        with self._slots:
            try:
                sol = run_solve(instance, trials, seed, strict=True)
            except ResourceExhausted as exc:
                return HTTPStatus.INTERNAL_SERVER_ERROR, error_payload("ResourceExhausted", str(exc))
        return HTTPStatus.OK, solution_payload(instance, sol, trials=trials, seed=seed,
                                               include_columns=include)


def make_handler(service):
    class Handler(BaseHTTPRequestHandler):
        server_version = f"mfscp/{__version__}"

        def _send(self, status, payload):
            data = json.dumps(payload, sort_keys=True).encode()
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def do_GET(self):
            if urlsplit(self.path).path == "/health":
                self._send(*service.handle_health())
            else:
                self._send(HTTPStatus.NOT_FOUND, error_payload("NotFound", self.path))

        def do_POST(self):
            url = urlsplit(self.path)
            if url.path != "/solve":
                self._send(HTTPStatus.NOT_FOUND, error_payload("NotFound", self.path))
                return
            length = int(self.headers.get("Content-Length") or 0)
            if length > service.max_body_bytes:
                self._send(HTTPStatus.REQUEST_ENTITY_TOO_LARGE,
                           error_payload("SizeCap", f"request body exceeds {service.max_body_bytes} bytes"))
                return
            body = self.rfile.read(length)
            params = {k: v[-1] for k, v in parse_qs(url.query).items()}
            self._send(*service.handle_solve(body, params))

        def log_message(self, format, *args):
            pass

    return Handler


def make_server(service, host="127.0.0.1", port=8080):
    return ThreadingHTTPServer((host, port), make_handler(service))


def serve(service, host="127.0.0.1", port=8080):
    server = make_server(service, host, port)
    print(f"serving on http://{host}:{server.server_address[1]}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
