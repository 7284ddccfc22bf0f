"""HTTP front end: the engine behind ``POST /api/analyze``.

The service is a thin, stateless wrapper around
:func:`powerbench.api.analyze_json` — every handler call is a pure
function of the request body, so concurrent requests never interact.

Endpoints:

``GET /api/health``
    ``{"status": "ok", "engine_version": ...}`` — liveness probe.
``POST /api/analyze``
    JSON request in, JSON response out.  Malformed bodies (bad JSON,
    missing or mistyped fields) get 400 with the missing field names;
    well-formed requests with impossible values get 422.  Both error
    bodies carry ``error`` and ``engine_version``.

When started with a static directory, files under it are served at
``/`` (``index.html`` for the root) so the browser workbench and its
API share one origin.
"""

from __future__ import annotations

import json
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import urlsplit

from powerbench import __version__
from powerbench.api import RequestError, analyze_json

_MIME = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".mjs": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".map": "application/json",
    ".svg": "image/svg+xml",
    ".png": "image/png",
    ".ico": "image/x-icon",
}


class PowerbenchServer(ThreadingHTTPServer):
    """Threaded listener carrying the optional static-file root."""

    daemon_threads = True

    def __init__(self, address: tuple[str, int], static_dir: str | None = None):
        super().__init__(address, _Handler)
        self.static_dir = Path(static_dir).resolve() if static_dir else None


class _Handler(BaseHTTPRequestHandler):
    server_version = "powerbench/" + __version__
    protocol_version = "HTTP/1.1"

    # Keep stdout/stderr clean; the CLI prints the listening line itself.
    def log_message(self, format: str, *args) -> None:
        pass

    def _send_json(self, status: int, obj: dict) -> None:
        body = json.dumps(obj).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _not_found(self) -> None:
        self._send_json(
            404, {"error": "not found", "engine_version": __version__}
        )

    def do_GET(self) -> None:
        path = urlsplit(self.path).path
        if path == "/api/health":
            self._send_json(
                200, {"status": "ok", "engine_version": __version__}
            )
        elif self.server.static_dir is not None and not path.startswith("/api/"):
            self._send_static(path)
        else:
            self._not_found()

    def do_POST(self) -> None:
        if urlsplit(self.path).path != "/api/analyze":
            self._not_found()
            return
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length)
        try:
            payload = json.loads(raw)
        except json.JSONDecodeError as exc:
            self._send_json(
                400,
                {"error": f"invalid JSON: {exc}", "engine_version": __version__},
            )
            return
        try:
            response = analyze_json(payload)
        except RequestError as exc:
            self._send_json(
                400,
                {
                    "error": str(exc),
                    "missing": list(exc.missing),
                    "engine_version": __version__,
                },
            )
            return
        except (ValueError, ArithmeticError) as exc:
            self._send_json(
                422, {"error": str(exc), "engine_version": __version__}
            )
            return
        self._send_json(200, response)

    def _send_static(self, path: str) -> None:
        root = self.server.static_dir
        target = (root / path.lstrip("/")).resolve()
        if not (target == root or target.is_relative_to(root)):
            self._not_found()
            return
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            self._not_found()
            return
        body = target.read_bytes()
        self.send_response(200)
        self.send_header(
            "Content-Type", _MIME.get(target.suffix, "application/octet-stream")
        )
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


def make_server(host: str, port: int, static_dir: str | None = None) -> PowerbenchServer:
    """Bind a server without starting it (port 0 picks a free port)."""
    return PowerbenchServer((host, port), static_dir)


def serve(host: str, port: int, static_dir: str | None = None) -> None:
    """Run the service until interrupted."""
    server = make_server(host, port, static_dir)
    host_shown, port_bound = server.server_address[:2]
    print(f"listening on http://{host_shown}:{port_bound}/", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
