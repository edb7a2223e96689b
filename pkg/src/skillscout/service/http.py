"""HTTP+JSON surface over the session service.

Endpoints:
  POST /v1/sessions                     {policy, profile}  -> 201 {session_id, move, ...}
  POST /v1/sessions/{id}/utterances     {text}             -> 200 {move, reward, done, ...}
  GET  /v1/sessions/{id}                                   -> 200 session summary
  GET  /v1/metrics                                         -> 200 metrics

Every response carries schema_version; unknown request fields are rejected.
Errors are {code, message}. CORS is open so the chat client can run from any
origin during development; an optional static directory serves the client.
"""

from __future__ import annotations

import json
import mimetypes
import re
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from skillscout.service.sessions import (
    SCHEMA_VERSION,
    BadRequest,
    SessionError,
    SessionService,
    SessionTerminal,
    UnknownSession,
)
from skillscout.usersim.profile import UserProfile

_SESSION_PATH = re.compile(r"^/v1/sessions/([0-9a-f]+)$")
_UTTERANCE_PATH = re.compile(r"^/v1/sessions/([0-9a-f]+)/utterances$")

_PROFILE_FIELDS = {"first_time", "style", "patience", "preferred_categories", "accept_probability"}


def profile_from_json(doc: dict) -> UserProfile:
    unknown = set(doc) - _PROFILE_FIELDS
    if unknown:
        raise BadRequest(f"unknown profile fields: {sorted(unknown)}")
    kwargs = dict(doc)
    if "preferred_categories" in kwargs:
        kwargs["preferred_categories"] = tuple(kwargs["preferred_categories"])
    try:
        return UserProfile(**kwargs)
    except (TypeError, ValueError) as exc:
        raise BadRequest(f"bad profile: {exc}") from exc


def make_handler(service: SessionService, static_dir: str | None = None):
    static_root = Path(static_dir).resolve() if static_dir else None

    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):  # quiet by default
            pass

        # -- plumbing ------------------------------------------------------

        def _send_json(self, status: int, payload: dict) -> None:
            payload = {"schema_version": SCHEMA_VERSION, **payload}
            body = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self._cors()
            self.end_headers()
            self.wfile.write(body)

        def _send_error(self, status: int, code: str, message: str) -> None:
            self._send_json(status, {"code": code, "message": message})

        def _cors(self) -> None:
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")

        def _read_body(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            raw = self.rfile.read(length) if length else b"{}"
            try:
                doc = json.loads(raw or b"{}")
            except json.JSONDecodeError as exc:
                raise BadRequest(f"request body is not valid JSON: {exc}") from exc
            if not isinstance(doc, dict):
                raise BadRequest("request body must be a JSON object")
            return doc

        # -- routes --------------------------------------------------------

        def do_OPTIONS(self):
            self.send_response(204)
            self._cors()
            self.send_header("Content-Length", "0")
            self.end_headers()

        def do_POST(self):
            try:
                if self.path == "/v1/sessions":
                    doc = self._read_body()
                    unknown = set(doc) - {"policy", "profile"}
                    if unknown:
                        raise BadRequest(f"unknown request fields: {sorted(unknown)}")
                    profile = profile_from_json(doc.get("profile") or {})
                    out = service.create_session(doc.get("policy", "rule"), profile)
                    self._send_json(201, out)
                    return
                m = _UTTERANCE_PATH.match(self.path)
                if m:
                    doc = self._read_body()
                    unknown = set(doc) - {"text"}
                    if unknown:
                        raise BadRequest(f"unknown request fields: {sorted(unknown)}")
                    if "text" not in doc or not isinstance(doc["text"], str):
                        raise BadRequest("missing utterance text")
                    out = service.post_utterance(m.group(1), doc["text"])
                    self._send_json(200, out)
                    return
                self._send_error(404, "not_found", f"no route for POST {self.path}")
            except UnknownSession as exc:
                self._send_error(404, exc.code, str(exc))
            except SessionTerminal as exc:
                self._send_error(409, exc.code, str(exc))
            except SessionError as exc:
                self._send_error(400, exc.code, str(exc))

        def do_GET(self):
            try:
                if self.path == "/v1/metrics":
                    self._send_json(200, service.get_metrics())
                    return
                m = _SESSION_PATH.match(self.path)
                if m:
                    self._send_json(200, service.session_summary(m.group(1)))
                    return
                if static_root is not None:
                    self._serve_static()
                    return
                self._send_error(404, "not_found", f"no route for GET {self.path}")
            except UnknownSession as exc:
                self._send_error(404, exc.code, str(exc))
            except SessionError as exc:
                self._send_error(400, exc.code, str(exc))

        def _serve_static(self) -> None:
            rel = self.path.split("?", 1)[0].lstrip("/") or "index.html"
            target = (static_root / rel).resolve()
            if not str(target).startswith(str(static_root)) or not target.is_file():
                self._send_error(404, "not_found", f"no file {rel}")
                return
            body = target.read_bytes()
            ctype = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
            self.send_response(200)
            self.send_header("Content-Type", ctype)
            self.send_header("Content-Length", str(len(body)))
            self._cors()
            self.end_headers()
            self.wfile.write(body)

    return Handler


def make_server(service: SessionService, host: str, port: int,
                static_dir: str | None = None) -> ThreadingHTTPServer:
    return ThreadingHTTPServer((host, port), make_handler(service, static_dir))


def serve_forever(service: SessionService, host: str, port: int,
                  static_dir: str | None = None) -> None:
    server = make_server(service, host, port, static_dir)
    print(f"skillscout service listening on http://{host}:{server.server_address[1]}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.shutdown()


def start_in_thread(service: SessionService, host: str = "127.0.0.1", port: int = 0,
                    static_dir: str | None = None):
    """Spin the server up on a daemon thread; returns (server, base_url)."""
    server = make_server(service, host, port, static_dir)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server, f"http://{host}:{server.server_address[1]}"
