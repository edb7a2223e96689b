from skillscout.service.config import ServiceConfig, load_config
from skillscout.service.logs import DialogLogWriter, read_dialog_logs, record_to_json
from skillscout.service.sessions import (
    SessionError,
    SessionService,
    SessionTerminal,
    UnknownSession,
)
from skillscout.service.http import make_server, serve_forever

__all__ = [
    "DialogLogWriter",
    "ServiceConfig",
    "SessionError",
    "SessionService",
    "SessionTerminal",
    "UnknownSession",
    "load_config",
    "make_server",
    "read_dialog_logs",
    "record_to_json",
    "serve_forever",
]
