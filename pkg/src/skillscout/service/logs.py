"""Append-only JSONL dialog logs.

One line per user turn, flushed immediately, so a crash can truncate at most
the final line; readers skip a truncated tail with a warning and keep every
complete record.
"""

from __future__ import annotations

import json
import logging
import threading
from pathlib import Path

from skillscout.dialog.types import TurnRecord
from skillscout.intents import AgentAction, MetadataType, UserIntent
from skillscout.usersim.dataset import EpisodeLog
from skillscout.usersim.profile import UserProfile

LOG_FORMAT_VERSION = 1

logger = logging.getLogger(__name__)


def record_to_json(session_id: str, record: TurnRecord, done: bool, profile: UserProfile) -> str:
    return json.dumps(
        {
            "format_version": LOG_FORMAT_VERSION,
            "session_id": session_id,
            "turn_index": record.turn_index,
            "user_utterance": record.user_utterance,
            "user_intent": record.user_intent.value,
            "agent_action": record.agent_action.value,
            "prompt_id": record.prompt_id,
            "metadata_type": record.metadata_type.value,
            "reward": record.reward,
            "done": done,
            "profile": {"first_time": profile.first_time, "style": profile.style},
        },
        ensure_ascii=False,
    )


class DialogLogWriter:
    """Thread-safe per-line appender; each line is written atomically."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = open(self.path, "a", encoding="utf-8")
        self._lock = threading.Lock()

    def append(self, session_id: str, record: TurnRecord, done: bool, profile: UserProfile) -> None:
        line = record_to_json(session_id, record, done, profile) + "\n"
        with self._lock:
            self._fh.write(line)
            self._fh.flush()

    def append_episode(self, session_id: str, records: list[TurnRecord], profile: UserProfile) -> None:
        for i, rec in enumerate(records):
            self.append(session_id, rec, done=(i == len(records) - 1 and rec.reward != 0.0), profile=profile)

    def close(self) -> None:
        with self._lock:
            self._fh.close()

    def __enter__(self) -> "DialogLogWriter":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def parse_log_line(line: str) -> dict:
    doc = json.loads(line)
    if doc.get("format_version") != LOG_FORMAT_VERSION:
        raise ValueError(f"unsupported log format_version {doc.get('format_version')!r}")
    return doc


def read_dialog_logs(path: str | Path) -> list[EpisodeLog]:
    """Parse a JSONL log into per-session episodes, preserving turn order."""
    episodes: dict[str, EpisodeLog] = {}
    order: list[str] = []
    with open(path, encoding="utf-8") as fh:
        lines = fh.readlines()
    for i, line in enumerate(lines):
        if not line.strip():
            continue
        try:
            doc = parse_log_line(line)
        except (json.JSONDecodeError, ValueError) as exc:
            if i == len(lines) - 1 and isinstance(exc, json.JSONDecodeError):
                logger.warning("skipping truncated final log line in %s", path)
                continue
            raise ValueError(f"malformed log record on line {i + 1}: {exc}") from exc
        sid = doc["session_id"]
        if sid not in episodes:
            episodes[sid] = EpisodeLog(
                session_id=sid, first_time=bool(doc["profile"]["first_time"])
            )
            order.append(sid)
        episodes[sid].records.append(
            TurnRecord(
                turn_index=int(doc["turn_index"]),
                user_utterance=doc["user_utterance"],
                user_intent=UserIntent(doc["user_intent"]),
                agent_action=AgentAction(doc["agent_action"]),
                prompt_id=doc["prompt_id"],
                metadata_type=MetadataType(doc["metadata_type"]),
                reward=float(doc["reward"]),
            )
        )
    return [episodes[sid] for sid in order]
