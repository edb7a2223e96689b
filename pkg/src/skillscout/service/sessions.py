"""In-memory session store: live dialogs against a chosen policy, with
per-turn JSONL persistence and Table-style metrics."""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field

import numpy as np

from skillscout.catalog import Catalog, load_catalog, skill_metadata
from skillscout.dialog.encoding import StateEncoder
from skillscout.dialog.env import DialogEnv, apply_action, observe_user, reset
from skillscout.dialog.prompts import PromptCatalog, load_prompt_catalog
from skillscout.dialog.types import AgentMove, DialogContext, TurnRecord
from skillscout.intents import (
    AgentAction,
    MetadataType,
    SLOTTED_INTENTS,
    UserIntent,
)
from skillscout.nlu import classify, compile_rules, load_rules
from skillscout.rl.network import load_checkpoint
from skillscout.rl.policies import make_baseline_popularity_policy, make_rule_policy
from skillscout.rl.training import make_greedy_policy
from skillscout.service.config import ServiceConfig
from skillscout.service.logs import DialogLogWriter
from skillscout.usersim.profile import UserProfile

SCHEMA_VERSION = 1

POLICY_KINDS = ("rule", "rl", "baseline-popularity")

# The canonical opening utterance attributed to session creation in logs.
START_UTTERANCE = "let's play a game"


def move_reward(move: AgentMove) -> float:
    if not move.terminal:
        return 0.0
    return 1.0 if move.launched else -1.0


class SessionError(Exception):
    code = "session_error"


class UnknownSession(SessionError):
    code = "unknown_session"


class SessionTerminal(SessionError):
    code = "session_terminal"


class BadRequest(SessionError):
    code = "bad_request"


@dataclass
class Session:
    session_id: str
    policy_kind: str
    context: DialogContext
    profile: UserProfile
    created_at: float
    updated_at: float
    rng: np.random.Generator = field(default_factory=np.random.default_rng)
    status: str = "active"  # active | ended | launched
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def terminal(self) -> bool:
        return self.status != "active"


class SessionService:
    def __init__(self, config: ServiceConfig):
        self.config = config
        self.catalog: Catalog = load_catalog(config.catalog_path)
        self.prompts: PromptCatalog = load_prompt_catalog(config.prompts_path)
        self.rules = compile_rules(load_rules(config.rules_path))
        self.log = DialogLogWriter(config.log_path)
        self._rng = np.random.default_rng(config.seed)
        self._sessions: dict[str, Session] = {}
        self._store_lock = threading.Lock()
        self._policies = {
            "rule": make_rule_policy(),
            "baseline-popularity": make_baseline_popularity_policy(),
        }
        if config.checkpoint_path:
            net = load_checkpoint(config.checkpoint_path)
            encoder = StateEncoder(self.catalog, self.prompts, net.mode)
            self._policies["rl"] = make_greedy_policy(net, encoder)

    # -- lifecycle ---------------------------------------------------------

    def create_session(self, policy_kind: str, profile: UserProfile) -> dict:
        if policy_kind not in POLICY_KINDS:
            raise BadRequest(f"unknown policy {policy_kind!r}")
        if policy_kind not in self._policies:
            raise BadRequest("rl policy requested but no checkpoint is loaded")
        with self._store_lock:
            rng = np.random.default_rng(self._rng.integers(0, 2**63 - 1))
        context = reset(self.catalog, profile)
        context.pending_utterance = START_UTTERANCE
        session = Session(
            session_id=uuid.uuid4().hex,
            policy_kind=policy_kind,
            context=context,
            profile=profile,
            created_at=time.time(),
            updated_at=time.time(),
            rng=rng,
        )
        move = self._agent_turn(session)
        with self._store_lock:
            self._sessions[session.session_id] = session
        return {
            "session_id": session.session_id,
            "move": self.move_to_json(move),
            "status": session.status,
            "reward": move_reward(move),
            "done": session.terminal,
        }

    def post_utterance(self, session_id: str, text: str) -> dict:
        session = self._get(session_id)
        if session.terminal:
            raise SessionTerminal(f"session {session_id} is {session.status}")
        with session.lock:
            context = session.context
            result = classify(text, context, self.catalog, self.rules)
            intent, slot = self._ground_nlu(result)
            context.pending_utterance = text
            _, reward, done = observe_user(context, intent, slot, self.catalog)
            session.updated_at = time.time()
            if done:
                record = TurnRecord(
                    context.state.turn_depth, text, intent,
                    AgentAction.END_SESSION, "", MetadataType.NO_METADATA, reward,
                )
                context.episode_log.append(record)
                self.log.append(session.session_id, record, True, session.profile)
                session.status = "ended"
                return {
                    "move": None,
                    "reward": reward,
                    "done": True,
                    "status": session.status,
                    "intent": intent.value,
                }
            move = self._agent_turn(session)
            return {
                "move": self.move_to_json(move),
                "reward": move_reward(move),
                "done": session.terminal,
                "status": session.status,
                "intent": intent.value,
            }

    def _agent_turn(self, session: Session) -> AgentMove:
        context = session.context
        env = DialogEnv(self.catalog, self.prompts, session.rng)
        env.context = context
        action = self._policies[session.policy_kind](context, env, session.rng)
        pre_intent = context.state.user_intent
        pre_depth = context.state.turn_depth
        pre_utterance = context.pending_utterance
        move = apply_action(context, action, self.catalog, self.prompts, session.rng)
        reward = move_reward(move)
        record = TurnRecord(
            pre_depth, pre_utterance, pre_intent, action,
            move.prompt_id, move.metadata_type, reward,
        )
        context.episode_log.append(record)
        self.log.append(session.session_id, record, move.terminal, session.profile)
        if move.terminal:
            session.status = "launched" if move.launched else "ended"
        return move

    def _ground_nlu(self, result) -> tuple[UserIntent, str | int | None]:
        """Collapse unresolved slotted intents to a misunderstanding."""
        intent = result.intent
        if intent not in SLOTTED_INTENTS:
            return intent, None
        if intent is UserIntent.SELECT_OPTION:
            if result.resolved_index is None:
                return UserIntent.OUT_OF_DOMAIN, None
            return intent, result.resolved_index
        if result.resolved_slot is None:
            return UserIntent.OUT_OF_DOMAIN, None
        return intent, result.resolved_slot

    def _get(self, session_id: str) -> Session:
        with self._store_lock:
            session = self._sessions.get(session_id)
        if session is None:
            raise UnknownSession(f"unknown session {session_id!r}")
        return session

    # -- views -------------------------------------------------------------

    def move_to_json(self, move: AgentMove) -> dict:
        offers = []
        for item in move.offered:
            if item.kind == "skill":
                label = self.catalog.skills[item.id].name
            else:
                label = self.catalog.categories[item.id].name
            offers.append({"id": item.id, "label": label, "kind": item.kind})
        metadata: dict = {"type": move.metadata_type.value}
        if move.offered and move.offered[0].kind == "skill":
            skill = self.catalog.skills[move.offered[0].id]
            metadata.update(
                {k: v for k, v in skill_metadata(skill, move.metadata_type).items()}
            )
        launched = None
        if move.launched:
            launched = {"id": move.launched, "label": self.catalog.skills[move.launched].name}
        return {
            "action": move.action.value,
            "prompt_id": move.prompt_id,
            "text": move.text,
            "metadata": metadata,
            "offers": offers,
            "launched": launched,
            "terminal": move.terminal,
        }

    def session_summary(self, session_id: str) -> dict:
        session = self._get(session_id)
        return {
            "session_id": session.session_id,
            "policy": session.policy_kind,
            "status": session.status,
            "turns": session.context.state.turn_depth,
            "first_time": session.profile.first_time,
            "created_at": session.created_at,
            "updated_at": session.updated_at,
        }

    def get_metrics(self) -> dict:
        with self._store_lock:
            sessions = list(self._sessions.values())
        buckets: dict[tuple[str, bool], dict] = {}
        overall = {"sessions": 0, "terminal": 0, "launched": 0, "turns": 0}
        for s in sessions:
            key = (s.policy_kind, s.profile.first_time)
            b = buckets.setdefault(key, {"sessions": 0, "terminal": 0, "launched": 0, "turns": 0})
            for acc in (b, overall):
                acc["sessions"] += 1
                if s.terminal:
                    acc["terminal"] += 1
                    acc["turns"] += s.context.state.turn_depth
                    if s.status == "launched":
                        acc["launched"] += 1

        def finish(acc: dict) -> dict:
            out = {
                "sessions": acc["sessions"],
                "terminal_sessions": acc["terminal"],
                "launched_sessions": acc["launched"],
            }
            if acc["terminal"]:
                out["success_rate"] = acc["launched"] / acc["terminal"]
                out["avg_dialog_length"] = acc["turns"] / acc["terminal"]
            return out

        return {
            "sessions_total": overall["sessions"],
            "overall": finish(overall),
            "buckets": [
                {
                    "policy": policy,
                    "first_time": first_time,
                    **finish(acc),
                }
                for (policy, first_time), acc in sorted(
                    buckets.items(), key=lambda kv: (kv[0][0], not kv[0][1])
                )
            ],
        }
