"""Pattern-based intent classification with catalog-grounded slot resolution.

Matching is deterministic: rules are tried by priority (then by how much
literal text a pattern pins down), and slot text resolves against the current
offer list first, then category names, then skill names. Anything that matches
nothing falls back to out-of-domain, so classification is total.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from skillscout.catalog import Catalog
from skillscout.dialog.types import DialogContext
from skillscout.intents import SLOTTED_INTENTS, UserIntent

RULES_FORMAT_VERSION = 1

_NORMALIZE = re.compile(r"[^a-z0-9' ]+")
_SPACES = re.compile(r"\s+")

ORDINALS = {
    "first": 1, "second": 2, "third": 3, "fourth": 4, "fifth": 5,
    "1": 1, "2": 2, "3": 3, "4": 4, "5": 5,
    "one": 1, "two": 2, "three": 3, "four": 4, "five": 5,
}


class NluError(ValueError):
    pass


def normalize(text: str) -> str:
    text = _NORMALIZE.sub(" ", text.lower())
    return _SPACES.sub(" ", text).strip()


@dataclass(frozen=True)
class PatternRule:
    intent: UserIntent
    patterns: tuple[str, ...]
    priority: int


@dataclass
class NluResult:
    intent: UserIntent
    slot: str | None = None
    resolved_slot: str | None = None
    resolved_index: int | None = None
    confidence: str = "matched"  # "matched" or "fallback"


@dataclass(frozen=True)
class _CompiledPattern:
    rule: PatternRule
    regex: re.Pattern
    literal_weight: int


def _compile(rules: list[PatternRule]) -> list[_CompiledPattern]:
    compiled = []
    for rule in rules:
        for pattern in rule.patterns:
            parts = [normalize(p) for p in pattern.split("{slot}")]
            literal = sum(len(p) for p in parts)
            regex = re.compile("(?P<slot>.+?)".join(re.escape(p) for p in parts))
            compiled.append(_CompiledPattern(rule, regex, literal))
    compiled.sort(key=lambda c: (-c.rule.priority, -c.literal_weight))
    return compiled


def load_rules(path: str | Path | None = None) -> list[PatternRule]:
    """Load and validate rules; every one of the 17 intents must be covered."""
    if path is None:
        text = resources.files("skillscout.data").joinpath("rules.json").read_text("utf-8")
        doc = json.loads(text)
    else:
        with open(path, encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise NluError(f"rules file is not valid JSON: {exc}") from exc
    if doc.get("format_version") != RULES_FORMAT_VERSION:
        raise NluError(f"unsupported rules format_version {doc.get('format_version')!r}")
    rules = []
    for rec in doc["rules"]:
        intent = UserIntent(rec["intent"])
        patterns = tuple(rec["patterns"])
        if intent in SLOTTED_INTENTS:
            for p in patterns:
                if p.count("{slot}") != 1:
                    raise NluError(
                        f"pattern {p!r} for slotted intent {intent.value} must have exactly one slot marker"
                    )
        else:
            for p in patterns:
                if "{slot}" in p:
                    raise NluError(f"pattern {p!r} for {intent.value} must not capture a slot")
        rules.append(PatternRule(intent=intent, patterns=patterns, priority=int(rec["priority"])))
    covered = {r.intent for r in rules}
    missing = [i.value for i in UserIntent if i not in covered]
    if missing:
        raise NluError(f"rules do not cover intents: {', '.join(missing)}")
    return rules


class _Resolver:
    def __init__(self, context: DialogContext, catalog: Catalog):
        self.context = context
        self.catalog = catalog

    @staticmethod
    def _key(name: str) -> str:
        norm = normalize(name)
        return norm[: -len(" games")] if norm.endswith(" games") else norm

    def category(self, text: str) -> str | None:
        key = self._key(text)
        for it in self.context.offered_items:
            if it.kind == "category" and self._key(self.catalog.categories[it.id].name) == key:
                return it.id
        for cid, cat in self.catalog.categories.items():
            if self._key(cat.name) == key or cid == key.replace(" ", "-"):
                return cid
        return None

    def skill(self, text: str) -> str | None:
        key = normalize(text)
        for it in self.context.offered_items:
            if it.kind == "skill" and normalize(self.catalog.skills[it.id].name) == key:
                return it.id
        for sid, skill in self.catalog.skills.items():
            if normalize(skill.name) == key:
                return sid
        return None

    def ordinal(self, text: str) -> int | None:
        index = ORDINALS.get(normalize(text))
        if index is None:
            return None
        if not 1 <= index <= len(self.context.offered_items):
            return None
        return index


def classify(
    utterance: str,
    context: DialogContext,
    catalog: Catalog,
    rules: list[PatternRule] | list[_CompiledPattern],
) -> NluResult:
    """Map an utterance to (intent, slot); total, deterministic."""
    compiled = rules if rules and isinstance(rules[0], _CompiledPattern) else _compile(rules)
    norm = normalize(utterance)
    resolver = _Resolver(context, catalog)
    unresolved: NluResult | None = None

    for cp in compiled:
        m = cp.regex.fullmatch(norm)
        if not m:
            continue
        intent = cp.rule.intent
        if intent not in SLOTTED_INTENTS:
            result = NluResult(intent=intent)
            if intent in (UserIntent.GET_RATING, UserIntent.GET_DETAILS):
                result.resolved_slot = context.proposed_skill
            return result
        slot_text = m.group("slot").strip()
        if intent is UserIntent.SELECT_OPTION:
            index = resolver.ordinal(slot_text)
            if index is not None:
                item = context.offered_items[index - 1]
                return NluResult(intent, slot_text, item.id, index)
        elif intent is UserIntent.CATEGORY_NAME:
            cid = resolver.category(slot_text)
            if cid is not None:
                return NluResult(intent, slot_text, cid)
            sid = resolver.skill(slot_text)
            if sid is not None:
                return NluResult(UserIntent.SKILL_NAME, slot_text, sid)
        elif intent is UserIntent.SKILL_NAME:
            sid = resolver.skill(slot_text)
            if sid is not None:
                return NluResult(intent, slot_text, sid)
            cid = resolver.category(slot_text)
            if cid is not None:
                return NluResult(UserIntent.CATEGORY_NAME, slot_text, cid)
        # A pattern that is nothing but the slot carries no intent evidence of
        # its own; it only counts when the slot text actually resolves.
        if unresolved is None and cp.literal_weight > 0:
            unresolved = NluResult(intent, slot_text, None)

    if unresolved is not None:
        return unresolved
    return NluResult(UserIntent.OUT_OF_DOMAIN, confidence="fallback")


def compile_rules(rules: list[PatternRule]) -> list[_CompiledPattern]:
    """Pre-compile once for repeated classification."""
    return _compile(rules)
