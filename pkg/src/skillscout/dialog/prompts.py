"""Prompt catalog: 56 templates keyed by agent action and context tags."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from skillscout.intents import AgentAction, MetadataType

PROMPT_CATALOG_SIZE = 56
PROMPTS_FORMAT_VERSION = 1

_PLACEHOLDER = re.compile(r"\{(\w+)\}")


class PromptError(ValueError):
    pass


@dataclass(frozen=True)
class Prompt:
    prompt_id: str
    action: AgentAction
    tags: frozenset[str]
    template: str
    allowed_metadata: frozenset[MetadataType]


class PromptCatalog:
    def __init__(self, prompts: list[Prompt]):
        if len(prompts) != PROMPT_CATALOG_SIZE:
            raise PromptError(
                f"prompt catalog must hold exactly {PROMPT_CATALOG_SIZE} prompts, got {len(prompts)}"
            )
        ids = [p.prompt_id for p in prompts]
        if len(set(ids)) != len(ids):
            raise PromptError("duplicate prompt ids in catalog")
        self.prompts = list(prompts)
        self.by_id = {p.prompt_id: p for p in prompts}
        self.index = {p.prompt_id: i for i, p in enumerate(prompts)}

    def __len__(self) -> int:
        return len(self.prompts)

    def candidates(
        self,
        action: AgentAction,
        active_tags: set[str],
        metadata: MetadataType = MetadataType.NO_METADATA,
    ) -> list[Prompt]:
        """Prompts usable for this action whose tags are all active and which
        can carry the chosen metadata type."""
        return [
            p
            for p in self.prompts
            if p.action is action and p.tags <= active_tags and metadata in p.allowed_metadata
        ]

    def pick(self, action: AgentAction, active_tags: set[str], metadata: MetadataType, rng) -> Prompt:
        """Uniform draw among the most specific compatible prompts (those
        pinning down the most active tags)."""
        pool = self.candidates(action, active_tags, metadata)
        if not pool:
            raise PromptError(
                f"no prompt for action={action.value} tags={sorted(active_tags)} metadata={metadata.value}"
            )
        most = max(len(p.tags) for p in pool)
        pool = [p for p in pool if len(p.tags) == most]
        return pool[int(rng.integers(0, len(pool)))]

    def none_alias_index(self) -> int:
        """Encoder slot reused for 'no previous prompt': an end-session prompt
        can never precede a live turn, so its index is free."""
        for i, p in enumerate(self.prompts):
            if p.action is AgentAction.END_SESSION:
                return i
        raise PromptError("catalog holds no end-session prompt")


def render_prompt(template: str, bindings: dict) -> str:
    """Substitute {name} placeholders; unknown placeholders are an error."""

    def sub(match: re.Match) -> str:
        name = match.group(1)
        if name not in bindings:
            raise PromptError(f"missing binding for placeholder {name!r}")
        return str(bindings[name])

    return _PLACEHOLDER.sub(sub, template)


def load_prompt_catalog(path: str | Path | None = None) -> PromptCatalog:
    if path is None:
        text = resources.files("skillscout.data").joinpath("prompts.json").read_text("utf-8")
        doc = json.loads(text)
    else:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    if doc.get("format_version") != PROMPTS_FORMAT_VERSION:
        raise PromptError(f"unsupported prompts format_version {doc.get('format_version')!r}")
    prompts = []
    for rec in doc["prompts"]:
        try:
            prompts.append(
                Prompt(
                    prompt_id=rec["prompt_id"],
                    action=AgentAction(rec["action"]),
                    tags=frozenset(rec.get("tags", ())),
                    template=rec["template"],
                    allowed_metadata=frozenset(MetadataType(m) for m in rec["allowed_metadata"]),
                )
            )
        except (KeyError, ValueError) as exc:
            raise PromptError(f"bad prompt record {rec.get('prompt_id', '?')!r}: {exc}") from exc
    return PromptCatalog(prompts)
