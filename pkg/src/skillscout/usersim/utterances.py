"""Utterance templates: how simulated users phrase each intent."""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from skillscout.intents import UserIntent

UTTERANCES_FORMAT_VERSION = 1

ORDINAL_WORDS = ["first", "second", "third", "fourth", "fifth"]


class UtteranceBank:
    def __init__(self, templates: dict[UserIntent, list[str]]):
        missing = [i.value for i in UserIntent if not templates.get(i)]
        if missing:
            raise ValueError(f"no utterance templates for intents: {missing}")
        self.templates = templates

    def for_intent(self, intent: UserIntent) -> list[str]:
        return self.templates[intent]


def load_utterance_bank(path: str | Path | None = None) -> UtteranceBank:
    if path is None:
        text = resources.files("skillscout.data").joinpath("utterances.json").read_text("utf-8")
        doc = json.loads(text)
    else:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    if doc.get("format_version") != UTTERANCES_FORMAT_VERSION:
        raise ValueError(f"unsupported utterances format_version {doc.get('format_version')!r}")
    templates = {UserIntent(k): list(v) for k, v in doc["templates"].items()}
    return UtteranceBank(templates)


def sample_utterance(
    intent: UserIntent,
    slot: str | int | None,
    templates: UtteranceBank,
    rng: np.random.Generator,
) -> str:
    """Uniform draw over the intent's templates with the slot substituted.

    Slot text conventions: category templates take the category label, skill
    templates the skill name, select-option templates a 1-based ordinal.
    """
    pool = templates.for_intent(intent)
    template = pool[int(rng.integers(0, len(pool)))]
    if intent is UserIntent.CATEGORY_NAME:
        return template.replace("{category}", str(slot))
    if intent is UserIntent.SKILL_NAME:
        return template.replace("{skill}", str(slot))
    if intent is UserIntent.SELECT_OPTION:
        word = ORDINAL_WORDS[int(slot) - 1]
        return template.replace("{ordinal}", word)
    return template
