"""Model-driven simulated user: samples the next intent from a trained
IntentModel and grounds slots against the live dialog state."""

from __future__ import annotations

import numpy as np

from skillscout.catalog import Catalog
from skillscout.dialog.types import AgentMove, DialogContext
from skillscout.intents import UserIntent
from skillscout.usersim.behavioral import _slot_label
from skillscout.usersim.dataset import END_OF_DIALOG, IntentContext
from skillscout.usersim.model import IntentModel, sample_intent
from skillscout.usersim.utterances import UtteranceBank, sample_utterance


class IntentModelUser:
    def __init__(
        self,
        model: IntentModel,
        catalog: Catalog,
        templates: UtteranceBank,
        rng: np.random.Generator,
    ):
        self.model = model
        self.catalog = catalog
        self.templates = templates
        self.rng = rng
        self._category_ids = sorted(catalog.categories)
        self._skill_ids = sorted(catalog.skills)

    def start_utterance(self) -> str:
        return sample_utterance(UserIntent.START, None, self.templates, self.rng)

    def respond(self, context: DialogContext, move: AgentMove):
        state = context.state
        ctx = IntentContext(
            prev_user_intent=state.user_intent,
            prev_agent_action=move.action,
            prev_prompt=move.prompt_id,
            first_time=state.first_time_user,
            has_selected=context.has_selected,
            turn_count=state.turn_depth + 1,
        )
        cls = sample_intent(self.model, ctx, self.rng)
        intent, slot = self._ground(cls, context)
        utterance = sample_utterance(
            intent, _slot_label(self.catalog, intent, slot), self.templates, self.rng
        )
        return intent, slot, utterance

    def _ground(self, cls, context: DialogContext):
        """Map a sampled class onto an intent and slot feasible right now."""
        if cls == END_OF_DIALOG:
            return UserIntent.END, None
        intent = cls
        if intent is UserIntent.START:
            return UserIntent.OUT_OF_DOMAIN, None
        if intent is UserIntent.CATEGORY_NAME:
            offered = [it.id for it in context.offered_items if it.kind == "category"]
            if offered and self.rng.random() < 0.85:
                return intent, offered[int(self.rng.integers(0, len(offered)))]
            return intent, self._category_ids[int(self.rng.integers(0, len(self._category_ids)))]
        if intent is UserIntent.SKILL_NAME:
            offered = [it.id for it in context.offered_items if it.kind == "skill"]
            if offered:
                return intent, offered[0]
            return intent, self._skill_ids[int(self.rng.integers(0, len(self._skill_ids)))]
        if intent is UserIntent.SELECT_OPTION:
            if context.offered_items:
                return intent, int(self.rng.integers(1, len(context.offered_items) + 1))
            return UserIntent.OUT_OF_DOMAIN, None
        return intent, None
