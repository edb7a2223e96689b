"""Turning dialog logs into intent-prediction training pairs.

Every episode becomes an intent sequence: one (context, next_intent) pair per
user turn. Dialogs that end without an explicit user stop/end (a launch, an
agent end, or the turn cap) get a final end-of-dialog marker pair, so the
model learns when conversations finish.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from skillscout.dialog.types import TURN_DEPTH_CAP, TurnRecord
from skillscout.intents import (
    ACTION_INDEX,
    INTENT_INDEX,
    INTENT_ORDER,
    N_ACTIONS,
    N_INTENTS,
    AgentAction,
    UserIntent,
)

# The 18th output class of the intent model: the dialog is over.
END_OF_DIALOG = "end-of-dialog"

MODEL_CLASSES: tuple = INTENT_ORDER + (END_OF_DIALOG,)
N_MODEL_CLASSES = len(MODEL_CLASSES)
CLASS_INDEX = {c: i for i, c in enumerate(MODEL_CLASSES)}

_SELECTING_INTENTS = (UserIntent.SELECT_OPTION, UserIntent.CATEGORY_NAME, UserIntent.SKILL_NAME)


@dataclass
class IntentContext:
    """The six features the next user intent is predicted from."""

    prev_user_intent: UserIntent | None
    prev_agent_action: AgentAction | None
    prev_prompt: str | None
    first_time: bool
    has_selected: bool
    turn_count: int

    def feature_indices(self, prompt_index: dict[str, int]) -> tuple[int, ...]:
        """Index form: 0 reserved for 'none' on the nullable features."""
        return (
            0 if self.prev_user_intent is None else 1 + INTENT_INDEX[self.prev_user_intent],
            0 if self.prev_agent_action is None else 1 + ACTION_INDEX[self.prev_agent_action],
            0 if not self.prev_prompt else 1 + prompt_index[self.prev_prompt],
            1 if self.first_time else 0,
            1 if self.has_selected else 0,
            min(max(self.turn_count, 1), TURN_DEPTH_CAP) - 1,
        )


# Feature cardinalities for the index form above (prompt block sized by caller).
def intent_feature_sizes(n_prompts: int) -> tuple[int, ...]:
    return (N_INTENTS + 1, N_ACTIONS + 1, n_prompts + 1, 2, 2, TURN_DEPTH_CAP)


@dataclass
class EpisodeLog:
    session_id: str
    first_time: bool
    records: list[TurnRecord] = field(default_factory=list)


@dataclass
class IntentDataset:
    pairs: list[tuple[IntentContext, object]] = field(default_factory=list)
    train: list[int] = field(default_factory=list)
    held_out: list[int] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.pairs)

    def split(self, held_out_fraction: float, rng) -> None:
        """Deterministic per-pair split; no pair lands in both bins."""
        order = rng.permutation(len(self.pairs))
        cut = int(len(self.pairs) * held_out_fraction)
        self.held_out = sorted(int(i) for i in order[:cut])
        self.train = sorted(int(i) for i in order[cut:])


def extract_sequences(logs: list[EpisodeLog]) -> IntentDataset:
    """One (context, next_intent) pair per user turn across all episodes."""
    dataset = IntentDataset()
    for episode in logs:
        prev_intent: UserIntent | None = None
        prev_action: AgentAction | None = None
        prev_prompt: str | None = None
        has_selected = False
        last = None
        for rec in episode.records:
            ctx = IntentContext(
                prev_user_intent=prev_intent,
                prev_agent_action=prev_action,
                prev_prompt=prev_prompt,
                first_time=episode.first_time,
                has_selected=has_selected,
                turn_count=rec.turn_index,
            )
            dataset.pairs.append((ctx, rec.user_intent))
            if rec.user_intent in _SELECTING_INTENTS:
                has_selected = True
            prev_intent = rec.user_intent
            prev_action = rec.agent_action
            prev_prompt = rec.prompt_id or None
            last = rec
        if last is not None and last.user_intent not in (UserIntent.STOP, UserIntent.END):
            dataset.pairs.append(
                (
                    IntentContext(
                        prev_user_intent=prev_intent,
                        prev_agent_action=prev_action,
                        prev_prompt=prev_prompt,
                        first_time=episode.first_time,
                        has_selected=has_selected,
                        turn_count=last.turn_index + 1,
                    ),
                    END_OF_DIALOG,
                )
            )
    return dataset
