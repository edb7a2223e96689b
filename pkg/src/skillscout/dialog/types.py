"""Dialog state containers: the RL-visible state, full session context, turn log."""

from __future__ import annotations

from dataclasses import dataclass, field

from skillscout.intents import AgentAction, MetadataType, UserIntent

# A dialog never runs past this many user turns; reaching it forces end-session.
TURN_DEPTH_CAP = 110


@dataclass
class DialogState:
    """The 7 features the learner observes."""

    user_intent: UserIntent
    prev_agent_action: AgentAction | None
    prev_prompt: str | None
    prev_metadata: MetadataType
    target_category: str | None
    first_time_user: bool
    turn_depth: int

    def copy(self) -> "DialogState":
        return DialogState(
            user_intent=self.user_intent,
            prev_agent_action=self.prev_agent_action,
            prev_prompt=self.prev_prompt,
            prev_metadata=self.prev_metadata,
            target_category=self.target_category,
            first_time_user=self.first_time_user,
            turn_depth=self.turn_depth,
        )


@dataclass(frozen=True)
class OfferItem:
    kind: str  # "skill" or "category"
    id: str


@dataclass
class TurnRecord:
    turn_index: int
    user_utterance: str
    user_intent: UserIntent
    agent_action: AgentAction
    prompt_id: str
    metadata_type: MetadataType
    reward: float


@dataclass
class AgentMove:
    """One agent turn: what was said, what was offered, whether the dialog ended."""

    action: AgentAction
    prompt_id: str
    metadata_type: MetadataType
    text: str
    offered: list[OfferItem] = field(default_factory=list)
    launched: str | None = None
    terminal: bool = False


@dataclass
class DialogContext:
    """Full per-session state; `state` is the slice the learner sees."""

    state: DialogState
    profile: "UserProfile"  # noqa: F821 - imported lazily to avoid a cycle
    proposed_skill: str | None = None
    offered_items: list[OfferItem] = field(default_factory=list)
    exhausted_skills: dict[str | None, set[str]] = field(default_factory=dict)
    exhausted_categories: set[str] = field(default_factory=set)
    misunderstanding_count: int = 0
    category_stack: list[str | None] = field(default_factory=list)
    has_selected: bool = False
    episode_log: list[TurnRecord] = field(default_factory=list)
    # Session plumbing beyond the RL observation.
    done: bool = False
    last_prompt_text: str = ""
    requested_skill: str | None = None
    selection_was_skill: bool = False
    rejected_offers: int = 0
    asked_info_for: str | None = None
    pending_utterance: str = ""

    def exhausted_in(self, category_id: str | None) -> set[str]:
        return self.exhausted_skills.setdefault(category_id, set())
