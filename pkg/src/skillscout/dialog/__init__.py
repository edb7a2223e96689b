from skillscout.dialog.types import (
    AgentMove,
    DialogContext,
    DialogState,
    OfferItem,
    TurnRecord,
    TURN_DEPTH_CAP,
)
from skillscout.dialog.prompts import PromptCatalog, load_prompt_catalog, render_prompt
from skillscout.dialog.env import (
    DialogEnv,
    action_mask,
    apply_action,
    observe_user,
    reset,
    rule_policy,
    step,
)
from skillscout.dialog.encoding import StateEncoder

__all__ = [
    "AgentMove",
    "DialogContext",
    "DialogState",
    "DialogEnv",
    "OfferItem",
    "PromptCatalog",
    "StateEncoder",
    "TurnRecord",
    "TURN_DEPTH_CAP",
    "action_mask",
    "apply_action",
    "load_prompt_catalog",
    "observe_user",
    "render_prompt",
    "reset",
    "rule_policy",
    "step",
]
