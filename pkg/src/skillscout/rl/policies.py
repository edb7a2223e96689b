"""Policy adapters sharing one calling convention: policy(context, env, rng) -> AgentAction."""

from __future__ import annotations

import numpy as np

from skillscout.dialog.env import DialogEnv, action_mask, rule_policy
from skillscout.intents import (
    ACTION_INDEX,
    ACTION_ORDER,
    EXECUTE_INTENTS,
    SKILL_OFFER_ACTIONS,
    AgentAction,
)

BASELINE_MAX_OFFERS = 5


def make_rule_policy():
    def policy(context, env: DialogEnv, rng: np.random.Generator):
        return rule_policy(context, env.catalog, rng)

    return policy


def make_random_policy():
    """Uniform over valid actions; used by the invariant suites."""

    def policy(context, env: DialogEnv, rng: np.random.Generator):
        mask = action_mask(context, env.catalog)
        valid = np.flatnonzero(mask)
        return ACTION_ORDER[int(valid[rng.integers(0, len(valid))])]

    return policy


def make_baseline_popularity_policy():
    """Offer up to five most-popular skills, accept yes/no, never browse."""

    def policy(context, env: DialogEnv, rng: np.random.Generator):
        mask = action_mask(context, env.catalog)
        if mask[ACTION_INDEX[AgentAction.LAUNCH_SKILL]]:
            return AgentAction.LAUNCH_SKILL
        if context.state.user_intent in EXECUTE_INTENTS:
            return AgentAction.EXECUTE
        offers_made = sum(
            1 for rec in context.episode_log if rec.agent_action in SKILL_OFFER_ACTIONS
        )
        if offers_made < BASELINE_MAX_OFFERS and mask[ACTION_INDEX[AgentAction.OFFER_ONE_SKILL]]:
            return AgentAction.OFFER_ONE_SKILL
        return AgentAction.END_SESSION

    return policy
