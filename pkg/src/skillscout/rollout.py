"""Episode rollouts shared by evaluation, bootstrapping, and invariant checks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from skillscout.dialog.env import DialogEnv
from skillscout.dialog.types import DialogContext, TurnRecord
from skillscout.intents import AgentAction


@dataclass
class EpisodeResult:
    total_reward: float
    user_turns: int
    launched: bool
    steps: int
    records: list[TurnRecord]
    first_time: bool
    context: DialogContext


def run_episode(env: DialogEnv, policy, user, profile, policy_rng: np.random.Generator,
                max_steps: int = 1000) -> EpisodeResult:
    """Play one dialog to termination.

    policy(context, env, rng) -> AgentAction. The step cap is a safety net an
    order of magnitude above the environment's own 110-turn limit.
    """
    context = env.reset(profile)
    context.pending_utterance = user.start_utterance()
    total = 0.0
    launched = False
    steps = 0
    for _ in range(max_steps):
        action = policy(context, env, policy_rng)
        result = env.step(action, user)
        total += result.reward
        steps += 1
        if action is AgentAction.LAUNCH_SKILL and result.move.terminal:
            launched = True
        if result.done:
            break
    return EpisodeResult(
        total_reward=total,
        user_turns=context.state.turn_depth,
        launched=launched,
        steps=steps,
        records=list(context.episode_log),
        first_time=profile.first_time,
        context=context,
    )
