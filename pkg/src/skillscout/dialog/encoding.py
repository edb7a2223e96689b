"""Encoding of dialog states into learner inputs.

Two modes:
- "embedding" (default): each of the 7 categorical features becomes an index;
  the Q-network maps each index through its own learned scalar embedding, so
  the network input is a 7-dimensional vector.
- "onehot": concatenated one-hot blocks of sizes 17 + 8 + 56 + 5 + C + 2 + 110
  (C = catalog category count; 389 at the reference scale of 191 categories).

"No previous action/prompt" and "no target category" have no reserved slots in
the fixed cardinalities, so they alias onto indices that can never describe a
live turn: end-session (which only ever terminates an episode) for the action
and prompt features, and the first category id for the empty target. Every
encoded state therefore lights exactly one slot per block.
"""

from __future__ import annotations

import numpy as np

from skillscout.catalog import Catalog
from skillscout.dialog.prompts import PromptCatalog, PROMPT_CATALOG_SIZE
from skillscout.dialog.types import DialogState, TURN_DEPTH_CAP
from skillscout.intents import (
    ACTION_INDEX,
    INTENT_INDEX,
    METADATA_INDEX,
    N_ACTIONS,
    N_INTENTS,
    N_METADATA,
    AgentAction,
)

N_FEATURES = 7


class StateEncoder:
    def __init__(self, catalog: Catalog, prompts: PromptCatalog, mode: str = "embedding"):
        if mode not in ("embedding", "onehot"):
            raise ValueError(f"unknown encoder mode {mode!r}")
        self.mode = mode
        self.category_index = {cid: i for i, cid in enumerate(sorted(catalog.categories))}
        self.n_categories = max(1, len(self.category_index))
        self.prompt_index = dict(prompts.index)
        self.prompt_none_alias = prompts.none_alias_index()
        self.action_none_alias = ACTION_INDEX[AgentAction.END_SESSION]
        self.feature_sizes = (
            N_INTENTS,
            N_ACTIONS,
            PROMPT_CATALOG_SIZE,
            N_METADATA,
            self.n_categories,
            2,
            TURN_DEPTH_CAP,
        )

    @property
    def input_dim(self) -> int:
        return N_FEATURES if self.mode == "embedding" else sum(self.feature_sizes)

    def feature_indices(self, state: DialogState) -> np.ndarray:
        action_idx = (
            self.action_none_alias
            if state.prev_agent_action is None
            else ACTION_INDEX[state.prev_agent_action]
        )
        prompt_idx = (
            self.prompt_none_alias
            if state.prev_prompt is None
            else self.prompt_index[state.prev_prompt]
        )
        category_idx = (
            0 if state.target_category is None else self.category_index[state.target_category]
        )
        depth = min(max(state.turn_depth, 1), TURN_DEPTH_CAP)
        return np.array(
            [
                INTENT_INDEX[state.user_intent],
                action_idx,
                prompt_idx,
                METADATA_INDEX[state.prev_metadata],
                category_idx,
                1 if state.first_time_user else 0,
                depth - 1,
            ],
            dtype=np.int64,
        )

    def encode(self, state: DialogState) -> np.ndarray:
        indices = self.feature_indices(state)
        if self.mode == "embedding":
            return indices.astype(np.float64)
        vec = np.zeros(sum(self.feature_sizes), dtype=np.float64)
        offset = 0
        for idx, size in zip(indices, self.feature_sizes):
            vec[offset + int(idx)] = 1.0
            offset += size
        return vec


def encode_state(state: DialogState, encoder: StateEncoder) -> np.ndarray:
    return encoder.encode(state)
