"""End-to-end pipeline stages: bootstrap logs, train the simulator, train the
policy, evaluate. The CLI and the acceptance suite both drive these."""

from __future__ import annotations

from dataclasses import asdict
from pathlib import Path

import numpy as np

from skillscout.catalog import Catalog
from skillscout.dialog.env import DialogEnv
from skillscout.dialog.prompts import PromptCatalog, load_prompt_catalog
from skillscout.rl.network import QNetwork, load_checkpoint, save_checkpoint
from skillscout.rl.policies import (
    make_baseline_popularity_policy,
    make_rule_policy,
)
from skillscout.rl.training import TrainConfig, TrainStats, evaluate, make_greedy_policy, train
from skillscout.dialog.encoding import StateEncoder
from skillscout.rollout import run_episode
from skillscout.service.logs import DialogLogWriter
from skillscout.usersim.behavioral import BehavioralUser
from skillscout.usersim.dataset import extract_sequences
from skillscout.usersim.model import (
    IntentModel,
    IntentTrainConfig,
    save_intent_model,
    train_intent_model,
)
from skillscout.usersim.profile import sample_profile
from skillscout.usersim.simulated import IntentModelUser
from skillscout.usersim.utterances import UtteranceBank, load_utterance_bank


def bootstrap_logs(
    catalog: Catalog,
    episodes: int,
    seed: int,
    out_path: str | Path,
    prompts: PromptCatalog | None = None,
    bank: UtteranceBank | None = None,
    first_time_share: float = 0.6,
) -> int:
    """Rule policy against the scripted behavioral user; one JSONL per turn."""
    prompts = prompts or load_prompt_catalog()
    bank = bank or load_utterance_bank()
    root = np.random.default_rng(seed)
    env_rng, user_rng, profile_rng, policy_rng = root.spawn(4)
    env = DialogEnv(catalog, prompts, env_rng)
    user = BehavioralUser(catalog, bank, user_rng)
    policy = make_rule_policy()
    written = 0
    with DialogLogWriter(out_path) as log:
        for i in range(episodes):
            profile = sample_profile(catalog, profile_rng, first_time_share)
            result = run_episode(env, policy, user, profile, policy_rng)
            log.append_episode(f"boot-{seed}-{i:07d}", result.records, profile)
            written += 1
    return written


def train_simulator(
    episodes,
    hp: IntentTrainConfig | None = None,
    out_path: str | Path | None = None,
    prompts: PromptCatalog | None = None,
) -> tuple[IntentModel, float]:
    """Extract intent sequences from episode logs and fit the intent model."""
    prompts = prompts or load_prompt_catalog()
    dataset = extract_sequences(episodes)
    model, ppl = train_intent_model(dataset, hp, prompt_ids=[p.prompt_id for p in prompts.prompts])
    if out_path:
        save_intent_model(model, out_path)
    return model, ppl


def make_factories(catalog: Catalog, prompts: PromptCatalog, bank: UtteranceBank,
                   sim_model: IntentModel):
    def env_factory(rng: np.random.Generator) -> DialogEnv:
        return DialogEnv(catalog, prompts, rng)

    def user_factory(rng: np.random.Generator) -> IntentModelUser:
        return IntentModelUser(sim_model, catalog, bank, rng)

    return env_factory, user_factory


def train_policy(
    catalog: Catalog,
    sim_model: IntentModel,
    cfg: TrainConfig,
    prompts: PromptCatalog | None = None,
    bank: UtteranceBank | None = None,
    checkpoint_path: str | Path | None = None,
) -> tuple[QNetwork, TrainStats]:
    prompts = prompts or load_prompt_catalog()
    bank = bank or load_utterance_bank()
    env_factory, user_factory = make_factories(catalog, prompts, bank, sim_model)
    net, stats = train(env_factory, user_factory, cfg)
    if checkpoint_path:
        save_checkpoint(
            net, checkpoint_path,
            extra={"encoder_mode": cfg.encoder_mode, "train_config": asdict(cfg)},
        )
    return net, stats


def evaluation_policy(kind: str, catalog: Catalog, prompts: PromptCatalog,
                      checkpoint: str | Path | QNetwork | None = None):
    if kind == "rule":
        return make_rule_policy()
    if kind == "baseline-popularity":
        return make_baseline_popularity_policy()
    if kind == "rl":
        if checkpoint is None:
            raise ValueError("rl evaluation needs a checkpoint")
        net = checkpoint if isinstance(checkpoint, QNetwork) else load_checkpoint(checkpoint)
        encoder = StateEncoder(catalog, prompts, net.mode)
        return make_greedy_policy(net, encoder)
    raise ValueError(f"unknown policy kind {kind!r}")


def evaluate_policy(
    kind: str,
    catalog: Catalog,
    sim_model: IntentModel,
    episodes: int,
    seed: int,
    prompts: PromptCatalog | None = None,
    bank: UtteranceBank | None = None,
    checkpoint: str | Path | QNetwork | None = None,
) -> dict:
    prompts = prompts or load_prompt_catalog()
    bank = bank or load_utterance_bank()
    env_factory, user_factory = make_factories(catalog, prompts, bank, sim_model)
    policy = evaluation_policy(kind, catalog, prompts, checkpoint)
    return evaluate(policy, env_factory, user_factory, episodes, seed)
