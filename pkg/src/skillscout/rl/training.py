"""DQN training: epsilon-greedy exploration over masked actions, uniform
replay, masked TD targets against a periodically synced target network, and
greedy evaluation at fixed step intervals."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from skillscout.dialog.encoding import StateEncoder
from skillscout.dialog.env import DialogEnv, action_mask
from skillscout.intents import ACTION_ORDER, N_ACTIONS
from skillscout.nnet import Adam, mse_on_selected
from skillscout.rl.buffer import ReplayBuffer, Transition
from skillscout.rl.network import QNetwork, forward, sync_target
from skillscout.rollout import run_episode
from skillscout.usersim.profile import sample_profile


class TrainingDiverged(RuntimeError):
    def __init__(self, step: int):
        super().__init__(f"non-finite loss at step {step}")
        self.step = step


@dataclass
class TrainConfig:
    gamma: float = 0.9
    learning_rate: float = 1e-5
    epsilon_start: float = 1.0
    epsilon_end: float = 0.1
    epsilon_decay_steps: int = 100_000
    total_steps: int = 150_000
    target_update_interval: int = 13_000
    eval_interval: int = 10_000
    eval_episodes: int = 3_000
    batch_size: int = 32
    seed: int = 0
    encoder_mode: str = "embedding"

    def __post_init__(self):
        if self.epsilon_end > self.epsilon_start:
            raise ValueError("epsilon_end must not exceed epsilon_start")
        for name in ("gamma", "learning_rate", "epsilon_decay_steps",
                     "target_update_interval", "eval_interval", "batch_size"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @classmethod
    def scaled(cls, total_steps: int, seed: int = 0, **overrides) -> "TrainConfig":
        """Shrink the run while keeping the schedule shape of the full-scale
        one: epsilon decays over the first two thirds of training and the
        target network syncs roughly eleven times, whatever the step budget.
        Full-scale values remain the dataclass defaults."""
        ratio = total_steps / cls.total_steps
        params = dict(
            total_steps=total_steps,
            epsilon_decay_steps=max(1, round(cls.epsilon_decay_steps * ratio)),
            target_update_interval=max(1, round(cls.target_update_interval * ratio)),
            eval_interval=min(cls.eval_interval, max(1, total_steps)),
            seed=seed,
        )
        params.update(overrides)
        return cls(**params)

    @classmethod
    def desk_scale(cls, seed: int = 0, **overrides) -> "TrainConfig":
        """Laptop-sized run: 30k steps, 500-episode evaluations, one-hot
        state encoding (it converges well inside the short step budget)."""
        overrides.setdefault("eval_episodes", 500)
        overrides.setdefault("encoder_mode", "onehot")
        return cls.scaled(30_000, seed=seed, **overrides)


@dataclass
class EvalPoint:
    step: int
    success_rate: float
    avg_dialog_length: float
    mean_return: float


@dataclass
class TrainStats:
    seed: int
    records: list[EvalPoint] = field(default_factory=list)
    final_loss: float | None = None


def epsilon_at(step: int, cfg: TrainConfig) -> float:
    """Linear decay from epsilon_start to epsilon_end over the decay window."""
    t = min(max(step, 0), cfg.epsilon_decay_steps)
    eps = cfg.epsilon_start - (cfg.epsilon_start - cfg.epsilon_end) * t / cfg.epsilon_decay_steps
    return max(cfg.epsilon_end, eps)


def masked_argmax(q: np.ndarray, mask: np.ndarray) -> int:
    """Index of the best valid action; ties break toward the lowest index."""
    if not mask.any():
        raise ValueError("mask has no valid action")
    banked = np.where(mask, q, -np.inf)
    return int(np.argmax(banked))


def select_action(
    net: QNetwork,
    state_vec: np.ndarray,
    mask: np.ndarray,
    epsilon: float,
    rng: np.random.Generator,
) -> int:
    """Epsilon-greedy over valid actions."""
    if not mask.any():
        raise ValueError("mask has no valid action")
    if rng.random() < epsilon:
        valid = np.flatnonzero(mask)
        return int(valid[rng.integers(0, len(valid))])
    return masked_argmax(forward(net, state_vec, "eval"), mask)


def td_targets(batch: list[Transition], target_net: QNetwork, gamma: float) -> np.ndarray:
    """y_i = r_i for terminal transitions, else r_i + gamma * max valid target-Q.

    Terminal rows never touch the target network.
    """
    if not batch:
        raise ValueError("empty batch")
    y = np.array([t.reward for t in batch], dtype=np.float64)
    open_rows = [i for i, t in enumerate(batch) if not t.done]
    if open_rows:
        nxt = np.stack([batch[i].next_state_vec for i in open_rows])
        q_next = forward(target_net, nxt, "eval")
        for j, i in enumerate(open_rows):
            mask = batch[i].next_mask
            if not mask.any():
                raise ValueError(f"non-terminal transition {i} has an all-false next mask")
            y[i] += gamma * float(np.max(np.where(mask, q_next[j], -np.inf)))
    return y


@dataclass
class OptimizerState:
    adam: Adam
    rng: np.random.Generator


def make_optimizer(net: QNetwork, cfg: TrainConfig, rng: np.random.Generator) -> OptimizerState:
    return OptimizerState(adam=Adam(net.params, lr=cfg.learning_rate), rng=rng)


def train_step(
    net: QNetwork,
    batch: list[Transition],
    targets: np.ndarray,
    opt: OptimizerState,
) -> float:
    """One squared-TD-error gradient update; only the taken action's output
    carries gradient per sample."""
    x = np.stack([t.state_vec for t in batch])
    actions = np.array([t.action for t in batch], dtype=np.int64)
    out, cache = net.mlp.forward(x, train=True, rng=opt.rng)
    loss, dout = mse_on_selected(out, actions, targets)
    if not np.isfinite(loss):
        raise ValueError("non-finite loss")
    grads = net.mlp.backward(cache, dout)
    opt.adam.step(net.params, grads)
    return loss


def make_greedy_policy(net: QNetwork, encoder: StateEncoder):
    def policy(context, env: DialogEnv, rng):
        mask = action_mask(context, env.catalog)
        q = forward(net, encoder.encode(context.state), "eval")
        return ACTION_ORDER[masked_argmax(q, mask)]

    return policy


def evaluate(
    policy,
    env_factory,
    user_factory,
    episodes: int,
    seed: int,
    first_time_share: float = 0.6,
) -> dict:
    """Greedy rollouts: success rate, mean user turns, mean return."""
    if episodes < 1:
        raise ValueError("episodes must be >= 1")
    root = np.random.default_rng(seed)
    env_rng, user_rng, profile_rng, policy_rng = root.spawn(4)
    env = env_factory(env_rng)
    user = user_factory(user_rng)
    launches = 0
    turns = 0
    total = 0.0
    for _ in range(episodes):
        profile = sample_profile(env.catalog, profile_rng, first_time_share)
        result = run_episode(env, policy, user, profile, policy_rng)
        launches += int(result.launched)
        turns += result.user_turns
        total += result.total_reward
    return {
        "success_rate": launches / episodes,
        "avg_dialog_length": turns / episodes,
        "mean_return": total / episodes,
    }


def train(env_factory, user_factory, cfg: TrainConfig) -> tuple[QNetwork, TrainStats]:
    """Run cfg.total_steps agent decisions of DQN training.

    env_factory(rng) -> DialogEnv; user_factory(rng) -> simulated user.
    Fully deterministic for a fixed cfg.seed.
    """
    root = np.random.default_rng(cfg.seed)
    env_rng, user_rng, profile_rng, agent_rng, opt_rng, init_rng = root.spawn(6)
    env = env_factory(env_rng)
    user = user_factory(user_rng)
    encoder = StateEncoder(env.catalog, env.prompts, cfg.encoder_mode)
    net = QNetwork.from_encoder(encoder, seed=int(init_rng.integers(0, 2**31 - 1)))
    target = QNetwork.from_encoder(encoder, seed=0)
    sync_target(net, target)
    buffer = ReplayBuffer()
    opt = make_optimizer(net, cfg, opt_rng)
    stats = TrainStats(seed=cfg.seed)

    def new_episode():
        profile = sample_profile(env.catalog, profile_rng)
        context = env.reset(profile)
        context.pending_utterance = user.start_utterance()
        return context

    context = new_episode()
    last_loss = None
    for step_i in range(cfg.total_steps):
        mask = env.mask()
        state_vec = encoder.encode(context.state)
        eps = epsilon_at(step_i, cfg)
        a = select_action(net, state_vec, mask, eps, agent_rng)
        result = env.step(ACTION_ORDER[a], user)
        next_vec = encoder.encode(result.next_state)
        next_mask = env.mask() if not result.done else np.ones(N_ACTIONS, dtype=bool)
        buffer.push(Transition(state_vec, a, result.reward, next_vec, next_mask, result.done))

        if len(buffer) >= cfg.batch_size:
            batch = buffer.sample(cfg.batch_size, agent_rng)
            targets = td_targets(batch, target, cfg.gamma)
            try:
                last_loss = train_step(net, batch, targets, opt)
            except ValueError as exc:
                raise TrainingDiverged(step_i) from exc

        done_step = step_i + 1
        if done_step % cfg.target_update_interval == 0:
            sync_target(net, target)
        if done_step % cfg.eval_interval == 0:
            # Common random numbers across eval points: curve differences then
            # reflect policy change rather than episode sampling noise.
            metrics = evaluate(
                make_greedy_policy(net, encoder),
                env_factory,
                user_factory,
                cfg.eval_episodes,
                seed=cfg.seed * 1_000_003 + 17,
            )
            stats.records.append(
                EvalPoint(
                    step=done_step,
                    success_rate=metrics["success_rate"],
                    avg_dialog_length=metrics["avg_dialog_length"],
                    mean_return=metrics["mean_return"],
                )
            )
        if result.done:
            context = new_episode()

    stats.final_loss = last_loss
    return net, stats
