from skillscout.rl.buffer import REPLAY_CAPACITY, ReplayBuffer, Transition
from skillscout.rl.network import (
    QNetwork,
    forward,
    init_network,
    load_checkpoint,
    save_checkpoint,
    sync_target,
)
from skillscout.rl.training import (
    EvalPoint,
    OptimizerState,
    TrainConfig,
    TrainingDiverged,
    TrainStats,
    epsilon_at,
    evaluate,
    make_greedy_policy,
    make_optimizer,
    masked_argmax,
    select_action,
    td_targets,
    train,
    train_step,
)
from skillscout.rl.policies import (
    make_baseline_popularity_policy,
    make_random_policy,
    make_rule_policy,
)

__all__ = [
    "EvalPoint",
    "OptimizerState",
    "QNetwork",
    "REPLAY_CAPACITY",
    "ReplayBuffer",
    "TrainConfig",
    "TrainStats",
    "TrainingDiverged",
    "Transition",
    "epsilon_at",
    "evaluate",
    "forward",
    "init_network",
    "load_checkpoint",
    "make_baseline_popularity_policy",
    "make_greedy_policy",
    "make_optimizer",
    "make_random_policy",
    "make_rule_policy",
    "masked_argmax",
    "save_checkpoint",
    "select_action",
    "sync_target",
    "td_targets",
    "train",
    "train_step",
]
