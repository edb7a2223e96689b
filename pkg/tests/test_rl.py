import collections

import numpy as np
import pytest

from skillscout.dialog.encoding import StateEncoder
from skillscout.intents import ACTION_ORDER, AgentAction, N_ACTIONS
from skillscout.pipeline import make_factories
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
    TrainConfig,
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
from skillscout.usersim.model import IntentModel


REFERENCE_SIZES = (17, 8, 56, 5, 191, 2, 110)


def random_state_vec(rng):
    """A valid embedding-mode input: one index per feature."""
    return np.array([float(rng.integers(0, s)) for s in REFERENCE_SIZES])


def make_transition(rng, done=False, reward=0.0, mask=None):
    if mask is None:
        mask = np.ones(N_ACTIONS, dtype=bool)
    return Transition(
        state_vec=random_state_vec(rng),
        action=int(rng.integers(0, N_ACTIONS)),
        reward=reward,
        next_state_vec=random_state_vec(rng),
        next_mask=mask,
        done=done,
    )


# -- network -----------------------------------------------------------------

def test_init_network_deterministic():
    a = init_network(7, seed=3)
    b = init_network(7, seed=3)
    for k in a.params:
        assert np.array_equal(a.params[k], b.params[k])


def test_init_network_finite_on_zero_input():
    net = init_network(7, seed=5)
    q = forward(net, np.zeros(7), "eval")
    assert q.shape == (len(ACTION_ORDER),)
    assert np.all(np.isfinite(q))


def test_init_network_onehot_shape():
    net = init_network(389, seed=3)
    assert net.params["W0"].shape == (389, 128)
    assert net.params["W2"].shape == (128, 8)


def test_init_network_rejects_other_dims():
    with pytest.raises(ValueError, match="input_dim"):
        init_network(42, seed=0)


def test_forward_eval_deterministic_train_not():
    net = init_network(7, seed=1)
    x = np.array([3.0, 2.0, 10.0, 1.0, 0.0, 1.0, 4.0])
    a = forward(net, x, "eval")
    b = forward(net, x, "eval")
    assert np.array_equal(a, b)
    rng = np.random.default_rng(0)
    t1 = forward(net, x, "train", rng)
    t2 = forward(net, x, "train", rng)
    assert not np.array_equal(t1, t2)


def test_forward_dimension_mismatch():
    net = init_network(7, seed=1)
    with pytest.raises(ValueError, match="width"):
        forward(net, np.zeros(9), "eval")


def test_sync_target_equalizes():
    net = init_network(7, seed=1)
    target = init_network(7, seed=2)
    sync_target(net, target)
    x = np.array([1.0, 2.0, 3.0, 4.0, 5.0, 1.0, 9.0])
    assert np.array_equal(forward(net, x, "eval"), forward(target, x, "eval"))


def test_sync_target_rejects_mismatch():
    net = init_network(7, seed=1)
    other = init_network(389, seed=1)
    with pytest.raises(ValueError, match="mismatch"):
        sync_target(net, other)


def test_checkpoint_roundtrip(tmp_path):
    net = init_network(7, seed=9)
    save_checkpoint(net, tmp_path / "p.json")
    loaded = load_checkpoint(tmp_path / "p.json")
    x = np.array([0.0, 1.0, 2.0, 3.0, 4.0, 1.0, 7.0])
    assert np.allclose(forward(net, x, "eval"), forward(loaded, x, "eval"))


# -- masked argmax / epsilon / action selection -------------------------------

def test_masked_argmax_examples():
    q = np.array([5.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    assert masked_argmax(q, np.ones(8, dtype=bool)) == 0
    q = np.array([9.0, 2.0, 3.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    mask = np.ones(8, dtype=bool)
    mask[0] = False
    assert masked_argmax(q, mask) == 2


def test_masked_argmax_tie_breaks_low_index():
    q = np.array([1.0, 3.0, 3.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    assert masked_argmax(q, np.ones(8, dtype=bool)) == 1


def test_masked_argmax_brute_force_oracle():
    rng = np.random.default_rng(17)
    for _ in range(10_000):
        q = rng.normal(size=8)
        mask = rng.random(8) < 0.5
        if not mask.any():
            mask[int(rng.integers(0, 8))] = True
        got = masked_argmax(q, mask)
        best = None
        for i in range(8):
            if mask[i] and (best is None or q[i] > q[best]):
                best = i
        assert got == best
        assert mask[got]


def test_masked_argmax_all_false():
    with pytest.raises(ValueError, match="no valid action"):
        masked_argmax(np.zeros(8), np.zeros(8, dtype=bool))


def test_epsilon_schedule_exact():
    cfg = TrainConfig()
    assert epsilon_at(0, cfg) == 1.0
    assert epsilon_at(50_000, cfg) == 0.55
    assert epsilon_at(100_000, cfg) == 0.1
    assert epsilon_at(150_000, cfg) == 0.1


def test_epsilon_non_increasing():
    cfg = TrainConfig()
    values = [epsilon_at(t, cfg) for t in range(0, 160_000, 1_000)]
    assert all(a >= b for a, b in zip(values, values[1:]))
    assert all(0.1 <= v <= 1.0 for v in values)


def test_desk_scale_keeps_schedule_shape():
    cfg = TrainConfig.desk_scale()
    assert cfg.total_steps == 30_000
    assert cfg.eval_episodes == 500
    assert cfg.epsilon_decay_steps == 20_000
    assert cfg.target_update_interval == 2_600
    assert cfg.learning_rate == 1e-5
    assert cfg.gamma == 0.9


def test_select_action_greedy_matches_argmax():
    net = init_network(7, seed=21)
    rng = np.random.default_rng(3)
    for _ in range(50):
        x = random_state_vec(rng)
        mask = rng.random(8) < 0.6
        mask[6] = True
        a = select_action(net, x, mask, epsilon=0.0, rng=rng)
        assert a == masked_argmax(forward(net, x, "eval"), mask)


def test_select_action_uniform_when_exploring():
    net = init_network(7, seed=22)
    rng = np.random.default_rng(4)
    mask = np.zeros(8, dtype=bool)
    mask[2] = mask[5] = True
    counts = collections.Counter(
        select_action(net, np.zeros(7), mask, epsilon=1.0, rng=rng) for _ in range(10_000)
    )
    assert counts[2] / 10_000 == pytest.approx(0.5, abs=0.02)
    assert counts[5] / 10_000 == pytest.approx(0.5, abs=0.02)


def test_select_action_respects_mask():
    net = init_network(7, seed=23)
    rng = np.random.default_rng(5)
    for _ in range(10_000):
        mask = rng.random(8) < 0.4
        if not mask.any():
            mask[int(rng.integers(0, 8))] = True
        eps = float(rng.random())
        a = select_action(net, random_state_vec(rng), mask, eps, rng)
        assert mask[a]


# -- replay buffer -------------------------------------------------------------

def test_buffer_push_and_size(rng):
    buf = ReplayBuffer()
    assert len(buf) == 0
    buf.push(make_transition(rng))
    assert len(buf) == 1


def test_buffer_capacity_evicts_oldest(rng):
    buf = ReplayBuffer()
    first = make_transition(rng)
    buf.push(first)
    for _ in range(REPLAY_CAPACITY):
        buf.push(make_transition(rng))
    assert len(buf) == REPLAY_CAPACITY
    assert all(t is not first for t in buf.contents())


def test_buffer_fifo_matches_deque_oracle(rng):
    import collections as c

    buf = ReplayBuffer()
    oracle = c.deque(maxlen=REPLAY_CAPACITY)
    for _ in range(20_000):
        t = make_transition(rng)
        buf.push(t)
        oracle.append(t)
    assert buf.contents() == list(oracle)


def test_buffer_sample_single(rng):
    buf = ReplayBuffer()
    t = make_transition(rng)
    buf.push(t)
    assert buf.sample(1, rng) == [t]


def test_buffer_sample_uniform(rng):
    buf = ReplayBuffer()
    a, b = make_transition(rng), make_transition(rng)
    buf.push(a)
    buf.push(b)
    hits = sum(1 for _ in range(100_000) if buf.sample(1, rng)[0] is a)
    assert hits / 100_000 == pytest.approx(0.5, abs=0.01)


def test_buffer_sample_too_large(rng):
    buf = ReplayBuffer()
    buf.push(make_transition(rng))
    with pytest.raises(ValueError, match="exceeds"):
        buf.sample(2, rng)


# -- targets and updates -------------------------------------------------------

def test_td_targets_terminal():
    net = init_network(7, seed=31)
    rng = np.random.default_rng(6)
    batch = [make_transition(rng, done=True, reward=1.0)]
    assert td_targets(batch, net, gamma=0.9) == pytest.approx([1.0])


def test_td_targets_bootstrap_formula():
    net = init_network(7, seed=32)
    for k in net.params:
        net.params[k] = np.zeros_like(net.params[k])
    net.params["b2"] = np.full(8, 2.0)  # every Q value is 2.0
    rng = np.random.default_rng(7)
    batch = [make_transition(rng, done=False, reward=0.0)]
    assert td_targets(batch, net, gamma=0.9) == pytest.approx([1.8])


def test_td_targets_matches_scalar_oracle():
    net = init_network(7, seed=33)
    rng = np.random.default_rng(8)
    batch = [
        make_transition(rng, done=bool(rng.random() < 0.3),
                        reward=float(rng.normal()),
                        mask=(rng.random(8) < 0.7) | np.eye(8, dtype=bool)[0])
        for _ in range(32)
    ]
    got = td_targets(batch, net, gamma=0.9)
    for i, t in enumerate(batch):
        if t.done:
            expected = t.reward
        else:
            q = forward(net, t.next_state_vec, "eval")
            expected = t.reward + 0.9 * max(q[j] for j in range(8) if t.next_mask[j])
        assert got[i] == pytest.approx(expected)


def test_td_targets_terminal_never_touches_network(monkeypatch):
    net = init_network(7, seed=34)
    rng = np.random.default_rng(9)
    batch = [make_transition(rng, done=True, reward=-1.0) for _ in range(8)]
    calls = {"n": 0}

    def counting_forward(x, train=False, rng=None):
        calls["n"] += 1
        raise AssertionError("target network consulted for terminal batch")

    monkeypatch.setattr(net.mlp, "forward", counting_forward)
    td_targets(batch, net, gamma=0.9)
    assert calls["n"] == 0


def test_td_targets_all_false_mask_rejected():
    net = init_network(7, seed=35)
    rng = np.random.default_rng(10)
    batch = [make_transition(rng, done=False, mask=np.zeros(8, dtype=bool))]
    with pytest.raises(ValueError, match="all-false"):
        td_targets(batch, net, gamma=0.9)


def test_train_step_zero_residual_keeps_params():
    net = init_network(7, seed=36)
    net.mlp.dropout = 0.0
    rng = np.random.default_rng(11)
    batch = [make_transition(rng) for _ in range(4)]
    x = np.stack([t.state_vec for t in batch])
    actions = np.array([t.action for t in batch])
    preds = net.mlp.forward(x)[0][np.arange(4), actions]
    cfg = TrainConfig()
    opt = make_optimizer(net, cfg, rng)
    before = {k: v.copy() for k, v in net.params.items()}
    loss = train_step(net, batch, preds, opt)
    assert loss == pytest.approx(0.0)
    for k in before:
        assert np.allclose(net.params[k], before[k])


# -- training loop ---------------------------------------------------------

@pytest.fixture(scope="module")
def tiny_world(desk_catalog, prompts, bank):
    model = IntentModel([p.prompt_id for p in prompts.prompts], hidden_width=8, seed=0)
    return make_factories(desk_catalog, prompts, bank, model)


def test_train_zero_steps(tiny_world):
    env_factory, user_factory = tiny_world
    cfg = TrainConfig(total_steps=0, eval_episodes=1, batch_size=4, seed=1)
    net, stats = train(env_factory, user_factory, cfg)
    assert stats.records == []
    assert isinstance(net, QNetwork)


def test_train_deterministic(tiny_world):
    env_factory, user_factory = tiny_world
    cfg = TrainConfig(total_steps=400, eval_interval=200, eval_episodes=20,
                      batch_size=8, seed=7, target_update_interval=100,
                      epsilon_decay_steps=300, encoder_mode="embedding")
    net1, stats1 = train(env_factory, user_factory, cfg)
    net2, stats2 = train(env_factory, user_factory, cfg)
    assert stats1 == stats2
    for k in net1.params:
        assert np.array_equal(net1.params[k], net2.params[k])
    assert [p.step for p in stats1.records] == [200, 400]


def test_evaluate_always_end_policy(tiny_world):
    env_factory, user_factory = tiny_world

    def give_up(context, env, rng):
        return AgentAction.END_SESSION

    metrics = evaluate(give_up, env_factory, user_factory, episodes=50, seed=3)
    assert metrics["success_rate"] == 0.0
    assert metrics["mean_return"] == -1.0


def test_evaluate_forced_acceptance(desk_catalog, prompts, bank):
    """A user that always accepts plus a skill-offering policy: success 1.0."""

    class EagerUser:
        def start_utterance(self):
            return "play a game"

        def respond(self, context, move):
            from skillscout.intents import UserIntent

            return UserIntent.YES, None, "yes"

    def pushy(context, env, rng):
        from skillscout.dialog.env import action_mask
        from skillscout.intents import ACTION_INDEX

        mask = action_mask(context, env.catalog)
        if mask[ACTION_INDEX[AgentAction.LAUNCH_SKILL]]:
            return AgentAction.LAUNCH_SKILL
        return AgentAction.OFFER_ONE_SKILL

    metrics = evaluate(
        pushy,
        lambda rng: __import__("skillscout.dialog.env", fromlist=["DialogEnv"]).DialogEnv(
            desk_catalog, prompts, rng
        ),
        lambda rng: EagerUser(),
        episodes=30,
        seed=5,
    )
    assert metrics["success_rate"] == 1.0


def test_greedy_policy_respects_mask(desk_catalog, prompts, tiny_world):
    env_factory, user_factory = tiny_world
    net = QNetwork.from_encoder(StateEncoder(desk_catalog, prompts, "embedding"), seed=0)
    policy = make_greedy_policy(net, StateEncoder(desk_catalog, prompts, "embedding"))
    rng = np.random.default_rng(0)
    env = env_factory(rng)
    from skillscout.usersim.profile import UserProfile

    context = env.reset(UserProfile(first_time=True))
    action = policy(context, env, rng)
    assert action is not AgentAction.LAUNCH_SKILL  # masked at the start
