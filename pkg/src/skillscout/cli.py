"""Command-line surface for the full pipeline.

Typical flow:
    skillscout generate-catalog --out catalog.json
    skillscout bootstrap-logs --catalog catalog.json --episodes 20000 --out logs.jsonl
    skillscout train-sim --logs logs.jsonl --out sim.json
    skillscout train-rl --catalog catalog.json --sim sim.json --out-dir run/
    skillscout evaluate --catalog catalog.json --sim sim.json --policy rl \
        --checkpoint run/policy.json --episodes 500
    skillscout serve --catalog catalog.json --checkpoint run/policy.json
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from skillscout.catalog import generate_synthetic_catalog, load_catalog, write_catalog
from skillscout.rl.training import TrainConfig
from skillscout.service.config import CONFIG_ENV_VAR, ServiceConfig, load_config
from skillscout.usersim.model import IntentTrainConfig, load_intent_model

_config_option = click.option(
    "--config", "config_path", type=click.Path(exists=True), default=None,
    help=f"Service config file (falls back to ${CONFIG_ENV_VAR}).",
)
_seed_option = click.option("--seed", type=int, default=0, show_default=True)


def _maybe_config(config_path: str | None) -> ServiceConfig | None:
    import os

    if config_path or os.environ.get(CONFIG_ENV_VAR):
        return load_config(config_path)
    return None


def _require(value, flag: str, cfg_value=None):
    resolved = value or cfg_value
    if not resolved:
        raise click.UsageError(f"{flag} is required (flag or config)")
    return resolved


@click.group()
def main() -> None:
    """Conversational skill discovery: catalogs, simulators, policies, serving."""


@main.command("generate-catalog")
@_seed_option
@_config_option
@click.option("--skills", "n_skills", type=int, default=1903, show_default=True)
@click.option("--roots", "n_roots", type=int, default=48, show_default=True)
@click.option("--categories", "n_categories", type=int, default=191, show_default=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
def cmd_generate_catalog(seed, config_path, n_skills, n_roots, n_categories, out_path):
    """Write a seeded synthetic catalog."""
    catalog = generate_synthetic_catalog(seed, n_skills, n_roots, n_categories)
    write_catalog(catalog, out_path)
    click.echo(f"wrote catalog: {catalog.skill_count} skills, "
               f"{catalog.category_count} categories -> {out_path}")


@main.command("bootstrap-logs")
@_seed_option
@_config_option
@click.option("--catalog", "catalog_path", type=click.Path(exists=True), default=None)
@click.option("--episodes", type=int, default=20_000, show_default=True)
@click.option("--first-time-share", type=float, default=0.6, show_default=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
def cmd_bootstrap_logs(seed, config_path, catalog_path, episodes, first_time_share, out_path):
    """Generate dialog logs: rule policy vs the scripted behavioral user."""
    from skillscout.pipeline import bootstrap_logs

    cfg = _maybe_config(config_path)
    catalog = load_catalog(_require(catalog_path, "--catalog", cfg and cfg.catalog_path))
    n = bootstrap_logs(catalog, episodes, seed, out_path,
                       first_time_share=first_time_share)
    click.echo(f"wrote {n} episodes -> {out_path}")


@main.command("train-sim")
@_seed_option
@_config_option
@click.option("--logs", "logs_path", type=click.Path(exists=True), required=True)
@click.option("--hidden", type=int, default=64, show_default=True)
@click.option("--lr", type=float, default=0.005, show_default=True)
@click.option("--epochs", type=int, default=30, show_default=True)
@click.option("--out", "out_path", type=click.Path(), required=True)
def cmd_train_sim(seed, config_path, logs_path, hidden, lr, epochs, out_path):
    """Train the intent model on JSONL dialog logs."""
    from skillscout.pipeline import train_simulator
    from skillscout.service.logs import read_dialog_logs

    episodes = read_dialog_logs(logs_path)
    hp = IntentTrainConfig(hidden_width=hidden, learning_rate=lr, epochs=epochs, seed=seed)
    _, ppl = train_simulator(episodes, hp, out_path)
    click.echo(f"trained intent model on {len(episodes)} episodes, "
               f"held-out perplexity {ppl:.4f} -> {out_path}")


@main.command("train-rl")
@_seed_option
@_config_option
@click.option("--catalog", "catalog_path", type=click.Path(exists=True), default=None)
@click.option("--sim", "sim_path", type=click.Path(exists=True), default=None)
@click.option("--steps", type=int, default=30_000, show_default=True,
              help="Training steps (agent decisions).")
@click.option("--eval-episodes", type=int, default=500, show_default=True)
@click.option("--encoder", type=click.Choice(["embedding", "onehot"]), default="onehot",
              show_default=True)
@click.option("--out-dir", type=click.Path(), required=True)
def cmd_train_rl(seed, config_path, catalog_path, sim_path, steps, eval_episodes, encoder, out_dir):
    """Train the DQN policy against the intent-model user; writes the policy
    checkpoint, a stats table, and the learning-curve figure."""
    from skillscout.pipeline import train_policy
    from skillscout.reports import plot_learning_curve, write_stats_tsv

    cfg = _maybe_config(config_path)
    catalog = load_catalog(_require(catalog_path, "--catalog", cfg and cfg.catalog_path))
    sim = load_intent_model(_require(sim_path, "--sim", cfg and cfg.sim_checkpoint_path))
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tc = TrainConfig.scaled(steps, eval_episodes=eval_episodes, seed=seed,
                            encoder_mode=encoder)
    net, stats = train_policy(catalog, sim, tc, checkpoint_path=out / "policy.json")
    write_stats_tsv(stats, out / "train_stats.tsv")
    plot_learning_curve([stats], out / "learning_curve.png")
    last = stats.records[-1] if stats.records else None
    summary = f"final eval success {last.success_rate:.3f}" if last else "no eval points"
    click.echo(f"trained {steps} steps (seed {seed}); {summary}; artifacts in {out}")


@main.command("evaluate")
@_seed_option
@_config_option
@click.option("--catalog", "catalog_path", type=click.Path(exists=True), default=None)
@click.option("--sim", "sim_path", type=click.Path(exists=True), default=None)
@click.option("--policy", "policy_kind",
              type=click.Choice(["rule", "rl", "baseline-popularity"]), default="rule",
              show_default=True)
@click.option("--checkpoint", "checkpoint_path", type=click.Path(exists=True), default=None)
@click.option("--episodes", type=int, default=500, show_default=True)
@click.option("--out-dir", type=click.Path(), default=None,
              help="Also write evaluation.tsv and a comparison figure here.")
def cmd_evaluate(seed, config_path, catalog_path, sim_path, policy_kind, checkpoint_path,
                 episodes, out_dir):
    """Evaluate a policy over seeded episodes against the intent-model user."""
    from skillscout.pipeline import evaluate_policy
    from skillscout.reports import plot_policy_comparison, write_eval_tsv

    cfg = _maybe_config(config_path)
    catalog = load_catalog(_require(catalog_path, "--catalog", cfg and cfg.catalog_path))
    sim = load_intent_model(_require(sim_path, "--sim", cfg and cfg.sim_checkpoint_path))
    checkpoint = checkpoint_path or (cfg.checkpoint_path if cfg else None)
    metrics = evaluate_policy(policy_kind, catalog, sim, episodes, seed, checkpoint=checkpoint)
    click.echo(f"policy={policy_kind} episodes={episodes} seed={seed}")
    click.echo(f"success_rate={metrics['success_rate']:.4f}")
    click.echo(f"avg_dialog_length={metrics['avg_dialog_length']:.4f}")
    click.echo(f"mean_return={metrics['mean_return']:.4f}")
    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_eval_tsv({policy_kind: metrics}, out / "evaluation.tsv")
        plot_policy_comparison({policy_kind: metrics}, out / "evaluation.png")
        click.echo(f"wrote report -> {out}")


@main.command("serve")
@_seed_option
@_config_option
@click.option("--catalog", "catalog_path", type=click.Path(exists=True), default=None)
@click.option("--checkpoint", "checkpoint_path", type=click.Path(exists=True), default=None)
@click.option("--log", "log_path", type=click.Path(), default=None)
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@click.option("--ui", "ui_dir", type=click.Path(exists=True), default=None,
              help="Static directory to serve the chat client from.")
def cmd_serve(seed, config_path, catalog_path, checkpoint_path, log_path, host, port, ui_dir):
    """Start the session API (and optionally the chat client)."""
    from skillscout.service.http import serve_forever
    from skillscout.service.sessions import SessionService

    cfg = _maybe_config(config_path) or ServiceConfig(catalog_path=catalog_path or "")
    if catalog_path:
        cfg.catalog_path = catalog_path
    if checkpoint_path:
        cfg.checkpoint_path = checkpoint_path
    if log_path:
        cfg.log_path = log_path
    if host:
        cfg.listen_host = host
    if port is not None:
        cfg.listen_port = port
    cfg.seed = seed
    cfg.validate_files()
    service = SessionService(cfg)
    serve_forever(service, cfg.listen_host, cfg.listen_port, ui_dir)


@main.command("chat")
@_seed_option
@_config_option
@click.option("--catalog", "catalog_path", type=click.Path(exists=True), default=None)
@click.option("--policy", "policy_kind",
              type=click.Choice(["rule", "rl", "baseline-popularity"]), default="rule",
              show_default=True)
@click.option("--checkpoint", "checkpoint_path", type=click.Path(exists=True), default=None)
@click.option("--returning", is_flag=True, help="Chat as a returning user.")
def cmd_chat(seed, config_path, catalog_path, policy_kind, checkpoint_path, returning):
    """Terminal chat loop for debugging a policy."""
    from skillscout.service.sessions import SessionService
    from skillscout.usersim.profile import UserProfile

    cfg = _maybe_config(config_path) or ServiceConfig(catalog_path=catalog_path or "")
    if catalog_path:
        cfg.catalog_path = catalog_path
    if checkpoint_path:
        cfg.checkpoint_path = checkpoint_path
    cfg.seed = seed
    cfg.validate_files()
    service = SessionService(cfg)
    profile = UserProfile(first_time=not returning)
    out = service.create_session(policy_kind, profile)
    sid = out["session_id"]
    click.echo(f"[agent] {out['move']['text']}")
    while not out.get("done"):
        try:
            text = click.prompt("[you]", prompt_suffix=" ")
        except (EOFError, click.Abort):
            click.echo("(chat aborted)")
            return
        out = service.post_utterance(sid, text)
        move = out.get("move")
        if move:
            click.echo(f"[agent] {move['text']}")
        if out.get("done"):
            outcome = out["status"]
            click.echo(f"(dialog {outcome}, reward {out['reward']:+.0f})")


if __name__ == "__main__":
    sys.exit(main())
