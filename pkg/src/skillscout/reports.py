"""Report rendering: tab-delimited stats tables and matplotlib figures."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from skillscout.rl.training import TrainStats


def write_stats_tsv(stats: TrainStats, path: str | Path) -> None:
    """One row per evaluation point, consumable by external plotting."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("step\tsuccess_rate\tavg_dialog_length\tmean_return\n")
        for p in stats.records:
            fh.write(f"{p.step}\t{p.success_rate:.6f}\t{p.avg_dialog_length:.6f}\t{p.mean_return:.6f}\n")


def read_stats_tsv(path: str | Path) -> list[dict]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split("\t")
        for line in fh:
            values = line.strip().split("\t")
            rows.append({k: float(v) for k, v in zip(header, values)})
    return rows


def plot_learning_curve(stats_list: list[TrainStats], path: str | Path,
                        baseline: float | None = None) -> None:
    """Success rate against training steps, one line per seed."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for stats in stats_list:
        steps = [p.step for p in stats.records]
        rates = [p.success_rate for p in stats.records]
        ax.plot(steps, rates, marker="o", label=f"seed {stats.seed}")
    if baseline is not None:
        ax.axhline(baseline, color="gray", linestyle="--", label="rule-based")
    ax.set_xlabel("training steps")
    ax.set_ylabel("success rate")
    ax.set_title("DQN success rate during training")
    ax.legend(loc="lower right", fontsize=8)
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_policy_comparison(metrics_by_policy: dict[str, dict], path: str | Path) -> None:
    """Bar chart of success rate and dialog length per policy."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    names = list(metrics_by_policy)
    success = [metrics_by_policy[n]["success_rate"] for n in names]
    lengths = [metrics_by_policy[n]["avg_dialog_length"] for n in names]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8.0, 3.6))
    ax1.bar(names, success, color="tab:blue")
    ax1.set_ylabel("success rate")
    ax1.set_ylim(0, 1)
    ax2.bar(names, lengths, color="tab:orange")
    ax2.set_ylabel("avg dialog length (user turns)")
    for ax in (ax1, ax2):
        ax.tick_params(axis="x", rotation=15)
        ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_eval_tsv(metrics_by_policy: dict[str, dict], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("policy\tsuccess_rate\tavg_dialog_length\tmean_return\n")
        for name, m in metrics_by_policy.items():
            fh.write(
                f"{name}\t{m['success_rate']:.6f}\t{m['avg_dialog_length']:.6f}\t{m['mean_return']:.6f}\n"
            )
