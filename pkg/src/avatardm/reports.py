"""Figure rendering for experiment output directories.

Every chart is written next to the delimited metrics files so a run
directory is self-contained: metrics, traces, and their visual summaries.
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .sim import ExperimentResult, PolicyComparison, TrainingTrace

FIGSIZE = (7.0, 4.0)
DPI = 120


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, dpi=DPI)
    plt.close(fig)
    return path


def turn_traces_csv(result: ExperimentResult) -> str:
    """Per-turn reward/emotion trace rows for plotting and inspection."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["profile", "episode", "turn", "reward", "emotion"])
    for record in result.records:
        for t, (reward, emotion) in enumerate(zip(record.rewards, record.emotions), start=1):
            writer.writerow([record.profile, record.episode, t, repr(reward), emotion])
    return buf.getvalue()


def metrics_chart(result: ExperimentResult, out_dir: Path) -> Path:
    """Accuracy, dialogue length, and agreeable-affect share per profile."""
    rows = result.rows()
    names = [m.profile for m in rows]
    fig, axes = plt.subplots(1, 3, figsize=(10.0, 3.6))
    axes[0].bar(names, [m.accuracy_pct for m in rows], color="#4a7fb5")
    axes[0].set_title("accuracy (%)")
    axes[0].set_ylim(0, 105)
    axes[1].bar(names, [m.avg_dialogue_length for m in rows], color="#7a4ab5")
    axes[1].set_title("avg dialogue length (turns)")
    axes[2].bar(names, [m.neutral_positive_pct for m in rows], color="#4ab57f")
    axes[2].set_title("neutral/positive emotions (%)")
    for ax in axes:
        ax.tick_params(axis="x", rotation=30)
    return _save(fig, out_dir / "metrics.png")


def rewards_chart(result: ExperimentResult, out_dir: Path, episodes_per_profile: int = 1) -> Path:
    """Per-turn reward traces for the first episode(s) of each profile."""
    fig, ax = plt.subplots(figsize=FIGSIZE)
    seen: dict[str, int] = {}
    for record in result.records:
        if seen.get(record.profile, 0) >= episodes_per_profile:
            continue
        seen[record.profile] = seen.get(record.profile, 0) + 1
        ax.plot(
            range(1, len(record.rewards) + 1),
            record.rewards,
            marker="o",
            markersize=3,
            label=record.profile,
        )
    ax.set_xlabel("turn")
    ax.set_ylabel("reward")
    ax.set_title("per-turn rewards")
    ax.legend()
    return _save(fig, out_dir / "rewards.png")


def qvalues_chart(trace: TrainingTrace, out_dir: Path) -> Path:
    """Mean absolute Q value and exploration rate over training episodes."""
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.plot(trace.mean_abs_q, color="#4a7fb5", label="mean |Q|")
    ax.set_xlabel("training episode")
    ax.set_ylabel("mean |Q|")
    ax2 = ax.twinx()
    ax2.plot(trace.epsilons, color="#b5744a", alpha=0.7, label="epsilon")
    ax2.set_ylabel("epsilon")
    ax.set_title("Q-table growth during training")
    return _save(fig, out_dir / "qvalues.png")


def policy_chart(rows: list[PolicyComparison], out_dir: Path) -> Path:
    """Mean episode return per profile, before vs after learning."""
    fig, ax = plt.subplots(figsize=FIGSIZE)
    names = [r.profile for r in rows]
    x = range(len(rows))
    width = 0.38
    ax.bar([i - width / 2 for i in x], [r.before_return for r in rows], width, label="before")
    ax.bar([i + width / 2 for i in x], [r.after_return for r in rows], width, label="after")
    ax.set_xticks(list(x))
    ax.set_xticklabels(names, rotation=30)
    ax.set_ylabel("mean episode return")
    ax.set_title("policy comparison")
    ax.legend()
    return _save(fig, out_dir / "policy.png")


def write_experiment_reports(
    result: ExperimentResult,
    out_dir: str | Path,
    training_trace: TrainingTrace | None = None,
    policy_rows: list[PolicyComparison] | None = None,
) -> list[Path]:
    """Write metrics.csv/json, turn_traces.csv, and the figure files."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    (out / "metrics.csv").write_text(result.to_csv(), encoding="utf-8")
    written.append(out / "metrics.csv")
    (out / "metrics.json").write_text(result.to_json(), encoding="utf-8")
    written.append(out / "metrics.json")
    (out / "turn_traces.csv").write_text(turn_traces_csv(result), encoding="utf-8")
    written.append(out / "turn_traces.csv")
    written.append(metrics_chart(result, out))
    written.append(rewards_chart(result, out))
    if training_trace is not None:
        written.append(qvalues_chart(training_trace, out))
    if policy_rows is not None:
        from .sim import comparison_csv

        (out / "policy_comparison.csv").write_text(comparison_csv(policy_rows), encoding="utf-8")
        written.append(out / "policy_comparison.csv")
        written.append(policy_chart(policy_rows, out))
    return written
