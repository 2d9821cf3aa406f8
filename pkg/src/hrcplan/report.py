"""Figure rendering for runs and batch reports.

Scene figures mirror the planner's round panels: task markers (unsafe ones
red), agent markers, the chosen plan's dashed lookahead path, and a solid
arrow for the step actually executed. Batch figures summarize the optimality
gap distribution and the candidate-tree size per horizon policy.
"""

from __future__ import annotations

import os
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

from .model import Agent, Scenario
from .planner import RoundLog
from .sim import BatchReport

_HUMAN_COLOR = "#1f77b4"
_ROBOT_COLOR = "#2ca02c"


def _draw_scene(ax, scenario: Scenario, log: RoundLog, done: set[int]) -> None:
    for task in scenario.tasks:
        x, y = task.position
        if task.id in done:
            ax.plot(x, y, marker="x", color="0.6", markersize=8)
        else:
            color = "red" if task.unsafe_for_human else "0.2"
            face = color if task.unsafe_for_human else "white"
            ax.plot(x, y, marker="o", markeredgecolor=color, markerfacecolor=face,
                    markersize=9)
        ax.annotate(str(task.id), (x, y), textcoords="offset points",
                    xytext=(6, 6), fontsize=9)

    hx, hy = log.human_pos_before
    rx, ry = log.robot_pos_before
    ax.plot(hx, hy, marker="o", color=_HUMAN_COLOR, markersize=11, label="human")
    ax.plot(rx, ry, marker="s", color=_ROBOT_COLOR, markersize=11, label="robot")

    # dashed lookahead through the chosen plan, solid arrow for the first step
    path_x, path_y = [], []
    start = log.human_pos_before if log.executed.agent is Agent.HUMAN else log.robot_pos_before
    path_x.append(start[0])
    path_y.append(start[1])
    for s in log.best_plan.steps:
        px, py = scenario.task(s.task).position
        path_x.append(px)
        path_y.append(py)
    ax.plot(path_x, path_y, linestyle="--", color="0.5", linewidth=1)
    first = scenario.task(log.executed.task).position
    ax.annotate(
        "", xy=first, xytext=start,
        arrowprops=dict(arrowstyle="->", linewidth=2,
                        color=_HUMAN_COLOR if log.executed.agent is Agent.HUMAN else _ROBOT_COLOR),
    )

    ax.set_title(
        f"round {log.round_index}: task {log.executed.task} -> {log.executed.agent.value}"
        f"  (cost {log.executed.step_cost:.3f}, {log.candidate_count} candidates)"
    )
    ax.set_aspect("equal")
    ax.set_xlabel("x [m]")
    ax.set_ylabel("y [m]")
    ax.legend(loc="best", fontsize=8)


def save_round_figures(
    scenario: Scenario, logs: Sequence[RoundLog], out_dir: str
) -> list[str]:
    """One PNG per round, named round_01.png etc. Returns the written paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    done: set[int] = set()
    for log in logs:
        fig, ax = plt.subplots(figsize=(6, 5))
        _draw_scene(ax, scenario, log, done)
        path = os.path.join(out_dir, f"round_{log.round_index:02d}.png")
        fig.tight_layout()
        fig.savefig(path, dpi=120)
        plt.close(fig)
        paths.append(path)
        done.add(log.executed.task)
    return paths


def save_batch_figures(report: BatchReport, out_dir: str) -> list[str]:
    """Gap distribution and candidate-tree size per policy, written as PNGs."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.boxplot(
        [list(r.gaps) for r in report.rows],
        tick_labels=[r.policy for r in report.rows],
    )
    ax.set_xlabel("horizon policy")
    ax.set_ylabel("optimality gap (cost units)")
    ax.set_title(f"gap vs exact optimum over {report.rows[0].instances} instances")
    fig.tight_layout()
    path = os.path.join(out_dir, "gap_distribution.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    paths.append(path)

    fig, ax = plt.subplots(figsize=(6, 4))
    ax.bar(
        [r.policy for r in report.rows],
        [r.mean_candidates_per_round for r in report.rows],
        color="0.4",
    )
    ax.set_yscale("log")
    ax.set_xlabel("horizon policy")
    ax.set_ylabel("mean candidates per round")
    ax.set_title("search-tree size per planning round")
    fig.tight_layout()
    path = os.path.join(out_dir, "candidates_per_round.png")
    fig.savefig(path, dpi=120)
    plt.close(fig)
    paths.append(path)

    return paths
