"""Per-arc cost model.

An agent's cost to take on a task is the Euclidean distance from its current
position to the task position, plus ``tau`` times the agent's labor effort for
that task. Exactly one agent is charged per arc; tasks flagged unsafe for
humans may only ever be costed for the robot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import SafetyViolationError
from .model import Agent, Point, Task


def distance(a: Point, b: Point) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


@dataclass(frozen=True)
class ArcCost:
    """Both agents' costs for one arc. ``human`` is None iff the task is
    unsafe for human operation (the assignment is forced, not priced)."""

    human: float | None
    robot: float


def human_cost(from_pos: Point, task: Task, tau: float) -> float:
    """Travel distance to the task plus tau-weighted human effort.

    Callers must not price unsafe tasks for the human; use arc_cost for the
    enforced variant.
    """
    return distance(from_pos, task.position) + tau * task.effort_human


def robot_cost(from_pos: Point, task: Task, tau: float) -> float:
    """Travel distance to the task plus tau-weighted robot effort."""
    return distance(from_pos, task.position) + tau * task.effort_robot


def arc_cost(
    state_positions: tuple[Point, Point],
    task: Task,
    agent: Agent,
    tau: float,
) -> float:
    """Cost of assigning ``task`` to ``agent`` from the current positions.

    ``state_positions`` is (human_pos, robot_pos). Raises SafetyViolationError
    when the human is assigned an unsafe task; that is a planner bug and is
    never silently corrected.
    """
    human_pos, robot_pos = state_positions
    if agent is Agent.ROBOT:
        return robot_cost(robot_pos, task, tau)
    if task.unsafe_for_human:
        raise SafetyViolationError(
            f"task {task.id} is unsafe for human operation but was assigned to the human"
        )
    return human_cost(human_pos, task, tau)


def arc_costs(human_pos: Point, robot_pos: Point, task: Task, tau: float) -> ArcCost:
    """Both agents' costs for the arc into ``task``; human side forbidden
    (None) when the task is unsafe."""
    return ArcCost(
        human=None if task.unsafe_for_human else human_cost(human_pos, task, tau),
        robot=robot_cost(robot_pos, task, tau),
    )
