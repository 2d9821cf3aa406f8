"""Shared fixtures and hypothesis strategies."""

from __future__ import annotations

import random

import pytest
from hypothesis import strategies as st

from hrcplan import (
    Agent,
    PrecedenceGraph,
    Scenario,
    Task,
    WorldState,
    case_study_scenario,
)


@pytest.fixture(scope="session")
def toy_box() -> Scenario:
    return case_study_scenario()


def make_state(scenario: Scenario, completed_ids=(), agent=Agent.HUMAN) -> WorldState:
    """A WorldState after the given tasks were completed (positions rolled
    forward as if the one agent executed them all)."""
    pos_h, pos_r = scenario.human_start, scenario.robot_start
    completed = []
    for t in completed_ids:
        completed.append((t, agent))
        if agent is Agent.HUMAN:
            pos_h = scenario.task(t).position
        else:
            pos_r = scenario.task(t).position
            pos_h = scenario.task(t).position
    return WorldState(
        completed=tuple(completed),
        human_pos=pos_h,
        robot_pos=pos_r,
        remaining=scenario.task_ids - set(completed_ids),
    )


def random_scenario(
    rng: random.Random,
    max_tasks: int = 7,
    min_tasks: int = 1,
    edge_prob: float = 0.3,
    unsafe_prob: float = 0.2,
    horizon: int | None = None,
) -> Scenario:
    """Random instance with a forward-edge DAG (always acyclic)."""
    t = rng.randint(min_tasks, max_tasks)
    tasks = tuple(
        Task(
            id=i,
            name=f"task-{i}",
            position=(rng.uniform(0, 1.2), rng.uniform(0, 0.8)),
            effort_human=rng.uniform(0, 1),
            effort_robot=rng.uniform(0, 1),
            unsafe_for_human=rng.random() < unsafe_prob,
        )
        for i in range(1, t + 1)
    )
    prereqs = {}
    for j in range(2, t + 1):
        before = frozenset(i for i in range(1, j) if rng.random() < edge_prob)
        if before:
            prereqs[j] = before
    return Scenario(
        tasks=tasks,
        precedence=PrecedenceGraph(prerequisites=prereqs),
        human_start=(rng.uniform(0, 1.2), rng.uniform(0, 0.8)),
        robot_start=(rng.uniform(0, 1.2), rng.uniform(0, 0.8)),
        tau=rng.choice([0.0, 0.5, 1.0]),
        horizon=horizon if horizon is not None else rng.randint(1, t),
    )


@st.composite
def scenarios(draw, max_tasks: int = 6) -> Scenario:
    """Hypothesis strategy over small random scenarios."""
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return random_scenario(random.Random(seed), max_tasks=max_tasks)
