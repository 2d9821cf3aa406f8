"""Scenario schema, AND-precedence graph, world state, and feasibility primitives.

A scenario describes one product: its tasks (2-D positions, per-agent efforts,
unsafe-for-human flags), the precedence rules compiled to per-task AND-sets,
the agents' start positions, the effort weighting factor, and the planning
horizon. All types here are immutable value objects; planners never mutate
them and may share them freely across threads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Mapping, Sequence

from .errors import ScenarioFormatError, ScenarioValidationError

Point = tuple[float, float]


class Agent(str, Enum):
    """Who executes a task. Sorts human-first, which tie-breaking relies on."""

    HUMAN = "human"
    ROBOT = "robot"


class AssistantMode(str, Enum):
    """Where the human stands after the robot executes a task.

    ``human_follows_robot``: the human assists and ends up at the task
    location alongside the robot. ``human_stays``: the human keeps their
    current position.
    """

    HUMAN_FOLLOWS_ROBOT = "human_follows_robot"
    HUMAN_STAYS = "human_stays"


@dataclass(frozen=True)
class Task:
    """One disassembly task: a component removal at a fixed workspace position.

    Efforts are nonnegative scalars in labor-effort units; the scenario's
    ``tau`` converts them into the same units as travel distance (meters).
    """

    id: int
    name: str
    position: Point
    effort_human: float
    effort_robot: float
    unsafe_for_human: bool = False


@dataclass(frozen=True)
class PrecedenceGraph:
    """AND-precedence: a task is executable once all its prerequisites are done.

    ``prerequisites`` maps task id to the frozenset of ids that must all be
    completed first. Tasks without an entry have no prerequisites.
    """

    prerequisites: Mapping[int, frozenset[int]]

    def of(self, task_id: int) -> frozenset[int]:
        return self.prerequisites.get(task_id, frozenset())

    def topological_order(self, task_ids: Iterable[int]) -> list[int]:
        """One feasible full order (Kahn), or raise on a cycle.

        A scenario is loadable iff this succeeds: acyclicity is exactly the
        existence of at least one feasible complete sequence.
        """
        ids = sorted(task_ids)
        indegree = {t: len(self.of(t)) for t in ids}
        dependents: dict[int, list[int]] = {t: [] for t in ids}
        for t in ids:
            for p in self.of(t):
                dependents[p].append(t)
        queue = [t for t in ids if indegree[t] == 0]
        order: list[int] = []
        while queue:
            queue.sort()
            t = queue.pop(0)
            order.append(t)
            for d in dependents[t]:
                indegree[d] -= 1
                if indegree[d] == 0:
                    queue.append(d)
        if len(order) != len(ids):
            stuck = sorted(t for t in ids if indegree[t] > 0)
            raise ScenarioValidationError(
                "rules", f"precedence cycle involving tasks {stuck}"
            )
        return order


@dataclass(frozen=True)
class Scenario:
    """A complete planning problem instance."""

    tasks: tuple[Task, ...]
    precedence: PrecedenceGraph
    human_start: Point
    robot_start: Point
    tau: float = 1.0
    horizon: int = 1
    assistant_mode: AssistantMode = AssistantMode.HUMAN_FOLLOWS_ROBOT
    _by_id: dict[int, Task] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.tasks:
            raise ScenarioValidationError("tasks", "at least one task is required")
        ids = [t.id for t in self.tasks]
        if sorted(ids) != list(range(1, len(ids) + 1)):
            raise ScenarioValidationError(
                "tasks", f"task ids must be exactly 1..{len(ids)}, got {sorted(ids)}"
            )
        for i, task in enumerate(self.tasks):
            if task.effort_human < 0:
                raise ScenarioValidationError(
                    f"tasks[{i}].effort_human", "effort must be nonnegative"
                )
            if task.effort_robot < 0:
                raise ScenarioValidationError(
                    f"tasks[{i}].effort_robot", "effort must be nonnegative"
                )
            if not all(math.isfinite(c) for c in task.position):
                raise ScenarioValidationError(
                    f"tasks[{i}].position", "coordinates must be finite"
                )
        for pos_field, pos in (("human_start", self.human_start),
                               ("robot_start", self.robot_start)):
            if not all(math.isfinite(c) for c in pos):
                raise ScenarioValidationError(pos_field, "coordinates must be finite")
        if not (self.tau >= 0 and math.isfinite(self.tau)):
            raise ScenarioValidationError("tau", "must be a finite nonnegative number")
        if not 1 <= self.horizon <= len(self.tasks):
            raise ScenarioValidationError(
                "horizon", f"must be in 1..{len(self.tasks)}, got {self.horizon}"
            )
        id_set = set(ids)
        for t, prereqs in self.precedence.prerequisites.items():
            if t not in id_set:
                raise ScenarioValidationError("rules", f"unknown task id {t}")
            unknown = prereqs - id_set
            if unknown:
                raise ScenarioValidationError(
                    "rules", f"unknown prerequisite ids {sorted(unknown)} for task {t}"
                )
        self.precedence.topological_order(id_set)
        object.__setattr__(self, "_by_id", {t.id: t for t in self.tasks})

    @property
    def task_count(self) -> int:
        return len(self.tasks)

    @property
    def task_ids(self) -> frozenset[int]:
        return frozenset(self._by_id)

    def task(self, task_id: int) -> Task:
        return self._by_id[task_id]


@dataclass(frozen=True)
class WorldState:
    """Planner state: what is done, where the agents are, what remains.

    ``completed`` is the executed history in order, with the agent that
    performed each task.
    """

    completed: tuple[tuple[int, Agent], ...]
    human_pos: Point
    robot_pos: Point
    remaining: frozenset[int]

    def __post_init__(self):
        done = {t for t, _ in self.completed}
        if done & self.remaining:
            raise ValueError(f"tasks both completed and remaining: {sorted(done & self.remaining)}")
        if len(done) != len(self.completed):
            raise ValueError("duplicate task in completed history")

    @classmethod
    def initial(cls, scenario: Scenario) -> "WorldState":
        return cls(
            completed=(),
            human_pos=scenario.human_start,
            robot_pos=scenario.robot_start,
            remaining=scenario.task_ids,
        )

    @property
    def completed_ids(self) -> tuple[int, ...]:
        return tuple(t for t, _ in self.completed)

    def check(self, scenario: Scenario) -> None:
        """Assert this state is consistent with the scenario.

        Used by tests and the session service; planner-produced states
        maintain these invariants by construction.
        """
        done = {t for t, _ in self.completed}
        if done | self.remaining != scenario.task_ids:
            raise ValueError("completed and remaining do not partition the task set")
        if not is_feasible_order(scenario, self.completed_ids):
            raise ValueError("completed order violates precedence")


@dataclass(frozen=True)
class PlanStep:
    """One scheduled task with its agent and the arc cost charged for it."""

    task: int
    agent: Agent
    step_cost: float

    def to_dict(self) -> dict[str, Any]:
        return {"task": self.task, "agent": self.agent.value, "step_cost": self.step_cost}


@dataclass(frozen=True)
class Plan:
    """An ordered list of plan steps; total_cost is the exact sequential sum."""

    steps: tuple[PlanStep, ...]
    total_cost: float

    def __post_init__(self):
        total = 0.0
        for s in self.steps:
            total += s.step_cost
        if total != self.total_cost:
            raise ValueError("total_cost must equal the sequential sum of step costs")

    @classmethod
    def from_steps(cls, steps: Sequence[PlanStep]) -> "Plan":
        total = 0.0
        for s in steps:
            total += s.step_cost
        return cls(steps=tuple(steps), total_cost=total)

    @property
    def order(self) -> tuple[int, ...]:
        return tuple(s.task for s in self.steps)

    @property
    def assignments(self) -> tuple[Agent, ...]:
        return tuple(s.agent for s in self.steps)

    def to_dict(self) -> dict[str, Any]:
        return {
            "steps": [s.to_dict() for s in self.steps],
            "total_cost": self.total_cost,
        }


def ready_tasks(scenario: Scenario, state: WorldState) -> set[int]:
    """Remaining tasks whose prerequisite sets are fully completed."""
    done = set(state.completed_ids)
    return {t for t in state.remaining if scenario.precedence.of(t) <= done}


def is_feasible_order(
    scenario: Scenario,
    order: Sequence[int],
    completed: Iterable[int] = (),
) -> bool:
    """True iff every task in ``order`` comes after all of its prerequisites.

    Prerequisites satisfied by ``completed`` count as met; a prerequisite in
    neither ``completed`` nor earlier in ``order`` makes the order infeasible.
    Raises ValueError on duplicate or unknown ids.
    """
    seen = set(completed)
    known = scenario.task_ids
    for t in order:
        if t not in known:
            raise ValueError(f"unknown task id {t} in order")
        if t in seen:
            raise ValueError(f"duplicate task id {t} in order")
        if not scenario.precedence.of(t) <= seen:
            return False
        seen.add(t)
    return True


def _as_point(value: Any, field_name: str) -> Point:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in value)
    ):
        raise ScenarioValidationError(field_name, "expected a [x, y] pair of numbers")
    return (float(value[0]), float(value[1]))


def scenario_from_dict(doc: Mapping[str, Any]) -> Scenario:
    """Build and validate a Scenario from a parsed scenario document."""
    if not isinstance(doc, Mapping):
        raise ScenarioFormatError("scenario document must be a JSON object")
    raw_tasks = doc.get("tasks")
    if not isinstance(raw_tasks, list) or not raw_tasks:
        raise ScenarioValidationError("tasks", "expected a nonempty array")

    tasks = []
    for i, item in enumerate(raw_tasks):
        if not isinstance(item, Mapping):
            raise ScenarioValidationError(f"tasks[{i}]", "expected an object")
        if not isinstance(item.get("id"), int) or isinstance(item.get("id"), bool):
            raise ScenarioValidationError(f"tasks[{i}].id", "expected an integer")
        try:
            effort_human = float(item.get("effort_human", 0.0))
            effort_robot = float(item.get("effort_robot", 0.0))
        except (TypeError, ValueError):
            raise ScenarioValidationError(f"tasks[{i}]", "efforts must be numbers")
        tasks.append(
            Task(
                id=item["id"],
                name=str(item.get("name", f"task-{item['id']}")),
                position=_as_point(item.get("position"), f"tasks[{i}].position"),
                effort_human=effort_human,
                effort_robot=effort_robot,
                unsafe_for_human=bool(item.get("unsafe_for_human", False)),
            )
        )

    prereqs: dict[int, set[int]] = {}
    raw_rules = doc.get("rules", [])
    if not isinstance(raw_rules, list):
        raise ScenarioValidationError("rules", "expected an array")
    for i, rule in enumerate(raw_rules):
        if not isinstance(rule, Mapping) or "before" not in rule or "after" not in rule:
            raise ScenarioValidationError(
                f"rules[{i}]", "expected an object with 'before' and 'after' arrays"
            )
        before, after = rule["before"], rule["after"]
        if not isinstance(before, list) or not isinstance(after, list):
            raise ScenarioValidationError(
                f"rules[{i}]", "'before' and 'after' must be arrays of task ids"
            )
        for a in after:
            prereqs.setdefault(a, set()).update(before)

    mode_raw = doc.get("assistant_mode", AssistantMode.HUMAN_FOLLOWS_ROBOT.value)
    try:
        mode = AssistantMode(mode_raw)
    except ValueError:
        raise ScenarioValidationError(
            "assistant_mode",
            f"expected one of {[m.value for m in AssistantMode]}, got {mode_raw!r}",
        )

    horizon = doc.get("horizon", len(tasks))
    if not isinstance(horizon, int) or isinstance(horizon, bool):
        raise ScenarioValidationError("horizon", "expected an integer")
    try:
        tau = float(doc.get("tau", 1.0))
    except (TypeError, ValueError):
        raise ScenarioValidationError("tau", "expected a number")

    return Scenario(
        tasks=tuple(tasks),
        precedence=PrecedenceGraph(
            prerequisites={t: frozenset(ps) for t, ps in prereqs.items()}
        ),
        human_start=_as_point(doc.get("human_start"), "human_start"),
        robot_start=_as_point(doc.get("robot_start"), "robot_start"),
        tau=tau,
        horizon=horizon,
        assistant_mode=mode,
    )


def load_scenario(document: str) -> Scenario:
    """Parse a scenario document (JSON text) and validate it."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ScenarioFormatError(f"invalid JSON: {exc}") from exc
    return scenario_from_dict(doc)


def load_scenario_file(path: str) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return load_scenario(fh.read())


def scenario_to_dict(scenario: Scenario) -> dict[str, Any]:
    """Inverse of scenario_from_dict, with one rule per constrained task."""
    return {
        "tasks": [
            {
                "id": t.id,
                "name": t.name,
                "position": list(t.position),
                "effort_human": t.effort_human,
                "effort_robot": t.effort_robot,
                "unsafe_for_human": t.unsafe_for_human,
            }
            for t in scenario.tasks
        ],
        "rules": [
            {"before": sorted(ps), "after": [t]}
            for t, ps in sorted(scenario.precedence.prerequisites.items())
            if ps
        ],
        "human_start": list(scenario.human_start),
        "robot_start": list(scenario.robot_start),
        "tau": scenario.tau,
        "horizon": scenario.horizon,
        "assistant_mode": scenario.assistant_mode.value,
    }


def state_to_dict(state: WorldState) -> dict[str, Any]:
    return {
        "completed": [[t, a.value] for t, a in state.completed],
        "human_pos": list(state.human_pos),
        "robot_pos": list(state.robot_pos),
        "remaining": sorted(state.remaining),
    }
