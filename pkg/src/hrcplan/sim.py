"""Human-motion models, the bundled case study, and batch experiments.

The case-study scenario is a committed artifact: a 7-screw toy box with the
first three screws on the human's side, the structural screws on the robot's
side, and screw 7 unsafe for human operation. Its contract is behavioral,
not geometric: under a static human the receding-horizon run must execute
(2,H),(1,H),(3,H),(4,R),(5,R),(6,R),(7,R).
"""

from __future__ import annotations

import json
import logging
import math
import random
import statistics
import time
from dataclasses import dataclass, field, replace
from enum import Enum
from importlib import resources
from typing import Any

from .errors import InvariantViolationError, ScenarioValidationError
from .model import (
    Agent,
    Point,
    PrecedenceGraph,
    Scenario,
    Task,
    load_scenario,
)
from .planner import MotionSource, RoundLog, run, solve_full_horizon

logger = logging.getLogger(__name__)

CASE_STUDY_SEQUENCE: tuple[tuple[int, Agent], ...] = (
    (2, Agent.HUMAN),
    (1, Agent.HUMAN),
    (3, Agent.HUMAN),
    (4, Agent.ROBOT),
    (5, Agent.ROBOT),
    (6, Agent.ROBOT),
    (7, Agent.ROBOT),
)

Bounds = tuple[float, float, float, float]


class MotionKind(str, Enum):
    STATIC = "static"
    WAYPOINTS = "waypoints"
    RANDOM_WALK = "random_walk"


@dataclass(frozen=True)
class MotionModel:
    """Exogenous human motion, evaluated once per round.

    ``waypoints`` are (round_index, position) pairs sorted by round; the
    human sits at the last waypoint whose round has been reached. Random
    walks take one isotropic step of ``walk_step`` meters per round, clamped
    to ``bounds``; the direction depends only on (seed, round), so replays
    are identical and any round can be recomputed independently.
    """

    kind: MotionKind = MotionKind.STATIC
    waypoints: tuple[tuple[int, Point], ...] = ()
    walk_step: float = 0.0
    seed: int = 0
    bounds: Bounds | None = None

    def __post_init__(self):
        if self.walk_step < 0:
            raise ValueError("walk_step must be >= 0")
        rounds = [r for r, _ in self.waypoints]
        if rounds != sorted(rounds):
            raise ValueError("waypoints must be sorted by round index")


def next_human_position(model: MotionModel, round_index: int, current: Point) -> Point:
    """The human's position entering ``round_index`` (>= 0)."""
    if round_index < 0:
        raise ValueError("round_index must be >= 0")
    if model.kind is MotionKind.STATIC:
        return current
    if model.kind is MotionKind.WAYPOINTS:
        pos = current
        for r, p in model.waypoints:
            if r <= round_index:
                pos = p
            else:
                break
        return pos
    # random_walk: string-seeded so the draw is stable across processes
    rng = random.Random(f"{model.seed}:{round_index}")
    angle = rng.uniform(0.0, 2.0 * math.pi)
    x = current[0] + model.walk_step * math.cos(angle)
    y = current[1] + model.walk_step * math.sin(angle)
    if model.bounds is not None:
        xmin, ymin, xmax, ymax = model.bounds
        x = min(max(x, xmin), xmax)
        y = min(max(y, ymin), ymax)
    return (x, y)


def workspace_bounds(scenario: Scenario, pad: float = 0.1) -> Bounds:
    """Bounding box of every task and start position, padded."""
    xs = [t.position[0] for t in scenario.tasks]
    ys = [t.position[1] for t in scenario.tasks]
    for p in (scenario.human_start, scenario.robot_start):
        xs.append(p[0])
        ys.append(p[1])
    return (min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad)


def motion_source_for(scenario: Scenario, model: MotionModel) -> MotionSource:
    """Adapt a MotionModel to the planner's per-round callback, defaulting the
    random-walk clamp rectangle to the scenario's workspace."""
    if model.kind is MotionKind.RANDOM_WALK and model.bounds is None:
        model = replace(model, bounds=workspace_bounds(scenario))

    def source(round_index: int, current: Point) -> Point:
        return next_human_position(model, round_index, current)

    return source


def parse_motion_spec(spec: str) -> MotionModel:
    """Parse the CLI motion flag.

    ``static`` | ``waypoints:<path>`` (JSON array of [round, [x, y]]) |
    ``walk:<step>:<seed>``.
    """
    if spec == "static":
        return MotionModel()
    if spec.startswith("waypoints:"):
        path = spec.split(":", 1)[1]
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
        try:
            points = tuple(
                (int(r), (float(p[0]), float(p[1]))) for r, p in raw
            )
        except (TypeError, ValueError, IndexError) as exc:
            raise ValueError(f"waypoints file {path}: expected [[round, [x, y]], ...]") from exc
        return MotionModel(kind=MotionKind.WAYPOINTS, waypoints=points)
    if spec.startswith("walk:"):
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError("walk motion spec must be walk:<step>:<seed>")
        return MotionModel(
            kind=MotionKind.RANDOM_WALK, walk_step=float(parts[1]), seed=int(parts[2])
        )
    raise ValueError(f"unknown motion spec {spec!r}")


def case_study_scenario() -> Scenario:
    """The bundled 7-screw toy-box scenario (horizon 3, screw 7 unsafe)."""
    text = resources.files("hrcplan").joinpath("data/case_study.json").read_text("utf-8")
    return load_scenario(text)


def run_case_study() -> list[RoundLog]:
    """Run the bundled scenario with a static human and check that each round
    executes the expected (task, agent) pair. Any deviation is a regression in
    the planner or the committed geometry, and raises."""
    scenario = case_study_scenario()
    logs, _ = run(scenario)
    executed = tuple((log.executed.task, log.executed.agent) for log in logs)
    if executed != CASE_STUDY_SEQUENCE:
        raise InvariantViolationError(
            f"case study executed {executed}, expected {CASE_STUDY_SEQUENCE}"
        )
    return logs


# ----------------------------- batch experiments -----------------------------


@dataclass(frozen=True)
class BatchConfig:
    """Random-instance generator settings plus the horizon policies to compare.

    Kept small on purpose: every instance must stay within reach of the exact
    full-horizon solver, which is the baseline for the optimality gap.
    """

    instances: int = 20
    t_min: int = 4
    t_max: int = 7
    edge_prob: float = 0.25
    unsafe_prob: float = 0.15
    effort_human: tuple[float, float] = (0.0, 1.0)
    effort_robot: tuple[float, float] = (0.0, 1.0)
    tau: float = 1.0
    seed: int = 0
    horizons: tuple[Any, ...] = (1, 2, 3, "full")
    workspace: Bounds = (0.0, 0.0, 1.2, 0.8)

    def __post_init__(self):
        if not 1 <= self.t_min <= self.t_max:
            raise ScenarioValidationError("t_min/t_max", "need 1 <= t_min <= t_max")
        if self.t_max > 12:
            raise ScenarioValidationError(
                "t_max", "batch instances must stay exactly solvable (t_max <= 12)"
            )
        if self.instances < 1:
            raise ScenarioValidationError("instances", "need at least one instance")


def load_batch_config(text: str) -> BatchConfig:
    raw = json.loads(text)
    kwargs: dict[str, Any] = {}
    for f in (
        "instances", "t_min", "t_max", "edge_prob", "unsafe_prob", "tau", "seed",
    ):
        if f in raw:
            kwargs[f] = raw[f]
    if "effort_human" in raw:
        kwargs["effort_human"] = tuple(raw["effort_human"])
    if "effort_robot" in raw:
        kwargs["effort_robot"] = tuple(raw["effort_robot"])
    if "horizons" in raw:
        kwargs["horizons"] = tuple(raw["horizons"])
    if "workspace" in raw:
        kwargs["workspace"] = tuple(raw["workspace"])
    return BatchConfig(**kwargs)


def generate_scenario(rng: random.Random, config: BatchConfig, t: int | None = None) -> Scenario:
    """One random instance: uniform positions, forward-edge DAG, Bernoulli
    unsafe flags, uniform efforts."""
    if t is None:
        t = rng.randint(config.t_min, config.t_max)
    xmin, ymin, xmax, ymax = config.workspace

    def point() -> Point:
        return (rng.uniform(xmin, xmax), rng.uniform(ymin, ymax))

    tasks = tuple(
        Task(
            id=i,
            name=f"task-{i}",
            position=point(),
            effort_human=rng.uniform(*config.effort_human),
            effort_robot=rng.uniform(*config.effort_robot),
            unsafe_for_human=rng.random() < config.unsafe_prob,
        )
        for i in range(1, t + 1)
    )
    prereqs: dict[int, frozenset[int]] = {}
    for j in range(2, t + 1):
        before = {i for i in range(1, j) if rng.random() < config.edge_prob}
        if before:
            prereqs[j] = frozenset(before)
    return Scenario(
        tasks=tasks,
        precedence=PrecedenceGraph(prerequisites=prereqs),
        human_start=point(),
        robot_start=point(),
        tau=config.tau,
        horizon=t,
    )


@dataclass(frozen=True)
class PolicyStats:
    """Aggregate results for one horizon policy over the instance set."""

    policy: str
    instances: int
    mean_gap: float
    max_gap: float
    mean_candidates_per_round: float
    wall_time: float
    gaps: tuple[float, ...] = field(repr=False, default=())


@dataclass(frozen=True)
class BatchReport:
    rows: tuple[PolicyStats, ...]
    config: BatchConfig

    def to_csv(self, delimiter: str = "\t") -> str:
        header = delimiter.join(
            ["policy", "instances", "mean_gap", "max_gap",
             "mean_candidates_per_round", "wall_time_s"]
        )
        lines = [header]
        for r in self.rows:
            lines.append(delimiter.join([
                r.policy,
                str(r.instances),
                f"{r.mean_gap:.9g}",
                f"{r.max_gap:.9g}",
                f"{r.mean_candidates_per_round:.9g}",
                f"{r.wall_time:.3f}",
            ]))
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict[str, Any]:
        return {
            "config": {
                "instances": self.config.instances,
                "t_min": self.config.t_min,
                "t_max": self.config.t_max,
                "edge_prob": self.config.edge_prob,
                "unsafe_prob": self.config.unsafe_prob,
                "effort_human": list(self.config.effort_human),
                "effort_robot": list(self.config.effort_robot),
                "tau": self.config.tau,
                "seed": self.config.seed,
                "horizons": list(self.config.horizons),
                "workspace": list(self.config.workspace),
            },
            "policies": [
                {
                    "policy": r.policy,
                    "instances": r.instances,
                    "mean_gap": r.mean_gap,
                    "max_gap": r.max_gap,
                    "mean_candidates_per_round": r.mean_candidates_per_round,
                    "wall_time_s": r.wall_time,
                    "gaps": list(r.gaps),
                }
                for r in self.rows
            ],
        }


def run_batch(config: BatchConfig) -> BatchReport:
    """Compare horizon policies against the exact optimum on random instances.

    The human is static, so the full-horizon policy must close the gap to
    zero on every instance; shorter horizons report their gap distribution.
    All planning outputs are deterministic given the seed (wall time is not).
    """
    rng = random.Random(config.seed)
    scenarios = [generate_scenario(rng, config) for _ in range(config.instances)]
    oracle_costs = [solve_full_horizon(s).total_cost for s in scenarios]

    rows = []
    for policy in config.horizons:
        gaps: list[float] = []
        cand_means: list[float] = []
        started = time.perf_counter()
        for scenario, oracle in zip(scenarios, oracle_costs):
            n = scenario.task_count if policy == "full" else min(int(policy), scenario.task_count)
            logs, total = run(replace(scenario, horizon=n))
            gaps.append(total - oracle)
            cand_means.append(statistics.fmean(l.candidate_count for l in logs))
        elapsed = time.perf_counter() - started
        rows.append(
            PolicyStats(
                policy=str(policy),
                instances=len(scenarios),
                mean_gap=statistics.fmean(gaps),
                max_gap=max(gaps),
                mean_candidates_per_round=statistics.fmean(cand_means),
                wall_time=elapsed,
                gaps=tuple(gaps),
            )
        )
        logger.info(
            "policy %s: mean gap %.6f, max gap %.6f", policy, rows[-1].mean_gap, rows[-1].max_gap
        )
    return BatchReport(rows=tuple(rows), config=config)
