"""Candidate generation: feasible N-step orders and their agent assignments.

Enumeration is depth-first over ready sets, so memory stays bounded by the
horizon depth rather than by the candidate count. Output order is fully
deterministic: orders ascend lexicographically by task id, and assignment
vectors ascend with human before robot at each position. Unsafe tasks admit
only the robot, which is why a candidate count is 2^depth only in the
all-safe case.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import ResourceLimitError
from .model import Agent, Scenario, WorldState

# Materializing more candidates than this raises ResourceLimitError; counting
# paths never materialize and use the cap only as an early-exit guard.
DEFAULT_CANDIDATE_CAP = 10_000_000


@dataclass(frozen=True)
class CandidateSequence:
    """A feasible order prefix together with one agent per step."""

    order: tuple[int, ...]
    assignments: tuple[Agent, ...]


def _effective_depth(state: WorldState, depth: int) -> int:
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    return min(depth, len(state.remaining))


def iter_orders(scenario: Scenario, state: WorldState, depth: int) -> Iterator[tuple[int, ...]]:
    """Yield every feasible ordered prefix of length min(depth, |remaining|),
    in lexicographic order by task id. Empty remaining yields nothing."""
    effective = _effective_depth(state, depth)
    if effective == 0:
        return
    remaining = sorted(state.remaining)
    done = set(state.completed_ids)
    prefix: list[int] = []

    def rec() -> Iterator[tuple[int, ...]]:
        if len(prefix) == effective:
            yield tuple(prefix)
            return
        for t in remaining:
            if t in done:
                continue
            if scenario.precedence.of(t) <= done:
                prefix.append(t)
                done.add(t)
                yield from rec()
                done.remove(t)
                prefix.pop()

    yield from rec()


def enumerate_orders(
    scenario: Scenario,
    state: WorldState,
    depth: int,
    max_orders: int = DEFAULT_CANDIDATE_CAP,
) -> list[tuple[int, ...]]:
    """Materialize iter_orders, failing loudly past ``max_orders``."""
    out: list[tuple[int, ...]] = []
    for order in iter_orders(scenario, state, depth):
        if len(out) >= max_orders:
            raise ResourceLimitError(
                f"more than {max_orders} feasible orders at depth {depth}"
            )
        out.append(order)
    return out


def enumerate_assignments(
    order: Sequence[int], scenario: Scenario
) -> list[tuple[Agent, ...]]:
    """All agent vectors for ``order``, robot forced on unsafe tasks.

    Vectors come out in lexicographic order with human < robot per position,
    so the first entry is the human-most assignment.
    """
    choices = [
        (Agent.ROBOT,) if scenario.task(t).unsafe_for_human else (Agent.HUMAN, Agent.ROBOT)
        for t in order
    ]
    return list(itertools.product(*choices))


def iter_candidates(
    scenario: Scenario, state: WorldState, depth: int
) -> Iterator[CandidateSequence]:
    """All candidates in (order, assignment) lexicographic order."""
    for order in iter_orders(scenario, state, depth):
        for assignment in enumerate_assignments(order, scenario):
            yield CandidateSequence(order=order, assignments=assignment)


def count_candidates(
    scenario: Scenario,
    state: WorldState,
    depth: int,
    cap: int | None = None,
) -> int:
    """Number of (order, assignment) candidates at ``depth``, without
    materializing them.

    Each feasible order contributes 2^(length - unsafe_count). With ``cap``
    set, raises ResourceLimitError as soon as the running total exceeds it,
    so counting an astronomically large tree still returns quickly.
    """
    effective = _effective_depth(state, depth)
    if effective == 0:
        return 0
    remaining = sorted(state.remaining)
    done = set(state.completed_ids)
    total = 0

    def rec(chosen: int, weight: int) -> None:
        nonlocal total
        if chosen == effective:
            total += weight
            if cap is not None and total > cap:
                raise ResourceLimitError(
                    f"candidate count exceeds cap of {cap} at depth {depth}"
                )
            return
        for t in remaining:
            if t in done:
                continue
            if scenario.precedence.of(t) <= done:
                done.add(t)
                rec(chosen + 1, weight if scenario.task(t).unsafe_for_human else weight * 2)
                done.remove(t)

    rec(0, 1)
    return total
