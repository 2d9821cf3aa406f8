"""Candidate enumeration and counting against the brute-force oracle."""

import math
import random

import pytest
from hypothesis import given, settings

from hrcplan import (
    Agent,
    PrecedenceGraph,
    ResourceLimitError,
    Scenario,
    Task,
    WorldState,
    count_candidates,
    enumerate_assignments,
    enumerate_orders,
    is_feasible_order,
)
from hrcplan.candidates import iter_candidates

import oracles
from conftest import make_state, random_scenario, scenarios


def all_parallel(t, unsafe=(), horizon=None):
    tasks = tuple(
        Task(id=i, name=f"t{i}", position=(float(i), 0.0), effort_human=0.1,
             effort_robot=0.2, unsafe_for_human=i in unsafe)
        for i in range(1, t + 1)
    )
    return Scenario(
        tasks=tasks,
        precedence=PrecedenceGraph(prerequisites={}),
        human_start=(0.0, 0.0),
        robot_start=(0.0, 1.0),
        horizon=horizon or t,
    )


class TestEnumerateOrders:
    def test_toy_box_fresh_depth3_is_first_layer_permutations(self, toy_box):
        got = enumerate_orders(toy_box, make_state(toy_box), 3)
        # after any two of {1,2,3}, task 4 is still blocked, so exactly the
        # 6 permutations of the first layer survive
        assert got == [
            (1, 2, 3), (1, 3, 2), (2, 1, 3), (2, 3, 1), (3, 1, 2), (3, 2, 1)
        ]
        assert got == oracles.brute_orders(
            oracles.from_scenario(toy_box).prereqs, [], 3
        )

    def test_toy_box_after_first_layer(self, toy_box):
        got = enumerate_orders(toy_box, make_state(toy_box, (1, 2, 3)), 3)
        assert got == [
            (4, 5, 6), (4, 5, 7), (4, 6, 5), (4, 6, 7), (4, 7, 5), (4, 7, 6)
        ]

    def test_depth_one_is_ready_tasks(self, toy_box):
        got = enumerate_orders(toy_box, make_state(toy_box), 1)
        assert got == [(1,), (2,), (3,)]

    def test_depth_clamped_to_remaining(self, toy_box):
        state = make_state(toy_box, (2, 1, 3, 4, 5, 6))
        assert enumerate_orders(toy_box, state, 3) == [(7,)]

    def test_empty_remaining_yields_nothing(self, toy_box):
        state = make_state(toy_box, (2, 1, 3, 4, 5, 6, 7))
        assert enumerate_orders(toy_box, state, 3) == []

    def test_depth_zero_rejected(self, toy_box):
        with pytest.raises(ValueError):
            enumerate_orders(toy_box, make_state(toy_box), 0)

    def test_cap_raises(self, toy_box):
        with pytest.raises(ResourceLimitError):
            enumerate_orders(toy_box, make_state(toy_box), 3, max_orders=5)


class TestEnumerateAssignments:
    def test_unsafe_task_forces_robot(self, toy_box):
        vectors = enumerate_assignments((5, 6, 7), toy_box)
        assert len(vectors) == 4
        assert all(v[2] is Agent.ROBOT for v in vectors)
        assert vectors[0] == (Agent.HUMAN, Agent.HUMAN, Agent.ROBOT)

    def test_all_safe_is_full_product(self, toy_box):
        vectors = enumerate_assignments((1, 2, 3), toy_box)
        assert len(vectors) == 8
        assert vectors[0] == (Agent.HUMAN,) * 3
        assert vectors[-1] == (Agent.ROBOT,) * 3

    def test_all_unsafe_single_vector(self):
        scenario = all_parallel(2, unsafe={1, 2})
        assert enumerate_assignments((1, 2), scenario) == [(Agent.ROBOT, Agent.ROBOT)]


class TestCountCandidates:
    def test_all_parallel_full_depth(self):
        scenario = all_parallel(3)
        got = count_candidates(scenario, WorldState.initial(scenario), 3)
        assert got == math.factorial(3) * 2**3 == 48

    def test_partial_depth_permutation_formula(self):
        scenario = all_parallel(5)
        got = count_candidates(scenario, WorldState.initial(scenario), 2)
        assert got == 5 * 4 * 2**2 == 80

    def test_depth_one_toy_box(self, toy_box):
        got = count_candidates(toy_box, make_state(toy_box), 1)
        assert got == 3 * 2 == 6

    def test_count_cap_raises_quickly(self):
        scenario = all_parallel(10)
        with pytest.raises(ResourceLimitError):
            count_candidates(scenario, WorldState.initial(scenario), 10, cap=1000)

    def test_empty_remaining_counts_zero(self, toy_box):
        state = make_state(toy_box, (2, 1, 3, 4, 5, 6, 7))
        assert count_candidates(toy_box, state, 3) == 0


class TestAgainstOracle:
    @given(scenarios(max_tasks=6))
    @settings(max_examples=50, deadline=None)
    def test_count_matches_materialization(self, scenario):
        state = WorldState.initial(scenario)
        data = oracles.from_scenario(scenario)
        for depth in (1, 2, scenario.task_count):
            got = count_candidates(scenario, state, depth)
            assert got == oracles.brute_count(data.prereqs, data.unsafe, [], depth)
            assert got == sum(
                len(enumerate_assignments(o, scenario))
                for o in enumerate_orders(scenario, state, depth)
            )
            assert got == sum(1 for _ in iter_candidates(scenario, state, depth))

    @given(scenarios(max_tasks=6))
    @settings(max_examples=50, deadline=None)
    def test_emitted_candidates_feasible_and_safe(self, scenario):
        state = WorldState.initial(scenario)
        depth = min(scenario.horizon, scenario.task_count)
        for cand in iter_candidates(scenario, state, depth):
            assert is_feasible_order(scenario, cand.order)
            for t, a in zip(cand.order, cand.assignments):
                if scenario.task(t).unsafe_for_human:
                    assert a is Agent.ROBOT

    def test_orders_match_oracle_mid_run(self):
        rng = random.Random(7)
        for _ in range(20):
            scenario = random_scenario(rng, max_tasks=6)
            data = oracles.from_scenario(scenario)
            # walk a random feasible prefix, then compare enumerations
            done = []
            choices = [t for t in scenario.task_ids
                       if scenario.precedence.of(t) <= set(done)]
            while choices and rng.random() < 0.6:
                done.append(rng.choice(sorted(choices)))
                choices = [t for t in scenario.task_ids if t not in done
                           and scenario.precedence.of(t) <= set(done)]
            state = make_state(scenario, done)
            for depth in (1, 2, 3):
                assert enumerate_orders(scenario, state, depth) == \
                    oracles.brute_orders(data.prereqs, done, depth)


def test_determinism_repeated_calls_identical(toy_box):
    state = make_state(toy_box)
    a = enumerate_orders(toy_box, state, 3)
    b = enumerate_orders(toy_box, state, 3)
    assert repr(a) == repr(b)
    ca = list(iter_candidates(toy_box, state, 3))
    cb = list(iter_candidates(toy_box, state, 3))
    assert ca == cb
