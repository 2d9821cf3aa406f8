"""HTTP+JSON session service: the steering surface the UI talks to.

Each session owns one scenario and one world state. Clients push the human's
real-time position, preview the current round's plan (side-effect free), and
advance one round at a time. Sessions live in memory; with a snapshot
directory configured, every step also writes the session to disk.
"""

from __future__ import annotations

import json
import math
import os
import threading
import uuid
from dataclasses import dataclass, field
from typing import Any

from fastapi import FastAPI, HTTPException, Response
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, field_validator

from .errors import ScenarioFormatError, ScenarioValidationError
from .model import (
    Scenario,
    WorldState,
    scenario_from_dict,
    scenario_to_dict,
    state_to_dict,
)
from .planner import RoundLog, plan_round, step
from .candidates import enumerate_orders

DEFAULT_PLAN_LIMIT = 20


class PositionIn(BaseModel):
    x: float
    y: float

    @field_validator("x", "y")
    @classmethod
    def _finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("coordinates must be finite")
        return v


@dataclass
class Session:
    id: str
    scenario: Scenario
    state: WorldState
    logs: list[RoundLog] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock)

    @property
    def status(self) -> str:
        return "finished" if not self.state.remaining else "active"


def _session_body(session: Session) -> dict[str, Any]:
    return {
        "state": state_to_dict(session.state),
        "logs": [log.to_dict() for log in session.logs],
        "status": session.status,
    }


def create_app(snapshot_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="hrcplan session service")
    # the browser UI is served from a separate static origin
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, Session] = {}
    registry_lock = threading.Lock()

    def get_session(session_id: str) -> Session:
        with registry_lock:
            session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail=f"unknown session {session_id}")
        return session

    def snapshot(session: Session) -> None:
        if snapshot_dir is None:
            return
        os.makedirs(snapshot_dir, exist_ok=True)
        payload = {
            "id": session.id,
            "scenario": scenario_to_dict(session.scenario),
            **_session_body(session),
        }
        path = os.path.join(snapshot_dir, f"{session.id}.json")
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True)

    @app.post("/sessions", status_code=201)
    def create_session(document: dict[str, Any]) -> dict[str, Any]:
        """Create a session from a scenario document (the file format payload)."""
        try:
            scenario = scenario_from_dict(document)
        except (ScenarioFormatError, ScenarioValidationError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        session = Session(
            id=uuid.uuid4().hex,
            scenario=scenario,
            state=WorldState.initial(scenario),
        )
        with registry_lock:
            sessions[session.id] = session
        return {"id": session.id, "state": state_to_dict(session.state)}

    @app.get("/sessions/{session_id}")
    def read_session(session_id: str) -> dict[str, Any]:
        return _session_body(get_session(session_id))

    @app.post("/sessions/{session_id}/human-position")
    def set_human_position(session_id: str, pos: PositionIn) -> dict[str, Any]:
        """The real-time motion channel: place the human before the next round."""
        session = get_session(session_id)
        with session.lock:
            session.state = WorldState(
                completed=session.state.completed,
                human_pos=(pos.x, pos.y),
                robot_pos=session.state.robot_pos,
                remaining=session.state.remaining,
            )
            return {"state": state_to_dict(session.state)}

    @app.get("/sessions/{session_id}/plan")
    def preview_plan(session_id: str, limit: int = DEFAULT_PLAN_LIMIT) -> dict[str, Any]:
        """Current round's candidates and chosen plan; never mutates state.

        ``orders`` lists every feasible lookahead order; ``top_candidates``
        the cheapest scored (order, assignment) pairs up to ``limit``.
        """
        session = get_session(session_id)
        with session.lock:
            scenario, state = session.scenario, session.state
        if not state.remaining:
            return {
                "status": "finished",
                "candidate_count": 0,
                "orders": [],
                "best_plan": None,
                "top_candidates": [],
            }
        best, count = plan_round(scenario, state)
        depth = min(scenario.horizon, len(state.remaining))
        orders = enumerate_orders(scenario, state, depth)
        scored = _top_candidates(scenario, state, orders, limit)
        return {
            "status": "active",
            "candidate_count": count,
            "orders": [list(o) for o in orders],
            "best_plan": best.to_dict(),
            "top_candidates": scored,
        }

    @app.post("/sessions/{session_id}/step")
    def step_session(session_id: str) -> dict[str, Any]:
        """Advance one round: plan, execute the first step, log it."""
        session = get_session(session_id)
        with session.lock:
            if not session.state.remaining:
                raise HTTPException(status_code=409, detail="session is finished")
            log, new_state = step(session.scenario, session.state)
            session.state = new_state
            session.logs.append(log)
            snapshot(session)
            return {
                "round_log": log.to_dict(),
                "state": state_to_dict(new_state),
                "status": session.status,
            }

    @app.delete("/sessions/{session_id}", status_code=204)
    def delete_session(session_id: str) -> Response:
        get_session(session_id)
        with registry_lock:
            sessions.pop(session_id, None)
        return Response(status_code=204)

    return app


def _top_candidates(
    scenario: Scenario, state: WorldState, orders, limit: int
) -> list[dict[str, Any]]:
    from .candidates import CandidateSequence, enumerate_assignments
    from .planner import score_candidate

    scored = []
    for order in orders:
        for assignment in enumerate_assignments(order, scenario):
            plan = score_candidate(
                scenario, state, CandidateSequence(order=order, assignments=assignment)
            )
            scored.append(plan)
    scored.sort(key=lambda p: (p.total_cost, p.order, p.assignments))
    return [p.to_dict() for p in scored[: max(limit, 0)]]
