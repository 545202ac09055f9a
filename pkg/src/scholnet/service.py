"""HTTP/JSON API over a loaded graph.

POST /simulate runs walkers for a stimulus set and returns the three ranked
layers. POST /sessions/{id}/refine re-stimulates with a kept subset of a
previous result under the same config. GET /nodes/{kind}:{key} exposes a
node's labeled out-edges for manual browsing.

Responses are deterministic functions of (graph, request): the session id is a
hash of the resolved request, and every ranking response carries the master
seed that produced it, so any result can be reproduced from the command line.
Sessions live in a bounded in-memory LRU; nothing is persisted.
"""

from __future__ import annotations

import hashlib
import json
import threading
from collections import OrderedDict
from dataclasses import dataclass

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field, field_validator

from .graph import EdgeLabel, MultiGraph, NodeId
from .walker import Stimulus, WalkerConfig, rank_solutions, simulate
from .workflows import DEFAULT_TOP, WORKFLOW_NAMES


class StimulusIn(BaseModel):
    node: str
    energy: float

    @field_validator("node")
    @classmethod
    def _node_parses(cls, value: str) -> str:
        NodeId.parse(value)  # raises ValueError on malformed references
        return value

    @field_validator("energy")
    @classmethod
    def _energy_in_range(cls, value: float) -> float:
        if value == 0.0 or not (-1.0 <= value <= 1.0):
            raise ValueError("energy must be a nonzero value in [-1, 1]")
        return value


class ConfigIn(BaseModel):
    delta: float = Field(default=0.15, ge=0.0, le=1.0)
    theta: float = Field(default=0.05, ge=0.0, le=1.0)
    walkers: int = Field(default=10000, ge=1)
    master_seed: int = 0
    label_multipliers: dict[str, float] | None = None

    @field_validator("label_multipliers")
    @classmethod
    def _labels_known(cls, value: dict[str, float] | None) -> dict[str, float] | None:
        if value is None:
            return None
        for name, mult in value.items():
            try:
                EdgeLabel(name)
            except ValueError:
                raise ValueError(f"unknown edge label {name!r}") from None
            if mult < 0:
                raise ValueError(f"multiplier for {name} must be >= 0")
        return value

    def to_walker_config(self) -> WalkerConfig:
        multipliers = {
            EdgeLabel(name): mult
            for name, mult in (self.label_multipliers or {}).items()
        }
        return WalkerConfig(
            delta=self.delta,
            theta=self.theta,
            walkers_per_stimulus=self.walkers,
            master_seed=self.master_seed,
            label_multipliers=multipliers,
        )


class SimulateRequest(BaseModel):
    stimuli: list[StimulusIn] = Field(min_length=1)
    config: ConfigIn = ConfigIn()
    workflow: str | None = None
    top: int | None = Field(default=None, ge=1)

    @field_validator("workflow")
    @classmethod
    def _workflow_known(cls, value: str | None) -> str | None:
        if value is not None and value not in WORKFLOW_NAMES:
            raise ValueError(f"unknown workflow {value!r}")
        return value


class RefineRequest(BaseModel):
    kept: list[str] = Field(min_length=1)


@dataclass
class SessionState:
    config: ConfigIn
    top: int
    result_nodes: set[str]


class SessionStore:
    """Bounded LRU of refinement sessions; access is serialized."""

    def __init__(self, capacity: int):
        self._capacity = capacity
        self._lock = threading.Lock()
        self._entries: "OrderedDict[str, SessionState]" = OrderedDict()

    def get(self, session_id: str) -> SessionState | None:
        with self._lock:
            state = self._entries.get(session_id)
            if state is not None:
                self._entries.move_to_end(session_id)
            return state

    def put(self, session_id: str, state: SessionState) -> None:
        with self._lock:
            self._entries[session_id] = state
            self._entries.move_to_end(session_id)
            while len(self._entries) > self._capacity:
                self._entries.popitem(last=False)


def _session_id(stimuli: list[StimulusIn], config: ConfigIn, top: int) -> str:
    canonical = json.dumps(
        {
            "stimuli": [{"node": s.node, "energy": s.energy} for s in stimuli],
            "config": config.model_dump(),
            "top": top,
        },
        sort_keys=True,
    )
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


def create_app(graph: MultiGraph, *, session_capacity: int = 1024) -> FastAPI:
    app = FastAPI(title="scholnet", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions = SessionStore(session_capacity)

    @app.exception_handler(RequestValidationError)
    async def _validation_as_400(request: Request, exc: RequestValidationError):
        detail = [
            {
                "loc": [str(part) for part in err.get("loc", ())],
                "msg": str(err.get("msg", "")),
                "type": str(err.get("type", "")),
            }
            for err in exc.errors()
        ]
        return JSONResponse(status_code=400, content={"detail": detail})

    def run_ranking(
        stimuli_in: list[StimulusIn], config: ConfigIn, top: int
    ) -> dict:
        stimuli: list[Stimulus] = []
        for s in stimuli_in:
            node = NodeId.parse(s.node)
            if not graph.has_node(node):
                raise HTTPException(status_code=422, detail=f"unknown node: {s.node}")
            stimuli.append(Stimulus(node, s.energy))
        cfg = config.to_walker_config()
        ranked = rank_solutions(simulate(graph, stimuli, cfg), stimuli)

        def rows(entries):
            return [
                {"node": str(n), "display": graph.display(n), "energy": e}
                for n, e in entries[:top]
            ]

        response = {
            "s_a": rows(ranked.s_a),
            "s_p": rows(ranked.s_p),
            "s_j": rows(ranked.s_j),
            "master_seed": config.master_seed,
        }
        session_id = _session_id(stimuli_in, config, top)
        response["session_id"] = session_id
        result_nodes = {
            row["node"]
            for key in ("s_a", "s_p", "s_j")
            for row in response[key]
        }
        sessions.put(session_id, SessionState(config, top, result_nodes))
        return response

    @app.post("/simulate")
    def post_simulate(request: SimulateRequest):
        top = request.top if request.top is not None else DEFAULT_TOP
        return run_ranking(request.stimuli, request.config, top)

    @app.post("/sessions/{session_id}/refine")
    def post_refine(session_id: str, request: RefineRequest):
        state = sessions.get(session_id)
        if state is None:
            raise HTTPException(status_code=404, detail=f"unknown session: {session_id}")
        for ref in request.kept:
            if ref not in state.result_nodes:
                raise HTTPException(
                    status_code=422,
                    detail=f"kept node not in previous results: {ref}",
                )
        stimuli = [StimulusIn(node=ref, energy=1.0) for ref in request.kept]
        return run_ranking(stimuli, state.config, state.top)

    @app.get("/nodes/{node_ref:path}")
    def get_node(node_ref: str, offset: int = 0, limit: int = 100):
        try:
            node = NodeId.parse(node_ref)
        except ValueError:
            raise HTTPException(status_code=404, detail=f"unknown node: {node_ref}") from None
        if not graph.has_node(node):
            raise HTTPException(status_code=404, detail=f"unknown node: {node_ref}")
        if offset < 0 or limit < 0:
            raise HTTPException(status_code=400, detail="offset/limit must be >= 0")
        all_edges = graph.out_edges(node)
        window = all_edges[offset : offset + limit]
        grouped: dict[str, list[dict]] = {}
        for e in window:
            grouped.setdefault(e.label.value, []).append(
                {
                    "node": str(e.dst),
                    "display": graph.display(e.dst),
                    "weight": e.weight,
                }
            )
        return {
            "node": str(node),
            "kind": node.kind.value,
            "key": node.key,
            "display": graph.display(node),
            "total_out_edges": len(all_edges),
            "offset": offset,
            "limit": limit,
            "edges": grouped,
        }

    return app
