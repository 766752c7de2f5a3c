"""Coaching service: interactive sessions over HTTP/JSON.

The human (or the browser UI) feeds in the counterpart's offers and
statements; the service answers with the full stage trace and a recommended
move. Advice is a pure preview; only commits advance the session, and the
per-session event journal can reconstruct the state exactly.
"""

from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from fastapi import Body, FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .adapter import adapter_from_config
from .domain import (
    config_from_json,
    config_to_json,
    scenario_from_json,
    scenario_to_json,
    validate_offer,
)
from .oracle import Side, frontier_distance, is_pareto_member, pareto_frontier, score, ScorePair
from .rational import dumps_wire, to_wire
from .session import (
    AgentMove,
    AgentMoveKind,
    AgentSession,
    InvalidPartnerOfferError,
    PartnerEvent,
    SessionClosedError,
)


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, details: list | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.details = details or []

    def response(self) -> JSONResponse:
        return JSONResponse(
            status_code=self.status,
            content={"error": {"code": self.code, "message": self.message,
                               "details": self.details}},
        )


@dataclass
class SessionRecord:
    session: AgentSession
    lock: threading.RLock = field(default_factory=threading.RLock)
    journal_path: Path | None = None
    flushed: int = 0


class SessionStore:
    def __init__(self, journal_dir: str | None = None):
        self._records: dict[str, SessionRecord] = {}
        self._guard = threading.Lock()
        self.journal_dir = Path(journal_dir) if journal_dir else None
        if self.journal_dir:
            self.journal_dir.mkdir(parents=True, exist_ok=True)

    def create(self, session: AgentSession) -> str:
        session_id = uuid.uuid4().hex
        journal = self.journal_dir / f"{session_id}.jsonl" if self.journal_dir else None
        with self._guard:
            self._records[session_id] = SessionRecord(session=session, journal_path=journal)
        return session_id

    def get(self, session_id: str) -> SessionRecord:
        with self._guard:
            record = self._records.get(session_id)
        if record is None:
            raise ApiError(404, "not-found", f"unknown session {session_id}")
        return record

    def flush_journal(self, record: SessionRecord) -> None:
        if record.journal_path is None:
            return
        events = record.session.events
        if record.flushed >= len(events):
            return
        with record.journal_path.open("a", encoding="utf-8") as handle:
            for event in events[record.flushed:]:
                handle.write(dumps_wire(event) + "\n")
        record.flushed = len(events)


def _advice_payload(session: AgentSession, move: AgentMove) -> dict:
    payload: dict[str, Any] = {
        "mode": {
            AgentMoveKind.ASK: "ask-preference",
            AgentMoveKind.OFFER: "propose-offer",
            AgentMoveKind.ACCEPT: "accept",
            AgentMoveKind.WALK: "walk-away",
        }[move.kind],
        "reason": move.reason,
        "warn": move.warn,
    }
    if move.kind is AgentMoveKind.ASK:
        payload["ask"] = move.ask
    if move.trace is not None:
        payload["trace"] = move.trace.to_json()
    if move.offer is not None:
        payload["recommended"] = {"claims": dict(move.offer.claims)}
    if session.ipp.profile is not None:
        payload["ipp"] = {
            "status": session.ipp.status.value,
            "weights": {k: to_wire(v) for k, v in session.ipp.profile.weights.items()},
        }
    return payload


def _move_from_json(data: dict, session: AgentSession) -> AgentMove:
    kind = data.get("type")
    if kind == "offer":
        if "offer" not in data or "claims" not in data.get("offer", {}):
            raise ApiError(400, "validation", "offer move needs offer.claims")
        from .domain import offer_from_json

        offer = offer_from_json(data["offer"], session.scenario)
        violations = validate_offer(offer, session.scenario)
        if violations:
            raise ApiError(400, "validation", "invalid offer", violations)
        # the trace records what was advised for this turn, even when the
        # committed offer is a human override
        trace = run_trace_for(session)
        return AgentMove(AgentMoveKind.OFFER, offer=offer, reason=data.get("reason", ""),
                         trace=trace)
    if kind == "accept":
        return AgentMove(AgentMoveKind.ACCEPT, reason=data.get("reason", "accepted"))
    if kind == "walk-away":
        return AgentMove(AgentMoveKind.WALK, reason=data.get("reason", "walked away"))
    if kind == "ask":
        ask = data.get("ask", "highest")
        if ask not in ("highest", "lowest"):
            raise ApiError(400, "validation", f"unknown ask kind {ask!r}")
        return AgentMove(AgentMoveKind.ASK, ask=ask, reason=data.get("reason", ""))
    raise ApiError(400, "validation", f"unknown move type {kind!r}")


def run_trace_for(session: AgentSession):
    from .engine import run_pipeline

    if session.ipp.profile is None:
        session._ensure_ipp()
    return run_pipeline(
        session.scenario, session.config, session.own_prefs, session.ipp.profile,
        session.turn_view(), session.turn, session.adapter,
    )


def _outcome_for(session: AgentSession, move: AgentMove) -> dict | None:
    scenario = session.scenario
    if move.kind is AgentMoveKind.ACCEPT:
        if not session.partner_offers:
            raise ApiError(409, "conflict", "nothing to accept: no partner offer yet")
        final = session.partner_offers[-1][1]
        agent = score(final, scenario, scenario.agent_prefs, Side.COUNTERPART, validate=False)
        partner = score(final, scenario, scenario.partner_prefs_true, Side.PROPOSER,
                        validate=False)
        return {"type": "outcome", "result": "agreement", "accepted_by": "agent",
                "proposer": "partner", "final_claims": dict(final.claims),
                "turns": session.turn + 1,
                "agent_score": to_wire(agent), "partner_score": to_wire(partner)}
    if move.kind is AgentMoveKind.WALK:
        return {"type": "outcome", "result": "walk-away", "walked_by": "agent",
                "forced": False, "turns": session.turn + 1,
                "agent_score": "0", "partner_score": "0"}
    return None


def create_app(journal_dir: str | None = None, static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="negokit coach", version="0.1.0")
    store = SessionStore(journal_dir)
    app.state.store = store

    @app.exception_handler(ApiError)
    async def _api_error(_: Request, error: ApiError) -> JSONResponse:
        return error.response()

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    @app.post("/sessions")
    def create_session(payload: dict = Body(...)) -> JSONResponse:
        if "scenario" not in payload:
            raise ApiError(400, "validation", "missing scenario")
        try:
            scenario = scenario_from_json(payload["scenario"])
        except (KeyError, ValueError, TypeError) as error:
            raise ApiError(400, "validation", "malformed scenario", [str(error)])
        try:
            config = config_from_json(payload.get("config", {}))
        except (KeyError, ValueError, TypeError) as error:
            raise ApiError(400, "validation", "malformed config", [str(error)])
        adapter = adapter_from_config(config.adapter_url, config.adapter_timeout,
                                      config.adapter_retries)
        session = AgentSession(scenario, config, adapter)
        session_id = store.create(session)
        return JSONResponse({
            "session_id": session_id,
            "config": config_to_json(config),
            "scenario": scenario_to_json(scenario),
        })

    def _parse_partner_event(payload: dict, session: AgentSession) -> PartnerEvent | None:
        if not payload:
            return PartnerEvent()
        if payload.get("offer") is None and not payload.get("statements"):
            return PartnerEvent()
        try:
            event = PartnerEvent.from_json(payload, session.scenario)
        except (KeyError, ValueError, TypeError) as error:
            raise ApiError(400, "validation", "malformed partner event", [str(error)])
        if event.offer is not None:
            violations = validate_offer(event.offer, session.scenario)
            if violations:
                raise ApiError(400, "validation", "invalid offer", violations)
        return event

    @app.post("/sessions/{session_id}/advise")
    def advise(session_id: str, payload: dict = Body(default={})) -> JSONResponse:
        record = store.get(session_id)
        with record.lock:
            if record.session.closed:
                raise ApiError(409, "conflict", "session is closed")
            preview = record.session.clone()
            event = _parse_partner_event(payload, preview)
            try:
                if event is not None and (event.offer or event.statements):
                    preview.observe_partner(event)
                elif not preview.events:
                    preview.observe_partner(PartnerEvent())
                move = preview.decide()
            except InvalidPartnerOfferError as error:
                raise ApiError(400, "validation", "invalid offer", error.violations)
            return JSONResponse(_advice_payload(preview, move))

    @app.post("/sessions/{session_id}/commit")
    def commit(session_id: str, payload: dict = Body(...)) -> JSONResponse:
        record = store.get(session_id)
        with record.lock:
            session = record.session
            if session.closed:
                raise ApiError(409, "conflict", "session is closed")
            partner_payload = payload.get("partner_event") or {}
            event = _parse_partner_event(partner_payload, session) if partner_payload else None
            if "move" not in payload:
                raise ApiError(400, "validation", "missing move")
            try:
                if event is not None:
                    session.observe_partner(event)
                elif not session.events:
                    session.observe_partner(PartnerEvent())
                move = _move_from_json(payload["move"], session)
                outcome = _outcome_for(session, move)
                session.commit_move(move)
            except InvalidPartnerOfferError as error:
                raise ApiError(400, "validation", "invalid offer", error.violations)
            except SessionClosedError:
                raise ApiError(409, "conflict", "session is closed")
            if outcome is not None:
                session.close(outcome)
            store.flush_journal(record)
            summary = {
                "session_id": session_id,
                "turn": session.turn,
                "own_offer_count": len(session.own_offers),
                "partner_offer_count": len(session.partner_offers),
                "own_last_score": (
                    to_wire(session.own_scores()[-1]) if session.own_offers else None
                ),
                "closed": session.closed,
            }
            if outcome is not None:
                summary["outcome"] = outcome
            return JSONResponse(summary)

    @app.get("/sessions/{session_id}/report")
    def report(session_id: str) -> JSONResponse:
        record = store.get(session_id)
        with record.lock:
            session = record.session
            scenario = session.scenario
            frontier = pareto_frontier(scenario, scenario.agent_prefs,
                                       scenario.partner_prefs_true)
            frontier_json = [
                {"claims": dict(offer.claims), "agent": to_wire(pair.agent),
                 "partner": to_wire(pair.partner)}
                for offer, pair in frontier
            ]
            offers = []
            for kind, turn, offer in (
                [("agent", t, o) for t, o in session.own_offers]
                + [("partner", t, o) for t, o in session.partner_offers]
            ):
                if kind == "agent":
                    pair = ScorePair(
                        score(offer, scenario, scenario.agent_prefs, Side.PROPOSER,
                              validate=False),
                        score(offer, scenario, scenario.partner_prefs_true,
                              Side.COUNTERPART, validate=False),
                    )
                else:
                    pair = ScorePair(
                        score(offer, scenario, scenario.agent_prefs, Side.COUNTERPART,
                              validate=False),
                        score(offer, scenario, scenario.partner_prefs_true,
                              Side.PROPOSER, validate=False),
                    )
                offers.append({
                    "by": kind, "turn": turn, "claims": dict(offer.claims),
                    "agent": to_wire(pair.agent), "partner": to_wire(pair.partner),
                    "member": is_pareto_member(pair, frontier),
                    "distance": to_wire(frontier_distance(pair, frontier)),
                })
            offers.sort(key=lambda o: o["turn"])
            traces = [e["trace"] for e in session.events if e.get("type") == "stage-trace"]
            return JSONResponse({
                "session_id": session_id,
                "scenario": scenario_to_json(scenario),
                "config": config_to_json(session.config),
                "events": session.events,
                "traces": traces,
                "frontier": frontier_json,
                "offers": offers,
                "outcome": session.outcome,
                "closed": session.closed,
            })

    if static_dir:
        app.mount("/ui", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
