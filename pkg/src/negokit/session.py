"""Agent-side session state and the turn step shared by the simulator and the
coaching service.

The event log is the source of truth: replaying a session's committed events
through a fresh AgentSession reconstructs the live state exactly.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .domain import (
    EngineConfig,
    Offer,
    Scenario,
    offer_from_json,
    validate_offer,
)
from .engine import StageTrace, SupportsJudge, TurnView, run_pipeline
from .opponent import (
    IPPState,
    IPPStatus,
    PreferenceStatement,
    check_consistency,
    infer_profile,
    next_question,
    update_ipp,
)
from .oracle import Side, possible_max_score, score
from .policy import Mode, PolicyState, choose_mode
from .rational import to_wire


class AgentMoveKind(str, Enum):
    ASK = "ask"
    OFFER = "offer"
    ACCEPT = "accept"
    WALK = "walk"


@dataclass(frozen=True)
class AgentMove:
    kind: AgentMoveKind
    offer: Offer | None = None
    ask: str | None = None
    reason: str = ""
    warn: bool = False
    trace: StageTrace | None = None


@dataclass(frozen=True)
class PartnerEvent:
    """One incoming counterpart move: an offer and/or structured statements."""

    offer: Offer | None = None
    statements: tuple[PreferenceStatement, ...] = ()

    @staticmethod
    def from_json(data: dict, scenario: Scenario) -> "PartnerEvent":
        offer = None
        if data.get("offer") is not None:
            offer = offer_from_json(data["offer"], scenario)
        statements = tuple(
            PreferenceStatement.from_json(s) for s in data.get("statements", ())
        )
        return PartnerEvent(offer=offer, statements=statements)


class AgentSession:
    """Dialogue history, inferred partner preferences, and policy counters for
    one negotiation, advanced one committed event at a time."""

    def __init__(self, scenario: Scenario, config: EngineConfig,
                 adapter: SupportsJudge | None = None):
        self.scenario = scenario
        self.config = config
        self.adapter = adapter
        self.own_prefs = scenario.agent_prefs
        self.pms_own = possible_max_score(scenario, self.own_prefs)
        self.statements: list[PreferenceStatement] = []
        self.ipp = IPPState(profile=None, statements=(), status=IPPStatus.ABSENT)
        self.own_offers: list[tuple[int, Offer]] = []
        self.partner_offers: list[tuple[int, Offer]] = []
        self.asked_highest = False
        self.asked_lowest = False
        self.turn = 0
        self.events: list[dict] = []
        self.last_trace: StageTrace | None = None
        self.closed = False
        self.outcome: dict | None = None

    # -- derived views --------------------------------------------------------
    def value_set(self) -> tuple[Fraction, ...]:
        return tuple(self.own_prefs.weight(n) for n in self.scenario.issue_names())

    def own_scores(self) -> list[Fraction]:
        return [
            score(o, self.scenario, self.own_prefs, Side.PROPOSER, validate=False)
            for _, o in self.own_offers
        ]

    def partner_self_scores(self) -> list[Fraction]:
        profile = self.ipp.profile
        if profile is None:
            return []
        return [
            score(o, self.scenario, profile, Side.PROPOSER, validate=False)
            for _, o in self.partner_offers
        ]

    def partner_agent_scores(self) -> list[Fraction]:
        return [
            score(o, self.scenario, self.own_prefs, Side.COUNTERPART, validate=False)
            for _, o in self.partner_offers
        ]

    def batna(self) -> Fraction:
        return self.config.resolved_batna(self.pms_own)

    def policy_state(self) -> PolicyState:
        return PolicyState.from_histories(
            self.own_scores(),
            self.partner_self_scores(),
            self.partner_agent_scores(),
            self.batna(),
            self.turn,
        )

    def turn_view(self) -> TurnView:
        return TurnView(
            own_scores=tuple(self.own_scores()),
            partner_self_scores=tuple(self.partner_self_scores()),
            partner_agent_scores=tuple(self.partner_agent_scores()),
        )

    # -- event application ----------------------------------------------------
    def _log(self, event: dict) -> None:
        self.events.append(event)

    def _ensure_ipp(self) -> None:
        if self.statements:
            self.ipp = update_ipp(
                self.ipp, self.statements, self.own_offers, self.partner_offers,
                self.value_set(), self.own_prefs, self.scenario,
            )
        else:
            self.ipp = infer_profile((), self.value_set(), self.own_prefs, self.scenario)

    def observe_partner(self, event: PartnerEvent) -> None:
        """Commit one counterpart move into history (statements first, then
        the offer, then the consistency check and any re-inference)."""
        if self.closed:
            raise SessionClosedError("session already closed")
        if event.offer is not None:
            violations = validate_offer(event.offer, self.scenario)
            if violations:
                raise InvalidPartnerOfferError(violations)
        if event.offer is None and not event.statements:
            self._log({"type": "mode", "by": "partner", "turn": self.turn,
                       "mode": "open"})
        for stmt in event.statements:
            self.statements.append(stmt)
            self._log({"type": "statement", "by": "partner", **stmt.to_json(),
                       "turn": self.turn})
        if event.statements or self.ipp.profile is None:
            self._ensure_ipp()
        if event.offer is not None:
            self.partner_offers.append((self.turn, event.offer))
            self._log({
                "type": "offer", "by": "partner", "turn": self.turn,
                "claims": dict(event.offer.claims),
            })
            violation = check_consistency(
                self.ipp, self.own_offers, self.partner_offers,
                self.statements, self.scenario,
            )
            if violation is not None:
                self._log({"type": "mode", "by": "agent", "turn": self.turn,
                           "mode": "consistency-check", "reason": violation.detail})
                self.ipp = update_ipp(
                    self.ipp, self.statements, self.own_offers, self.partner_offers,
                    self.value_set(), self.own_prefs, self.scenario,
                )
        self.turn += 1

    def decide(self) -> AgentMove:
        """Pick this turn's move without committing it."""
        if self.closed:
            raise SessionClosedError("session already closed")
        if self.turn >= self.scenario.max_turns:
            return AgentMove(AgentMoveKind.WALK, reason="turn cap reached", warn=False)
        question = next_question(
            IPPState(profile=self.ipp.profile, statements=tuple(self.statements),
                     status=self.ipp.status),
            self.scenario, self.value_set(),
            asked_highest=self.asked_highest, asked_lowest=self.asked_lowest,
        )
        decision = choose_mode(
            self.policy_state(),
            self.batna(),
            ranking_pinned=question is None,
            questions_remaining=question is not None,
            partner_offer_pending=bool(self.partner_offers)
            and self.partner_offers[-1][0] == self.turn - 1,
        )
        if decision.mode is Mode.ASK_PREFERENCE and question is not None:
            return AgentMove(AgentMoveKind.ASK, ask=question.ask, reason=decision.reason)
        if decision.mode is Mode.ACCEPT:
            return AgentMove(AgentMoveKind.ACCEPT, reason=decision.reason)
        if decision.mode is Mode.WALK_AWAY:
            return AgentMove(AgentMoveKind.WALK, reason=decision.reason)
        if self.ipp.profile is None:
            self._ensure_ipp()
        trace = run_pipeline(
            self.scenario, self.config, self.own_prefs, self.ipp.profile,
            self.turn_view(), self.turn, self.adapter,
        )
        if trace.infeasible or trace.selected is None:
            return AgentMove(AgentMoveKind.WALK,
                             reason="no feasible counteroffer", trace=trace)
        return AgentMove(
            AgentMoveKind.OFFER, offer=trace.selected.offer,
            reason=decision.reason, warn=decision.warn, trace=trace,
        )

    def _questions_open(self) -> bool:
        return not (self.asked_highest and self.asked_lowest)

    def commit_move(self, move: AgentMove) -> None:
        """Commit the agent's (or the human's) actual move."""
        if self.closed:
            raise SessionClosedError("session already closed")
        if move.kind is AgentMoveKind.ASK:
            if move.ask == "highest":
                self.asked_highest = True
            else:
                self.asked_lowest = True
            self._log({"type": "mode", "by": "agent", "turn": self.turn,
                       "mode": Mode.ASK_PREFERENCE.value, "ask": move.ask,
                       "reason": move.reason})
        elif move.kind is AgentMoveKind.OFFER:
            assert move.offer is not None
            violations = validate_offer(move.offer, self.scenario)
            if violations:
                raise InvalidPartnerOfferError(violations)
            self._log({"type": "mode", "by": "agent", "turn": self.turn,
                       "mode": Mode.PROPOSE_OFFER.value, "reason": move.reason,
                       "warn": move.warn})
            if move.trace is not None:
                self.last_trace = move.trace
                self._log({"type": "stage-trace", "turn": self.turn,
                           "trace": move.trace.to_json()})
            self.own_offers.append((self.turn, move.offer))
            self._log({"type": "offer", "by": "agent", "turn": self.turn,
                       "claims": dict(move.offer.claims)})
        elif move.kind is AgentMoveKind.ACCEPT:
            self._log({"type": "mode", "by": "agent", "turn": self.turn,
                       "mode": Mode.ACCEPT.value, "reason": move.reason})
        else:
            self._log({"type": "mode", "by": "agent", "turn": self.turn,
                       "mode": Mode.WALK_AWAY.value, "reason": move.reason})
        self.turn += 1

    # -- preview and reconstruction -------------------------------------------
    def clone(self) -> "AgentSession":
        twin = AgentSession(self.scenario, self.config, self.adapter)
        twin.statements = list(self.statements)
        twin.ipp = self.ipp
        twin.own_offers = list(self.own_offers)
        twin.partner_offers = list(self.partner_offers)
        twin.asked_highest = self.asked_highest
        twin.asked_lowest = self.asked_lowest
        twin.turn = self.turn
        twin.events = copy.deepcopy(self.events)
        twin.last_trace = self.last_trace
        twin.closed = self.closed
        twin.outcome = copy.deepcopy(self.outcome)
        return twin

    def snapshot(self) -> dict:
        """Comparable view of all state (used to verify event-log rebuilds)."""
        return {
            "statements": [s.to_json() for s in self.statements],
            "ipp_status": self.ipp.status.value,
            "ipp_weights": (
                {k: to_wire(v) for k, v in self.ipp.profile.weights.items()}
                if self.ipp.profile else None
            ),
            "own_offers": [(t, dict(o.claims)) for t, o in self.own_offers],
            "partner_offers": [(t, dict(o.claims)) for t, o in self.partner_offers],
            "asked": [self.asked_highest, self.asked_lowest],
            "turn": self.turn,
            "closed": self.closed,
            "outcome": self.outcome,
        }

    @staticmethod
    def replay(scenario: Scenario, config: EngineConfig, events: Sequence[dict],
               adapter: SupportsJudge | None = None) -> "AgentSession":
        """Rebuild a session from its committed event log."""
        session = AgentSession(scenario, config, adapter)
        pending_statements: list[PreferenceStatement] = []
        for event in events:
            etype = event.get("type")
            by = event.get("by")
            if etype == "statement" and by == "partner":
                pending_statements.append(PreferenceStatement.from_json(event))
            elif etype == "offer" and by == "partner":
                session.observe_partner(
                    PartnerEvent(
                        offer=offer_from_json({"claims": event["claims"]}, scenario),
                        statements=tuple(pending_statements),
                    )
                )
                pending_statements = []
            elif etype == "mode" and by == "partner":
                if event.get("mode") == "open" and not pending_statements:
                    session.observe_partner(PartnerEvent())
            elif etype == "mode" and by == "agent":
                if pending_statements:
                    session.observe_partner(PartnerEvent(statements=tuple(pending_statements)))
                    pending_statements = []
                mode = event.get("mode")
                if mode == Mode.ASK_PREFERENCE.value:
                    session.commit_move(AgentMove(AgentMoveKind.ASK, ask=event.get("ask"),
                                                  reason=event.get("reason", "")))
                elif mode == Mode.PROPOSE_OFFER.value:
                    pass  # offer event follows and carries the claims
                elif mode == Mode.ACCEPT.value:
                    session.commit_move(AgentMove(AgentMoveKind.ACCEPT,
                                                  reason=event.get("reason", "")))
                elif mode == Mode.WALK_AWAY.value:
                    session.commit_move(AgentMove(AgentMoveKind.WALK,
                                                  reason=event.get("reason", "")))
            elif etype == "offer" and by == "agent":
                offer = offer_from_json({"claims": event["claims"]}, scenario)
                session.commit_move(AgentMove(AgentMoveKind.OFFER, offer=offer))
            elif etype == "outcome":
                session.closed = True
                session.outcome = dict(event)
        if pending_statements:
            session.observe_partner(PartnerEvent(statements=tuple(pending_statements)))
        return session

    def close(self, outcome: dict) -> None:
        self.outcome = outcome
        self.closed = True
        self._log(outcome)


class SessionClosedError(RuntimeError):
    pass


class InvalidPartnerOfferError(ValueError):
    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations
