"""Scripted counterpart agents for self-play.

Three deterministic temperaments share one skeleton: open at an anchored
self-score, adjust a target by simple concession rules, and propose the
feasible allocation nearest the target (ties go to the offer that is best for
the other side, so concessions trade the right issues). All accept checks are
meets-or-exceeds against a temperament-specific threshold.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from .domain import Offer, PreferenceProfile, Scenario
from .opponent import PreferenceStatement, Relation
from .oracle import Side, possible_max_score, score, scored_allocations


class PersonaKind(str, Enum):
    BASE = "base"
    GREEDY = "greedy"
    FAIR = "fair"


@dataclass(frozen=True)
class PersonaConfig:
    kind: PersonaKind = PersonaKind.BASE
    concession_step: Fraction = Fraction(2)
    fair_target_share: Fraction = Fraction(1, 2)
    rng_seed: int = 0
    anchor_fraction: Fraction | None = None
    floor_fraction: Fraction | None = None
    nudge_step: Fraction = Fraction(1)
    stall_patience: int = 4

    def __post_init__(self) -> None:
        if self.concession_step < 0:
            raise ValueError("concession_step must be >= 0")
        if not (0 < self.fair_target_share < 1):
            raise ValueError("fair_target_share must lie in (0,1)")

    def resolved_anchor(self) -> Fraction:
        if self.anchor_fraction is not None:
            return self.anchor_fraction
        return {
            PersonaKind.BASE: Fraction(3, 5),
            PersonaKind.GREEDY: Fraction(5, 6),
            PersonaKind.FAIR: Fraction(2, 3),
        }[self.kind]

    def resolved_floor(self) -> Fraction:
        if self.floor_fraction is not None:
            return self.floor_fraction
        return {
            PersonaKind.BASE: Fraction(1, 2),
            PersonaKind.GREEDY: Fraction(2, 3),
            PersonaKind.FAIR: self.fair_target_share,
        }[self.kind]


class ActionKind(str, Enum):
    OPEN = "open"
    STATEMENTS = "statements"
    OFFER = "offer"
    ACCEPT = "accept"
    WALK = "walk"


@dataclass(frozen=True)
class PersonaAction:
    kind: ActionKind
    offer: Offer | None = None
    statements: tuple[PreferenceStatement, ...] = ()


@dataclass(frozen=True)
class SessionView:
    """What the counterpart can see: the public exchange, from its side."""

    scenario: Scenario
    turn: int
    incoming_question: str | None = None  # "highest" | "lowest"
    incoming_offer: Offer | None = None   # agent's offer, agent perspective
    counterpart_conceded: bool = False    # agent's latest offer gave us more than its previous


def nearest_offer(
    scenario: Scenario,
    prefs: PreferenceProfile,
    other_prefs: PreferenceProfile,
    target: Fraction,
) -> Offer:
    """Feasible allocation with self-score nearest the target; ties prefer a
    higher counterpart score, then the lexicographically greatest claims."""
    best_key: tuple | None = None
    best: Offer | None = None
    for offer, s_self, s_other in scored_allocations(scenario, prefs, other_prefs):
        key = (abs(s_self - target), -s_other, tuple(-x for x in offer.key_for(scenario)))
        if best_key is None or key < best_key:
            best_key = key
            best = offer
    assert best is not None
    return best


class Persona:
    """Deterministic counterpart. State: the current target self-score plus
    stall bookkeeping; replaying the same session reproduces it exactly."""

    def __init__(self, config: PersonaConfig, scenario: Scenario):
        self.config = config
        self.scenario = scenario
        self.prefs = scenario.partner_prefs_true
        self.other_prefs = scenario.agent_prefs
        self.pms = possible_max_score(scenario, self.prefs)
        self.anchor = Fraction(round(config.resolved_anchor() * self.pms))
        self.floor = Fraction(round(config.resolved_floor() * self.pms))
        self.target: Fraction = self.anchor
        self.own_offers: list[Offer] = []
        self.own_scores: list[Fraction] = []
        self.stalls = 0

    # -- scripted knowledge ---------------------------------------------------
    def answer(self, question: str, turn: int) -> PersonaAction:
        names = self.scenario.issue_names()
        if question == "highest":
            issue = max(names, key=lambda i: (self.prefs.weight(i), -names.index(i)))
            stmt = PreferenceStatement(issue, Relation.HIGHEST, source_turn=turn)
        else:
            issue = min(names, key=lambda i: (self.prefs.weight(i), names.index(i)))
            stmt = PreferenceStatement(issue, Relation.LOWEST, source_turn=turn)
        return PersonaAction(ActionKind.STATEMENTS, statements=(stmt,))

    # -- accept thresholds ----------------------------------------------------
    def _accept_threshold(self) -> Fraction | None:
        if self.config.kind is PersonaKind.FAIR:
            return self.config.fair_target_share * self.pms
        return self.own_scores[-1] if self.own_scores else None

    # -- concession rules -----------------------------------------------------
    def _advance_target(self, counterpart_conceded: bool) -> None:
        kind = self.config.kind
        if not self.own_offers:
            return  # first offer is the anchor
        if kind is PersonaKind.FAIR:
            self.target = max(self.floor, self.target - self.config.concession_step)
            return
        if kind is PersonaKind.GREEDY:
            if counterpart_conceded:
                self.stalls = 0
                return
            self.stalls += 1
            if self.stalls >= self.config.stall_patience:
                self.target = max(self.floor, self.target - self.config.nudge_step)
                self.stalls = 0
            return
        # base: reciprocate; after holding once, nudge a point per stalled
        # exchange down to the floor
        if counterpart_conceded:
            self.target = max(self.floor, self.target - self.config.concession_step)
            self.stalls = 0
        else:
            self.stalls += 1
            if self.stalls >= 2:
                self.target = max(self.floor, self.target - self.config.nudge_step)

    def respond(self, view: SessionView) -> PersonaAction:
        if view.turn == 0 and view.incoming_offer is None and view.incoming_question is None:
            return PersonaAction(ActionKind.OPEN)
        if view.incoming_question is not None:
            return self.answer(view.incoming_question, view.turn)
        my_score: Fraction | None = None
        if view.incoming_offer is not None:
            my_score = score(
                view.incoming_offer, self.scenario, self.prefs, Side.COUNTERPART,
                validate=False,
            )
            threshold = self._accept_threshold()
            if threshold is not None and my_score >= threshold:
                return PersonaAction(ActionKind.ACCEPT)
        self._advance_target(view.counterpart_conceded)
        offer = nearest_offer(self.scenario, self.prefs, self.other_prefs, self.target)
        next_self = score(offer, self.scenario, self.prefs, Side.PROPOSER, validate=False)
        if my_score is not None and my_score >= next_self:
            # the standing offer already beats what we were about to counter with
            return PersonaAction(ActionKind.ACCEPT)
        self.own_offers.append(offer)
        self.own_scores.append(next_self)
        return PersonaAction(ActionKind.OFFER, offer=offer)


def make_persona(config: PersonaConfig, scenario: Scenario) -> Persona:
    return Persona(config, scenario)
