"""Exact scoring, allocation enumeration, and the Pareto-frontier oracle.

Everything here is deliberately brute force: these functions are the ground
truth that the optimizer and the simulator are checked against, so they stay
simple, exhaustive, and exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from typing import Iterable

from .domain import IssueKind, Offer, PreferenceProfile, Scenario, validate_offer

ENUMERATION_CAP = 10_000_000


class Side(str, Enum):
    PROPOSER = "proposer"
    COUNTERPART = "counterpart"


class InvalidOfferError(ValueError):
    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


class SpaceTooLargeError(ValueError):
    pass


@dataclass(frozen=True)
class ScorePair:
    agent: Fraction
    partner: Fraction

    def dominates(self, other: "ScorePair") -> bool:
        return (
            self.agent >= other.agent
            and self.partner >= other.partner
            and (self.agent > other.agent or self.partner > other.partner)
        )


def score(
    offer: Offer,
    scenario: Scenario,
    prefs: PreferenceProfile,
    side: Side = Side.PROPOSER,
    validate: bool = True,
) -> Fraction:
    """Points the given side earns from this offer under `prefs`.

    Allocated issues pay units x weight for whoever keeps the units; shared
    categorical issues pay weight x option multiplier to both parties; shared
    binary issues pay the weight to both parties only when switched on.
    """
    if validate:
        violations = validate_offer(offer, scenario)
        if violations:
            raise InvalidOfferError(violations)
    total = Fraction(0)
    for spec in scenario.issues:
        value = offer.claims[spec.name]
        w = prefs.weight(spec.name)
        if spec.kind is IssueKind.ALLOCATED:
            units = int(value) if side is Side.PROPOSER else spec.max_units - int(value)
            total += w * units
        elif spec.kind is IssueKind.CATEGORICAL:
            total += w * prefs.multiplier(spec.name, value)
        else:
            if value:
                total += w
    return total


def possible_max_score(scenario: Scenario, prefs: PreferenceProfile) -> Fraction:
    """Score of the allocation granting this party every allocated unit it can
    keep plus its best shared-issue choices."""
    total = Fraction(0)
    for spec in scenario.issues:
        w = prefs.weight(spec.name)
        if spec.kind is IssueKind.ALLOCATED:
            total += w * (spec.max_units - spec.min_units)
        elif spec.kind is IssueKind.CATEGORICAL:
            total += w * max(prefs.multiplier(spec.name, opt) for opt in spec.options)
        else:
            total += w
    return total


_ALLOCATION_CACHE: dict[tuple, tuple[Offer, ...]] = {}


def enumerate_allocations(scenario: Scenario, cap: int = ENUMERATION_CAP) -> tuple[Offer, ...]:
    """Every feasible allocation exactly once, lexicographic by issue
    declaration order with ascending values."""
    key = scenario.key()
    cached = _ALLOCATION_CACHE.get(key)
    if cached is not None:
        return cached
    domains = [spec.domain() for spec in scenario.issues]
    size = 1
    for d in domains:
        size *= len(d)
        if size > cap:
            raise SpaceTooLargeError(
                f"{scenario.scenario_id}: allocation space exceeds cap ({cap})"
            )
    names = scenario.issue_names()
    allocations = tuple(
        Offer(dict(zip(names, combo))) for combo in product(*domains)
    )
    _ALLOCATION_CACHE[key] = allocations
    return allocations


_SCORE_CACHE: dict[tuple, tuple[tuple[Offer, Fraction, Fraction], ...]] = {}


def scored_allocations(
    scenario: Scenario,
    own_prefs: PreferenceProfile,
    other_prefs: PreferenceProfile,
) -> tuple[tuple[Offer, Fraction, Fraction], ...]:
    """(allocation, proposer score, counterpart score) for the whole space."""
    key = (scenario.key(), own_prefs.key(), other_prefs.key())
    cached = _SCORE_CACHE.get(key)
    if cached is not None:
        return cached
    rows = tuple(
        (
            offer,
            score(offer, scenario, own_prefs, Side.PROPOSER, validate=False),
            score(offer, scenario, other_prefs, Side.COUNTERPART, validate=False),
        )
        for offer in enumerate_allocations(scenario)
    )
    _SCORE_CACHE[key] = rows
    return rows


def argmax_scalarized(
    scenario: Scenario,
    own_prefs: PreferenceProfile,
    other_prefs: PreferenceProfile,
    lam: Fraction,
    s_max: Fraction,
    s_min_agent: Fraction,
    s_min_partner: Fraction,
) -> Offer | None:
    """Exhaustive argmax of s_a + (1 - lam) * s_p over the constrained space.

    Tie-break: higher own score, then lexicographically greatest claim tuple
    in issue declaration order. This is the independent check for the
    branch-and-bound optimizer; keep it a plain scan.
    """
    mu = 1 - lam
    best: tuple[Fraction, Fraction, tuple] | None = None
    best_offer: Offer | None = None
    for offer, s_a, s_p in scored_allocations(scenario, own_prefs, other_prefs):
        if not (s_min_agent <= s_a <= s_max) or s_p < s_min_partner:
            continue
        key = (s_a + mu * s_p, s_a, offer.key_for(scenario))
        if best is None or key > best:
            best = key
            best_offer = offer
    return best_offer


def pareto_frontier(
    scenario: Scenario,
    agent_prefs: PreferenceProfile,
    partner_prefs: PreferenceProfile,
) -> tuple[tuple[Offer, ScorePair], ...]:
    """Exact dominance filter over the full feasible allocation set.

    A member's score pair is not weakly worse than any other allocation's in
    both coordinates with one strict. Allocations sharing a non-dominated
    score pair are all members.
    """
    rows = scored_allocations(scenario, agent_prefs, partner_prefs)
    pairs = sorted({(s_a, s_p) for _, s_a, s_p in rows}, key=lambda p: (-p[0], -p[1]))
    frontier_pairs: set[tuple[Fraction, Fraction]] = set()
    best_partner: Fraction | None = None
    for s_a, s_p in pairs:
        if best_partner is None or s_p > best_partner:
            frontier_pairs.add((s_a, s_p))
            best_partner = s_p
    return tuple(
        (offer, ScorePair(s_a, s_p))
        for offer, s_a, s_p in rows
        if (s_a, s_p) in frontier_pairs
    )


def frontier_distance(
    pair: ScorePair, frontier: Iterable[tuple[Offer, ScorePair]]
) -> Fraction:
    """Min Chebyshev distance in score space to a frontier point."""
    best: Fraction | None = None
    for _, member in frontier:
        d = max(abs(pair.agent - member.agent), abs(pair.partner - member.partner))
        if best is None or d < best:
            best = d
    if best is None:
        raise ValueError("empty frontier")
    return best


def is_pareto_member(pair: ScorePair, frontier: Iterable[tuple[Offer, ScorePair]]) -> bool:
    return any(member.agent == pair.agent and member.partner == pair.partner
               for _, member in frontier)


def clear_caches() -> None:
    _ALLOCATION_CACHE.clear()
    _SCORE_CACHE.clear()
