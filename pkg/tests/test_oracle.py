from __future__ import annotations

import random
from fractions import Fraction

import pytest

from negokit.domain import IssueKind, IssueSpec, Offer, PreferenceProfile, Scenario
from negokit.oracle import (
    InvalidOfferError,
    ScorePair,
    Side,
    SpaceTooLargeError,
    enumerate_allocations,
    frontier_distance,
    is_pareto_member,
    pareto_frontier,
    possible_max_score,
    score,
)


def test_campsite_scores(integrative):
    offer = Offer({"food": 3, "water": 3, "firewood": 1})
    assert score(offer, integrative, integrative.agent_prefs, Side.PROPOSER) == 30
    assert score(offer, integrative, integrative.partner_prefs_true, Side.COUNTERPART) == 10


def test_extended_scores_are_exact(extended):
    partner_offer = Offer({"equipment": 4, "staff": 3, "lab": "computer", "weekend": True})
    assert score(partner_offer, extended, extended.partner_prefs_true, Side.PROPOSER) == 26
    assert score(partner_offer, extended, extended.agent_prefs, Side.COUNTERPART) == Fraction("12.4")
    agent_offer = Offer({"equipment": 2, "staff": 4, "lab": "biology", "weekend": True})
    assert score(agent_offer, extended, extended.agent_prefs, Side.PROPOSER) == 25
    assert score(agent_offer, extended, extended.partner_prefs_true, Side.COUNTERPART) == Fraction("17.2")


def test_invalid_offer_rejected_with_violations(integrative):
    with pytest.raises(InvalidOfferError) as excinfo:
        score(Offer({"food": 9, "water": 0, "firewood": 0}), integrative,
              integrative.agent_prefs)
    assert excinfo.value.violations


def test_possible_max_scores(integrative, extended):
    assert possible_max_score(integrative, integrative.agent_prefs) == 36
    assert possible_max_score(integrative, integrative.partner_prefs_true) == 36
    assert possible_max_score(extended, extended.agent_prefs) == 38
    assert possible_max_score(extended, extended.partner_prefs_true) == 34


def test_enumeration_counts(integrative, extended):
    assert len(enumerate_allocations(integrative)) == 64
    assert len(enumerate_allocations(extended)) == 216
    lone = Scenario(
        scenario_id="one-flag",
        issues=(IssueSpec(name="flag", kind=IssueKind.BINARY),),
        agent_prefs=PreferenceProfile(weights={"flag": 1}),
        partner_prefs_true=PreferenceProfile(weights={"flag": 1}),
    )
    assert len(enumerate_allocations(lone)) == 2


def test_enumeration_deterministic_order(integrative):
    a = enumerate_allocations(integrative)
    b = enumerate_allocations(integrative)
    assert list(a) == list(b)
    assert a[0].claims == {"food": 0, "water": 0, "firewood": 0}
    assert a[-1].claims == {"food": 3, "water": 3, "firewood": 3}


def test_enumeration_cap():
    issues = tuple(
        IssueSpec(name=f"pool{i}", kind=IssueKind.ALLOCATED, max_units=99)
        for i in range(5)
    )
    prefs = PreferenceProfile(weights={f"pool{i}": 1 for i in range(5)})
    big = Scenario(scenario_id="big", issues=issues, agent_prefs=prefs,
                   partner_prefs_true=prefs)
    with pytest.raises(SpaceTooLargeError):
        enumerate_allocations(big)


def test_frontier_membership(integrative):
    frontier = pareto_frontier(integrative, integrative.agent_prefs,
                               integrative.partner_prefs_true)
    assert is_pareto_member(ScorePair(Fraction(27), Fraction(15)), frontier)
    assert not is_pareto_member(ScorePair(Fraction(26), Fraction(14)), frontier)
    assert frontier_distance(ScorePair(Fraction(26), Fraction(14)), frontier) == 1
    member_claims = {tuple(o.claims[n] for n in integrative.issue_names())
                     for o, _ in frontier}
    assert (3, 3, 0) in member_claims


def test_all_to_agent_corner_is_member(integrative):
    frontier = pareto_frontier(integrative, integrative.agent_prefs,
                               integrative.partner_prefs_true)
    assert is_pareto_member(ScorePair(Fraction(36), Fraction(0)), frontier)


def test_distributive_frontier_is_full_tradeoff_line(distributive):
    frontier = pareto_frontier(distributive, distributive.agent_prefs,
                               distributive.partner_prefs_true)
    # identical weights make every full split zero-sum at joint 36
    assert all(pair.agent + pair.partner == 36 for _, pair in frontier)
    assert len(frontier) == 64


def test_frontier_is_antichain_and_maximal(integrative):
    frontier = pareto_frontier(integrative, integrative.agent_prefs,
                               integrative.partner_prefs_true)
    pairs = [pair for _, pair in frontier]
    for i, a in enumerate(pairs):
        for j, b in enumerate(pairs):
            if i != j:
                assert not a.dominates(b)
    from negokit.oracle import scored_allocations

    member_pairs = {(p.agent, p.partner) for p in pairs}
    for offer, s_a, s_p in scored_allocations(
        integrative, integrative.agent_prefs, integrative.partner_prefs_true
    ):
        if (s_a, s_p) in member_pairs:
            continue
        assert any(m.dominates(ScorePair(s_a, s_p)) for m in pairs)


def test_conservation_under_equal_roles(integrative):
    # proposer + counterpart shares of each allocated issue cover the pool
    prefs = integrative.agent_prefs
    for offer in enumerate_allocations(integrative):
        total = score(offer, integrative, prefs, Side.PROPOSER, validate=False) + score(
            offer, integrative, prefs, Side.COUNTERPART, validate=False
        )
        assert total == possible_max_score(integrative, prefs)


def test_score_monotone_in_claimed_units(integrative):
    rng = random.Random(5)
    allocations = enumerate_allocations(integrative)
    for _ in range(50):
        offer = rng.choice(allocations)
        issue = rng.choice(integrative.issue_names())
        if offer.claims[issue] >= 3:
            continue
        bumped = Offer({**offer.claims, issue: offer.claims[issue] + 1})
        assert score(bumped, integrative, integrative.agent_prefs, Side.PROPOSER) >= score(
            offer, integrative, integrative.agent_prefs, Side.PROPOSER
        )
        assert score(
            bumped, integrative, integrative.partner_prefs_true, Side.COUNTERPART
        ) <= score(offer, integrative, integrative.partner_prefs_true, Side.COUNTERPART)
