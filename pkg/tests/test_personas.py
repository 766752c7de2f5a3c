from __future__ import annotations

from fractions import Fraction as F

from negokit.domain import Offer
from negokit.opponent import Relation
from negokit.oracle import Side, possible_max_score, score
from negokit.personas import (
    ActionKind,
    PersonaConfig,
    PersonaKind,
    SessionView,
    make_persona,
    nearest_offer,
)
from negokit.simulator import run_session


def test_personas_answer_truthfully(integrative):
    persona = make_persona(PersonaConfig(kind=PersonaKind.FAIR), integrative)
    action = persona.answer("highest", turn=2)
    assert action.statements[0].issue == "firewood"
    assert action.statements[0].relation is Relation.HIGHEST
    action = persona.answer("lowest", turn=4)
    assert action.statements[0].issue == "food"
    assert action.statements[0].relation is Relation.LOWEST


def test_persona_opens_with_greeting(integrative):
    persona = make_persona(PersonaConfig(kind=PersonaKind.BASE), integrative)
    action = persona.respond(SessionView(scenario=integrative, turn=0))
    assert action.kind is ActionKind.OPEN


def test_greedy_holds_until_patience_runs_out(integrative):
    persona = make_persona(PersonaConfig(kind=PersonaKind.GREEDY), integrative)
    offers = []
    for turn in range(1, 9):
        action = persona.respond(SessionView(
            scenario=integrative, turn=2 * turn,
            incoming_offer=Offer({"food": 3, "water": 3, "firewood": 1}),
            counterpart_conceded=False,
        ))
        assert action.kind is ActionKind.OFFER
        offers.append(score(action.offer, integrative, integrative.partner_prefs_true,
                            Side.PROPOSER, validate=False))
    # three repeats of the anchor, then a one-point nudge
    assert offers[0] == offers[1] == offers[2] == offers[3]
    assert offers[4] == offers[0] - 1


def test_base_reciprocates_concessions(integrative):
    persona = make_persona(PersonaConfig(kind=PersonaKind.BASE), integrative)
    first = persona.respond(SessionView(scenario=integrative, turn=2,
                                        incoming_offer=Offer({"food": 3, "water": 3, "firewood": 1}),
                                        counterpart_conceded=False))
    second = persona.respond(SessionView(scenario=integrative, turn=4,
                                         incoming_offer=Offer({"food": 3, "water": 3, "firewood": 0}),
                                         counterpart_conceded=True))
    assert second.kind is ActionKind.OFFER
    assert persona.own_scores[1] == persona.own_scores[0] - 2


def test_fair_never_offers_below_its_floor(integrative, config):
    transcript = run_session(integrative, PersonaConfig(kind=PersonaKind.FAIR),
                             config, seed=3)
    pms = possible_max_score(integrative, integrative.partner_prefs_true)
    for event in transcript.events:
        if event.get("type") == "offer" and event.get("by") == "partner":
            offer = Offer(event["claims"])
            self_score = score(offer, integrative, integrative.partner_prefs_true,
                               Side.PROPOSER, validate=False)
            joint = self_score + score(offer, integrative, integrative.agent_prefs,
                                       Side.COUNTERPART, validate=False)
            assert self_score >= pms / 2
            assert self_score >= joint * (F(1, 2) - F(1, 10))


def test_personas_deterministic_replay(integrative, distributive, config):
    for scenario in (integrative, distributive):
        for kind in PersonaKind:
            a = run_session(scenario, PersonaConfig(kind=kind), config, seed=11)
            b = run_session(scenario, PersonaConfig(kind=kind), config, seed=11)
            assert a.events == b.events
            assert a.outcome == b.outcome


def test_nearest_offer_prefers_efficient_allocations(integrative):
    offer = nearest_offer(integrative, integrative.partner_prefs_true,
                          integrative.agent_prefs, F(19))
    self_score = score(offer, integrative, integrative.partner_prefs_true,
                       Side.PROPOSER, validate=False)
    other = score(offer, integrative, integrative.agent_prefs, Side.COUNTERPART,
                  validate=False)
    assert self_score == 19
    # among all self-19 allocations, none leaves the counterpart better off
    from negokit.oracle import scored_allocations

    for _, s_self, s_other in scored_allocations(
        integrative, integrative.partner_prefs_true, integrative.agent_prefs
    ):
        if s_self == 19:
            assert s_other <= other


def test_persona_offers_always_valid(integrative, distributive, config):
    from negokit.domain import validate_offer

    for scenario in (integrative, distributive):
        for kind in PersonaKind:
            t = run_session(scenario, PersonaConfig(kind=kind), config, seed=5)
            for event in t.events:
                if event.get("type") == "offer" and event.get("by") == "partner":
                    assert validate_offer(Offer(event["claims"]), scenario) == []
