from __future__ import annotations

from fractions import Fraction as F

from negokit.policy import (
    Mode,
    PolicyState,
    WalkDecision,
    choose_mode,
    concession_streak,
    should_accept,
    should_walk_away,
)


def _state(own=(), partner_self=(), partner_agent=(), batna=F(12), turn=0):
    return PolicyState.from_histories(
        [F(x) for x in own], [F(x) for x in partner_self],
        [F(x) for x in partner_agent], batna, turn,
    )


def test_should_accept_boundary():
    assert should_accept(F(23), F(23))
    assert not should_accept(F(22), F(23))
    assert not should_accept(F(23), None)


def test_walk_after_three_firm_offers():
    state = _state(own=[30], partner_self=[21, 21, 21], partner_agent=[17, 17, 17])
    assert state.no_concession_streak == 3
    assert should_walk_away(state, F(12)) is WalkDecision.WALK


def test_opening_offer_counts_toward_streak():
    assert concession_streak([F(21)]) == 1
    assert concession_streak([F(21), F(21)]) == 2


def test_concession_resets_streak():
    assert concession_streak([F(22), F(21), F(21)]) == 1
    state = _state(own=[30], partner_self=[22, 21, 21], partner_agent=[16, 17, 17])
    assert should_walk_away(state, F(12)) is WalkDecision.STAY


def test_first_below_reserve_warns_second_walks():
    first = _state(own=[30], partner_self=[30], partner_agent=[6])
    assert should_walk_away(first, F(12)) is WalkDecision.WARN
    second = _state(own=[30, 30], partner_self=[30, 29], partner_agent=[6, 7])
    assert second.warning_issued and second.below_batna_count == 2
    assert should_walk_away(second, F(12)) is WalkDecision.WALK


def test_below_reserve_offers_need_not_be_consecutive():
    state = _state(own=[30] * 3, partner_self=[30, 20, 29], partner_agent=[6, 16, 7])
    assert should_walk_away(state, F(12)) is WalkDecision.WALK


def test_counters_recomputable_from_histories():
    state = _state(own=[30, 27], partner_self=[22, 22, 20],
                   partner_agent=[14, 14, 16], batna=F(12), turn=9)
    assert state.no_concession_streak == concession_streak(state.partner_self_scores)
    assert state.below_batna_count == sum(1 for s in state.partner_agent_scores if s < 12)


def test_choose_mode_ask_first():
    decision = choose_mode(_state(), F(12), ranking_pinned=False,
                           questions_remaining=True, partner_offer_pending=False)
    assert decision.mode is Mode.ASK_PREFERENCE


def test_choose_mode_accept_beats_walk():
    # an acceptable offer that is also the third firm offer must be accepted
    state = _state(own=[18], partner_self=[21, 21, 21], partner_agent=[18, 18, 18])
    decision = choose_mode(state, F(12), ranking_pinned=True,
                           questions_remaining=False, partner_offer_pending=True)
    assert decision.mode is Mode.ACCEPT


def test_choose_mode_walk_on_streak():
    state = _state(own=[30], partner_self=[21, 21, 21], partner_agent=[17, 17, 17])
    decision = choose_mode(state, F(12), ranking_pinned=True,
                           questions_remaining=False, partner_offer_pending=True)
    assert decision.mode is Mode.WALK_AWAY


def test_choose_mode_warn_embedded_in_propose():
    state = _state(own=[30], partner_self=[30], partner_agent=[6])
    decision = choose_mode(state, F(12), ranking_pinned=True,
                           questions_remaining=False, partner_offer_pending=True)
    assert decision.mode is Mode.PROPOSE_OFFER and decision.warn


def test_choose_mode_propose_by_default():
    state = _state(own=[30], partner_self=[22], partner_agent=[18])
    decision = choose_mode(state, F(12), ranking_pinned=True,
                           questions_remaining=False, partner_offer_pending=True)
    assert decision.mode is Mode.PROPOSE_OFFER and not decision.warn
