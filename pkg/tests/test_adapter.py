from __future__ import annotations

from fractions import Fraction as F

from negokit.adapter import adapter_from_config
from negokit.domain import BehaviorSignal, Fairness, Offer, Stance
from negokit.engine import (
    CandidateOffer,
    SupportsJudge,
    Tactic,
    TurnView,
    select_tactic,
    virtual_partner_eval,
)
from negokit.oracle import Side, score


class FlakyJudge(SupportsJudge):
    def judge_candidate(self, candidate):
        raise RuntimeError("endpoint down")

    def pick_tactic(self, signal, view):
        raise RuntimeError("endpoint down")


class VotingJudge(SupportsJudge):
    def __init__(self, votes):
        self.votes = list(votes)

    def judge_candidate(self, candidate):
        return F(8), F(6)  # ten-point scale

    def pick_tactic(self, signal, view):
        return self.votes.pop(0)


def _candidate(integrative):
    offer = Offer({"food": 3, "water": 2, "firewood": 1})
    return CandidateOffer(
        offer=offer,
        s_a=score(offer, integrative, integrative.agent_prefs, Side.PROPOSER),
        s_p_est=score(offer, integrative, integrative.partner_prefs_true, Side.COUNTERPART),
    )


def test_adapter_failure_falls_back_to_surrogate(integrative):
    cand = _candidate(integrative)
    ts, si, fell_back = virtual_partner_eval(cand, F(36), F(21), adapter=FlakyJudge())
    assert fell_back
    assert ts == F(7, 18) and si == F(29, 36)


def test_adapter_scores_normalized_from_ten_point_scale(integrative):
    cand = _candidate(integrative)
    ts, si, fell_back = virtual_partner_eval(cand, F(36), F(21), adapter=VotingJudge([]))
    assert not fell_back
    assert (ts, si) == (F(4, 5), F(3, 5))


def test_tactic_majority_vote(integrative, config):
    view = TurnView((F(30),), (F(21), F(21)), (F(17), F(17)))
    signal = BehaviorSignal(Fairness.UNFAIR, Stance.NEUTRAL)
    judge = VotingJudge(["RC", "RC", "NCR", "RC", "LGR"])
    tactic = select_tactic(signal, view, integrative.agent_prefs,
                           integrative.partner_prefs_true, integrative, config,
                           adapter=judge)
    assert tactic is Tactic.RC


def test_tactic_vote_failure_uses_deterministic_pick(integrative, config):
    view = TurnView((F(30),), (F(21), F(21)), (F(17), F(17)))
    signal = BehaviorSignal(Fairness.UNFAIR, Stance.NEUTRAL)
    tactic = select_tactic(signal, view, integrative.agent_prefs,
                           integrative.partner_prefs_true, integrative, config,
                           adapter=FlakyJudge())
    assert tactic is Tactic.NCR


def test_adapter_disabled_without_url():
    assert adapter_from_config(None, 5.0, 1) is None
    assert adapter_from_config("http://judge.local", 5.0, 1) is not None
