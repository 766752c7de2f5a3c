"""Turn controller: ask, accept, walk away, or propose.

PolicyState is derived from the scored offer histories every turn, so its
counters are consistent with the histories by construction.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence


class Mode(str, Enum):
    ASK_PREFERENCE = "ask-preference"
    ACCEPT = "accept"
    WALK_AWAY = "walk-away"
    PROPOSE_OFFER = "propose-offer"


class WalkDecision(str, Enum):
    STAY = "stay"
    WARN = "warn"
    WALK = "walk"


def concession_streak(partner_self_scores: Sequence[Fraction]) -> int:
    """Trailing count of non-conceding partner offers. An opening offer is a
    non-concession; any self-score drop breaks the run."""
    streak = 0
    for i in range(len(partner_self_scores) - 1, -1, -1):
        if i == 0:
            streak += 1
            break
        if partner_self_scores[i] < partner_self_scores[i - 1]:
            break
        streak += 1
    return streak


@dataclass(frozen=True)
class PolicyState:
    own_offer_scores: tuple[Fraction, ...]
    partner_self_scores: tuple[Fraction, ...]
    partner_agent_scores: tuple[Fraction, ...]
    no_concession_streak: int
    below_batna_count: int
    warning_issued: bool
    turn: int

    @classmethod
    def from_histories(
        cls,
        own_offer_scores: Sequence[Fraction],
        partner_self_scores: Sequence[Fraction],
        partner_agent_scores: Sequence[Fraction],
        batna: Fraction,
        turn: int,
    ) -> "PolicyState":
        below = sum(1 for s in partner_agent_scores if s < batna)
        return cls(
            own_offer_scores=tuple(own_offer_scores),
            partner_self_scores=tuple(partner_self_scores),
            partner_agent_scores=tuple(partner_agent_scores),
            no_concession_streak=concession_streak(partner_self_scores),
            below_batna_count=below,
            warning_issued=below >= 1,
            turn=turn,
        )


def should_accept(
    partner_offer_agent_score: Fraction, last_own_offer_score: Fraction | None
) -> bool:
    """Accept exactly when their offer meets or exceeds our own latest ask.
    With no own offer yet there is nothing to compare against."""
    if last_own_offer_score is None:
        return False
    return partner_offer_agent_score >= last_own_offer_score


def should_walk_away(state: PolicyState, batna: Fraction) -> WalkDecision:
    """Walk after three consecutive non-conceding partner offers, or when a
    second below-reserve offer arrives after the warning the first one drew."""
    if state.no_concession_streak >= 3:
        return WalkDecision.WALK
    if state.partner_agent_scores and state.partner_agent_scores[-1] < batna:
        if state.below_batna_count >= 2:
            return WalkDecision.WALK
        return WalkDecision.WARN
    return WalkDecision.STAY


@dataclass(frozen=True)
class ModeDecision:
    mode: Mode
    reason: str
    warn: bool = False


def choose_mode(
    state: PolicyState,
    batna: Fraction,
    ranking_pinned: bool,
    questions_remaining: bool,
    partner_offer_pending: bool,
) -> ModeDecision:
    """Ask while the counterpart's ranking is open and questions remain;
    otherwise accept, walk, or propose. Accept is checked before walk-away,
    so an acceptable offer never triggers a walk."""
    if not ranking_pinned and questions_remaining:
        return ModeDecision(Mode.ASK_PREFERENCE, "counterpart priorities not pinned yet")
    warn = False
    if partner_offer_pending and state.partner_agent_scores:
        last_own = state.own_offer_scores[-1] if state.own_offer_scores else None
        incoming = state.partner_agent_scores[-1]
        if should_accept(incoming, last_own):
            return ModeDecision(
                Mode.ACCEPT,
                f"their offer gives us {incoming}, meeting our last ask of {last_own}",
            )
        decision = should_walk_away(state, batna)
        if decision is WalkDecision.WALK:
            if state.no_concession_streak >= 3:
                reason = "no concessions across three consecutive offers"
            else:
                reason = f"second offer below our reserve of {batna} after a warning"
            return ModeDecision(Mode.WALK_AWAY, reason)
        warn = decision is WalkDecision.WARN
    reason = "countering"
    if warn:
        reason = f"countering with a warning: that offer is below our reserve of {batna}"
    return ModeDecision(Mode.PROPOSE_OFFER, reason, warn=warn)
