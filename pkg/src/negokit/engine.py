"""Turn-level offer pipeline.

Stage 1 reads the counterpart's behavior (fairness of their latest offer,
direction of their self-score). Stage 2 sweeps a scalarized integer program
over a grid of trade-off weights and score caps to collect candidate offers.
Stage 3 scores each candidate by estimated acceptance (TS/SI blend) and by
alignment with the selected turn-level tactic, then picks the weighted argmax.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .domain import (
    BehaviorSignal,
    EngineConfig,
    Fairness,
    IssueKind,
    Offer,
    PreferenceProfile,
    Scenario,
    Stance,
)
from .oracle import Side, possible_max_score, score
from .rational import to_wire


class InfeasibleError(ValueError):
    """No allocation satisfies the program's constraints."""


@dataclass(frozen=True)
class LPParams:
    lam: Fraction
    s_max: Fraction
    s_min_agent: Fraction = Fraction(10)
    s_min_partner: Fraction = Fraction(5)

    def __post_init__(self) -> None:
        if not (0 <= self.lam <= 1):
            raise ValueError("lambda must lie in [0,1]")


@dataclass
class CandidateOffer:
    offer: Offer
    s_a: Fraction
    s_p_est: Fraction
    ts: Fraction | None = None
    si: Fraction | None = None
    pap: Fraction | None = None
    sa: Fraction | None = None
    final: Fraction | None = None
    adapter_fallback: bool = False

    def to_json(self) -> dict:
        out = {
            "claims": dict(self.offer.claims),
            "s_a": to_wire(self.s_a),
            "s_p_est": to_wire(self.s_p_est),
        }
        for name in ("ts", "si", "pap", "sa", "final"):
            value = getattr(self, name)
            if value is not None:
                out[name] = to_wire(value)
        return out


class Tactic(str, Enum):
    # collaborative
    LIC = "LIC"
    CSC = "CSC"
    RC = "RC"
    LGR = "LGR"
    MGF = "MGF"
    # competitive
    AEO = "AEO"
    REO = "REO"
    NCR = "NCR"
    RNC = "RNC"


COLLABORATIVE = frozenset({Tactic.LIC, Tactic.CSC, Tactic.RC, Tactic.LGR, Tactic.MGF})
COMPETITIVE = frozenset({Tactic.AEO, Tactic.REO, Tactic.NCR, Tactic.RNC})

TACTIC_INFO: dict[Tactic, dict[str, str]] = {
    Tactic.LIC: {
        "name": "Lead-in concession",
        "group": "collaborative",
        "when": "Early on, before either side has given ground, facing a cooperative counterpart.",
        "how": "Give up a unit of the issue they value most relative to you.",
        "why": "Opens the reciprocity loop on your terms.",
    },
    Tactic.CSC: {
        "name": "Continued smaller concession",
        "group": "collaborative",
        "when": "Your large concession was answered by only a small one.",
        "how": "Concede a single point, no more.",
        "why": "Keeps the exchange alive without bidding against yourself.",
    },
    Tactic.RC: {
        "name": "Reciprocal concession",
        "group": "collaborative",
        "when": "The counterpart just conceded at least the concession threshold.",
        "how": "Match their movement, capped at twice the threshold.",
        "why": "Rewards movement and keeps the pace symmetric.",
    },
    Tactic.LGR: {
        "name": "Logrolling",
        "group": "collaborative",
        "when": "Top priorities oppose, so cross-issue trades create value.",
        "how": "Offer the highest joint-value allocation in your feasible band.",
        "why": "Trades cheap-for-you against dear-for-them.",
    },
    Tactic.MGF: {
        "name": "Mutual gain focus",
        "group": "collaborative",
        "when": "Their latest offer out-claims what your own current ask keeps for you.",
        "how": "Prefer candidates that score higher for them.",
        "why": "Rebalances the deal toward joint benefit.",
    },
    Tactic.AEO: {
        "name": "Aggressive early offer",
        "group": "competitive",
        "when": "Your first offer of the session.",
        "how": "Anchor at the top of the feasible band.",
        "why": "Sets the reference point and leaves room to concede later.",
    },
    Tactic.REO: {
        "name": "Response to extreme offer",
        "group": "competitive",
        "when": "Their latest offer keeps more than 70% of the joint value.",
        "how": "Hold your position.",
        "why": "Refuses to reward extreme demands.",
    },
    Tactic.NCR: {
        "name": "No-concession response",
        "group": "competitive",
        "when": "They held firm across their last two offers.",
        "how": "Hold your position.",
        "why": "Avoids conceding unilaterally into a wall.",
    },
    Tactic.RNC: {
        "name": "Reject negative concession",
        "group": "competitive",
        "when": "Their last two offers raised their own take.",
        "how": "Hold your position.",
        "why": "Pushes back on escalation instead of chasing it.",
    },
}


# --- Stage 1: behavior signals ---------------------------------------------

def assess_fairness(
    s_a: Fraction, s_p: Fraction, pms: Fraction, threshold: Fraction
) -> Fairness:
    """Fair when the score gap is strictly inside the threshold, or the
    counterpart's own take is at most half their possible max."""
    if abs(s_a - s_p) < threshold or s_p <= pms / 2:
        return Fairness.FAIR
    return Fairness.UNFAIR


def assess_stance(partner_self_scores: Sequence[Fraction]) -> Stance:
    """Direction of the counterpart's self-score across their last two offers.
    No offers yet: unknown. Exactly one: neutral (no delta to read)."""
    if len(partner_self_scores) == 0:
        return Stance.UNKNOWN
    if len(partner_self_scores) == 1:
        return Stance.NEUTRAL
    delta = partner_self_scores[-1] - partner_self_scores[-2]
    if delta < 0:
        return Stance.GENEROUS
    if delta > 0:
        return Stance.GREEDY
    return Stance.NEUTRAL


def choose_lambda(signal: BehaviorSignal, config: EngineConfig) -> Fraction:
    """Stance-keyed trade-off weight; opening turns (unknown stance) anchor
    at pure self-interest."""
    if signal.stance is Stance.UNKNOWN:
        return Fraction(1)
    lam = config.lambda_table.get(signal.stance, Fraction(1, 2))
    return min(max(lam, Fraction(0)), Fraction(1))


def choose_smax(
    own_offer_scores: Sequence[Fraction], pms: Fraction, config: EngineConfig
) -> Fraction:
    """Opening offers cap at the anchor fraction of the possible max
    (round-half-to-even on exact rationals); afterwards the cap is the
    previous own offer's score, so offers never escalate."""
    if not own_offer_scores:
        return Fraction(round(config.anchor_fraction * pms))
    return own_offer_scores[-1]


# --- Stage 2: scalarized integer program ------------------------------------

def floors_for(
    scenario: Scenario,
    own_prefs: PreferenceProfile,
    ipp_profile: PreferenceProfile,
    config: EngineConfig,
) -> tuple[Fraction, Fraction]:
    """Score floors as configured fractions of each party's possible max."""
    own_floor = config.agent_floor_fraction * possible_max_score(scenario, own_prefs)
    partner_floor = config.partner_floor_fraction * possible_max_score(scenario, ipp_profile)
    return own_floor, partner_floor


def _issue_choices(
    scenario: Scenario,
    own_prefs: PreferenceProfile,
    ipp_profile: PreferenceProfile,
) -> list[list[tuple[object, Fraction, Fraction]]]:
    """Per issue: (claim, own contribution, partner contribution), ordered so
    the first-found optimum is the lexicographically greatest allocation."""
    per_issue: list[list[tuple[object, Fraction, Fraction]]] = []
    for spec in scenario.issues:
        w_a = own_prefs.weight(spec.name)
        w_p = ipp_profile.weight(spec.name)
        choices: list[tuple[object, Fraction, Fraction]] = []
        if spec.kind is IssueKind.ALLOCATED:
            for units in reversed(spec.domain()):
                choices.append((units, w_a * units, w_p * (spec.max_units - units)))
        elif spec.kind is IssueKind.CATEGORICAL:
            for opt in spec.options:
                choices.append(
                    (
                        opt,
                        w_a * own_prefs.multiplier(spec.name, opt),
                        w_p * ipp_profile.multiplier(spec.name, opt),
                    )
                )
        else:
            for value in (True, False):
                choices.append((value, w_a if value else Fraction(0), w_p if value else Fraction(0)))
        per_issue.append(choices)
    return per_issue


_SOLVE_CACHE: dict[tuple, Offer | None] = {}


def solve_program(
    params: LPParams,
    scenario: Scenario,
    own_prefs: PreferenceProfile,
    ipp_profile: PreferenceProfile,
) -> Offer | None:
    """Exact maximizer of s_a + (1 - lambda) * s_p_est subject to
    s_min_agent <= s_a <= s_max and s_p_est >= s_min_partner.

    Branch-and-bound over issues with suffix bounds; ties resolve to higher
    own score, then the lexicographically greatest allocation. Returns None
    when the constrained region is empty (that is an answer, not an error).
    """
    cache_key = (
        scenario.key(), own_prefs.key(), ipp_profile.key(),
        params.lam, params.s_max, params.s_min_agent, params.s_min_partner,
    )
    if cache_key in _SOLVE_CACHE:
        return _SOLVE_CACHE[cache_key]

    mu = 1 - params.lam
    per_issue = _issue_choices(scenario, own_prefs, ipp_profile)
    n = len(per_issue)

    suffix_max_obj = [Fraction(0)] * (n + 1)
    suffix_max_sa = [Fraction(0)] * (n + 1)
    suffix_min_sa = [Fraction(0)] * (n + 1)
    suffix_max_sp = [Fraction(0)] * (n + 1)
    for i in range(n - 1, -1, -1):
        objs = [sa + mu * sp for _, sa, sp in per_issue[i]]
        sas = [sa for _, sa, _ in per_issue[i]]
        sps = [sp for _, _, sp in per_issue[i]]
        suffix_max_obj[i] = suffix_max_obj[i + 1] + max(objs)
        suffix_max_sa[i] = suffix_max_sa[i + 1] + max(sas)
        suffix_min_sa[i] = suffix_min_sa[i + 1] + min(sas)
        suffix_max_sp[i] = suffix_max_sp[i + 1] + max(sps)

    best_key: tuple[Fraction, Fraction] | None = None
    best_claims: list | None = None
    claims: list = [None] * n
    names = scenario.issue_names()

    def dfs(i: int, cur_sa: Fraction, cur_sp: Fraction, cur_obj: Fraction) -> None:
        nonlocal best_key, best_claims
        if cur_sa + suffix_max_sa[i] < params.s_min_agent:
            return
        if cur_sa + suffix_min_sa[i] > params.s_max:
            return
        if cur_sp + suffix_max_sp[i] < params.s_min_partner:
            return
        if best_key is not None and cur_obj + suffix_max_obj[i] < best_key[0]:
            return
        if i == n:
            if not (params.s_min_agent <= cur_sa <= params.s_max):
                return
            if cur_sp < params.s_min_partner:
                return
            key = (cur_obj, cur_sa)
            if best_key is None or key > best_key:
                best_key = key
                best_claims = claims.copy()
            return
        for value, sa, sp in per_issue[i]:
            claims[i] = value
            dfs(i + 1, cur_sa + sa, cur_sp + sp, cur_obj + sa + mu * sp)
        claims[i] = None

    dfs(0, Fraction(0), Fraction(0), Fraction(0))
    result = Offer(dict(zip(names, best_claims))) if best_claims is not None else None
    _SOLVE_CACHE[cache_key] = result
    return result


def lambda_grid(lam_base: Fraction) -> list[Fraction]:
    """Clamped grid of lam_base + k/10 for k in -3..3, deduplicated."""
    seen: list[Fraction] = []
    for k in range(-3, 4):
        lam = min(max(lam_base + Fraction(k, 10), Fraction(0)), Fraction(1))
        if lam not in seen:
            seen.append(lam)
    return seen


_SWEEP_CACHE: dict[tuple, tuple] = {}


def sweep_candidates(
    lam_base: Fraction,
    s_max_base: Fraction,
    scenario: Scenario,
    own_prefs: PreferenceProfile,
    ipp_profile: PreferenceProfile,
    config: EngineConfig,
    n: int | None = None,
) -> list[CandidateOffer]:
    """Solve across the lambda grid and 1-point cap decrements (down to ten
    below the base), deduplicate allocations, rank by own score, keep top N.

    An empty list means the whole grid was infeasible.
    """
    n = config.candidate_count if n is None else n
    s_min_agent, s_min_partner = floors_for(scenario, own_prefs, ipp_profile, config)
    cache_key = (
        scenario.key(), own_prefs.key(), ipp_profile.key(),
        lam_base, s_max_base, n, s_min_agent, s_min_partner,
    )
    cached = _SWEEP_CACHE.get(cache_key)
    if cached is not None:
        return [replace(c) for c in cached]

    seen: dict[Offer, CandidateOffer] = {}
    for lam in lambda_grid(lam_base):
        for j in range(0, 11):
            s_max = s_max_base - j
            if s_max < s_min_agent:
                continue
            params = LPParams(lam=lam, s_max=s_max,
                              s_min_agent=s_min_agent, s_min_partner=s_min_partner)
            offer = solve_program(params, scenario, own_prefs, ipp_profile)
            if offer is None or offer in seen:
                continue
            seen[offer] = CandidateOffer(
                offer=offer,
                s_a=score(offer, scenario, own_prefs, Side.PROPOSER, validate=False),
                s_p_est=score(offer, scenario, ipp_profile, Side.COUNTERPART, validate=False),
            )
    ranked = sorted(
        seen.values(),
        key=lambda c: (-c.s_a, -c.s_p_est, tuple(-x for x in c.offer.key_for(scenario))),
    )
    result = tuple(ranked[:n])
    _SWEEP_CACHE[cache_key] = result
    return [replace(c) for c in result]


# --- Stage 3: acceptance estimate, tactic, final selection -------------------

def virtual_partner_eval(
    candidate: CandidateOffer,
    pms_partner: Fraction,
    partner_latest_self_score: Fraction | None,
    adapter: "SupportsJudge | None" = None,
) -> tuple[Fraction, Fraction, bool]:
    """Deterministic surrogate for the acceptance judge.

    TS tracks the counterpart's total take; SI tracks how close the candidate
    sits to their latest stated position (their possible max before they have
    offered anything). Returns (ts, si, adapter_fell_back). When an external
    judge adapter is configured its five-sample average is used instead,
    normalized from the ten-point scale; any adapter failure falls back to the
    surrogate and flags it.
    """
    if adapter is not None:
        try:
            ts10, si10 = adapter.judge_candidate(candidate)
            clamp = lambda x: min(max(x, Fraction(0)), Fraction(1))
            return clamp(ts10 / 10), clamp(si10 / 10), False
        except Exception:
            ts, si, _ = virtual_partner_eval(candidate, pms_partner, partner_latest_self_score)
            return ts, si, True
    reference = partner_latest_self_score if partner_latest_self_score is not None else pms_partner
    ts = candidate.s_p_est / pms_partner
    si = 1 - abs(candidate.s_p_est - reference) / pms_partner
    clamp = lambda x: min(max(x, Fraction(0)), Fraction(1))
    return clamp(ts), clamp(si), False


def compute_pap(ts: Fraction, si: Fraction, w: Fraction) -> Fraction:
    """Acceptance estimate: w * TS + (1 - w) * SI, exactly."""
    for name, v in (("ts", ts), ("si", si), ("w", w)):
        if not (0 <= v <= 1):
            raise ValueError(f"{name} must lie in [0,1]")
    return w * ts + (1 - w) * si


@dataclass(frozen=True)
class TurnView:
    """Everything tactic selection needs, derived from the histories.

    `own_scores` are the agent's self-scores of its past offers;
    `partner_self_scores` are the counterpart's self-scores of their offers
    under the current IPP; `partner_agent_scores` are what those offers gave
    the agent.
    """

    own_scores: tuple[Fraction, ...]
    partner_self_scores: tuple[Fraction, ...]
    partner_agent_scores: tuple[Fraction, ...]


def partner_concession(view: TurnView) -> Fraction:
    """Magnitude of the counterpart's latest self-score drop (0 if none)."""
    if len(view.partner_self_scores) < 2:
        return Fraction(0)
    delta = view.partner_self_scores[-1] - view.partner_self_scores[-2]
    return -delta if delta < 0 else Fraction(0)


def own_concession(view: TurnView) -> Fraction:
    if len(view.own_scores) < 2:
        return Fraction(0)
    delta = view.own_scores[-1] - view.own_scores[-2]
    return -delta if delta < 0 else Fraction(0)


def select_tactic(
    signal: BehaviorSignal,
    view: TurnView,
    own_prefs: PreferenceProfile,
    ipp_profile: PreferenceProfile,
    scenario: Scenario,
    config: EngineConfig,
    adapter: "SupportsJudge | None" = None,
) -> Tactic:
    """Deterministic priority cascade; first matching rule wins.

    With an external adapter configured, five samples are drawn and the
    majority taken (ties and failures fall back to the deterministic pick).
    """
    deterministic = _select_tactic_rules(signal, view, own_prefs, ipp_profile, scenario, config)
    if adapter is None:
        return deterministic
    try:
        votes = [Tactic(adapter.pick_tactic(signal, view)) for _ in range(5)]
    except Exception:
        return deterministic
    counts: dict[Tactic, int] = {}
    for t in votes:
        counts[t] = counts.get(t, 0) + 1
    top = max(counts.values())
    winners = [t for t, c in counts.items() if c == top]
    return winners[0] if len(winners) == 1 else deterministic


def _select_tactic_rules(
    signal: BehaviorSignal,
    view: TurnView,
    own_prefs: PreferenceProfile,
    ipp_profile: PreferenceProfile,
    scenario: Scenario,
    config: EngineConfig,
) -> Tactic:
    theta_c = config.concession_threshold
    # 1. opening offer
    if not view.own_scores:
        return Tactic.AEO
    # 2. extreme latest offer: counterpart keeps > 70% of that offer's joint value
    if view.partner_self_scores:
        s_p = view.partner_self_scores[-1]
        joint = s_p + view.partner_agent_scores[-1]
        if joint > 0 and s_p / joint > Fraction(7, 10):
            return Tactic.REO
    if len(view.partner_self_scores) >= 2:
        delta = view.partner_self_scores[-1] - view.partner_self_scores[-2]
        # 3. escalation
        if delta > 0:
            return Tactic.RNC
        # 4. firm
        if delta == 0:
            return Tactic.NCR
        # 5. real concession
        if -delta >= theta_c:
            return Tactic.RC
    # 6. our big move answered by a small one
    pc = partner_concession(view)
    if own_concession(view) >= 2 * theta_c and 0 < pc < theta_c:
        return Tactic.CSC
    # 7. they out-claim our own current ask
    if view.partner_self_scores and view.partner_self_scores[-1] > view.own_scores[-1]:
        return Tactic.MGF
    # 8. opposed top priorities
    names = scenario.issue_names()
    own_top = max(names, key=lambda i: (own_prefs.weight(i), -names.index(i)))
    ipp_top = max(names, key=lambda i: (ipp_profile.weight(i), -names.index(i)))
    if own_top != ipp_top:
        return Tactic.LGR
    # 9. early cooperative opening for a concession of our own
    early = len(view.own_scores) <= 3
    no_own_concession = all(
        view.own_scores[i] >= view.own_scores[i + 1] and view.own_scores[i] == view.own_scores[0]
        for i in range(len(view.own_scores) - 1)
    )
    cooperative = signal.stance is Stance.GENEROUS or signal.fairness is Fairness.FAIR
    if early and no_own_concession and cooperative:
        return Tactic.LIC
    # nothing matched: hold
    return Tactic.NCR


def _lic_target(
    own_prefs: PreferenceProfile, ipp_profile: PreferenceProfile, scenario: Scenario
) -> Fraction:
    """One unit of the issue that is cheapest for us relative to their value."""
    names = scenario.issue_names()
    best = max(
        names,
        key=lambda i: (ipp_profile.weight(i) - own_prefs.weight(i), -names.index(i)),
    )
    return -own_prefs.weight(best)


def rank_by_tactic(
    tactic: Tactic,
    candidates: Sequence[CandidateOffer],
    own_last_offer_score: Fraction | None,
    partner_concession_points: Fraction,
    scenario: Scenario,
    own_prefs: PreferenceProfile,
    ipp_profile: PreferenceProfile,
    config: EngineConfig,
) -> list[Fraction]:
    """Alignment score per candidate: rank under the tactic's ordering, then
    min-max normalize so the best candidate gets 1.0 and the worst 0.0.

    Distance tactics target an own-score delta d* from the last own offer
    (competitive tactics hold, d* = 0); ties prefer the larger concession,
    then the lexicographically greater allocation. LGR ranks by joint value,
    MGF by the counterpart's score.
    """
    if not candidates:
        return []
    if len(candidates) == 1:
        return [Fraction(1)]
    baseline = own_last_offer_score
    if baseline is None:
        baseline = max(c.s_a for c in candidates)
    theta_c = config.concession_threshold

    if tactic is Tactic.LGR:
        keys = [(-(c.s_a + c.s_p_est), -c.s_a,
                 tuple(-x for x in c.offer.key_for(scenario))) for c in candidates]
    elif tactic is Tactic.MGF:
        keys = [(-c.s_p_est, -c.s_a,
                 tuple(-x for x in c.offer.key_for(scenario))) for c in candidates]
    else:
        if tactic is Tactic.RC:
            d_star = -2 * min(partner_concession_points, theta_c)
        elif tactic is Tactic.CSC:
            d_star = Fraction(-1)
        elif tactic is Tactic.LIC:
            d_star = _lic_target(own_prefs, ipp_profile, scenario)
        else:  # AEO, REO, NCR, RNC hold position
            d_star = Fraction(0)
        keys = []
        for c in candidates:
            delta = c.s_a - baseline
            keys.append((abs(delta - d_star), delta,
                         tuple(-x for x in c.offer.key_for(scenario))))

    order = sorted(range(len(candidates)), key=lambda i: keys[i])
    n = len(candidates)
    sa_scores: list[Fraction] = [Fraction(0)] * n
    for rank, idx in enumerate(order):
        sa_scores[idx] = 1 - Fraction(rank, n - 1)
    return sa_scores


def final_select(
    candidates: Sequence[CandidateOffer],
    alpha: Fraction,
    beta: Fraction,
    scenario: Scenario,
) -> CandidateOffer:
    """Weighted argmax of acceptance estimate and tactic alignment."""
    if not candidates:
        raise InfeasibleError("no candidates to select from")
    best: CandidateOffer | None = None
    best_key: tuple | None = None
    for c in candidates:
        if c.pap is None or c.sa is None:
            raise ValueError("candidates must carry PAP and SA before final selection")
        c.final = alpha * c.pap + beta * c.sa
        key = (c.final, c.s_a, c.offer.key_for(scenario))
        if best_key is None or key > best_key:
            best_key = key
            best = c
    assert best is not None
    return best


# --- Full pipeline -----------------------------------------------------------

@dataclass
class StageTrace:
    """One decision's full working: signals, program parameters, the scored
    candidate table, tactic, and the selected offer."""

    turn: int
    fairness: Fairness
    stance: Stance
    lam: Fraction
    s_max: Fraction
    candidates: list[CandidateOffer]
    tactic: Tactic | None
    selected: CandidateOffer | None
    infeasible: bool = False
    adapter_fallback: bool = False

    def to_json(self) -> dict:
        info = TACTIC_INFO.get(self.tactic, {}) if self.tactic else {}
        return {
            "turn": self.turn,
            "fairness": self.fairness.value,
            "stance": self.stance.value,
            "lambda": to_wire(self.lam),
            "s_max": to_wire(self.s_max),
            "candidates": [c.to_json() for c in self.candidates],
            "tactic": self.tactic.value if self.tactic else None,
            "tactic_rationale": info,
            "selected": self.selected.to_json() if self.selected else None,
            "infeasible": self.infeasible,
            "adapter_fallback": self.adapter_fallback,
        }


class SupportsJudge:
    """Port for an external judge; see adapter.HttpAdapter."""

    def judge_candidate(self, candidate: CandidateOffer) -> tuple[Fraction, Fraction]:
        raise NotImplementedError

    def pick_tactic(self, signal: BehaviorSignal, view: TurnView) -> str:
        raise NotImplementedError


def run_pipeline(
    scenario: Scenario,
    config: EngineConfig,
    own_prefs: PreferenceProfile,
    ipp_profile: PreferenceProfile,
    view: TurnView,
    turn: int,
    adapter: SupportsJudge | None = None,
) -> StageTrace:
    """All three stages for one proposing turn."""
    pms_own = possible_max_score(scenario, own_prefs)
    pms_partner = possible_max_score(scenario, ipp_profile)

    if view.partner_self_scores:
        fairness = assess_fairness(
            view.partner_agent_scores[-1],
            view.partner_self_scores[-1],
            pms_partner,
            config.fairness_threshold,
        )
    else:
        fairness = Fairness.UNKNOWN
    stance = assess_stance(view.partner_self_scores)
    signal = BehaviorSignal(fairness=fairness, stance=stance)

    lam = choose_lambda(signal, config)
    s_max = choose_smax(view.own_scores, pms_own, config)
    candidates = sweep_candidates(lam, s_max, scenario, own_prefs, ipp_profile, config)
    if not candidates:
        return StageTrace(turn, fairness, stance, lam, s_max, [], None, None, infeasible=True)

    partner_latest = view.partner_self_scores[-1] if view.partner_self_scores else None
    fell_back = False
    for c in candidates:
        ts, si, fb = virtual_partner_eval(c, pms_partner, partner_latest, adapter)
        fell_back = fell_back or fb
        c.ts, c.si = ts, si
        c.pap = compute_pap(ts, si, config.ts_weight)

    tactic = select_tactic(signal, view, own_prefs, ipp_profile, scenario, config, adapter)
    sa_scores = rank_by_tactic(
        tactic, candidates,
        view.own_scores[-1] if view.own_scores else None,
        partner_concession(view),
        scenario, own_prefs, ipp_profile, config,
    )
    for c, sa in zip(candidates, sa_scores):
        c.sa = sa

    selected = final_select(candidates, config.alpha, config.beta, scenario)
    return StageTrace(
        turn, fairness, stance, lam, s_max, list(candidates), tactic, selected,
        adapter_fallback=fell_back,
    )


def clear_caches() -> None:
    _SOLVE_CACHE.clear()
    _SWEEP_CACHE.clear()
