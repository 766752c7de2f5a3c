"""Self-play runner: seeded sessions, batch metrics, and analyses."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from scipy import stats as _scipy_stats

from .domain import EngineConfig, Offer, Scenario
from .oracle import (
    Side,
    frontier_distance,
    is_pareto_member,
    pareto_frontier,
    score,
    ScorePair,
)
from .personas import (
    ActionKind,
    PersonaConfig,
    SessionView,
    make_persona,
)
from .rational import to_wire
from .scenarios import campsite_permutations, campsite_scenario
from .session import AgentMoveKind, AgentSession, PartnerEvent


@dataclass
class Transcript:
    session_index: int
    seed: int
    scenario: Scenario
    events: list[dict]
    outcome: dict
    traces: list[dict]

    @property
    def agreed(self) -> bool:
        return self.outcome.get("result") == "agreement"


def _outcome_scores(offer: Offer, proposer: str, scenario: Scenario) -> tuple[Fraction, Fraction]:
    """(agent score, partner score) of a struck deal under true preferences."""
    if proposer == "agent":
        agent = score(offer, scenario, scenario.agent_prefs, Side.PROPOSER, validate=False)
        partner = score(offer, scenario, scenario.partner_prefs_true, Side.COUNTERPART,
                        validate=False)
    else:
        partner = score(offer, scenario, scenario.partner_prefs_true, Side.PROPOSER,
                        validate=False)
        agent = score(offer, scenario, scenario.agent_prefs, Side.COUNTERPART, validate=False)
    return agent, partner


def run_session(
    scenario: Scenario,
    persona_config: PersonaConfig,
    engine_config: EngineConfig,
    seed: int = 0,
    session_index: int = 0,
) -> Transcript:
    """One alternating-turn session; the scripted counterpart opens."""
    persona = make_persona(persona_config, scenario)
    session = AgentSession(scenario, engine_config)
    traces: list[dict] = []

    pending_question: str | None = None
    pending_offer: Offer | None = None  # agent's latest offer awaiting reply
    outcome: dict | None = None
    persona_seen_agent_scores: list[Fraction] = []

    def forced_walk(by: str) -> dict:
        return {"type": "outcome", "result": "walk-away", "walked_by": by,
                "forced": True, "turns": session.turn,
                "agent_score": to_wire(Fraction(0)), "partner_score": to_wire(Fraction(0))}

    while outcome is None:
        # --- counterpart move ---
        if session.turn >= scenario.max_turns:
            outcome = forced_walk("cap")
            break
        conceded = (
            len(persona_seen_agent_scores) >= 2
            and persona_seen_agent_scores[-1] > persona_seen_agent_scores[-2]
        )
        view = SessionView(
            scenario=scenario,
            turn=session.turn,
            incoming_question=pending_question,
            incoming_offer=pending_offer,
            counterpart_conceded=conceded,
        )
        action = persona.respond(view)
        pending_question = None
        if action.kind is ActionKind.OPEN:
            session.observe_partner(PartnerEvent())
        elif action.kind is ActionKind.ACCEPT:
            assert pending_offer is not None
            agent_s, partner_s = _outcome_scores(pending_offer, "agent", scenario)
            session.events.append({"type": "mode", "by": "partner",
                                   "turn": session.turn, "mode": "accept"})
            outcome = {"type": "outcome", "result": "agreement", "accepted_by": "partner",
                       "proposer": "agent", "final_claims": dict(pending_offer.claims),
                       "turns": session.turn + 1,
                       "agent_score": to_wire(agent_s), "partner_score": to_wire(partner_s)}
            break
        else:
            session.observe_partner(
                PartnerEvent(offer=action.offer, statements=action.statements)
            )
            if action.offer is not None:
                pending_offer = None

        # --- agent move ---
        if session.turn >= scenario.max_turns:
            outcome = forced_walk("cap")
            break
        move = session.decide()
        session.commit_move(move)
        if move.trace is not None:
            traces.append(move.trace.to_json())
        if move.kind is AgentMoveKind.ASK:
            pending_question = move.ask
        elif move.kind is AgentMoveKind.OFFER:
            assert move.offer is not None
            pending_offer = move.offer
            persona_seen_agent_scores.append(
                score(move.offer, scenario, scenario.partner_prefs_true,
                      Side.COUNTERPART, validate=False)
            )
        elif move.kind is AgentMoveKind.ACCEPT:
            final = session.partner_offers[-1][1]
            agent_s, partner_s = _outcome_scores(final, "partner", scenario)
            outcome = {"type": "outcome", "result": "agreement", "accepted_by": "agent",
                       "proposer": "partner", "final_claims": dict(final.claims),
                       "turns": session.turn,
                       "agent_score": to_wire(agent_s), "partner_score": to_wire(partner_s)}
        else:  # walk
            outcome = {"type": "outcome", "result": "walk-away", "walked_by": "agent",
                       "forced": move.reason == "turn cap reached",
                       "reason": move.reason, "turns": session.turn,
                       "agent_score": to_wire(Fraction(0)),
                       "partner_score": to_wire(Fraction(0))}

    session.close(outcome)
    return Transcript(
        session_index=session_index,
        seed=seed,
        scenario=scenario,
        events=list(session.events),
        outcome=outcome,
        traces=traces,
    )


# --- scenario mixes ----------------------------------------------------------

ScenarioFactory = Callable[[random.Random], Scenario]


def default_mix(rng: random.Random) -> Scenario:
    """Even split of opposed- and identical-preference instances over random
    weight permutations."""
    agent_weights = rng.choice(campsite_permutations())
    if rng.random() < 0.5:
        order = sorted(agent_weights, key=agent_weights.get, reverse=True)
        values = sorted(agent_weights.values())
        partner = {issue: v for issue, v in zip(order, values)}
        kind = "integrative"
    else:
        partner = dict(agent_weights)
        kind = "distributive"
    return campsite_scenario(agent_weights, partner, scenario_id=f"campsite-{kind}")


def fixed_scenario(scenario: Scenario) -> ScenarioFactory:
    return lambda rng: scenario


# --- metrics -----------------------------------------------------------------

@dataclass(frozen=True)
class TTestResult:
    t: float | None
    p: float | None
    df: int
    degenerate: bool
    note: str = ""


def paired_t_test(sample_a: Sequence, sample_b: Sequence) -> TTestResult:
    """Standard paired t statistic with a two-sided p from the t distribution.
    Zero-variance differences are flagged rather than divided by."""
    if len(sample_a) != len(sample_b):
        raise ValueError("paired samples must have equal length")
    n = len(sample_a)
    if n < 2:
        raise ValueError("need at least two pairs")
    diffs = [Fraction(a) - Fraction(b) for a, b in zip(sample_a, sample_b)]
    mean = sum(diffs) / n
    var = sum((d - mean) ** 2 for d in diffs) / (n - 1)
    df = n - 1
    if var == 0:
        note = "zero-variance differences" + ("" if mean == 0 else " (constant shift)")
        return TTestResult(t=None, p=None, df=df, degenerate=True, note=note)
    t = float(mean) / (float(var) ** 0.5 / n**0.5)
    p = 2 * float(_scipy_stats.t.sf(abs(t), df))
    return TTestResult(t=t, p=p, df=df, degenerate=False)


@dataclass
class BatchMetrics:
    n: int
    agreements: int
    walkaways: int
    walk_away_rate: Fraction
    avg_score_all: tuple[Fraction, Fraction]
    avg_score_agreement: tuple[Fraction, Fraction] | None
    lambda_by_signal: dict[tuple[str, str], Fraction]
    tactic_distribution: dict[tuple[str, str, str], int]
    offer_delta_stats: dict[tuple[str, str], dict[str, Fraction]]
    pareto_membership_rate: tuple[Fraction, Fraction] | None
    t_test: TTestResult | None

    def to_rows(self) -> list[tuple[str, str, str]]:
        rows: list[tuple[str, str, str]] = [
            ("n", "", str(self.n)),
            ("agreements", "", str(self.agreements)),
            ("walkaways", "", str(self.walkaways)),
            ("walk_away_rate", "", to_wire(self.walk_away_rate)),
            ("avg_score_all", "agent", to_wire(self.avg_score_all[0])),
            ("avg_score_all", "partner", to_wire(self.avg_score_all[1])),
        ]
        if self.avg_score_agreement is not None:
            rows.append(("avg_score_agreement", "agent", to_wire(self.avg_score_agreement[0])))
            rows.append(("avg_score_agreement", "partner", to_wire(self.avg_score_agreement[1])))
        for (stance, fairness), lam in sorted(self.lambda_by_signal.items()):
            rows.append(("lambda_mean", f"{stance}|{fairness}", to_wire(lam)))
        for (stance, fairness, tactic), count in sorted(self.tactic_distribution.items()):
            rows.append(("tactic_count", f"{stance}|{fairness}|{tactic}", str(count)))
        for (stance, fairness), st in sorted(self.offer_delta_stats.items()):
            for key in ("mean", "min", "max"):
                rows.append((f"offer_delta_{key}", f"{stance}|{fairness}", to_wire(st[key])))
            rows.append(("offer_delta_count", f"{stance}|{fairness}", str(int(st["count"]))))
        if self.pareto_membership_rate is not None:
            rows.append(("pareto_membership_rate", "agent",
                         to_wire(self.pareto_membership_rate[0])))
            rows.append(("pareto_membership_rate", "partner",
                         to_wire(self.pareto_membership_rate[1])))
        if self.t_test is not None:
            if self.t_test.degenerate:
                rows.append(("t_test", "flag", self.t_test.note))
            else:
                rows.append(("t_test", "t", repr(self.t_test.t)))
                rows.append(("t_test", "p", repr(self.t_test.p)))
                rows.append(("t_test", "df", str(self.t_test.df)))
        return rows

    def to_csv(self) -> str:
        lines = ["metric,key,value"]
        for metric, key, value in self.to_rows():
            lines.append(f"{metric},{key},{value}")
        return "\n".join(lines) + "\n"


def session_seed(master_seed: int, index: int) -> int:
    return master_seed * 1_000_003 + index


def run_batch(
    n: int,
    scenario_factory: ScenarioFactory,
    persona_config: PersonaConfig,
    engine_config: EngineConfig,
    master_seed: int = 0,
    compute_pareto: bool = True,
) -> tuple[BatchMetrics, list[Transcript]]:
    """n independent seeded sessions, aggregated. Deterministic for a given
    master seed: per-session seeds come from a splittable counter and results
    merge in session order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    transcripts: list[Transcript] = []
    for i in range(n):
        seed = session_seed(master_seed, i)
        rng = random.Random(seed)
        scenario = scenario_factory(rng)
        transcripts.append(
            run_session(scenario, persona_config, engine_config,
                        seed=seed, session_index=i)
        )
    return aggregate(transcripts, compute_pareto=compute_pareto), transcripts


def aggregate(transcripts: Sequence[Transcript], compute_pareto: bool = True) -> BatchMetrics:
    n = len(transcripts)
    agreements = [t for t in transcripts if t.agreed]
    walkaways = n - len(agreements)

    def pair_sum(items: Iterable[Transcript]) -> tuple[Fraction, Fraction, int]:
        a = p = Fraction(0)
        count = 0
        for t in items:
            a += Fraction(t.outcome["agent_score"])
            p += Fraction(t.outcome["partner_score"])
            count += 1
        return a, p, count

    all_a, all_p, _ = pair_sum(transcripts)
    avg_all = (all_a / n, all_p / n)
    if agreements:
        agr_a, agr_p, agr_n = pair_sum(agreements)
        avg_agreement = (agr_a / agr_n, agr_p / agr_n)
    else:
        avg_agreement = None

    lam_sums: dict[tuple[str, str], list[Fraction]] = {}
    tactic_counts: dict[tuple[str, str, str], int] = {}
    delta_groups: dict[tuple[str, str], list[Fraction]] = {}
    for t in transcripts:
        prev_score: Fraction | None = None
        for trace in t.traces:
            cell = (trace["stance"], trace["fairness"])
            lam_sums.setdefault(cell, []).append(Fraction(trace["lambda"]))
            if trace.get("tactic"):
                key = (trace["stance"], trace["fairness"], trace["tactic"])
                tactic_counts[key] = tactic_counts.get(key, 0) + 1
            if trace.get("selected"):
                s_a = Fraction(trace["selected"]["s_a"])
                if prev_score is not None:
                    delta_groups.setdefault(cell, []).append(s_a - prev_score)
                prev_score = s_a
    lambda_by_signal = {cell: sum(vals) / len(vals) for cell, vals in lam_sums.items()}
    offer_delta_stats = {
        cell: {
            "mean": sum(vals) / len(vals),
            "min": min(vals),
            "max": max(vals),
            "count": Fraction(len(vals)),
        }
        for cell, vals in delta_groups.items()
    }

    pareto_rate = None
    if compute_pareto:
        member_agent = total_agent = member_partner = total_partner = 0
        for t in transcripts:
            report = pareto_report([t], t.scenario)
            member_agent += report["agent"]["members"]
            total_agent += report["agent"]["total"]
            member_partner += report["partner"]["members"]
            total_partner += report["partner"]["total"]
        pareto_rate = (
            Fraction(member_agent, total_agent) if total_agent else Fraction(0),
            Fraction(member_partner, total_partner) if total_partner else Fraction(0),
        )

    t_result = None
    if len(agreements) >= 2:
        a_scores = [Fraction(t.outcome["agent_score"]) for t in agreements]
        p_scores = [Fraction(t.outcome["partner_score"]) for t in agreements]
        t_result = paired_t_test(a_scores, p_scores)

    return BatchMetrics(
        n=n,
        agreements=len(agreements),
        walkaways=walkaways,
        walk_away_rate=Fraction(walkaways, n),
        avg_score_all=avg_all,
        avg_score_agreement=avg_agreement,
        lambda_by_signal=lambda_by_signal,
        tactic_distribution=tactic_counts,
        offer_delta_stats=offer_delta_stats,
        pareto_membership_rate=pareto_rate,
        t_test=t_result,
    )


_FRONTIER_CACHE: dict[tuple, tuple] = {}


def _frontier_for(scenario: Scenario):
    key = scenario.key()
    cached = _FRONTIER_CACHE.get(key)
    if cached is None:
        cached = pareto_frontier(scenario, scenario.agent_prefs, scenario.partner_prefs_true)
        _FRONTIER_CACHE[key] = cached
    return cached


def pareto_report(transcripts: Sequence[Transcript], scenario: Scenario) -> dict:
    """Frontier membership and Chebyshev distances for each side's offers,
    against the scenario's unconstrained frontier."""
    frontier = _frontier_for(scenario)
    out: dict = {}
    for side_name in ("agent", "partner"):
        members = 0
        distances: list[Fraction] = []
        for t in transcripts:
            for event in t.events:
                if event.get("type") != "offer" or event.get("by") != side_name:
                    continue
                offer = Offer(event["claims"])
                if side_name == "agent":
                    pair = ScorePair(
                        score(offer, scenario, scenario.agent_prefs, Side.PROPOSER,
                              validate=False),
                        score(offer, scenario, scenario.partner_prefs_true, Side.COUNTERPART,
                              validate=False),
                    )
                else:
                    pair = ScorePair(
                        score(offer, scenario, scenario.agent_prefs, Side.COUNTERPART,
                              validate=False),
                        score(offer, scenario, scenario.partner_prefs_true, Side.PROPOSER,
                              validate=False),
                    )
                distances.append(frontier_distance(pair, frontier))
                if is_pareto_member(pair, frontier):
                    members += 1
        out[side_name] = {
            "members": members,
            "total": len(distances),
            "rate": Fraction(members, len(distances)) if distances else Fraction(0),
            "distances": distances,
        }
    return out


def ablate(
    alpha_grid: Sequence[Fraction],
    n: int,
    scenario_factory: ScenarioFactory,
    persona_config: PersonaConfig,
    engine_config: EngineConfig,
    master_seed: int = 0,
) -> list[dict]:
    """One batch per final-score weight setting; rows shaped like the score/
    walk-away sweep table."""
    rows = []
    for alpha in alpha_grid:
        config = engine_config.with_weights(Fraction(alpha), 1 - Fraction(alpha))
        metrics, _ = run_batch(n, scenario_factory, persona_config, config,
                               master_seed=master_seed, compute_pareto=False)
        agr = metrics.avg_score_agreement
        rows.append({
            "alpha": to_wire(Fraction(alpha)),
            "beta": to_wire(1 - Fraction(alpha)),
            "avg_agent_all": to_wire(metrics.avg_score_all[0]),
            "avg_partner_all": to_wire(metrics.avg_score_all[1]),
            "avg_agent_agreement": to_wire(agr[0]) if agr else "",
            "avg_partner_agreement": to_wire(agr[1]) if agr else "",
            "walk_away_rate": to_wire(metrics.walk_away_rate),
        })
    return rows


def ablation_csv(rows: Sequence[dict]) -> str:
    header = ["alpha", "beta", "avg_agent_all", "avg_partner_all",
              "avg_agent_agreement", "avg_partner_agreement", "walk_away_rate"]
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(row[h] for h in header))
    return "\n".join(lines) + "\n"
