"""Inferred partner preferences: asking, inference, consistency, re-inference.

The counterpart's utterances arrive pre-structured as PreferenceStatement
values (extraction from raw text is out of scope); everything downstream is a
deterministic function of the statement set and the offer histories.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import permutations
from typing import Sequence

from .domain import IssueKind, Offer, PreferenceProfile, Scenario
from .oracle import Side, score


class Relation(str, Enum):
    HIGHEST = "highest"
    LOWEST = "lowest"
    GREATER_THAN = "greater-than"


@dataclass(frozen=True)
class PreferenceStatement:
    issue: str
    relation: Relation
    other_issue: str | None = None
    source_turn: int = 0

    def __post_init__(self) -> None:
        if self.relation is Relation.GREATER_THAN and not self.other_issue:
            raise ValueError("greater-than needs the other issue")

    def to_json(self) -> dict:
        out = {"type": "statement", "issue": self.issue,
               "relation": self.relation.value, "turn": self.source_turn}
        if self.other_issue:
            out["other_issue"] = self.other_issue
        return out

    @staticmethod
    def from_json(data: dict) -> "PreferenceStatement":
        return PreferenceStatement(
            issue=data["issue"],
            relation=Relation(data["relation"]),
            other_issue=data.get("other_issue"),
            source_turn=int(data.get("turn", 0)),
        )


class IPPStatus(str, Enum):
    ABSENT = "absent"
    INFERRED = "inferred"
    FALLBACK_OPPOSITE = "fallback-opposite"


class ContradictionError(ValueError):
    """Raised when no weight assignment satisfies the statements."""

    def __init__(self, conflicting: Sequence[PreferenceStatement]):
        pairs = ", ".join(f"{s.issue}:{s.relation.value}" for s in conflicting)
        super().__init__(f"contradictory preference statements ({pairs})")
        self.conflicting = tuple(conflicting)


@dataclass(frozen=True)
class IPPState:
    profile: PreferenceProfile | None
    statements: tuple[PreferenceStatement, ...] = ()
    status: IPPStatus = IPPStatus.ABSENT

    @property
    def present(self) -> bool:
        return self.profile is not None


class ViolationKind(str, Enum):
    SCORE_REGRESSION = "score-regression"
    STATEMENT_CONTRADICTION = "statement-contradiction"


@dataclass(frozen=True)
class ConsistencyViolation:
    kind: ViolationKind
    detail: str


@dataclass(frozen=True)
class QuestionDescriptor:
    """What to ask next: the counterpart's top or bottom priority."""

    ask: str  # "highest" | "lowest"

    def text(self) -> str:
        if self.ask == "highest":
            return "Which issue matters most to you?"
        return "Which issue matters least to you?"


def _satisfies(assignment: dict[str, Fraction], statement: PreferenceStatement) -> bool:
    w = assignment[statement.issue]
    if statement.relation is Relation.HIGHEST:
        return w == max(assignment.values())
    if statement.relation is Relation.LOWEST:
        return w == min(assignment.values())
    return w > assignment[statement.other_issue]  # type: ignore[index]


def _ranking_pinned(
    issues: Sequence[str],
    statements: Sequence[PreferenceStatement],
    value_set: Sequence[Fraction],
) -> bool:
    sat = _satisfying_assignments(issues, statements, value_set)
    return len(sat) == 1


def _satisfying_assignments(
    issues: Sequence[str],
    statements: Sequence[PreferenceStatement],
    value_set: Sequence[Fraction],
) -> list[dict[str, Fraction]]:
    seen: set[tuple] = set()
    out: list[dict[str, Fraction]] = []
    for perm in permutations(value_set):
        if perm in seen:
            continue
        seen.add(perm)
        assignment = dict(zip(issues, perm))
        if all(_satisfies(assignment, s) for s in statements):
            out.append(assignment)
    return out


def next_question(
    ipp: IPPState,
    scenario: Scenario,
    value_set: Sequence[Fraction],
    asked_highest: bool = False,
    asked_lowest: bool = False,
) -> QuestionDescriptor | None:
    """Ask for the top priority first, then the bottom one; stop once the
    statements pin a unique ranking or both questions are spent."""
    issues = scenario.issue_names()
    statements = ipp.statements
    if _ranking_pinned(issues, statements, value_set):
        return None
    has_highest = any(s.relation is Relation.HIGHEST for s in statements)
    if not has_highest and not asked_highest:
        return QuestionDescriptor(ask="highest")
    if not asked_lowest:
        return QuestionDescriptor(ask="lowest")
    return None


def _oppositeness_key(
    assignment: dict[str, Fraction],
    own_prefs: PreferenceProfile,
    issues: Sequence[str],
) -> tuple:
    # Most-opposite first: minimal inner product with own weights, then
    # lexicographically smallest weight tuple in issue order for determinism.
    inner = sum(assignment[i] * own_prefs.weight(i) for i in issues)
    return (inner, tuple(assignment[i] for i in issues))


def _find_conflicting_pair(
    issues: Sequence[str],
    statements: Sequence[PreferenceStatement],
    value_set: Sequence[Fraction],
) -> Sequence[PreferenceStatement]:
    for i in range(len(statements)):
        for j in range(i + 1, len(statements)):
            pair = [statements[i], statements[j]]
            if not _satisfying_assignments(issues, pair, value_set):
                return pair
    return statements


def _opposite_multipliers(own_prefs: PreferenceProfile, scenario: Scenario) -> dict:
    """Reassign the agent's own multiplier values to options in reverse
    ranking order; statements carry no option-level evidence."""
    out: dict[str, dict[str, Fraction]] = {}
    for spec in scenario.issues:
        if spec.kind is not IssueKind.CATEGORICAL:
            continue
        ranked = sorted(
            spec.options, key=lambda o: (own_prefs.multiplier(spec.name, o), o)
        )
        values = sorted(
            (own_prefs.multiplier(spec.name, o) for o in spec.options), reverse=True
        )
        out[spec.name] = dict(zip(ranked, values))
    return out


def infer_profile(
    statements: Sequence[PreferenceStatement],
    value_set: Sequence[Fraction],
    own_prefs: PreferenceProfile,
    scenario: Scenario,
) -> IPPState:
    """Assign the scenario's weight multiset to issues.

    Statements that pin a unique ranking win outright; unresolved rankings are
    filled so the result is maximally opposite to the agent's own weights.
    With no statements at all the result is exactly the reverse-ranked
    permutation of the agent's weights.
    """
    issues = scenario.issue_names()
    for s in statements:
        if s.issue not in issues or (s.other_issue and s.other_issue not in issues):
            raise ValueError(f"statement references unknown issue: {s.issue}")
    candidates = _satisfying_assignments(issues, statements, value_set)
    if not candidates:
        raise ContradictionError(_find_conflicting_pair(issues, statements, value_set))
    chosen = min(candidates, key=lambda a: _oppositeness_key(a, own_prefs, issues))
    status = IPPStatus.INFERRED if statements else IPPStatus.FALLBACK_OPPOSITE
    profile = PreferenceProfile(
        weights=chosen, option_multipliers=_opposite_multipliers(own_prefs, scenario)
    )
    return IPPState(profile=profile, statements=tuple(statements), status=status)


def check_consistency(
    ipp: IPPState,
    own_offer_history: Sequence[tuple[int, Offer]],
    partner_offer_history: Sequence[tuple[int, Offer]],
    statements: Sequence[PreferenceStatement],
    scenario: Scenario,
) -> ConsistencyViolation | None:
    """Two checks against the current IPP.

    1. Score regression: the partner's self-score in their latest offer is
       strictly below what the agent's preceding offer already gave them.
    2. A statement disagrees with the IPP ordering.
    """
    if ipp.profile is None:
        return None
    profile = ipp.profile
    if partner_offer_history:
        p_turn, p_offer = partner_offer_history[-1]
        prior_own = [entry for entry in own_offer_history if entry[0] < p_turn]
        if prior_own:
            _, a_offer = prior_own[-1]
            p_self = score(p_offer, scenario, profile, Side.PROPOSER, validate=False)
            p_in_agent = score(a_offer, scenario, profile, Side.COUNTERPART, validate=False)
            if p_self < p_in_agent:
                return ConsistencyViolation(
                    ViolationKind.SCORE_REGRESSION,
                    f"partner score in agent offer ({p_in_agent}) > "
                    f"partner score in partner offer ({p_self})",
                )
    assignment = {name: profile.weight(name) for name in scenario.issue_names()}
    for s in statements:
        if not _satisfies(assignment, s):
            return ConsistencyViolation(
                ViolationKind.STATEMENT_CONTRADICTION,
                f"statement {s.issue}:{s.relation.value} disagrees with current profile",
            )
    return None


def update_ipp(
    ipp: IPPState,
    statements: Sequence[PreferenceStatement],
    own_offer_history: Sequence[tuple[int, Offer]],
    partner_offer_history: Sequence[tuple[int, Offer]],
    value_set: Sequence[Fraction],
    own_prefs: PreferenceProfile,
    scenario: Scenario,
) -> IPPState:
    """Re-infer from the full statement set.

    When statements underdetermine the ranking, prefer the assignment under
    which the partner's own offers look rational: maximize the number of
    (agent offer at t-1, partner offer at t) pairs where the partner's offer
    self-scores at least what the agent had already put on the table. With no
    statements the plain opposite-of-own fallback is kept verbatim.
    """
    if not statements:
        return infer_profile((), value_set, own_prefs, scenario)
    issues = scenario.issue_names()
    candidates = _satisfying_assignments(issues, statements, value_set)
    if not candidates:
        raise ContradictionError(_find_conflicting_pair(issues, statements, value_set))

    pairs: list[tuple[Offer, Offer]] = []
    for p_turn, p_offer in partner_offer_history:
        prior_own = [entry for entry in own_offer_history if entry[0] < p_turn]
        if prior_own:
            pairs.append((prior_own[-1][1], p_offer))

    def rationality(assignment: dict[str, Fraction]) -> int:
        profile = PreferenceProfile(weights=assignment)
        good = 0
        for a_offer, p_offer in pairs:
            p_self = score(p_offer, scenario, profile, Side.PROPOSER, validate=False)
            p_in_agent = score(a_offer, scenario, profile, Side.COUNTERPART, validate=False)
            if p_self >= p_in_agent:
                good += 1
        return good

    chosen = min(
        candidates,
        key=lambda a: (-rationality(a), _oppositeness_key(a, own_prefs, issues)),
    )
    profile = PreferenceProfile(
        weights=chosen, option_multipliers=_opposite_multipliers(own_prefs, scenario)
    )
    return IPPState(profile=profile, statements=tuple(statements), status=IPPStatus.INFERRED)
