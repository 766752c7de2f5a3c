"""Built-in scenario factories used by the CLI, tests, and the simulator."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations

from .domain import IssueKind, IssueSpec, PreferenceProfile, Scenario

CAMPSITE_ISSUES = ("food", "water", "firewood")
CAMPSITE_VALUES = (5, 4, 3)


def campsite_profile(weights: dict[str, int]) -> PreferenceProfile:
    return PreferenceProfile(weights={k: Fraction(v) for k, v in weights.items()})


def campsite_scenario(
    agent_weights: dict[str, int] | None = None,
    partner_weights: dict[str, int] | None = None,
    max_turns: int = 40,
    scenario_id: str = "campsite",
) -> Scenario:
    """Three allocated issues, 3 units each, weights a permutation of 5/4/3.

    Default is the integrative pairing: the agent ranks food highest, the
    partner firewood.
    """
    agent_weights = agent_weights or {"food": 5, "water": 4, "firewood": 3}
    partner_weights = partner_weights or {"food": 3, "water": 4, "firewood": 5}
    issues = tuple(
        IssueSpec(name=name, kind=IssueKind.ALLOCATED, min_units=0, max_units=3)
        for name in CAMPSITE_ISSUES
    )
    return Scenario(
        scenario_id=scenario_id,
        issues=issues,
        agent_prefs=campsite_profile(agent_weights),
        partner_prefs_true=campsite_profile(partner_weights),
        max_turns=max_turns,
    )


def campsite_permutations() -> list[dict[str, int]]:
    return [dict(zip(CAMPSITE_ISSUES, perm)) for perm in permutations(CAMPSITE_VALUES)]


def integrative_campsite(agent_weights: dict[str, int] | None = None, **kwargs) -> Scenario:
    """Opposed preference orderings (reverse permutation)."""
    agent_weights = agent_weights or {"food": 5, "water": 4, "firewood": 3}
    order = sorted(agent_weights, key=agent_weights.get, reverse=True)
    values = sorted(agent_weights.values())
    partner_weights = {issue: v for issue, v in zip(order, values)}
    kwargs.setdefault("scenario_id", "campsite-integrative")
    return campsite_scenario(agent_weights, partner_weights, **kwargs)


def distributive_campsite(agent_weights: dict[str, int] | None = None, **kwargs) -> Scenario:
    """Identical preference orderings."""
    agent_weights = agent_weights or {"food": 5, "water": 4, "firewood": 3}
    kwargs.setdefault("scenario_id", "campsite-distributive")
    return campsite_scenario(agent_weights, dict(agent_weights), **kwargs)


def research_allocation_scenario(max_turns: int = 40) -> Scenario:
    """Four heterogeneous issues: two allocated pools of 5 units, a shared
    three-way lab choice, and a shared weekend-access flag."""
    issues = (
        IssueSpec(name="equipment", kind=IssueKind.ALLOCATED, min_units=0, max_units=5),
        IssueSpec(name="staff", kind=IssueKind.ALLOCATED, min_units=0, max_units=5),
        IssueSpec(
            name="lab",
            kind=IssueKind.CATEGORICAL,
            options=("computer", "chemistry", "biology"),
        ),
        IssueSpec(name="weekend", kind=IssueKind.BINARY),
    )
    agent = PreferenceProfile(
        weights={
            "staff": Fraction(4),
            "equipment": Fraction(3),
            "lab": Fraction(2),
            "weekend": Fraction(1),
        },
        option_multipliers={
            "lab": {
                "biology": Fraction(1),
                "chemistry": Fraction(3, 5),
                "computer": Fraction(1, 5),
            }
        },
    )
    partner = PreferenceProfile(
        weights={
            "equipment": Fraction(4),
            "weekend": Fraction(3),
            "staff": Fraction(2),
            "lab": Fraction(1),
        },
        option_multipliers={
            "lab": {
                "computer": Fraction(1),
                "chemistry": Fraction(3, 5),
                "biology": Fraction(1, 5),
            }
        },
    )
    return Scenario(
        scenario_id="research-allocation",
        issues=issues,
        agent_prefs=agent,
        partner_prefs_true=partner,
        max_turns=max_turns,
    )


BUILTIN_SCENARIOS = {
    "campsite-integrative": integrative_campsite,
    "campsite-distributive": distributive_campsite,
    "research-allocation": research_allocation_scenario,
}
