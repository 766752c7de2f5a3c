"""Core domain types: issues, preference profiles, scenarios, offers, signals.

All types are immutable values; scoring inputs are exact rationals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Mapping

from .rational import from_wire, loads_exact, rat, to_wire

ClaimValue = Any  # int (allocated units) | str (categorical option) | bool


class IssueKind(str, Enum):
    ALLOCATED = "allocated-integer"
    CATEGORICAL = "shared-categorical"
    BINARY = "shared-binary"


class Fairness(str, Enum):
    FAIR = "fair"
    UNFAIR = "unfair"
    UNKNOWN = "unknown"


class Stance(str, Enum):
    GENEROUS = "generous"
    NEUTRAL = "neutral"
    GREEDY = "greedy"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class BehaviorSignal:
    """Turn-level read of the counterpart: offer equity and score direction."""

    fairness: Fairness
    stance: Stance


@dataclass(frozen=True)
class IssueSpec:
    """One negotiable issue.

    Allocated issues split a fixed pool of `max_units` (each side keeps at
    least `min_units`); categorical and binary issues take a single shared
    value scored by both parties.
    """

    name: str
    kind: IssueKind
    min_units: int = 0
    max_units: int = 0
    options: tuple[str, ...] = ()
    description: str = ""

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("issue needs a name")
        if self.kind is IssueKind.ALLOCATED:
            if not (self.max_units >= self.min_units >= 0):
                raise ValueError(f"{self.name}: need max >= min >= 0")
        elif self.kind is IssueKind.CATEGORICAL:
            if len(self.options) < 2 or len(set(self.options)) != len(self.options):
                raise ValueError(f"{self.name}: need >= 2 distinct options")

    def domain(self) -> tuple[ClaimValue, ...]:
        """Feasible claim values, ascending (allocated: units the proposer
        keeps, capped so the counterpart also stays within bounds)."""
        if self.kind is IssueKind.ALLOCATED:
            return tuple(range(self.min_units, self.max_units - self.min_units + 1))
        if self.kind is IssueKind.CATEGORICAL:
            return self.options
        return (False, True)


@dataclass(frozen=True)
class PreferenceProfile:
    """Per-issue point weights plus per-option multipliers for categorical
    issues (multiplier defaults to 1)."""

    weights: Mapping[str, Fraction]
    option_multipliers: Mapping[str, Mapping[str, Fraction]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", {k: rat(v) for k, v in self.weights.items()})
        object.__setattr__(
            self,
            "option_multipliers",
            {
                issue: {opt: rat(m) for opt, m in mults.items()}
                for issue, mults in self.option_multipliers.items()
            },
        )
        for issue, w in self.weights.items():
            if w < 0:
                raise ValueError(f"negative weight for {issue}")
        for issue, mults in self.option_multipliers.items():
            for opt, m in mults.items():
                if not (0 <= m <= 1):
                    raise ValueError(f"multiplier for {issue}:{opt} outside [0,1]")

    def weight(self, issue: str) -> Fraction:
        return self.weights[issue]

    def multiplier(self, issue: str, option: str) -> Fraction:
        return self.option_multipliers.get(issue, {}).get(option, Fraction(1))

    def key(self) -> tuple:
        return (
            tuple(sorted((k, v) for k, v in self.weights.items())),
            tuple(
                sorted(
                    (issue, tuple(sorted(m.items())))
                    for issue, m in self.option_multipliers.items()
                )
            ),
        )


@dataclass(frozen=True)
class Scenario:
    """A bargaining instance: issues, both parties' true preferences, and the
    turn budget. `partner_prefs_true` is simulator-side ground truth; the
    engine itself only ever sees inferred partner preferences."""

    scenario_id: str
    issues: tuple[IssueSpec, ...]
    agent_prefs: PreferenceProfile
    partner_prefs_true: PreferenceProfile
    max_turns: int = 40

    def __post_init__(self) -> None:
        if isinstance(self.issues, list):
            object.__setattr__(self, "issues", tuple(self.issues))
        names = [i.name for i in self.issues]
        if len(set(names)) != len(names):
            raise ValueError("duplicate issue names")
        if self.max_turns < 0:
            raise ValueError("max_turns must be >= 0")
        for label, prefs in (("agent", self.agent_prefs), ("partner", self.partner_prefs_true)):
            missing = set(names) - set(prefs.weights)
            extra = set(prefs.weights) - set(names)
            if missing or extra:
                raise ValueError(f"{label} profile must cover every issue exactly once "
                                 f"(missing={sorted(missing)}, extra={sorted(extra)})")
            for issue in self.issues:
                if issue.kind is IssueKind.CATEGORICAL:
                    mults = prefs.option_multipliers.get(issue.name, {})
                    unknown = set(mults) - set(issue.options)
                    if unknown:
                        raise ValueError(f"{label}: unknown options {sorted(unknown)} for {issue.name}")

    def issue(self, name: str) -> IssueSpec:
        for spec in self.issues:
            if spec.name == name:
                return spec
        raise KeyError(name)

    def issue_names(self) -> tuple[str, ...]:
        return tuple(i.name for i in self.issues)

    def key(self) -> tuple:
        return (
            self.scenario_id,
            tuple((i.name, i.kind.value, i.min_units, i.max_units, i.options) for i in self.issues),
            self.agent_prefs.key(),
            self.partner_prefs_true.key(),
        )


@dataclass(frozen=True)
class Offer:
    """One value per issue, from the proposer's perspective."""

    claims: Mapping[str, ClaimValue]

    def __post_init__(self) -> None:
        object.__setattr__(self, "claims", dict(self.claims))
        object.__setattr__(
            self, "_frozen", tuple(sorted(self.claims.items(), key=lambda kv: kv[0]))
        )

    def __hash__(self) -> int:
        return hash(self._frozen)  # type: ignore[attr-defined]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Offer):
            return NotImplemented
        return self._frozen == other._frozen  # type: ignore[attr-defined]

    def claim(self, issue: str) -> ClaimValue:
        return self.claims[issue]

    def key_for(self, scenario: Scenario) -> tuple:
        """Claim tuple in issue declaration order, for lexicographic rules.

        Allocated units compare numerically; binary True ranks above False;
        categorical options rank by declaration order (earlier = greater), so
        "greater" consistently means "keeps/locks the more preferred slot".
        """
        parts: list[Any] = []
        for spec in scenario.issues:
            v = self.claims[spec.name]
            if spec.kind is IssueKind.ALLOCATED:
                parts.append(int(v))
            elif spec.kind is IssueKind.BINARY:
                parts.append(1 if v else 0)
            else:
                parts.append(len(spec.options) - spec.options.index(v))
        return tuple(parts)


def validate_offer(offer: Offer, scenario: Scenario) -> list[str]:
    """Return every bound/membership violation; an empty list means valid.

    Violations are data (the counterpart may well send malformed offers),
    not exceptions.
    """
    violations: list[str] = []
    names = set(scenario.issue_names())
    for extra in sorted(set(offer.claims) - names):
        violations.append(f"{extra}: not an issue in this scenario")
    for spec in scenario.issues:
        if spec.name not in offer.claims:
            violations.append(f"{spec.name}: missing from offer")
            continue
        value = offer.claims[spec.name]
        if spec.kind is IssueKind.ALLOCATED:
            if isinstance(value, bool) or not isinstance(value, int):
                violations.append(f"{spec.name}: units must be an integer")
            elif value < spec.min_units:
                violations.append(f"{spec.name}: claims {value} units, below minimum {spec.min_units}")
            elif value > spec.max_units:
                violations.append(f"{spec.name}: over-allocated ({value} of {spec.max_units} units)")
            elif spec.max_units - value < spec.min_units:
                violations.append(
                    f"{spec.name}: over-allocated (counterpart left {spec.max_units - value}, "
                    f"below minimum {spec.min_units})"
                )
        elif spec.kind is IssueKind.CATEGORICAL:
            if value not in spec.options:
                violations.append(f"{spec.name}: {value!r} is not one of {list(spec.options)}")
        else:
            if not isinstance(value, bool):
                violations.append(f"{spec.name}: expected true/false")
    return violations


def complement_offer(offer: Offer, scenario: Scenario) -> Offer:
    """The same deal seen from the other side (allocated pools flip)."""
    claims: dict[str, ClaimValue] = {}
    for spec in scenario.issues:
        v = offer.claims[spec.name]
        if spec.kind is IssueKind.ALLOCATED:
            claims[spec.name] = spec.max_units - int(v)
        else:
            claims[spec.name] = v
    return Offer(claims)


@dataclass(frozen=True)
class EngineConfig:
    """Engine knobs. Defaults reproduce the documented three-issue setup:
    fairness threshold 4 points, TS weight 0.75, final-score weights
    0.35/0.65, five candidates, anchor at 5/6 of the possible max."""

    fairness_threshold: Fraction = Fraction(4)
    ts_weight: Fraction = Fraction(3, 4)
    alpha: Fraction = Fraction(35, 100)
    beta: Fraction = Fraction(65, 100)
    candidate_count: int = 5
    batna: Fraction | None = None  # resolved to PMS/3 when unset
    anchor_fraction: Fraction = Fraction(5, 6)
    lambda_table: Mapping[Stance, Fraction] = field(
        default_factory=lambda: {
            Stance.GREEDY: Fraction(9, 10),
            Stance.NEUTRAL: Fraction(1, 2),
            Stance.GENEROUS: Fraction(3, 10),
        }
    )
    concession_threshold: Fraction = Fraction(2)
    agent_floor_fraction: Fraction = Fraction(10, 36)
    partner_floor_fraction: Fraction = Fraction(5, 36)
    adapter_url: str | None = None
    adapter_timeout: float = 5.0
    adapter_retries: int = 1

    def __post_init__(self) -> None:
        for name in ("fairness_threshold", "ts_weight", "alpha", "beta",
                     "anchor_fraction", "concession_threshold",
                     "agent_floor_fraction", "partner_floor_fraction"):
            object.__setattr__(self, name, rat(getattr(self, name)))
        if self.batna is not None:
            object.__setattr__(self, "batna", rat(self.batna))
        object.__setattr__(
            self, "lambda_table", {Stance(k): rat(v) for k, v in self.lambda_table.items()}
        )
        for name in ("ts_weight", "alpha", "beta", "anchor_fraction"):
            v = getattr(self, name)
            if not (0 <= v <= 1):
                raise ValueError(f"{name} must lie in [0,1]")
        if self.alpha + self.beta != 1:
            raise ValueError("alpha + beta must equal 1")
        if self.fairness_threshold < 0:
            raise ValueError("fairness_threshold must be >= 0")
        if self.candidate_count < 1:
            raise ValueError("candidate_count must be >= 1")

    def resolved_batna(self, pms: Fraction) -> Fraction:
        return self.batna if self.batna is not None else pms / 3

    def with_weights(self, alpha: Fraction, beta: Fraction) -> "EngineConfig":
        from dataclasses import replace

        return replace(self, alpha=rat(alpha), beta=rat(beta))


# --- JSON codecs -----------------------------------------------------------

def config_to_json(config: EngineConfig) -> dict:
    return {
        "fairness_threshold": to_wire(config.fairness_threshold),
        "ts_weight": to_wire(config.ts_weight),
        "alpha": to_wire(config.alpha),
        "beta": to_wire(config.beta),
        "candidate_count": config.candidate_count,
        "batna": to_wire(config.batna) if config.batna is not None else None,
        "anchor_fraction": to_wire(config.anchor_fraction),
        "lambda_table": {k.value: to_wire(v) for k, v in config.lambda_table.items()},
        "concession_threshold": to_wire(config.concession_threshold),
        "agent_floor_fraction": to_wire(config.agent_floor_fraction),
        "partner_floor_fraction": to_wire(config.partner_floor_fraction),
        "adapter_url": config.adapter_url,
    }


def config_from_json(data: Mapping[str, Any]) -> EngineConfig:
    kwargs: dict[str, Any] = {}
    for name in ("fairness_threshold", "ts_weight", "alpha", "beta", "batna",
                 "anchor_fraction", "concession_threshold",
                 "agent_floor_fraction", "partner_floor_fraction"):
        if data.get(name) is not None:
            kwargs[name] = from_wire(data[name])
    if "candidate_count" in data:
        kwargs["candidate_count"] = int(data["candidate_count"])
    if "lambda_table" in data:
        kwargs["lambda_table"] = {
            Stance(k): from_wire(v) for k, v in data["lambda_table"].items()
        }
    for name in ("adapter_url",):
        if name in data:
            kwargs[name] = data[name]
    return EngineConfig(**kwargs)


def profile_to_json(prefs: PreferenceProfile) -> dict:
    out: dict[str, Any] = {"weights": {k: to_wire(v) for k, v in prefs.weights.items()}}
    if prefs.option_multipliers:
        out["option_multipliers"] = {
            issue: {opt: to_wire(m) for opt, m in mults.items()}
            for issue, mults in prefs.option_multipliers.items()
        }
    return out


def profile_from_json(data: Mapping[str, Any]) -> PreferenceProfile:
    return PreferenceProfile(
        weights={k: from_wire(v) for k, v in data["weights"].items()},
        option_multipliers={
            issue: {opt: from_wire(m) for opt, m in mults.items()}
            for issue, mults in data.get("option_multipliers", {}).items()
        },
    )


def scenario_to_json(scenario: Scenario) -> dict:
    issues = []
    for spec in scenario.issues:
        entry: dict[str, Any] = {"name": spec.name, "kind": spec.kind.value}
        if spec.kind is IssueKind.ALLOCATED:
            entry["min"] = spec.min_units
            entry["max"] = spec.max_units
        elif spec.kind is IssueKind.CATEGORICAL:
            entry["options"] = list(spec.options)
        if spec.description:
            entry["description"] = spec.description
        issues.append(entry)
    return {
        "id": scenario.scenario_id,
        "max_turns": scenario.max_turns,
        "issues": issues,
        "agent_prefs": profile_to_json(scenario.agent_prefs),
        "partner_prefs": profile_to_json(scenario.partner_prefs_true),
    }


def scenario_from_json(data: Mapping[str, Any]) -> Scenario:
    issues = []
    for entry in data["issues"]:
        kind = IssueKind(entry["kind"])
        issues.append(
            IssueSpec(
                name=entry["name"],
                kind=kind,
                min_units=int(entry.get("min", 0)),
                max_units=int(entry.get("max", 0)),
                options=tuple(entry.get("options", ())),
                description=entry.get("description", ""),
            )
        )
    return Scenario(
        scenario_id=data["id"],
        issues=tuple(issues),
        agent_prefs=profile_from_json(data["agent_prefs"]),
        partner_prefs_true=profile_from_json(data["partner_prefs"]),
        max_turns=int(data.get("max_turns", 40)),
    )


def scenario_loads(text: str) -> Scenario:
    return scenario_from_json(loads_exact(text))


def scenario_dumps(scenario: Scenario, **kwargs: Any) -> str:
    return json.dumps(scenario_to_json(scenario), **kwargs)


def offer_to_json(offer: Offer) -> dict:
    return {"claims": dict(offer.claims)}


def offer_from_json(data: Mapping[str, Any], scenario: Scenario | None = None) -> Offer:
    claims: dict[str, ClaimValue] = {}
    for issue, value in data["claims"].items():
        if scenario is not None:
            try:
                spec = scenario.issue(issue)
            except KeyError:
                claims[issue] = value
                continue
            if spec.kind is IssueKind.ALLOCATED and isinstance(value, (int, str)) \
                    and not isinstance(value, bool):
                value = int(value)
        claims[issue] = value
    return Offer(claims)
