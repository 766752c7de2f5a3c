"""Command-line interface: pareto, simulate, analyze, ablate, serve, scenario."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .domain import EngineConfig, Scenario, scenario_dumps, scenario_loads
from .oracle import pareto_frontier, scored_allocations
from .personas import PersonaConfig, PersonaKind
from .rational import dumps_wire, rat, to_wire
from .scenarios import BUILTIN_SCENARIOS
from .simulator import (
    Transcript,
    ablate,
    ablation_csv,
    aggregate,
    default_mix,
    fixed_scenario,
    run_batch,
)


def _load_scenario(path: str) -> Scenario:
    return scenario_loads(Path(path).read_text(encoding="utf-8"))


def _claims_header(scenario: Scenario) -> list[str]:
    return [f"claim_{name}" for name in scenario.issue_names()]


def cmd_pareto(args: argparse.Namespace) -> int:
    scenario = _load_scenario(args.scenario)
    frontier = pareto_frontier(scenario, scenario.agent_prefs, scenario.partner_prefs_true)
    frontier_pairs = {(pair.agent, pair.partner) for _, pair in frontier}
    lines = [",".join(_claims_header(scenario) + ["agent_score", "partner_score", "member"])]
    for offer, s_a, s_p in scored_allocations(
        scenario, scenario.agent_prefs, scenario.partner_prefs_true
    ):
        member = (s_a, s_p) in frontier_pairs
        claims = [str(offer.claims[name]) for name in scenario.issue_names()]
        lines.append(",".join(claims + [to_wire(s_a), to_wire(s_p), str(member).lower()]))
    Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(lines) - 1} allocations ({len(frontier)} frontier members) to {args.out}")
    return 0


def _persona_config(args: argparse.Namespace) -> PersonaConfig:
    return PersonaConfig(kind=PersonaKind(args.partner))


def _engine_config(args: argparse.Namespace) -> EngineConfig:
    kwargs = {}
    if getattr(args, "alpha", None) is not None:
        alpha = rat(args.alpha)
        kwargs["alpha"] = alpha
        kwargs["beta"] = 1 - alpha
    if getattr(args, "beta", None) is not None:
        kwargs["beta"] = rat(args.beta)
    if getattr(args, "batna", None) is not None:
        kwargs["batna"] = rat(args.batna)
    return EngineConfig(**kwargs)


def _scenario_factory(args: argparse.Namespace):
    if args.scenario == "mix":
        return default_mix
    return fixed_scenario(_load_scenario(args.scenario))


def _write_transcripts(transcripts: list[Transcript], out: str) -> None:
    with Path(out).open("w", encoding="utf-8") as handle:
        for t in transcripts:
            header = {
                "type": "session-start", "session": t.session_index, "seed": t.seed,
                "scenario": json.loads(scenario_dumps(t.scenario)),
            }
            handle.write(dumps_wire(header) + "\n")
            for event in t.events:
                handle.write(dumps_wire({"session": t.session_index, **event}) + "\n")


def cmd_simulate(args: argparse.Namespace) -> int:
    metrics, transcripts = run_batch(
        args.n,
        _scenario_factory(args),
        _persona_config(args),
        _engine_config(args),
        master_seed=args.seed,
        compute_pareto=not args.no_pareto,
    )
    _write_transcripts(transcripts, args.out)
    print(f"wrote {args.n} sessions to {args.out}")
    print(f"walk-away rate: {to_wire(metrics.walk_away_rate)}")
    agr = metrics.avg_score_agreement
    if agr:
        print(f"agreement means (agent vs partner): {to_wire(agr[0])} vs {to_wire(agr[1])}")
    return 0


def _read_transcripts(path: str) -> list[Transcript]:
    from .domain import scenario_from_json
    from .rational import loads_exact

    sessions: dict[int, dict] = {}
    with Path(path).open("r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line:
                continue
            event = loads_exact(line)
            index = event.get("session", 0)
            if event.get("type") == "session-start":
                sessions[index] = {
                    "seed": event.get("seed", 0),
                    "scenario": scenario_from_json(event["scenario"]),
                    "events": [],
                    "outcome": None,
                    "traces": [],
                }
                continue
            record = sessions[index]
            stripped = {k: v for k, v in event.items() if k != "session"}
            record["events"].append(stripped)
            if stripped.get("type") == "outcome":
                record["outcome"] = stripped
            if stripped.get("type") == "stage-trace":
                record["traces"].append(stripped["trace"])
    return [
        Transcript(session_index=i, seed=r["seed"], scenario=r["scenario"],
                   events=r["events"], outcome=r["outcome"], traces=r["traces"])
        for i, r in sorted(sessions.items())
    ]


def cmd_analyze(args: argparse.Namespace) -> int:
    transcripts = _read_transcripts(args.infile)
    metrics = aggregate(transcripts, compute_pareto=not args.no_pareto)
    Path(args.out).write_text(metrics.to_csv(), encoding="utf-8")
    print(f"wrote metrics for {metrics.n} sessions to {args.out}")
    return 0


def cmd_ablate(args: argparse.Namespace) -> int:
    grid = [rat(a.strip()) for a in args.alpha_grid.split(",") if a.strip()]
    rows = ablate(
        grid, args.n, _scenario_factory(args), _persona_config(args),
        _engine_config(args), master_seed=args.seed,
    )
    Path(args.out).write_text(ablation_csv(rows), encoding="utf-8")
    print(f"wrote {len(rows)} ablation rows to {args.out}")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(journal_dir=args.journal, static_dir=args.static)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def cmd_scenario(args: argparse.Namespace) -> int:
    factory = BUILTIN_SCENARIOS[args.name]
    text = scenario_dumps(factory(), indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
        print(f"wrote {args.name} to {args.out}")
    else:
        print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="negokit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pareto", help="emit every allocation with frontier membership")
    p.add_argument("--scenario", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_pareto)

    p = sub.add_parser("simulate", help="run seeded self-play sessions")
    p.add_argument("--scenario", default="mix",
                   help="scenario JSON path, or 'mix' for the built-in 50/50 mix")
    p.add_argument("--partner", choices=[k.value for k in PersonaKind], default="base")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--alpha", default=None)
    p.add_argument("--beta", default=None)
    p.add_argument("--batna", default=None)
    p.add_argument("--no-pareto", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="aggregate a transcript file into metrics CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--no-pareto", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("ablate", help="sweep final-score weights")
    p.add_argument("--alpha-grid", default="0,0.15,0.35,0.5,0.75,1")
    p.add_argument("--scenario", default="mix")
    p.add_argument("--partner", choices=[k.value for k in PersonaKind], default="base")
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--batna", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("serve", help="run the coaching HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)
    p.add_argument("--journal", default=None, help="directory for per-session event journals")
    p.add_argument("--static", default=None, help="directory of built UI assets to serve at /ui")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("scenario", help="emit a built-in scenario as JSON")
    p.add_argument("name", choices=sorted(BUILTIN_SCENARIOS))
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_scenario)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
