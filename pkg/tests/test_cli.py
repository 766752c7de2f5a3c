from __future__ import annotations

import json

from negokit.cli import main


def test_scenario_pareto_simulate_analyze_roundtrip(tmp_path):
    scenario_path = tmp_path / "campsite.json"
    assert main(["scenario", "campsite-integrative", "--out", str(scenario_path)]) == 0
    data = json.loads(scenario_path.read_text())
    assert {i["name"] for i in data["issues"]} == {"food", "water", "firewood"}

    frontier_path = tmp_path / "frontier.csv"
    assert main(["pareto", "--scenario", str(scenario_path),
                 "--out", str(frontier_path)]) == 0
    rows = frontier_path.read_text().strip().splitlines()
    assert len(rows) == 65  # header + 64 allocations
    assert rows[0] == "claim_food,claim_water,claim_firewood,agent_score,partner_score,member"
    members = [r for r in rows[1:] if r.endswith(",true")]
    assert "3,3,0,27,15,true" in rows

    runs_path = tmp_path / "runs.jsonl"
    assert main(["simulate", "--scenario", str(scenario_path), "--partner", "base",
                 "--n", "3", "--seed", "7", "--out", str(runs_path)]) == 0
    lines = [json.loads(l) for l in runs_path.read_text().splitlines()]
    assert sum(1 for l in lines if l.get("type") == "session-start") == 3
    assert sum(1 for l in lines if l.get("type") == "outcome") == 3

    metrics_path = tmp_path / "metrics.csv"
    assert main(["analyze", "--in", str(runs_path), "--out", str(metrics_path)]) == 0
    text = metrics_path.read_text()
    assert text.startswith("metric,key,value")
    assert "walk_away_rate" in text


def test_simulate_deterministic_output(tmp_path):
    out_a = tmp_path / "a.jsonl"
    out_b = tmp_path / "b.jsonl"
    for out in (out_a, out_b):
        main(["simulate", "--scenario", "mix", "--n", "4", "--seed", "11",
              "--no-pareto", "--out", str(out)])
    assert out_a.read_bytes() == out_b.read_bytes()


def test_ablate_csv_shape(tmp_path):
    out = tmp_path / "ablation.csv"
    assert main(["ablate", "--alpha-grid", "0,1", "--n", "6", "--seed", "3",
                 "--out", str(out)]) == 0
    rows = out.read_text().strip().splitlines()
    assert rows[0].startswith("alpha,beta,")
    assert len(rows) == 3
    assert rows[1].startswith("0,1,") and rows[2].startswith("1,0,")
