from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from negokit.domain import scenario_to_json
from negokit.scenarios import integrative_campsite
from negokit.service import create_app


@pytest.fixture()
def client(tmp_path):
    app = create_app(journal_dir=str(tmp_path / "journal"))
    with TestClient(app) as c:
        yield c


def _create(client, scenario=None, config=None):
    payload = {"scenario": scenario_to_json(scenario or integrative_campsite())}
    if config:
        payload["config"] = config
    response = client.post("/sessions", json=payload)
    assert response.status_code == 200, response.text
    return response.json()


def test_healthz(client):
    assert client.get("/healthz").json() == {"status": "ok"}


def test_create_echoes_defaults(client):
    body = _create(client)
    assert body["config"]["alpha"] == "0.35"
    assert body["config"]["beta"] == "0.65"
    assert body["session_id"]


def test_create_rejects_malformed_scenario(client):
    scenario = scenario_to_json(integrative_campsite())
    del scenario["agent_prefs"]["weights"]["food"]
    response = client.post("/sessions", json={"scenario": scenario})
    assert response.status_code == 400
    body = response.json()
    assert body["error"]["code"] == "validation"
    assert body["error"]["details"]


def test_server_assigns_fresh_ids(client):
    a = _create(client)["session_id"]
    b = _create(client)["session_id"]
    assert a != b


def test_unknown_session_404(client):
    response = client.post("/sessions/nope/advise", json={})
    assert response.status_code == 404
    assert response.json()["error"]["code"] == "not-found"


def test_first_advice_asks_preference(client):
    sid = _create(client)["session_id"]
    advice = client.post(f"/sessions/{sid}/advise", json={}).json()
    assert advice["mode"] == "ask-preference"
    assert advice["ask"] == "highest"


def test_advise_is_pure_preview(client):
    sid = _create(client)["session_id"]
    event = {"statements": [{"type": "statement", "issue": "firewood",
                             "relation": "highest", "turn": 0}]}
    first = client.post(f"/sessions/{sid}/advise", json=event).json()
    second = client.post(f"/sessions/{sid}/advise", json=event).json()
    assert first == second
    report = client.get(f"/sessions/{sid}/report").json()
    assert report["events"] == []  # nothing committed


def test_advise_invalid_offer_rejected(client):
    sid = _create(client)["session_id"]
    response = client.post(f"/sessions/{sid}/advise", json={
        "offer": {"claims": {"food": 9, "water": 0, "firewood": 0}},
    })
    assert response.status_code == 400
    assert any("food" in d for d in response.json()["error"]["details"])


def _walk_coach_through_trace(client):
    """Create a session and play the documented integrative opening: two
    statements, then partner offers; commit the recommendation each turn."""
    sid = _create(client)["session_id"]

    def advise(event):
        response = client.post(f"/sessions/{sid}/advise", json=event)
        assert response.status_code == 200, response.text
        return response.json()

    def commit(event, move):
        payload = {"move": move}
        if event:
            payload["partner_event"] = event
        response = client.post(f"/sessions/{sid}/commit", json=payload)
        assert response.status_code == 200, response.text
        return response.json()

    return sid, advise, commit


def test_coach_loop_matches_engine(client):
    sid, advise, commit = _walk_coach_through_trace(client)
    # greeting: ask for the top priority
    advice = advise({})
    assert advice["mode"] == "ask-preference" and advice["ask"] == "highest"
    commit({}, {"type": "ask", "ask": "highest"})
    # partner says firewood is highest: ask for the bottom
    event = {"statements": [{"type": "statement", "issue": "firewood",
                             "relation": "highest", "turn": 2}]}
    advice = advise(event)
    assert advice["mode"] == "ask-preference" and advice["ask"] == "lowest"
    commit(event, {"type": "ask", "ask": "lowest"})
    # partner says food is lowest: propose the 30-point anchor
    event = {"statements": [{"type": "statement", "issue": "food",
                             "relation": "lowest", "turn": 4}]}
    advice = advise(event)
    assert advice["mode"] == "propose-offer"
    assert advice["trace"]["selected"]["s_a"] == "30"
    assert advice["recommended"]["claims"] == {"food": 3, "water": 3, "firewood": 1}
    assert advice["ipp"]["weights"] == {"food": "3", "water": "4", "firewood": "5"}
    commit(event, {"type": "offer", "offer": advice["recommended"]})
    # partner counters (17/21): unfair/neutral, five candidates
    event = {"offer": {"claims": {"food": 1, "water": 2, "firewood": 2}}}
    advice = advise(event)
    assert advice["mode"] == "propose-offer"
    trace = advice["trace"]
    assert trace["fairness"] == "unfair" and trace["stance"] == "neutral"
    assert len(trace["candidates"]) == 5
    summary = commit(event, {"type": "offer", "offer": advice["recommended"]})
    assert summary["own_offer_count"] == 2


def test_commit_accept_closes_session(client):
    sid, advise, commit = _walk_coach_through_trace(client)
    commit({}, {"type": "ask", "ask": "highest"})
    commit({"statements": [{"type": "statement", "issue": "firewood",
                            "relation": "highest", "turn": 2}]},
           {"type": "ask", "ask": "lowest"})
    commit({"statements": [{"type": "statement", "issue": "food",
                            "relation": "lowest", "turn": 4}]},
           {"type": "offer", "offer": {"claims": {"food": 3, "water": 3, "firewood": 1}}})
    # partner offer good enough to accept
    event = {"offer": {"claims": {"food": 0, "water": 0, "firewood": 2}}}
    advice = advise(event)
    assert advice["mode"] == "accept"
    summary = commit(event, {"type": "accept"})
    assert summary["closed"] is True
    assert summary["outcome"]["result"] == "agreement"
    # further commits conflict
    response = client.post(f"/sessions/{sid}/commit", json={"move": {"type": "accept"}})
    assert response.status_code == 409


def test_commit_human_override_recorded(client):
    sid, advise, commit = _walk_coach_through_trace(client)
    commit({}, {"type": "ask", "ask": "highest"})
    commit({"statements": [{"type": "statement", "issue": "firewood",
                            "relation": "highest", "turn": 2}]},
           {"type": "ask", "ask": "lowest"})
    # human plays a worse offer than recommended; it is recorded verbatim
    override = {"claims": {"food": 2, "water": 2, "firewood": 0}}
    commit({"statements": [{"type": "statement", "issue": "food",
                            "relation": "lowest", "turn": 4}]},
           {"type": "offer", "offer": override})
    report = client.get(f"/sessions/{sid}/report").json()
    own = [e for e in report["events"] if e.get("type") == "offer" and e["by"] == "agent"]
    assert own[0]["claims"] == override["claims"]
    # next turn's cap follows the committed (override) score
    advice = advise({"offer": {"claims": {"food": 1, "water": 2, "firewood": 2}}})
    assert advice["trace"]["s_max"] == "18"


def test_report_contains_frontier_and_distances(client):
    sid, advise, commit = _walk_coach_through_trace(client)
    report = client.get(f"/sessions/{sid}/report").json()
    assert report["events"] == []
    pairs = {(row["agent"], row["partner"]) for row in report["frontier"]}
    assert ("27", "15") in pairs
    commit({}, {"type": "ask", "ask": "highest"})
    commit({"statements": [{"type": "statement", "issue": "firewood",
                            "relation": "highest", "turn": 2}]},
           {"type": "ask", "ask": "lowest"})
    commit({"statements": [{"type": "statement", "issue": "food",
                            "relation": "lowest", "turn": 4}]},
           {"type": "offer", "offer": {"claims": {"food": 3, "water": 3, "firewood": 0}}})
    report = client.get(f"/sessions/{sid}/report").json()
    own_rows = [row for row in report["offers"] if row["by"] == "agent"]
    assert own_rows[0]["member"] is True and own_rows[0]["distance"] == "0"
    assert len(report["traces"]) == 1


def test_journal_reconstructs_state(client, tmp_path):
    sid, advise, commit = _walk_coach_through_trace(client)
    commit({}, {"type": "ask", "ask": "highest"})
    commit({"statements": [{"type": "statement", "issue": "firewood",
                            "relation": "highest", "turn": 2}]},
           {"type": "ask", "ask": "lowest"})
    commit({"statements": [{"type": "statement", "issue": "food",
                            "relation": "lowest", "turn": 4}]},
           {"type": "offer", "offer": {"claims": {"food": 3, "water": 3, "firewood": 1}}})
    report = client.get(f"/sessions/{sid}/report").json()

    from negokit.domain import EngineConfig, scenario_from_json
    from negokit.rational import loads_exact
    from negokit.session import AgentSession

    journal = tmp_path / "journal" / f"{sid}.jsonl"
    events = [loads_exact(line) for line in journal.read_text().splitlines() if line]
    rebuilt = AgentSession.replay(
        scenario_from_json(report["scenario"]), EngineConfig(), events
    )
    assert [(t, dict(c)) for t, c in
            ((t, o.claims) for t, o in rebuilt.own_offers)] == [
        (e["turn"], e["claims"]) for e in report["events"]
        if e.get("type") == "offer" and e["by"] == "agent"
    ]
    assert rebuilt.turn == report["events"][-1]["turn"] + 1
