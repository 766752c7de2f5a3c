"""External-model judge port.

When a judge endpoint is configured, candidate evaluation averages five calls
on a ten-point scale and tactic selection takes a five-sample majority. The
port is strictly optional: absence of the endpoint disables adapter mode, and
any failure falls back to the deterministic surrogate (flagged in the trace).
"""

from __future__ import annotations

from fractions import Fraction

import httpx

from .domain import BehaviorSignal
from .engine import CandidateOffer, SupportsJudge, TurnView
from .rational import from_wire, to_wire


class HttpAdapter(SupportsJudge):
    """JSON-over-HTTP judge. Request/response bodies:

    POST {url}/judge    {"claims": ..., "s_a": "26", "s_p_est": "14"}
                        -> {"ts": <0-10>, "si": <0-10>}  (averaged over 5 calls)
    POST {url}/tactic   {"fairness": ..., "stance": ..., "own_scores": [...],
                         "partner_self_scores": [...]}
                        -> {"tactic": "RC"}
    """

    def __init__(self, url: str, timeout: float = 5.0, retries: int = 1):
        self.url = url.rstrip("/")
        self.timeout = timeout
        self.retries = retries

    def _post(self, path: str, payload: dict) -> dict:
        last_error: Exception | None = None
        for _ in range(self.retries + 1):
            try:
                response = httpx.post(
                    f"{self.url}{path}", json=payload, timeout=self.timeout
                )
                response.raise_for_status()
                return response.json()
            except Exception as error:  # noqa: BLE001 - fallback is the contract
                last_error = error
        raise RuntimeError(f"judge endpoint failed: {last_error}")

    def judge_candidate(self, candidate: CandidateOffer) -> tuple[Fraction, Fraction]:
        payload = {
            "claims": dict(candidate.offer.claims),
            "s_a": to_wire(candidate.s_a),
            "s_p_est": to_wire(candidate.s_p_est),
        }
        ts_total = si_total = Fraction(0)
        for _ in range(5):
            data = self._post("/judge", payload)
            ts_total += from_wire(data["ts"])
            si_total += from_wire(data["si"])
        return ts_total / 5, si_total / 5

    def pick_tactic(self, signal: BehaviorSignal, view: TurnView) -> str:
        payload = {
            "fairness": signal.fairness.value,
            "stance": signal.stance.value,
            "own_scores": [to_wire(s) for s in view.own_scores],
            "partner_self_scores": [to_wire(s) for s in view.partner_self_scores],
        }
        return str(self._post("/tactic", payload)["tactic"])


def adapter_from_config(url: str | None, timeout: float, retries: int) -> HttpAdapter | None:
    if not url:
        return None
    return HttpAdapter(url, timeout=timeout, retries=retries)
