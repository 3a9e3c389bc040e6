"""JSON reports with exact rationals serialised as ``"p/q"`` strings."""

from __future__ import annotations

import json

from .engine import CheckReport, IterationResult, Mode, Verdict
from .mv import MVValue, format_number
from .valuations import Valuation, format_element


def _ordered(domain, subset) -> list[str]:
    return [format_element(e) for e in domain.ordered(subset)]


def valuation_json(v: Valuation) -> dict:
    return {format_element(e): format_number(x) for e, x in v.items()}


def check_json(r: CheckReport, domain) -> dict:
    delta = r.suggested_delta
    return {
        "mode": r.mode.value,
        "is_fixpoint": r.is_fixpoint,
        "verdict": r.verdict.value,
        "witness": _ordered(domain, r.witness),
        "suggested_delta": None if delta is None else format_number(delta.value),
        "corrected": None if r.corrected is None else valuation_json(r.corrected),
        "iterations": [_ordered(domain, U) for U in r.iterations],
    }


def iteration_json(mode: Mode, r: IterationResult, is_fixpoint: bool) -> dict:
    rounds = []
    for rnd, steps, delta in r.history:
        rounds.append({"round": rnd, "kleene_steps": steps,
                       "delta": None if delta is None else format_number(
                           delta.value if isinstance(delta, MVValue) else delta)})
    return {
        "mode": mode.value,
        "is_fixpoint": is_fixpoint,
        "verdict": (Verdict.CONFIRMED if r.confirmed else Verdict.INCONCLUSIVE).value,
        "witness": [],
        "suggested_delta": None,
        "corrected": valuation_json(r.valuation),
        "iterations": rounds,
        "residual": format_number(r.residual),
        "exhausted": r.exhausted,
    }


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"
