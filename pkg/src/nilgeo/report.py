"""Machine-readable reports.

A report is plain JSON with every exact quantity written as a rational
string.  There are no timestamps or host details, so the same command, input
and seed always give the same bytes.
"""

from __future__ import annotations

import json
from typing import Any, Sequence

from . import __version__
from .fileformat import format_rational
from .geodesics import GeodesicSolution, SpaceVerdict, Witness
from .ratlinalg import RatMatrix

TOOL = "nilgeo"


def rvec(v: Sequence | None) -> list[str] | None:
    return None if v is None else [format_rational(a) for a in v]


def rmat(m: RatMatrix | None) -> list[list[str]] | None:
    return None if m is None else [rvec(r) for r in m.to_lists()]


def solution_dict(sol: GeodesicSolution, labels: Sequence[str] = ()) -> dict:
    out: dict[str, Any] = {"status": sol.status}
    if sol.solvable:
        out["xi"] = rvec(sol.xi)
        out["k"] = format_rational(sol.k)
        out["family_basis"] = [rvec(d) for d in sol.family_basis]
        out["k_forced"] = sol.k_forced
    if labels:
        out["derivation_labels"] = list(labels)
    out["rank"] = sol.rank
    return out


def witness_dict(w: Witness) -> dict:
    c = w.candidate
    return {
        "pool": w.pool,
        "vector": rvec(c.y),
        "solvable": w.solvable,
        "null": w.null,
        "rank": w.rank,
        "regular": w.regular,
        "k": None if c.k is None else format_rational(c.k),
        "derivation": rmat(c.derivation),
    }


def verdict_dict(v: SpaceVerdict) -> dict:
    return {
        "verdict": v.verdict,
        "null_verdict": v.null_verdict,
        "presentation": v.presentation,
        "certified": v.certified,
        "bi_invariant": v.bi_invariant,
        "sample_stats": v.sample_stats,
        "witnesses": [witness_dict(w) for w in v.witnesses],
        "notes": list(v.notes),
    }


def make_report(command: str, source: str, digest: str, result: dict,
                seed: int | None = None, arguments: dict | None = None) -> dict:
    return {
        "command": command,
        "input": {"source": source, "sha256": digest},
        "arguments": arguments or {},
        "seed": seed,
        "tool": {"name": TOOL, "version": __version__},
        "result": result,
    }


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False, ensure_ascii=False) + "\n"
