"""Golden-file regression runs over a directory of model files.

Layout: ``<dir>/<name>.smf``, optional ``<dir>/<name>.basis*.csv`` and
``<dir>/golden/<name>.json``.  A golden file looks like::

    {"model": "sphere2",
     "expected": {"cat": {"value": 1, "source": "TRIVIAL: ..."},
                  "tc": {"value": {"2": 2, "3": 3}, "source": "DERIVED: ..."}}}

``source`` must start with PAPER, DERIVED or TRIVIAL.
"""
from __future__ import annotations

import json
from pathlib import Path

from .bounds import assemble
from .cli import sibling_bases
from .errors import SullivanError
from .invariants import DEFAULT_DIM_CAP, L_length, analyze, category, cuplength, zcl
from .model import BasisChange
from .modelfile import load_model
from .omega import extract_omega, verify

SOURCES = ("PAPER", "DERIVED", "TRIVIAL")


def load_golden(path: Path) -> dict:
    data = json.loads(path.read_text())
    for key, entry in data.get("expected", {}).items():
        src = entry.get("source", "")
        if not src.startswith(SOURCES):
            raise ValueError(f"{path.name}: {key} has source {src!r}, expected a {'/'.join(SOURCES)} tag")
    return data


def _rs(values: dict) -> list[int]:
    return sorted(int(r) for r in values)


def compute(key: str, expected, ctx: dict):
    """The machine value for one golden key, in the golden file's shape."""
    m, an = ctx["m"], ctx["an"]
    if key == "chi_pi":
        return m.chi_pi()
    if key == "cat":
        return category(an).value
    if key == "cl":
        return cuplength(an.H)
    if key == "formal_dimension":
        return m.formal_dimension_estimate()
    if key in ("elliptic", "formal", "pure", "coformal"):
        return getattr(an.flags, key)
    if key == "cohomology_dims":
        return {str(k): d for k, d in an.H.dims().items() if d}
    if key == "L":
        bases = ctx["bases"] or [BasisChange.identity(len(m.even))]
        return max(L_length(m, B) for B in bases)
    if key == "zcl":
        return {str(r): zcl(m, an.H, r, ctx["cap"]) for r in _rs(expected)}
    if key in ("tc", "tc_interval"):
        certs = assemble(an, _rs(expected), ctx["bases"], ctx["cap"])
        if key == "tc":
            return {str(c.r): c.exact for c in certs}
        return {str(c.r): [c.lower, c.upper] for c in certs}
    if key == "omega_checks":
        return all(verify(extract_omega(m), an.H).values())
    raise KeyError(f"unknown golden key {key!r}")


def run_entry(path: Path, cap: int | None = DEFAULT_DIM_CAP) -> dict:
    golden_path = path.parent / "golden" / f"{path.stem}.json"
    record = {"model": path.stem, "checked": 0, "mismatches": [], "values": {}}
    try:
        m = load_model(path)
        ctx = {"m": m, "an": analyze(m), "bases": sibling_bases(path), "cap": cap}
        if not golden_path.exists():
            record["mismatches"].append("no golden file")
            return record
        expected = load_golden(golden_path)["expected"]
        for key in sorted(expected):
            want = expected[key]["value"]
            got = compute(key, want, ctx)
            record["values"][key] = got
            record["checked"] += 1
            if got != want:
                record["mismatches"].append(f"{key}: expected {want!r} ({expected[key]['source']}), got {got!r}")
    except (SullivanError, ValueError, KeyError) as exc:
        record["error"] = f"{type(exc).__name__}: {exc}"
    return record


def run_corpus(directory: Path, cap: int | None = DEFAULT_DIM_CAP) -> list[dict]:
    return [run_entry(p, cap) for p in sorted(Path(directory).glob("*.smf"))]
