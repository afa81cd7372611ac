"""Command-line front end: ``sullivan-tc <verb> <model-file> [options]``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .bounds import assemble, generating_function, soundness_violations
from .cohomology import cohomology
from .errors import CapExceeded, HypothesisError, SullivanError, ValidationError
from .invariants import DEFAULT_DIM_CAP, L_length, analyze, category, invariant_report, zcl
from .model import BasisChange, ModelPresentation
from .modelfile import load_model
from .omega import extract_omega, verify

MAX_R = 6


class Refusal(SullivanError):
    """A rule or operation declined; fatal only under ``--strict``."""

    exit_code = 3


def parse_r(text: str, cap: int = MAX_R) -> list[int]:
    """``"3"``, ``"2..4"`` or ``"2,3,5"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            rs = list(range(int(lo), int(hi) + 1))
        else:
            rs = sorted({int(t) for t in text.split(",") if t.strip()})
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad r range {text!r}; use N, A..B or A,B,C")
    if not rs or min(rs) < 2:
        raise argparse.ArgumentTypeError("r values must be at least 2")
    if max(rs) > cap:
        raise argparse.ArgumentTypeError(f"r above the cap {cap}")
    return rs


def sibling_bases(path: Path) -> list[BasisChange]:
    """Basis files shipped next to a model: ``<stem>.basis*.csv``."""
    return [BasisChange.from_csv(p.read_text()) for p in sorted(path.parent.glob(f"{path.stem}.basis*.csv"))]


def _bases(args, path: Path) -> list[BasisChange]:
    if args.basis:
        return [BasisChange.from_csv(Path(b).read_text()) for b in args.basis]
    return sibling_bases(path)


def _load(args) -> tuple[ModelPresentation, Path]:
    path = Path(args.model)
    m = load_model(path)
    if args.assert_elliptic:
        m = m.with_metadata(elliptic=True)
    return m, path


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=str)


# -- verbs ---------------------------------------------------------------


def cmd_check(args) -> tuple[dict, str]:
    m, _ = _load(args)
    an = analyze(m)
    out = {"model": m.name, "generators": {g.name: g.degree for g in m.generators},
           "differential": {k: str(v) for k, v in m.differential.items()},
           "flags": an.flags.to_json(), "ellipticity": an.elliptic_certificate.to_json(), "notes": an.notes}
    if an.formality is not None:
        out["formality"] = an.formality.to_json()
    lines = [f"{m.name}: valid minimal model, {len(m.generators)} generators"]
    lines += [f"  {k}: {v}" for k, v in an.flags.to_json().items()]
    if not an.flags.elliptic:
        lines.append(f"  ellipticity: {an.elliptic_certificate.reason}")
    lines += [f"  note: {n}" for n in an.notes]
    return out, "\n".join(lines)


def cmd_invariants(args) -> tuple[dict, str]:
    m, path = _load(args)
    an = analyze(m)
    rep = invariant_report(an, args.r or [2], _bases(args, path), args.max_dim_cap, args.odd_mode)
    if args.strict and rep.cat.value is None:
        raise Refusal(rep.cat.provenance)
    out = {"model": m.name, **rep.to_json()}
    lines = [f"{m.name}", f"  chi_pi = {rep.chi_pi}",
             f"  cat = {rep.cat.value}  ({rep.cat.provenance})", f"  cl = {rep.cl}"]
    lines += [f"  zcl_{r} = {v}" for r, v in sorted(rep.zcl.items())]
    lines += [f"  L[{b}] = {v}" for b, v in sorted(rep.L.items())]
    lines += [f"  note: {n}" for n in rep.notes]
    return out, "\n".join(lines)


def cmd_cohomology(args) -> tuple[dict, str]:
    m, _ = _load(args)
    if args.up_to is not None:
        H = cohomology(m, args.up_to)
    else:
        H = analyze(m).H
    out = {"model": m.name, **H.to_json()}
    lines = [f"{m.name}: H^k dimensions up to degree {H.up_to}"]
    lines += [f"  H^{k}: {d}" for k, d in H.dims().items() if d]
    lines += [f"  [{i}] degree {c.degree}: {c.rep}" for i, c in enumerate(H.classes)]
    return out, "\n".join(lines)


def cmd_zcl(args) -> tuple[dict, str]:
    m, _ = _load(args)
    an = analyze(m)
    vals = {r: zcl(m, an.H, r, args.max_dim_cap) for r in (args.r or [2])}
    return ({"model": m.name, "zcl": {str(r): v for r, v in vals.items()}},
            "\n".join(f"zcl_{r} = {v}" for r, v in vals.items()))


def cmd_L(args) -> tuple[dict, str]:
    m, path = _load(args)
    bases = _bases(args, path) or [BasisChange.identity(len(m.even))]
    vals = {B.label: L_length(m, B, args.odd_mode) for B in bases}
    return ({"model": m.name, "odd_mode": args.odd_mode, "L": vals},
            "\n".join(f"L[{b}] = {v}" for b, v in vals.items()))


def cmd_omega(args) -> tuple[dict, str]:
    m, _ = _load(args)
    b = extract_omega(m)
    out = {"model": m.name, **b.to_json()}
    lines = [f"Omega (degree {b.omega.degree()}, {len(b.omega.terms)} terms) = {b.omega}",
             f"omega' = {b.omega_prime}", f"delta = {b.delta}"]
    if args.verify:
        an = analyze(m)
        checks = verify(b, an.H)
        out["checks"] = checks
        lines.append("checks:")
        lines += [f"  {'ok  ' if ok else 'FAIL'} {name}" for name, ok in checks.items()]
        lines.append("membership certificate:")
        lines += [f"  {c} * " + " * ".join(f"({n} - {n}')" for n in names) for c, names in b.certificate.to_json()]
        if not all(checks.values()):
            out["failed"] = [k for k, ok in checks.items() if not ok]
    return out, "\n".join(lines)


def _certs(args):
    m, path = _load(args)
    an = analyze(m)
    certs = assemble(an, args.r or [2, 3], _bases(args, path), args.max_dim_cap, args.odd_mode)
    return m, an, certs


def cmd_tc(args) -> tuple[dict, str]:
    m, an, certs = _certs(args)
    bad = soundness_violations(certs)
    if args.strict:
        missing = [c.r for c in certs if c.exact is None]
        if missing:
            raise Refusal(f"no exact value for r={missing[0]}")
    out = {"model": m.name, "certificates": [c.to_json() for c in certs]}
    if bad:
        out["soundness_violations"] = bad
    return out, "\n\n".join(c.render() for c in certs)


def cmd_genfn(args) -> tuple[dict, str]:
    m, an, certs = _certs(args)
    cat = category(an)
    if cat.value is None:
        raise HypothesisError(cat.provenance)
    gf = generating_function(certs, cat.value)
    return ({"model": m.name, "cat": cat.value, **gf.to_json()},
            f"F(x) = sum_r {gf.sequence} x^r = {gf.render()}\nP(1) = {gf.P(1)} = cat")


def cmd_corpus_run(args) -> tuple[dict, str]:
    from .corpus import run_corpus

    records = run_corpus(Path(args.model), args.max_dim_cap)
    failures = [r for r in records if r["mismatches"] or r.get("error")]
    out = {"corpus": str(args.model), "records": records, "failed": len(failures)}
    lines = []
    for r in records:
        status = "ok" if not (r["mismatches"] or r.get("error")) else "MISMATCH"
        lines.append(f"{status:8} {r['model']}  ({r['checked']} values checked)")
        lines += [f"         {m}" for m in r["mismatches"]]
        if r.get("error"):
            lines.append(f"         error: {r['error']}")
    if failures:
        args._exit = 1
    return out, "\n".join(lines)


VERBS = {
    "check": (cmd_check, "validate a model and report structure flags"),
    "invariants": (cmd_invariants, "chi_pi, cat, cuplength, zcl_r and L"),
    "cohomology": (cmd_cohomology, "cohomology dimensions, representatives and products"),
    "zcl": (cmd_zcl, "zero-divisor cuplength zcl_r"),
    "L": (cmd_L, "bigraded length L for each basis"),
    "omega": (cmd_omega, "the zero-divisor power cocycle and its checks"),
    "tc": (cmd_tc, "certified bounds on TC_r with derivations"),
    "genfn": (cmd_genfn, "generating function of TC_{r+1}"),
    "corpus-run": (cmd_corpus_run, "run a corpus directory against its golden files"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    common.add_argument("--strict", action="store_true", help="exit 3 when a requested value is refused")
    common.add_argument("--max-dim-cap", type=int, default=DEFAULT_DIM_CAP, metavar="N",
                        help=f"largest tensor-power dimension to build (default {DEFAULT_DIM_CAP})")
    common.add_argument("--assert-elliptic", action="store_true", help="treat the model as elliptic")
    common.add_argument("--r", type=parse_r, default=None, help="r values: N, A..B or A,B,C")
    common.add_argument("--basis", action="append", default=[], metavar="CSV",
                        help="even-basis change matrix (repeatable)")
    common.add_argument("--odd-mode", choices=("p", "total"), default="p",
                        help="which classes count as odd for L (default: odd even-word-length)")
    p = argparse.ArgumentParser(prog="sullivan-tc", description="Rational higher topological complexity of Sullivan models.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="verb", required=True)
    for verb, (_, help_text) in VERBS.items():
        sp = sub.add_parser(verb, parents=[common], help=help_text)
        sp.add_argument("model", help="corpus directory" if verb == "corpus-run" else "model file (.smf)")
        if verb == "omega":
            sp.add_argument("--verify", action="store_true", help="run every identity check")
        if verb == "cohomology":
            sp.add_argument("--up-to", type=int, default=None, help="top degree to compute")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    args._exit = 0
    fn = VERBS[args.verb][0]
    try:
        out, text = fn(args)
    except ValidationError as exc:
        return _fail(args, exc, 2)
    except CapExceeded as exc:
        return _fail(args, exc, 4)
    except (HypothesisError, Refusal) as exc:
        return _fail(args, exc, 3)
    except (SullivanError, OSError) as exc:
        return _fail(args, exc, 1)
    print(_dump(out) if args.json else text)
    if args.verb == "omega" and out.get("failed"):
        return 1
    return args._exit


def _fail(args, exc, code) -> int:
    if args.json:
        print(_dump({"error": type(exc).__name__, "message": str(exc), "exit_code": code}))
    else:
        print(f"error: {exc}", file=sys.stderr)
    return code
