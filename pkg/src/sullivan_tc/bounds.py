"""Certified lower and upper bounds on the higher topological complexity ``TC_r``.

Each rule checks its hypotheses against computed structure flags and
invariants, then records a :class:`RuleApplication`.  :func:`assemble`
joins all fired rules per ``r``: the lower bound is the max over lower and
exact values, the upper bound the min over upper and exact values.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import CapExceeded, HypothesisError, SullivanError
from .invariants import DEFAULT_DIM_CAP, Analysis, L_length, analyze, category, zcl
from .model import (
    BasisChange,
    ModelPresentation,
    detect_special_family,
    is_quadratic_pure,
    submodel,
)

LOWER, UPPER, EXACT = "lower", "upper", "exact"
MAX_SUBSETS = 64


@dataclass
class RuleApplication:
    rule: str
    kind: str
    value: int
    hypotheses: dict[str, object]
    inputs: dict[str, object] = field(default_factory=dict)
    children: list["RuleApplication"] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "kind": self.kind,
            "value": self.value,
            "hypotheses": dict(self.hypotheses),
            "inputs": dict(self.inputs),
            "children": [c.to_json() for c in self.children],
        }

    @property
    def bounds_below(self) -> bool:
        return self.kind in (LOWER, EXACT)

    @property
    def bounds_above(self) -> bool:
        return self.kind in (UPPER, EXACT)


@dataclass
class BoundCertificate:
    model: str
    r: int
    lower: int | None
    upper: int | None
    exact: int | None
    derivation: list[RuleApplication]
    skipped: dict[str, str] = field(default_factory=dict)
    conflicts: list[str] = field(default_factory=list)

    def fired(self, rule: str) -> list[RuleApplication]:
        return [a for a in self.derivation if a.rule == rule]

    def to_json(self) -> dict:
        out = {"model": self.model, "r": self.r, "lower": self.lower, "upper": self.upper}
        if self.exact is not None:
            out["exact"] = self.exact
        out["derivation"] = [a.to_json() for a in self.derivation]
        out["skipped"] = dict(sorted(self.skipped.items()))
        if self.conflicts:
            out["conflicts"] = list(self.conflicts)
        return out

    def render(self) -> str:
        if self.exact is not None:
            head = f"TC_{self.r} = {self.exact}"
        else:
            lo = "?" if self.lower is None else self.lower
            hi = "?" if self.upper is None else self.upper
            head = f"{lo} <= TC_{self.r} <= {hi}"
        lines = [head]
        for a in self.derivation:
            lines.append(f"  {a.kind:5} {a.value:4}  {a.rule}  {_inline(a.inputs)}")
            for c in a.children:
                lines.append(f"        base {c.kind} {c.value}  {c.rule}  {_inline(c.inputs)}")
        for c in self.conflicts:
            lines.append(f"  CONFLICT: {c}")
        return "\n".join(lines)


def _inline(d: dict) -> str:
    return ", ".join(f"{k}={v}" for k, v in d.items())


class _Context:
    """Per-model memo of invariants shared by all ``r``."""

    def __init__(self, an: Analysis, bases: Sequence[BasisChange], cap: int | None, odd_mode: str, depth: int):
        self.an = an
        self.m = an.model
        self.flags = an.flags
        self.bases = list(bases)
        self.cap = cap
        self.odd_mode = odd_mode
        self.depth = depth
        self._cat = None
        self._L = None
        self._zcl: dict[int, int | str] = {}
        self._splits = None

    @property
    def cat(self):
        if self._cat is None:
            self._cat = category(self.an)
        return self._cat

    def L_values(self) -> list[tuple[str, int]]:
        if self._L is None:
            bases = self.bases or [BasisChange.identity(len(self.m.even))]
            vals = []
            for B in bases:
                try:
                    B.check(self.m)
                except (ValueError, SullivanError):
                    continue
                vals.append((B.label, L_length(self.m, B, self.odd_mode)))
            self._L = vals
        return self._L

    def zcl(self, r: int) -> int | str:
        if r not in self._zcl:
            try:
                self._zcl[r] = zcl(self.m, self.an.H, r, self.cap)
            except (CapExceeded, HypothesisError) as exc:
                self._zcl[r] = str(exc)
        return self._zcl[r]

    def split_contexts(self) -> list[tuple[str, "_Context", int]]:
        if self._splits is None:
            self._splits = []
            for label, base, k in odd_splits(self.an):
                bases = self.bases if [g.name for g in base.even] == [g.name for g in self.m.even] else ()
                self._splits.append((label, _Context(analyze(base), bases, self.cap, self.odd_mode, self.depth + 1), k))
        return self._splits


def _hyp(ctx: _Context, *names: str) -> tuple[dict, str | None]:
    f = ctx.flags
    table = {
        "pure": f.pure,
        "elliptic": bool(f.elliptic),
        "formal": bool(f.formal),
        "coformal": f.coformal and is_quadratic_pure(ctx.m),
        "constant_length": f.constant_length is not None or (f.length_vacuous and not ctx.m.even),
    }
    hyps = {n: table[n] for n in names}
    failed = [n for n, ok in hyps.items() if not ok]
    return hyps, (f"not {', '.join(failed)}" if failed else None)


def rule_formal_equality(ctx: _Context, r: int):
    hyps, why = _hyp(ctx, "pure", "elliptic", "formal")
    if why:
        return None, why
    cat = ctx.cat
    if cat.value is None:
        return None, cat.provenance
    chi = ctx.m.chi_pi()
    return RuleApplication("formal_equality", EXACT, r * cat.value + chi, hyps,
                           {"cat": cat.value, "cat_source": cat.provenance, "chi_pi": chi}), None


def rule_constant_length_upper(ctx: _Context, r: int):
    hyps, why = _hyp(ctx, "pure", "elliptic", "constant_length")
    if why:
        return None, why
    cat = ctx.cat
    if cat.value is None:
        return None, cat.provenance
    chi = ctx.m.chi_pi()
    hyps["length"] = ctx.flags.constant_length
    return RuleApplication("constant_length_upper", UPPER, r * cat.value + chi, hyps,
                           {"cat": cat.value, "chi_pi": chi}), None


def rule_coformal_L_lower(ctx: _Context, r: int):
    hyps, why = _hyp(ctx, "pure", "coformal", "elliptic")
    if why:
        return None, why
    if not ctx.m.even:
        return None, "no even generators"
    cat = ctx.cat
    if cat.value is None:
        return None, cat.provenance
    vals = ctx.L_values()
    if not vals:
        return None, "no admissible basis"
    label, L = max(vals, key=lambda t: (t[1], t[0]))
    return RuleApplication("coformal_L_lower", LOWER, (r - 1) * cat.value + L, hyps,
                           {"cat": cat.value, "L": L, "basis": label,
                            "L_by_basis": {lb: v for lb, v in vals}}), None


def rule_zero_divisor_cuplength(ctx: _Context, r: int):
    hyps, why = _hyp(ctx, "elliptic")
    if why:
        return None, why
    z = ctx.zcl(r)
    if isinstance(z, str):
        return None, z
    return RuleApplication("zero_divisor_cuplength_lower", LOWER, z, hyps, {"zcl": z}), None


def rule_special_family(ctx: _Context, r: int):
    hyps, why = _hyp(ctx, "pure", "coformal", "elliptic")
    if why:
        return None, why
    match = detect_special_family(ctx.m, ctx.bases)
    if match is None:
        return None, "not a member of the squares-plus-one family"
    n = match.n
    return RuleApplication("special_family", EXACT, r * (n + 1) - 1, hyps | {"family_member": True},
                           {"n": n, "u": [str(u) for u in match.u], "y": str(match.y)}), None


def rule_odd_extension_upper(ctx: _Context, r: int):
    hyps, why = _hyp(ctx, "pure", "elliptic")
    if why:
        return None, why
    if ctx.depth > 0:
        return None, "nested split not explored"
    best = None
    for label, base_ctx, k in ctx.split_contexts():
        sub = certificate_for(base_ctx, r)
        if sub.upper is None:
            continue
        support = [a for a in sub.derivation if a.bounds_above and a.value == sub.upper]
        app = RuleApplication("odd_extension_upper", UPPER, sub.upper + (r - 1) * k,
                              hyps | {"splits_off_odd_part": True},
                              {"split": label, "dim_U": k, "base_upper": sub.upper}, support[:1])
        if best is None or app.value < best.value:
            best = app
    if best is None:
        return None, "no split with a certified base bound"
    return best, None


def odd_splits(an: Analysis) -> list[tuple[str, ModelPresentation, int]]:
    """Presentations ``base ⊗ ΛU`` with ``U`` odd and ``dU`` inside the base.

    Two sources: the closed odd generators (after a change of odd basis),
    and subsets of ``n`` odd generators whose model is an F0-model.
    """
    m = an.model
    out = []
    if an.formality is not None and an.formality.l > 0:
        out.append(("closed-odd kernel", an.formality.f0_part, an.formality.l))
    X, Y = m.even, m.odd
    n = len(X)
    if 0 < n < len(Y):
        for count, S in enumerate(itertools.combinations(Y, n)):
            if count >= MAX_SUBSETS:
                break
            names = {y.name for y in S}
            keep = [g.name for g in m.generators if not g.odd or g.name in names]
            base = submodel(m, keep, f"{m.name}|{'+'.join(sorted(names))}" if m.name else None)
            try:
                ban = analyze(base)
            except SullivanError:
                continue
            if ban.flags.elliptic and ban.flags.elliptic_source == "certified":
                out.append(("F0 subset {" + ", ".join(sorted(names)) + "}", base, len(Y) - n))
    return out


RULES = (
    rule_formal_equality,
    rule_special_family,
    rule_constant_length_upper,
    rule_coformal_L_lower,
    rule_zero_divisor_cuplength,
    rule_odd_extension_upper,
)


UPPER_RULES = (rule_formal_equality, rule_special_family, rule_constant_length_upper)


def certificate_for(ctx: _Context, r: int) -> BoundCertificate:
    """All rules at depth 0; only the rules that can bound from above for split bases."""
    apps, skipped = [], {}
    for rule in (RULES if ctx.depth == 0 else UPPER_RULES):
        app, why = rule(ctx, r)
        name = rule.__name__.removeprefix("rule_")
        if app is None:
            skipped[name] = why
        else:
            apps.append(app)
    lows = [a.value for a in apps if a.bounds_below]
    highs = [a.value for a in apps if a.bounds_above]
    lower = max(lows, default=None)
    upper = min(highs, default=None)
    conflicts = []
    for lo in (a for a in apps if a.bounds_below):
        for hi in (a for a in apps if a.bounds_above):
            if lo.value > hi.value:
                conflicts.append(f"{lo.rule} gives {lo.value} > {hi.rule} gives {hi.value}")
    exact = lower if (lower is not None and lower == upper and not conflicts) else None
    return BoundCertificate(ctx.m.name or "model", r, lower, upper, exact, apps, skipped, conflicts)


def assemble(an: Analysis, r_range: Sequence[int], bases: Sequence[BasisChange] = (),
             cap: int | None = DEFAULT_DIM_CAP, odd_mode: str = "p", _depth: int = 0) -> list[BoundCertificate]:
    for r in r_range:
        if r < 2:
            raise ValueError("r must be at least 2")
    ctx = _Context(an, bases, cap, odd_mode, _depth)
    return [certificate_for(ctx, r) for r in r_range]


def soundness_violations(certs: Sequence[BoundCertificate]) -> list[str]:
    out = []
    for c in certs:
        out += [f"r={c.r}: {msg}" for msg in c.conflicts]
        if c.exact is not None and not (c.lower == c.upper == c.exact):
            out.append(f"r={c.r}: exact {c.exact} but interval [{c.lower}, {c.upper}]")
        if c.lower is not None and c.upper is not None and c.lower > c.upper:
            out.append(f"r={c.r}: lower {c.lower} > upper {c.upper}")
    return out


# -- generating function -------------------------------------------------


@dataclass
class GeneratingFunction:
    """``F(x) = Σ_{r>=1} a_r x^r = P(x) / (1 - x)^2`` for the affine sequence ``a_r``."""

    coefficients: list[int]  # P(x) = Σ c_i x^i
    sequence: str
    values: dict[int, int]
    step: int

    def P(self, x) -> Fraction:
        return sum((Fraction(c) * Fraction(x) ** i for i, c in enumerate(self.coefficients)), Fraction(0))

    def series(self, terms: int) -> list[Fraction]:
        """First coefficients of ``P(x)/(1-x)^2``; index 0 is the constant term."""
        out = []
        for k in range(terms):
            out.append(sum(Fraction(c * (k - i + 1)) for i, c in enumerate(self.coefficients) if i <= k))
        return out

    def render(self) -> str:
        parts = []
        for i, c in enumerate(self.coefficients):
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            coef = str(c) if (i == 0 or abs(c) != 1) else ("-" if c < 0 else "")
            parts.append(f"{coef}{mono}")
        body = " + ".join(parts).replace("+ -", "- ") or "0"
        return f"({body}) / (1 - x)^2"

    def to_json(self) -> dict:
        return {
            "P": list(self.coefficients),
            "P_at_1": int(self.P(1)),
            "sequence": self.sequence,
            "values": {str(r): v for r, v in sorted(self.values.items())},
            "step": self.step,
            "rendered": self.render(),
        }


def generating_function(certs: Sequence[BoundCertificate], cat: int) -> GeneratingFunction:
    """Build ``P`` from exact ``TC_r`` values; ``a_r = TC_{r+1}``.

    Refuses unless at least two consecutive ``r`` carry exact values and
    every consecutive difference equals ``cat``.
    """
    exact = {c.r: c.exact for c in certs}
    rs = sorted(exact)
    missing = [r for r in rs if exact[r] is None]
    if missing:
        raise HypothesisError(f"no exact value for r={missing[0]}")
    if len(rs) < 2:
        raise HypothesisError("need exact values for at least two consecutive r")
    for a, b in zip(rs, rs[1:]):
        if b != a + 1:
            raise HypothesisError(f"r values not consecutive at r={b}")
        if exact[b] - exact[a] != cat:
            raise HypothesisError(f"sequence not affine with step cat={cat} at r={b}: "
                                  f"TC_{b} - TC_{a} = {exact[b] - exact[a]}")
    a1 = exact[rs[0]] - (rs[0] - 2) * cat  # TC_2
    return GeneratingFunction([0, a1, cat - a1], "TC_{r+1}", {r: exact[r] for r in rs}, cat)
