"""The zero-divisor power cocycle of a pure coformal model and its checks.

For each odd generator ``y_j`` with ``dy_j = Σ α x_k² + Σ β x_p x_q`` we
build ``φ_j`` in ``ΛV ⊗ ΛX̄ ⊗ ΛV' ⊗ ΛX̄'`` so that ``y_j - y_j' - φ_j``
is a cocycle, expand the product of these factors, and read off the
coefficient of ``∏ (x̄_i + x̄_i')``.  That coefficient is extracted after
the triangular substitution ``x̄_i = s_i - t_i``, ``x̄_i' = t_i``, under
which ``x̄_i + x̄_i' = s_i``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Element, GeneratorSpec, GradedAlgebra, format_coefficient
from .cohomology import CohomologyAlgebra
from .errors import CapExceeded, HypothesisError
from .model import (
    ModelPresentation,
    bar_name,
    is_quadratic_pure,
    prime_name,
    suspension_double,
    validate,
)

HALF = Fraction(1, 2)
DEFAULT_TERM_CAP = 200_000


@dataclass
class CoefficientTables:
    odd: list[str]
    even: list[str]
    alpha: dict  # (j, k) -> Fraction
    beta: dict  # (j, p, q) -> Fraction, p < q

    def to_json(self) -> dict:
        return {
            "alpha": {f"{self.odd[j]},{self.even[k]}": format_coefficient(v) for (j, k), v in sorted(self.alpha.items())},
            "beta": {f"{self.odd[j]},{self.even[p]},{self.even[q]}": format_coefficient(v)
                     for (j, p, q), v in sorted(self.beta.items())},
        }


def extract_coefficients(m: ModelPresentation) -> CoefficientTables:
    """Read ``α^j_k`` and ``β^j_{p,q}`` off the quadratic differential."""
    flags = validate(m, require_simply_connected=False)
    if not flags.pure or not is_quadratic_pure(m):
        raise HypothesisError("coefficient tables need a pure model with quadratic differential")
    alg = m.algebra
    even = [i for i, g in enumerate(m.generators) if not g.odd]
    odd = [i for i, g in enumerate(m.generators) if g.odd]
    pos = {i: k for k, i in enumerate(even)}
    alpha, beta = {}, {}
    for j, yi in enumerate(odd):
        for mono, c in m.d_gen[yi].terms.items():
            if len(mono) == 1:
                (i, e), = mono
                alpha[(j, pos[i])] = c
            else:
                (a, _), (b, _) = mono
                p, q = sorted((pos[a], pos[b]))
                beta[(j, p, q)] = c
    tables = CoefficientTables([alg.generators[i].name for i in odd], [alg.generators[i].name for i in even], alpha, beta)
    for j, y in enumerate(tables.odd):
        if reconstruct(m, tables, j) != m.dgen(y):
            raise AssertionError(f"coefficient tables do not reproduce d{y}")
    return tables


def reconstruct(m: ModelPresentation, t: CoefficientTables, j: int) -> Element:
    out = m.algebra.zero()
    for (jj, k), a in t.alpha.items():
        if jj == j:
            x = m.g(t.even[k])
            out = out + (x * x).scale(a)
    for (jj, p, q), b in t.beta.items():
        if jj == j:
            out = out + (m.g(t.even[p]) * m.g(t.even[q])).scale(b)
    return out


def phi_terms(t: CoefficientTables, j: int) -> list[tuple[Fraction, int, int]]:
    """``φ_j`` as a list of ``(coefficient, k, p)`` meaning ``c (x_k - x_k')(x̄_p + x̄_p')``."""
    out = []
    for (jj, k), a in sorted(t.alpha.items()):
        if jj == j:
            out.append((a, k, k))
    for (jj, p, q), b in sorted(t.beta.items()):
        if jj == j:
            out.append((b * HALF, p, q))
            out.append((b * HALF, q, p))
    return out


def phi(j: int, tables: CoefficientTables, doubled: ModelPresentation) -> Element:
    A = doubled.algebra
    out = A.zero()
    for c, k, p in phi_terms(tables, j):
        x = tables.even[k]
        xb = tables.even[p]
        diff = A.gen(x) - A.gen(prime_name(x))
        sus = A.gen(bar_name(xb)) + A.gen(prime_name(bar_name(xb)))
        out = out + (diff * sus).scale(c)
    return out


@dataclass
class MembershipCertificate:
    """``Ω = Σ c · ∏ (g - g')`` over the listed generator names, one factor per odd generator."""

    terms: list[tuple[Fraction, tuple[str, ...]]]

    def to_json(self) -> list:
        return [[format_coefficient(c), list(names)] for c, names in self.terms]


@dataclass
class OmegaBundle:
    model: ModelPresentation
    tables: CoefficientTables
    factors: list[Element]  # y_j - y_j' - φ_j in the doubled suspension algebra
    omega: Element  # in Λ(V ⊕ V')
    omega_prime: Element  # in ΛV'
    omega_top: Element  # ω' with primes dropped, in ΛV
    delta: Element
    certificate: MembershipCertificate
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def m(self) -> int:
        return len(self.tables.odd)

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": len(self.tables.even),
            "tables": self.tables.to_json(),
            "phi": [str(f) for f in self.factors],
            "omega": str(self.omega),
            "omega_prime": str(self.omega_prime),
            "delta": str(self.delta),
            "omega_degree": self.omega.degree(),
            "certificate": self.certificate.to_json(),
            "checks": dict(self.checks),
        }


def pair_model(m: ModelPresentation) -> ModelPresentation:
    """``ΛV ⊗ ΛV'`` with generators ``v`` then ``v'``."""
    gens = list(m.generators) + [GeneratorSpec(prime_name(g.name), g.degree) for g in m.generators]
    target = GradedAlgebra(gens)
    plain = {i: target.gen(g.name) for i, g in enumerate(m.generators)}
    primed = {i: target.gen(prime_name(g.name)) for i, g in enumerate(m.generators)}
    diff = {}
    for g, dg in zip(m.generators, m.d_gen):
        if dg:
            diff[g.name] = m.algebra.substitute(dg, plain, target)
            diff[prime_name(g.name)] = m.algebra.substitute(dg, primed, target)
    return ModelPresentation(gens, diff)


def _st_algebra(m: ModelPresentation) -> GradedAlgebra:
    X = m.even
    gens = list(m.generators) + [GeneratorSpec(prime_name(g.name), g.degree) for g in m.generators]
    gens += [GeneratorSpec(f"s_{x.name}", x.degree - 1) for x in X]
    gens += [GeneratorSpec(f"t_{x.name}", x.degree - 1) for x in X]
    return GradedAlgebra(gens)


def _guarded_product(factors, algebra, cap):
    out = algebra.one()
    for f in factors:
        out = out * f
        if len(out.terms) > cap:
            raise CapExceeded("Ω expansion terms", len(out.terms), cap)
    return out


def _koszul_sign(word: list[tuple[object, bool]], target: list[tuple[object, bool]]) -> int:
    """Sign of reordering ``word`` into ``target`` counting swaps of odd symbols."""
    pos = {sym: i for i, (sym, _) in enumerate(target)}
    odd_positions = [pos[sym] for sym, odd in word if odd]
    inv = sum(1 for a in range(len(odd_positions)) for b in range(a + 1, len(odd_positions))
              if odd_positions[a] > odd_positions[b])
    return -1 if inv & 1 else 1


def membership_certificate(m: ModelPresentation, t: CoefficientTables) -> MembershipCertificate:
    """Expand ``∏ (D_{y_j} - Σ c D_{x_k} s_p)`` symbolically and keep the ``s_1...s_n`` part.

    Every surviving term is a product of ``m`` differences ``g - g'``.
    """
    n, mm = len(t.even), len(t.odd)
    options = []
    for j in range(mm):
        opts = [(Fraction(1), ("y", j), None)]
        for c, k, p in phi_terms(t, j):
            opts.append((-c, ("x", k), p))
        options.append(opts)
    acc: dict[tuple[str, ...], Fraction] = {}

    def rec(j, used, coeff, choice):
        if mm - j < n - len(used):
            return
        if j == mm:
            if len(used) != n:
                return
            word = []
            for jj, (kind, p) in enumerate(choice):
                word.append((("D", jj), kind[0] == "y"))
                if p is not None:
                    word.append((("s", p), True))
            target = [(("D", jj), kind[0] == "y") for jj, (kind, _) in enumerate(choice)]
            target += [(("s", p), True) for p in range(n)]
            sign = _koszul_sign(word, target)
            names = tuple(t.odd[k[1]] if k[0] == "y" else t.even[k[1]] for k, _ in choice)
            acc[names] = acc.get(names, 0) + sign * coeff
            return
        for c, kind, p in options[j]:
            if p is not None and p in used:
                continue
            rec(j + 1, used | ({p} if p is not None else set()), coeff * c, choice + [(kind, p)])

    rec(0, frozenset(), Fraction(1), [])
    return MembershipCertificate([(c, names) for names, c in sorted(acc.items()) if c])


def evaluate_certificate(cert: MembershipCertificate, pair: ModelPresentation) -> Element:
    A = pair.algebra
    out = A.zero()
    for c, names in cert.terms:
        term = A.scalar(c)
        for nm in names:
            term = term * (A.gen(nm) - A.gen(prime_name(nm)))
        out = out + term
    return out


def extract_omega(m: ModelPresentation, term_cap: int = DEFAULT_TERM_CAP) -> OmegaBundle:
    tables = extract_coefficients(m)
    doubled = suspension_double(m, bar_differential="x")
    A = doubled.algebra
    X = m.even
    factors = []
    for j, y in enumerate(tables.odd):
        factors.append(A.gen(y) - A.gen(prime_name(y)) - phi(j, tables, doubled))

    # change of variables x̄ = s - t, x̄' = t
    ST = _st_algebra(m)
    images = {}
    for i, g in enumerate(A.generators):
        nm = g.name
        if nm.startswith("bar_"):
            base = nm[4:]
            if base.endswith("'"):
                images[i] = ST.gen(f"t_{base[:-1]}")
            else:
                images[i] = ST.gen(f"s_{base}") - ST.gen(f"t_{base}")
        else:
            images[i] = ST.gen(nm)
    st_factors = [A.substitute(f, images, ST) for f in factors]
    P = _guarded_product(st_factors, ST, term_cap)

    pair = pair_model(m)
    nv = 2 * len(m.generators)
    s_block = tuple((nv + i, 1) for i in range(len(X)))
    omega_terms = {}
    for mono, c in P.terms.items():
        head = tuple(p for p in mono if p[0] < nv)
        tail = tuple(p for p in mono if p[0] >= nv)
        if tail == s_block:
            omega_terms[head] = omega_terms.get(head, 0) + c
    omega = Element(pair.algebra, omega_terms)

    # ω' from the projected factors, computed in Λ(V' ⊕ X̄') independently of Ω
    prime_gens = [GeneratorSpec(prime_name(g.name), g.degree) for g in m.generators]
    bar_primes = [GeneratorSpec(prime_name(bar_name(x.name)), x.degree - 1) for x in X]
    Dp = GradedAlgebra(prime_gens + bar_primes)
    pr_D = {i: Dp.gen(g.name) for i, g in enumerate(A.generators) if g.name in Dp.index}
    projected = [A.substitute(f, pr_D, Dp) for f in factors]
    phi_prime = [-p for p in projected]  # pr(y - y' - φ) = -(y' - φ')
    Q = _guarded_product([f for f in phi_prime], Dp, term_cap)
    nvp = len(prime_gens)
    bar_block = tuple((nvp + i, 1) for i in range(len(X)))
    Vp = GradedAlgebra(prime_gens)
    wp = {}
    for mono, c in Q.terms.items():
        head = tuple(p for p in mono if p[0] < nvp)
        tail = tuple(p for p in mono if p[0] >= nvp)
        if tail == bar_block:
            wp[head] = wp.get(head, 0) + c
    omega_prime = Element(Vp, wp)
    omega_top = Vp.substitute(omega_prime, {i: m.algebra.gen(g.name) for i, g in enumerate(m.generators)}, m.algebra)

    sign = -1 if len(tables.odd) % 2 else 1
    embed_prime = {i: pair.algebra.gen(g.name) for i, g in enumerate(prime_gens)}
    delta = omega - Vp.substitute(omega_prime, embed_prime, pair.algebra).scale(sign)

    cert = membership_certificate(m, tables)
    bundle = OmegaBundle(m, tables, factors, omega, omega_prime, omega_top, delta, cert)
    bundle.checks = structural_checks(bundle, doubled, pair, Dp, pr_D)
    return bundle


def structural_checks(b: OmegaBundle, doubled: ModelPresentation, pair: ModelPresentation,
                      Dp: GradedAlgebra, pr_D: dict) -> dict[str, bool]:
    m = b.model
    A = doubled.algebra
    mm = b.m
    sign = -1 if mm % 2 else 1
    checks = {}
    checks["factors_are_cocycles"] = all(not doubled.d(f) for f in b.factors)
    checks["omega_is_cocycle"] = not pair.d(b.omega)
    checks["omega_nonzero"] = bool(b.omega)
    checks["certificate_reproduces_omega"] = evaluate_certificate(b.certificate, pair) == b.omega
    checks["certificate_factor_count"] = all(len(names) == mm for _, names in b.certificate.terms)

    pair_alg = pair.algebra
    nv = len(m.generators)
    pr_pair = {i: Dp.gen(g.name) for i, g in enumerate(pair_alg.generators) if i >= nv}
    pr_omega = pair_alg.substitute(b.omega, pr_pair, Dp)
    wp_in_Dp = b.omega_prime.algebra.substitute(
        b.omega_prime, {i: Dp.gen(g.name) for i, g in enumerate(b.omega_prime.algebra.generators)}, Dp)
    checks["pr_omega_equals_signed_omega_prime"] = pr_omega == wp_in_Dp.scale(sign)

    Vp = b.omega_prime.algebra
    checks["omega_prime_word_length_m"] = b.omega_prime.word_lengths() <= {mm}
    checks["omega_prime_is_cocycle"] = not m.d(b.omega_top)
    checks["delta_has_no_pure_primed_terms"] = all(any(i < nv for i, _ in mono) for mono in b.delta.terms)

    # the two displayed projection identities
    xs = [x.name for x in m.even]
    prod_bar = A.one()
    for x in xs:
        prod_bar = prod_bar * (A.gen(bar_name(x)) + A.gen(prime_name(bar_name(x))))
    target = Dp.one()
    for x in xs:
        target = target * Dp.gen(prime_name(bar_name(x)))
    checks["pr_of_bar_product"] = A.substitute(prod_bar, pr_D, Dp) == target
    lhs = A.one()
    for f in b.factors:
        lhs = lhs * f
    lhs = A.substitute(lhs, pr_D, Dp)
    rhs = Dp.one()
    for y, f in zip(b.tables.odd, b.factors):
        proj = A.substitute(f, pr_D, Dp)  # = -(y' - φ'_j)
        rhs = rhs * (-proj)
    checks["pr_of_factor_product"] = lhs == rhs.scale(sign)
    return checks


def top_class_check(bundle: OmegaBundle, H: CohomologyAlgebra) -> bool:
    """Whether ``ω'`` represents a nonzero class in the top degree."""
    w = bundle.omega_top
    if not w:
        return False
    fd = bundle.model.formal_dimension_estimate()
    if w.degree() != fd:
        raise ValueError(f"ω' has degree {w.degree()}, formal dimension is {fd}")
    if H.model.algebra != w.algebra:
        raise ValueError("cohomology belongs to a different model")
    if bundle.model.d(w):
        return False
    return bool(H.project(w))


def verify(bundle: OmegaBundle, H: CohomologyAlgebra) -> dict[str, bool]:
    out = dict(bundle.checks)
    out["top_class_nonzero"] = top_class_check(bundle, H)
    return out
