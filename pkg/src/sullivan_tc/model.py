"""Sullivan model presentations and the constructions performed on them."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import Element, GeneratorSpec, GradedAlgebra, Monomial
from .errors import HypothesisError, TruncationError, ValidationError
from .linalg import Echelon, is_invertible, kernel_and_image


class ModelPresentation:
    """A free graded-commutative algebra with a differential on generators.

    ``differential`` maps generator names to elements of the same algebra;
    missing names are closed.  The differential extends to all of the
    algebra as a degree +1 derivation via :meth:`d`.
    """

    def __init__(
        self,
        generators: Sequence[GeneratorSpec],
        differential: Mapping[str, Element] | None = None,
        metadata: Mapping[str, bool] | None = None,
        name: str | None = None,
    ):
        self.algebra = GradedAlgebra(generators)
        self.generators = self.algebra.generators
        self.name = name
        self.metadata = dict(metadata or {})
        differential = dict(differential or {})
        unknown = set(differential) - set(self.algebra.index)
        if unknown:
            raise ValidationError([(n, "unknown", "differential given for undeclared generator") for n in sorted(unknown)])
        values = []
        for g in self.generators:
            v = differential.get(g.name)
            if v is None:
                v = self.algebra.zero()
            elif v.algebra != self.algebra:
                raise ValidationError([(g.name, "algebra", "differential value lives in a different algebra")])
            values.append(v)
        self.d_gen: tuple[Element, ...] = tuple(values)
        self._d_cache: dict[Monomial, Element] = {(): self.algebra.zero()}

    def __repr__(self):
        label = f"{self.name}: " if self.name else ""
        return f"<ModelPresentation {label}{self.algebra!r}>"

    def __eq__(self, other):
        if not isinstance(other, ModelPresentation):
            return NotImplemented
        return self.algebra == other.algebra and all(a == b for a, b in zip(self.d_gen, other.d_gen))

    __hash__ = None

    # -- generator bookkeeping -----------------------------------------

    @property
    def names(self) -> list[str]:
        return self.algebra.names

    def dgen(self, name: str) -> Element:
        return self.d_gen[self.algebra.index[name]]

    @property
    def even(self) -> list[GeneratorSpec]:
        return [g for g in self.generators if not g.odd]

    @property
    def odd(self) -> list[GeneratorSpec]:
        return [g for g in self.generators if g.odd]

    @property
    def differential(self) -> dict[str, Element]:
        return {g.name: v for g, v in zip(self.generators, self.d_gen) if v}

    def g(self, name: str) -> Element:
        return self.algebra.gen(name)

    # -- the derivation ------------------------------------------------

    def d_monomial(self, m: Monomial) -> Element:
        cached = self._d_cache.get(m)
        if cached is not None:
            return cached
        alg = self.algebra
        i, e = m[0]
        rest = ((i, e - 1),) + m[1:] if e > 1 else m[1:]
        g = alg.monomial_element(((i, 1),))
        rest_el = alg.monomial_element(rest)
        out = self.d_gen[i] * rest_el
        tail = self.d_monomial(rest) if rest else alg.zero()
        if tail:
            t = g * tail
            out = out - t if alg.odd[i] else out + t
        self._d_cache[m] = out
        return out

    def d(self, e: Element) -> Element:
        if e.algebra != self.algebra:
            raise ValueError("element does not belong to this model")
        acc: dict = {}
        for m, c in e.terms.items():
            if not m:
                continue
            for mm, v in self.d_monomial(m).terms.items():
                w = acc.get(mm, 0) + c * v
                if w:
                    acc[mm] = w
                else:
                    acc.pop(mm, None)
        return Element(self.algebra, acc)

    def is_cocycle(self, e: Element) -> bool:
        return not self.d(e)

    # -- simple numeric data -------------------------------------------

    def chi_pi(self) -> int:
        return len(self.even) - len(self.odd)

    def formal_dimension_estimate(self) -> int:
        return sum(g.degree for g in self.odd) - sum(g.degree - 1 for g in self.even)

    @property
    def max_degree(self) -> int:
        return max((g.degree for g in self.generators), default=0)

    def probe_degree(self) -> int:
        """Degree up to which cohomology must be known to certify ellipticity."""
        return max(self.formal_dimension_estimate() + self.max_degree, 0)

    def with_metadata(self, **flags) -> ModelPresentation:
        meta = dict(self.metadata)
        meta.update(flags)
        return ModelPresentation(self.generators, self.differential, meta, self.name)


@dataclass(frozen=True)
class StructureFlags:
    minimal: bool = True
    pure: bool = False
    constant_length: int | None = None
    length_vacuous: bool = False
    coformal: bool = False
    elliptic: bool | None = None
    elliptic_source: str | None = None
    f0: bool | None = None
    formal: bool | None = None
    formal_source: str | None = None
    formal_dimension: int | None = None

    def to_json(self) -> dict:
        return {
            "minimal": self.minimal,
            "pure": self.pure,
            "constant_length": self.constant_length,
            "length_vacuous": self.length_vacuous,
            "coformal": self.coformal,
            "elliptic": self.elliptic,
            "elliptic_source": self.elliptic_source,
            "f0": self.f0,
            "formal": self.formal,
            "formal_source": self.formal_source,
            "formal_dimension": self.formal_dimension,
        }


def validate(m: ModelPresentation, require_simply_connected: bool = True) -> StructureFlags:
    """Check degrees, minimality and d∘d = 0; report the decidable structure flags."""
    alg = m.algebra
    issues = []
    for g, dg in zip(m.generators, m.d_gen):
        if require_simply_connected and g.degree < 2:
            issues.append((g.name, "degree", f"degree {g.degree} < 2"))
        if not dg:
            continue
        degs = dg.degrees()
        if degs != {g.degree + 1}:
            issues.append((g.name, "degree", f"d{g.name} has degree {sorted(degs)}, expected {g.degree + 1}"))
        short = [mono for mono in dg.terms if alg.word_length(mono) < 2]
        if short:
            issues.append((g.name, "minimality", f"d{g.name} has terms of word length < 2: {alg.monomial_str(short[0])}"))
    if not issues:
        for g, dg in zip(m.generators, m.d_gen):
            if dg and m.d(dg):
                issues.append((g.name, "d-squared", f"d(d{g.name}) = {m.d(dg)} is not zero"))
    if issues:
        raise ValidationError(issues)

    even_idx = {i for i, g in enumerate(m.generators) if not g.odd}
    pure = all(not m.d_gen[i] for i in even_idx) and all(
        all(i in even_idx for mono in dg.terms for i, _ in mono) for dg in m.d_gen
    )
    lengths = set()
    for dg in m.d_gen:
        lengths |= dg.word_lengths()
    vacuous = not lengths
    l = lengths.pop() if len(lengths) == 1 else None
    meta = m.metadata
    elliptic = True if meta.get("elliptic") else None
    formal = True if meta.get("formal") else None
    return StructureFlags(
        minimal=True,
        pure=pure,
        constant_length=l,
        length_vacuous=vacuous,
        coformal=(l == 2),
        elliptic=elliptic,
        elliptic_source="asserted" if elliptic else None,
        formal=formal,
        formal_source="asserted" if formal else None,
        formal_dimension=m.formal_dimension_estimate() if pure else None,
    )


def is_quadratic_pure(m: ModelPresentation) -> bool:
    """Every differential lies in Λ²X (vacuously true for d = 0)."""
    alg = m.algebra
    for g, dg in zip(m.generators, m.d_gen):
        if not dg:
            continue
        if not g.odd:
            return False
        for mono in dg.terms:
            if alg.word_length(mono) != 2 or any(alg.odd[i] for i, _ in mono):
                return False
    return True


# -- tensor powers -----------------------------------------------------


def copy_name(name: str, j: int) -> str:
    return f"{name}@{j}"


def tensor_power(m: ModelPresentation, r: int) -> ModelPresentation:
    """The r-fold tensor power on copies ``v@1, ..., v@r`` of every generator."""
    if r < 2:
        raise ValueError("tensor power needs r >= 2")
    gens = [GeneratorSpec(copy_name(g.name, j), g.degree) for g in m.generators for j in range(1, r + 1)]
    target = GradedAlgebra(gens)
    diff = {}
    for j in range(1, r + 1):
        images = copy_images(m, target, j)
        for g, dg in zip(m.generators, m.d_gen):
            if dg:
                diff[copy_name(g.name, j)] = m.algebra.substitute(dg, images, target)
    name = f"{m.name}^{r}" if m.name else None
    return ModelPresentation(gens, diff, name=name)


def copy_images(m: ModelPresentation, target: GradedAlgebra, j: int) -> dict[int, Element]:
    return {i: target.gen(copy_name(g.name, j)) for i, g in enumerate(m.generators)}


def copy_into(m: ModelPresentation, power: ModelPresentation, e: Element, j: int) -> Element:
    """The element ``e`` placed in tensor slot ``j``."""
    return m.algebra.substitute(e, copy_images(m, power.algebra, j), power.algebra)


def ker_mu_generators(m: ModelPresentation, r: int) -> list[Element]:
    """The differences ``v(j) - v(j+1)`` generating the kernel of r-fold multiplication."""
    if r < 2:
        raise ValueError("r must be at least 2")
    power = tensor_power(m, r)
    A = power.algebra
    return [A.gen(copy_name(g.name, j)) - A.gen(copy_name(g.name, j + 1)) for g in m.generators for j in range(1, r)]


def multiplication_map(m: ModelPresentation, power: ModelPresentation):
    """The multiplication from the tensor power back to ``m``, as a callable."""
    images = {}
    for i, g in enumerate(power.generators):
        base = g.name.rsplit("@", 1)[0]
        images[i] = m.algebra.gen(base)

    def mu(e: Element) -> Element:
        return power.algebra.substitute(e, images, m.algebra)

    return mu


# -- extensions --------------------------------------------------------


def extend_by_odd(m: ModelPresentation, name: str, u_degree: int, du: Element | None = None) -> ModelPresentation:
    """Adjoin one odd generator ``name`` with ``d(name) = du``."""
    if u_degree % 2 == 0:
        raise ValueError("extension generator must have odd degree")
    if name in m.algebra.index:
        raise ValueError(f"generator {name!r} already exists")
    if du is not None and du:
        if du.algebra != m.algebra:
            raise ValueError("du must live in the base model")
        if du.degrees() != {u_degree + 1}:
            raise ValueError(f"du has degree {sorted(du.degrees())}, expected {u_degree + 1}")
        if m.d(du):
            raise ValueError("du is not a cocycle")
    gens = list(m.generators) + [GeneratorSpec(name, u_degree)]
    out = _rebuild(m, gens)
    diff = dict(out.differential)
    if du is not None and du:
        diff[name] = _transport(du, out.algebra)
    result = ModelPresentation(gens, diff, m.metadata, m.name)
    validate(result, require_simply_connected=False)
    return result


def _transport(e: Element, target: GradedAlgebra) -> Element:
    """Move an element to an algebra that contains all of its generators by name."""
    src = e.algebra
    images = {i: target.gen(src.generators[i].name) for i in e.generators_used()}
    return src.substitute(e, images, target)


def submodel(m: ModelPresentation, names: Sequence[str], name: str | None = None) -> ModelPresentation:
    """The sub-presentation on ``names``; the differential must stay inside it."""
    keep = set(names)
    gens = [g for g in m.generators if g.name in keep]
    target = GradedAlgebra(gens)
    diff = {g.name: _transport(dg, target) for g, dg in zip(m.generators, m.d_gen) if dg and g.name in keep}
    return ModelPresentation(gens, diff, name=name)


def _rebuild(m: ModelPresentation, gens: Sequence[GeneratorSpec]) -> ModelPresentation:
    target = GradedAlgebra(gens)
    diff = {g.name: _transport(dg, target) for g, dg in zip(m.generators, m.d_gen) if dg}
    return ModelPresentation(gens, diff, m.metadata, m.name)


@dataclass(frozen=True)
class BasisChange:
    """Rows give new basis vectors of the even generator space.

    Row ``i`` is the vector ``sum_j matrix[i][j] * x_j`` in the declared
    even generators ``x_j``.
    """

    matrix: tuple

    def __post_init__(self):
        object.__setattr__(self, "matrix", tuple(tuple(Fraction(v) for v in row) for row in self.matrix))

    @classmethod
    def identity(cls, n: int) -> BasisChange:
        return cls(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @classmethod
    def from_csv(cls, text: str) -> BasisChange:
        import csv
        import io

        rows = []
        for row in csv.reader(io.StringIO(text)):
            cells = [c.strip() for c in row if c.strip()]
            if cells and not cells[0].startswith("#"):
                rows.append([Fraction(c) for c in cells])
        return cls(tuple(tuple(r) for r in rows))

    def to_csv(self) -> str:
        from .algebra import format_coefficient

        return "".join(",".join(format_coefficient(v) for v in row) + "\n" for row in self.matrix)

    @property
    def label(self) -> str:
        return ";".join(",".join(str(v) for v in row) for row in self.matrix)

    def check(self, m: ModelPresentation) -> None:
        X = m.even
        n = len(X)
        if len(self.matrix) != n or any(len(row) != n for row in self.matrix):
            raise ValueError(f"basis change must be {n}x{n}")
        for i, row in enumerate(self.matrix):
            for j, v in enumerate(row):
                if v and X[i].degree != X[j].degree:
                    raise ValueError(f"basis change mixes degrees {X[i].degree} and {X[j].degree}")
        if not is_invertible(self.matrix):
            raise ValueError("basis change is not invertible")

    def vectors(self, m: ModelPresentation) -> list[Element]:
        self.check(m)
        X = m.even
        out = []
        for row in self.matrix:
            v = m.algebra.zero()
            for c, x in zip(row, X):
                if c:
                    v = v + m.g(x.name).scale(c)
            out.append(v)
        return out


def _fresh(name: str, taken) -> str:
    while name in taken:
        name += "'"
    return name


def build_WB(m: ModelPresentation, basis: BasisChange | None = None) -> ModelPresentation:
    """Adjoin ``u_i`` of degree ``2|x_i| - 1`` with ``d u_i = b_i^2`` for each basis vector ``b_i``."""
    flags = validate(m, require_simply_connected=False)
    if not flags.pure or not is_quadratic_pure(m):
        raise HypothesisError("the extension by squares needs a pure coformal model")
    X = m.even
    basis = basis or BasisChange.identity(len(X))
    vecs = basis.vectors(m)
    taken = set(m.names)
    new = []
    for x, b in zip(X, vecs):
        nm = _fresh(f"u_{x.name}", taken)
        taken.add(nm)
        new.append((nm, 2 * x.degree - 1, b * b))
    gens = list(m.generators) + [GeneratorSpec(nm, deg) for nm, deg, _ in new]
    base = _rebuild(m, gens)
    diff = dict(base.differential)
    for nm, _, sq in new:
        diff[nm] = _transport(sq, base.algebra)
    label = f"{m.name}.W" if m.name else None
    return ModelPresentation(gens, diff, name=label)


def bar_name(name: str) -> str:
    return f"bar_{name}"


def prime_name(name: str) -> str:
    return f"{name}'"


def suspension_double(m: ModelPresentation, bar_differential: str = "dx") -> ModelPresentation:
    """``ΛV ⊗ ΛX̄ ⊗ ΛV' ⊗ ΛX̄'`` with ``|x̄| = |x| - 1``.

    ``bar_differential="dx"`` sets ``d x̄ = d x`` (so every ``x̄`` is closed
    in a pure model).  ``"x"`` sets ``d x̄ = x``, the Koszul-type choice under
    which ``d(y - y') = d φ`` holds for the cocycle construction.
    """
    if bar_differential not in ("dx", "x"):
        raise ValueError("bar_differential must be 'dx' or 'x'")
    flags = validate(m, require_simply_connected=False)
    if not flags.pure:
        raise HypothesisError("suspension construction needs a pure model")
    X = m.even
    gens = list(m.generators)
    gens += [GeneratorSpec(bar_name(x.name), x.degree - 1) for x in X]
    gens += [GeneratorSpec(prime_name(g.name), g.degree) for g in m.generators]
    gens += [GeneratorSpec(prime_name(bar_name(x.name)), x.degree - 1) for x in X]
    target = GradedAlgebra(gens)
    plain = {i: target.gen(g.name) for i, g in enumerate(m.generators)}
    primed = {i: target.gen(prime_name(g.name)) for i, g in enumerate(m.generators)}
    diff = {}
    for i, (g, dg) in enumerate(zip(m.generators, m.d_gen)):
        if dg:
            diff[g.name] = m.algebra.substitute(dg, plain, target)
            diff[prime_name(g.name)] = m.algebra.substitute(dg, primed, target)
    for x in X:
        if bar_differential == "x":
            diff[bar_name(x.name)] = target.gen(x.name)
            diff[prime_name(bar_name(x.name))] = target.gen(prime_name(x.name))
            continue
        dx = m.dgen(x.name)
        if dx:
            diff[bar_name(x.name)] = m.algebra.substitute(dx, plain, target)
            diff[prime_name(bar_name(x.name))] = m.algebra.substitute(dx, primed, target)
    return ModelPresentation(gens, diff, name=f"{m.name}.doubled" if m.name else None)


# -- ellipticity and formality -----------------------------------------


@dataclass
class EllipticityCertificate:
    elliptic: bool
    formal_dimension: int
    window: tuple[int, int]
    top_nonzero: bool
    witness_degree: int | None = None
    quotient_window: tuple[int, int] | None = None
    quotient_finite: bool | None = None
    reason: str = ""

    def to_json(self) -> dict:
        return {
            "elliptic": self.elliptic,
            "formal_dimension": self.formal_dimension,
            "window": list(self.window),
            "top_nonzero": self.top_nonzero,
            "witness_degree": self.witness_degree,
            "quotient_window": list(self.quotient_window) if self.quotient_window else None,
            "quotient_finite": self.quotient_finite,
            "reason": self.reason,
        }


def _polynomial_part(m: ModelPresentation) -> tuple[GradedAlgebra, list[Element]]:
    """The polynomial algebra on X and the relations dY, for pure models."""
    X = m.even
    sub = GradedAlgebra(X)
    idx = {i: sub.gen(g.name) for i, g in enumerate(m.generators) if not g.odd}
    rels = [m.algebra.substitute(dg, idx, sub) for g, dg in zip(m.generators, m.d_gen) if g.odd and dg]
    return sub, rels


def quotient_vanishes(m: ModelPresentation, lo: int, hi: int) -> tuple[bool, int | None]:
    """Whether Q[X]/(dY) is zero in every degree of ``[lo, hi]``; else a witness degree."""
    sub, rels = _polynomial_part(m)
    for k in range(lo, hi + 1):
        target = sub.basis_in_degree(k)
        if not target:
            continue
        ech = Echelon()
        for rel in rels:
            deg = rel.degree()
            for mono in sub.basis_in_degree(k - deg):
                ech.add((sub.monomial_element(mono) * rel).terms)
        if len(ech) < len(target):
            return False, k
    return True, None


def ellipticity_check(m: ModelPresentation, H) -> EllipticityCertificate:
    """Certify finite-dimensional cohomology by a vanishing window above the formal dimension.

    Two windows are examined: ``H^k = 0`` for ``fd < k <= fd + max|g|`` and
    ``Q[X]/(dY)`` vanishing for ``fd < k <= fd + max|x|``.  The second one
    is a proof of finiteness for pure models; the first records what the
    cohomology computation saw.
    """
    fd = m.formal_dimension_estimate()
    hi = fd + m.max_degree
    if H.up_to < hi:
        raise TruncationError(hi, H.up_to)
    window = (fd + 1, hi)
    top = fd >= 0 and H.dim(fd) > 0
    for k in range(max(fd + 1, 0), hi + 1):
        if H.dim(k):
            return EllipticityCertificate(False, fd, window, top, witness_degree=k,
                                          reason=f"not elliptic or bad estimate: H^{k} != 0 above {fd}")
    if not top:
        return EllipticityCertificate(False, fd, window, top, reason=f"H^{fd} = 0 at the formal dimension estimate")
    cert = EllipticityCertificate(True, fd, window, top)
    flags = validate(m, require_simply_connected=False)
    if flags.pure:
        gx = max((g.degree for g in m.even), default=1)
        ok, wit = quotient_vanishes(m, fd + 1, fd + gx)
        cert.quotient_window = (fd + 1, fd + gx)
        cert.quotient_finite = ok
        if not ok:
            cert.elliptic = False
            cert.witness_degree = wit
            cert.reason = f"Q[X]/(dY) nonzero in degree {wit}"
    return cert


@dataclass
class FormalityResult:
    formal: bool
    closed: list[Element]
    closed_names: list[str]
    f0_part: ModelPresentation
    rewritten: ModelPresentation
    chi_pi_remainder: int

    @property
    def l(self) -> int:
        return len(self.closed)

    def to_json(self) -> dict:
        return {
            "formal": self.formal,
            "closed_odd": {n: str(e) for n, e in zip(self.closed_names, self.closed)},
            "f0_part_generators": self.f0_part.names,
            "chi_pi_remainder": self.chi_pi_remainder,
        }


def odd_kernel(m: ModelPresentation) -> tuple[list[Element], list[int], list[int]]:
    """Kernel of d restricted to the span of odd generators.

    Returns the kernel basis (normalized at its leading generator), the
    positions of the leading generators, and the complementary positions,
    all as indices into ``m.odd``.
    """
    Y = m.odd
    cols = [m.dgen(y.name).terms for y in Y]
    kernel, _ = kernel_and_image(cols)
    elements, leads = [], []
    for vec in kernel:
        lead = max(vec)
        c = vec[lead]
        e = m.algebra.zero()
        for j, v in sorted(vec.items()):
            e = e + m.g(Y[j].name).scale(v / c)
        elements.append(e)
        leads.append(lead)
    comp = [j for j in range(len(Y)) if j not in set(leads)]
    return elements, leads, comp


def formality_check(m: ModelPresentation, elliptic: bool | None = True) -> FormalityResult:
    """Decide formality of a pure elliptic model.

    The model is formal exactly when the ideal ``(dY)`` of ``Q[X]`` needs only
    ``dim X`` generators.  Relations are scanned by degree; one that lies in
    ``(X) * (chosen relations)`` plus the span of chosen relations of its own
    degree is redundant, and its generator ``y`` is corrected to the closed
    element ``y - Σ a_s y_s``.  The chosen odd generators with ``X`` form the
    F0 part; the corrected ones are the closed odd factor.
    """
    flags = validate(m, require_simply_connected=False)
    if not flags.pure:
        raise HypothesisError("formality check needs a pure model")
    if not elliptic:
        raise HypothesisError("formality check needs a certified elliptic model")
    sub, _ = _polynomial_part(m)
    to_sub = {i: sub.gen(g.name) for i, g in enumerate(m.generators) if not g.odd}
    Y = sorted(m.odd, key=lambda g: (g.degree, m.algebra.index[g.name]))
    chosen: list[tuple[str, Element]] = []  # (odd name, relation in Q[X])
    closed, closed_names = [], []
    for y in Y:
        rel = m.algebra.substitute(m.dgen(y.name), to_sub, sub)
        k = y.degree + 1
        ech = Echelon()
        for s_name, s_rel in chosen:
            for mono in sub.basis_in_degree(k - s_rel.degree()) if s_rel else ():
                ech.add((sub.monomial_element(mono) * s_rel).terms, {(s_name, mono): Fraction(1)})
        coeffs = ech.solve(rel.terms) if rel else {}
        if coeffs is None:
            chosen.append((y.name, rel))
            continue
        fixed = m.g(y.name)
        for (s_name, mono), c in sorted(coeffs.items()):
            lift = m.algebra.monomial_element(tuple((m.algebra.index[sub.generators[i].name], e) for i, e in mono))
            fixed = fixed - (lift * m.g(s_name)).scale(c)
        if m.d(fixed):
            raise AssertionError(f"closed correction for {y.name} is not a cocycle")
        closed.append(fixed)
        closed_names.append(y.name)
    keep = {n for n, _ in chosen}
    f0 = submodel(m, [g.name for g in m.generators if not g.odd or g.name in keep],
                  name=f"{m.name}.F0" if m.name else None)
    rewritten = ModelPresentation(m.generators, {n: v for n, v in m.differential.items() if n not in closed_names},
                                  m.metadata, m.name)
    chi = f0.chi_pi()
    return FormalityResult(chi == 0, closed, closed_names, f0, rewritten, chi)


@dataclass
class FamilyMatch:
    n: int
    basis: list[Element]
    u: list[Element]
    y: Element

    def to_json(self) -> dict:
        return {"n": self.n, "basis": [str(b) for b in self.basis], "u": [str(u) for u in self.u], "y": str(self.y)}


def detect_special_family(m: ModelPresentation, bases: Sequence[BasisChange] = ()) -> FamilyMatch | None:
    """Match ``Λ(x_1..x_n, u_1..u_n, y)`` with ``d u_i = b_i^2`` and ``dy ∈ Λ²X``.

    The square condition is tested for the declared even basis and every
    basis in ``bases``.  When all even generators have distinct degrees
    this is exhaustive; otherwise a miss only means "not detected".
    """
    try:
        flags = validate(m, require_simply_connected=False)
    except ValidationError:
        return None
    X, Y = m.even, m.odd
    n = len(X)
    if n == 0 or len(Y) != n + 1 or not flags.pure or not is_quadratic_pure(m):
        return None
    image = Echelon()
    for j, y in enumerate(Y):
        image.add(m.dgen(y.name).terms, {j: Fraction(1)})
    candidates = [BasisChange.identity(n)] + list(bases)
    for B in candidates:
        try:
            vecs = B.vectors(m)
        except ValueError:
            continue
        pre = []
        for b in vecs:
            coeffs = image.solve((b * b).terms)
            if coeffs is None:
                break
            pre.append(coeffs)
        else:
            us = [sum((m.g(Y[j].name).scale(c) for j, c in sorted(co.items())), m.algebra.zero()) for co in pre]
            # the remaining odd direction: first declared odd generator outside span(u)
            span_u = Echelon()
            for co in pre:
                span_u.add(co)
            y = None
            for j, yy in enumerate(Y):
                if span_u.add({j: Fraction(1)}):
                    y = m.g(yy.name)
                    break
            return FamilyMatch(n, vecs, us, y)
    return None
