"""Free graded-commutative algebras over the rationals.

A monomial is a tuple of ``(generator_index, exponent)`` pairs sorted by
generator index, with no zero exponents and every odd generator appearing
with exponent 1.  An :class:`Element` is a sparse map from monomials to
nonzero :class:`~fractions.Fraction` coefficients.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

Monomial = tuple  # tuple[tuple[int, int], ...]

ONE: Monomial = ()


class AlgebraMismatch(ValueError):
    """Operands live in different algebras."""


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    degree: int

    def __post_init__(self):
        if not isinstance(self.degree, int) or self.degree < 1:
            raise ValueError(f"generator {self.name!r}: degree must be a positive integer")

    @property
    def odd(self) -> bool:
        return self.degree % 2 == 1


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, float):
        raise TypeError("floating point coefficients are not allowed")
    return Fraction(c)


class GradedAlgebra:
    """The free graded-commutative algebra on an ordered list of generators."""

    def __init__(self, generators: Sequence[GeneratorSpec]):
        self.generators = tuple(generators)
        self.index = {}
        for i, g in enumerate(self.generators):
            if g.name in self.index:
                raise ValueError(f"duplicate generator name {g.name!r}")
            self.index[g.name] = i
        self.degrees = tuple(g.degree for g in self.generators)
        self.odd = tuple(g.odd for g in self.generators)
        self._key = tuple((g.name, g.degree) for g in self.generators)
        self._hash = hash(self._key)
        self._basis_cache: dict[int, list[Monomial]] = {}

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, GradedAlgebra) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        inner = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        return f"Λ({inner})"

    def __len__(self):
        return len(self.generators)

    @property
    def names(self) -> list[str]:
        return [g.name for g in self.generators]

    # -- constructors -------------------------------------------------

    def zero(self) -> Element:
        return Element(self, {})

    def one(self) -> Element:
        return Element(self, {ONE: Fraction(1)})

    def scalar(self, c) -> Element:
        return Element(self, {ONE: _as_fraction(c)})

    def gen(self, name: str) -> Element:
        return Element(self, {((self.index[name], 1),): Fraction(1)})

    def gens(self, *names: str) -> list[Element]:
        return [self.gen(n) for n in names]

    def monomial(self, exponents: Mapping[str, int]) -> Monomial:
        pairs = []
        for name, e in exponents.items():
            if e == 0:
                continue
            i = self.index[name]
            if e < 0:
                raise ValueError("negative exponent")
            if self.odd[i] and e > 1:
                raise ValueError(f"odd generator {name!r} squared is zero")
            pairs.append((i, e))
        return tuple(sorted(pairs))

    def monomial_element(self, m: Monomial, coeff=1) -> Element:
        c = _as_fraction(coeff)
        return Element(self, {m: c} if c else {})

    # -- monomial arithmetic ------------------------------------------

    def monomial_degree(self, m: Monomial) -> int:
        degs = self.degrees
        return sum(degs[i] * e for i, e in m)

    def word_length(self, m: Monomial) -> int:
        return sum(e for _, e in m)

    def mul_monomials(self, a: Monomial, b: Monomial):
        """Return ``(sign, a*b)`` or ``None`` when the product vanishes.

        The sign counts the odd generators of ``b`` that move left past odd
        generators of ``a`` during the merge.
        """
        if not a:
            return 1, b
        if not b:
            return 1, a
        odd = self.odd
        odd_left = sum(1 for i, _ in a if odd[i])
        out = []
        sign = 1
        i = j = 0
        na, nb = len(a), len(b)
        while i < na and j < nb:
            ga, ea = a[i]
            gb, eb = b[j]
            if ga < gb:
                out.append(a[i])
                if odd[ga]:
                    odd_left -= 1
                i += 1
            elif gb < ga:
                if odd[gb] and odd_left & 1:
                    sign = -sign
                out.append(b[j])
                j += 1
            else:
                if odd[ga]:
                    return None
                out.append((ga, ea + eb))
                i += 1
                j += 1
        if i < na:
            out.extend(a[i:])
        else:
            out.extend(b[j:])
        return sign, tuple(out)

    def sort_key(self, m: Monomial):
        """Key that puts higher powers of earlier generators first."""
        dense = [0] * len(self.generators)
        for i, e in m:
            dense[i] = e
        return tuple(-e for e in dense)

    def basis_in_degree(self, k: int) -> list[Monomial]:
        """All monomials of total degree ``k`` in degree-lexicographic order."""
        if k < 0:
            return []
        cached = self._basis_cache.get(k)
        if cached is not None:
            return cached
        degs, odd, n = self.degrees, self.odd, len(self.generators)
        out: list[Monomial] = []

        def rec(idx: int, remaining: int, acc: list):
            if remaining == 0:
                out.append(tuple(acc))
                return
            if idx == n:
                return
            deg = degs[idx]
            top = min(1, remaining // deg) if odd[idx] else remaining // deg
            for e in range(top, 0, -1):
                acc.append((idx, e))
                rec(idx + 1, remaining - e * deg, acc)
                acc.pop()
            rec(idx + 1, remaining, acc)

        rec(0, k, [])
        self._basis_cache[k] = out
        return out

    def monomial_str(self, m: Monomial) -> str:
        if not m:
            return "1"
        parts = []
        for i, e in m:
            name = self.generators[i].name
            parts.append(name if e == 1 else f"{name}^{e}")
        return " ".join(parts)

    # -- morphisms ----------------------------------------------------

    def substitute(self, e: Element, images: Mapping[int, Element], target: GradedAlgebra) -> Element:
        """Apply the algebra morphism sending generator ``i`` to ``images[i]``.

        Generators missing from ``images`` are sent to zero.
        """
        if e.algebra != self:
            raise AlgebraMismatch("element does not belong to this algebra")
        powers: dict[tuple[int, int], Element] = {}

        def power(i: int, k: int) -> Element:
            key = (i, k)
            if key not in powers:
                base = images.get(i)
                if base is None:
                    powers[key] = target.zero()
                elif k == 1:
                    powers[key] = base
                else:
                    powers[key] = power(i, k - 1) * base
            return powers[key]

        acc: dict = {}
        for m, c in e.terms.items():
            img = target.one()
            for i, k in m:
                img = img * power(i, k)
                if not img.terms:
                    break
            for mm, cc in img.terms.items():
                v = acc.get(mm, 0) + c * cc
                if v:
                    acc[mm] = v
                else:
                    acc.pop(mm, None)
        return Element(target, acc)


class Element:
    """An immutable sparse rational combination of monomials."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: GradedAlgebra, terms: Mapping[Monomial, Fraction]):
        self.algebra = algebra
        self.terms = {m: _as_fraction(c) for m, c in terms.items() if c}

    @classmethod
    def _raw(cls, algebra, terms):
        obj = cls.__new__(cls)
        obj.algebra = algebra
        obj.terms = terms
        return obj

    # -- queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coefficient_of(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def degrees(self) -> set[int]:
        return {self.algebra.monomial_degree(m) for m in self.terms}

    def degree(self):
        """The common degree of all terms, ``None`` for zero.

        Raises ``ValueError`` on inhomogeneous elements.
        """
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous element with degrees {sorted(degs)}")
        return degs.pop()

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def word_lengths(self) -> set[int]:
        return {self.algebra.word_length(m) for m in self.terms}

    def generators_used(self) -> set[int]:
        return {i for m in self.terms for i, _ in m}

    # -- arithmetic ---------------------------------------------------

    def _check(self, other: Element):
        if self.algebra != other.algebra:
            raise AlgebraMismatch(f"{self.algebra!r} vs {other.algebra!r}")

    def __add__(self, other):
        if not isinstance(other, Element):
            other = self.algebra.scalar(other)
        self._check(other)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            v = acc.get(m, 0) + c
            if v:
                acc[m] = v
            else:
                acc.pop(m, None)
        return Element._raw(self.algebra, acc)

    __radd__ = __add__

    def __neg__(self):
        return Element._raw(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Element):
            other = self.algebra.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> Element:
        c = _as_fraction(c)
        if not c:
            return self.algebra.zero()
        return Element._raw(self.algebra, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Element):
            return self.scale(other)
        return multiply(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        out = self.algebra.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Element):
            return self.algebra == other.algebra and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    __hash__ = None

    def map_terms(self, fn: Callable[[Monomial], Monomial | None]) -> dict:
        out: dict = {}
        for m, c in self.terms.items():
            mm = fn(m)
            if mm is not None:
                out[mm] = out.get(mm, 0) + c
        return {m: c for m, c in out.items() if c}

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        key = self.algebra.sort_key
        return sorted(self.terms.items(), key=lambda mc: (self.algebra.monomial_degree(mc[0]), key(mc[0])))

    def __repr__(self):
        return f"Element({self})"

    def __str__(self):
        return format_element(self)


def multiply(a: Element, b: Element) -> Element:
    """Graded-commutative product with Koszul signs."""
    if a.algebra != b.algebra:
        raise AlgebraMismatch(f"{a.algebra!r} vs {b.algebra!r}")
    alg = a.algebra
    mul = alg.mul_monomials
    acc: dict = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            r = mul(ma, mb)
            if r is None:
                continue
            s, m = r
            v = acc.get(m, 0) + (ca * cb if s > 0 else -ca * cb)
            if v:
                acc[m] = v
            else:
                acc.pop(m, None)
    return Element._raw(alg, acc)


def product(elements: Iterable[Element], algebra: GradedAlgebra) -> Element:
    out = algebra.one()
    for e in elements:
        out = out * e
    return out


def coefficient_of(e: Element, m: Monomial) -> Fraction:
    return e.coefficient_of(m)


def basis_in_degree(algebra: GradedAlgebra, k: int) -> list[Monomial]:
    return algebra.basis_in_degree(k)


def format_coefficient(c: Fraction) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def format_element(e: Element) -> str:
    if not e.terms:
        return "0"
    alg = e.algebra
    pieces = []
    for m, c in e.sorted_terms():
        neg = c < 0
        a = -c if neg else c
        mono = alg.monomial_str(m)
        if mono == "1":
            body = format_coefficient(a)
        elif a == 1:
            body = mono
        else:
            body = f"{format_coefficient(a)} {mono}"
        if not pieces:
            pieces.append(f"-{body}" if neg else body)
        else:
            pieces.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(pieces)


def iter_basis(algebra: GradedAlgebra, up_to: int) -> Iterator[tuple[int, Monomial]]:
    for k in range(up_to + 1):
        for m in algebra.basis_in_degree(k):
            yield k, m


def element_to_json(e: Element) -> list:
    alg = e.algebra
    return [[format_coefficient(c), {alg.generators[i].name: k for i, k in m}] for m, c in e.sorted_terms()]


def combine(algebra: GradedAlgebra, pairs: Iterable[tuple[Fraction, Element]]) -> Element:
    acc: dict = {}
    for c, e in pairs:
        if not c:
            continue
        for m, v in e.terms.items():
            w = acc.get(m, 0) + c * v
            if w:
                acc[m] = w
            else:
                acc.pop(m, None)
    return Element._raw(algebra, acc)
