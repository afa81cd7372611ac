"""Cohomology of models by exact elimination, and finite graded algebras.

The cohomology algebra keeps one representative cocycle per basis class,
a per-degree projection echelon (coboundaries plus representatives), and a
lazily filled multiplication table.  :class:`TensorPowerAlgebra` builds
``H^{⊗r}`` from it by the Künneth formula.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .algebra import Element, GradedAlgebra, Monomial, format_coefficient
from .errors import CapExceeded, HypothesisError, TruncationError
from .linalg import Echelon, axpy, kernel_and_image
from .model import ModelPresentation, is_quadratic_pure, validate


@dataclass
class CochainComplexSlice:
    degree: int
    basis: list
    d_columns: list  # d of each basis monomial, keyed by index in the next slice


def cochain_slices(m: ModelPresentation, up_to: int) -> list[CochainComplexSlice]:
    alg = m.algebra
    bases = [alg.basis_in_degree(k) for k in range(up_to + 2)]
    index = [{mono: i for i, mono in enumerate(b)} for b in bases]
    out = []
    for k in range(up_to + 1):
        cols = []
        for mono in bases[k]:
            img = m.d_monomial(mono) if mono else alg.zero()
            cols.append({index[k + 1][mm]: c for mm, c in img.terms.items()})
        out.append(CochainComplexSlice(k, bases[k], cols))
    return out


@dataclass
class HClass:
    degree: int
    rep: Element
    bidegree: tuple[int, int] | None = None


class FiniteGradedAlgebra:
    """Interface for finite-dimensional graded algebras given on a basis."""

    def dim_total(self) -> int:
        raise NotImplementedError

    def basis_degree(self, i: int) -> int:
        raise NotImplementedError

    def mul_basis(self, i: int, j: int) -> dict:
        raise NotImplementedError

    def multiply(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                prod = self.mul_basis(i, j)
                if prod:
                    axpy(out, a * b, prod)
        return out

    def vector_degree(self, v: dict) -> int | None:
        degs = {self.basis_degree(i) for i in v}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError("inhomogeneous vector")
        return degs.pop()


class CohomologyAlgebra(FiniteGradedAlgebra):
    def __init__(self, model: ModelPresentation, up_to: int, classes: list[HClass],
                 projections: dict[int, Echelon], vanishes_above: int | None = None):
        self.model = model
        self.up_to = up_to
        self.classes = classes
        self._proj = projections
        self.vanishes_above = vanishes_above
        self.by_degree: dict[int, list[int]] = {}
        for i, c in enumerate(classes):
            self.by_degree.setdefault(c.degree, []).append(i)
        self._mult: dict[tuple[int, int], dict] = {}

    # -- sizes ---------------------------------------------------------

    def dim(self, k: int) -> int:
        if k < 0:
            return 0
        if k > self.up_to:
            if self.vanishes_above is not None and k > self.vanishes_above:
                return 0
            raise TruncationError(k, self.up_to)
        return len(self.by_degree.get(k, ()))

    def dims(self) -> dict[int, int]:
        return {k: self.dim(k) for k in range(self.up_to + 1)}

    def dim_total(self) -> int:
        return len(self.classes)

    @property
    def top_degree(self) -> int:
        return max((c.degree for c in self.classes), default=0)

    def basis_degree(self, i: int) -> int:
        return self.classes[i].degree

    def positive_indices(self) -> list[int]:
        return [i for i, c in enumerate(self.classes) if c.degree > 0]

    def euler_characteristic(self) -> int:
        return sum((-1) ** c.degree for c in self.classes)

    # -- projection ----------------------------------------------------

    def project(self, z: Element) -> dict:
        """Coordinates of the class of the cocycle ``z`` in the representative basis."""
        if not z:
            return {}
        k = z.degree()
        if k > self.up_to:
            if self.vanishes_above is not None and k > self.vanishes_above:
                return {}
            raise TruncationError(k, self.up_to)
        ech = self._proj.get(k)
        if ech is None:
            raise ValueError(f"element of degree {k} is not a cocycle")
        res, tag = ech.reduce(z.terms)
        if res:
            raise ValueError("element is not a cocycle")
        return {i: -c for i, c in tag.items()}

    def is_coboundary(self, z: Element) -> bool:
        if self.model.d(z):
            return False
        return not self.project(z)

    def element(self, vec: dict) -> Element:
        out = self.model.algebra.zero()
        for i, c in sorted(vec.items()):
            out = out + self.classes[i].rep.scale(c)
        return out

    # -- products ------------------------------------------------------

    def mul_basis(self, i: int, j: int) -> dict:
        key = (i, j)
        hit = self._mult.get(key)
        if hit is not None:
            return hit
        ci, cj = self.classes[i], self.classes[j]
        if ci.degree + cj.degree > self.up_to and (
            self.vanishes_above is not None and ci.degree + cj.degree > self.vanishes_above
        ):
            out = {}
        else:
            out = self.project(ci.rep * cj.rep)
        self._mult[key] = out
        return out

    def multiplication_table(self) -> dict[tuple[int, int], dict]:
        n = len(self.classes)
        for i in range(n):
            for j in range(n):
                self.mul_basis(i, j)
        return dict(self._mult)

    def algebra_generators(self) -> list[int]:
        """Classes spanning a complement of the decomposables ``H^+ · H^+``."""
        pos = self.positive_indices()
        out = []
        for k in sorted({self.classes[i].degree for i in pos}):
            dec = Echelon()
            for i in pos:
                for j in pos:
                    if self.classes[i].degree + self.classes[j].degree == k:
                        v = self.mul_basis(i, j)
                        if v:
                            dec.add(v)
            for i in self.by_degree.get(k, ()):
                if dec.add({i: Fraction(1)}):
                    out.append(i)
        return out

    def bidegree_slices(self) -> list[BigradedSlice]:
        groups: dict[tuple[int, int], list[int]] = {}
        for i, c in enumerate(self.classes):
            if c.bidegree is None:
                raise ValueError("cohomology was not computed with a bigrading")
            groups.setdefault(c.bidegree, []).append(i)
        return [
            BigradedSlice(p, q, self.classes[idx[0]].degree, idx, [self.classes[i].rep for i in idx])
            for (p, q), idx in sorted(groups.items())
        ]

    def to_json(self) -> dict:
        table = []
        for (i, j), v in sorted(self.multiplication_table().items()):
            if v:
                table.append([i, j, {str(k): format_coefficient(c) for k, c in sorted(v.items())}])
        return {
            "up_to": self.up_to,
            "vanishes_above": self.vanishes_above,
            "dims": {str(k): d for k, d in self.dims().items() if d},
            "classes": [
                {"index": i, "degree": c.degree, "rep": str(c.rep),
                 **({"bidegree": list(c.bidegree)} if c.bidegree else {})}
                for i, c in enumerate(self.classes)
            ],
            "table": table,
        }


@dataclass
class BigradedSlice:
    p: int
    q: int
    degree: int
    indices: list[int]
    reps: list[Element]

    @property
    def dim(self) -> int:
        return len(self.indices)


def word_bidegree(alg: GradedAlgebra) -> Callable[[Monomial], tuple[int, int]]:
    """``(p, q)`` = (even word length, odd word length) of a monomial."""
    odd = alg.odd

    def key(m: Monomial) -> tuple[int, int]:
        p = q = 0
        for i, e in m:
            if odd[i]:
                q += e
            else:
                p += e
        return p, q

    return key


def cohomology(m: ModelPresentation, up_to: int | None = None,
               grading: Callable[[Monomial], object] | None = None,
               vanishes_above: int | None = None) -> CohomologyAlgebra:
    """Degreewise cohomology with representatives, projection data and products.

    With ``grading`` the computation is split into blocks of equal grading
    key; the differential must map each block into a single block, and all
    representatives come out homogeneous for the extra grading.
    """
    if up_to is None:
        up_to = m.probe_degree()
    slices = cochain_slices(m, up_to)
    alg = m.algebra
    nxt_basis = [alg.basis_in_degree(k + 1) for k in range(up_to + 1)]
    coboundaries: dict[int, list[dict]] = {}
    kernels: dict[int, list[dict]] = {}
    for sl in slices:
        k = sl.degree
        blocks: dict[object, list[int]] = {}
        for i, mono in enumerate(sl.basis):
            key = grading(mono) if grading else None
            blocks.setdefault(key, []).append(i)
        ker_vecs = []
        img_vecs = []
        for key in sorted(blocks, key=repr):
            idx = blocks[key]
            cols = [sl.d_columns[i] for i in idx]
            kern, image = kernel_and_image(cols)
            for v in kern:
                ker_vecs.append({sl.basis[idx[j]]: c for j, c in v.items()})
            for row in image.vectors():
                img_vecs.append({nxt_basis[k][t]: c for t, c in row.items()})
        kernels[k] = ker_vecs
        coboundaries[k + 1] = img_vecs

    sort_key = alg.sort_key
    classes: list[HClass] = []
    projections: dict[int, Echelon] = {}
    for k in range(up_to + 1):
        ech = _MonomialEchelon(sort_key)
        for b in coboundaries.get(k, []):
            ech.add(b, {})
        ker = sorted(kernels[k], key=lambda v: sort_key(min(v, key=sort_key)))
        for z in ker:
            res, tag = ech.reduce(z, {})
            if res:
                idx = len(classes)
                rep = Element(alg, res)
                bideg = None
                if grading is not None:
                    keys = {grading(mono) for mono in res}
                    if len(keys) != 1:
                        raise AssertionError("representative is not homogeneous for the grading")
                    bideg = keys.pop()
                classes.append(HClass(k, rep, bideg))
                ech.add(res, {idx: Fraction(1)})
        projections[k] = ech
    return CohomologyAlgebra(m, up_to, classes, projections, vanishes_above)


class _MonomialEchelon(Echelon):
    """Echelon over monomial keys using the algebra's basis order for pivots."""

    def __init__(self, sort_key):
        super().__init__()
        self._key = sort_key

    def reduce(self, vec, tag=None):
        vec = dict(vec)
        tag = dict(tag) if tag else {}
        rows = self.rows
        if not rows or not vec:
            return vec, tag
        key = self._key
        done = set()
        while True:
            cands = [k for k in vec if k in rows and k not in done]
            if not cands:
                return vec, tag
            p = min(cands, key=key)
            done.add(p)
            c = vec[p]
            row, rtag = rows[p]
            axpy(vec, -c, row)
            if rtag:
                axpy(tag, -c, rtag)

    def _insert(self, res, t):
        p = min(res, key=self._key)
        inv = 1 / Fraction(res[p])
        self.rows[p] = ({k: v * inv for k, v in res.items()}, {k: v * inv for k, v in t.items()})
        self.order.append(p)


def certified_cohomology(m: ModelPresentation, grading=None):
    """Compute cohomology through the probe window and certify ellipticity.

    Returns ``(H, certificate)``; when certified, ``H.vanishes_above`` is
    set to the formal dimension so products past the window read as zero.
    """
    from .model import ellipticity_check

    H = cohomology(m, m.probe_degree(), grading=grading)
    cert = ellipticity_check(m, H)
    if cert.elliptic:
        H.vanishes_above = cert.formal_dimension
    return H, cert


def bigraded_cohomology(mW: ModelPresentation) -> list[BigradedSlice]:
    """Split the cohomology of a pure coformal model by word-length bidegree."""
    return bigraded_algebra(mW).bidegree_slices()


def bigraded_algebra(mW: ModelPresentation) -> CohomologyAlgebra:
    validate(mW, require_simply_connected=False)
    if not is_quadratic_pure(mW):
        raise HypothesisError("bigraded cohomology needs a pure coformal model (d of bidegree (2, -1))")
    H, _ = certified_cohomology(mW, grading=word_bidegree(mW.algebra))
    return H


# -- subspaces and nilpotency -------------------------------------------


class SubspaceSpan:
    """A graded subspace of a finite algebra, echelonized degree by degree."""

    def __init__(self, algebra: FiniteGradedAlgebra, vectors: Iterable[dict] = ()):
        self.algebra = algebra
        self.parts: dict[int, Echelon] = {}
        for v in vectors:
            self.add(v)

    def add(self, v: dict) -> bool:
        if not v:
            return False
        n = self.algebra.dim_total()
        if any(not (0 <= i < n) for i in v):
            raise ValueError("vector is not inside the algebra")
        k = self.algebra.vector_degree(v)
        return self.parts.setdefault(k, Echelon()).add(v)

    @property
    def dim(self) -> int:
        return sum(len(e) for e in self.parts.values())

    def vectors(self) -> list[dict]:
        return [v for k in sorted(self.parts) for v in self.parts[k].vectors()]

    def min_degree(self) -> int | None:
        degs = [k for k, e in self.parts.items() if len(e)]
        return min(degs) if degs else None

    def dims(self) -> dict[int, int]:
        return {k: len(e) for k, e in sorted(self.parts.items()) if len(e)}


def subspace_product_nilpotency(A: SubspaceSpan, H: FiniteGradedAlgebra, max_len: int | None = None,
                                multipliers: Sequence[dict] | None = None) -> int:
    """Largest ``i <= max_len`` with ``A^i != 0``.

    ``A^{i+1}`` is spanned by products ``a * b`` with ``a`` in a basis of
    ``A^i`` and ``b`` in a basis of ``A``.  When ``A`` is an ideal generated
    by ``multipliers``, those may be passed instead of a basis of ``A``.
    """
    if A.algebra is not H:
        raise ValueError("subspace does not live in this algebra")
    if A.dim == 0:
        return 0
    if A.min_degree() == 0:
        raise ValueError("subspace meets degree 0; its powers never vanish")
    if max_len is None:
        max_len = H.dim_total() + 1
    mult = list(multipliers) if multipliers is not None else A.vectors()
    current = A
    i = 1
    while i < max_len:
        nxt = SubspaceSpan(H)
        for a in current.vectors():
            for b in mult:
                p = H.multiply(a, b)
                if p:
                    nxt.add(p)
        if nxt.dim == 0:
            return i
        current = nxt
        i += 1
    return i


class TensorPowerAlgebra(FiniteGradedAlgebra):
    """``H^{⊗r}`` with the Koszul-signed product, on tuples of basis classes."""

    def __init__(self, H: CohomologyAlgebra, r: int, cap: int | None = None):
        n = H.dim_total()
        size = n ** r
        if cap is not None and size > cap:
            raise CapExceeded(f"dim H^(x{r})", size, cap)
        self.H = H
        self.r = r
        degs = [H.basis_degree(i) for i in range(n)]
        tuples = list(itertools.product(range(n), repeat=r))
        tuples.sort(key=lambda t: (sum(degs[i] for i in t), t))
        self.tuples = tuples
        self.index = {t: i for i, t in enumerate(tuples)}
        self.degrees = [sum(degs[i] for i in t) for t in tuples]
        self._hdeg = degs

    def dim_total(self) -> int:
        return len(self.tuples)

    def basis_degree(self, i: int) -> int:
        return self.degrees[i]

    def slot(self, h: int, j: int) -> int:
        """Index of ``1 ⊗ .. ⊗ h ⊗ .. ⊗ 1`` with ``h`` in slot ``j`` (0-based)."""
        unit = self.H.by_degree[0][0]
        t = [unit] * self.r
        t[j] = h
        return self.index[tuple(t)]

    def mul_basis(self, i: int, j: int) -> dict:
        a, b = self.tuples[i], self.tuples[j]
        hd = self._hdeg
        parity = 0
        later = 0
        for s in range(self.r - 1, -1, -1):
            parity += hd[b[s]] * later
            later += hd[a[s]]
        sign = -1 if parity & 1 else 1
        partial = [((), Fraction(sign))]
        for s in range(self.r):
            prod = self.H.mul_basis(a[s], b[s])
            if not prod:
                return {}
            partial = [(t + (k,), c * v) for t, c in partial for k, v in prod.items()]
        return {self.index[t]: c for t, c in partial if c}

    def mu(self, i: int) -> dict:
        """Image of a basis tuple under the r-fold multiplication into ``H``."""
        t = self.tuples[i]
        vec = {t[0]: Fraction(1)}
        for h in t[1:]:
            vec = self.H.multiply(vec, {h: Fraction(1)})
            if not vec:
                return {}
        return vec

    def kernel_of_mu(self) -> SubspaceSpan:
        by_deg: dict[int, list[int]] = {}
        for i, d in enumerate(self.degrees):
            by_deg.setdefault(d, []).append(i)
        K = SubspaceSpan(self)
        for d, idx in sorted(by_deg.items()):
            kern, _ = kernel_and_image([self.mu(i) for i in idx])
            for v in kern:
                K.add({idx[j]: c for j, c in v.items()})
        return K

    def difference_generators(self, classes: Sequence[int] | None = None) -> list[dict]:
        """``h(j) - h(j+1)`` for the given classes (default: algebra generators of H)."""
        if classes is None:
            classes = self.H.algebra_generators()
        out = []
        for h in classes:
            for j in range(self.r - 1):
                out.append({self.slot(h, j): Fraction(1), self.slot(h, j + 1): Fraction(-1)})
        return out

    def element_rep(self, i: int, power: ModelPresentation, base: ModelPresentation) -> Element:
        """A cocycle in the tensor power model representing basis tuple ``i``."""
        from .model import copy_into

        out = power.algebra.one()
        for j, h in enumerate(self.tuples[i]):
            out = out * copy_into(base, power, self.H.classes[h].rep, j + 1)
        return out
