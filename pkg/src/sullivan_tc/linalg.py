"""Exact sparse Gaussian elimination over the rationals.

Vectors are plain dicts ``{key: Fraction}`` with no zero entries.  Keys can
be anything hashable and totally ordered; the pivot of a vector is its
smallest key.
"""
from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Hashable, Iterable, Sequence

Vector = dict


def axpy(y: dict, a, x: dict) -> None:
    """In place ``y += a*x``."""
    for k, v in x.items():
        w = y.get(k, 0) + a * v
        if w:
            y[k] = w
        else:
            y.pop(k, None)


def scaled(x: dict, a) -> dict:
    if not a:
        return {}
    return {k: a * v for k, v in x.items()}


def add(x: dict, y: dict) -> dict:
    out = dict(x)
    axpy(out, 1, y)
    return out


class Echelon:
    """A growing echelon basis.

    Each row is normalized to have pivot coefficient 1 and carries an
    optional *tag* vector that records which inserted vectors it is a
    combination of.  Tags let callers solve linear systems and read off
    kernels without a second elimination.
    """

    def __init__(self):
        self.rows: dict[Hashable, tuple[dict, dict]] = {}
        self.order: list[Hashable] = []

    def __len__(self):
        return len(self.rows)

    @property
    def pivots(self) -> list:
        return list(self.order)

    def vectors(self) -> list[dict]:
        return [self.rows[p][0] for p in self.order]

    def reduce(self, vec: dict, tag: dict | None = None) -> tuple[dict, dict]:
        """Fully reduce ``vec`` against the rows; returns ``(residue, tag)``.

        ``tag`` is updated by the same row operations, so that afterwards
        ``residue = original - sum(tag-combination of row tags)`` in the
        caller's bookkeeping.
        """
        vec = dict(vec)
        tag = dict(tag) if tag else {}
        rows = self.rows
        if not rows or not vec:
            return vec, tag
        heap = [k for k in vec if k in rows]
        heapq.heapify(heap)
        seen = set()
        while heap:
            p = heapq.heappop(heap)
            if p in seen:
                continue
            seen.add(p)
            c = vec.get(p)
            if not c:
                continue
            row, rtag = rows[p]
            for k, v in row.items():
                w = vec.get(k, 0) - c * v
                if w:
                    if k not in vec and k in rows and k not in seen:
                        heapq.heappush(heap, k)
                    vec[k] = w
                else:
                    vec.pop(k, None)
            if rtag:
                axpy(tag, -c, rtag)
        return vec, tag

    def add(self, vec: dict, tag: dict | None = None) -> bool:
        """Insert ``vec``; returns ``False`` if it was already in the span."""
        res, t = self.reduce(vec, tag)
        if not res:
            return False
        self._insert(res, t)
        return True

    def add_reduced(self, vec: dict, tag: dict | None = None) -> tuple[dict, dict]:
        """Like :meth:`add` but returns the residue and its tag (empty residue if dependent)."""
        res, t = self.reduce(vec, tag)
        if res:
            self._insert(res, t)
        return res, t

    def _insert(self, res: dict, t: dict) -> None:
        p = min(res)
        inv = 1 / Fraction(res[p])
        res = {k: v * inv for k, v in res.items()}
        t = {k: v * inv for k, v in t.items()}
        self.rows[p] = (res, t)
        self.order.append(p)

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)[0]

    def solve(self, vec: dict) -> dict | None:
        """Coefficients (over row tags) expressing ``vec``, or ``None``.

        Only meaningful when every row was inserted with a tag.
        """
        res, t = self.reduce(vec)
        if res:
            return None
        return {k: -v for k, v in t.items()}


def span(vectors: Iterable[dict]) -> Echelon:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return e


def rank(vectors: Iterable[dict]) -> int:
    return len(span(vectors))


def kernel_and_image(columns: Sequence[dict]) -> tuple[list[dict], Echelon]:
    """Kernel and image of the linear map sending basis vector ``i`` to ``columns[i]``.

    Kernel vectors are dicts over column indices.  Each kernel vector has a
    distinct *leading* index (its largest key) which is a non-pivot column.
    """
    image = Echelon()
    kernel = []
    for i, col in enumerate(columns):
        res, t = image.reduce(col, {i: Fraction(1)})
        if res:
            image._insert(res, t)
        else:
            kernel.append(t)
    return kernel, image


def is_invertible(matrix: Sequence[Sequence[Fraction]]) -> bool:
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        return False
    rows = [{j: Fraction(v) for j, v in enumerate(row) if v} for row in matrix]
    return rank(rows) == n


def same_span(a: Iterable[dict], b: Iterable[dict]) -> bool:
    ea, eb = span(a), span(b)
    if len(ea) != len(eb):
        return False
    return all(ea.contains(v) for v in eb.vectors())
