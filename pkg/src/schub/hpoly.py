"""
The polynomial ring Z[alpha_1, ..., alpha_n] with its Weyl action and the
divided difference operators

    d_i f = (f - r_i f) / alpha_i.

Variables are the simple roots, so a weight (root-lattice vector) is the
linear form ``sum_j lambda_j alpha_j``.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from ._sparse import SparseRing, exact_divide_terms, format_terms
from .root_weyl import CartanData, WeylElement


class HPoly(SparseRing):
    """Integer polynomial in the simple roots.

    Coefficients are Python ints (arbitrary precision); ``Fraction``
    coefficients appear only in associated-graded output.
    """

    __slots__ = ()

    @classmethod
    def var(cls, i: int, nvars: int) -> HPoly:
        """The simple root alpha_i (1-based)."""
        e = [0] * nvars
        e[i - 1] = 1
        return cls._raw(nvars, {tuple(e): 1})

    @classmethod
    def linear(cls, coords: Sequence[int]) -> HPoly:
        """The linear form sum_j coords[j] alpha_{j+1}."""
        n = len(coords)
        terms = {}
        for j, c in enumerate(coords):
            if c:
                e = [0] * n
                e[j] = 1
                terms[tuple(e)] = c
        return cls._raw(n, terms)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        return len(degs) == 1 and (d is None or degs == {d})

    def homogeneous_component(self, d: int) -> HPoly:
        return self._raw(self.nvars, {e: c for e, c in self.terms.items() if sum(e) == d})

    def _display_key(self, item):
        e, _ = item
        return (-sum(e), tuple(-x for x in e))

    def __str__(self):
        def mono(e):
            parts = []
            for j, k in enumerate(e, 1):
                if k == 1:
                    parts.append(f"a{j}")
                elif k:
                    parts.append(f"a{j}^{k}")
            return "*".join(parts)

        return format_terms(self.sorted_terms(), mono)

    def exact_div(self, other: HPoly) -> HPoly:
        """Exact quotient; ``ArithmeticError`` if ``other`` does not divide."""
        return HPoly(self.nvars, exact_divide_terms(self.terms, other.terms, self.nvars))

    def evaluate(self, values: Sequence) -> object:
        """Substitute numbers for the simple roots."""
        total = 0
        for e, c in self.terms.items():
            t = c
            for v, k in zip(values, e):
                if k:
                    t = t * v**k
            total += t
        return total


@lru_cache(maxsize=None)
def _root_power(w: WeylElement, j: int, k: int) -> HPoly:
    if k == 0:
        return HPoly.one(w.cartan.rank)
    if k == 1:
        return HPoly.linear(w.column(j))
    return _root_power(w, j, k - 1) * _root_power(w, j, 1)


@lru_cache(maxsize=1 << 16)
def _monomial_image(w: WeylElement, exps: tuple[int, ...]) -> HPoly:
    out = HPoly.one(w.cartan.rank)
    for j, k in enumerate(exps, 1):
        if k:
            out = out * _root_power(w, j, k)
    return out


def weyl_act_h(w: WeylElement, p: HPoly) -> HPoly:
    """Ring automorphism alpha_j -> w(alpha_j)."""
    if p.nvars != w.cartan.rank:
        raise ValueError(f"rank mismatch: polynomial in {p.nvars} variables, group of rank {w.cartan.rank}")
    if w == w.cartan.identity:
        return p
    out = HPoly.zero(p.nvars)
    for e, c in p.terms.items():
        out = out + _monomial_image(w, e) * c
    return out


def reflect_h(c: CartanData, i: int, p: HPoly) -> HPoly:
    return weyl_act_h(c.gen(i), p)


def divided_difference(c: CartanData, i: int, p: HPoly) -> HPoly:
    """(p - r_i p) / alpha_i, computed exactly.

    Every monomial of the numerator must contain alpha_i; anything else is an
    arithmetic bug and raises ``AssertionError``.
    """
    c.check_index(i)
    num = p - reflect_h(c, i, p)
    k = i - 1
    out = {}
    for e, coef in num.terms.items():
        if e[k] == 0:
            raise AssertionError(f"divided difference d_{i} left a remainder on {p}")
        e2 = list(e)
        e2[k] -= 1
        out[tuple(e2)] = coef
    return HPoly._raw(p.nvars, out)


def root_poly(c: CartanData, weight: Sequence[int]) -> HPoly:
    if len(weight) != c.rank:
        raise ValueError("weight rank mismatch")
    return HPoly.linear(weight)
