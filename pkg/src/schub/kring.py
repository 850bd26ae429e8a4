"""
The character ring K_T = Z[e^lambda], lambda in the root lattice, with

    Weyl action       w . e^lambda = e^{w lambda}
    Demazure          D_i f  = (f - r_i f) / (1 - e^{-alpha_i})
    isobaric Demazure Di_i f = (f - e^{-alpha_i} r_i f) / (1 - e^{-alpha_i})

and the passage to the associated graded ring, which lands in HPoly.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Sequence

from ._sparse import SparseRing, exact_divide_terms, format_terms
from .hpoly import HPoly
from .root_weyl import CartanData, WeylElement


class KElem(SparseRing):
    """Integer combination of characters e^lambda (Laurent exponents allowed)."""

    __slots__ = ()

    @classmethod
    def char(cls, weight: Sequence[int], coeff: int = 1) -> KElem:
        """The character coeff * e^weight."""
        return cls.monomial(tuple(weight), coeff)

    @classmethod
    def exp_root(cls, i: int, nvars: int, sign: int = 1) -> KElem:
        """e^{sign * alpha_i}."""
        e = [0] * nvars
        e[i - 1] = sign
        return cls._raw(nvars, {tuple(e): 1})

    @classmethod
    def one_minus_exp(cls, weight: Sequence[int]) -> KElem:
        """1 - e^weight."""
        n = len(weight)
        return cls(n, {(0,) * n: 1}) - cls.char(weight)

    def __str__(self):
        def mono(e):
            if not any(e):
                return ""
            return "e[" + ",".join(map(str, e)) + "]"

        return format_terms(self.sorted_terms(), mono)

    def exact_div(self, other: KElem) -> KElem:
        """Exact quotient in the Laurent ring; ``ArithmeticError`` otherwise."""
        if not other:
            raise ZeroDivisionError("division by zero")
        if not self:
            return self
        n = self.nvars
        lo_p = tuple(min(e[k] for e in self.terms) for k in range(n))
        lo_d = tuple(min(e[k] for e in other.terms) for k in range(n))
        p = self.shift(tuple(-x for x in lo_p))
        d = other.shift(tuple(-x for x in lo_d))
        q = exact_divide_terms(p.terms, d.terms, n)
        return KElem(n, q).shift(tuple(a - b for a, b in zip(lo_p, lo_d)))

    def evaluate(self, values: Sequence) -> object:
        """Substitute numbers for e^{alpha_1}, ..., e^{alpha_n}."""
        total = 0
        for e, c in self.terms.items():
            t = c
            for v, k in zip(values, e):
                if k:
                    t = t * Fraction(v) ** k
            total += t
        return total


def weyl_act_k(w: WeylElement, f: KElem) -> KElem:
    if f.nvars != w.cartan.rank:
        raise ValueError(f"rank mismatch: element of rank {f.nvars}, group of rank {w.cartan.rank}")
    if w == w.cartan.identity:
        return f
    out = {}
    for e, c in f.terms.items():
        img = w.act(e)
        v = out.get(img, 0) + c
        if v:
            out[img] = v
        else:
            out.pop(img, None)
    return KElem._raw(f.nvars, out)


def reflect_k(c: CartanData, i: int, f: KElem) -> KElem:
    """r_i on characters: lambda -> lambda - <alpha_i^vee, lambda> alpha_i."""
    c.check_index(i)
    row = c.matrix[i - 1]
    k = i - 1
    out = {}
    for e, coef in f.terms.items():
        pairing = sum(a * x for a, x in zip(row, e))
        if pairing:
            e2 = list(e)
            e2[k] -= pairing
            e2 = tuple(e2)
        else:
            e2 = e
        v = out.get(e2, 0) + coef
        if v:
            out[e2] = v
        else:
            out.pop(e2, None)
    return KElem._raw(f.nvars, out)


def divide_one_minus_inv_root(f: KElem, i: int) -> KElem:
    """f / (1 - e^{-alpha_i}), peeling along the i-th exponent.

    Raises ``AssertionError`` when the division leaves a remainder.
    """
    k = i - 1
    groups: dict[tuple, dict[int, object]] = {}
    for e, c in f.terms.items():
        rest = e[:k] + e[k + 1 :]
        groups.setdefault(rest, {})[e[k]] = c
    out = {}
    for rest, series in groups.items():
        lo, hi = min(series), max(series)
        # g_j = h_j - h_{j+1}; walk down from the top exponent
        h = 0
        for j in range(hi, lo, -1):
            h = h + series.get(j, 0)
            if h:
                out[rest[:k] + (j,) + rest[k:]] = h
        if h + series.get(lo, 0) != 0:
            raise AssertionError(f"{f} is not divisible by 1 - e^(-alpha_{i})")
    return KElem._raw(f.nvars, out)


def demazure(c: CartanData, i: int, f: KElem) -> KElem:
    """Ordinary Demazure operator (f - r_i f) / (1 - e^{-alpha_i})."""
    return divide_one_minus_inv_root(f - reflect_k(c, i, f), i)


def isobaric_demazure(c: CartanData, i: int, f: KElem) -> KElem:
    """Isobaric Demazure operator (f - e^{-alpha_i} r_i f) / (1 - e^{-alpha_i})."""
    n = f.nvars
    shift = tuple(-1 if j == i - 1 else 0 for j in range(n))
    return divide_one_minus_inv_root(f - reflect_k(c, i, f).shift(shift), i)


def _power_sum(f: KElem, d: int) -> HPoly:
    # sum_lambda m_lambda * lambda^d, lambda read as a linear form
    out = HPoly.zero(f.nvars)
    for e, c in f.terms.items():
        if d == 0:
            out = out + c
        elif any(e):
            out = out + HPoly.linear(e) ** d * c
    return out


def associated_graded(f: KElem, d: int) -> HPoly:
    """Degree-``d`` part of f under e^lambda -> exp(lambda).

    This is the image of f in the d-th graded piece when f lies in the d-th
    layer of the (1 - e^lambda)-adic filtration, which the caller checks with
    :func:`filtration_degree`.  Negative ``d`` gives zero.
    """
    if d < 0:
        return HPoly.zero(f.nvars)
    p = _power_sum(f, d)
    if d > 1:
        p = p * Fraction(1, factorial(d))
    return p


def filtration_degree(f: KElem, bound: int = 64) -> int | None:
    """Largest d with all components of degree < d vanishing (None for f = 0)."""
    if not f:
        return None
    for d in range(bound + 1):
        if _power_sum(f, d):
            return d
    raise ValueError(f"filtration degree exceeds {bound}")
