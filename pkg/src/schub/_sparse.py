"""Sparse exponent-vector -> coefficient arithmetic shared by HPoly and KElem."""

from __future__ import annotations

from fractions import Fraction
from operator import add
from typing import Iterable, Mapping


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


class SparseRing:
    """Finite sum of monomials keyed by integer exponent vectors.

    Subclasses fix the display and the Weyl action; arithmetic lives here.
    Values are immutable once built.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], object] | None = None):
        self.nvars = nvars
        t = {}
        if terms:
            for e, c in terms.items():
                if c:
                    t[tuple(e)] = _norm(c)
        self.terms = t
        self._hash = None

    @classmethod
    def _raw(cls, nvars, terms):
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def zero(cls, nvars: int):
        return cls._raw(nvars, {})

    @classmethod
    def one(cls, nvars: int):
        return cls.constant(1, nvars)

    @classmethod
    def constant(cls, c, nvars: int):
        return cls._raw(nvars, {(0,) * nvars: _norm(c)} if c else {})

    @classmethod
    def monomial(cls, exps: Iterable[int], coeff=1):
        exps = tuple(exps)
        return cls._raw(len(exps), {exps: coeff} if coeff else {})

    def _coerce(self, other):
        if isinstance(other, SparseRing):
            if type(other) is not type(self):
                raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
            if other.nvars != self.nvars:
                raise ValueError(f"rank mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (int, Fraction)):
            return type(self).constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(self.terms) < len(other.terms):
            a, b = other.terms, self.terms
        else:
            a, b = self.terms, other.terms
        out = dict(a)
        for e, c in b.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return self._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return self._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.zero(self.nvars)
            return self._raw(self.nvars, {e: _norm(c * other) for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(map(add, e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    del out[e]
        return self._raw(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = self.one(self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, exps: tuple[int, ...]):
        """Multiply by the monomial with exponent vector ``exps``."""
        return self._raw(self.nvars, {tuple(map(add, e, exps)): c for e, c in self.terms.items()})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self.terms
            return self.terms == {(0,) * self.nvars: other}
        if isinstance(other, SparseRing) and type(other) is type(self):
            return self.nvars == other.nvars and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((type(self).__name__, self.nvars, frozenset(self.terms.items())))
        return self._hash

    def is_constant(self) -> bool:
        z = (0,) * self.nvars
        return all(e == z for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * self.nvars, 0)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=self._display_key)

    def _display_key(self, item):
        e, _ = item
        return tuple(-x for x in e)

    def to_json(self) -> list[dict]:
        out = []
        for e, c in self.sorted_terms():
            if isinstance(c, Fraction):
                c = f"{c.numerator}/{c.denominator}"
            out.append({"exponents": list(e), "coeff": c})
        return out

    @classmethod
    def from_json(cls, data: list[dict], nvars: int | None = None):
        terms = {}
        for item in data:
            c = item["coeff"]
            if isinstance(c, str):
                c = Fraction(c)
            terms[tuple(item["exponents"])] = c
        if nvars is None:
            if not terms:
                raise ValueError("cannot infer rank of an empty polynomial")
            nvars = len(next(iter(terms)))
        return cls(nvars, terms)

    def __repr__(self):
        return f"{type(self).__name__}({self})"


def format_terms(pairs, render_monomial) -> str:
    """Join (coeff, exps) pairs as ``a - 2*b + 3``."""
    out = []
    for e, c in pairs:
        mono = render_monomial(e)
        neg = c < 0
        mag = -c if neg else c
        if mono == "":
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out) or "0"


def exact_divide_terms(num: dict, den: dict, nvars: int) -> dict:
    """Exact quotient of polynomials (nonnegative exponents) by lex leading terms.

    Raises ``ArithmeticError`` on a nonzero remainder.
    """
    if not den:
        raise ZeroDivisionError("division by zero polynomial")
    lead = max(den)
    lc = den[lead]
    rem = dict(num)
    quot: dict = {}
    while rem:
        top = max(rem)
        diff = tuple(a - b for a, b in zip(top, lead))
        if min(diff, default=0) < 0:
            raise ArithmeticError("inexact division")
        c = rem[top]
        if isinstance(c, int) and isinstance(lc, int):
            qc, r = divmod(c, lc)
            if r:
                raise ArithmeticError("inexact division (coefficient)")
        else:
            qc = Fraction(c) / lc
        quot[diff] = qc
        for e, d in den.items():
            k = tuple(map(add, e, diff))
            v = rem.get(k, 0) - qc * d
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return quot
