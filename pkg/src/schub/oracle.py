"""
Independent checks for the subword formulas.

* Double Schubert polynomials (type A): start from the staircase product for
  the longest permutation and apply divided differences in x; specializing
  x -> y at a permutation gives point restrictions in cohomology.
* Localization: solve  R_u(x) R_v(x) = sum_w c_w R_w(x)  triangularly over
  the fixed points x, using nothing but restriction values.
* Woods Hole sums on Bott-Samelson fixed points, evaluated at exact random
  rational points.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping, Sequence

from ._sparse import SparseRing, exact_divide_terms, format_terms
from .hpoly import HPoly
from .kring import KElem
from .root_weyl import CartanData, Subword, WeylElement, element_of_perm, enumerate_group
from .schubert import restriction_H, restriction_K


class XYPoly(SparseRing):
    """Integer polynomial in x_1..x_n, y_1..y_n (exponent vector x then y)."""

    __slots__ = ()

    @property
    def n(self) -> int:
        return self.nvars // 2

    @classmethod
    def x(cls, i: int, n: int) -> XYPoly:
        e = [0] * (2 * n)
        e[i - 1] = 1
        return cls._raw(2 * n, {tuple(e): 1})

    @classmethod
    def y(cls, i: int, n: int) -> XYPoly:
        e = [0] * (2 * n)
        e[n + i - 1] = 1
        return cls._raw(2 * n, {tuple(e): 1})

    def __str__(self):
        n = self.n

        def mono(e):
            parts = []
            for k, p in enumerate(e):
                if p:
                    name = f"x{k + 1}" if k < n else f"y{k - n + 1}"
                    parts.append(name if p == 1 else f"{name}^{p}")
            return "*".join(parts)

        return format_terms(self.sorted_terms(), mono)

    def swap_x(self, i: int) -> XYPoly:
        out = {}
        for e, c in self.terms.items():
            e2 = list(e)
            e2[i - 1], e2[i] = e2[i], e2[i - 1]
            out[tuple(e2)] = c
        return XYPoly._raw(self.nvars, out)

    def ddx(self, i: int) -> XYPoly:
        """(f - s_i f) / (x_i - x_{i+1})."""
        num = self - self.swap_x(i)
        den = XYPoly.x(i, self.n) - XYPoly.x(i + 1, self.n)
        return XYPoly(self.nvars, exact_divide_terms(num.terms, den.terms, self.nvars))


def _check_perm(v: Sequence[int], n: int) -> tuple[int, ...]:
    v = tuple(v)
    if sorted(v) != list(range(1, n + 1)):
        raise ValueError(f"{v} is not a permutation of 1..{n}")
    return v


@lru_cache(maxsize=None)
def _double_schubert(v: tuple[int, ...]) -> XYPoly:
    n = len(v)
    for i in range(n - 1):
        if v[i] < v[i + 1]:
            up = list(v)
            up[i], up[i + 1] = up[i + 1], up[i]
            return _double_schubert(tuple(up)).ddx(i + 1)
    # v is the longest element
    out = XYPoly.one(2 * n)
    for i in range(1, n + 1):
        for j in range(1, n + 1 - i):
            out = out * (XYPoly.x(i, n) - XYPoly.y(j, n))
    return out


def double_schubert(v: Sequence[int], n: int | None = None) -> XYPoly:
    """Double Schubert polynomial of a permutation in one-line notation."""
    if n is None:
        n = len(v)
    return _double_schubert(_check_perm(v, n))


# (substitution, root sign): x_i -> y_{w(i)} or y_{w^-1(i)};
# alpha_i = y_i - y_{i+1} (sign +1) or y_{i+1} - y_i (sign -1)
CONVENTIONS = (("w", 1), ("w", -1), ("winv", 1), ("winv", -1))
DEFAULT_CONVENTION = ("w", -1)


def _y_to_alpha(n: int, sign: int) -> list[HPoly]:
    # y_k as a linear form in (alpha_1..alpha_{n-1}, t), t the common shift
    out = []
    for k in range(1, n + 1):
        coords = [0] * n
        for i in range(1, k):
            coords[i - 1] = -sign
        coords[n - 1] = 1
        out.append(HPoly.linear(coords))
    return out


def specialize(f: XYPoly, w: Sequence[int], convention=DEFAULT_CONVENTION) -> HPoly:
    """Substitute x_i -> y_{sigma(i)} and rewrite in simple roots.

    Raises ``ArithmeticError`` if the result is not a polynomial in root
    differences (it would then depend on the common shift of the y's).
    """
    subst, sign = convention
    n = f.n
    w = _check_perm(w, n)
    if subst == "winv":
        inv = [0] * n
        for i, wi in enumerate(w):
            inv[wi - 1] = i + 1
        sigma = inv
    elif subst == "w":
        sigma = list(w)
    else:
        raise ValueError(f"unknown substitution {subst!r}")
    ys = _y_to_alpha(n, sign)
    xs = [ys[sigma[i] - 1] for i in range(n)]
    total = HPoly.zero(n)
    for e, c in f.terms.items():
        t = HPoly.constant(c, n)
        for k, p in enumerate(e):
            if p:
                t = t * (xs[k] if k < n else ys[k - n]) ** p
        total = total + t
    out = {}
    for e, c in total.terms.items():
        if e[-1]:
            raise ArithmeticError("specialization is not a polynomial in the simple roots")
        out[e[:-1]] = c
    return HPoly(n - 1, out)


def oracle_restriction_H(v: Sequence[int], w: Sequence[int], n: int | None = None, convention=DEFAULT_CONVENTION) -> HPoly:
    """Restriction of the Schubert class of v to the fixed point w, from
    the double Schubert polynomial."""
    if n is None:
        n = len(v)
    return specialize(double_schubert(v, n), w, convention)


def _perms(n: int):
    from itertools import permutations

    return list(permutations(range(1, n + 1)))


def calibrate_convention(n: int = 3) -> list[tuple[str, int]]:
    """Conventions under which the oracle reproduces restriction_H on S_n."""
    c = CartanData.from_type(f"A{n - 1}")
    elems = {p: element_of_perm(c, p) for p in _perms(n)}
    ref = {(v, w): restriction_H(elems[v], elems[w]) for v in elems for w in elems}
    good = []
    for conv in CONVENTIONS:
        try:
            if all(oracle_restriction_H(v, w, n, conv) == ref[(v, w)] for (v, w) in ref):
                good.append(conv)
        except ArithmeticError:
            continue
    return good


# -- localization -----------------------------------------------------------


def _restriction(theory: str):
    if theory == "H":
        return restriction_H
    if theory == "K-ideal":
        return lambda v, w: restriction_K(v, w, "ideal")
    if theory == "K-structure":
        return lambda v, w: restriction_K(v, w, "structure")
    raise ValueError(f"unknown theory {theory!r}")


class Localization:
    """Restriction table of a finite Weyl group and the triangular solver."""

    def __init__(self, c: CartanData, theory: str = "H"):
        self.c = c
        self.theory = theory
        self.elements = enumerate_group(c)
        f = _restriction(theory)
        self.table = {(v, x): f(v, x) for x in self.elements for v in self.elements}

    def solve(self, u: WeylElement, v: WeylElement) -> dict[WeylElement, object]:
        """{w: coefficient} with R_u(x) R_v(x) = sum_w coeff_w R_w(x) for all x."""
        tab = self.table
        coeffs: dict = {}
        for x in self.elements:  # length-increasing
            rhs = tab[(u, x)] * tab[(v, x)]
            for w, cw in coeffs.items():
                r = tab[(w, x)]
                if r:
                    rhs = rhs - cw * r
            if not rhs:
                continue
            pivot = tab[(x, x)]
            if not pivot:
                raise ArithmeticError(f"singular pivot at {x!r}")
            coeffs[x] = rhs.exact_div(pivot)
        return coeffs


def localization_solve(u: WeylElement, v: WeylElement, theory: str = "H", loc: Localization | None = None) -> dict:
    if loc is None:
        loc = Localization(u.cartan, theory)
    return loc.solve(u, v)


# -- Woods Hole pairing --------------------------------------------------------


class ZeroDenominator(ArithmeticError):
    """The sample hits a pole of the fixed-point sum; draw another."""


@dataclass(frozen=True)
class RationalSample:
    """Exact rational values for e^{alpha_1}, ..., e^{alpha_n}."""

    values: tuple[Fraction, ...]

    @classmethod
    def draw(cls, rank: int, rng: random.Random, lo: int = 2, hi: int = 97) -> RationalSample:
        vals = []
        for _ in range(rank):
            p = rng.randint(lo, hi)
            q = rng.randint(lo, hi)
            while q == p:
                q = rng.randint(lo, hi)
            vals.append(Fraction(p, q))
        return cls(tuple(vals))

    def char(self, weight: Sequence[int]) -> Fraction:
        out = Fraction(1)
        for v, k in zip(self.values, weight):
            if k:
                out *= v**k
        return out

    def __call__(self, f: KElem) -> Fraction:
        return Fraction(f.evaluate(self.values))


def tangent_weights(c: CartanData, word: Sequence[int], j: Subword, r: Subword) -> list[tuple[int, tuple[int, ...]]]:
    """[(i, (prod_{k in J, k <= i} r_k) alpha_i) for i in R]."""
    out = []
    cur = c.identity
    for i in range(len(word)):
        if i in j:
            cur = cur.right_mul_gen(word[i])
        if i in r:
            out.append((i, cur.act(c.simple_root(word[i]))))
    return out


class WoodsHole:
    """Fixed-point sums on BS^word at one sample, with the tangent factors
    1 - e^{beta_i(J)} precomputed for every fixed point J."""

    def __init__(self, c: CartanData, word: Sequence[int], sample: RationalSample):
        self.c = c
        self.word = tuple(word)
        self.sample = sample
        n = len(self.word)
        full = Subword.full(n)
        self.chars: dict[int, list[Fraction]] = {}
        for jm in range(1 << n):
            chars = [sample.char(beta) for _, beta in tangent_weights(c, self.word, Subword(jm, n), full)]
            if any(e == 1 for e in chars):
                raise ZeroDenominator(f"a tangent weight at fixed point {Subword(jm, n)} evaluates to 1")
            self.chars[jm] = chars

    def pair(self, values: Mapping[int, Fraction], r: Subword, sheaf: str = "structure") -> Fraction:
        """Pair point values {J mask: gamma|_J at the sample} against the
        structure sheaf (or ideal sheaf) of BS^R."""
        if sheaf not in ("structure", "ideal"):
            raise ValueError(f"unknown sheaf {sheaf!r}")
        total = Fraction(0)
        rpos = r.positions
        for jm, g in values.items():
            if not g or jm & ~r.mask:
                continue
            chars = self.chars[jm]
            num = Fraction(g)
            den = Fraction(1)
            for i in rpos:
                e = chars[i]
                den *= 1 - e
                if sheaf == "ideal" and not jm >> i & 1:
                    num *= e
            total += num / den
        return total

    def gram(self, values: Mapping[tuple[int, int], Fraction], sheaf: str = "structure") -> dict[tuple[int, int], Fraction]:
        """All pairings at once: {(V, R): <gamma_V, sheaf of BS^R>} from
        point values {(V mask, J mask): gamma_V|_J}.

        Only V in J in R contribute, so the work is 4^n rather than 8^n.
        """
        if sheaf not in ("structure", "ideal"):
            raise ValueError(f"unknown sheaf {sheaf!r}")
        n = len(self.word)
        by_point: dict[int, list[tuple[int, Fraction]]] = {}
        for (vm, jm), g in values.items():
            if g:
                by_point.setdefault(jm, []).append((vm, Fraction(g)))
        out = {(vm, rm): Fraction(0) for vm in range(1 << n) for rm in range(1 << n)}
        for rm in range(1 << n):
            rpos = [i for i in range(n) if rm >> i & 1]
            jm = rm
            while True:
                entries = by_point.get(jm)
                if entries:
                    chars = self.chars[jm]
                    wt = Fraction(1)
                    for i in rpos:
                        e = chars[i]
                        wt /= 1 - e
                        if sheaf == "ideal" and not jm >> i & 1:
                            wt *= e
                    for vm, g in entries:
                        out[(vm, rm)] += g * wt
                if jm == 0:
                    break
                jm = (jm - 1) & rm
        return out


def woods_hole_pair(
    c: CartanData,
    word: Sequence[int],
    restrictions: Mapping[Subword, KElem] | Callable,
    r: Subword,
    sample: RationalSample,
    sheaf: str = "structure",
) -> Fraction:
    """<gamma, [O_{BS^R}]> (``sheaf="structure"``) or <gamma, [I_{BS^R}]>
    (``sheaf="ideal"``) from the restrictions gamma|_J, J a subword of R."""
    get = restrictions if callable(restrictions) else restrictions.get
    values = {}
    for jm in range(1 << len(word)):
        if jm & ~r.mask:
            continue
        g = get(Subword(jm, r.size))
        if g:
            values[jm] = sample(g)
    return WoodsHole(c, word, sample).pair(values, r, sheaf)


def woods_hole_ideal_by_alternation(c, word, restrictions, r: Subword, sample) -> Fraction:
    """<gamma, [I_{BS^R}]> as the alternating sum of structure-sheaf pairings."""
    total = Fraction(0)
    for sm in range(1 << len(word)):
        if sm & ~r.mask:
            continue
        s = Subword(sm, r.size)
        sign = -1 if (len(r) - len(s)) % 2 else 1
        total += sign * woods_hole_pair(c, word, restrictions, s, sample, "structure")
    return total


def draw_sample(c: CartanData, word: Sequence[int], rng: random.Random, tries: int = 100) -> RationalSample:
    """A sample at which no tangent weight of BS^word evaluates to 1."""
    for _ in range(tries):
        s = RationalSample.draw(c.rank, rng)
        try:
            WoodsHole(c, word, s)
        except ZeroDenominator:
            continue
        return s
    raise ZeroDenominator("could not draw a regular sample")
