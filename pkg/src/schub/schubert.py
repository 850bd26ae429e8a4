"""
Structure constants of Schubert classes from subword sums.

For a word Q and subwords P, R of Q, each position q falls in one of three
classes (in neither subword, in exactly one, in both).  Every formula below
is a product over Q of a per-class operator, applied right to left to 1:

    c (ddr)  none: d r        one: r           both: a r
    c (rdd)  none: r (-d)     one: r           both: a r
    a        none: e^a r D    one: r           both: -(1-e^-a) r
    a0       none: e^-a r(-D')  one: e^-a r    both: (1-e^-a) r
    d        none: e^a r(-D)  one: r           both: (1-e^-a) r

with d the divided difference, D the ordinary and D' the isobaric Demazure
operator.  The a-row absorbs the per-term sign (-1)^{|Q|-|P|-|R|}; the
overall sign (-1)^{l(u)+l(v)-l(w)} is applied at the end.
"""

from __future__ import annotations

from typing import Callable, Sequence

from .hpoly import HPoly, divided_difference, reflect_h
from .kring import KElem, demazure, isobaric_demazure, reflect_k
from .root_weyl import (
    CartanData,
    CartanError,
    Subword,
    WeylElement,
    bruhat_leq,
    demazure_product,
    element_of_word,
    is_reduced,
    subwords_by_product,
    subwords_with_product,
)

THEORIES = ("H", "K-ideal", "K-structure")
NONE, ONE, BOTH = 0, 1, 2


def _neg(i, n):
    e = [0] * n
    e[i - 1] = -1
    return tuple(e)


def _step_table(c: CartanData, kind: str) -> Callable:
    """Return step(i, cls, f) for the given formula family."""
    n = c.rank

    if kind in ("ddr", "rdd"):

        def step(i, cls, f):
            if kind == "ddr":
                if cls == NONE:
                    return divided_difference(c, i, reflect_h(c, i, f))
                g = reflect_h(c, i, f)
            else:
                if cls == NONE:
                    return -reflect_h(c, i, divided_difference(c, i, f))
                g = reflect_h(c, i, f)
            return HPoly.var(i, n) * g if cls == BOTH else g

        return step

    def e_neg(i):
        return KElem.exp_root(i, n, -1)

    def one_m(i):
        return KElem.one_minus_exp(_neg(i, n))

    if kind == "a":

        def step(i, cls, f):
            if cls == NONE:
                return KElem.exp_root(i, n) * reflect_k(c, i, demazure(c, i, f))
            g = reflect_k(c, i, f)
            return -(one_m(i) * g) if cls == BOTH else g

    elif kind == "d":

        def step(i, cls, f):
            if cls == NONE:
                return -(KElem.exp_root(i, n) * reflect_k(c, i, demazure(c, i, f)))
            g = reflect_k(c, i, f)
            return one_m(i) * g if cls == BOTH else g

    elif kind == "a0":

        def step(i, cls, f):
            if cls == NONE:
                return -(e_neg(i) * reflect_k(c, i, isobaric_demazure(c, i, f)))
            g = reflect_k(c, i, f)
            return one_m(i) * g if cls == BOTH else e_neg(i) * g

    else:
        raise ValueError(f"unknown formula family {kind!r}")
    return step


class WordEvaluator:
    """Evaluates prod_{q in Q} op(q, class_q) . 1 with suffix memoization.

    The cache is private to the instance, so results never depend on call
    order.
    """

    def __init__(self, c: CartanData, word: Sequence[int], kind: str):
        self.c = c
        self.word = tuple(word)
        self.kind = kind
        self.step = _step_table(c, kind)
        ring = HPoly if kind in ("ddr", "rdd") else KElem
        self._one = ring.one(c.rank)
        self._cache: dict[tuple, object] = {(): self._one}

    def __call__(self, classes: Sequence[int]):
        classes = tuple(classes)
        cache = self._cache
        # longest cached suffix, then extend leftwards
        k = 0
        while classes[k:] not in cache:
            k += 1
        val = cache[classes[k:]]
        for pos in range(k - 1, -1, -1):
            if val:
                val = self.step(self.word[pos], classes[pos], val)
            cache[classes[pos:]] = val
        return val


def position_classes(p: Subword, r: Subword) -> tuple[int, ...]:
    return tuple((pos in p) + (pos in r) for pos in range(p.size))


def _kind_for(theory: str, variant: str = "ddr") -> str:
    if theory == "H":
        if variant not in ("ddr", "rdd"):
            raise ValueError(f"unknown variant {variant!r}")
        return variant
    if theory == "K-ideal":
        return "a"
    if theory == "K-structure":
        return "a0"
    raise ValueError(f"unknown theory {theory!r}; expected one of {THEORIES}")


def check_word(w: WeylElement, word: Sequence[int] | None, reduced: bool) -> tuple[int, ...]:
    """Default to the canonical word; otherwise validate a user word for w."""
    if word is None:
        return w.word
    word = tuple(word)
    c = w.cartan
    if reduced:
        if not is_reduced(c, word) or element_of_word(c, word) != w:
            raise CartanError(f"word {' '.join(map(str, word))} is not a reduced word for {w!r}")
    elif demazure_product(c, word) != w:
        raise CartanError(f"word {' '.join(map(str, word))} does not have Demazure product {w!r}")
    return word


def _zero(theory, n):
    return HPoly.zero(n) if theory == "H" else KElem.zero(n)


def structure_constant(
    u: WeylElement,
    v: WeylElement,
    w: WeylElement,
    theory: str = "H",
    variant: str = "ddr",
    word: Sequence[int] | None = None,
):
    c = w.cartan
    kind = _kind_for(theory, variant)
    q = check_word(w, word, reduced=theory == "H")
    if not (bruhat_leq(u, w) and bruhat_leq(v, w)):
        return _zero(theory, c.rank)
    mode = "reduced" if theory == "H" else "demazure"
    ps = subwords_with_product(c, q, u, mode)
    rs = ps if v == u else subwords_with_product(c, q, v, mode)
    ev = WordEvaluator(c, q, kind)
    total = _zero(theory, c.rank)
    for p in ps:
        for r in rs:
            total = total + ev(position_classes(p, r))
    if theory == "K-ideal" and (u.length + v.length - w.length) % 2:
        total = -total
    return total


def structure_constant_H(u, v, w, variant: str = "ddr", word=None) -> HPoly:
    """c_{uv}^w, summed over pairs of reduced subwords of a reduced word."""
    return structure_constant(u, v, w, "H", variant, word)


def structure_constant_K(u, v, w, basis: str = "ideal", word=None) -> KElem:
    """a_{uv}^w (``basis="ideal"``) or a0_{uv}^w (``basis="structure"``)."""
    return structure_constant(u, v, w, _basis_theory(basis), word=word)


def _basis_theory(basis: str) -> str:
    if basis in ("ideal", "K-ideal"):
        return "K-ideal"
    if basis in ("structure", "K-structure"):
        return "K-structure"
    raise ValueError(f"unknown K basis {basis!r}; expected 'ideal' or 'structure'")


def structure_constants_for(w: WeylElement, theory: str = "H", variant: str = "ddr", word=None) -> dict:
    """All nonzero {(u, v): value} for a fixed w, sharing one evaluator."""
    c = w.cartan
    kind = _kind_for(theory, variant)
    q = check_word(w, word, reduced=theory == "H")
    groups = subwords_by_product(c, q, "reduced" if theory == "H" else "demazure")
    ev = WordEvaluator(c, q, kind)
    out = {}
    items = sorted(groups.items())
    for u, ps in items:
        for v, rs in items:
            total = _zero(theory, c.rank)
            for p in ps:
                for r in rs:
                    total = total + ev(position_classes(p, r))
            if theory == "K-ideal" and (u.length + v.length - w.length) % 2:
                total = -total
            if total:
                out[(u, v)] = total
    return out


def _restriction_step(c, theory):
    n = c.rank
    if theory == "H":

        def step(i, inside, f):
            g = reflect_h(c, i, f)
            return HPoly.var(i, n) * g if inside else g

    elif theory == "K-ideal":

        def step(i, inside, f):
            g = reflect_k(c, i, f)
            return KElem.one_minus_exp(_neg(i, n)) * g if inside else g

    else:

        def step(i, inside, f):
            g = reflect_k(c, i, f)
            if inside:
                return KElem.one_minus_exp(_neg(i, n)) * g
            return KElem.exp_root(i, n, -1) * g

    return step


def _restriction_sum(c, q, subwords, theory):
    step = _restriction_step(c, theory)
    total = _zero(theory, c.rank)
    one = HPoly.one(c.rank) if theory == "H" else KElem.one(c.rank)
    for r in subwords:
        f = one
        for pos in range(len(q) - 1, -1, -1):
            f = step(q[pos], pos in r, f)
        if theory == "K-ideal" and len(r) % 2:
            f = -f
        total = total + f
    return total


def restriction_H(v: WeylElement, w: WeylElement, word=None) -> HPoly:
    """S_v|_w: sum over reduced R with product v of prod_Q (a_q^{[q in R]} r_q) . 1."""
    c = w.cartan
    q = check_word(w, word, reduced=True)
    return _restriction_sum(c, q, subwords_with_product(c, q, v, "reduced"), "H")


def restriction_K(v: WeylElement, w: WeylElement, basis: str = "ideal", word=None) -> KElem:
    """xi_v|_w (ideal) or xi0_v|_w (structure), summed over Demazure subwords."""
    c = w.cartan
    theory = _basis_theory(basis)
    q = check_word(w, word, reduced=False)
    val = _restriction_sum(c, q, subwords_with_product(c, q, v, "demazure"), theory)
    if theory == "K-ideal" and v.length % 2:
        val = -val
    return val


def restriction(v, w, theory: str = "H", word=None):
    if theory == "H":
        return restriction_H(v, w, word)
    return restriction_K(v, w, theory, word)


class Recursion:
    """c_{uv}^w through the left-descent recursion, memoized per instance.

    With w-bar = r_a w < w and s-bar = r_a s,

        c_{uv}^w = d_a(r_a c_{uv}^{w-bar})
                 + [u-bar < u]  r_a c_{u-bar,v}^{w-bar}
                 + [v-bar < v]  r_a c_{u,v-bar}^{w-bar}
                 + [both]       a r_a c_{u-bar,v-bar}^{w-bar}

    ``literal=True`` drops the three outer r_a, giving the unrotated form.
    """

    def __init__(self, c: CartanData, literal: bool = False):
        self.c = c
        self.literal = literal
        self._memo: dict = {}

    def __call__(self, u: WeylElement, v: WeylElement, w: WeylElement, alpha: int | None = None) -> HPoly:
        c = self.c
        n = c.rank
        if alpha is None:
            key = (u, v, w)
            if key in self._memo:
                return self._memo[key]
        if w.length == 0:
            val = HPoly.one(n) if u.length == 0 and v.length == 0 else HPoly.zero(n)
        elif not (bruhat_leq(u, w) and bruhat_leq(v, w)):
            val = HPoly.zero(n)
        else:
            a = w.word[0] if alpha is None else alpha
            if not w.has_left_descent(a):
                raise ValueError(f"r_{a} is not a left descent of {w!r}")
            wb = w.left_mul_gen(a)
            ub, vb = u.left_mul_gen(a), v.left_mul_gen(a)
            u_down, v_down = ub.length < u.length, vb.length < v.length
            val = divided_difference(c, a, reflect_h(c, a, self(u, v, wb)))
            rest = HPoly.zero(n)
            if u_down:
                rest = rest + self(ub, v, wb)
            if v_down:
                rest = rest + self(u, vb, wb)
            both = self(ub, vb, wb) if u_down and v_down else HPoly.zero(n)
            if not self.literal:
                rest, both = reflect_h(c, a, rest), reflect_h(c, a, both)
            val = val + rest + HPoly.var(a, n) * both
        if alpha is None:
            self._memo[(u, v, w)] = val
        return val


def recursion_c(u: WeylElement, v: WeylElement, w: WeylElement, alpha: int | None = None, literal: bool = False) -> HPoly:
    if alpha is not None and not w.has_left_descent(alpha):
        raise ValueError(f"r_{alpha} is not a left descent of {w!r}: need l(r_a w) = l(w) - 1")
    return Recursion(w.cartan, literal)(u, v, w, alpha)


# -- Bott-Samelson classes ---------------------------------------------------

BS_KIND = {"H": "ddr", "K-ideal": "d", "K-structure": "a0"}


def _restrict_mask(sub: Subword, ambient: Subword) -> Subword:
    # re-index the positions of ``sub`` inside the positions of ``ambient``
    pos = ambient.positions
    return Subword.from_positions([k for k, p in enumerate(pos) if p in sub], len(pos))


def bs_structure_constant(c: CartanData, word: Sequence[int], r: Subword, s: Subword, j: Subword | None = None, theory: str = "H"):
    """b / d / d0 structure constant of the dual Bott-Samelson classes.

    The coefficient of the class of ``j`` in the product of the classes of
    ``r`` and ``s``; the product formula is applied with ``j`` as ambient
    word and vanishes unless ``j`` contains both.
    """
    word = tuple(word)
    if j is None:
        j = Subword.full(len(word))
    for m in (r, s, j):
        if m.size != len(word):
            raise ValueError(f"subword {m} does not match a word of length {len(word)}")
    if not (r.issubset(j) and s.issubset(j)):
        return _zero(theory, c.rank)
    amb = j.letters(word)
    rr, ss = _restrict_mask(r, j), _restrict_mask(s, j)
    ev = WordEvaluator(c, amb, BS_KIND[theory])
    return ev(position_classes(rr, ss))


BS_RESTRICTION = {"T": "H", "tau": "K-ideal", "tau0": "K-structure"}


def bs_restriction(c: CartanData, word: Sequence[int], j: Subword, lpt: Subword, theory: str = "T"):
    """T_J|_L, tau_J|_L or tau0_J|_L: product over m in L, zero unless J is in L."""
    word = tuple(word)
    th = BS_RESTRICTION.get(theory)
    if th is None:
        raise ValueError(f"unknown restriction family {theory!r}; expected T, tau or tau0")
    if not j.issubset(lpt):
        return _zero(th, c.rank)
    step = _restriction_step(c, th)
    f = HPoly.one(c.rank) if th == "H" else KElem.one(c.rank)
    for pos in reversed(lpt.positions):
        f = step(word[pos], pos in j, f)
    return f
