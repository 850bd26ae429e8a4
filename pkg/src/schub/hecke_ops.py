"""
Smash-product operator algebras and the Schubert structure operators.

A ``SmashElem`` is a normal form  sum_w p_w b_w  with coefficients on the
left and b_w running over a basis of the nil Hecke algebra (flavor ``H``,
b_w = d_w acting by divided differences) or of the 0-Hecke algebra (flavor
``K`` acting by ordinary Demazure operators, flavor ``Kiso`` by isobaric
ones).  Moving a generator past a coefficient uses the twisted Leibniz rule

    b_i p = (D_i p) + (r_i p) b_i

where D_i is the divided difference in H and the ordinary Demazure operator
in both K flavors (the constant term of the isobaric rule is ordinary too).

A ``TensorOp`` is a finite sum  X (x) b_a (x) b_b ...  with X a SmashElem in
slot 1 and plain Hecke basis elements in the remaining slots.
"""

from __future__ import annotations

import random
from typing import Mapping, Sequence

from .hpoly import HPoly, divided_difference, reflect_h
from .kring import KElem, demazure, isobaric_demazure, reflect_k
from .root_weyl import CartanData, WeylElement

FLAVORS = ("H", "K", "Kiso")
KINDS = ("J", "Xi", "Xi0", "D", "L", "Lambda", "Lambda0")

# slot-1 flavor and number of extra Hecke slots per operator kind
KIND_INFO = {
    "J": ("H", 1),
    "D": ("H", 1),
    "Xi": ("K", 1),
    "Xi0": ("Kiso", 1),
    "L": ("H", 2),
    "Lambda": ("K", 2),
    "Lambda0": ("Kiso", 2),
}

KIND_ALIASES = {
    "xi": "Xi",
    "Ξ": "Xi",
    "xi0": "Xi0",
    "xio": "Xi0",
    "Ξ∘": "Xi0",
    "lambda": "Lambda",
    "Λ": "Lambda",
    "lambda0": "Lambda0",
    "lambdao": "Lambda0",
    "Λ∘": "Lambda0",
    "j": "J",
    "l": "L",
    "d": "D",
}


def normalize_kind(kind: str) -> str:
    if kind in KIND_INFO:
        return kind
    k = KIND_ALIASES.get(kind, KIND_ALIASES.get(kind.lower()))
    if k is None:
        raise ValueError(f"unknown operator kind {kind!r}; expected one of {', '.join(KINDS)}")
    return k


def _ring(flavor):
    return HPoly if flavor == "H" else KElem


def _reflect(c, flavor, i, p):
    return reflect_h(c, i, p) if flavor == "H" else reflect_k(c, i, p)


def _leibniz_const(c, flavor, i, p):
    return divided_difference(c, i, p) if flavor == "H" else demazure(c, i, p)


def _act_gen(c, flavor, i, p):
    if flavor == "H":
        return divided_difference(c, i, p)
    if flavor == "K":
        return demazure(c, i, p)
    return isobaric_demazure(c, i, p)


def hecke_left_gen(i: int, x: WeylElement, nil: bool) -> WeylElement | None:
    """b_i b_x in the nil (``nil=True``) or 0-Hecke algebra; None means zero."""
    if x.has_left_descent(i):
        return None if nil else x
    return x.left_mul_gen(i)


def hecke_mul(x: WeylElement, y: WeylElement, nil: bool) -> WeylElement | None:
    """b_x b_y; None means zero (nil Hecke only)."""
    for j in y.word:
        if x.has_right_descent(j):
            if nil:
                return None
        else:
            x = x.right_mul_gen(j)
    return x


class SmashElem:
    """Normal form sum_w p_w b_w in the smash product of the given flavor."""

    __slots__ = ("cartan", "flavor", "terms", "_hash")

    def __init__(self, cartan: CartanData, flavor: str, terms: Mapping[WeylElement, object] | None = None):
        if flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {flavor!r}")
        self.cartan = cartan
        self.flavor = flavor
        self.terms = {w: p for w, p in (terms or {}).items() if p}
        self._hash = None

    @classmethod
    def scalar(cls, c: CartanData, flavor: str, p) -> SmashElem:
        if isinstance(p, int):
            p = _ring(flavor).constant(p, c.rank)
        return cls(c, flavor, {c.identity: p})

    @classmethod
    def basis(cls, c: CartanData, flavor: str, w: WeylElement, p=1) -> SmashElem:
        if isinstance(p, int):
            p = _ring(flavor).constant(p, c.rank)
        return cls(c, flavor, {w: p})

    @classmethod
    def gen(cls, c: CartanData, flavor: str, i: int) -> SmashElem:
        return cls.basis(c, flavor, c.gen(i))

    @classmethod
    def reflection(cls, c: CartanData, flavor: str, i: int) -> SmashElem:
        """The model of r_i:  1 - a d  (H),  1 - (1-e^-a) D  (K),
        e^a (1 - (1-e^-a) D-bar)  (Kiso)."""
        n = c.rank
        one = cls.scalar(c, flavor, 1)
        if flavor == "H":
            return one - cls.basis(c, flavor, c.gen(i), HPoly.var(i, n))
        t = cls.basis(c, flavor, c.gen(i), KElem.one_minus_exp(_neg_root(i, n)))
        if flavor == "K":
            return one - t
        return (one - t).lmul(KElem.exp_root(i, n))

    def _check(self, other: SmashElem):
        if self.flavor != other.flavor:
            raise ValueError(f"flavor mismatch: {self.flavor} vs {other.flavor}")
        if self.cartan.matrix != other.cartan.matrix:
            raise ValueError("rank/type mismatch between operators")

    def __add__(self, other: SmashElem) -> SmashElem:
        self._check(other)
        out = dict(self.terms)
        for w, p in other.terms.items():
            q = out.get(w)
            q = p if q is None else q + p
            if q:
                out[w] = q
            else:
                out.pop(w, None)
        return SmashElem(self.cartan, self.flavor, out)

    def __neg__(self) -> SmashElem:
        return SmashElem(self.cartan, self.flavor, {w: -p for w, p in self.terms.items()})

    def __sub__(self, other: SmashElem) -> SmashElem:
        return self + (-other)

    def lmul(self, p) -> SmashElem:
        """Multiply every coefficient on the left by the ring element ``p``."""
        return SmashElem(self.cartan, self.flavor, {w: p * q for w, q in self.terms.items()})

    def left_gen(self, i: int) -> SmashElem:
        """b_i * self, via the twisted Leibniz rule."""
        c, fl = self.cartan, self.flavor
        nil = fl == "H"
        out: dict = {}

        def put(w, p):
            if not p:
                return
            q = out.get(w)
            q = p if q is None else q + p
            if q:
                out[w] = q
            else:
                del out[w]

        for x, p in self.terms.items():
            put(x, _leibniz_const(c, fl, i, p))
            y = hecke_left_gen(i, x, nil)
            if y is not None:
                put(y, _reflect(c, fl, i, p))
        return SmashElem(c, fl, out)

    def __mul__(self, other):
        if not isinstance(other, SmashElem):
            if isinstance(other, int):
                return self.lmul(other)
            return NotImplemented
        self._check(other)
        result = SmashElem(self.cartan, self.flavor)
        cache: dict = {}
        for w, p in self.terms.items():
            z = _basis_times(w, other, cache)
            result = result + z.lmul(p)
        return result

    def apply(self, f):
        """Act on a ring element: sum_w p_w (b_w . f)."""
        c, fl = self.cartan, self.flavor
        total = _ring(fl).zero(c.rank)
        for w, p in self.terms.items():
            g = f
            for i in reversed(w.word):
                g = _act_gen(c, fl, i, g)
                if not g:
                    break
            total = total + p * g
        return total

    def __eq__(self, other):
        if isinstance(other, SmashElem):
            return self.flavor == other.flavor and self.terms == other.terms
        if isinstance(other, int) and other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.flavor, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __str__(self):
        sym = {"H": "d", "K": "D", "Kiso": "Dbar"}[self.flavor]
        parts = []
        for w in sorted(self.terms):
            b = "1" if w.length == 0 else f"{sym}[{' '.join(map(str, w.word))}]"
            parts.append(f"({self.terms[w]})*{b}")
        return " + ".join(parts) or "0"

    __repr__ = __str__


def _neg_root(i, n):
    e = [0] * n
    e[i - 1] = -1
    return tuple(e)


def _basis_times(w: WeylElement, y: SmashElem, cache: dict) -> SmashElem:
    # b_w * y, built letter by letter from the right end of w's word
    if w in cache:
        return cache[w]
    if w.length == 0:
        out = y
    else:
        i = w.word[0]
        rest = w.left_mul_gen(i)
        out = _basis_times(rest, y, cache).left_gen(i)
    cache[w] = out
    return out


class TensorOp:
    """sum over keys (b_1, ..., b_k) of  X_key (x) b_1 (x) ... (x) b_k.

    Slot 1 lives in the smash product of ``flavor``; the k extra slots are
    the plain nil Hecke algebra (flavor H) or 0-Hecke algebra (K flavors).
    """

    __slots__ = ("cartan", "flavor", "slots", "terms")

    def __init__(self, cartan: CartanData, flavor: str, slots: int, terms: Mapping[tuple, SmashElem] | None = None):
        self.cartan = cartan
        self.flavor = flavor
        self.slots = slots
        self.terms = {k: x for k, x in (terms or {}).items() if x}

    @classmethod
    def identity(cls, c: CartanData, flavor: str, slots: int) -> TensorOp:
        return cls(c, flavor, slots, {(c.identity,) * slots: SmashElem.scalar(c, flavor, 1)})

    @property
    def nil(self) -> bool:
        return self.flavor == "H"

    def __add__(self, other: TensorOp) -> TensorOp:
        out = dict(self.terms)
        for k, x in other.terms.items():
            y = out.get(k)
            y = x if y is None else y + x
            if y:
                out[k] = y
            else:
                out.pop(k, None)
        return TensorOp(self.cartan, self.flavor, self.slots, out)

    def __neg__(self):
        return TensorOp(self.cartan, self.flavor, self.slots, {k: -x for k, x in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: TensorOp) -> TensorOp:
        if self.flavor != other.flavor or self.slots != other.slots:
            raise ValueError("tensor operators of different shapes")
        nil = self.nil
        out: dict = {}
        for k1, x1 in self.terms.items():
            for k2, x2 in other.terms.items():
                key = []
                for a, b in zip(k1, k2):
                    ab = hecke_mul(a, b, nil)
                    if ab is None:
                        break
                    key.append(ab)
                else:
                    key = tuple(key)
                    prod = x1 * x2
                    if not prod:
                        continue
                    y = out.get(key)
                    y = prod if y is None else y + prod
                    if y:
                        out[key] = y
                    else:
                        del out[key]
        return TensorOp(self.cartan, self.flavor, self.slots, out)

    def __eq__(self, other):
        if not isinstance(other, TensorOp):
            return NotImplemented
        return self.flavor == other.flavor and self.slots == other.slots and self.terms == other.terms

    __hash__ = None

    def term_count(self) -> int:
        """Total number of (coefficient monomial, basis tuple) terms."""
        return sum(len(p.terms) for x in self.terms.values() for p in x.terms.values())

    def coefficient(self, *key: WeylElement) -> SmashElem:
        return self.terms.get(tuple(key), SmashElem(self.cartan, self.flavor))

    def __str__(self):
        lines = []
        for k in sorted(self.terms, key=lambda t: tuple((w.length, w.word) for w in t)):
            ks = " (x) ".join("1" if w.length == 0 else "b[" + " ".join(map(str, w.word)) + "]" for w in k)
            lines.append(f"[{self.terms[k]}] (x) {ks}")
        return "\n".join(lines) or "0"


def build_operator(c: CartanData, i: int, kind: str) -> TensorOp:
    """The single-root operator of the given kind, r_i expanded in the basis."""
    kind = normalize_kind(kind)
    c.check_index(i)
    flavor, slots = KIND_INFO[kind]
    n = c.rank
    ident, g = c.identity, c.gen(i)
    r = SmashElem.reflection(c, flavor, i)
    b = SmashElem.gen(c, flavor, i)
    if flavor == "H":
        alpha = HPoly.var(i, n)
    else:
        e_pos = KElem.exp_root(i, n)
        e_neg = KElem.exp_root(i, n, -1)
        one_m = KElem.one_minus_exp(_neg_root(i, n))
    terms: dict = {}
    if kind == "J":
        terms[(ident,)] = r
        terms[(g,)] = r.lmul(alpha)
    elif kind == "D":
        terms[(ident,)] = -b
        terms[(g,)] = r
    elif kind == "Xi":
        terms[(ident,)] = r
        terms[(g,)] = -r.lmul(one_m)
    elif kind == "Xi0":
        terms[(ident,)] = r.lmul(e_neg)
        terms[(g,)] = r.lmul(one_m)
    elif kind == "L":
        terms[(ident, ident)] = b * r
        terms[(g, ident)] = r
        terms[(ident, g)] = r
        terms[(g, g)] = r.lmul(alpha)
    elif kind == "Lambda":
        terms[(ident, ident)] = (r * b).lmul(e_pos)
        terms[(g, ident)] = r
        terms[(ident, g)] = r
        terms[(g, g)] = -r.lmul(one_m)
    elif kind == "Lambda0":
        terms[(ident, ident)] = -(r * b).lmul(e_neg)
        terms[(g, ident)] = r.lmul(e_neg)
        terms[(ident, g)] = r.lmul(e_neg)
        terms[(g, g)] = r.lmul(one_m)
    return TensorOp(c, flavor, slots, terms)


def operator_word_product(c: CartanData, word: Sequence[int], kind: str, budget: int | None = None) -> TensorOp:
    """prod_{q in word} X^{alpha_q}, left to right.

    With ``budget`` set, raises ``MemoryError`` once an intermediate product
    exceeds that many terms.
    """
    kind = normalize_kind(kind)
    flavor, slots = KIND_INFO[kind]
    out = TensorOp.identity(c, flavor, slots)
    singles: dict = {}
    for i in word:
        if i not in singles:
            singles[i] = build_operator(c, i, kind)
        out = out * singles[i]
        if budget is not None and out.term_count() > budget:
            raise MemoryError(f"term budget {budget} exceeded ({out.term_count()} terms)")
    return out


def check_square(c: CartanData, i: int, kind: str) -> str:
    """Classify X^2 as 'zero', 'idempotent', 'involution' or 'fail'."""
    x = build_operator(c, i, kind)
    sq = x * x
    if not sq.terms:
        return "zero"
    if sq == x:
        return "idempotent"
    if sq == TensorOp.identity(c, x.flavor, x.slots):
        return "involution"
    return "fail"


def braid_words(c: CartanData, i: int, j: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if i == j:
        raise ValueError("braid relation needs two distinct generators")
    m = c.coxeter_order(i, j)
    if m is None:
        raise ValueError(f"generators {i}, {j} generate an infinite dihedral group")
    w1 = tuple(i if k % 2 == 0 else j for k in range(m))
    w2 = tuple(j if k % 2 == 0 else i for k in range(m))
    return w1, w2


def check_braid(c: CartanData, i: int, j: int, kind: str, budget: int | None = None) -> bool:
    w1, w2 = braid_words(c, i, j)
    return operator_word_product(c, w1, kind, budget) == operator_word_product(c, w2, kind, budget)


def braid_report(c: CartanData, i: int, j: int, kind: str, budget: int | None = None) -> dict:
    """Like :func:`check_braid` but with term counts; ``passed`` is None on budget overflow."""
    w1, w2 = braid_words(c, i, j)
    try:
        a = operator_word_product(c, w1, kind, budget)
        b = operator_word_product(c, w2, kind, budget)
    except MemoryError as exc:
        return {"kind": kind, "i": i, "j": j, "m": len(w1), "passed": None, "note": str(exc)}
    return {"kind": kind, "i": i, "j": j, "m": len(w1), "passed": a == b, "terms": [a.term_count(), b.term_count()]}


def weyl_smash(c: CartanData, flavor: str, w: WeylElement) -> SmashElem:
    """w as an element of the smash product: the product of r_i along a word."""
    out = SmashElem.scalar(c, flavor, 1)
    for i in w.word:
        out = out * SmashElem.reflection(c, flavor, i)
    return out


def closed_form(c: CartanData, w: WeylElement, kind: str) -> TensorOp:
    """J_w, Xi_w or Xi0_w assembled from point restrictions.

        J_w   = sum_v (S_v|_w) w (x) d_v
        Xi_w  = sum_v (-1)^{l(v)} (xi_v|_w) w (x) D_v
        Xi0_w = sum_v (xi0_v|_w) w (x) Dbar_v
    """
    from .schubert import restriction_H, restriction_K
    from .root_weyl import bruhat_interval

    kind = normalize_kind(kind)
    if kind not in ("J", "Xi", "Xi0"):
        raise ValueError(f"no closed form for kind {kind}")
    flavor, slots = KIND_INFO[kind]
    ww = weyl_smash(c, flavor, w)
    terms = {}
    for v in bruhat_interval(w):
        if kind == "J":
            coeff = restriction_H(v, w)
        elif kind == "Xi":
            coeff = restriction_K(v, w, "ideal") * (-1) ** v.length
        else:
            coeff = restriction_K(v, w, "structure")
        terms[(v,)] = ww.lmul(coeff)
    return TensorOp(c, flavor, slots, terms)


def coefficient_extract(t: TensorOp, u: WeylElement, v: WeylElement | None = None):
    """Slot-1 coefficient of (b_u, b_v) applied to the constant 1."""
    key = (u,) if v is None else (u, v)
    if len(key) != t.slots:
        raise ValueError(f"operator has {t.slots} Hecke slots, got {len(key)} basis elements")
    x = t.coefficient(*key)
    return x.apply(_ring(t.flavor).one(t.cartan.rank))


def _hecke_apply(c, flavor, w, f):
    for i in reversed(w.word):
        f = _act_gen(c, flavor, i, f)
        if not f:
            break
    return f


def apply_tensor(t: TensorOp, polys: Sequence) -> list[tuple]:
    """Apply to f (x) g (x) ...; returns the result as a list of pure tensors."""
    c, fl = t.cartan, t.flavor
    out = []
    for key, x in t.terms.items():
        parts = [x.apply(polys[0])]
        for w, g in zip(key, polys[1:]):
            parts.append(_hecke_apply(c, fl, w, g))
        if all(parts):
            out.append(tuple(parts))
    return out


def evaluate_tensor_sum(pure: Sequence[tuple], points: Sequence[Sequence]) -> object:
    """Evaluate sum_k f_k(x) g_k(y) ... at one point per slot."""
    total = 0
    for parts in pure:
        t = 1
        for p, x in zip(parts, points):
            t = t * p.evaluate(x)
        total += t
    return total


def apply_word_slotwise(c: CartanData, word: Sequence[int], kind: str, polys: Sequence) -> list[tuple]:
    """Apply prod_q X^{alpha_q} factor by factor (rightmost first) without
    forming the product; used to cross-check the normal form."""
    kind = normalize_kind(kind)
    current = [tuple(polys)]
    for i in reversed(tuple(word)):
        op = build_operator(c, i, kind)
        nxt = []
        for tpl in current:
            nxt.extend(apply_tensor(op, tpl))
        current = nxt
    return current


def random_elem(c: CartanData, flavor: str, rng: random.Random, nterms: int = 3, bound: int = 2):
    """Small random coefficient-ring element (test helper)."""
    n = c.rank
    lo = 0 if flavor == "H" else -bound
    terms = {}
    for _ in range(nterms):
        e = tuple(rng.randint(lo, bound) for _ in range(n))
        terms[e] = rng.randint(-3, 3)
    return _ring(flavor)(n, terms)


__all__ = [
    "SmashElem",
    "TensorOp",
    "build_operator",
    "operator_word_product",
    "check_square",
    "check_braid",
    "braid_report",
    "closed_form",
    "coefficient_extract",
    "weyl_smash",
    "apply_tensor",
    "apply_word_slotwise",
    "evaluate_tensor_sum",
    "normalize_kind",
    "hecke_mul",
]
