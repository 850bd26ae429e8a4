"""
Root data and Weyl group combinatorics.

Everything is expressed in the root lattice, in coordinates with respect to
the simple roots: the simple root alpha_i is the i-th standard basis vector.
A generalized Cartan matrix ``A`` fixes the reflections through

    r_i(alpha_j) = alpha_j - a_ij alpha_i,

so ``a_ij`` plays the role of the pairing <alpha_i^vee, alpha_j>.

Weyl group elements are stored as the integer matrix of their action on the
root lattice.  This action is faithful for every crystallographic Coxeter
group, so two elements are equal exactly when their matrices agree.  Generator
indices are 1-based throughout the public interface; a word is a tuple
such as ``(1, 2, 1)``.

>>> A2 = CartanData.from_type("A2")
>>> w = element_of_word(A2, (1, 2, 1))
>>> w == element_of_word(A2, (2, 1, 2)), w.length, w.word
(True, 3, (1, 2, 1))
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Iterable, Iterator, Sequence

Matrix = tuple[tuple[int, ...], ...]


class CartanError(ValueError):
    """Invalid Cartan data, generator index, or word."""


def _coxeter_order(aij: int, aji: int) -> int | None:
    prod = aij * aji
    return {0: 2, 1: 3, 2: 4, 3: 6}.get(prod)


@dataclass(frozen=True)
class CartanData:
    """A generalized Cartan matrix together with its rank."""

    matrix: Matrix
    name: str = field(default="", compare=False)

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in row) for row in self.matrix)
        object.__setattr__(self, "matrix", m)
        n = len(m)
        if n == 0:
            raise CartanError("rank must be positive")
        for i, row in enumerate(m):
            if len(row) != n:
                raise CartanError("Cartan matrix must be square")
            for j, a in enumerate(row):
                if i == j and a != 2:
                    raise CartanError(f"diagonal entry a[{i + 1}][{j + 1}] = {a}, expected 2")
                if i != j:
                    if a > 0:
                        raise CartanError(f"off-diagonal entry a[{i + 1}][{j + 1}] = {a} is positive")
                    if (a == 0) != (m[j][i] == 0):
                        raise CartanError(f"zero pattern not symmetric at ({i + 1}, {j + 1})")

    @property
    def rank(self) -> int:
        return len(self.matrix)

    def __str__(self):
        return self.name or f"GCM{list(map(list, self.matrix))}"

    def __repr__(self):
        return f"CartanData({self})"

    @classmethod
    def from_type(cls, tag: str) -> CartanData:
        """Standard GCM for a tag such as ``"A3"``, ``"B2"``, ``"D4"``, ``"G2"``.

        Products of types are written with ``x``, e.g. ``"A1xA1"``.
        """
        parts = [p for p in re.split(r"[xX×]", tag.strip().upper()) if p]
        if len(parts) > 1:
            blocks = [cls.from_type(p) for p in parts]
            n = sum(b.rank for b in blocks)
            rows = [[0] * n for _ in range(n)]
            off = 0
            for b in blocks:
                for i in range(b.rank):
                    for j in range(b.rank):
                        rows[off + i][off + j] = b.matrix[i][j]
                off += b.rank
            return cls(tuple(map(tuple, rows)), name="x".join(parts))
        mt = re.fullmatch(r"([A-G])(\d+)", parts[0] if parts else "")
        if not mt:
            raise CartanError(f"unknown Cartan type {tag!r}")
        kind, n = mt.group(1), int(mt.group(2))
        a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

        def link(i, j, aij=-1, aji=-1):
            a[i][j], a[j][i] = aij, aji

        if kind == "A" and n >= 1:
            for i in range(n - 1):
                link(i, i + 1)
        elif kind == "B" and n >= 2:
            for i in range(n - 1):
                link(i, i + 1)
            # alpha_n short: <alpha_{n-1}^vee, alpha_n> = -1, <alpha_n^vee, alpha_{n-1}> = -2
            link(n - 2, n - 1, -1, -2)
        elif kind == "C" and n >= 2:
            for i in range(n - 1):
                link(i, i + 1)
            link(n - 2, n - 1, -2, -1)
        elif kind == "D" and n >= 3:
            for i in range(n - 2):
                link(i, i + 1)
            link(n - 3, n - 1)
        elif kind == "G" and n == 2:
            link(0, 1, -1, -3)
        else:
            raise CartanError(f"unsupported Cartan type {tag!r}")
        return cls(tuple(map(tuple, a)), name=f"{kind}{n}")

    @classmethod
    def from_file(cls, path: str | Path) -> CartanData:
        """Read the plain-text GCM format: ``n`` then ``n`` rows of integers."""
        return cls.from_text(Path(path).read_text(), name=Path(path).stem)

    @classmethod
    def from_text(cls, text: str, name: str = "") -> CartanData:
        lines = [ln.split() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise CartanError("empty GCM file")
        try:
            n = int(lines[0][0])
            rows = tuple(tuple(int(x) for x in ln) for ln in lines[1 : n + 1])
        except ValueError as exc:
            raise CartanError(f"malformed GCM file: {exc}") from None
        if len(lines[0]) != 1 or len(rows) != n or any(len(r) != n for r in rows):
            raise CartanError(f"GCM file must hold {n} rows of {n} integers after the size line")
        return cls(rows, name=name)

    def coxeter_order(self, i: int, j: int) -> int | None:
        """m_ij for 1-based generators, or ``None`` if infinite."""
        if i == j:
            return 1
        return _coxeter_order(self.matrix[i - 1][j - 1], self.matrix[j - 1][i - 1])

    def check_index(self, i: int) -> None:
        if not (isinstance(i, int) and 1 <= i <= self.rank):
            raise CartanError(f"generator index {i!r} out of range 1..{self.rank}")

    # cached group plumbing; all values are immutable

    @cached_property
    def identity(self) -> WeylElement:
        n = self.rank
        return WeylElement(self, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @cached_property
    def generators(self) -> tuple[WeylElement, ...]:
        n = self.rank
        gens = []
        for i in range(n):
            rows = [[int(r == c) for c in range(n)] for r in range(n)]
            # column j is r_i(alpha_j) = alpha_j - a_ij alpha_i
            for j in range(n):
                rows[i][j] -= self.matrix[i][j]
            gens.append(WeylElement(self, tuple(map(tuple, rows))))
        return tuple(gens)

    def gen(self, i: int) -> WeylElement:
        self.check_index(i)
        return self.generators[i - 1]

    def simple_root(self, i: int) -> tuple[int, ...]:
        self.check_index(i)
        return tuple(int(k == i - 1) for k in range(self.rank))


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n) if a[i][k]) for j in range(n))
        for i in range(n)
    )


def _is_negative(v: Sequence[int]) -> bool:
    return all(x <= 0 for x in v) and any(v)


class WeylElement:
    """An element of W, stored by its matrix on root-lattice coordinates.

    Column ``j`` of ``matrix`` holds the coordinates of ``w(alpha_{j+1})``.
    """

    __slots__ = ("cartan", "matrix", "_hash", "_length", "_word", "_inv")

    def __init__(self, cartan: CartanData, matrix: Matrix):
        self.cartan = cartan
        self.matrix = matrix
        self._hash = hash((cartan.matrix, matrix))
        self._length = None
        self._word = None
        self._inv = None

    def __eq__(self, other):
        # elements of different groups may share a matrix
        return (
            isinstance(other, WeylElement)
            and self.matrix == other.matrix
            and (self.cartan is other.cartan or self.cartan.matrix == other.cartan.matrix)
        )

    def __hash__(self):
        return self._hash

    def __mul__(self, other: WeylElement) -> WeylElement:
        return WeylElement(self.cartan, _matmul(self.matrix, other.matrix))

    def column(self, j: int) -> tuple[int, ...]:
        """``w(alpha_j)`` for 1-based ``j``."""
        return tuple(row[j - 1] for row in self.matrix)

    def act(self, weight: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(r[k] * weight[k] for k in range(len(weight))) for r in self.matrix)

    def has_right_descent(self, i: int) -> bool:
        return _is_negative(self.column(i))

    def has_left_descent(self, i: int) -> bool:
        return self.inverse().has_right_descent(i)

    def _strip(self):
        # right descents peeled off until identity: w r_{j1} r_{j2} ... = e
        n = self.cartan.rank
        cur = self.matrix
        gens = self.cartan.generators
        letters = []
        ident = self.cartan.identity.matrix
        while cur != ident:
            for i in range(1, n + 1):
                if _is_negative(tuple(row[i - 1] for row in cur)):
                    cur = _matmul(cur, gens[i - 1].matrix)
                    letters.append(i)
                    break
            else:  # pragma: no cover - impossible for a genuine Weyl element
                raise CartanError("matrix is not a Weyl group element")
        inv = ident
        for i in letters:
            inv = _matmul(inv, gens[i - 1].matrix)
        self._length = len(letters)
        self._inv = WeylElement(self.cartan, inv)
        self._inv._inv = self

    def inverse(self) -> WeylElement:
        if self._inv is None:
            self._strip()
        return self._inv

    @property
    def length(self) -> int:
        if self._length is None:
            self._strip()
        return self._length

    @property
    def word(self) -> tuple[int, ...]:
        """The lexicographically least reduced word."""
        if self._word is None:
            n = self.cartan.rank
            gens = self.cartan.generators
            v = self.inverse().matrix
            ident = self.cartan.identity.matrix
            out = []
            while v != ident:
                for i in range(1, n + 1):
                    if _is_negative(tuple(row[i - 1] for row in v)):
                        v = _matmul(v, gens[i - 1].matrix)
                        out.append(i)
                        break
            self._word = tuple(out)
        return self._word

    def left_mul_gen(self, i: int) -> WeylElement:
        return _left_gen(self, i)

    def right_mul_gen(self, i: int) -> WeylElement:
        return _right_gen(self, i)

    def __repr__(self):
        w = " ".join(map(str, self.word)) or "e"
        return f"W[{w}]"

    def __lt__(self, other):
        # length-lex, used only for deterministic ordering
        return (self.length, self.word) < (other.length, other.word)


@lru_cache(maxsize=None)
def _left_gen(w: WeylElement, i: int) -> WeylElement:
    return w.cartan.gen(i) * w


@lru_cache(maxsize=None)
def _right_gen(w: WeylElement, i: int) -> WeylElement:
    return w * w.cartan.gen(i)


def length_and_canonical(w: WeylElement) -> tuple[int, tuple[int, ...]]:
    return w.length, w.word


def reflect_weight(c: CartanData, i: int, weight: Sequence[int]) -> tuple[int, ...]:
    """r_i(lambda) = lambda - <alpha_i^vee, lambda> alpha_i."""
    c.check_index(i)
    if len(weight) != c.rank:
        raise CartanError(f"weight has {len(weight)} coordinates, expected {c.rank}")
    pairing = sum(c.matrix[i - 1][j] * weight[j] for j in range(c.rank))
    out = list(weight)
    out[i - 1] -= pairing
    return tuple(out)


def parse_word(c: CartanData, text: str | Iterable[int]) -> tuple[int, ...]:
    """Parse ``"1 2 1"`` (or an iterable of ints) into a validated word."""
    if isinstance(text, str):
        toks = text.replace(",", " ").split()
        letters = []
        for pos, tok in enumerate(toks, 1):
            try:
                letters.append(int(tok))
            except ValueError:
                raise CartanError(f"word token {pos} ({tok!r}): expected a generator index") from None
    else:
        letters = list(text)
    for i in letters:
        c.check_index(i)
    return tuple(letters)


def element_of_word(c: CartanData, word: Sequence[int]) -> WeylElement:
    w = c.identity
    for i in word:
        c.check_index(i)
        w = w.right_mul_gen(i)
    return w


def demazure_product(c: CartanData, word: Sequence[int]) -> WeylElement:
    """Left fold of w * i = w r_i if that is longer, else w."""
    w = c.identity
    for i in word:
        c.check_index(i)
        if not w.has_right_descent(i):
            w = w.right_mul_gen(i)
    return w


def is_reduced(c: CartanData, word: Sequence[int]) -> bool:
    return element_of_word(c, word).length == len(word)


def reduced_words(w: WeylElement) -> list[tuple[int, ...]]:
    """All reduced words of ``w`` in lexicographic order."""
    out = []

    def rec(v: WeylElement, prefix):
        if v.length == 0:
            out.append(tuple(prefix))
            return
        for i in range(1, v.cartan.rank + 1):
            if v.has_left_descent(i):
                prefix.append(i)
                rec(v.left_mul_gen(i), prefix)
                prefix.pop()

    rec(w, [])
    return out


def enumerate_group(c: CartanData, max_size: int = 100_000) -> list[WeylElement]:
    """All elements of a finite Weyl group in length-lex order."""
    seen = {c.identity}
    queue = deque([c.identity])
    while queue:
        w = queue.popleft()
        for i in range(1, c.rank + 1):
            x = w.right_mul_gen(i)
            if x not in seen:
                if len(seen) >= max_size:
                    raise CartanError(f"Weyl group of {c} has more than {max_size} elements")
                seen.add(x)
                queue.append(x)
    return sorted(seen)


@lru_cache(maxsize=None)
def bruhat_interval(w: WeylElement) -> frozenset[WeylElement]:
    """{u : u <= w}, as all products of subwords of a reduced word of w."""
    reach = {w.cartan.identity}
    for i in w.word:
        reach |= {x.right_mul_gen(i) for x in reach}
    return frozenset(reach)


def bruhat_leq(u: WeylElement, w: WeylElement) -> bool:
    if u.length > w.length:
        return False
    if u.length == w.length:
        return u == w
    return u in bruhat_interval(w)


@dataclass(frozen=True, order=True)
class Subword:
    """A set of positions in an ambient word, stored as a bitmask.

    Bit ``k`` of ``mask`` marks position ``k`` (0-based).  ``str`` renders the
    positions left to right, e.g. ``"101"`` for the outer letters of a word
    of length three.
    """

    mask: int
    size: int

    @classmethod
    def from_positions(cls, positions: Iterable[int], size: int) -> Subword:
        m = 0
        for p in positions:
            if not 0 <= p < size:
                raise CartanError(f"position {p} outside word of length {size}")
            m |= 1 << p
        return cls(m, size)

    @classmethod
    def from_string(cls, text: str) -> Subword:
        text = text.strip()
        bad = set(text) - set("01-")
        if bad:
            raise CartanError(f"subword string {text!r} may only use 0, 1 or -")
        return cls.from_positions([k for k, ch in enumerate(text) if ch == "1"], len(text))

    @classmethod
    def full(cls, size: int) -> Subword:
        return cls((1 << size) - 1, size)

    def __contains__(self, pos: int) -> bool:
        return bool(self.mask >> pos & 1)

    @property
    def positions(self) -> tuple[int, ...]:
        return tuple(k for k in range(self.size) if self.mask >> k & 1)

    def __len__(self):
        return bin(self.mask).count("1")

    def issubset(self, other: Subword) -> bool:
        return self.mask & ~other.mask == 0

    def letters(self, word: Sequence[int]) -> tuple[int, ...]:
        return tuple(word[k] for k in self.positions)

    def __str__(self):
        return "".join("1" if k in self else "0" for k in range(self.size))

    def __repr__(self):
        return f"Subword({self})"


def all_subwords(size: int) -> Iterator[Subword]:
    for m in range(1 << size):
        yield Subword(m, size)


def subwords_with_product(
    c: CartanData,
    word: Sequence[int],
    target: WeylElement,
    mode: str = "reduced",
) -> list[Subword]:
    """Subwords of ``word`` whose product is ``target``.

    ``mode="reduced"``: ordinary product, only reduced subwords count.
    ``mode="demazure"``: Demazure product, any subword.
    Prefixes that already fail ``prefix <= target`` are pruned; both products
    only grow in Bruhat order along a subword, so nothing is lost.
    """
    if mode not in ("reduced", "demazure"):
        raise ValueError(f"unknown mode {mode!r}")
    word = tuple(word)
    for i in word:
        c.check_index(i)
    below = bruhat_interval(target)
    size = len(word)
    found = []

    def rec(k, prefix: WeylElement, mask: int):
        if k == size:
            if prefix == target:
                found.append(mask)
            return
        rec(k + 1, prefix, mask)
        i = word[k]
        longer = not prefix.has_right_descent(i)
        if mode == "reduced" and not longer:
            return
        nxt = prefix.right_mul_gen(i) if longer else prefix
        if nxt in below:
            rec(k + 1, nxt, mask | 1 << k)

    rec(0, c.identity, 0)
    return [Subword(m, size) for m in sorted(found)]


def subwords_by_product(
    c: CartanData, word: Sequence[int], mode: str = "reduced"
) -> dict[WeylElement, list[Subword]]:
    """Group every subword of ``word`` by its product (batch form of the above)."""
    word = tuple(word)
    size = len(word)
    groups: dict[WeylElement, list[int]] = {}

    def rec(k, prefix: WeylElement, mask: int):
        if k == size:
            groups.setdefault(prefix, []).append(mask)
            return
        rec(k + 1, prefix, mask)
        i = word[k]
        if prefix.has_right_descent(i):
            if mode == "demazure":
                rec(k + 1, prefix, mask | 1 << k)
        else:
            rec(k + 1, prefix.right_mul_gen(i), mask | 1 << k)

    rec(0, c.identity, 0)
    return {w: [Subword(m, size) for m in sorted(ms)] for w, ms in groups.items()}


def perm_to_word(perm: Sequence[int]) -> tuple[int, ...]:
    """Lex-least reduced word of a permutation in one-line notation.

    Generators are adjacent transpositions, multiplied as functions, so that
    ``[3421]`` is ``r_1 r_2 r_3 r_1 r_2``.
    """
    p = list(perm)
    n = len(p)
    if sorted(p) != list(range(1, n + 1)):
        raise CartanError(f"{''.join(map(str, perm))!r} is not a permutation of 1..{n}")
    # left descents of w are right descents of w^{-1}
    inv = [0] * n
    for pos, val in enumerate(p):
        inv[val - 1] = pos + 1
    out = []
    while True:
        for i in range(n - 1):
            if inv[i] > inv[i + 1]:
                inv[i], inv[i + 1] = inv[i + 1], inv[i]
                out.append(i + 1)
                break
        else:
            return tuple(out)


def word_to_perm(word: Sequence[int], n: int) -> tuple[int, ...]:
    p = list(range(1, n + 1))
    for i in word:
        if not 1 <= i < n:
            raise CartanError(f"generator {i} out of range for S_{n}")
        p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def parse_perm(text: str) -> tuple[int, ...]:
    """One-line notation, ``"3421"`` or ``"3 4 2 1"`` (commas and brackets allowed)."""
    body = text.strip().strip("[]")
    toks = body.replace(",", " ").split() if (" " in body or "," in body) else list(body)
    vals = []
    for pos, tok in enumerate(toks, 1):
        if not tok.isdigit():
            raise CartanError(f"permutation token {pos} ({tok!r}): expected a positive integer")
        vals.append(int(tok))
    if sorted(vals) != list(range(1, len(vals) + 1)):
        raise CartanError(f"{text!r} is not a permutation of 1..{len(vals)}")
    return tuple(vals)


def element_of_perm(c: CartanData, perm: Sequence[int]) -> WeylElement:
    if len(perm) != c.rank + 1:
        raise CartanError(f"permutation of length {len(perm)} does not match rank {c.rank}")
    return element_of_word(c, perm_to_word(perm))


def element_to_perm(w: WeylElement) -> tuple[int, ...]:
    return word_to_perm(w.word, w.cartan.rank + 1)
