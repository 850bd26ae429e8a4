"""Verification suites behind ``schub verify``; each returns a JSON-ready report."""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from itertools import permutations, product

from . import hecke_ops as ho
from .hpoly import HPoly
from .kring import KElem, associated_graded
from .oracle import (
    Localization,
    WoodsHole,
    ZeroDenominator,
    RationalSample,
    calibrate_convention,
    oracle_restriction_H,
)
from .root_weyl import (
    CartanData,
    all_subwords,
    element_of_perm,
    element_of_word,
    enumerate_group,
    parse_perm,
)
from .schubert import (
    Recursion,
    bs_restriction,
    restriction_H,
    structure_constant_H,
    structure_constant_K,
    structure_constants_for,
)

SUITES = ("examples", "oracle", "woodshole", "braid", "all")


class Report:
    def __init__(self, suite: str, cartan: CartanData | None, seed: int | None):
        self.suite = suite
        self.cartan = cartan
        self.seed = seed
        self.checks: list[dict] = []
        self._t0 = time.perf_counter()

    def add(self, name: str, passed: bool | None, detail: str = "", gating: bool = True, **extra):
        rec = {"name": name, "passed": passed, "gating": gating}
        if detail:
            rec["detail"] = detail
        rec.update(extra)
        self.checks.append(rec)
        return passed

    @property
    def passed(self) -> bool:
        return all(ch["passed"] for ch in self.checks if ch["gating"])

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "type": str(self.cartan) if self.cartan is not None else None,
            "seed": self.seed,
            "passed": self.passed,
            "seconds": round(time.perf_counter() - self._t0, 3),
            "checks": self.checks,
        }


def _a(tag):
    return CartanData.from_type(tag)


def suite_examples(report: Report) -> None:
    a2, a3 = _a("A2"), _a("A3")

    def W(c, *word):
        return element_of_word(c, word)

    def P(c, s):
        return element_of_perm(c, parse_perm(s))

    n3 = 3
    al = [HPoly.var(i, n3) for i in (1, 2, 3)]
    k_expected = KElem.char((0, -1, 0)) - KElem.char((-1, -2, -1))
    u, v, w = P(a3, "1432"), P(a3, "3214"), P(a3, "3421")
    cases = [
        ("c(r1, r1r2, r1r2r1) = 1 in A2", structure_constant_H(W(a2, 1), W(a2, 1, 2), W(a2, 1, 2, 1)), 1),
        ("c(r1, r2r1, r1r2r1) = 0 in A2", structure_constant_H(W(a2, 1), W(a2, 2, 1), W(a2, 1, 2, 1)), 0),
        ("c([1432],[3214],[3421]) = a1+a2+a3", structure_constant_H(u, v, w), al[0] + al[1] + al[2]),
        ("c([1432],[3214],[3421]) second form", structure_constant_H(u, v, w, "rdd"), al[0] + al[1] + al[2]),
        ("a([1432],[3214],[3421]), Q = 1 2 3 1 2", structure_constant_K(u, v, w, "ideal", word=(1, 2, 3, 1, 2)), k_expected),
        ("a([1432],[3214],[3421]), canonical word", structure_constant_K(u, v, w, "ideal"), k_expected),
        ("gr(a) = c at degree 1", associated_graded(k_expected, 1), al[0] + al[1] + al[2]),
        ("recursion c([312],[132],[321]) = 1", Recursion(a2)(P(a2, "312"), P(a2, "132"), P(a2, "321")), 1),
        ("recursion c([213],[132],[231]) = 1", Recursion(a2)(P(a2, "213"), P(a2, "132"), P(a2, "231")), 1),
        ("S_r1|_(r1r2) = a1", restriction_H(W(a2, 1), W(a2, 1, 2)), HPoly.var(1, 2)),
        ("S_r1|_(r2r1) = a1+a2", restriction_H(W(a2, 1), W(a2, 2, 1)), HPoly.var(1, 2) + HPoly.var(2, 2)),
    ]
    for name, got, want in cases:
        report.add(name, got == want, f"got {got}")
    L = ho.operator_word_product(a2, (1, 2, 1), "L")
    report.add("L^(121) coefficient at (r1, r1r2) = 1", ho.coefficient_extract(L, W(a2, 1), W(a2, 1, 2)) == 1)
    report.add("L^(121) coefficient at (r1, r2r1) = 0", ho.coefficient_extract(L, W(a2, 1), W(a2, 2, 1)) == 0)


_ORACLE_STATE: dict = {}


def _oracle_state(matrix, name, theory):
    key = (matrix, theory)
    st = _ORACLE_STATE.get(key)
    if st is None:
        c = CartanData(matrix, name)
        G = enumerate_group(c)
        direct = {}
        for w in G:
            for (u, v), val in structure_constants_for(w, theory).items():
                direct[(u, v, w)] = val
        rec = Recursion(c) if theory == "H" else None
        st = _ORACLE_STATE[key] = (G, direct, Localization(c, theory), rec)
    return st


def oracle_row(job) -> tuple[int, int]:
    """(localization, recursion) mismatch counts against the subword sums for
    one u; runs in a worker process, so the job is plain data."""
    matrix, name, theory, ui = job
    G, direct, loc, rec = _oracle_state(matrix, name, theory)
    u = G[ui]
    bad_loc = bad_rec = 0
    for v in G:
        sol = loc.solve(u, v)
        for w in G:
            d = direct.get((u, v, w), 0)
            bad_loc += sol.get(w, 0) != d
            if rec is not None:
                bad_rec += rec(u, v, w) != d
    return bad_loc, bad_rec


def oracle_mismatches(c: CartanData, theory: str = "H", workers: int = 1, mp_context=None) -> tuple[int, int]:
    jobs = [(c.matrix, c.name, theory, i) for i in range(len(enumerate_group(c)))]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers, mp_context=mp_context) as ex:
            rows = list(ex.map(oracle_row, jobs))
    else:
        rows = [oracle_row(j) for j in jobs]
    return sum(r[0] for r in rows), sum(r[1] for r in rows)


def suite_oracle(report: Report, c: CartanData, workers: int = 1) -> None:
    G = enumerate_group(c)
    n = len(G) ** 3
    bad_loc, bad_rec = oracle_mismatches(c, "H", workers)
    report.add(f"H: direct = localization on {n} triples", bad_loc == 0, f"{bad_loc} mismatches")
    report.add(f"H: direct = recursion on {n} triples", bad_rec == 0, f"{bad_rec} mismatches")
    _, direct, _, _ = _oracle_state(c.matrix, c.name, "H")
    neg = sum(1 for val in direct.values() for coef in val.terms.values() if coef < 0)
    report.add("H: all coefficients nonnegative", neg == 0, f"{neg} negative coefficients")
    if len(G) <= 24:
        for theory in ("K-ideal", "K-structure"):
            bad, _ = oracle_mismatches(c, theory, workers)
            report.add(f"{theory}: direct = localization on {n} triples", bad == 0, f"{bad} mismatches")
    name = c.name
    if name.startswith("A") and name[1:].isdigit() and int(name[1:]) <= 3:
        m = int(name[1:]) + 1
        conv = calibrate_convention(3)
        report.add("double Schubert convention calibrated on S_3", bool(conv), f"conventions {conv}")
        if conv:
            perms = list(permutations(range(1, m + 1)))
            els = {p: element_of_perm(c, p) for p in perms}
            bad = sum(
                1
                for vp in perms
                for wp in perms
                if oracle_restriction_H(vp, wp, m, conv[0]) != restriction_H(els[vp], els[wp])
            )
            report.add(f"double Schubert restrictions on S_{m}", bad == 0, f"{bad} mismatches")


def woodshole_words(c: CartanData, max_len: int = 5) -> list[tuple[int, ...]]:
    """Every word of length <= max_len in the first two generators (reduced or not)."""
    gens = (1,) if c.rank == 1 else (1, 2)
    return [q for n in range(max_len + 1) for q in product(gens, repeat=n)]


def suite_woodshole(report: Report, c: CartanData, seed: int, samples: int = 20, max_len: int = 5) -> None:
    rng = random.Random(seed)
    words = woodshole_words(c, max_len)
    bad_words, bad_i_words = [], []
    for q in words:
        n = len(q)
        subs = list(all_subwords(n))
        pairs = [(V, L) for V in subs for L in subs if V.issubset(L)]
        tau0 = {(V.mask, L.mask): bs_restriction(c, q, V, L, "tau0") for V, L in pairs}
        tau = {(V.mask, L.mask): bs_restriction(c, q, V, L, "tau") for V, L in pairs}
        bad = bad_i = 0
        drawn = 0
        while drawn < samples:
            s = RationalSample.draw(c.rank, rng)
            try:
                wh = WoodsHole(c, q, s)
            except ZeroDenominator:
                continue
            drawn += 1
            g0 = wh.gram({k: s(v) for k, v in tau0.items() if v}, "structure")
            g1 = wh.gram({k: s(v) for k, v in tau.items() if v}, "ideal")
            bad += sum(1 for (vm, rm), val in g0.items() if val != (vm == rm))
            bad_i += sum(1 for (vm, rm), val in g1.items() if val != (vm == rm))
        label = " ".join(map(str, q)) or "(empty)"
        if bad:
            bad_words.append(f"{label}: {bad}")
        if bad_i:
            bad_i_words.append(f"{label}: {bad_i}")
    report.add(
        f"{c}: <tau0_V, O_W> = [V=W] on {len(words)} words of length <= {max_len}",
        not bad_words,
        "; ".join(bad_words) or f"{samples} samples per word",
    )
    report.add(
        f"{c}: <tau_V, I_W> = [V=W] on {len(words)} words of length <= {max_len}",
        not bad_i_words,
        "; ".join(bad_i_words) or f"{samples} samples per word",
    )


def suite_braid(report: Report, c: CartanData, budget: int | None = None, g2: bool = False, kinds=None) -> None:
    kinds = tuple(ho.normalize_kind(k) for k in kinds) if kinds else ("J", "D", "Xi", "Xi0", "L", "Lambda", "Lambda0")
    for kind in kinds:
        for i in range(1, c.rank + 1):
            res = ho.check_square(c, i, kind)
            want = {"L": "zero", "D": "zero", "Lambda": "idempotent", "Lambda0": "idempotent"}.get(kind, "involution")
            report.add(f"{kind}_{i} squared is {want}", res == want, f"got {res}")
    for i in range(1, c.rank + 1):
        for j in range(i + 1, c.rank + 1):
            m = c.coxeter_order(i, j)
            for kind in kinds:
                if m is None:
                    continue
                if m == 6:
                    if not (g2 and kind == "L"):
                        continue
                    rep = ho.braid_report(c, i, j, kind, budget)
                    report.add(f"{kind} braid ({i},{j}), m=6 (experimental)", rep["passed"], rep.get("note", ""), gating=False, terms=rep.get("terms"))
                    continue
                claimed = m <= 3 or kind in ("J", "D", "Xi", "Xi0", "L")
                rep = ho.braid_report(c, i, j, kind, budget)
                report.add(
                    f"{kind} braid ({i},{j}), m={m}",
                    rep["passed"],
                    rep.get("note", ""),
                    gating=claimed,
                    terms=rep.get("terms"),
                )


def run_suite(suite: str, cartan: CartanData | None = None, seed: int = 0, samples: int = 20, budget: int | None = None, g2: bool = False, kinds=None, workers: int = 1) -> dict:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; expected one of {', '.join(SUITES)}")
    report = Report(suite, cartan, seed)
    if suite in ("examples", "all"):
        suite_examples(report)
    if suite in ("oracle", "all"):
        suite_oracle(report, cartan or _a("A3"), workers)
    if suite in ("woodshole", "all"):
        for c in [cartan] if cartan is not None else [_a("A2"), _a("B2")]:
            suite_woodshole(report, c, seed, samples)
    if suite in ("braid", "all"):
        for c in [cartan] if cartan is not None else [_a("A2"), _a("B2")]:
            suite_braid(report, c, budget, g2, kinds)
    return report.to_json()
