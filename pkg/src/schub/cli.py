"""Command-line front end ``schub``.

Exit status: 0 on success, 1 on a domain or input error, 2 when a
verification suite reports a failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from .root_weyl import (
    CartanData,
    CartanError,
    Subword,
    WeylElement,
    demazure_product,
    element_of_perm,
    element_of_word,
    enumerate_group,
    is_reduced,
    parse_perm,
    parse_word,
)
from .schubert import (
    THEORIES,
    bs_restriction,
    bs_structure_constant,
    recursion_c,
    restriction,
    structure_constant,
    structure_constants_for,
)
from .verify import SUITES, run_suite


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # exit status 2 is reserved for verification failures
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_cartan(p: argparse.ArgumentParser, required: bool = True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--type", help="built-in Cartan type, e.g. A3, B2, G2, A1xA1")
    g.add_argument("--gcm", help="path to a GCM file (size line, then rows)")


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=None, help="worker processes (default: $SCHUB_THREADS or 1)")


def _add_elem(p: argparse.ArgumentParser, name: str, what: str):
    p.add_argument(f"--{name}", metavar="WORD", help=f"{what} as a word, e.g. \"1 2 1\" (empty string for e)")
    p.add_argument(f"--{name}-perm", metavar="PERM", help=f"{what} in one-line notation (type A only)")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="schub", description="Equivariant Schubert structure constants via subword formulas.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    for name, help_ in (
        ("c", "cohomology structure constant c_{uv}^w"),
        ("a", "K-theory structure constant a_{uv}^w (ideal-sheaf basis)"),
        ("a0", "K-theory structure constant a0_{uv}^w (structure-sheaf basis)"),
        ("recurse", "c_{uv}^w through the left-descent recursion"),
    ):
        sp = sub.add_parser(name, help=help_)
        _add_cartan(sp)
        _add_common(sp)
        _add_elem(sp, "u", "u")
        _add_elem(sp, "v", "v")
        _add_elem(sp, "w", "w (the word itself is used as Q)")
        if name == "c":
            sp.add_argument("--variant", choices=("ddr", "rdd"), default="ddr")
        if name == "recurse":
            sp.add_argument("--alpha", type=int, default=None, help="left descent of w to recurse on")

    sp = sub.add_parser("restrict", help="point restriction of a Schubert class")
    _add_cartan(sp)
    _add_common(sp)
    _add_elem(sp, "v", "class index v")
    _add_elem(sp, "w", "fixed point w (the word itself is used as Q)")
    sp.add_argument("--theory", choices=THEORIES, default="H")

    sp = sub.add_parser("bs", help="Bott-Samelson structure constants and restrictions")
    _add_cartan(sp)
    _add_common(sp)
    sp.add_argument("--word", required=True, help="ambient word Q")
    sp.add_argument("--family", choices=("b", "d", "d0", "T", "tau", "tau0"), default="b")
    sp.add_argument("--R", help="subword mask, e.g. 101")
    sp.add_argument("--S", help="subword mask")
    sp.add_argument("--J", help="subword mask (default: all of Q)")
    sp.add_argument("--L", help="fixed point mask (restriction families)")

    sp = sub.add_parser("table", help="all nonzero structure constants of a finite type")
    _add_cartan(sp)
    _add_common(sp)
    sp.add_argument("--theory", choices=THEORIES, default="H")
    sp.add_argument("--variant", choices=("ddr", "rdd"), default="ddr")

    sp = sub.add_parser("verify", help="run a verification suite")
    _add_cartan(sp, required=False)
    _add_common(sp)
    sp.add_argument("--suite", choices=SUITES, default="examples")
    sp.add_argument("--samples", type=int, default=20, help="rational samples per Woods Hole case")
    sp.add_argument("--budget", type=int, default=None, help="term budget for braid products")
    sp.add_argument("--g2", action="store_true", help="also attempt the m=6 braid relation for L")
    sp.add_argument("--kind", action="append", help="restrict the braid suite to these operator kinds (repeatable)")
    return p


def load_cartan(args) -> CartanData | None:
    if getattr(args, "gcm", None):
        return CartanData.from_file(args.gcm)
    if getattr(args, "type", None):
        return CartanData.from_type(args.type)
    return None


def _is_type_a(c: CartanData) -> bool:
    return c.name.startswith("A") and c.name[1:].isdigit()


def _word_arg(c: CartanData, args, name: str, required: bool = True) -> tuple[int, ...] | None:
    word = getattr(args, name)
    perm = getattr(args, f"{name}_perm")
    if word is not None and perm is not None:
        raise UsageError(f"give only one of --{name} and --{name}-perm")
    if perm is not None:
        if not _is_type_a(c):
            raise UsageError(f"--{name}-perm needs a built-in type A_n")
        return element_of_perm(c, parse_perm(perm)).word
    if word is None:
        if required:
            raise UsageError(f"missing --{name} (or --{name}-perm)")
        return None
    return parse_word(c, word)


def _reduced_elem(c: CartanData, word: tuple[int, ...], name: str) -> WeylElement:
    if not is_reduced(c, word):
        raise CartanError(f"--{name} {' '.join(map(str, word))} is not a reduced word")
    return element_of_word(c, word)


def threads_from(args) -> int:
    if getattr(args, "threads", None):
        return max(1, args.threads)
    env = os.environ.get("SCHUB_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"SCHUB_THREADS={env!r} is not an integer") from None
    return 1


def _elem_json(w: WeylElement) -> list[int]:
    return list(w.word)


def _elem_text(w: WeylElement) -> str:
    return " ".join(map(str, w.word)) or "e"


def _emit(args, out, payload: dict, value) -> None:
    if args.format == "json":
        payload = dict(payload)
        payload["value"] = value.to_json()
        out.write(json.dumps(payload) + "\n")
    else:
        out.write(f"{value}\n")


def cmd_constant(args, c: CartanData, out) -> int:
    theory = {"c": "H", "recurse": "H", "a": "K-ideal", "a0": "K-structure"}[args.command]
    uw = _word_arg(c, args, "u")
    vw = _word_arg(c, args, "v")
    ww = _word_arg(c, args, "w")
    u, v = _reduced_elem(c, uw, "u"), _reduced_elem(c, vw, "v")
    if theory == "H":
        w = _reduced_elem(c, ww, "w")
    else:
        w = demazure_product(c, ww)
    if args.command == "recurse":
        value = recursion_c(u, v, w, args.alpha)
    else:
        value = structure_constant(u, v, w, theory, getattr(args, "variant", "ddr"), word=ww)
    payload = {"theory": theory, "type": str(c), "u": _elem_json(u), "v": _elem_json(v), "w": _elem_json(w), "word": list(ww)}
    _emit(args, out, payload, value)
    return 0


def cmd_restrict(args, c: CartanData, out) -> int:
    vw = _word_arg(c, args, "v")
    ww = _word_arg(c, args, "w")
    v = _reduced_elem(c, vw, "v")
    w = _reduced_elem(c, ww, "w") if args.theory == "H" else demazure_product(c, ww)
    value = restriction(v, w, args.theory, word=ww)
    payload = {"theory": args.theory, "type": str(c), "v": _elem_json(v), "w": _elem_json(w), "word": list(ww)}
    _emit(args, out, payload, value)
    return 0


def _mask(text: str | None, n: int, name: str, default: Subword | None = None) -> Subword:
    if text is None:
        if default is None:
            raise UsageError(f"--{name} is required for this family")
        return default
    s = Subword.from_string(text)
    if s.size != n:
        raise UsageError(f"--{name} {text!r} has length {s.size}, the word has length {n}")
    return s


def cmd_bs(args, c: CartanData, out) -> int:
    q = parse_word(c, args.word)
    n = len(q)
    full = Subword.full(n)
    if args.family in ("b", "d", "d0"):
        theory = {"b": "H", "d": "K-ideal", "d0": "K-structure"}[args.family]
        r, s = _mask(args.R, n, "R"), _mask(args.S, n, "S")
        j = _mask(args.J, n, "J", full)
        value = bs_structure_constant(c, q, r, s, j, theory)
        payload = {"family": args.family, "type": str(c), "word": list(q), "R": str(r), "S": str(s), "J": str(j)}
    else:
        j = _mask(args.J, n, "J")
        lpt = _mask(args.L, n, "L")
        value = bs_restriction(c, q, j, lpt, args.family)
        payload = {"family": args.family, "type": str(c), "word": list(q), "J": str(j), "L": str(lpt)}
    _emit(args, out, payload, value)
    return 0


def _table_rows(job):
    # runs in a worker process; everything crossing the boundary is plain data
    matrix, name, word, theory, variant = job
    c = CartanData(matrix, name)
    w = element_of_word(c, word)
    rows = []
    for (u, v), val in sorted(structure_constants_for(w, theory, variant).items()):
        rows.append((list(u.word), list(v.word), str(val), val.to_json()))
    return list(word), rows


def cmd_table(args, c: CartanData, out) -> int:
    elems = enumerate_group(c)
    jobs = [(c.matrix, c.name, w.word, args.theory, args.variant) for w in elems]
    workers = threads_from(args)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            _write_table(args, c, out, ex.map(_table_rows, jobs))
    else:
        _write_table(args, c, out, map(_table_rows, jobs))
    return 0


def _write_table(args, c, out, results):
    def txt(word):
        return " ".join(map(str, word)) or "e"

    for wword, rows in results:
        for uword, vword, text, js in rows:
            if args.format == "json":
                rec = {"theory": args.theory, "type": str(c), "u": uword, "v": vword, "w": wword, "value": js}
                out.write(json.dumps(rec) + "\n")
            else:
                out.write(f"u={txt(uword)} | v={txt(vword)} | w={txt(wword)} | {text}\n")
        out.flush()


def cmd_verify(args, c: CartanData | None, out) -> int:
    report = run_suite(args.suite, c, args.seed, args.samples, args.budget, args.g2, args.kind, threads_from(args))
    if args.format == "json":
        out.write(json.dumps(report, indent=2) + "\n")
    else:
        for ch in report["checks"]:
            if ch["passed"] is None:
                tag = "SKIP"
            elif ch["passed"]:
                tag = "PASS"
            else:
                tag = "FAIL" if ch["gating"] else "INFO"
            extra = f"  [{ch['detail']}]" if ch.get("detail") else ""
            if ch.get("terms"):
                extra += f"  terms={ch['terms']}"
            out.write(f"{tag} {ch['name']}{extra}\n")
        out.write(("all checks passed" if report["passed"] else "verification FAILED") + f" ({report['seconds']} s)\n")
    return 0 if report["passed"] else 2


COMMANDS = {
    "c": cmd_constant,
    "a": cmd_constant,
    "a0": cmd_constant,
    "recurse": cmd_constant,
    "restrict": cmd_restrict,
    "bs": cmd_bs,
    "table": cmd_table,
    "verify": cmd_verify,
}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        c = load_cartan(args)
        return COMMANDS[args.command](args, c, out)
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head)
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return 0
    except (CartanError, UsageError, ValueError, OSError) as exc:
        sys.stderr.write(f"schub: error: {exc}\n")
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    entry()
