"""Command line front end: ``infactor <group> <command> ...``.

Exit codes: 0 success, 1 verification failure, 2 bad input or configuration,
3 oracle error, 4 search exhausted.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import engine as eng
from . import resolution as res
from . import stars
from .errors import ConfigError, InputError, OracleError, OracleMissing, SearchExhausted
from .graphs import DigitSet, builtin_family, edge_pair, parse_digit_set, rado_graph
from .naturals import NatCodec, digit

DEFAULT_SEED = 20240101

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_ORACLE, EXIT_EXHAUSTED = range(5)


def _ints(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    try:
        return [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise InputError(f"expected comma-separated integers, got {text!r}") from exc


def _range(text: str) -> range:
    if ".." in text:
        a, b = text.split("..")
        return range(int(a), int(b) + 1)
    return range(0, int(text) + 1)


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {n}")
    return n


class _Out:
    """Writes to a file when a path is given, otherwise to stdout."""

    def __init__(self, path: Optional[str]):
        self.path = path

    def write(self, text: str) -> None:
        if self.path:
            Path(self.path).write_text(text)
        else:
            sys.stdout.write(text)


def _print_nat(n) -> None:
    lines: list[str] = []
    token = NatCodec().encode(n, lines.append)
    for line in lines:
        print(line)
    print(token)


# ----------------------------------------------------------------------
# rado


def _digit_set(args) -> DigitSet:
    return parse_digit_set(str(args.q), args.set)


def cmd_rado(args) -> int:
    ds = _digit_set(args)
    g = rado_graph(ds)
    if args.action == "adj":
        a, b = _ints(args.edge)
        print("true" if g.adjacency(a, b) else "false")
    elif args.action == "witness":
        _print_nat(g.star_witness(_ints(args.U), _ints(args.W), args.min))
    elif args.action == "undominated":
        _print_nat(g.undominated(_ints(args.D), args.min))
    else:
        return _star_report(g, args)
    return EXIT_OK


def _star_report(g, args) -> int:
    print(f"# seed {args.seed}")
    rep = eng.check_star_property(g, args.trials, args.bound, args.cap, seed=args.seed)
    verdict = "PASS" if rep.ok else "FAIL"
    print(f"{verdict} {rep.successes}/{rep.trials} witnesses found")
    for U, W in rep.failures:
        print(f"missing U={U} W={W}")
    return EXIT_OK if rep.ok else EXIT_FAIL


# ----------------------------------------------------------------------
# factorize


def _report_engine(e: eng.FactorizationEngine, label: str = "") -> bool:
    checks = eng.check_invariants(e)
    structure = eng.check_structure(e.manifest())
    checks["structure"] = structure
    prefix = f"{label}: " if label else ""
    print(f"{prefix}stages {e.stage}, edges covered {len(e.used_edges)}, factors {len(e.embeddings)}")
    ok = True
    for name, problems in checks.items():
        print(f"{prefix}{name} {'OK' if not problems else 'FAIL'}")
        for p in problems[:5]:
            print(f"{prefix}  {p}")
        ok = ok and not problems
    return ok


def cmd_factorize(args) -> int:
    if args.action == "digits":
        q = args.q
        if q < 2:
            raise InputError("q must be >= 2")
        out = []
        for k in range(args.edges):
            lo, hi = edge_pair(k)
            out.append(f"E {k} {digit(hi, lo, q)}\n")
        _Out(args.out).write("".join(out))
        return EXIT_OK
    if args.action == "replay":
        text = Path(args.input).read_text()
        e = eng.replay(text)
        same = e.manifest() == text
        print(f"replay {'identical' if same else 'DIFFERS'}")
        ok = _report_engine(e)
        return EXIT_OK if ok and same else EXIT_FAIL
    family = args.family or ["rado:2:1"]
    if args.action == "engine":
        e = eng.run_engine(args.host, family, args.stages)
        _Out(args.out).write(e.manifest())
        return EXIT_OK if _report_engine(e) else EXIT_FAIL
    if args.action == "split":
        even, odd = eng.factorize_complete_via_split(family, args.stages)
        ok = True
        for tag, e in (("even", even), ("odd", odd)):
            if args.out:
                Path(f"{args.out}.{tag}").write_text(e.manifest())
            ok = _report_engine(e, tag) and ok
        common = set(even.used_edges) & set(odd.used_edges)
        print(f"disjoint {'OK' if not common else 'FAIL'} ({len(common)} shared edges)")
        return EXIT_OK if ok and not common else EXIT_FAIL
    # finite-tail
    host = args.host if args.host != "complete" else "rado:2:1"
    e = eng.run_finite_mode(host, family, args.stages)
    _Out(args.out).write(e.manifest())
    ok = _report_engine(e)
    return _star_report(e.residual(), args) if ok else EXIT_FAIL


# ----------------------------------------------------------------------
# stars


def cmd_stars(args) -> int:
    if args.action == "verify":
        rep = stars.verify_window(args.k, args.window)
        print(rep.summary())
        for v in rep.violations[:20]:
            print(f"  {v}")
        bad = []
        if args.k >= 5:
            bad = [h for h in range(1, args.k - 2) if stars.recursion_partition(h, 1 << 10)]
            print(f"recursion partition {'OK' if not bad else 'FAIL ' + str(bad)}")
        return EXIT_OK if rep.ok and not bad else EXIT_FAIL
    if args.action == "assign":
        a, b = args.edge.split(",")
        d = stars.assign_edge(args.k, (stars.parse_lv(a), stars.parse_lv(b)))
        print(f"d={d}")
        return EXIT_OK
    if args.action == "emit":
        stars.kstar_spec(args.k)
        if args.dot is not None:
            _Out(args.out).write(stars.translate_dot(args.k, args.dot, args.window))
        else:
            _Out(args.out).write("".join(line + "\n" for line in stars.emit_window(args.k, args.window)))
        return EXIT_OK
    # diffset
    if args.edges:
        pairs = [tuple(_ints(tok)) for tok in args.edges]
        if any(len(p) != 2 for p in pairs):
            raise InputError("edges are written a,b")
        diffs = stars.diff_multiset(pairs)
        print(" ".join(f"{m}x{n}" if n > 1 else str(m) for m, n in sorted(diffs.items())))
        return EXIT_OK
    if args.star == "gamma1":
        chosen = [stars.gamma1_star()]
    else:
        try:
            h = int(args.star.split(":")[1])
        except (IndexError, ValueError) as exc:
            raise InputError("--star is gamma1 or prime:h") from exc
        if h < 1:
            raise InputError("h must be >= 1")
        chosen = list(stars.level0_stars(h))
    rep = stars.orbit_cover_check(chosen, args.range)
    print(rep.summary())
    return EXIT_OK if rep.ok else EXIT_FAIL


# ----------------------------------------------------------------------
# resolve


def _load(path: str) -> res.Decomposition:
    return res.Decomposition.loads(Path(path).read_text())


def cmd_resolve(args) -> int:
    if args.action == "fixture":
        if args.kind == "path-extension":
            if not args.base:
                raise InputError("path-extension needs --base")
            d = res.fixture_path_extension(_load(args.base), args.x)
        elif args.kind == "single-edge":
            d = res.single_edge_decomposition(args.n)
        elif args.kind == "triangles":
            d = res.triangle_decomposition(args.groups)
        else:
            d = res.near_complete_decomposition(args.n)
        _Out(args.out).write(d.dumps())
        return EXIT_OK
    d = _load(args.input)
    if args.action == "run":
        st = res.resolve(d, args.stages, args.cap)
        _Out(args.out).write(st.manifest())
        problems = res.check_resolution(d, st)
        kind = "matchings" if all(len(d.blocks[i].edges) == 1 for i in st.assigned) else "parallel"
        print(f"classes: {kind} {'OK' if not problems else 'FAIL'}")
        for p in problems[:5]:
            print(f"  {p}")
        return EXIT_OK if not problems else EXIT_FAIL
    if args.action == "check-n2":
        rep = res.check_N2(d, _range(args.window))
        if rep.verdict == "FAIL":
            x, y, z, blocks = rep.violations[0]
            print(f"FAIL triple (x,y,z)=({x},{y},{z}) blocks {list(blocks)}")
        else:
            print(rep.summary())
        return EXIT_FAIL if rep.verdict == "FAIL" else EXIT_OK
    if args.action == "check-r":
        rep = res.check_R_conditions(d, args.bound)
        print(rep.summary())
        return EXIT_OK if rep.ok else EXIT_FAIL
    rep = res.check_N1(d, args.block, args.complement)
    print(rep.summary())
    return EXIT_FAIL if rep.verdict == "FAIL" else EXIT_OK


# ----------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="infactor", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    groups = p.add_subparsers(dest="group", required=True)

    def seeded(sp, trials=50, bound=15, cap=1 << 20):
        sp.add_argument("--trials", type=_positive, default=trials)
        sp.add_argument("--bound", type=_positive, default=bound, help="sampled vertices lie below this")
        sp.add_argument("--cap", type=_positive, default=cap, help="witness search cap")
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)

    rado = groups.add_parser("rado", help="digit-rule Rado graphs")
    rado.add_argument("action", choices=["adj", "witness", "undominated", "star-check"])
    rado.add_argument("--q", type=int, default=2)
    rado.add_argument("--set", default="1", help="allowed digits, comma separated")
    rado.add_argument("--edge", default="0,1")
    rado.add_argument("--U", default="")
    rado.add_argument("--W", default="")
    rado.add_argument("--D", default="")
    rado.add_argument("--min", type=int, default=-1, help="witness must exceed this")
    seeded(rado, trials=100, bound=12, cap=1 << 16)
    rado.set_defaults(func=cmd_rado)

    fac = groups.add_parser("factorize", help="factorization prefixes")
    fac.add_argument("action", choices=["digits", "engine", "split", "finite-tail", "replay"])
    fac.add_argument("--q", type=int, default=2)
    fac.add_argument("--edges", type=_positive, default=1000)
    fac.add_argument("--host", default="complete")
    fac.add_argument("--family", action="append", help="pattern descriptor; repeat for a cycle")
    fac.add_argument("--stages", type=_positive, default=50)
    fac.add_argument("--out", help="manifest path (stdout if omitted)")
    fac.add_argument("--in", dest="input")
    seeded(fac)
    fac.set_defaults(func=cmd_factorize)

    st = groups.add_parser("stars", help="k-star factorizations of K on Z x {0,1}")
    st.add_argument("action", choices=["verify", "emit", "assign", "diffset"])
    st.add_argument("--k", type=int, default=4)
    st.add_argument("--window", type=_positive, default=40)
    st.add_argument("--edge", default="0:0,0:1", help="coord:level,coord:level")
    st.add_argument("--dot", type=int, help="emit translate d as DOT instead of edge lines")
    st.add_argument("--edges", nargs="*", help="edges a,b on Z for diffset")
    st.add_argument("--star", default="gamma1", help="gamma1 or prime:h")
    st.add_argument("--range", type=_positive, default=10_000)
    st.add_argument("--out")
    st.set_defaults(func=cmd_stars)

    rs = groups.add_parser("resolve", help="decompositions and resolution classes")
    rs.add_argument("action", choices=["run", "check-n2", "check-r", "check-n1", "fixture"])
    rs.add_argument("kind", nargs="?", default="path-extension",
                    choices=["path-extension", "single-edge", "triangles", "near-complete"])
    rs.add_argument("--in", dest="input")
    rs.add_argument("--base")
    rs.add_argument("--x", type=int, default=0)
    rs.add_argument("--n", type=int, default=20)
    rs.add_argument("--groups", type=_positive, default=6)
    rs.add_argument("--stages", type=_positive, default=100)
    rs.add_argument("--cap", type=_positive, default=10_000)
    rs.add_argument("--window", default="0..8")
    rs.add_argument("--bound", type=int, default=2)
    rs.add_argument("--block", type=int)
    rs.add_argument("--complement", type=int)
    rs.add_argument("--out")
    rs.set_defaults(func=cmd_resolve)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    needs_input = {"factorize": ("replay",), "resolve": ("run", "check-n2", "check-r", "check-n1")}
    if args.action in needs_input.get(args.group, ()) and not args.input:
        print(f"error: {args.group} {args.action} needs --in", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except OracleMissing as exc:
        print(f"oracle error: {exc}", file=sys.stderr)
        print("every pattern must lack a finite dominating set", file=sys.stderr)
        return EXIT_ORACLE
    except OracleError as exc:
        print(f"oracle error: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except SearchExhausted as exc:
        print(f"search exhausted (cap {exc.cap}): {exc}", file=sys.stderr)
        return EXIT_EXHAUSTED
    except (InputError, ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
