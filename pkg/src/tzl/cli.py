"""Command-line front end: ``tzl <group> <command> [options]``.

Exit codes: 0 success, 2 domain or range error, 3 resource error,
64 usage error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .admissible import (DEFAULT_MAX_POWER, OffsetTuple, check_admissible, class_root,
                         count_tuples, equivalence_class, extend_admissible, tuple_array)
from .config import RunConfig
from .errors import DomainError, ExtensionError, ResourceError, TableRangeError
from .growth import (euler_baseline, induction_hypothesis_probe, proposition_probe,
                     similarity_probe, theorem_ratio_probe, tuple_divergence_probe,
                     twin_corollary_probe)
from .lemmas import (corollary_equivalence_probe, gcd_shift_audit, lemma2_check,
                     lemma3_check)
from .output import render
from .series import (TupleWeightContext, log_zeta_k_deriv, prime_form_sum,
                     pure_power_sum, remainder_sample, zeta_eval)
from .sieve import SieveTable, build_sieve

EXIT_OK, EXIT_DOMAIN, EXIT_RESOURCE, EXIT_USAGE = 0, 2, 3, 64
CACHE_ENV = "TZL_CACHE_DIR"

log = logging.getLogger("tzl")

MANIFEST = {
    "sieve build": "segmented odd-only sieve; primality, von Mangoldt, Moebius tables",
    "sieve stats": "prime count and Chebyshev psi up to N",
    "admissible check": "residue coverage of an offset tuple at every prime <= k",
    "admissible extend": "append h_k + base**l for the smallest admissible l",
    "admissible class": "integer powers of an even shift and the root of a shift",
    "tuples list": "base primes of prime k-tuples up to a limit",
    "tuples count": "number of prime k-tuples up to a limit",
    "series logzeta": "truncated sum of lambda_(k)(n) / n_(k)**s",
    "series deriv": "same series with m factors of log n_(k)",
    "series primeform": "same series over genuine prime tuples only",
    "series remainder": "prime-power part of the series against zeta((k+1)/k)",
    "lemma two": "pair-sum inequality with a trailing remainder window",
    "lemma three": "pair-sum inequality with a leading remainder window",
    "lemma gcd": "coprimality preservation under the shift n -> n + 2i - 2j",
    "lemma equiv": "ratio of derivative series for a gap and its power",
    "growth euler": "sum of 1/p against log log psi(N)",
    "growth diverge": "prime-form partial sums at s = 1 with a log log N fit",
    "growth prop": "pair derivative series as s decreases toward 1",
    "growth ratio": "prime-form over von-Mangoldt-form ratio across s",
    "growth twins": "tuple counts seen by each embedded offset pair",
    "growth similar": "both sides of the pair divergence comparison",
    "growth hypothesis": "running maximum of the induction weight ratio",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text):
    return [float(t) for t in text.split(",") if t]


def _ints(text):
    return [int(float(t)) for t in text.split(",") if t]


def _int(text):
    return int(float(text))  # accepts 1e6


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("run configuration")
    g.add_argument("--config", help="JSON RunConfig file; flags override it")
    g.add_argument("--sieve-limit", type=_int, dest="sieve_limit")
    g.add_argument("--segment-size", type=_int, dest="segment_size")
    g.add_argument("--format", choices=("csv", "json"), dest="output_format")
    g.add_argument("--json", action="store_const", const="json", dest="output_format")
    g.add_argument("--output", "-o", dest="output_path")
    g.add_argument("--threads", type=int)
    g.add_argument("--force-s", action="store_const", const=True, dest="force_s")
    g.add_argument("--force", action="store_const", const=True)
    g.add_argument("--verbose", "-v", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="tzl", description="Numerical audits of prime k-tuple series.")
    parser.add_argument("--version", action="version", version=f"tzl {__version__}")
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def leaf(sub, name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    def tuple_opts(p, default_k=True):
        p.add_argument("--H", help="offset tuple such as 0,2,6")
        if default_k:
            p.add_argument("--k", type=int, help="k=1 means H=0")

    def s_opts(p):
        p.add_argument("--s", type=float)
        p.add_argument("--s-grid", type=_floats, dest="s_grid")

    def n_opts(p):
        p.add_argument("--N", type=_int)
        p.add_argument("--N-grid", type=_ints, dest="N_grid")

    g = groups.add_parser("sieve", help="sieve tables").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    p = leaf(g, "build", MANIFEST["sieve build"])
    p.add_argument("--limit", type=_int)
    p.add_argument("--cache", help="write the primality cache to this path")
    p = leaf(g, "stats", MANIFEST["sieve stats"])
    p.add_argument("--limit", type=_int)
    n_opts(p)

    g = groups.add_parser("admissible", help="admissible offset sets").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    tuple_opts(leaf(g, "check", MANIFEST["admissible check"]), False)
    p = leaf(g, "extend", MANIFEST["admissible extend"])
    tuple_opts(p, False)
    p.add_argument("--base", type=int, required=True)
    p.add_argument("--max-power", type=int, default=DEFAULT_MAX_POWER, dest="max_power")
    p = leaf(g, "class", MANIFEST["admissible class"])
    p.add_argument("--base", type=int)
    p.add_argument("--bound", type=_int)
    p.add_argument("--h", type=int, dest="shift")

    g = groups.add_parser("tuples", help="prime k-tuple search").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    for name in ("list", "count"):
        p = leaf(g, name, MANIFEST[f"tuples {name}"])
        tuple_opts(p, False)
        p.add_argument("--limit", type=_int, required=True)

    g = groups.add_parser("series", help="truncated series").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    for name in ("logzeta", "deriv", "primeform", "remainder"):
        p = leaf(g, name, MANIFEST[f"series {name}"])
        tuple_opts(p)
        s_opts(p)
        n_opts(p)
        if name in ("deriv", "primeform"):
            p.add_argument("--m", type=int, default=1 if name == "deriv" else 0)

    g = groups.add_parser("lemma", help="shift inequality audits").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    for name in ("two", "three", "equiv"):
        p = leaf(g, name, MANIFEST[f"lemma {name}"])
        p.add_argument("--two-i", "--two-j", type=int, required=True, dest="gap")
        p.add_argument("--l", type=int, default=2)
        s_opts(p)
        p.add_argument("--N", type=_int, required=True)
    p = leaf(g, "gcd", MANIFEST["lemma gcd"])
    p.add_argument("--two-i", type=int, required=True, dest="two_i")
    p.add_argument("--two-j", type=int, required=True, dest="two_j")
    p.add_argument("--N", type=_int, required=True)

    g = groups.add_parser("growth", help="divergence probes").add_subparsers(
        dest="cmd", required=True, parser_class=_Parser)
    n_opts(leaf(g, "euler", MANIFEST["growth euler"]))
    p = leaf(g, "diverge", MANIFEST["growth diverge"])
    tuple_opts(p, False)
    p.add_argument("--m", type=int, default=1)
    n_opts(p)
    p = leaf(g, "prop", MANIFEST["growth prop"])
    p.add_argument("--two-j", type=int, default=2, dest="gap")
    s_opts(p)
    p.add_argument("--N", type=_int, required=True)
    p = leaf(g, "ratio", MANIFEST["growth ratio"])
    tuple_opts(p, False)
    s_opts(p)
    p.add_argument("--N", type=_int, required=True)
    p = leaf(g, "twins", MANIFEST["growth twins"])
    tuple_opts(p, False)
    p.add_argument("--limit", type=_int, required=True)
    p = leaf(g, "similar", MANIFEST["growth similar"])
    p.add_argument("--two-j", type=int, default=2, dest="gap")
    n_opts(p)
    p = leaf(g, "hypothesis", MANIFEST["growth hypothesis"])
    tuple_opts(p, False)
    n_opts(p)

    p = groups.add_parser("manifest", parents=[common], help="list every command")
    return parser


# helpers --------------------------------------------------------------------


def _config(args) -> RunConfig:
    base = RunConfig.load(args.config) if args.config else RunConfig()
    over = {k: getattr(args, k, None) for k in
            ("sieve_limit", "segment_size", "output_format", "output_path", "threads",
             "force_s", "force")}
    if getattr(args, "s_grid", None) is not None:
        over["s_grid"] = args.s_grid
    elif getattr(args, "s", None) is not None:
        over["s_grid"] = [args.s]
    if getattr(args, "N_grid", None) is not None:
        over["N_grid"] = args.N_grid
    elif getattr(args, "N", None) is not None:
        over["N_grid"] = [args.N]
    if getattr(args, "H", None):
        over["tuples"] = [args.H]
    elif getattr(args, "k", None) is not None:
        if args.k != 1:
            raise DomainError("--k alone only selects H=0 (k=1); pass --H for k >= 2")
        over["tuples"] = ["0"]
    return base.merged(**over)


def _table(cfg: RunConfig, need: int) -> SieveTable:
    limit = cfg.sieve_limit or max(need, 2)
    if limit < need:
        raise TableRangeError(f"command needs a sieve up to {need}, configured {limit}")
    cache_dir = os.environ.get(CACHE_ENV)
    path = Path(cache_dir) / f"sieve-{limit}.tzl" if cache_dir else None
    if path is not None and path.exists():
        log.info("loading sieve cache %s", path)
        return SieveTable.load(path)
    table = build_sieve(limit, cfg.segment_size, threads=cfg.threads)
    if path is not None:
        table.save(path)
    return table


def _offsets(cfg: RunConfig) -> OffsetTuple:
    return OffsetTuple.parse(cfg.tuples[0])


def _h(H: OffsetTuple) -> str:
    return str(H)


# command bodies ---------------------------------------------------------------


def _run(args, cfg: RunConfig) -> tuple[list[dict], int | None]:
    key = f"{args.group} {args.cmd}" if args.group != "manifest" else "manifest"

    if key == "manifest":
        return [{"command": c, "checks": d} for c, d in MANIFEST.items()], None

    if key == "sieve build":
        limit = args.limit or cfg.sieve_limit
        if not limit:
            raise DomainError("sieve build needs --limit")
        table = build_sieve(limit, cfg.segment_size, threads=cfg.threads)
        cache = args.cache or (os.environ.get(CACHE_ENV) and
                               str(Path(os.environ[CACHE_ENV]) / f"sieve-{limit}.tzl"))
        if cache:
            table.save(cache)
        return [{"limit": limit, "prime_count": table.prime_count,
                 "bitset_bytes": len(table.bitset_bytes()),
                 "cache": cache or ""}], limit

    if key == "sieve stats":
        grid = cfg.N_grid if (args.N or args.N_grid) else [args.limit or cfg.sieve_limit]
        if not grid[0]:
            raise DomainError("sieve stats needs --limit or --N")
        table = _table(cfg, max(grid))
        return [{"N": N, "pi": table.count_primes(N), "psi": table.chebyshev_psi(N)}
                for N in grid], table.limit

    if args.group == "admissible":
        if args.cmd == "class":
            if args.shift is not None:
                root = class_root(args.shift)
                cls = equivalence_class(root, args.bound or args.shift)
                return [{"h": args.shift, "root": root, "members": cls.members}], None
            if args.base is None:
                raise DomainError("admissible class needs --base or --h")
            cls = equivalence_class(args.base, args.bound or args.base)
            return [{"base": cls.base, "members": cls.members}], None
        H = _offsets(cfg)
        if args.cmd == "check":
            rep = check_admissible(H)
            return [{"H": _h(H), "k": H.k,
                     "status": "admissible" if rep.admissible else "inadmissible",
                     "witness_prime": rep.witness_prime,
                     "residues": "; ".join(f"{p}:{' '.join(map(str, sorted(r)))}"
                                           for p, r in rep.residue_profiles.items())}], None
        try:
            out = extend_admissible(H, args.base, args.max_power)
        except ExtensionError as exc:
            log.error("%s", exc)
            for l, (p, res) in exc.obstructions.items():
                log.error("  l=%d blocked at p=%d, residues %s", l, p, res)
            raise
        return [{"H": _h(H), "base": args.base, "extended": _h(out),
                 "added_gap": out.gaps[-1]}], None

    if args.group == "tuples":
        H = _offsets(cfg)
        table = _table(cfg, args.limit + H.diameter)
        if args.cmd == "count":
            return [{"H": _h(H), "limit": args.limit,
                     "count": count_tuples(H, args.limit, table)}], table.limit
        return [{"p": int(p)} for p in tuple_array(H, args.limit, table)], table.limit

    if args.group == "series":
        H = _offsets(cfg)
        table = _table(cfg, max(cfg.N_grid) + H.diameter)
        ctx = TupleWeightContext(H, table, cfg.threads)
        rows = []
        bound = zeta_eval((H.k + 1) / H.k) if args.cmd == "remainder" else None
        for s in cfg.s_grid:
            for N in cfg.N_grid:
                if args.cmd == "logzeta":
                    sample = log_zeta_k_deriv(0, s, N, ctx, force=cfg.force_s)
                elif args.cmd == "deriv":
                    sample = log_zeta_k_deriv(args.m, s, N, ctx, force=cfg.force_s)
                elif args.cmd == "primeform":
                    sample = prime_form_sum(args.m, s, N, ctx, force=cfg.force_s)
                else:
                    sample = remainder_sample(s, N, ctx, force=cfg.force_s)
                row = {"H": _h(H), **sample.row()}
                if bound is not None:
                    pure = pure_power_sum(s, N, ctx, force=cfg.force_s)
                    row.update(bound=bound, bound_margin=bound - sample.value,
                               pure_power=pure, pure_power_margin=bound - pure)
                rows.append(row)
        return rows, table.limit

    if args.group == "lemma":
        if args.cmd == "gcd":
            rc = gcd_shift_audit(args.two_i, args.two_j, args.N, force=cfg.force)
            return [{"two_i": args.two_i, "two_j": args.two_j, "N": args.N,
                     "pairs_checked": rc.pairs_checked, "violations": rc.violations,
                     "first_violation": rc.first_violation}], None
        table = _table(cfg, args.N + args.gap**args.l)
        if args.cmd == "equiv":
            rows = corollary_equivalence_probe(args.gap, args.l, cfg.s_grid, args.N, table)
            return [{"two_i": args.gap, "l": args.l, "N": args.N, "s": s, "ratio": r}
                    for s, r in rows], table.limit
        check = lemma2_check if args.cmd == "two" else lemma3_check
        return [check(args.gap, args.l, s, args.N, table).row() for s in cfg.s_grid], table.limit

    if args.group == "growth":
        if args.cmd == "euler":
            table = _table(cfg, max(cfg.N_grid))
            return [vars(p) for p in euler_baseline(cfg.N_grid, table)], table.limit
        if args.cmd in ("prop", "similar"):
            N_top = args.N if args.cmd == "prop" else max(cfg.N_grid)
            table = _table(cfg, N_top + args.gap)
            if args.cmd == "prop":
                return [{"two_j": args.gap, "N": args.N, "s": s, "value": v} for s, v in
                        proposition_probe(args.gap, cfg.s_grid, args.N, table, cfg.threads)
                        ], table.limit
            return [{"two_j": args.gap, "N": N, "lhs": a, "rhs": b, "ratio": r}
                    for N, a, b, r in similarity_probe(args.gap, cfg.N_grid, table)], table.limit
        H = _offsets(cfg)
        if args.cmd == "diverge":
            table = _table(cfg, max(cfg.N_grid) + H.diameter)
            fit = tuple_divergence_probe(H, args.m, cfg.N_grid, table, cfg.threads)
            rows = [{"H": _h(H), "m": args.m, "N": N, "partial_sum": v, "residual": r}
                    for (N, v), r in zip(fit.samples, fit.residuals)]
            rows.append({"H": _h(H), "m": args.m, "fit_a": fit.a, "fit_b": fit.b,
                         "r2": fit.r2, "degenerate": fit.degenerate})
            return rows, table.limit
        if args.cmd == "ratio":
            table = _table(cfg, args.N + H.diameter)
            return [{"H": _h(H), "N": args.N, "s": s, "ratio": r} for s, r in
                    theorem_ratio_probe(H, cfg.s_grid, args.N, table, cfg.threads)], table.limit
        if args.cmd == "twins":
            table = _table(cfg, args.limit + H.diameter)
            return [{"H": _h(H), "pair": f"{a},{b}", "gap": b - a, "count": c}
                    for (a, b), c in twin_corollary_probe(H, args.limit, table).items()
                    ], table.limit
        if args.cmd == "hypothesis":
            table = _table(cfg, max(cfg.N_grid) + H.diameter)
            return [{"H": _h(H), "N": N, "running_max": v}
                    for N, v in induction_hypothesis_probe(H, cfg.N_grid, table)], table.limit

    raise DomainError(f"unknown command {key}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _config(args)
        records, limit = _run(args, cfg)
    except ResourceError as exc:
        print(f"tzl: resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except DomainError as exc:
        print(f"tzl: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    command = args.group if args.group == "manifest" else f"{args.group} {args.cmd}"
    provenance = {"tzl": __version__, "command": command,
                  "config_sha256": cfg.digest(), "sieve_limit": limit or ""}
    text = render(records, cfg.output_format, provenance)
    if cfg.output_path:
        Path(cfg.output_path).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
