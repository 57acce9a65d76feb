"""Command line entry point: ``charseries {inspect,series,refine,aut,census,family,stats}``.

Exit codes: 0 success, 2 input error, 3 resource budget exceeded,
4 internal invariant violation. Numeric options fall back to environment
variables with prefix ``FF_`` (for example ``FF_JOBS=4``).
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
from dataclasses import dataclass
from multiprocessing import Pool
from pathlib import Path

from . import __version__
from .aut import CENSUS_FIELDS, DEFAULT_TUPLE_BUDGET, BudgetExceeded, brute_force_aut, census
from .corpus import CorpusEntry, CorpusError, bundled, scan_directory
from .families import FAMILIES, FamilyError, certify_not_p_group, family_member, verify_family_membership
from .filter import check_filter_axioms
from .pcgroup import (
    DEFAULT_ENUMERATION_BOUND,
    PresentationError,
    format_presentation,
    is_consistent,
    load_presentation,
)
from .refine import DEFAULT_ITERATION_CAP, RINGS, all_bimaps_degenerate, refine_fixpoint
from .series import exponent_p_central, invariants, lower_central

log = logging.getLogger("charseries")

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_INVARIANT = 0, 2, 3, 4

STATS_FIELDS = ["group_id", "p", "n", "eta_length", "eta_max_factor", "refined_length", "refined_max_factor",
                "rings_used", "iterations"]


class InputError(Exception):
    pass


class InvariantViolation(Exception):
    pass


@dataclass
class RunConfig:
    jobs: int = 1
    enumeration_bound: int = DEFAULT_ENUMERATION_BOUND
    tuple_budget: int = DEFAULT_TUPLE_BUDGET
    refinement_iteration_cap: int = DEFAULT_ITERATION_CAP
    out: Path | None = None

    def __post_init__(self):
        if self.jobs < 1:
            raise InputError("jobs must be at least 1")
        for name in ("enumeration_bound", "tuple_budget", "refinement_iteration_cap"):
            if getattr(self, name) <= 0:
                raise InputError(f"{name} must be positive")


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get("FF_" + name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"FF_{name} must be an integer, got {raw!r}")


def config_from_args(args) -> RunConfig:
    def pick(attr, env, default):
        v = getattr(args, attr, None)
        return v if v is not None else _env_int(env, default)

    return RunConfig(
        jobs=pick("jobs", "JOBS", 1),
        enumeration_bound=pick("enumeration_bound", "ENUMERATION_BOUND", DEFAULT_ENUMERATION_BOUND),
        tuple_budget=pick("budget", "TUPLE_BUDGET", DEFAULT_TUPLE_BUDGET),
        refinement_iteration_cap=pick("iteration_cap", "ITERATION_CAP", DEFAULT_ITERATION_CAP),
        out=getattr(args, "out", None),
    )


def _load(path):
    try:
        G = load_presentation(path)
    except FileNotFoundError:
        raise InputError(f"{path}: no such file")
    except PresentationError as exc:
        raise InputError(f"{path}: {exc}")
    return G


def _load_consistent(path, cfg: RunConfig):
    G = _load(path)
    rep = is_consistent(G, exhaustive_bound=min(cfg.enumeration_bound, 2**9))
    if not rep:
        raise InputError(f"{path}: inconsistent presentation ({rep.failure})")
    return G


def write_csv(rows: list, fields: list, out) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: r.get(k, "") for k in fields})
    text = buf.getvalue()
    if out is not None:
        Path(out).write_text(text, encoding="utf-8", newline="")
    return text


def _entries(args) -> list[CorpusEntry]:
    try:
        if args.directory is not None:
            d = Path(args.directory)
            if not d.is_dir():
                raise InputError(f"{d}: not a directory")
            entries = scan_directory(d, validate=True)
        else:
            if args.prime is None or args.exponent is None:
                raise InputError("give a corpus directory or --prime and --exponent")
            entries = bundled(args.prime**args.exponent)
            for e in entries:
                if not is_consistent(e.load()):
                    raise InputError(f"{e.group_id} is not consistent")
    except (CorpusError, PresentationError) as exc:
        raise InputError(str(exc))
    if args.prime is not None:
        entries = [e for e in entries if e.p == args.prime]
    if args.exponent is not None:
        entries = [e for e in entries if e.n == args.exponent]
    return entries


# ----------------------------------------------------------------------------
# commands


def _chain_lines(G, chain) -> list[str]:
    return [f"  {k}: order {G.p}^{H.log_order}  {list(H.gens)}" for k, H in enumerate(chain.terms, start=1)]


def cmd_inspect(args, cfg: RunConfig) -> int:
    G = _load(args.file)
    rep = is_consistent(G, exhaustive_bound=min(cfg.enumeration_bound, 2**9))
    print(f"consistent: {'yes' if rep else 'no'} ({rep.method})")
    if not rep:
        print(f"failure: {rep.failure}")
        return EXIT_INPUT
    inv = invariants(G)
    print(inv.summary(G.p))
    print(f"eta factors: {exponent_p_central(G).factor_exponents()}")
    print(f"gamma factors: {lower_central(G).factor_exponents()}")
    return EXIT_OK


def cmd_series(args, cfg: RunConfig) -> int:
    G = _load_consistent(args.file, cfg)
    kinds = ["eta", "gamma"] if args.kind == "both" else [args.kind]
    for kind in kinds:
        chain = exponent_p_central(G) if kind == "eta" else lower_central(G)
        print(f"{kind}: length {chain.length}, factors {chain.factor_exponents()}")
        for line in _chain_lines(G, chain):
            print(line)
    return EXIT_OK


def stats_row(group_id: str, G, cfg: RunConfig, rings=RINGS) -> tuple[dict, object, object]:
    f, trace = refine_fixpoint(G, iteration_cap=cfg.refinement_iteration_cap, rings=rings)
    if not check_filter_axioms(f):
        raise InvariantViolation(f"{group_id}: refined filter violates the filter axioms")
    a, b = trace.initial_stats, trace.final_stats
    if b.length < a.length or b.max_factor_exponent > a.max_factor_exponent or sum(b.factors) != G.n:
        raise InvariantViolation(f"{group_id}: refinement statistics are not monotone")
    row = {
        "group_id": group_id,
        "p": G.p,
        "n": G.n,
        "eta_length": a.length,
        "eta_max_factor": a.max_factor_exponent,
        "refined_length": b.length,
        "refined_max_factor": b.max_factor_exponent,
        "rings_used": "+".join(trace.rings_used) if trace.rings_used else "none",
        "iterations": trace.iterations,
    }
    return row, f, trace


def cmd_refine(args, cfg: RunConfig) -> int:
    G = _load_consistent(args.file, cfg)
    rings = RINGS if args.ring == "all" else (args.ring,)
    row, f, trace = stats_row(Path(args.file).stem, G, cfg, rings)
    a, b = trace.initial_stats, trace.final_stats
    if all_bimaps_degenerate(G):
        print("skipped: degenerate bimap")
    for st in trace.steps:
        print(f"iteration {st.iteration}: {st.ring} at {st.position} -> subgroup of order {G.p}^{st.log_order}"
              f" (radical dim {st.radical_dim})")
    if not trace.steps:
        genus = invariants(G).genus
        print("no refinement (genus 1)" if genus == 1 else "no refinement")
    print(f"length {a.length} → {b.length}, max factor {a.max_factor_exponent} → {b.max_factor_exponent}")
    print(f"refined factors: {list(b.factors)}")
    if trace.cap_reached:
        print(f"iteration cap {cfg.refinement_iteration_cap} reached")
    if args.stats_csv:
        write_csv([row], STATS_FIELDS, args.stats_csv)
    return EXIT_OK


def cmd_aut(args, cfg: RunConfig) -> int:
    G = _load_consistent(args.file, cfg)
    if args.unpruned:
        res = brute_force_aut(G, None, budget=cfg.tuple_budget)
    else:
        _, trace = refine_fixpoint(G, iteration_cap=cfg.refinement_iteration_cap)
        res = brute_force_aut(G, trace.final_chain, budget=cfg.tuple_budget)
    print(f"aut_order={res.order}, p_group={'true' if res.is_p_group else 'false'}")
    print(f"search_nodes={res.search_nodes}, generators={len(res.generators)}")
    return EXIT_OK


def cmd_census(args, cfg: RunConfig) -> int:
    entries = _entries(args)
    if not entries:
        print("warning: no corpus entries found", file=sys.stderr)
    res = census(entries, jobs=cfg.jobs, budget=cfg.tuple_budget, iteration_cap=cfg.refinement_iteration_cap,
                 timing=args.timing)
    text = write_csv(res.rows, CENSUS_FIELDS, cfg.out)
    if cfg.out is None and args.csv:
        sys.stdout.write(text)
    p = "" if res.p is None else f"p={res.p} "
    n = "" if res.n is None else f"n={res.n} "
    print(f"{p}{n}g={res.g_count} f={res.f_count}")
    for r in res.failures:
        print(f"{r['group_id']}: {r['status']}", file=sys.stderr)
    if any(r["status"].startswith("error") for r in res.rows):
        return EXIT_INVARIANT
    if any(r["status"] == "budget" for r in res.rows):
        return EXIT_BUDGET
    return EXIT_OK


def _stats_job(task):
    entry, cfg = task
    row, _, _ = stats_row(entry.group_id, entry.load(), cfg)
    return row


def cmd_stats(args, cfg: RunConfig) -> int:
    entries = _entries(args)
    if not entries:
        print("warning: no corpus entries found", file=sys.stderr)
    tasks = [(e, cfg) for e in entries]
    if cfg.jobs > 1 and len(tasks) > 1:
        with Pool(cfg.jobs) as pool:
            rows = pool.map(_stats_job, tasks, chunksize=1)
    else:
        rows = [_stats_job(t) for t in tasks]
    rows.sort(key=lambda r: r["group_id"])
    text = write_csv(rows, STATS_FIELDS, cfg.out)
    if cfg.out is None:
        sys.stdout.write(text)
    longer = sum(1 for r in rows if r["refined_length"] > r["eta_length"])
    print(f"refined {longer} of {len(rows)}", file=sys.stderr)
    return EXIT_OK


def cmd_family(args, cfg: RunConfig) -> int:
    params = None
    if args.params:
        try:
            params = tuple(int(v) for v in args.params.split(","))
        except ValueError:
            raise InputError("--params must be comma-separated integers")
    try:
        member = family_member(args.family, args.p, params)
    except FamilyError as exc:
        raise InputError(str(exc))
    G = member.group
    ok, report = verify_family_membership(member)
    text = format_presentation(G)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    for label, passed in report:
        print(f"{'pass' if passed else 'FAIL'}: {label}", file=sys.stderr)
    if not ok:
        return EXIT_INVARIANT
    try:
        cert = certify_not_p_group(member)
    except FamilyError as exc:
        raise InvariantViolation(str(exc))
    print("inversion automorphism verified", file=sys.stderr)
    if cert["not_p_group"]:
        print("Aut(G) is not a p-group (involution acting as -1 on G/Phi(G))", file=sys.stderr)
    return EXIT_OK


# ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="charseries", description="Characteristic series and automorphisms of p-groups")
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--enumeration-bound", type=int, default=None)
        sp.add_argument("--budget", type=int, default=None, help="candidate-image budget for automorphism search")
        sp.add_argument("--iteration-cap", type=int, default=None)

    sp = sub.add_parser("inspect", help="consistency and invariants of a presentation file")
    sp.add_argument("file")
    common(sp)
    sp.set_defaults(func=cmd_inspect)

    sp = sub.add_parser("series", help="print the exponent-p and lower central series")
    sp.add_argument("file")
    sp.add_argument("--kind", choices=["eta", "gamma", "both"], default="both")
    common(sp)
    sp.set_defaults(func=cmd_series)

    sp = sub.add_parser("refine", help="refine the exponent-p central series")
    sp.add_argument("file")
    sp.add_argument("--ring", choices=list(RINGS) + ["all"], default="all")
    sp.add_argument("--stats-csv", type=Path, default=None)
    common(sp)
    sp.set_defaults(func=cmd_refine)

    sp = sub.add_parser("aut", help="order of the automorphism group")
    sp.add_argument("file")
    sp.add_argument("--unpruned", action="store_true", help="search without a characteristic chain")
    common(sp)
    sp.set_defaults(func=cmd_aut)

    for name, func, hlp in (("census", cmd_census, "count groups whose automorphism group is a p-group"),
                            ("stats", cmd_stats, "refinement statistics CSV over a corpus")):
        sp = sub.add_parser(name, help=hlp)
        sp.add_argument("directory", nargs="?", default=None, help="corpus directory (default: bundled corpus)")
        sp.add_argument("--prime", type=int, default=None)
        sp.add_argument("--exponent", type=int, default=None)
        sp.add_argument("--jobs", type=int, default=None)
        sp.add_argument("--out", type=Path, default=None)
        if name == "census":
            sp.add_argument("--timing", action="store_true", help="fill wall_ms (makes output run-dependent)")
            sp.add_argument("--csv", action="store_true", help="print the CSV when no --out is given")
        common(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("family", help="construct a family member and verify its inversion automorphism")
    sp.add_argument("--family", choices=list(FAMILIES), required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--params", default=None, help="comma-separated parameters")
    sp.add_argument("--out", type=Path, default=None)
    sp.set_defaults(func=cmd_family)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = config_from_args(args)
        return args.func(args, cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvariantViolation, AssertionError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
