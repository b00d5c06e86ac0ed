"""Command line front end: one subcommand per operation.

Every output starts with a provenance record (tool, version, command,
parameters, seed) and carries no timestamps, so rerunning a command with
the recorded parameters reproduces the file byte for byte.

Exit codes: 0 ok, 1 partial failure (bundle), 2 usage or invalid
parameters, 3 numerical failure (precision exhausted).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import mpmath
import numpy as np
import sympy

from . import __version__
from . import diophantine as dio
from . import equidistribution as eq
from . import exp_sums as es
from . import quasi_independence as qi
from . import random_sets as rs
from . import semigroup as sg

OUTPUT_DIR_ENV = "FURSTENBERG_OUTPUT_DIR"
EXIT_OK, EXIT_PARTIAL, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3


class UsageError(ValueError):
    pass


@dataclass
class Result:
    columns: Optional[list] = None
    rows: Optional[list] = None
    data: Optional[dict] = None


# ---------------------------------------------------------------- parsing helpers

def int_list(text: str) -> list[int]:
    try:
        return [int(float(t)) if "e" in t.lower() else int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from exc


def float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}") from exc


def big_int(text: str) -> int:
    """Integers, also written as 1e6 or 10**6."""
    t = text.strip()
    try:
        if "**" in t:
            a, b = t.split("**")
            return int(a) ** int(b)
        if "e" in t.lower():
            return int(Fraction(t))
        return int(t)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc


def parse_point(text: str, bits: int):
    """A circle point: ``a/b`` stays exact, anything else is evaluated to ``bits`` bits."""
    t = text.strip()
    try:
        return Fraction(t)
    except ValueError:
        pass
    try:
        expr = sympy.sympify(t)
        digits = int(bits * math.log10(2)) + 10
        with mpmath.workprec(bits):
            return mpmath.mpf(str(sympy.N(expr, digits)))
    except (sympy.SympifyError, TypeError, ValueError) as exc:
        raise UsageError(f"cannot parse point {text!r}") from exc


def basis_arg(text: str) -> sg.SemigroupBasis:
    try:
        return sg.SemigroupBasis.parse(text)
    except sg.InvalidBasisError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def profile_arg(text: str) -> rs.SelectorProfile:
    try:
        return rs.SelectorProfile.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _seed(args) -> int:
    if getattr(args, "seed", None) is None:
        args.seed = rs.fresh_seed()
    return args.seed


def _sample(args) -> rs.SelectorSample:
    return rs.sample_selector(args.profile, args.n, _seed(args))


def _frequencies(args) -> list[int]:
    """Frequencies from --freqs, or --basis/--terms, or a --profile sample."""
    if args.freqs:
        return args.freqs
    if args.profile is not None:
        return rs.sample_selector(args.profile, args.horizon, _seed(args)).members.tolist()
    return [t.value for t in sg.first_terms(args.basis, args.terms)]


def _add_freq_source(p, terms=64):
    p.add_argument("--freqs", type=int_list, help="explicit comma separated frequencies")
    p.add_argument("--basis", type=basis_arg, default=sg.SemigroupBasis.of(2, 3))
    p.add_argument("--terms", type=int, default=terms, help="number of semigroup terms")
    p.add_argument("--profile", type=profile_arg, help="use a random selector sample instead")
    p.add_argument("--horizon", type=big_int, default=10**4)
    p.add_argument("--seed", type=int)


# ---------------------------------------------------------------- commands

def cmd_enumerate(a):
    terms = sg.enumerate_terms(a.basis, a.limit, include_unit=a.include_unit)
    rows = [(i, t.value, ";".join(map(str, t.exponents))) for i, t in enumerate(terms, start=1)]
    return Result(["n", "value", "exponents"], rows)


def cmd_count(a):
    rows = []
    for N in a.limits:
        c = sg.count_upto(a.basis, N, include_unit=a.include_unit)
        approx = sg.ramanujan_approx(N) if a.basis.generators == (2, 3) else ""
        rows.append((N, c, approx))
    return Result(["N", "count", "ramanujan"], rows)


def cmd_nth(a):
    t = sg.nth_term(a.basis, a.n)
    return Result(data={"n": a.n, "value": t.value, "exponents": list(t.exponents),
                        "log_ratio": math.log(t.value) / math.sqrt(a.n),
                        "growth_constant": sg.growth_constant()})


def cmd_ramanujan(a):
    return Result(["N", "approx"], [(N, sg.ramanujan_approx(N)) for N in a.limits])


def cmd_gap_stats(a):
    reps = sg.gap_stats(a.basis, a.n_max, a.rho, a.r)
    tails = sg.tail_min_gaps(reps)
    rows = [(g.n, g.gap, g.relative_gap, g.lower_norm, g.upper_norm, m) for g, m in zip(reps, tails)]
    return Result(["n", "gap", "relative_gap", "lower_norm", "upper_norm", "tail_min_gap"], rows)


def cmd_cf(a):
    x = dio.log_ratio(a.a, a.b, a.bits)
    cf = dio.continued_fraction(x, a.depth, max_bits=a.max_bits)
    if cf.truncated_by_precision:
        raise dio.PrecisionExhausted(
            f"only {len(cf.partial_quotients)} quotients certified within {a.max_bits} bits; raise --max-bits")
    return Result(data={"a": a.a, "b": a.b, "quotients": cf.partial_quotients, **cf.to_dict()})


def cmd_pure_pairs(a):
    rows = [(p.first, p.second, p.p, p.q, int(p.is_convergent)) for p in dio.pure_pairs(a.limit)]
    return Result(["first", "second", "p", "q", "is_convergent"], rows)


def cmd_sturmian(a):
    word = dio.sturmian_code(a.n)
    data = {"word": word}
    if a.check_rotation:
        rot = dio.rotation_word(a.check_rotation, a.bits)
        data["rotation_n"] = a.check_rotation
        data["rotation_agrees"] = rot == dio.merged_power_word(a.check_rotation)
    if a.format == "json":
        return Result(data=data)
    return Result(["k", "symbol"], list(enumerate(word, start=1)))


def cmd_irrationality(a):
    prof = dio.irrationality_profile(dio.log_ratio(a.a, a.b, a.bits), a.q_max, a.rho)
    return Result(data={"constant": prof.constant, "argmin": prof.argmin, "certified": prof.certified})


def cmd_bohr(a):
    cert = dio.bohr_certificate(a.m, a.basis)
    data = cert.to_dict()
    if a.verify_limit:
        data["verify_limit"] = a.verify_limit
        data["verified"] = dio.verify_certificate(cert, a.verify_limit)
    return Result(data=data)


def cmd_weyl(a):
    freqs = _frequencies(a)
    x = parse_point(a.x, a.bits)
    rows = []
    for N in a.checkpoints or [len(freqs)]:
        w = eq.weyl_sum(freqs[:N], x, a.h)
        rows.append((w.N, abs(w.value), w.value.real, w.value.imag))
    return Result(["N", "abs", "re", "im"], rows)


def cmd_discrepancy(a):
    freqs = _frequencies(a)
    x = parse_point(a.x, a.bits)
    return Result(data={"N": len(freqs), "x": a.x,
                        "star_discrepancy": eq.star_discrepancy(eq.fractional_parts(freqs, x))})


def cmd_hartman(a):
    freqs = _frequencies(a)
    prof = eq.hartman_profile(freqs, a.n, a.denominator_bound, a.grid_size)
    return Result(data=prof.to_dict())


def cmd_del(a):
    freqs = _frequencies(a)
    ints = eq.del_integrals(freqs, a.n_max)
    sums = eq.del_series(freqs, a.n_max)
    rows = []
    for n, (i, s) in enumerate(zip(ints, sums), start=1):
        row = [n, str(i), float(i), float(s)]
        if a.quadrature:
            row.append(eq.del_integral_quadrature(freqs, n))
        rows.append(tuple(row))
    cols = ["n", "integral", "integral_float", "partial_sum"] + (["quadrature"] if a.quadrature else [])
    return Result(cols, rows)


def cmd_shrink_sim(a):
    seed = _seed(a)
    if a.paths:
        res = eq.event_frequencies(a.check, a.paths, seed)
        rows = []
        for N in a.check:
            p, c = res["exact"][N], res["counts"][N]
            sd = math.sqrt(p * (1 - p) / a.paths)
            rows.append((N, c, c / a.paths, p, abs(c / a.paths - p) / sd))
        return Result(["N", "hits", "empirical", "exact", "z"], rows)
    path = eq.shrinking_target_sim(N_max=a.n_max, seed=seed)
    return Result(["N", "hit", "window_average"], path.to_rows())


def cmd_sample(a):
    s = _sample(a)
    return Result(["k"], [(int(k),) for k in s.members])


def cmd_growth(a):
    g = rs.growth_report(_sample(a), a.profile)
    return Result(data=g.__dict__.copy())


def cmd_gaps(a):
    st = rs.gap_report(_sample(a), a.delta)
    return Result(["n", "t", "gap", "limsup_normalized", "liminf_normalized", "ratio"], list(st.rows()))


def cmd_bourgain(a):
    ratios = rs.bourgain_ratio(a.profile, a.limits)
    ms = a.profile.partial_sums(a.limits)
    return Result(["N", "m_N", "ratio"], list(zip(a.limits, ms, ratios)))


def cmd_relation_bound(a):
    b = rs.relation_bound(a.length, a.A, a.profile, rel_tail=a.rel_tail)
    return Result(data=b.__dict__.copy())


def cmd_kk_blocks(a):
    blocks = rs.kk_block_analysis(_sample(a), a.l_max, a.profile)
    rows = [(b.n, b.A_n, b.head_count, b.length_bound, b.scanned,
             "" if b.relation is None else str(b.relation)) for b in blocks]
    return Result(["n", "A_n", "head_count", "length_bound", "scanned", "relation"], rows)


def cmd_qi_test(a):
    ok, rel = qi.is_quasi_independent(a.set)
    return Result(data={"set": sorted(set(a.set)), "quasi_independent": ok,
                        "witness": None if rel is None else rel.to_dict()})


def cmd_qi_extract(a):
    return Result(data=qi.extract_greedy(a.set, a.L).to_dict())


def cmd_qi_max(a):
    return Result(data=qi.max_quasi_independent_exact(a.set).to_dict())


def cmd_big_subset(a):
    s = rs.sample_selector(a.profile, 1 << (a.n_max + 1), _seed(a))
    rep = qi.build_big_subset(s, a.n_max, a.L)
    return Result(data=rep.to_dict())


def cmd_mesh_p(a):
    if a.counts:
        pts = []
        for item in a.counts.split(","):
            N, c = item.split(":")
            pts.append((big_int(N), float(c)))
    else:
        pts = [(N, sg.count_upto(a.basis, N, include_unit=True)) for N in a.limits]
    fit = qi.mesh_p_bound(pts)
    return Result(data={"points": [[N, c] for N, c in pts], "gamma": fit.gamma, "log_c": fit.log_c,
                        "p_min": fit.p_min})


def _poly(a) -> es.TrigPolynomial:
    freqs = _frequencies(a)
    if a.coeffs:
        if len(a.coeffs) != len(freqs):
            raise UsageError("--coeffs must match the number of frequencies")
        return es.TrigPolynomial.from_arrays(freqs, a.coeffs)
    return es.TrigPolynomial.indicator(freqs)


def cmd_lq(a):
    return Result(data=es.lq_norm(_poly(a), a.q, a.mode, a.grid_size).to_dict())


def cmd_psi2(a):
    return Result(data=es.psi2_norm(_poly(a), a.method, a.grid_size).to_dict())


def cmd_psi_block(a):
    s = rs.sample_selector(a.profile, max(a.horizon, 1 << (max(a.blocks) + 1)), _seed(a))
    rows = []
    for n in a.blocks:
        est = es.psi_block_ratio(s.members.tolist(), n)
        rows.append((n, est.extra["block_size"], est.extra["psi2"], est.value))
    return Result(["n", "block_size", "psi2", "ratio"], rows)


def cmd_lambda_q(a):
    freqs = _frequencies(a)
    rows = []
    for q in a.q:
        est = es.lambda_q_estimate(freqs, q, a.trials, _seed(a), a.support)
        rows.append((q, est.value, est.grid_size))
    return Result(["q", "estimate", "grid_size"], rows)


def cmd_rider(a):
    f = _poly(a)
    est = es.rider_functional(f, a.trials, _seed(a), a.grid_size)
    data = est.to_dict()
    if a.p:
        data["diagnostic"] = es.rider_diagnostic(f, a.p, a.trials, a.seed)
    return Result(data=data)


def cmd_bundle(a):
    if a.replication:
        configs = replication_configs()
    else:
        with open(a.configs) as fh:
            configs = [RunConfig(**c) for c in json.load(fh)]
    out_dir = a.out_dir or os.environ.get(OUTPUT_DIR_ENV) or "bundle"
    manifest = report_bundle(configs, out_dir)
    code = EXIT_OK if all(e["status"] == "ok" for e in manifest["entries"]) else EXIT_PARTIAL
    return Result(data={"out_dir": out_dir, "entries": len(manifest["entries"]), "exit": code})


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="furstenberg", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add(name, func, help_text, fmt="csv"):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--format", choices=("csv", "json", "jsonl"), default=fmt)
        p.add_argument("--output", "-o", help="output file (default stdout or $%s)" % OUTPUT_DIR_ENV)
        return p

    p = add("enumerate", cmd_enumerate, "list semigroup elements up to a limit")
    p.add_argument("--basis", type=basis_arg, default=sg.SemigroupBasis.of(2, 3))
    p.add_argument("--limit", type=big_int, required=True)
    p.add_argument("--include-unit", action="store_true")

    p = add("count", cmd_count, "count elements up to each limit")
    p.add_argument("--basis", type=basis_arg, default=sg.SemigroupBasis.of(2, 3))
    p.add_argument("--limits", type=int_list, required=True)
    p.add_argument("--include-unit", action="store_true")

    p = add("nth", cmd_nth, "n-th element and its growth ratio", "json")
    p.add_argument("--basis", type=basis_arg, default=sg.SemigroupBasis.of(2, 3))
    p.add_argument("--n", type=int, required=True)

    p = add("ramanujan", cmd_ramanujan, "Ramanujan's count estimate for {2,3}")
    p.add_argument("--limits", type=int_list, required=True)

    p = add("gap-stats", cmd_gap_stats, "consecutive gaps with normalisers")
    p.add_argument("--basis", type=basis_arg, default=sg.SemigroupBasis.of(2, 3))
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--rho", type=float, default=4.116)
    p.add_argument("--r", type=float, default=0.0977)

    p = add("cf", cmd_cf, "continued fraction of log a / log b", "json")
    p.add_argument("--a", type=int, default=2)
    p.add_argument("--b", type=int, default=3)
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--bits", type=int, default=256)
    p.add_argument("--max-bits", type=int, default=1 << 16)

    p = add("pure-pairs", cmd_pure_pairs, "consecutive pure powers in S(2,3)")
    p.add_argument("--limit", type=big_int, required=True)

    p = add("sturmian", cmd_sturmian, "powers of 2 between consecutive powers of 3")
    p.add_argument("--n", type=int, default=14)
    p.add_argument("--check-rotation", type=int, default=0, help="compare the rotation word up to this n")
    p.add_argument("--bits", type=int, default=256)

    p = add("irrationality", cmd_irrationality, "min of ||q x|| q^rho for x = log a / log b", "json")
    p.add_argument("--a", type=int, default=2)
    p.add_argument("--b", type=int, default=3)
    p.add_argument("--q-max", type=int, default=1000)
    p.add_argument("--rho", type=float, default=4.116)
    p.add_argument("--bits", type=int, default=256)

    p = add("bohr", cmd_bohr, "arithmetic progression through m missing the semigroup", "json")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--basis", type=basis_arg, default=sg.SemigroupBasis.of(2, 3))
    p.add_argument("--verify-limit", type=big_int, default=0)

    p = add("weyl", cmd_weyl, "Weyl averages (1/N) sum e(h lambda_n x)")
    _add_freq_source(p, terms=1000)
    p.add_argument("--x", default="sqrt(2)-1")
    p.add_argument("--h", type=int, default=1)
    p.add_argument("--bits", type=int, default=512)
    p.add_argument("--checkpoints", type=int_list)

    p = add("discrepancy", cmd_discrepancy, "star discrepancy of {lambda_n x}", "json")
    _add_freq_source(p, terms=10**4)
    p.add_argument("--x", default="sqrt(2)-1")
    p.add_argument("--bits", type=int, default=512)

    p = add("hartman", cmd_hartman, "sup of |A_N| over an irrational grid", "json")
    _add_freq_source(p, terms=1000)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--denominator-bound", type=int, default=6)
    p.add_argument("--grid-size", type=int, default=512)

    p = add("del", cmd_del, "partial sums of sum (1/n) int |A_n|^2")
    _add_freq_source(p, terms=100)
    p.add_argument("--n-max", type=int, default=50)
    p.add_argument("--quadrature", action="store_true")

    p = add("shrink-sim", cmd_shrink_sim, "shrinking-target simulation on the Bernoulli shift")
    p.add_argument("--n-max", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.add_argument("--paths", type=int, default=0, help="Monte-Carlo over this many paths")
    p.add_argument("--check", type=int_list, default=[10, 100, 1000])

    def selector(name, func, help_text, fmt="csv"):
        p = add(name, func, help_text, fmt)
        p.add_argument("--profile", type=profile_arg, default=rs.SelectorProfile.furstenberg())
        p.add_argument("--n", type=big_int, default=10**6)
        p.add_argument("--seed", type=int)
        return p

    selector("sample", cmd_sample, "draw a random selector set")
    selector("growth", cmd_growth, "size of a sample against m_N", "json")
    p = selector("gaps", cmd_gaps, "normalised gaps of a sample")
    p.add_argument("--delta", type=float, default=0.1)
    p = selector("kk-blocks", cmd_kk_blocks, "head counts and bounded relation search per block")
    p.add_argument("--l-max", type=int, default=4)

    p = add("bourgain", cmd_bourgain, "m_N / log N")
    p.add_argument("--profile", type=profile_arg, default=rs.SelectorProfile.furstenberg())
    p.add_argument("--limits", type=int_list, required=True)

    p = add("relation-bound", cmd_relation_bound, "upper bound for a relation of given length", "json")
    p.add_argument("--profile", type=profile_arg, default=rs.SelectorProfile.furstenberg())
    p.add_argument("--length", type=int, required=True)
    p.add_argument("--A", type=float, required=True)
    p.add_argument("--rel-tail", type=float, default=1e-3)

    for name, func, help_text in (("qi-test", cmd_qi_test, "exact quasi-independence test"),
                                  ("qi-extract", cmd_qi_extract, "greedy quasi-independent subset"),
                                  ("qi-max", cmd_qi_max, "largest quasi-independent subset")):
        p = add(name, func, help_text, "json")
        p.add_argument("--set", type=int_list, required=True)
        p.add_argument("--L", type=int, default=qi.DEFAULT_L)

    p = add("big-subset", cmd_big_subset, "union of per-block quasi-independent subsets", "json")
    p.add_argument("--profile", type=profile_arg, default=rs.SelectorProfile.furstenberg())
    p.add_argument("--n-max", type=int, default=16)
    p.add_argument("--seed", type=int)
    p.add_argument("--L", type=int, default=qi.DEFAULT_L)

    p = add("mesh-p", cmd_mesh_p, "fit |E_N| ~ c (log N)^gamma and report p_min", "json")
    p.add_argument("--basis", type=basis_arg, default=sg.SemigroupBasis.of(2, 3))
    p.add_argument("--limits", type=int_list, default=[10**3, 10**4, 10**5, 10**6])
    p.add_argument("--counts", help="explicit N:count pairs, comma separated")

    def poly(name, func, help_text):
        p = add(name, func, help_text, "json")
        _add_freq_source(p)
        p.add_argument("--coeffs", type=float_list)
        p.add_argument("--grid-size", type=int)
        return p

    p = poly("lq", cmd_lq, "L^q norm of a trigonometric polynomial")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--mode", choices=("grid", "exact"), default="grid")
    p = poly("psi2", cmd_psi2, "Orlicz psi_2 norm")
    p.add_argument("--method", choices=("orlicz", "supq"), default="orlicz")
    p = poly("rider", cmd_rider, "Monte-Carlo Rider functional")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--p", type=float, help="also report the p-Rider diagnostic")

    p = add("psi-block", cmd_psi_block, "psi_2 of dyadic blocks over sqrt(block size)")
    p.add_argument("--profile", type=profile_arg, default=rs.SelectorProfile.furstenberg())
    p.add_argument("--blocks", type=int_list, default=list(range(8, 15)))
    p.add_argument("--horizon", type=big_int, default=1 << 15)
    p.add_argument("--seed", type=int)

    p = add("lambda-q", cmd_lambda_q, "Monte-Carlo lower estimate of Lambda(q) constants")
    _add_freq_source(p)
    p.add_argument("--q", type=float_list, default=[4.0])
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--support", type=int, default=64)

    p = add("bundle", cmd_bundle, "run a list of configurations and write a manifest", "json")
    p.add_argument("--configs", help="JSON file with a list of run configurations")
    p.add_argument("--replication", action="store_true", help="run the built-in replication set")
    p.add_argument("--out-dir")
    return parser


# ---------------------------------------------------------------- output

def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.floating,)):
        return float(v)
    if isinstance(v, (complex, np.complexfloating)):
        return [v.real, v.imag]
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (np.ndarray,)):
        return _jsonable(v.tolist())
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def _params(args) -> dict:
    skip = {"func", "format", "output", "command"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip:
            continue
        if isinstance(v, sg.SemigroupBasis):
            v = ",".join(map(str, v.generators))
        elif isinstance(v, rs.SelectorProfile):
            v = v.ident
        out[k] = _jsonable(v)
    return out


def provenance(args) -> dict:
    return {"tool": "furstenberg", "version": __version__, "command": args.command,
            "config": _params(args), "seed": getattr(args, "seed", None)}


def render(result: Result, fmt: str, prov: dict) -> str:
    buf = io.StringIO()
    if fmt == "json":
        body = result.data if result.data is not None else {
            "columns": result.columns, "rows": result.rows}
        json.dump(_jsonable({"provenance": prov, "result": body}), buf, sort_keys=True)
        buf.write("\n")
    elif fmt == "jsonl":
        buf.write(json.dumps(_jsonable({"provenance": prov}), sort_keys=True) + "\n")
        if result.data is not None:
            buf.write(json.dumps(_jsonable(result.data), sort_keys=True) + "\n")
        else:
            for row in result.rows:
                buf.write(json.dumps(_jsonable(dict(zip(result.columns, row))), sort_keys=True) + "\n")
    else:
        buf.write("# " + json.dumps(_jsonable(prov), sort_keys=True) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        if result.data is not None:
            w.writerow(["key", "value"])
            for k, v in sorted(result.data.items()):
                w.writerow([k, json.dumps(_jsonable(v)) if isinstance(v, (dict, list, tuple)) else _jsonable(v)])
        else:
            w.writerow(result.columns)
            for row in result.rows:
                w.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _destination(args) -> Optional[str]:
    if args.output:
        return args.output
    out_dir = os.environ.get(OUTPUT_DIR_ENV)
    if out_dir and args.command != "bundle":
        os.makedirs(out_dir, exist_ok=True)
        return os.path.join(out_dir, f"{args.command}.{args.format}")
    return None


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.func(args)
    except dio.PrecisionExhausted as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, TypeError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(result, args.format, provenance(args))
    dest = _destination(args)
    if dest:
        with open(dest, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.command == "bundle":
        return result.data["exit"]
    return EXIT_OK


# ---------------------------------------------------------------- programmatic runs

@dataclass
class RunConfig:
    subcommand: str
    params: dict = field(default_factory=dict)
    seed: Optional[int] = None
    format: str = "json"
    output: Optional[str] = None

    def argv(self) -> list[str]:
        out = [self.subcommand]
        for k, v in self.params.items():
            flag = "--" + k.replace("_", "-")
            if v is True:
                out.append(flag)
            elif v is False or v is None:
                continue
            elif isinstance(v, (list, tuple)):
                out += [flag, ",".join(map(str, v))]
            else:
                out += [flag, str(v)]
        if self.seed is not None:
            out += ["--seed", str(self.seed)]
        out += ["--format", self.format]
        if self.output:
            out += ["--output", self.output]
        return out


def run(config: RunConfig) -> int:
    return main(config.argv())


def _sha256(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def report_bundle(configs: list, out_dir: str) -> dict:
    """Run each configuration into ``out_dir`` and write manifest.json with checksums."""
    if not configs:
        raise ValueError("config list is empty")
    os.makedirs(out_dir, exist_ok=True)
    entries = []
    for i, cfg in enumerate(configs):
        if isinstance(cfg, dict):
            cfg = RunConfig(**cfg)
        name = f"{i:02d}_{cfg.subcommand}.{cfg.format}"
        path = os.path.join(out_dir, name)
        cfg = RunConfig(cfg.subcommand, dict(cfg.params), cfg.seed, cfg.format, path)
        stderr = io.StringIO()
        saved, sys.stderr = sys.stderr, stderr
        try:
            code = run(cfg)
        finally:
            sys.stderr = saved
        entry = {"index": i, "subcommand": cfg.subcommand, "argv": cfg.argv()[:-2], "file": name,
                 "exit_code": code, "status": "ok" if code == EXIT_OK else "failed"}
        if code == EXIT_OK and os.path.exists(path):
            entry["sha256"] = _sha256(path)
        else:
            entry["error"] = stderr.getvalue().strip()
        entries.append(entry)
    manifest = {"tool": "furstenberg", "version": __version__, "entries": entries}
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def replication_configs() -> list[RunConfig]:
    """The runs behind the replication checks, with fixed seeds."""
    cfgs = [
        RunConfig("enumerate", {"limit": 20000}, format="csv"),
        RunConfig("count", {"limits": [10**3, 10**4, 10**5, 10**6]}, format="csv"),
        RunConfig("nth", {"n": 10**4}),
        RunConfig("cf", {"depth": 5}),
        RunConfig("pure-pairs", {"limit": 2200}, format="csv"),
        RunConfig("sturmian", {"n": 14, "check_rotation": 10**5}),
        RunConfig("mesh-p", {}),
        RunConfig("mesh-p", {"basis": "2,3,5"}),
        RunConfig("del", {"n_max": 50, "quadrature": True}, format="csv"),
        RunConfig("shrink-sim", {"n_max": 1000}, seed=0, format="csv"),
        RunConfig("psi2", {"freqs": [5]}),
    ]
    for m in range(0, 101):
        if not sg.SemigroupBasis.of(2, 3).contains(m):
            cfgs.append(RunConfig("bohr", {"m": m, "verify_limit": 10**7}))
    for seed in range(5):
        cfgs.append(RunConfig("growth", {"n": 10**6}, seed=seed))
        cfgs.append(RunConfig("big-subset", {"n_max": 16}, seed=seed))
        cfgs.append(RunConfig("psi-block", {}, seed=seed, format="csv"))
    return cfgs
