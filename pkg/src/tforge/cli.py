"""Command-line interface.

Subcommands: scheme, algebra, verify, decompose, semisimple, sweep.  Every
command emits a uniform JSON envelope {command, config, result, duration_ms,
pass} (text/CSV renderings come from the same report structure) and exits 0
iff every executed check passed.  Identical configurations produce
byte-identical JSON apart from the duration field.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional

import numpy as np

from .gfp_linalg import RrefBuilder, dump_matrix
from .scheme import (
    GroupSpec,
    SchemeError,
    build_descriptor,
    build_triple_space,
    check_scheme_axioms,
    class_matrix,
    intersection_brute,
    intersection_closed,
    load_cayley_table,
)
from .structure import classify_case, decompose, semisimple_closed_form
from .talgebra import (
    UnsupportedCaseError,
    adjacency_matrix,
    closure_generate,
    corner_subalgebra,
    dual_idempotent,
    make_context,
    paper_basis,
    t0_basis,
)
from .verify import run_identities, run_predicates

DEFAULT_SEED = 20240816


@dataclasses.dataclass
class RunConfig:
    command: str
    p: Optional[int] = None
    n: Optional[int] = None
    group: Optional[str] = None
    basepoint: int = 0
    suite: str = "all"
    filter: Optional[str] = None
    emit: str = "json"
    dump: Optional[str] = None
    allow_large: bool = False
    corner: Optional[int] = None
    nmax: Optional[int] = None
    pset: Optional[str] = None
    nset: Optional[str] = None
    out: Optional[str] = None
    format: str = "csv"
    check_axioms: str = "sampled"
    seed: int = DEFAULT_SEED


def _jsonable(obj):
    """Recursively coerce report values into plain JSON types."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _emit_envelope(config: RunConfig, result: Dict, ok: bool,
                   duration_ms: int, text_lines: Optional[List[str]] = None) -> int:
    envelope = {
        "command": config.command,
        "config": _jsonable(dataclasses.asdict(config)),
        "result": _jsonable(result),
        "duration_ms": duration_ms,
        "pass": bool(ok),
    }
    if config.emit == "text" and text_lines is not None:
        for line in text_lines:
            print(line)
        print(f"pass: {ok}  ({duration_ms} ms)")
    else:
        print(json.dumps(envelope, sort_keys=True, indent=2))
    return 0 if ok else 1


def _resolve_group(spec_str: str) -> GroupSpec:
    if spec_str.startswith("ea2:"):
        return GroupSpec.elementary_abelian_2(int(spec_str[4:]))
    if spec_str.startswith("table:"):
        return load_cayley_table(spec_str[6:])
    raise SchemeError(f"unknown group spec {spec_str!r}; use ea2:<m> or table:<path>")


def _ea2_context(config: RunConfig):
    n = int(config.n)
    if n < 4 or n & (n - 1):
        raise UnsupportedCaseError(f"n = {n} is not a power of two >= 4")
    group = GroupSpec.elementary_abelian_2(n.bit_length() - 1)
    return make_context(group, config.p, config.basepoint)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_scheme(config: RunConfig) -> int:
    start = time.monotonic()
    group = _resolve_group(config.group)
    ts = build_triple_space(group)
    cls = class_matrix(ts)
    sd = build_descriptor(ts, cls)
    axioms = check_scheme_axioms(ts, config.check_axioms, seed=config.seed)
    tensor_ok = all(
        intersection_brute(ts, g, h, i, cls=cls) == intersection_closed(g, h, i, ts.n)
        for g in range(5) for h in range(5) for i in range(5)
    )
    ok = bool(axioms["pass"] and tensor_ok)
    result = {
        "n": ts.n,
        "size": ts.size,
        "valencies": list(sd.valencies),
        "tensor_matches_closed_form": tensor_ok,
        "axioms": axioms,
    }
    lines = [
        f"group of order {ts.n}, triple space size {ts.size}",
        f"valencies k = {list(sd.valencies)}",
        f"intersection tensor matches closed form: {tensor_ok}",
        f"axiom checks ({config.check_axioms}): {axioms['pass']}",
    ]
    return _emit_envelope(config, result, ok,
                          int(1000 * (time.monotonic() - start)), lines)


def cmd_algebra(config: RunConfig) -> int:
    start = time.monotonic()
    ctx = _ea2_context(config)
    t0 = t0_basis(ctx)
    alg = closure_generate(ctx, allow_large=config.allow_large)
    basis = paper_basis(ctx)
    builder = RrefBuilder(ctx.N * ctx.N, ctx.modulus, capacity=len(basis))
    for expr in basis:
        builder.insert(ctx.evaluate_array(expr).reshape(-1))
    basis_ok = builder.finish() == alg.span and builder.dim == len(basis)
    corner_dims = [
        corner_subalgebra(alg, dual_idempotent(ctx, a)).span.dim for a in range(5)
    ]
    if config.dump:
        os.makedirs(config.dump, exist_ok=True)
        for i in range(5):
            with open(os.path.join(config.dump, f"A{i}.txt"), "w") as fh:
                dump_matrix(adjacency_matrix(ctx, i), fh)
            with open(os.path.join(config.dump, f"E{i}.txt"), "w") as fh:
                dump_matrix(dual_idempotent(ctx, i), fh)
    result = {
        "p": ctx.p,
        "n": ctx.n,
        "basepoint": ctx.basepoint,
        "dim_T": alg.dim,
        "dim_T0": t0.dim,
        "corner_dims": corner_dims,
        "basis_ok": bool(basis_ok),
    }
    lines = [
        f"T(x) over GF({ctx.p}) for n = {ctx.n}, basepoint {ctx.basepoint}",
        f"dim T = {alg.dim}, dim T0 = {t0.dim}",
        f"corner dimensions: {corner_dims}",
        f"dual basis spans T exactly: {basis_ok}",
    ]
    return _emit_envelope(config, result, bool(basis_ok),
                          int(1000 * (time.monotonic() - start)), lines)


def cmd_verify(config: RunConfig) -> int:
    start = time.monotonic()
    ctx = _ea2_context(config)
    ids = [config.filter] if config.filter else None
    result: Dict = {"p": ctx.p, "n": ctx.n, "basepoint": ctx.basepoint}
    ok = True
    lines = [f"verification over GF({ctx.p}) at n = {ctx.n}"]
    if config.suite in ("identities", "all"):
        rep = run_identities(ctx, ids=ids)
        result["identities"] = rep
        ok = ok and rep["pass"]
        lines.append(f"identities: {rep['counts']}")
    if config.suite in ("predicates", "all"):
        rep = run_predicates(ctx, ids=ids)
        result["predicates"] = rep
        ok = ok and rep["pass"]
        lines.append(f"predicates: {rep['counts']}")
    for section in ("identities", "predicates"):
        for row in result.get(section, {}).get("results", []):
            if row["status"] == "fail":
                lines.append(f"  FAIL {row['id']}: {row['failures'][:3]}")
    return _emit_envelope(config, result, ok,
                          int(1000 * (time.monotonic() - start)), lines)


def cmd_decompose(config: RunConfig) -> int:
    start = time.monotonic()
    report = decompose(config.p, config.n, basepoint=config.basepoint,
                       allow_large=config.allow_large)
    ok = report["pass"]
    if config.corner is not None:
        result = {
            "p": report["p"],
            "n": report["n"],
            "case": report["case"],
            "corner": report["corners"][config.corner],
        }
        ok = bool(result["corner"]["pass"])
    else:
        result = report
    lines = [
        f"case {report['case']}: dim T = {report['dim_T']}, "
        f"dim Rad = {report['dim_rad']}, blocks {report['blocks']}",
        f"semisimple: {report['semisimple']} "
        f"(closed form: {report['semisimple_closed_form']})",
        f"certificate: {report['certificate']}"
        + ("  [partial]" if report["partial_certificate"] else ""),
    ]
    if config.corner is not None:
        lines.append(f"corner {config.corner}: {result['corner']}")
    return _emit_envelope(config, result, bool(ok),
                          int(1000 * (time.monotonic() - start)), lines)


def cmd_semisimple(config: RunConfig) -> int:
    start = time.monotonic()
    rows = []
    n = 4
    while n <= config.nmax:
        rows.append({
            "n": n,
            "case": classify_case(config.p, n).value,
            "semisimple": semisimple_closed_form(config.p, n),
        })
        n *= 2
    result = {"p": config.p, "rows": rows}
    lines = [f"semisimplicity of T over GF({config.p}) (closed form)",
             f"{'n':>6}  {'case':<4}  semisimple"]
    lines += [f"{r['n']:>6}  {r['case']:<4}  {r['semisimple']}" for r in rows]
    return _emit_envelope(config, result, True,
                          int(1000 * (time.monotonic() - start)), lines)


def _sweep_row(args) -> Dict:
    p, n, basepoint = args
    report = decompose(p, n, basepoint=basepoint)
    return {
        "p": p,
        "n": n,
        "case": report["case"],
        "dim_T": report["dim_T"],
        "dim_rad": report["dim_rad"],
        "blocks": report["blocks"],
        "semisimple": report["semisimple"],
        "pass": report["pass"],
    }


def cmd_sweep(config: RunConfig) -> int:
    start = time.monotonic()
    ps = [int(tok) for tok in config.pset.split(",")]
    ns = [int(tok) for tok in config.nset.split(",")]
    grid = [(p, n, config.basepoint) for p in ps for n in ns]
    workers = max(1, int(os.environ.get("TFORGE_THREADS", "1")))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=min(workers, len(grid))) as pool:
            rows = list(pool.map(_sweep_row, grid))
    else:
        rows = [_sweep_row(item) for item in grid]
    rows.sort(key=lambda r: (r["p"], r["n"]))
    ok = all(r["pass"] for r in rows)
    duration_ms = int(1000 * (time.monotonic() - start))
    if config.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["p", "n", "case", "dim_T", "dim_rad", "blocks", "semisimple"])
        for r in rows:
            writer.writerow([r["p"], r["n"], r["case"], r["dim_T"], r["dim_rad"],
                             json.dumps(r["blocks"]), r["semisimple"]])
        payload = buf.getvalue()
        if config.out:
            with open(config.out, "w") as fh:
                fh.write(payload)
            print(f"wrote {len(rows)} rows to {config.out}  pass: {ok}")
        else:
            sys.stdout.write(payload)
        return 0 if ok else 1
    result = {"rows": rows}
    if config.out:
        with open(config.out, "w") as fh:
            json.dump(_jsonable(result), fh, sort_keys=True, indent=2)
    return _emit_envelope(config, result, ok, duration_ms,
                          [f"{len(rows)} grid points, all certified: {ok}"])


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tforge",
        description="Exact GF(p) Terwilliger algebras of group triple schemes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("scheme", help="build the scheme and check its axioms")
    sp.add_argument("--group", required=True,
                    help="ea2:<m> for an elementary abelian 2-group, or table:<path>")
    sp.add_argument("--check-axioms", choices=("full", "sampled"), default="sampled")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--emit", choices=("json", "text"), default="json")

    ap = sub.add_parser("algebra", help="generate T(x) and audit its bases")
    ap.add_argument("--p", type=int, required=True)
    ap.add_argument("--n", type=int, required=True)
    ap.add_argument("--basepoint", type=int, default=0)
    ap.add_argument("--emit", choices=("json", "text"), default="json")
    ap.add_argument("--dump", metavar="DIR",
                    help="write A_i / E_i* matrix dumps into DIR")
    ap.add_argument("--allow-large", action="store_true")

    vp = sub.add_parser("verify", help="run the identity/predicate registries")
    vp.add_argument("--p", type=int, required=True)
    vp.add_argument("--n", type=int, required=True)
    vp.add_argument("--basepoint", type=int, default=0)
    vp.add_argument("--suite", choices=("identities", "predicates", "all"),
                    default="all")
    vp.add_argument("--filter", help="restrict to ids containing this token")
    vp.add_argument("--emit", choices=("json", "text"), default="json")

    dp = sub.add_parser("decompose", help="certify radical and Wedderburn blocks")
    dp.add_argument("--p", type=int, required=True)
    dp.add_argument("--n", type=int, required=True)
    dp.add_argument("--basepoint", type=int, default=0)
    dp.add_argument("--corner", type=int, choices=range(5),
                    help="report a single corner algebra")
    dp.add_argument("--emit", choices=("json", "text"), default="json")
    dp.add_argument("--allow-large", action="store_true")

    mp = sub.add_parser("semisimple", help="closed-form semisimplicity table")
    mp.add_argument("--p", type=int, required=True)
    mp.add_argument("--nmax", type=int, required=True)
    mp.add_argument("--emit", choices=("json", "text"), default="text")

    wp = sub.add_parser("sweep", help="decompose over a (p, n) grid")
    wp.add_argument("--pset", default="2,3,5,7", help="comma-separated primes")
    wp.add_argument("--nset", default="4,8,16", help="comma-separated orders")
    wp.add_argument("--basepoint", type=int, default=0)
    wp.add_argument("--format", choices=("csv", "json"), default="csv")
    wp.add_argument("--out", help="write rows to this file")

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    config = RunConfig(command=args.command)
    for field in dataclasses.fields(RunConfig):
        if hasattr(args, field.name):
            value = getattr(args, field.name)
            if value is not None:
                setattr(config, field.name, value)
    return config


def main(argv: Optional[List[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    config = _config_from_args(args)
    handler = {
        "scheme": cmd_scheme,
        "algebra": cmd_algebra,
        "verify": cmd_verify,
        "decompose": cmd_decompose,
        "semisimple": cmd_semisimple,
        "sweep": cmd_sweep,
    }[config.command]
    try:
        return handler(config)
    except (SchemeError, UnsupportedCaseError, OSError, ValueError) as exc:
        envelope = {
            "command": config.command,
            "config": _jsonable(dataclasses.asdict(config)),
            "error": {"stage": type(exc).__name__, "message": str(exc)},
            "pass": False,
        }
        print(json.dumps(envelope, sort_keys=True, indent=2))
        return 2


if __name__ == "__main__":
    sys.exit(main())
