"""Command-line front end.

Every command prints one JSON document (or CSV with ``--format csv``) and
exits with 0 on success, 2 on a failed precondition, 3 when a budget or
timeout runs out, 4 on unparsable input and 5 on I/O errors.

Examples::

    loomlab thresholds --k 5 --l 3
    loomlab barrier --k 3 --l 1 --n 8 --a 1 | loomlab hamilton --l 1
    loomlab experiment --suite barrier-sweep --seed 7 --out-dir runs
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import signal
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import BudgetExceeded, LoomError, NotFound, PreconditionFailed
from .hcore import Hypergraph, ParseError, complete, complete_bounded, from_dict, min_degree

SCHEMA = "loomlab/1"
DEFAULT_BUDGET = 10_000_000


# ---------------------------------------------------------------------------
# I/O helpers


def to_jsonable(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = sorted(x) if isinstance(x, (set, frozenset)) else x
        return [to_jsonable(v) for v in items]
    if hasattr(x, "to_dict"):
        return to_jsonable(x.to_dict())
    return x


def dumps(report: dict) -> str:
    return json.dumps(to_jsonable({"schema": SCHEMA, **report}), sort_keys=False)


def persist(report: dict | str, path: str | Path) -> None:
    """Atomic write: temp file in the target directory, then rename."""
    path = Path(path)
    text = report if isinstance(report, str) else dumps(report) + "\n"
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(rows: list[dict]) -> str:
    """CSV with a leading schema column."""
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=["schema", *rows[0]], lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({"schema": SCHEMA, **{k: to_jsonable(v) for k, v in r.items()}})
    return buf.getvalue()


def read_json(src: str | None) -> dict:
    if src in (None, "-"):
        text = sys.stdin.read()
    else:
        with open(src, encoding="utf-8") as fh:
            text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ParseError("top-level JSON value must be an object")
    return data


def read_graph(src: str | None) -> Hypergraph:
    data = read_json(src)
    if "graph" in data and "edges" not in data:
        data = data["graph"]
    return from_dict(data)


def tuple_arg(text: str | None) -> tuple:
    if text is None:
        return None
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ParseError(f"expected comma-separated integers, got {text!r}") from None


def budget(args) -> int:
    if getattr(args, "budget", None):
        return args.budget
    env = os.environ.get("LOOMLAB_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ParseError(f"LOOMLAB_BUDGET={env!r} is not an integer") from None
    return DEFAULT_BUDGET


# ---------------------------------------------------------------------------
# Commands


def cmd_thresholds(args):
    from .framework import thresholds
    t = thresholds(args.k, args.l)
    out = t.to_dict()
    if not t.applicable:
        out["reason"] = f"k-l={args.k - args.l} divides k={args.k}"
    return out


def cmd_degree(args):
    G = read_graph(args.graph)
    rep = min_degree(G, args.d, args.level)
    return {"d": rep.d, "min_deg": rep.min_deg, "ratio": rep.ratio, "argmin": list(rep.argmin)}


def cmd_components(args):
    from .cycwalk import components, spans
    G = read_graph(args.graph)
    comps = components(G.uniform_part(), args.l)
    return {"components": len(comps), "sizes": [len(c) for c in comps],
            "ell_connected": len(comps) == 1 and spans(comps[0], G.n)}


def cmd_cycle(args):
    from .cycwalk import build_cycle, build_path
    P = build_cycle(args.k, args.l, args.t) if args.cmd == "cycle" else build_path(args.k, args.l, args.t)
    return {"cyclepath": P.to_dict(), "edges": [list(w) for w in P.windows]}


def cmd_walk(args):
    from .cycwalk import walk_between
    G = read_graph(args.graph)
    seq = walk_between(G, tuple_arg(args.a), tuple_arg(args.b), args.l, args.max_len)
    return {"walk": list(seq), "edges": len(seq) // (G.k - args.l)}


def cmd_hamilton(args):
    from .framework import brute_hamilton
    G = read_graph(args.graph)
    mode = "path" if args.f1 else "cycle"
    P = brute_hamilton(G, args.l, mode, tuple_arg(args.f1), tuple_arg(args.f2), args.cap,
                       budget(args), loose_ends=args.loose_ends)
    if P is None:
        return {"found": False}
    return {"found": True, "verts": list(P.verts)}


def cmd_tiling(args):
    from .tiling import certificate_problems, frac_tiling, tiling_problems
    G = read_graph(args.graph)
    res = frac_tiling(G, args.l, args.max_verts, method=args.method, budget=budget(args))
    out = res.to_dict()
    if res.feasible:
        out["verified"] = not tiling_problems(G, args.l, res.tiling)
    elif res.y is not None:
        out["verified"] = not certificate_problems(G, args.l, res.y, res.max_verts)
    return out


def _cycle_from_args(args):
    from .cycwalk import build_cycle
    from .lattice import divisor_cycle
    if args.t is None:
        return divisor_cycle(args.k, args.l, budget(args), with_report=False).cycle
    return build_cycle(args.k, args.l, args.t)


def cmd_lattice(args):
    from .lattice import lattice_complete
    F = _cycle_from_args(args)
    G = read_graph(args.graph) if args.graph else complete(args.k, args.k)
    res = lattice_complete(F, G, budget(args))
    return {"F_order": F.order, **res.to_dict()}


def cmd_gcd(args):
    from .lattice import gcd_of
    F = read_graph(args.graph) if args.graph else _cycle_from_args(args)
    return gcd_of(F, budget(args)).to_dict()


def _blowup_from(data: dict):
    from .alloc import BlowupSpec
    R = from_dict(data["R"])
    if "clusters" in data:
        clusters = [list(c) for c in data["clusters"]]
    elif "sizes" in data:
        clusters, start = [], 0
        for s in data["sizes"]:
            clusters.append(list(range(start, start + s)))
            start += s
    else:
        raise ParseError("blow-up spec needs 'clusters' or 'sizes'")
    eta = data.get("eta")
    return BlowupSpec(R, clusters, data.get("exceptional"), data.get("m"),
                      None if eta is None else Fraction(eta))


def cmd_alloc_tiling(args):
    from .alloc import perfect_tiling_allocation, tiling_allocation_problems
    spec = _blowup_from(read_json(args.spec))
    res = perfect_tiling_allocation(spec, args.l, args.q if args.q is not None else "auto")
    return {"cycles": [list(c.verts) for c in res.cycles], "ledger": res.ledger,
            "valid": not tiling_allocation_problems(spec, args.l, res.cycles)}


def cmd_alloc_path(args):
    from .alloc import hamilton_path_allocation, path_allocation_problems
    spec = _blowup_from(read_json(args.spec))
    f1, f2 = tuple_arg(args.f1), tuple_arg(args.f2)
    res = hamilton_path_allocation(spec, args.l, f1, f2, args.q if args.q is not None else "auto")
    return {"path": list(res.path.verts), "ledger": res.ledger,
            "valid": not path_allocation_problems(spec, args.l, f1, f2, res.path)}


def cmd_assemble(args):
    from .alloc import CoverSpec, assemble_chain
    from .cycwalk import cyclepath_problems
    from .framework import planted_cover
    if args.planted:
        b, m1, m2 = tuple_arg(args.planted)
        G, cover = planted_cover(args.k, args.l, b, m1, m2, seed=args.seed)
    else:
        if not args.graph or not args.cover:
            raise PreconditionFailed("assemble needs --graph and --cover, or --planted b,m1,m2")
        G = read_graph(args.graph)
        cover = CoverSpec.from_dict(read_json(args.cover))
    res = assemble_chain(G, cover, args.l)
    return {"n": G.n, "cycle": list(res.cycle.verts), "trimmed": res.trimmed, "ledger": res.ledger,
            "valid": not cyclepath_problems(res.cycle, G) and res.cycle.order == G.n}


def cmd_framework(args):
    from . import framework as fw
    from .hcore import bounded_closure
    G = read_graph(args.graph)
    if args.close:
        G = bounded_closure(G, args.l)
    if args.op == "property":
        P = fw.property_graph(G, args.predicate, args.s, seed=args.seed)
        out = P.to_dict()
        if args.r:
            out["robustness"] = fw.robustness_degree(P, args.r).to_dict()
        return out
    if args.op == "del":
        return fw.del_q_closure(G, args.predicate, args.q).to_dict()
    if args.op == "hamcon":
        return fw.hamcon_check(G, args.l, strict=args.strict).to_dict()
    if args.op == "connectivity":
        return fw.connectivity_check(G, args.l, args.d).to_dict()
    if args.op == "check":
        # family: the graph itself; selector: identity
        return fw.check_framework([G], None, args.l).to_dict()
    raise PreconditionFailed(f"unknown framework operation {args.op!r}")


def cmd_barrier(args):
    from .framework import barrier_report, space_barrier
    G = space_barrier(args.k, args.l, args.n, args.a)
    return {**G.to_dict(), "report": barrier_report(args.k, args.l, args.n, args.a)}


def cmd_squash(args):
    from .squash import BlockPartition, closed_form, expectation_exact, squash, trial_rng
    H = read_graph(args.graph)
    if args.expect:
        return {"q": args.q, "expectation": expectation_exact(H, args.q), "closed_form": closed_form(H, args.q)}
    if args.blocks:
        data = json.loads(args.blocks)
        Q = BlockPartition(args.q, tuple(tuple(b) for b in data))
    else:
        Q = BlockPartition.random(H.n, args.q, trial_rng(args.seed, 0))
    S = squash(H, Q)
    return {"partition": Q.to_dict(), **S.to_dict()}


def cmd_experiment(args):
    from .experiments import SUITES, run_suite
    if args.suite not in SUITES:
        raise PreconditionFailed(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    rows, summary = run_suite(args.suite, args.seed, budget(args))
    stamp = time.strftime("%Y%m%dT%H%M%S", time.gmtime())
    run = Path(args.out_dir) / f"{stamp}-seed{args.seed}"
    run.mkdir(parents=True, exist_ok=True)
    config = {"suite": args.suite, "seed": args.seed, "budget": budget(args)}
    persist(csv_text(rows), run / "results.csv")
    persist({"timestamp": stamp, "config": config, "summary": summary}, run / "summary.json")
    return {"run_dir": str(run), "config": config, "summary": summary, "rows": len(rows)}


COMMANDS = {
    "thresholds": cmd_thresholds, "degree": cmd_degree, "components": cmd_components,
    "cycle": cmd_cycle, "path": cmd_cycle, "walk": cmd_walk, "hamilton": cmd_hamilton,
    "tiling": cmd_tiling, "lattice": cmd_lattice, "gcd": cmd_gcd, "alloc-path": cmd_alloc_path,
    "alloc-tiling": cmd_alloc_tiling, "assemble": cmd_assemble, "framework": cmd_framework,
    "barrier": cmd_barrier, "squash": cmd_squash, "experiment": cmd_experiment,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="loomlab", description="Hypergraph Hamilton cycle workbench")
    p.add_argument("--version", action="version", version=f"loomlab {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON report to this file (atomically)")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--budget", type=int, help="search budget (default: $LOOMLAB_BUDGET or 10^7)")
    common.add_argument("--timeout-ms", type=int, help="abort with exit 3 after this many milliseconds")
    common.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="cmd", required=True)

    def add(name, help_):
        return sub.add_parser(name, help=help_, parents=[common])

    s = add("thresholds", "threshold constants for (k, ℓ)")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--l", type=int, required=True)
    s = add("degree", "minimum d-degree of a graph")
    s.add_argument("--graph", default="-")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--level", type=int)
    s = add("components", "ℓ-components of a graph")
    s.add_argument("--graph", default="-")
    s.add_argument("--l", type=int, required=True)
    for name in ("cycle", "path"):
        s = add(name, f"canonical ℓ-{name} with t edges")
        s.add_argument("--k", type=int, required=True)
        s.add_argument("--l", type=int, required=True)
        s.add_argument("--t", type=int, required=True)
    s = add("walk", "closed ℓ-walk through two states")
    s.add_argument("--graph", default="-")
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--a", required=True, help="state, e.g. 0,1")
    s.add_argument("--b", required=True)
    s.add_argument("--max-len", type=int)
    s = add("hamilton", "exhaustive Hamilton ℓ-cycle / (f1,f2,ℓ)-path search")
    s.add_argument("--graph", default="-")
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--f1")
    s.add_argument("--f2")
    s.add_argument("--cap", type=int, default=24)
    s.add_argument("--loose-ends", action="store_true", help="paths may have meeting end edges")
    s = add("tiling", "perfect fractional ℓ-cycle tiling (exact LP)")
    s.add_argument("--graph", default="-")
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--max-verts", type=int)
    s.add_argument("--method", choices=["colgen", "enum"], default="colgen")
    for name in ("lattice", "gcd"):
        s = add(name, "lattice completeness" if name == "lattice" else "colour-class gcd")
        s.add_argument("--k", type=int, default=3)
        s.add_argument("--l", type=int, default=1)
        s.add_argument("--t", type=int, help="cycle edges (default: the divisor cycle)")
        s.add_argument("--graph", help="host graph (lattice) or graph to colour (gcd)")
    for name in ("alloc-path", "alloc-tiling"):
        what = "Hamilton (f1,f2,ℓ)-path" if name == "alloc-path" else "perfect ℓ-cycle tiling"
        s = add(name, f"{what} of a blow-up given by --spec JSON")
        s.add_argument("--spec", default="-")
        s.add_argument("--l", type=int, required=True)
        s.add_argument("--q", type=int)
        if name == "alloc-path":
            s.add_argument("--f1", required=True)
            s.add_argument("--f2", required=True)
    s = add("assemble", "Hamilton cycle from a cover")
    s.add_argument("--graph")
    s.add_argument("--cover")
    s.add_argument("--planted", help="b,m1,m2: generate a planted cover instead")
    s.add_argument("--k", type=int, default=3)
    s.add_argument("--l", type=int, default=1)
    s = add("framework", "property graphs, Del_q, framework and connectedness checks")
    s.add_argument("--op", choices=["property", "del", "check", "hamcon", "connectivity"], required=True)
    s.add_argument("--graph", default="-")
    s.add_argument("--predicate", default="true")
    s.add_argument("--s", type=int, default=5)
    s.add_argument("--r", type=int)
    s.add_argument("--q", type=int, default=1)
    s.add_argument("--l", type=int, default=1)
    s.add_argument("--d", type=int)
    s.add_argument("--strict", action="store_true", help="hamcon: end edges of paths must be disjoint")
    s.add_argument("--close", action="store_true", help="take the bounded closure of the input first")
    s = add("barrier", "space barrier graph")
    for f in ("k", "l", "n", "a"):
        s.add_argument(f"--{f}", type=int, required=True)
    s = add("squash", "squashed graph or exact expectation")
    s.add_argument("--graph", default="-")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--blocks", help="JSON list of blocks (default: random from --seed)")
    s.add_argument("--expect", action="store_true", help="exact expectation over all partitions")
    s = add("experiment", "run an experiment suite")
    s.add_argument("--suite", required=True)
    s.add_argument("--out-dir", default="runs")
    return p


def _on_alarm(signum, frame):
    raise BudgetExceeded("timeout")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.timeout_ms:
            signal.signal(signal.SIGALRM, _on_alarm)
            signal.setitimer(signal.ITIMER_REAL, args.timeout_ms / 1000)
        report = COMMANDS[args.cmd](args)
        if args.format == "csv":
            rows = report if isinstance(report, list) else [{k: v for k, v in report.items()
                                                             if not isinstance(v, (list, dict))}]
            text = csv_text(rows)
        else:
            text = dumps(report) + "\n"
        if args.out:
            persist(text, args.out)
        else:
            sys.stdout.write(text)
        return 0
    except ParseError as exc:
        return _fail(4, "parse", exc)
    except BudgetExceeded as exc:
        return _fail(3, "budget", exc)
    except (PreconditionFailed, NotFound) as exc:
        return _fail(2, "precondition", exc)
    except OSError as exc:
        return _fail(5, "io", exc)
    except LoomError as exc:
        return _fail(2, "error", exc)
    finally:
        if args.timeout_ms:
            signal.setitimer(signal.ITIMER_REAL, 0)


def _fail(code: int, kind: str, exc: Exception) -> int:
    sys.stderr.write(json.dumps({"schema": SCHEMA, "error": kind, "message": str(exc)}) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
