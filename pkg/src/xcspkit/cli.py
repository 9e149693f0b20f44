"""Command-line entry point: solve, generate, verify, rank.

Exit codes follow the competition convention on ``solve``: 10 SAT,
20 UNSAT, 30 OPTIMUM, 0 UNKNOWN, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .engine import SearchConfig, enumerate_all, optimize, solve
from .errors import XcspError
from .generators import PROBLEMS, ProblemData, build, canonical_problem_id
from .harness import read_records_csv, render_ranking, score_track, verify
from .io import parse_instance, parse_solution, write_instance, write_solution

EXIT_CODES = {"SAT": 10, "UNSAT": 20, "OPTIMUM": 30, "UNKNOWN": 0}


def _log_level() -> str:
    level = os.environ.get("XCSP_MINI_LOG", "info").lower()
    return level if level in ("debug", "info", "quiet") else "info"


def _comment(text: str, minimum: str = "info") -> None:
    level = _log_level()
    order = {"quiet": 0, "info": 1, "debug": 2}
    if order[level] >= order[minimum]:
        print(f"c {text}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xcspkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve an XCSP3 instance")
    p_solve.add_argument("instance", help="instance XML file")
    p_solve.add_argument("--timeout", type=float, default=2400.0, help="wall-clock limit in seconds")
    p_solve.add_argument("--seed", type=int, default=0)
    p_solve.add_argument("--restarts", action="store_true", help="enable geometric restarts")
    p_solve.add_argument("--heuristic", choices=("dom-wdeg", "lex"), default="dom-wdeg")
    p_solve.add_argument("--all", action="store_true", help="count all solutions (CSP only)")

    p_gen = sub.add_parser("generate", help="generate a benchmark instance")
    p_gen.add_argument("problem", help=f"one of: {', '.join(sorted(PROBLEMS))}")
    p_gen.add_argument("--data", help="JSON data file")
    p_gen.add_argument("--param", action="append", default=[], metavar="K=V", help="scalar parameter")
    p_gen.add_argument("--variant", help="model variant where the problem has several")
    p_gen.add_argument("--no-tags", default="", metavar="TAGS", help="drop tagged blocks, e.g. sym,red")
    p_gen.add_argument("--nodv", action="store_true", help="omit the decision-variable annotation")
    p_gen.add_argument("-o", "--output", help="output file (stdout when absent)")

    p_verify = sub.add_parser("verify", help="verify a claimed solution")
    p_verify.add_argument("instance")
    p_verify.add_argument("solution", help="instantiation fragment XML file")
    p_verify.add_argument("--bound", type=int, help="claimed objective value")

    p_rank = sub.add_parser("rank", help="score a results CSV")
    p_rank.add_argument("results", help="CSV produced by a campaign")
    p_rank.add_argument("--mode", choices=("csp", "cop"), required=True)
    p_rank.add_argument("--n-instances", type=int, help="track size (defaults to distinct instances)")
    p_rank.add_argument("--format", choices=("text", "csv"), default="text")
    p_rank.add_argument("--by-best", action="store_true", help="rank by best-known bounds (fast COP)")
    return parser


def _cmd_solve(args) -> int:
    instance = parse_instance(Path(args.instance).read_text())
    config = SearchConfig(
        time_limit=args.timeout,
        seed=args.seed,
        restarts=args.restarts,
        var_heuristic=args.heuristic,
    )
    _comment(f"instance {args.instance}: {len(instance.variables)} variables, "
             f"{len(instance.constraints)} constraints, kind {instance.kind}")
    if args.all:
        if instance.kind != "CSP":
            print("error: --all applies to CSP instances only", file=sys.stderr)
            return 2
        result = enumerate_all(instance, config=config)
        _comment(f"{result.count} solution(s), exact={result.exact}")
        if result.count == 0:
            print("s UNSATISFIABLE")
            return EXIT_CODES["UNSAT"]
        witness_out = solve(instance, config)
        print("s SATISFIABLE")
        if witness_out.witness is not None:
            print(f"v {write_solution(witness_out.witness)}")
        return EXIT_CODES["SAT"]
    if instance.kind == "CSP":
        out = solve(instance, config)
    else:
        out = optimize(instance, config, on_bound=lambda cost: print(f"o {cost}", flush=True))
    _comment(
        f"nodes {out.stats.nodes}, failures {out.stats.failures}, "
        f"propagations {out.stats.propagations}, elapsed {out.stats.elapsed:.3f}s",
        minimum="debug",
    )
    if out.status == "SAT" and instance.kind == "CSP":
        print("s SATISFIABLE")
    elif out.status == "SAT":
        print("s SATISFIABLE")  # timed-out COP with an incumbent
    elif out.status == "UNSAT":
        print("s UNSATISFIABLE")
    elif out.status == "OPTIMUM":
        print("s OPTIMUM FOUND")
    else:
        print("s UNKNOWN")
    if out.witness is not None and out.status in ("SAT", "OPTIMUM"):
        print(f"v {write_solution(out.witness)}")
    return EXIT_CODES[out.status]


def _parse_params(pairs) -> dict:
    payload = {}
    for pair in pairs:
        if "=" not in pair:
            raise XcspError(f"bad --param {pair!r}, expected K=V")
        key, _, value = pair.partition("=")
        try:
            payload[key] = int(value)
        except ValueError:
            raise XcspError(f"--param {key} must be an integer, got {value!r}") from None
    return payload


def _cmd_generate(args) -> int:
    problem = canonical_problem_id(args.problem)
    if args.data:
        payload = json.loads(Path(args.data).read_text())
        payload.update(_parse_params(args.param))
    else:
        payload = _parse_params(args.param)
    drop = tuple(t for t in args.no_tags.split(",") if t)
    data = ProblemData(problem, payload, args.variant)
    instance = build(data, drop_tags=drop, decision_vars=not args.nodv)
    text = write_instance(instance)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_verify(args) -> int:
    instance = parse_instance(Path(args.instance).read_text())
    assignment = parse_solution(Path(args.solution).read_text())
    result = verify(instance, assignment, args.bound)
    print(str(result))
    return 0 if result.ok else 1


def _cmd_rank(args) -> int:
    records = read_records_csv(args.results)
    n_instances = args.n_instances or len({r.instance_id for r in records})
    rows, vbs = score_track(records, n_instances, args.mode.upper(), rank_by_best=args.by_best)
    sys.stdout.write(render_ranking(rows, vbs, args.mode.upper(), fmt=args.format, rank_by_best=args.by_best))
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "solve": _cmd_solve,
        "generate": _cmd_generate,
        "verify": _cmd_verify,
        "rank": _cmd_rank,
    }
    try:
        return handlers[args.command](args)
    except XcspError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
