"""Solution verification, solve campaigns, and competition-style scoring.

Scoring reproduces the published ranking arithmetic: a solver's score is
the number of instances it *proves* (SAT/UNSAT for CSP, optimality for
COP), percentages are integer round-half-up against the instance count and
the virtual best solver, and COP tables also carry the best-known-bound
tally."""

from __future__ import annotations

import csv
import shlex
import subprocess
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    DuplicateRecordError,
    ProtocolViolationError,
    SpawnFailureError,
    UnknownModeError,
    XcspError,
)
from .io import parse_instance, parse_solution
from .model import Assignment, Instance, assignment_cost, constraint_satisfied

PROVED_CSP = ("SAT", "UNSAT")
STATUSES = ("SAT", "UNSAT", "OPTIMUM", "UNKNOWN", "INVALID")


@dataclass(frozen=True)
class RunRecord:
    instance_id: str
    solver_id: str
    status: str
    bound: int | None
    elapsed: float


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    code: str  # VALID | Incomplete | OutOfDomain | ConstraintViolated | CostMismatch
    detail: str = ""

    def __str__(self) -> str:
        return "VALID" if self.ok else f"{self.code}: {self.detail}"


def verify(instance: Instance, assignment: Assignment, claimed_bound: int | None = None) -> VerifyResult:
    """Ground-truth check of a claimed solution; reports the first failure."""
    bindings = assignment.bindings
    for v in instance.variables:
        if v.id not in bindings:
            return VerifyResult(False, "Incomplete", f"variable {v.id!r} is unbound")
        if bindings[v.id] not in v.domain:
            return VerifyResult(False, "OutOfDomain", f"variable {v.id!r} = {bindings[v.id]} outside its domain")
    for idx, c in enumerate(instance.constraints):
        if not constraint_satisfied(c, assignment):
            return VerifyResult(False, "ConstraintViolated", f"constraint {idx} is violated")
    if instance.kind == "COP" and claimed_bound is not None:
        cost = assignment_cost(instance, assignment)
        if cost != claimed_bound:
            return VerifyResult(False, "CostMismatch", f"objective is {cost}, claimed {claimed_bound}")
    return VerifyResult(True, "VALID")


# ---------------------------------------------------------------------------
# Scoring


@dataclass(frozen=True)
class RankingRow:
    solver_id: str
    solved_count: int
    sat_count: int | None = None
    unsat_count: int | None = None
    opt_count: int | None = None
    best_known_count: int | None = None
    pct_instances: int = 0
    pct_vbs: int = 0


def _pct(numerator: int, denominator: int) -> int:
    """Integer percentage, round half up."""
    if denominator <= 0:
        return 0
    return (200 * numerator + denominator) // (2 * denominator)


def score_track(
    records,
    n_instances: int,
    mode: str,
    rank_by_best: bool = False,
    senses: dict[str, str] | None = None,
) -> tuple[list[RankingRow], RankingRow]:
    """Rank solvers from run records.

    Returns (rows sorted best-first, virtual-best-solver row). ``senses``
    maps instance id to "minimize"/"maximize" for bound comparison on COP
    tracks (minimize assumed when absent)."""
    mode = mode.upper()
    if mode not in ("CSP", "COP"):
        raise UnknownModeError(f"mode must be CSP or COP, got {mode!r}")
    seen = set()
    solvers: dict[str, list[RunRecord]] = {}
    for r in records:
        pair = (r.solver_id, r.instance_id)
        if pair in seen:
            raise DuplicateRecordError(f"two records for solver {r.solver_id!r} on {r.instance_id!r}")
        seen.add(pair)
        solvers.setdefault(r.solver_id, []).append(r)

    def proved(r: RunRecord) -> bool:
        if mode == "CSP":
            return r.status in PROVED_CSP
        return r.status == "OPTIMUM"

    vbs_proved: set[str] = set()
    vbs_sat: set[str] = set()
    vbs_unsat: set[str] = set()
    for recs in solvers.values():
        for r in recs:
            if proved(r):
                vbs_proved.add(r.instance_id)
                if r.status == "SAT":
                    vbs_sat.add(r.instance_id)
                elif r.status == "UNSAT":
                    vbs_unsat.add(r.instance_id)
    vbs_count = len(vbs_proved)

    best_bound: dict[str, int] = {}
    instances_with_bound: set[str] = set()
    if mode == "COP":
        for recs in solvers.values():
            for r in recs:
                if r.bound is None or r.status not in ("SAT", "OPTIMUM"):
                    continue
                instances_with_bound.add(r.instance_id)
                sense = (senses or {}).get(r.instance_id, "minimize")
                cur = best_bound.get(r.instance_id)
                if cur is None or (r.bound < cur if sense == "minimize" else r.bound > cur):
                    best_bound[r.instance_id] = r.bound
    vbs_best = len(instances_with_bound)

    rows = []
    elapsed_totals = {}
    for solver_id, recs in sorted(solvers.items()):
        solved = sum(1 for r in recs if proved(r))
        elapsed_totals[solver_id] = sum(r.elapsed for r in recs)
        if mode == "CSP":
            row = RankingRow(
                solver_id,
                solved,
                sat_count=sum(1 for r in recs if r.status == "SAT"),
                unsat_count=sum(1 for r in recs if r.status == "UNSAT"),
                pct_instances=_pct(solved, n_instances),
                pct_vbs=_pct(solved, vbs_count),
            )
        else:
            best_known = sum(
                1
                for r in recs
                if r.bound is not None
                and r.status in ("SAT", "OPTIMUM")
                and r.bound == best_bound.get(r.instance_id)
            )
            score = best_known if rank_by_best else solved
            denominator = vbs_best if rank_by_best else vbs_count
            row = RankingRow(
                solver_id,
                solved,
                opt_count=solved,
                best_known_count=best_known,
                pct_instances=_pct(score, n_instances),
                pct_vbs=_pct(score, denominator),
            )
        rows.append(row)

    def sort_key(row: RankingRow):
        score = row.best_known_count if rank_by_best else row.solved_count
        return (-score, elapsed_totals[row.solver_id], row.solver_id)

    rows.sort(key=sort_key)
    if mode == "CSP":
        vbs = RankingRow(
            "VBS",
            vbs_count,
            sat_count=len(vbs_sat),
            unsat_count=len(vbs_unsat),
            pct_instances=_pct(vbs_count, n_instances),
            pct_vbs=100 if vbs_count else 0,
        )
    else:
        score = vbs_best if rank_by_best else vbs_count
        vbs = RankingRow(
            "VBS",
            vbs_count,
            opt_count=vbs_count,
            best_known_count=vbs_best,
            pct_instances=_pct(score, n_instances),
            pct_vbs=100 if score else 0,
        )
    return rows, vbs


def render_ranking(rows, vbs: RankingRow, mode: str, fmt: str = "text", rank_by_best: bool = False) -> str:
    mode = mode.upper()
    if fmt == "csv":
        out = ["rank,solver,solved,sat,unsat,opt,best,pct_instances,pct_vbs"]
        for rank, row in enumerate([vbs] + list(rows)):
            out.append(
                ",".join(
                    [
                        "VBS" if row.solver_id == "VBS" else str(rank),
                        row.solver_id,
                        str(row.solved_count),
                        "" if row.sat_count is None else str(row.sat_count),
                        "" if row.unsat_count is None else str(row.unsat_count),
                        "" if row.opt_count is None else str(row.opt_count),
                        "" if row.best_known_count is None else str(row.best_known_count),
                        str(row.pct_instances),
                        str(row.pct_vbs),
                    ]
                )
            )
        return "\n".join(out) + "\n"

    def detail(row: RankingRow) -> str:
        if mode == "CSP":
            return f"{row.sat_count} SAT, {row.unsat_count} UNSAT"
        if rank_by_best:
            return f"{row.best_known_count} best"
        return f"{row.opt_count} OPT ({row.best_known_count} best)"

    vbs_label = "Virtual Best Solver (VBS)"
    names = [vbs_label] + [r.solver_id for r in rows]
    width = max(len(n) for n in names) + 2
    detail_width = max(22, max(len(detail(r)) for r in [vbs] + list(rows)) + 2)
    header = f"{'':>4} {'solver':<{width}} {'#solved':>8} {'':<{detail_width}} {'%inst.':>7} {'%VBS':>6}"
    lines = [header, "-" * len(header)]
    lines.append(
        f"{'':>4} {vbs_label:<{width}} {vbs.solved_count:>8} {detail(vbs):<{detail_width}} "
        f"{vbs.pct_instances:>6}% {vbs.pct_vbs:>5}%"
    )
    for rank, row in enumerate(rows, start=1):
        lines.append(
            f"{rank:>4} {row.solver_id:<{width}} {row.solved_count:>8} {detail(row):<{detail_width}} "
            f"{row.pct_instances:>6}% {row.pct_vbs:>5}%"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Campaigns


def parse_solver_output(text: str):
    """Parse the line protocol; returns (status, bound, v_payload)."""
    status = None
    bound = None
    payload = None
    for raw in text.splitlines():
        line = raw.rstrip()
        if not line:
            continue
        tag = line.split(None, 1)[0]
        if tag == "c":
            continue
        if tag == "o":
            parts = line.split()
            if len(parts) != 2 or not _is_int(parts[1]):
                raise ProtocolViolationError(line)
            bound = int(parts[1])
        elif tag == "s":
            claim = line[1:].strip()
            mapping = {
                "SATISFIABLE": "SAT",
                "UNSATISFIABLE": "UNSAT",
                "OPTIMUM FOUND": "OPTIMUM",
                "UNKNOWN": "UNKNOWN",
            }
            if claim not in mapping or status is not None:
                raise ProtocolViolationError(line)
            status = mapping[claim]
        elif tag == "v":
            payload = line[1:].strip()
        else:
            raise ProtocolViolationError(line)
    return status or "UNKNOWN", bound, payload


def _is_int(token: str) -> bool:
    return token.lstrip("+-").isdigit()


def run_one(instance_path: str, solver_id: str, command_template: str, time_limit: float) -> RunRecord:
    """Run a solver on one instance and verify its claims."""
    instance_id = Path(instance_path).stem
    command = shlex.split(command_template.format(instance=instance_path))
    start = time.perf_counter()
    try:
        proc = subprocess.run(
            command,
            capture_output=True,
            text=True,
            timeout=time_limit,
        )
    except subprocess.TimeoutExpired:
        return RunRecord(instance_id, solver_id, "UNKNOWN", None, time_limit)
    except OSError as exc:
        raise SpawnFailureError(f"cannot run {command[0]!r}: {exc}") from None
    elapsed = time.perf_counter() - start
    status, bound, payload = parse_solver_output(proc.stdout)
    if status in ("SAT", "OPTIMUM"):
        status, bound = _verify_claim(instance_path, status, bound, payload)
    return RunRecord(instance_id, solver_id, status, bound, elapsed)


def _verify_claim(instance_path: str, status: str, bound, payload):
    if payload is None:
        return "INVALID", None
    try:
        instance = parse_instance(Path(instance_path).read_text())
        assignment = parse_solution(payload)
    except XcspError:
        return "INVALID", None
    claimed = bound if (status == "OPTIMUM" or instance.kind == "COP") else None
    result = verify(instance, assignment, claimed)
    if not result.ok:
        return "INVALID", None
    return status, bound


def run_campaign(
    instance_dir: str,
    solver_id: str,
    command_template: str,
    time_limit: float,
    jobs: int = 1,
    csv_path: str | None = None,
) -> list[RunRecord]:
    """Run one solver over every ``*.xml`` instance in a directory.

    Claims of SAT/OPTIMUM are re-verified against the instance and demoted
    to INVALID on failure; a solver that exceeds the wall clock gets
    UNKNOWN with elapsed = time_limit."""
    paths = sorted(str(p) for p in Path(instance_dir).glob("*.xml"))
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        records = list(pool.map(lambda p: run_one(p, solver_id, command_template, time_limit), paths))
    if csv_path is not None:
        write_records_csv(records, csv_path)
    return records


def write_records_csv(records, path) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["instance", "solver", "status", "bound", "elapsed_s"])
        for r in records:
            writer.writerow(
                [
                    r.instance_id,
                    r.solver_id,
                    r.status,
                    "" if r.bound is None else r.bound,
                    f"{r.elapsed:.3f}",
                ]
            )


def read_records_csv(path) -> list[RunRecord]:
    records = []
    with open(path, newline="") as handle:
        for row in csv.DictReader(handle):
            records.append(
                RunRecord(
                    row["instance"],
                    row["solver"],
                    row["status"],
                    int(row["bound"]) if row["bound"] else None,
                    float(row["elapsed_s"]),
                )
            )
    return records
