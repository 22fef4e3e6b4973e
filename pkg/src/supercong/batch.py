"""Batch evaluation over prime ranges and report formatting."""
from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .congruences import SkippedPrime, load_database, verify_congruence
from .dsl import CongruenceSpec
from .exact import Valuation, is_prime
from .replay import CLASSICAL_KINDS, classical_check, replay_theorem
from .wz import check_wz_identity, wz_pairs

__all__ = ["MODES", "BatchConfig", "Report", "Row", "format_report", "run_batch"]

MODES = ("verify", "certify", "replay", "classics")
FORMATS = ("table", "csv", "json")
CSV_HEADER = ("id", "p", "holds", "observed_order", "modulus_exponent")


@dataclass(frozen=True)
class BatchConfig:
    mode: str = "verify"
    ids: Optional[Tuple[str, ...]] = None  # None means all
    primes: Tuple[int, int] = (3, 50)
    db: str = "builtin"
    fmt: str = "table"
    jobs: int = 1
    theorems: Tuple[int, ...] = (1, 2, 3)
    kinds: Tuple[str, ...] = CLASSICAL_KINDS
    gamma_p: bool = False

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.fmt not in FORMATS:
            raise ValueError(f"unknown format {self.fmt!r}")
        a, b = self.primes
        if a > b:
            raise ValueError(f"empty prime range {a}..{b}")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")


@dataclass
class Row:
    id: str
    p: Optional[int]
    holds: Optional[bool]  # None: skipped
    observed_order: Optional[Valuation]
    modulus_exponent: Optional[int]
    millis: float = 0.0
    detail: Dict[str, Any] = field(default_factory=dict)

    @property
    def status(self) -> str:
        if self.holds is None:
            return "skipped"
        return "pass" if self.holds else "fail"

    def key(self) -> Tuple[str, int]:
        return (self.id, -1 if self.p is None else self.p)


@dataclass
class Report:
    mode: str
    rows: List[Row]
    wall_time: float = 0.0

    @property
    def summary(self) -> Dict[str, int]:
        counts = {"pass": 0, "fail": 0, "skipped": 0}
        for r in self.rows:
            counts[r.status] += 1
        return counts

    @property
    def exit_code(self) -> int:
        return 1 if any(r.holds is False for r in self.rows) else 0


# --- tasks ----------------------------------------------------------------------
# Tasks are plain tuples so they pickle cheaply into worker processes.


def _verify_task(spec: CongruenceSpec, p: int, gamma: bool) -> Row:
    try:
        res = verify_congruence(spec, p, gamma_form=gamma)
    except SkippedPrime as exc:
        return Row(spec.id, p, None, None, spec.modulus_exponent, detail={"reason": str(exc)})
    detail = {"gamma_p": res.diagnostics} if res.diagnostics else {}
    return Row(spec.id, p, res.holds, res.observed_order, res.modulus_exponent, detail=detail)


def _certify_task(pair_id: str) -> Row:
    rep = check_wz_identity(wz_pairs()[pair_id])
    holds = rep.symbolic_identity_holds and rep.numeric_grid_ok
    detail = {
        "symbolic_identity_holds": rep.symbolic_identity_holds,
        "numeric_grid_ok": rep.numeric_grid_ok,
        "residual": str(rep.residual),
    }
    return Row(pair_id, None, holds, None, None, detail=detail)


def _replay_task(theorem: int, p: int) -> Row:
    rid = f"thm{theorem}"
    if p == 2:
        return Row(rid, p, None, None, None, detail={"reason": "odd primes only"})
    rep = replay_theorem(theorem, p)
    detail = {
        "boundary_ok": rep.boundary_ok,
        "chain_ok": rep.chain_ok,
        "tail_ok": rep.tail_ok,
        "closed_form_ok": rep.closed_form_ok,
        "final_term_order": rep.final_term_order,
        "direct": rep.direct,
    }
    return Row(rid, p, rep.overall, rep.conclusion_order, rep.modulus_exponent, detail=detail)


def _classics_task(kind: str, p: int) -> Row:
    if p == 2 or (p == 3 and kind not in ("wolstenholme", "morley")):
        return Row(kind, p, None, None, None, detail={"reason": "needs p >= 5"})
    res = classical_check(kind, p)
    return Row(kind, p, res.holds, res.observed_order, res.required)


def _run_task(task: tuple) -> Row:
    start = time.perf_counter()
    kind, *args = task
    row = {"verify": _verify_task, "certify": _certify_task,
           "replay": _replay_task, "classics": _classics_task}[kind](*args)
    row.millis = (time.perf_counter() - start) * 1000.0
    return row


def _primes(lo: int, hi: int) -> List[int]:
    return [p for p in range(max(lo, 2), hi + 1) if is_prime(p)]


def build_tasks(config: BatchConfig) -> List[tuple]:
    primes = _primes(*config.primes)
    if config.mode == "verify":
        db = load_database(config.db)
        known = {s.id for s in db}
        if config.ids is not None:
            missing = [i for i in config.ids if i not in known]
            if missing:
                raise KeyError(f"unknown congruence id(s): {', '.join(missing)}")
        chosen = [s for s in db if config.ids is None or s.id in config.ids]
        return [("verify", s, p, config.gamma_p) for s in chosen for p in primes]
    if config.mode == "certify":
        ids = config.ids if config.ids is not None else tuple(wz_pairs())
        missing = [i for i in ids if i not in wz_pairs()]
        if missing:
            raise KeyError(f"unknown WZ pair(s): {', '.join(missing)}")
        return [("certify", i) for i in ids]
    if config.mode == "replay":
        return [("replay", t, p) for t in config.theorems for p in primes]
    bad = [k for k in config.kinds if k not in CLASSICAL_KINDS]
    if bad:
        raise KeyError(f"unknown classical check(s): {', '.join(bad)}")
    return [("classics", k, p) for k in config.kinds for p in primes]


def run_batch(config: BatchConfig) -> Report:
    """Evaluate every task; rows come back sorted by (id, p) whatever ``jobs`` is."""
    start = time.perf_counter()
    tasks = build_tasks(config)
    if config.jobs == 1 or len(tasks) <= 1:
        rows = [_run_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            rows = list(pool.map(_run_task, tasks, chunksize=max(1, len(tasks) // (4 * config.jobs))))
    rows.sort(key=Row.key)
    return Report(config.mode, rows, time.perf_counter() - start)


# --- formatting -------------------------------------------------------------------


def _order_json(v: Optional[Valuation]):
    if v is None:
        return None
    return "exact" if v == math.inf else int(v)


def _order_text(v: Optional[Valuation]) -> str:
    v = _order_json(v)
    return "" if v is None else str(v)


def _holds_text(r: Row) -> str:
    return "skipped" if r.holds is None else str(r.holds).lower()


def _json_row(r: Row) -> Dict[str, Any]:
    out = {
        "id": r.id,
        "p": r.p,
        "holds": r.holds,
        "observed_order": _order_json(r.observed_order),
        "modulus_exponent": r.modulus_exponent,
        "status": r.status,
        "millis": round(r.millis, 3),
    }
    if r.detail:
        out["detail"] = _jsonable(r.detail)
    return out


def _jsonable(v):
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, float) and v == math.inf:
        return "exact"
    return v


def format_report(report: Report, fmt: str = "table") -> str:
    if fmt == "json":
        return "".join(json.dumps(_json_row(r), default=str) + "\n" for r in report.rows)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in report.rows:
            w.writerow([r.id, "" if r.p is None else r.p, _holds_text(r),
                        _order_text(r.observed_order),
                        "" if r.modulus_exponent is None else r.modulus_exponent])
        return buf.getvalue()
    if fmt != "table":
        raise ValueError(f"unknown format {fmt!r}")
    header = ("id", "p", "status", "order", "mod", "ms")
    body = [
        (r.id, "" if r.p is None else str(r.p), r.status, _order_text(r.observed_order),
         "" if r.modulus_exponent is None else f"p^{r.modulus_exponent}", f"{r.millis:.1f}")
        for r in report.rows
    ]
    widths = [max(len(row[i]) for row in [header, *body]) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in [header, *body]]
    s = report.summary
    lines.append(f"{len(report.rows)} rows: {s['pass']} pass, {s['fail']} fail, "
                 f"{s['skipped']} skipped ({report.wall_time:.2f}s)")
    return "\n".join(lines) + "\n"


def summary_line(report: Report) -> str:
    s = report.summary
    return f"{report.mode}: {s['pass']} pass, {s['fail']} fail, {s['skipped']} skipped in {report.wall_time:.2f}s"


def rows_equal_ignoring_time(a: Sequence[Row], b: Sequence[Row]) -> bool:
    strip = lambda rows: [(r.id, r.p, r.holds, r.observed_order, r.modulus_exponent, r.detail) for r in rows]
    return strip(a) == strip(b)
