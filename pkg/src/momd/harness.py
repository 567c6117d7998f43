"""Batch experiment runner: partitions OD pairs over workers and writes result/log files.

Result files are CSV with a header and eight fields per OD pair:
``origin,destination,status,hops,expansions,time,distance,path``. ``time``
is integer microseconds and ``path`` joins vertex ids with hyphens, starting
at the chosen true origin and ending at the chosen true destination. A
``.meta.csv`` sidecar records region sizes and search counts per pair.
"""

from __future__ import annotations

import csv
import logging
import math
import re
import threading
import time
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from momd.errors import ConfigInvalid, MismatchedInputs, MomdError
from momd.graph import Graph
from momd.ingest import read_compact, read_od
from momd.search import DEGENERATE, ERROR, FOUND, UNREACHABLE, SearchResult
from momd.strategy import BRUTE_FORCE, COLLAPSE, MomdQuery, MomdResult, run_brute_force, run_collapse, summarize_errors

log = logging.getLogger(__name__)

RESULT_FIELDS = ("origin", "destination", "status", "hops", "expansions", "time", "distance", "path")
META_FIELDS = ("origin", "destination", "searches_executed", "origin_size", "destination_size")
STATUS_LABELS = {FOUND: "Found", UNREACHABLE: "Unreachable", DEGENERATE: "Degenerate", ERROR: "Error"}

STRATEGIES = {COLLAPSE: run_collapse, BRUTE_FORCE: run_brute_force}


def partition_work(total: int, workers: int) -> list[int]:
    """Equal shares per worker, with the remainder going to the last one."""
    if total < 0 or workers < 1:
        raise ConfigInvalid("total must be >= 0 and workers >= 1")
    share = total // workers
    counts = [share] * workers
    counts[-1] += total - share * workers
    return counts


def slices(items: Sequence, workers: int) -> list[Sequence]:
    out, start = [], 0
    for c in partition_work(len(items), workers):
        out.append(items[start:start + c])
        start += c
    return out


@dataclass(frozen=True)
class ExperimentConfig:
    graph_path: Path
    od_path: Path
    output_dir: Path
    radii: tuple[float, ...]
    strategy: str = "both"
    workers: int = 1
    rng_seed: int = 0
    limit: int | None = None
    private_graphs: bool = False

    def __post_init__(self) -> None:
        if self.strategy not in (COLLAPSE, BRUTE_FORCE, "both"):
            raise ConfigInvalid(f"unknown strategy {self.strategy!r}")
        if self.workers < 1:
            raise ConfigInvalid("workers must be >= 1")
        if not self.radii:
            raise ConfigInvalid("at least one radius is required")
        if any(not math.isfinite(r) or r < 0 for r in self.radii):
            raise ConfigInvalid("radii must be finite and non-negative")
        if self.limit is not None and self.limit < 1:
            raise ConfigInvalid("limit must be >= 1")

    @property
    def strategies(self) -> tuple[str, ...]:
        return (COLLAPSE, BRUTE_FORCE) if self.strategy == "both" else (self.strategy,)


class RunLog:
    """Append-only run log; state and progress never move backwards."""

    STARTED, RUNNING, ERROR, FINISHED = "Started", "Running", "Error", "Finished"
    _RANK = {STARTED: 0, RUNNING: 1, ERROR: 2, FINISHED: 2}

    def __init__(self, path: Path | None, total: int) -> None:
        self.path = path
        self.total = total
        self.progress = 0
        self.state: str | None = None
        self.entries: list[str] = []
        self._t0 = time.monotonic()
        self._lock = threading.Lock()
        self._fh = open(path, "w", encoding="utf-8", newline="\n") if path else None

    def _write(self, message: str) -> None:
        stamp = datetime.now(timezone.utc).isoformat(timespec="milliseconds")
        line = (
            f"{stamp} state={self.state} progress={self.progress}/{self.total} "
            f"duration={time.monotonic() - self._t0:.3f}s {message}".rstrip()
        )
        self.entries.append(line)
        if self._fh:
            self._fh.write(line + "\n")
            self._fh.flush()

    def set_state(self, state: str, message: str = "") -> None:
        with self._lock:
            if self.state is not None and self._RANK[state] < self._RANK[self.state]:
                raise ValueError(f"cannot move from {self.state} to {state}")
            if self.state in (self.ERROR, self.FINISHED):
                raise ValueError(f"run already ended in {self.state}")
            self.state = state
            self._write(message)

    def advance(self, n: int, message: str = "") -> None:
        with self._lock:
            self.progress = min(self.total, self.progress + n)
            self._write(message)

    def note(self, message: str) -> None:
        with self._lock:
            self._write(message)

    def close(self) -> None:
        if self._fh:
            self._fh.close()
            self._fh = None


def _fmt_float(x: float) -> str:
    return repr(float(x)) if math.isfinite(x) else ""


def result_row(r: MomdResult) -> list[str]:
    s = r.search
    return [
        str(r.query.origin_seed),
        str(r.query.destination_seed),
        STATUS_LABELS.get(s.status, "Error"),
        str(s.hops),
        str(s.expansions),
        str(int(round(s.elapsed * 1e6))),
        _fmt_float(s.distance),
        "-".join(map(str, s.path)),
    ]


def meta_row(r: MomdResult) -> list[str]:
    return [
        str(r.query.origin_seed),
        str(r.query.destination_seed),
        str(r.searches_executed),
        str(r.origin_size),
        str(r.destination_size),
    ]


def _safe_run(strategy: str, g: Graph, q: MomdQuery) -> MomdResult:
    try:
        return STRATEGIES[strategy](g, q)
    except MomdError as exc:
        log.warning("query %s failed: %s", q, exc)
        return MomdResult(strategy, q, SearchResult(ERROR), 0, 0, 0)


def radius_tag(radius: float) -> str:
    return f"r{radius:g}"


@dataclass
class ExperimentOutcome:
    result_files: dict[tuple[str, float], Path] = field(default_factory=dict)
    total_elapsed: dict[tuple[str, float], float] = field(default_factory=dict)
    log_path: Path | None = None


def run_queries(
    g: Graph,
    pairs: Sequence[tuple[int, int]],
    radius: float,
    strategy: str,
    workers: int = 1,
    *,
    private_graphs: bool = False,
    runlog: RunLog | None = None,
) -> list[MomdResult]:
    """Run one strategy over ``pairs``, split into contiguous per-worker slices, in input order."""
    parts = slices(list(pairs), workers)
    step = max(1, len(pairs) // 20)

    def work(part: Sequence[tuple[int, int]]) -> list[MomdResult]:
        graph = g.copy() if private_graphs else g
        out, pending = [], 0
        for o, d in part:
            out.append(_safe_run(strategy, graph, MomdQuery(o, d, radius)))
            pending += 1
            if runlog is not None and pending >= step:
                runlog.advance(pending, f"{strategy} {radius_tag(radius)}")
                pending = 0
        if runlog is not None and pending:
            runlog.advance(pending, f"{strategy} {radius_tag(radius)}")
        return out

    if workers == 1:
        chunks = [work(parts[0])]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(work, parts))
    return [r for chunk in chunks for r in chunk]


def write_results(results: Sequence[MomdResult], path: Path) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RESULT_FIELDS)
        w.writerows(result_row(r) for r in results)
    with open(meta_path(path), "w", encoding="ascii", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(META_FIELDS)
        w.writerows(meta_row(r) for r in results)


def meta_path(result_path: Path) -> Path:
    result_path = Path(result_path)
    return result_path.with_name(result_path.stem + ".meta.csv")


def run_experiment(cfg: ExperimentConfig, graph: Graph | None = None) -> ExperimentOutcome:
    """Run every strategy at every radius over the OD file; one result file per combination."""
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    g = graph if graph is not None else read_compact(cfg.graph_path)
    pairs = read_od(cfg.od_path, cfg.limit)
    for o, d in pairs:
        if o not in g or d not in g:
            raise ConfigInvalid(f"OD pair ({o}, {d}) references a vertex missing from the graph")
    outcome = ExperimentOutcome(log_path=out_dir / "run.log")
    runlog = RunLog(outcome.log_path, total=len(pairs) * len(cfg.radii) * len(cfg.strategies))
    runlog.set_state(
        RunLog.STARTED,
        f"graph={cfg.graph_path} pairs={len(pairs)} radii={list(cfg.radii)} "
        f"workers={cfg.workers} seed={cfg.rng_seed}",
    )
    try:
        runlog.set_state(RunLog.RUNNING)
        for radius in cfg.radii:
            for strategy in cfg.strategies:
                results = run_queries(
                    g, pairs, radius, strategy, cfg.workers,
                    private_graphs=cfg.private_graphs, runlog=runlog,
                )
                path = out_dir / f"{strategy}_{radius_tag(radius)}.csv"
                write_results(results, path)
                key = (strategy, radius)
                outcome.result_files[key] = path
                outcome.total_elapsed[key] = sum(r.search.elapsed for r in results)
                failed = sum(r.search.status == ERROR for r in results)
                runlog.note(
                    f"wrote {path.name} total_search_time={outcome.total_elapsed[key]:.3f}s errors={failed}"
                )
    except Exception as exc:
        runlog.set_state(RunLog.ERROR, f"{type(exc).__name__}: {exc}")
        runlog.close()
        raise
    runlog.set_state(RunLog.FINISHED)
    runlog.close()
    return outcome


# --------------------------------------------------------------------- analysis


def read_results(path: Path) -> list[dict[str, str]]:
    with open(path, encoding="ascii", newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != RESULT_FIELDS:
            raise MismatchedInputs(f"{path}: unexpected header {reader.fieldnames}")
        return list(reader)


def _read_meta(path: Path) -> list[dict[str, str]] | None:
    mp = meta_path(path)
    if not mp.exists():
        return None
    with open(mp, encoding="ascii", newline="") as fh:
        return list(csv.DictReader(fh))


SUMMARY_FIELDS = (
    "radius",
    "n_queries",
    "excluded",
    "collapse_total_time_s",
    "brute_force_total_time_s",
    "collapse_log10_total_time",
    "brute_force_log10_total_time",
    "collapse_total_expansions",
    "brute_force_total_expansions",
    "collapse_searches",
    "brute_force_searches",
    "total_collapsed_nodes",
    "accuracy",
    "max_error",
    "mean_error_all",
    "mean_error_nonoptimal",
)

PANELS = {
    "time.csv": ("collapse_total_time_s", "brute_force_total_time_s"),
    "log_time.csv": ("collapse_log10_total_time", "brute_force_log10_total_time"),
    "collapsed_nodes.csv": ("total_collapsed_nodes",),
    "accuracy.csv": ("accuracy",),
    "max_error.csv": ("max_error",),
    "mean_error.csv": ("mean_error_all", "mean_error_nonoptimal"),
}


def _log10(x: float) -> float:
    return math.log10(x) if x > 0 else float("-inf")


def summarize_pair(radius: float, collapse_path: Path, brute_path: Path) -> dict[str, float | int]:
    """One summary row comparing a collapse result file with its brute-force twin."""
    crows, brows = read_results(collapse_path), read_results(brute_path)
    ckeys = [(r["origin"], r["destination"]) for r in crows]
    bkeys = [(r["origin"], r["destination"]) for r in brows]
    if ckeys != bkeys:
        raise MismatchedInputs(f"{collapse_path} and {brute_path} cover different OD pairs")
    errors, excluded = [], 0
    for c, b in zip(crows, brows):
        if c["status"] == "Found" and b["status"] == "Found":
            errors.append(float(c["distance"]) - float(b["distance"]))
        else:
            excluded += 1
    summary = summarize_errors(errors, excluded)
    ct = sum(int(r["time"]) for r in crows) / 1e6
    bt = sum(int(r["time"]) for r in brows) / 1e6
    cmeta, bmeta = _read_meta(collapse_path), _read_meta(brute_path)
    return {
        "radius": radius,
        "n_queries": len(crows),
        "excluded": excluded,
        "collapse_total_time_s": ct,
        "brute_force_total_time_s": bt,
        "collapse_log10_total_time": _log10(ct),
        "brute_force_log10_total_time": _log10(bt),
        "collapse_total_expansions": sum(int(r["expansions"]) for r in crows),
        "brute_force_total_expansions": sum(int(r["expansions"]) for r in brows),
        "collapse_searches": sum(int(m["searches_executed"]) for m in cmeta) if cmeta else "",
        "brute_force_searches": sum(int(m["searches_executed"]) for m in bmeta) if bmeta else "",
        "total_collapsed_nodes": (
            sum(int(m["origin_size"]) + int(m["destination_size"]) for m in cmeta) if cmeta else ""
        ),
        "accuracy": summary.accuracy,
        "max_error": summary.max_error,
        "mean_error_all": summary.mean_error_all,
        "mean_error_nonoptimal": summary.mean_error_nonoptimal,
    }


_RADIUS_RE = re.compile(r"_r(\d+(?:\.\d+)?)\.csv$")


def radius_from_name(path: Path) -> float:
    m = _RADIUS_RE.search(Path(path).name)
    if not m:
        raise ConfigInvalid(f"cannot infer radius from file name {Path(path).name!r}")
    return float(m.group(1))


def analyze(pairs: Sequence[tuple[float, Path, Path]], out_dir: Path) -> list[dict[str, float | int]]:
    """Write ``summary.csv`` plus one small CSV per results panel; rows sorted by radius."""
    rows = sorted((summarize_pair(r, c, b) for r, c, b in pairs), key=lambda row: row["radius"])
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_table(out_dir / "summary.csv", SUMMARY_FIELDS, rows)
    for name, cols in PANELS.items():
        _write_table(out_dir / name, ("radius", *cols), rows)
    return rows


def _write_table(path: Path, cols: Sequence[str], rows) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(cols)
        for row in rows:
            w.writerow([_cell(row[c]) for c in cols])


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)
