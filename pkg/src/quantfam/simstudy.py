"""Seeded Monte Carlo comparison of estimators.

Each replicate draws its own sample from a seed hashed out of
``(master_seed, n, method, rep_index)``, so results do not depend on the
order or number of worker processes.  Aggregation is an ordered reduction
over ``(method, n, rep_index)``.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal
from pathlib import Path
from typing import Any, NamedTuple

import numpy as np

from .distributions import sample
from .errors import QuantFamError
from .estimators import FitResult, Method, OptimizerSettings, fit
from .families import SHAPE_FIELDS, FamilySpec

log = logging.getLogger(__name__)

STUDY_METHODS = (Method.MoM, Method.ML, Method.QM, Method.MoLM)
FAILURE_LIMIT = 0.10


@dataclass(frozen=True)
class StudyConfig:
    """One simulation design: a true law, sample sizes, replicates and methods."""

    true_spec: FamilySpec
    sample_sizes: tuple[int, ...]
    replicates: int
    methods: tuple[Method, ...]
    master_seed: int
    parallelism: int = 1

    def __post_init__(self):
        object.__setattr__(self, "sample_sizes", tuple(int(n) for n in self.sample_sizes))
        object.__setattr__(self, "methods", tuple(Method.parse(m) for m in self.methods))
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")
        if not self.sample_sizes or min(self.sample_sizes) < 20:
            raise ValueError("sample sizes must be non-empty and each >= 20")
        bad = [m.value for m in self.methods if m not in STUDY_METHODS]
        if bad:
            raise ValueError(f"methods not available in a study: {bad}")
        if not 0 <= int(self.master_seed) < 2 ** 64:
            raise ValueError("master_seed must be an unsigned 64-bit integer")
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")

    @property
    def parameters(self) -> tuple[str, ...]:
        return ("a", "b") + SHAPE_FIELDS[self.true_spec.kind]

    def to_dict(self) -> dict[str, Any]:
        return {"true_spec": self.true_spec.to_dict(), "sample_sizes": list(self.sample_sizes),
                "replicates": self.replicates, "methods": [m.value for m in self.methods],
                "master_seed": int(self.master_seed), "parallelism": self.parallelism}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "StudyConfig":
        known = {"true_spec", "sample_sizes", "replicates", "methods", "master_seed", "parallelism"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        missing = known - {"parallelism"} - set(data)
        if missing:
            raise ValueError(f"missing config keys: {sorted(missing)}")
        return cls(true_spec=FamilySpec.from_dict(data["true_spec"]),
                   sample_sizes=tuple(data["sample_sizes"]), replicates=int(data["replicates"]),
                   methods=tuple(data["methods"]), master_seed=int(data["master_seed"]),
                   parallelism=int(data.get("parallelism", 1)))

    @classmethod
    def from_json(cls, path: str | Path) -> "StudyConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))


def replicate_seed(master_seed: int, n: int, method: Method | str, rep_index: int) -> int:
    """64-bit seed for one replicate, from a BLAKE2b hash of the cell coordinates."""
    key = f"{int(master_seed)}|{int(n)}|{Method.parse(method).value}|{int(rep_index)}"
    digest = hashlib.blake2b(key.encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def run_replicate(rep_index: int, n: int, method: Method | str, true_spec: FamilySpec,
                  master_seed: int, settings: OptimizerSettings | None = None) -> FitResult:
    """Draw one seeded sample and fit it.

    ``elapsed_seconds`` of the returned result is the wall time of the whole
    estimator call (including any warm start it performs).
    """
    method = Method.parse(method)
    seed = replicate_seed(master_seed, n, method, rep_index)
    x = sample(n, seed, true_spec).x
    start = time.perf_counter()
    res = fit(x, true_spec.kind, method, settings)
    elapsed = time.perf_counter() - start
    return FitResult(res.spec, res.method, res.objective, res.n_evals, elapsed,
                     res.converged, res.diagnostics)


class ReplicateOutcome(NamedTuple):
    method: Method
    n: int
    rep_index: int
    estimates: tuple[float, ...] | None
    elapsed: float
    error: str | None


def _task(args) -> ReplicateOutcome:
    rep, n, method, spec, seed, params = args
    start = time.perf_counter()
    try:
        res = run_replicate(rep, n, method, spec, seed)
    except QuantFamError as exc:
        return ReplicateOutcome(method, n, rep, None, time.perf_counter() - start,
                                f"{type(exc).__name__}: {exc}")
    if not res.converged:
        return ReplicateOutcome(method, n, rep, None, res.elapsed_seconds, "not converged")
    est = tuple(float(getattr(res.spec, p)) for p in params)
    return ReplicateOutcome(method, n, rep, est, res.elapsed_seconds, None)


@dataclass(frozen=True)
class ParamStats:
    method: Method
    n: int
    parameter: str
    truth: float
    mean: float | None
    sd: float | None
    mse: float | None


@dataclass(frozen=True)
class CellStats:
    method: Method
    n: int
    replicates: int
    failures: int
    time_mean_s: float | None
    time_sd_s: float | None

    @property
    def failure_rate(self) -> float:
        return self.failures / self.replicates


def _mean_sd(values: np.ndarray) -> tuple[float | None, float | None]:
    if values.size == 0:
        return None, None
    mean = float(np.mean(values))
    sd = float(np.std(values, ddof=1)) if values.size > 1 else None
    return mean, sd


@dataclass(frozen=True)
class StudySummary:
    """Per-parameter Monte Carlo moments and per-cell timing and attrition."""

    config: StudyConfig
    params: tuple[ParamStats, ...]
    cells: tuple[CellStats, ...]
    failure_messages: dict[str, list[str]] = field(default_factory=dict, compare=False)

    def cell(self, method: Method | str, n: int) -> CellStats:
        method = Method.parse(method)
        return next(c for c in self.cells if c.method is method and c.n == n)

    def stat(self, method: Method | str, n: int, parameter: str) -> ParamStats:
        method = Method.parse(method)
        return next(p for p in self.params
                    if p.method is method and p.n == n and p.parameter == parameter)

    def excessive_failures(self, limit: float = FAILURE_LIMIT) -> list[CellStats]:
        return [c for c in self.cells if c.failure_rate > limit]

    def to_dict(self, include_timing: bool = False) -> dict[str, Any]:
        """Canonical mapping; timing is optional because it is not reproducible."""
        cells = []
        for c in self.cells:
            row = {"method": c.method.value, "n": c.n, "replicates": c.replicates,
                   "failures": c.failures}
            if include_timing:
                row.update(time_mean_s=c.time_mean_s, time_sd_s=c.time_sd_s)
            cells.append(row)
        return {
            "config": {k: v for k, v in self.config.to_dict().items() if k != "parallelism"},
            "parameters": [{"method": p.method.value, "n": p.n, "parameter": p.parameter,
                            "truth": p.truth, "mean": p.mean, "sd": p.sd, "mse": p.mse}
                           for p in self.params],
            "cells": cells,
        }

    def to_json(self, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2, sort_keys=True) + "\n"


def summarize(config: StudyConfig, outcomes: list[ReplicateOutcome]) -> StudySummary:
    """Ordered reduction of replicate outcomes into a :class:`StudySummary`."""
    params = config.parameters
    truth = [float(getattr(config.true_spec, p)) for p in params]
    grouped: dict[tuple[Method, int], list[ReplicateOutcome]] = {}
    for out in sorted(outcomes, key=lambda o: (config.methods.index(o.method),
                                               config.sample_sizes.index(o.n), o.rep_index)):
        grouped.setdefault((out.method, out.n), []).append(out)
    pstats, cstats, messages = [], [], {}
    for method in config.methods:
        for n in config.sample_sizes:
            rows = grouped.get((method, n), [])
            ok = [o for o in rows if o.estimates is not None]
            failed = [o for o in rows if o.estimates is None]
            if failed:
                messages[f"{method.value}/{n}"] = [f"rep {o.rep_index}: {o.error}" for o in failed]
            est = np.array([o.estimates for o in ok], dtype=float).reshape(len(ok), len(params))
            for j, p in enumerate(params):
                mean, sd = _mean_sd(est[:, j])
                mse = float(np.mean((est[:, j] - truth[j]) ** 2)) if ok else None
                pstats.append(ParamStats(method, n, p, truth[j], mean, sd, mse))
            tmean, tsd = _mean_sd(np.array([o.elapsed for o in ok], dtype=float))
            cstats.append(CellStats(method, n, len(rows), len(failed), tmean, tsd))
    return StudySummary(config, tuple(pstats), tuple(cstats), messages)


def run_study(config: StudyConfig) -> StudySummary:
    """Run every ``(method, n, replicate)`` task and aggregate.

    Tasks go to a process pool when ``parallelism > 1``; the summary is the
    same for any worker count.
    """
    params = config.parameters
    tasks = [(rep, n, method, config.true_spec, config.master_seed, params)
             for method in config.methods for n in config.sample_sizes
             for rep in range(config.replicates)]
    log.info("running %d replicate fits with parallelism %d", len(tasks), config.parallelism)
    if config.parallelism == 1:
        outcomes = [_task(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=config.parallelism) as pool:
            outcomes = list(pool.map(_task, tasks, chunksize=max(1, len(tasks) // (8 * config.parallelism))))
    summary = summarize(config, outcomes)
    for cell in summary.excessive_failures():
        log.warning("cell %s/n=%d: %d of %d fits failed", cell.method.value, cell.n,
                    cell.failures, cell.replicates)
    return summary


# -- rendering ---------------------------------------------------------------

def round3(value: float | None) -> str:
    """Round half to even at 3 decimals; empty string for missing values."""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    text = str(Decimal(repr(float(value))).quantize(Decimal("0.001"), rounding=ROUND_HALF_EVEN))
    return "0.000" if text == "-0.000" else text


PARAM_COLUMNS = ("method", "n", "parameter", "mean", "sd", "mse")
TIMING_COLUMNS = ("method", "n", "time_mean_s", "time_sd_s", "failures")


def render_table(summary: StudySummary, fmt: str = "markdown", include_timing: bool = True) -> str:
    """Render a summary as long-format CSV or a wide markdown table.

    CSV has the parameter block (``method, n, parameter, mean, sd, mse``)
    followed, after a blank line, by the timing block.  Markdown groups rows
    by sample size, parameter and statistic, one column per method.
    Numbers are rounded half-to-even at 3 decimals.
    """
    if fmt == "csv":
        return _render_csv(summary, include_timing)
    if fmt == "markdown":
        return _render_markdown(summary, include_timing)
    raise ValueError(f"unknown format {fmt!r}")


def _render_csv(summary: StudySummary, include_timing: bool) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(PARAM_COLUMNS)
    for p in summary.params:
        w.writerow([p.method.value, p.n, p.parameter, round3(p.mean), round3(p.sd), round3(p.mse)])
    buf.write("\n")
    w.writerow(TIMING_COLUMNS if include_timing else ("method", "n", "failures"))
    for c in summary.cells:
        if include_timing:
            w.writerow([c.method.value, c.n, round3(c.time_mean_s), round3(c.time_sd_s), c.failures])
        else:
            w.writerow([c.method.value, c.n, c.failures])
    return buf.getvalue()


def _render_markdown(summary: StudySummary, include_timing: bool) -> str:
    methods = summary.config.methods
    head = "| n | parameter | statistic | " + " | ".join(m.name for m in methods) + " |"
    rule = "|---|---|---|" + "---:|" * len(methods)
    lines = [head, rule]
    if not methods:
        return "\n".join(lines) + "\n"
    for n in summary.config.sample_sizes:
        for p in summary.config.parameters:
            cells = [summary.stat(m, n, p) for m in methods]
            for label, attr in (("Mean", "mean"), ("SD", "sd"), ("MSE", "mse")):
                vals = " | ".join(round3(getattr(c, attr)) for c in cells)
                lines.append(f"| {n} | {p} | {label} | {vals} |")
        if include_timing:
            cells = [summary.cell(m, n) for m in methods]
            lines.append(f"| {n} | Time (sec) | Mean | "
                         + " | ".join(round3(c.time_mean_s) for c in cells) + " |")
            lines.append(f"| {n} | Time (sec) | SD | "
                         + " | ".join(round3(c.time_sd_s) for c in cells) + " |")
        lines.append(f"| {n} | failures | count | "
                     + " | ".join(str(summary.cell(m, n).failures) for m in methods) + " |")
    return "\n".join(lines) + "\n"


def write_outputs(summary: StudySummary, prefix: str | Path) -> dict[str, Path]:
    """Write the canonical summary files plus a separate timing record.

    ``<prefix>.summary.csv``, ``<prefix>.summary.json`` and
    ``<prefix>.table.md`` are byte-identical across reruns with the same
    config; ``<prefix>.timing.json`` and ``<prefix>.table_timed.md`` carry
    the wall-clock figures.
    """
    prefix = Path(prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    files = {
        "csv": prefix.with_name(prefix.name + ".summary.csv"),
        "json": prefix.with_name(prefix.name + ".summary.json"),
        "markdown": prefix.with_name(prefix.name + ".table.md"),
        "timing": prefix.with_name(prefix.name + ".timing.json"),
        "markdown_timed": prefix.with_name(prefix.name + ".table_timed.md"),
    }
    files["csv"].write_text(render_table(summary, "csv", include_timing=False))
    files["json"].write_text(summary.to_json())
    files["markdown"].write_text(render_table(summary, "markdown", include_timing=False))
    timing = [{"method": c.method.value, "n": c.n, "time_mean_s": c.time_mean_s,
               "time_sd_s": c.time_sd_s} for c in summary.cells]
    files["timing"].write_text(json.dumps(timing, indent=2) + "\n")
    files["markdown_timed"].write_text(render_table(summary, "markdown", include_timing=True))
    return files
