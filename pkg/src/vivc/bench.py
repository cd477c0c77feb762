"""Sequentiality benchmark: wall time and instrumented hash counts for eval and
verify across delays T, with a linear fit of eval time over T."""

from __future__ import annotations

import json
import statistics
import time
from dataclasses import asdict, dataclass, field
from importlib import resources
from typing import Callable

from .hashing import TAG_STEP, count_hashes
from .merkle import path_length
from .prover import checkpoint_count, default_interval, evaluate
from .trusted_setup import trusted_setup
from .verifier import verify

REPORT_VERSION = 1


@dataclass(frozen=True)
class BenchRow:
    T: int
    interval: int
    m: int
    k: int
    eval_wall_time: float
    eval_hash_count: int
    eval_total_hashes: int
    verify_wall_time: float
    verify_hash_count: int
    verify_step_count: int
    verify_bound: int
    accepted: bool


@dataclass(frozen=True)
class BenchReport:
    rows: tuple[BenchRow, ...]
    slope: float | None
    intercept: float | None
    r2: float | None
    repeats: int
    version: int = REPORT_VERSION
    hashes_per_second: float = field(default=0.0)

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "repeats": self.repeats,
            "fit": {"slope": self.slope, "intercept": self.intercept, "r2": self.r2},
            "hashes_per_second": self.hashes_per_second,
            "rows": [asdict(r) for r in self.rows],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BenchReport":
        if d.get("version") != REPORT_VERSION:
            raise ValueError(f"unsupported bench report version {d.get('version')!r}")
        fit = d["fit"]
        return cls(
            rows=tuple(BenchRow(**r) for r in d["rows"]),
            slope=fit["slope"],
            intercept=fit["intercept"],
            r2=fit["r2"],
            repeats=d["repeats"],
            hashes_per_second=d["hashes_per_second"],
        )

    def table(self) -> str:
        cols = [
            ("T", 9, "d"), ("c", 6, "d"), ("m", 6, "d"), ("k", 3, "d"),
            ("eval_s", 9, ".4f"), ("eval_hashes", 11, "d"),
            ("verify_s", 9, ".5f"), ("verify_hashes", 13, "d"), ("bound", 7, "d"), ("ok", 3, "s"),
        ]
        lines = [" ".join(f"{name:>{w}}" for name, w, _ in cols)]
        for r in self.rows:
            vals = (r.T, r.interval, r.m, r.k, r.eval_wall_time, r.eval_hash_count,
                    r.verify_wall_time, r.verify_hash_count, r.verify_bound, "y" if r.accepted else "n")
            lines.append(" ".join(f"{v:>{w}{spec}}" for (_, w, spec), v in zip(cols, vals)))
        if self.r2 is not None:
            lines.append(f"fit: eval_s = {self.slope:.3e} * T + {self.intercept:.3e}   R^2 = {self.r2:.5f}")
        return "\n".join(lines)


def bench_schema() -> dict:
    return json.loads(resources.files("vivc").joinpath("schemas/bench.schema.json").read_text())


def verify_bound(k: int, interval: int, m: int) -> int:
    return k * (interval + 2 * path_length(m)) + 8


def linear_fit(xs: list[float], ys: list[float]) -> tuple[float, float, float]:
    slope, intercept = statistics.linear_regression(xs, ys)
    r = statistics.correlation(xs, ys)
    return slope, intercept, r * r


def sequentiality_bench(
    T_values: list[int],
    interval: int | Callable[[int], int] | None = None,
    k: int = 20,
    repeats: int = 3,
    seed: bytes = b"vivc-bench",
) -> BenchReport:
    """Median-of-``repeats`` timings per T; ``interval`` is fixed, a rule T -> c, or the default rule."""
    if list(T_values) != sorted(T_values):
        raise ValueError("T values must be sorted ascending")
    rule = interval if callable(interval) else (lambda T: interval) if interval else default_interval
    kp = trusted_setup(128, seed)
    x = bytes(32)
    rows = []
    for T in T_values:
        c = rule(T)
        m = checkpoint_count(T, c)
        kk = min(k, m - 1)
        ev_times, vf_times = [], []
        for rep in range(repeats):
            with count_hashes() as ev_hc:
                t0 = time.perf_counter()
                proof, _ = evaluate(kp, x, b"witness", T, c, kk, rng_seed=seed + rep.to_bytes(4, "big"))
                ev_times.append(time.perf_counter() - t0)
            with count_hashes() as vf_hc:
                t0 = time.perf_counter()
                verdict = verify(kp, x, proof)
                vf_times.append(time.perf_counter() - t0)
        rows.append(
            BenchRow(
                T=T, interval=c, m=m, k=kk,
                eval_wall_time=statistics.median(ev_times),
                eval_hash_count=ev_hc[TAG_STEP],
                eval_total_hashes=ev_hc.total,
                verify_wall_time=statistics.median(vf_times),
                verify_hash_count=vf_hc.total,
                verify_step_count=vf_hc[TAG_STEP],
                verify_bound=verify_bound(kk, c, m),
                accepted=verdict.accepted,
            )
        )
    if len(rows) >= 2:
        slope, intercept, r2 = linear_fit([float(r.T) for r in rows], [r.eval_wall_time for r in rows])
    else:
        slope = intercept = r2 = None
    total_t = sum(r.eval_wall_time for r in rows)
    hps = sum(r.T for r in rows) / total_t if total_t > 0 else 0.0
    return BenchReport(tuple(rows), slope, intercept, r2, repeats, hashes_per_second=hps)
