"""Statistical harness: RMSE tables, scaling studies, epsilon sweeps.

Every table here is desk-scale numerical evidence produced by this package;
the underlying theory contributes the bound columns, not the measurements.
RMSE is always taken against an oracle value, not a pooled mean, so it is
the Monte Carlo analogue of the L2 distance the error bound controls:
RMSE^2 = bias^2 + variance.

CSV files use RFC-4180-style quoting with one header row and '\n' line
endings.  With a fixed config and seed the files are byte-identical across
runs and thread counts, except for wall-time columns, which are
informational only and explicitly non-deterministic.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .bounds import (
    BoundConstants,
    cost_bound,
    cost_recursion,
    cumulative_cost,
    error_bound,
    rho_min,
    select_levels,
)
from .estimator import MlpParams, estimate_batch
from .problem import PdeProblem, TruncationSchedule, default_schedule


class RunningStats:
    """Streaming count/mean/M2 with exact-shape parallel merge.

    Merging two accumulators gives the same statistics as streaming the
    concatenated samples (up to roundoff); merge is associative to ~1e-12
    relative, so chunked and threaded accumulation commute.
    """

    __slots__ = ("count", "mean", "m2")

    def __init__(self, count: int = 0, mean: float = 0.0, m2: float = 0.0):
        self.count = count
        self.mean = mean
        self.m2 = m2

    def update(self, value: float) -> None:
        self.count += 1
        delta = value - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (value - self.mean)

    def update_many(self, values) -> None:
        values = np.asarray(values, dtype=np.float64).reshape(-1)
        if values.size == 0:
            return
        chunk = RunningStats(
            count=int(values.size),
            mean=float(values.mean()),
            m2=float(((values - values.mean()) ** 2).sum()),
        )
        merged = self.merge(chunk)
        self.count, self.mean, self.m2 = merged.count, merged.mean, merged.m2

    def merge(self, other: "RunningStats") -> "RunningStats":
        if self.count == 0:
            return RunningStats(other.count, other.mean, other.m2)
        if other.count == 0:
            return RunningStats(self.count, self.mean, self.m2)
        n = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * other.count / n
        m2 = self.m2 + other.m2 + delta * delta * self.count * other.count / n
        return RunningStats(n, mean, m2)

    @property
    def variance(self) -> float:
        """Sample variance (ddof = 1)."""
        if self.count < 2:
            return 0.0
        return self.m2 / (self.count - 1)

    @property
    def std_error(self) -> float:
        if self.count < 2:
            return 0.0
        return math.sqrt(self.variance / self.count)


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    radius: float
    repetitions: int
    rmse: float
    se_mean: float
    error_bound: float
    gaussians_measured: int
    cost_model: int
    wall_time_s: float


def rmse_vs_oracle(
    problem: PdeProblem,
    oracle_value: float,
    t: float,
    x,
    n_list: Sequence[int],
    schedule: Optional[TruncationSchedule] = None,
    K: int = 1000,
    seed: int = 0,
    worker_count: int = 1,
    radius_override: Optional[float] = None,
) -> list[ConvergenceRow]:
    """Diagonal (M = n) RMSE table against a fixed oracle value.

    Default radius: max(schedule.radius_at(n), rho_min(problem)), so the
    truncation never bites on the exact solution.  Every row re-verifies
    measured draws <= cost_recursion <= cost_bound before it is emitted.
    """
    if K < 2:
        raise ValueError(f"K must be >= 2 for a standard error, got {K}")
    if schedule is None:
        schedule = default_schedule()
    consts = BoundConstants.from_problem(problem)
    floor = rho_min(problem)
    d = problem.dimension
    rows = []
    for n in n_list:
        M = max(n, 1)
        if radius_override is not None:
            r = radius_override
        else:
            r = max(schedule.radius_at(M), floor)
        params = MlpParams(
            levels=n, branching=M, truncation_radius=r, seed=seed
        )
        start = time.perf_counter()
        results = estimate_batch(problem, params, t, x, K, worker_count)
        wall = time.perf_counter() - start
        values = np.array([res.value for res in results])
        rmse = float(np.sqrt(np.mean((values - oracle_value) ** 2)))
        se_mean = float(values.std(ddof=1) / math.sqrt(K))
        tally = results[0].tally
        model = cost_recursion(d, n, M)
        if tally.total_draws > model:
            raise AssertionError(
                f"measured draws {tally.total_draws} exceed cost model {model} "
                f"at n={n}, M={M}, d={d}"
            )
        if n >= 1 and model > cost_bound(d, n, M):
            raise AssertionError(
                f"cost model {model} exceeds closed-form bound at n={n}"
            )
        rows.append(
            ConvergenceRow(
                n=n,
                radius=r,
                repetitions=K,
                rmse=rmse,
                se_mean=se_mean,
                error_bound=error_bound(consts, n, M, r),
                gaussians_measured=tally.gaussian_scalars,
                cost_model=model,
                wall_time_s=wall,
            )
        )
    return rows


@dataclass(frozen=True)
class ScalingRow:
    d: int
    gaussians_measured: int
    draws_measured: int
    cost_model: int
    wall_time_s: float


@dataclass(frozen=True)
class ScalingResult:
    rows: tuple
    cost_affine_exact: bool
    gaussian_fit_r2: float
    gaussian_slope: float
    gaussian_intercept: float


def dimension_scaling(
    problem_template: Callable[[int], PdeProblem],
    d_list: Sequence[int],
    n: int = 3,
    t: Optional[float] = None,
    x_rule: Optional[Callable[[int], np.ndarray]] = None,
    K: int = 1,
    seed: int = 0,
    worker_count: int = 1,
) -> ScalingResult:
    """Draw counts and model cost across dimensions at fixed n = M.

    The cost model is affine in d at fixed (n, M); the affine check fits
    the first two dimensions exactly (integer arithmetic) and requires
    every further point to match.  Measured gaussian draws are fitted
    against d and the R^2 reported.
    """
    if len(d_list) < 2:
        raise ValueError("d_list needs at least two dimensions")
    if any(d < 1 for d in d_list):
        raise ValueError(f"dimensions must be >= 1, got {list(d_list)}")
    rows = []
    for d in d_list:
        problem = problem_template(d)
        t_eval = problem.horizon if t is None else t
        x = np.zeros(d) if x_rule is None else np.asarray(x_rule(d), dtype=float)
        r = max(default_schedule().radius_at(max(n, 1)), rho_min(problem))
        params = MlpParams(levels=n, branching=max(n, 1), truncation_radius=r,
                           seed=seed)
        start = time.perf_counter()
        results = estimate_batch(problem, params, t_eval, x, K, worker_count)
        wall = time.perf_counter() - start
        tally = results[0].tally
        model = cost_recursion(d, n, max(n, 1))
        if tally.total_draws > model:
            raise AssertionError(
                f"measured draws {tally.total_draws} exceed cost model {model} "
                f"at d={d}"
            )
        rows.append(
            ScalingRow(
                d=d,
                gaussians_measured=tally.gaussian_scalars,
                draws_measured=tally.total_draws,
                cost_model=model,
                wall_time_s=wall,
            )
        )

    d0, d1 = rows[0].d, rows[1].d
    slope = Fraction(rows[1].cost_model - rows[0].cost_model, d1 - d0)
    intercept = Fraction(rows[0].cost_model) - slope * d0
    affine = all(
        Fraction(row.cost_model) == slope * row.d + intercept for row in rows
    )
    ds = np.array([row.d for row in rows], dtype=float)
    gs = np.array([row.gaussians_measured for row in rows], dtype=float)
    g_slope, g_intercept = np.polyfit(ds, gs, 1)
    fitted = g_slope * ds + g_intercept
    ss_res = float(((gs - fitted) ** 2).sum())
    ss_tot = float(((gs - gs.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return ScalingResult(
        rows=tuple(rows),
        cost_affine_exact=affine,
        gaussian_fit_r2=r2,
        gaussian_slope=float(g_slope),
        gaussian_intercept=float(g_intercept),
    )


@dataclass(frozen=True)
class SweepRow:
    epsilon: float
    d: int
    levels: int
    cumulative_cost: int
    scaled_cost: float  # cumulative_cost * epsilon^{2+delta} / d


@dataclass(frozen=True)
class SweepResult:
    rows: tuple
    delta: float
    scaled_max: float
    scaled_min: float


def epsilon_sweep(
    consts: BoundConstants,
    schedule: TruncationSchedule,
    delta: float,
    epsilon_list: Sequence[float],
    d_list: Sequence[int],
    k_offset: int = 0,
    n_max: int = 64,
) -> SweepResult:
    """Levels and cumulative model cost over an accuracy grid.

    scaled_cost = cumulative_cost * eps^{2+delta} / d is the quantity the
    complexity theory asserts stays bounded as eps -> 0; its max/min over
    the grid is reported.  Cap failures from level selection propagate.
    """
    if not delta > 0.0:
        raise ValueError(f"delta must be > 0, got {delta}")
    rows = []
    for eps in epsilon_list:
        levels = select_levels(eps, consts, schedule, n_max=n_max)
        for d in d_list:
            total = cumulative_cost(d, levels, k_offset)
            scaled = total * eps ** (2.0 + delta) / d
            rows.append(
                SweepRow(
                    epsilon=eps,
                    d=d,
                    levels=levels,
                    cumulative_cost=total,
                    scaled_cost=scaled,
                )
            )
    scaled = [row.scaled_cost for row in rows]
    return SweepResult(
        rows=tuple(rows),
        delta=delta,
        scaled_max=max(scaled),
        scaled_min=min(scaled),
    )


# CSV emission ------------------------------------------------------------

CONVERGENCE_HEADER = (
    "n", "radius", "repetitions", "rmse", "se_mean", "error_bound",
    "gaussians_measured", "cost_model", "wall_time_s",
)
SCALING_HEADER = (
    "d", "gaussians_measured", "draws_measured", "cost_model", "wall_time_s",
)
SWEEP_HEADER = ("epsilon", "d", "levels", "cumulative_cost", "scaled_cost")

# wall-time columns are excluded from byte-identity comparisons
NONDETERMINISTIC_COLUMNS = ("wall_time_s",)


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)


def write_convergence_csv(path: str, rows: Sequence[ConvergenceRow]) -> None:
    _write_csv(
        path,
        CONVERGENCE_HEADER,
        (
            (
                row.n, repr(row.radius), row.repetitions, repr(row.rmse),
                repr(row.se_mean), repr(row.error_bound),
                row.gaussians_measured, row.cost_model,
                f"{row.wall_time_s:.6f}",
            )
            for row in rows
        ),
    )


def write_scaling_csv(path: str, result: ScalingResult) -> None:
    _write_csv(
        path,
        SCALING_HEADER,
        (
            (
                row.d, row.gaussians_measured, row.draws_measured,
                row.cost_model, f"{row.wall_time_s:.6f}",
            )
            for row in result.rows
        ),
    )


def write_sweep_csv(path: str, result: SweepResult) -> None:
    _write_csv(
        path,
        SWEEP_HEADER,
        (
            (
                repr(row.epsilon), row.d, row.levels, row.cumulative_cost,
                repr(row.scaled_cost),
            )
            for row in result.rows
        ),
    )
