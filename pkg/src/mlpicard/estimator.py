"""Recursive multilevel Picard estimator with full draw accounting.

One realization of the level-n estimator at (t, x) is, in the forward
orientation (datum at time 0, variance scale 2),

    U_n(t,x) = (1/M^n) sum_{m=1..M^n} [ data(X^{0,-m}) + t * f(R^{0,m}, X^{0,m}, 0) ]
             + sum_{k=1..n-1} t / M^{n-k} sum_{m=1..M^{n-k}}
                   [ f_r(R, X, U_k^{(k,m)}(R,X)) - f_r(R, X, U_{k-1}^{(-k,m)}(R,X)) ]

with U_0 = 0, R drawn uniformly on [0, t] and X a Brownian point at the
matching elapsed time.  The backward orientation (datum at time T, variance
scale 1) replaces the outer factors t by (T - t) and draws R on [t, T].

Two structural rules carry the scheme's variance reduction and independence:

  * Sample sharing: inside one correction term the SAME (R, X) pair feeds
    both the level-k and the level-(k-1) evaluation.  The pair is drawn at
    node (theta, k, m); the two recursive evaluations root at nodes
    (theta, k, m) and (theta, -k, m).
  * Node layout: the m-th level-0 data sample draws d gaussians from node
    (theta, 0, -m); the m-th level-0 f-sample draws one uniform (slot 0)
    then d gaussians (slots 1..d) from (theta, 0, m); the (k, m)-th
    correction draws one uniform then d gaussians from (theta, k, m).

When f(.,.,0) is a known constant the level-0 f-draws are skipped and the
term is added in closed form; the tally then undercounts the cost model
strictly (the model charges those draws regardless).

The engine is vectorized across independent repetitions ("lanes"): the tree
shape depends only on (n, M), so one traversal serves a whole batch, and the
inner m-sums fold into the lane axis of the recursive calls.  Results are a
pure function of (seed, node path, counter); chunking and thread counts
cannot change them.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .problem import Orientation, PdeProblem, eval_truncated_f
from .randomness import (
    NodeId,
    absorb_vec,
    gaussians_vec,
    path_digest,
    uniforms_vec,
)

# lane chunking keeps peak arrays near chunk * M^n * d doubles (~34 MB)
_CHUNK_BUDGET = 1 << 22


@dataclass(frozen=True)
class MlpParams:
    levels: int
    branching: int
    truncation_radius: float
    seed: int = 0
    root_node: NodeId = NodeId(())

    def __post_init__(self):
        if self.levels < 0:
            raise ValueError(f"levels must be >= 0, got {self.levels}")
        if self.branching < 1:
            raise ValueError(f"branching must be >= 1, got {self.branching}")
        if not self.truncation_radius > 0.0:
            raise ValueError(
                f"truncation_radius must be > 0, got {self.truncation_radius}"
            )


@dataclass(frozen=True)
class CostTally:
    """Scalar draw and evaluation counts for one realization."""

    gaussian_scalars: int = 0
    uniforms: int = 0
    f_evals: int = 0
    data_evals: int = 0

    @property
    def total_draws(self) -> int:
        return self.gaussian_scalars + self.uniforms

    def __add__(self, other: "CostTally") -> "CostTally":
        return CostTally(
            self.gaussian_scalars + other.gaussian_scalars,
            self.uniforms + other.uniforms,
            self.f_evals + other.f_evals,
            self.data_evals + other.data_evals,
        )


@dataclass(frozen=True)
class EstimateResult:
    value: float
    tally: CostTally


class EstimatorProbe:
    """Optional instrumentation attached to a run.

    Always tracks the largest |value| handed to the truncated reaction
    (recursive intermediates, pre-clamp).  With ``record_paths`` it also
    logs, for the first lane, every correction draw (node, k, (R, X)) and
    every recursive evaluation entry (node, level, (t, x) received), so
    tests can certify the sample-sharing and node-layout rules from
    recorded evidence.  Recording unfolds the inner m-sums into loops with
    exact per-m node paths; draws and results are unchanged, but it is
    meant for small audit runs only.
    """

    def __init__(self, record_paths: bool = False):
        self.record_paths = record_paths
        self.max_recursive_abs = 0.0
        self.correction_samples: list = []
        self.eval_entries: list = []

    def saw_values(self, values: np.ndarray):
        if values.size:
            peak = float(np.max(np.abs(values)))
            if peak > self.max_recursive_abs:
                self.max_recursive_abs = peak


class _MutableTally:
    __slots__ = ("gaussian_scalars", "uniforms", "f_evals", "data_evals")

    def __init__(self):
        self.gaussian_scalars = 0
        self.uniforms = 0
        self.f_evals = 0
        self.data_evals = 0

    def freeze(self) -> CostTally:
        return CostTally(
            self.gaussian_scalars, self.uniforms, self.f_evals, self.data_evals
        )


class _Engine:
    def __init__(self, problem: PdeProblem, params: MlpParams, probe=None):
        self.problem = problem
        self.params = params
        self.probe = probe
        self.forward = problem.orientation is Orientation.FORWARD
        self.d = problem.dimension
        self.horizon = problem.horizon
        self.nl = problem.nonlinearity
        self.data = problem.data
        self.skip_f0 = self.nl.f_at_zero is not None
        self.gauss_slots = np.arange(self.d, dtype=np.uint64)

    # orientation helpers ------------------------------------------------

    def _outer_coef(self, t):
        # multiplies the f term and every correction; also the data elapsed
        return t if self.forward else self.horizon - t

    def _sample_time(self, t, u):
        # R uniform on [0, t] forward, on [t, T] backward
        return t * u if self.forward else t + (self.horizon - t) * u

    def _elapsed(self, t, r):
        # time between the evaluation point and the sampled time
        return t - r if self.forward else r - t

    def _smear(self, x, elapsed, z):
        # x + sqrt(variance_scale * elapsed) * z; x (B,d), elapsed (B,) or
        # (B,m), z matching with trailing d-axis
        vs = 2.0 if self.forward else 1.0
        scale = np.sqrt(vs * elapsed)
        if z.ndim == 3:
            return x[:, None, :] + scale[:, :, None] * z
        return x + scale[:, None] * z

    # the recursion ------------------------------------------------------

    def run(self, t, x, digests, depth, tally):
        return self._evaluate(
            self.params.levels, t, x, digests, depth, tally, 1,
            path=self.params.root_node.path if self._recording() else None,
        )

    def _recording(self):
        return self.probe is not None and self.probe.record_paths

    def _evaluate(self, n, t, x, digests, depth, tally, mult, path=None):
        # mult = lanes here per root lane; scales all per-lane tally counts
        B = t.shape[0]
        if path is not None:
            self.probe.eval_entries.append(
                (path, n, (float(t[0]), tuple(x[0].tolist())))
            )
        if n == 0:
            return np.zeros(B)
        M = self.params.branching
        nl, data = self.nl, self.data
        d = self.d
        outer = self._outer_coef(t)

        # level 0: data samples at nodes (theta, 0, -m), m = 1..M^n
        Mn = M**n
        ms = np.arange(1, Mn + 1, dtype=np.int64)
        dig_zero = absorb_vec(digests[:, None], depth + 1, 0)
        dig_data = absorb_vec(dig_zero, depth + 2, -ms)
        z = gaussians_vec(dig_data[:, :, None], self.gauss_slots)
        elapsed0 = np.broadcast_to(outer[:, None], (B, Mn))
        pts = self._smear(x, elapsed0, z)
        vals = data.eval(pts.reshape(B * Mn, d)).reshape(B, Mn)
        tally.gaussian_scalars += mult * Mn * d
        tally.data_evals += mult * Mn
        total = vals.mean(axis=1)

        # level 0: f samples at nodes (theta, 0, m); skipped when f(.,.,0)
        # is a known constant (the term is then deterministic)
        if self.skip_f0:
            total = total + outer * nl.f_at_zero
        else:
            dig_f = absorb_vec(dig_zero, depth + 2, ms)
            u = uniforms_vec(dig_f, 0)
            r_times = self._sample_time(t[:, None], u)
            zf = gaussians_vec(dig_f[:, :, None], self.gauss_slots + np.uint64(1))
            ptsf = self._smear(x, self._elapsed(t[:, None], r_times), zf)
            fvals = nl.eval(
                r_times.reshape(-1), ptsf.reshape(B * Mn, d), np.zeros(B * Mn)
            ).reshape(B, Mn)
            tally.uniforms += mult * Mn
            tally.gaussian_scalars += mult * Mn * d
            tally.f_evals += mult * Mn
            total = total + outer * fvals.mean(axis=1)

        # corrections k = 1..n-1: (R, X) drawn once at (theta, k, m) and fed
        # to BOTH the level-k and the level-(k-1) evaluation
        rr = self.params.truncation_radius
        for k in range(1, n):
            Mm = M ** (n - k)
            ms = np.arange(1, Mm + 1, dtype=np.int64)
            dig_k = absorb_vec(digests[:, None], depth + 1, k)
            dig_km = absorb_vec(dig_k, depth + 2, ms)
            u = uniforms_vec(dig_km, 0)
            r_times = self._sample_time(t[:, None], u)
            z = gaussians_vec(dig_km[:, :, None], self.gauss_slots + np.uint64(1))
            pts = self._smear(x, self._elapsed(t[:, None], r_times), z)
            tally.uniforms += mult * Mm
            tally.gaussian_scalars += mult * Mm * d

            if self._recording():
                dig_neg = absorb_vec(digests[:, None], depth + 1, -k)
                dig_lo_m = absorb_vec(dig_neg, depth + 2, ms)
                sub_hi, sub_lo = self._corrections_recorded(
                    k, ms, r_times, pts, dig_km, dig_lo_m, depth, tally,
                    mult, path,
                )
                sub_hi = sub_hi.reshape(B * Mm)
                sub_lo = sub_lo.reshape(B * Mm)
                r_flat = r_times.reshape(B * Mm)
                x_flat = pts.reshape(B * Mm, d)
            else:
                r_flat = r_times.reshape(B * Mm)
                x_flat = pts.reshape(B * Mm, d)
                dig_hi = dig_km.reshape(B * Mm)
                sub_hi = self._evaluate(
                    k, r_flat, x_flat, dig_hi, depth + 2, tally, mult * Mm
                )
                if k == 1:
                    sub_lo = np.zeros(B * Mm)
                else:
                    dig_neg = absorb_vec(digests[:, None], depth + 1, -k)
                    dig_lo = absorb_vec(dig_neg, depth + 2, ms).reshape(B * Mm)
                    sub_lo = self._evaluate(
                        k - 1, r_flat, x_flat, dig_lo, depth + 2, tally,
                        mult * Mm
                    )

            if self.probe is not None:
                self.probe.saw_values(sub_hi)
                self.probe.saw_values(sub_lo)

            f_hi = eval_truncated_f(nl, r_flat, x_flat, sub_hi, rr)
            f_lo = eval_truncated_f(nl, r_flat, x_flat, sub_lo, rr)
            tally.f_evals += mult * 2 * Mm
            diff = (f_hi - f_lo).reshape(B, Mm).sum(axis=1)
            total = total + (outer / Mm) * diff

        return total

    def _corrections_recorded(self, k, ms, r_times, pts, dig_hi_m, dig_lo_m,
                              depth, tally, mult, path):
        # audit mode: loop the m-sum so every recursive call carries its
        # exact node path; draws, digests and results match the folded path
        B, Mm = r_times.shape
        sub_hi = np.empty((B, Mm))
        sub_lo = np.empty((B, Mm))
        for i, m in enumerate(ms):
            m = int(m)
            rx = (float(r_times[0, i]), tuple(pts[0, i].tolist()))
            self.probe.correction_samples.append((path + (k, m), k, rx))
            sub_hi[:, i] = self._evaluate(
                k, r_times[:, i], pts[:, i, :], dig_hi_m[:, i], depth + 2,
                tally, mult, path=path + (k, m),
            )
            sub_lo[:, i] = self._evaluate(
                k - 1, r_times[:, i], pts[:, i, :], dig_lo_m[:, i],
                depth + 2, tally, mult, path=path + (-k, m),
            )
        return sub_hi, sub_lo


def _root_digests(seed, root_path, reps=None):
    if reps is None:
        return np.array([path_digest(seed, root_path)], dtype=np.uint64), len(root_path)
    digs = absorb_vec(np.uint64(path_digest(seed, ())), 1, np.asarray(reps))
    for i, v in enumerate(root_path):
        digs = absorb_vec(digs, i + 2, v)
    return digs, len(root_path) + 1


def _validate_point(problem, t, x):
    if not 0.0 <= t <= problem.horizon:
        raise ValueError(f"t must lie in [0, {problem.horizon}], got {t}")
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 0 and problem.dimension == 1:
        x = x.reshape(1)
    if x.shape != (problem.dimension,):
        raise ValueError(
            f"x has shape {x.shape}, problem dimension is {problem.dimension}"
        )
    return x


def _estimate(problem, params, t, x, probe):
    x = _validate_point(problem, t, x)
    if params.levels == 0:
        return EstimateResult(0.0, CostTally())
    digests, depth = _root_digests(params.seed, params.root_node.path)
    engine = _Engine(problem, params, probe)
    tally = _MutableTally()
    values = engine.run(np.array([t]), x[None, :], digests, depth, tally)
    return EstimateResult(float(values[0]), tally.freeze())


def estimate_forward(problem: PdeProblem, params: MlpParams, t: float, x,
                     probe: EstimatorProbe | None = None) -> EstimateResult:
    """One realization of the forward estimator at (t, x)."""
    if problem.orientation is not Orientation.FORWARD:
        raise ValueError("estimate_forward requires a Forward problem")
    return _estimate(problem, params, t, x, probe)


def estimate_backward(problem: PdeProblem, params: MlpParams, t: float, x,
                      probe: EstimatorProbe | None = None) -> EstimateResult:
    """One realization of the backward estimator at (t, x)."""
    if problem.orientation is not Orientation.BACKWARD:
        raise ValueError("estimate_backward requires a Backward problem")
    return _estimate(problem, params, t, x, probe)


def estimate_batch(
    problem: PdeProblem,
    params: MlpParams,
    t: float,
    x,
    repetitions: int,
    worker_count: int = 1,
) -> list[EstimateResult]:
    """K independent realizations; repetition j roots at [j] + root_node.

    Output order is repetition order and every entry is bit-identical for
    any worker_count: each repetition's draws are a pure function of its
    own node addresses, so neither chunking nor scheduling can leak across.
    """
    if repetitions < 1:
        raise ValueError(f"repetitions must be >= 1, got {repetitions}")
    if worker_count < 1:
        raise ValueError(f"worker_count must be >= 1, got {worker_count}")
    x = _validate_point(problem, t, x)
    n, M, d = params.levels, params.branching, problem.dimension
    if n == 0:
        zero = CostTally()
        return [EstimateResult(0.0, zero) for _ in range(repetitions)]

    per_lane = max(1, M**n * max(d, 1))
    chunk = int(np.clip(_CHUNK_BUDGET // per_lane, 1, repetitions))
    starts = list(range(0, repetitions, chunk))

    def run_chunk(start):
        stop = min(start + chunk, repetitions)
        reps = np.arange(start, stop, dtype=np.int64)
        digests, depth = _root_digests(params.seed, params.root_node.path, reps)
        engine = _Engine(problem, params, None)
        tally = _MutableTally()
        tvec = np.full(stop - start, float(t))
        xmat = np.broadcast_to(x, (stop - start, d))
        values = engine.run(tvec, xmat, digests, depth, tally)
        return values, tally.freeze()

    if worker_count == 1 or len(starts) == 1:
        chunks = [run_chunk(s) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=worker_count) as pool:
            chunks = list(pool.map(run_chunk, starts))

    tally = chunks[0][1]
    out = []
    for values, chunk_tally in chunks:
        if chunk_tally != tally:
            raise AssertionError("per-repetition tallies diverged across chunks")
        out.extend(EstimateResult(float(v), tally) for v in values)
    return out


def transform_to_backward(problem: PdeProblem) -> PdeProblem:
    """Matched backward problem: its estimator at (t, x) is distributed as
    the forward estimator at (T - t, x * sqrt(2)).

    Terminal datum g(x) = data(x * sqrt(2)); reaction F(t,x,w) =
    f(T - t, x * sqrt(2), w).  Metadata (kappa, L, c) is unchanged.
    """
    if problem.orientation is not Orientation.FORWARD:
        raise ValueError("transform_to_backward expects a Forward problem")
    from .problem import DataFunction, Nonlinearity

    T = problem.horizon
    nl, data = problem.nonlinearity, problem.data
    root2 = math.sqrt(2.0)

    def g(x):
        return data.eval(np.asarray(x) * root2)

    if nl.autonomous:
        F = nl.eval
    else:
        def F(t, x, w):
            return nl.eval(T - np.asarray(t), np.asarray(x) * root2, w)

    return PdeProblem(
        dimension=problem.dimension,
        horizon=T,
        orientation=Orientation.BACKWARD,
        nonlinearity=Nonlinearity(
            eval=F,
            lipschitz_local=nl.lipschitz_local,
            coercivity_c=nl.coercivity_c,
            autonomous=nl.autonomous,
            f_at_zero=nl.f_at_zero,
            name=nl.name,
        ),
        data=DataFunction(
            eval=g,
            sup_bound_kappa=data.sup_bound_kappa,
            constant_value=data.constant_value,
            name=data.name,
        ),
    )
