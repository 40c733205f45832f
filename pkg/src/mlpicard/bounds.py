"""A-priori bounds, L2 error bounds, cost model, and level selection.

Everything here is closed-form arithmetic on declared constants:

  * a-priori solution bound   e^{c t} (1 + kappa^2)^{1/2}, which also gives
    the smallest truncation radius rho_min the error theory accepts;
  * the L2 error bound        e^{L(r)T} [kappa + T |f(0)|]
                                  * e^{M/2} (1 + 2 L(r) T)^n M^{-n/2};
  * the cost recursion        C(d,0,M) = 0,
        C(d,n,M) = (2d+1) M^n
                 + sum_{l=1..n-1} M^{n-l} (d + 1 + C(d,l,M) + C(d,l-1,M)),
    an equality-defined model of draws per realization, bounded by d (5M)^n;
  * the level-selection rule  N(eps) = least n with sup_{m >= n} bound(m,m,
    rho_m) <= eps, realized as a capped scan with a decreasing-tail check.

Cost values are exact Python integers (arbitrary precision, so overflow
cannot occur silently or otherwise).  The error bound is a theorem only for
r >= rho_min; it is computed regardless and callers can test admissibility
separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .problem import PdeProblem, TruncationSchedule


class CapExceededError(RuntimeError):
    """Raised when select_levels finds no admissible level under its cap."""

    def __init__(self, message, epsilon, n_max, smallest_bound):
        super().__init__(message)
        self.epsilon = epsilon
        self.n_max = n_max
        self.smallest_bound = smallest_bound


@dataclass(frozen=True)
class BoundConstants:
    """Constants entering the error bound."""

    kappa: float
    f0_abs: float
    horizon: float
    coercivity_c: float
    lipschitz_local: Callable[[float], float]

    def __post_init__(self):
        if self.kappa < 0.0 or self.f0_abs < 0.0 or self.coercivity_c < 0.0:
            raise ValueError("kappa, f0_abs and coercivity_c must be >= 0")
        if not self.horizon > 0.0:
            raise ValueError(f"horizon must be > 0, got {self.horizon}")

    @classmethod
    def from_problem(cls, problem: PdeProblem, f0_abs=None) -> "BoundConstants":
        nl = problem.nonlinearity
        if f0_abs is None:
            if nl.f_at_zero is None:
                raise ValueError(
                    "nonlinearity has no declared f_at_zero; pass f0_abs explicitly"
                )
            f0_abs = abs(nl.f_at_zero)
        return cls(
            kappa=problem.data.sup_bound_kappa,
            f0_abs=f0_abs,
            horizon=problem.horizon,
            coercivity_c=nl.coercivity_c,
            lipschitz_local=nl.lipschitz_local,
        )


def surrogate_constants() -> BoundConstants:
    """L == 0, kappa = 1, f0 = 0: the bound collapses to e^{M/2} M^{-n/2}.

    Useful as a nonlinearity-free yardstick for level selection and
    complexity sweeps.
    """
    return BoundConstants(
        kappa=1.0,
        f0_abs=0.0,
        horizon=1.0,
        coercivity_c=0.0,
        lipschitz_local=lambda r: 0.0,
    )


def apriori_sup_bound(c: float, kappa: float, elapsed: float) -> float:
    """Growth bound on the solution: e^{c * elapsed} (1 + kappa^2)^{1/2}."""
    if c < 0.0 or kappa < 0.0:
        raise ValueError("c and kappa must be >= 0")
    if elapsed < 0.0:
        raise ValueError(f"elapsed must be >= 0, got {elapsed}")
    return math.exp(c * elapsed) * math.sqrt(1.0 + kappa * kappa)


def rho_min(problem: PdeProblem) -> float:
    """Smallest truncation radius for which the error bound is a theorem.

    Any r >= rho_min dominates the solution's a-priori sup over [0, T], so
    the truncation never bites on the exact solution.
    """
    return apriori_sup_bound(
        problem.nonlinearity.coercivity_c,
        problem.data.sup_bound_kappa,
        problem.horizon,
    )


def radius_admissible(consts: BoundConstants, r: float) -> bool:
    return r >= apriori_sup_bound(consts.coercivity_c, consts.kappa, consts.horizon)


def error_bound(consts: BoundConstants, n: int, M: int, r: float) -> float:
    """L2 error bound for the level-n estimator with branching M, radius r.

    A theorem only when r >= rho_min; computed unconditionally (use
    radius_admissible to flag the gap).
    """
    if n < 0 or M < 1:
        raise ValueError(f"need n >= 0 and M >= 1, got n={n}, M={M}")
    if not r > 0.0:
        raise ValueError(f"radius must be > 0, got {r}")
    L = consts.lipschitz_local(r)
    T = consts.horizon
    prefactor = math.exp(L * T) * (consts.kappa + T * consts.f0_abs)
    return prefactor * math.exp(M / 2.0) * (1.0 + 2.0 * L * T) ** n * M ** (-n / 2.0)


def error_bound_general(
    lipschitz_L: float,
    horizon: float,
    n: int,
    M: int,
    g_moment_sqrt: float,
    f0_moment_sqrt: float,
) -> float:
    """Error bound with user-supplied moment constants.

    g_moment_sqrt is (E|g(X_{0,T,x})|^2)^{1/2}; f0_moment_sqrt is
    (int_0^T E|f(s, X_{0,s,x}, 0)|^2 ds)^{1/2}.  Both are problem-specific
    integrals no generic code can compute, so they are inputs.
    """
    if n < 0 or M < 1:
        raise ValueError(f"need n >= 0 and M >= 1, got n={n}, M={M}")
    pre = math.exp(lipschitz_L * horizon) * (
        g_moment_sqrt + math.sqrt(horizon) * f0_moment_sqrt
    )
    return (
        pre
        * math.exp(M / 2.0)
        * (1.0 + 2.0 * lipschitz_L * horizon) ** n
        * M ** (-n / 2.0)
    )


def cost_recursion(d: int, n: int, M: int) -> int:
    """Exact draw-count model per realization (equality-defined).

    Exact integer arithmetic throughout; Python integers are unbounded, so
    extreme (n, M) cannot wrap around.
    """
    if d < 1 or n < 0 or M < 1:
        raise ValueError(f"need d >= 1, n >= 0, M >= 1, got d={d}, n={n}, M={M}")
    costs = [0] * (n + 1)
    for level in range(1, n + 1):
        total = (2 * d + 1) * M**level
        for l in range(1, level):
            total += M ** (level - l) * (d + 1 + costs[l] + costs[l - 1])
        costs[level] = total
    return costs[n]


def cost_bound(d: int, n: int, M: int) -> int:
    """Closed-form bound d (5M)^n on the cost recursion."""
    if d < 1 or n < 1 or M < 1:
        raise ValueError(f"need d >= 1, n >= 1, M >= 1, got d={d}, n={n}, M={M}")
    return d * (5 * M) ** n


def select_levels(
    epsilon: float,
    consts: BoundConstants,
    schedule: TruncationSchedule,
    n_max: int = 64,
) -> int:
    """Least n with error_bound(m, m, radius_at(m)) <= epsilon for all
    m in [n, n_max].

    The true rule takes a supremum over all m >= n; the scan caps it at
    n_max and additionally requires the bound sequence to be nonincreasing
    on the last three levels, a finite proxy for the vanishing tail.  When
    the cap binds (no level qualifies, or the tail is not settling) a
    CapExceededError reports the smallest achieved bound.
    """
    if not 0.0 < epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in (0, 1], got {epsilon}")
    if n_max < 3:
        raise ValueError(f"n_max must be >= 3, got {n_max}")
    bounds = [
        error_bound(consts, m, m, schedule.radius_at(m))
        for m in range(1, n_max + 1)
    ]
    # suffix_sup[i] = max over bounds[i:]
    suffix_sup = list(bounds)
    for i in range(n_max - 2, -1, -1):
        suffix_sup[i] = max(suffix_sup[i], suffix_sup[i + 1])
    tail_decreasing = bounds[-3] >= bounds[-2] >= bounds[-1]
    if not tail_decreasing:
        raise CapExceededError(
            f"cap exceeded: bound sequence not decreasing at n_max={n_max} "
            f"(tail {bounds[-3]:.3e}, {bounds[-2]:.3e}, {bounds[-1]:.3e}); "
            "the capped scan cannot stand in for the tail supremum",
            epsilon,
            n_max,
            min(suffix_sup),
        )
    for n in range(1, n_max + 1):
        if suffix_sup[n - 1] <= epsilon:
            return n
    raise CapExceededError(
        f"cap exceeded: no level n <= {n_max} achieves bound <= {epsilon:.3e} "
        f"(smallest achieved bound {min(suffix_sup):.3e})",
        epsilon,
        n_max,
        min(suffix_sup),
    )


def cumulative_cost(d: int, N: int, K: int = 0) -> int:
    """Total model cost of running the diagonal family n = M = 1..N+K."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if K < 0:
        raise ValueError(f"K must be >= 0, got {K}")
    return sum(cost_recursion(d, n, n) for n in range(1, N + K + 1))
