"""Divergence studies at finite truncation and log-log growth fits.

Nothing here can observe a divergence; what is measured is monotone growth
in ``N`` or as ``s`` decreases toward 1, and how well ``a*log(log N) + b``
describes the partial sums.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .admissible import as_tuple, check_admissible, count_tuples
from .errors import DomainError, TableRangeError
from .series import TupleWeightContext, log_zeta_k_deriv, prime_form_sum
from .sieve import SieveTable
from .summation import chunked_sum, compensated_sum

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class MertensProbe:
    N: int
    sum_recip_primes: float
    loglog_psi: float
    delta: float


@dataclass(frozen=True)
class GrowthFit:
    a: float
    b: float
    r2: float
    samples: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    degenerate: bool = False

    @property
    def longest_sign_run(self) -> int:
        best = run = 0
        prev = 0
        for r in self.residuals:
            sign = (r > 0) - (r < 0)
            run = run + 1 if sign and sign == prev else (1 if sign else 0)
            prev = sign
            best = max(best, run)
        return best


def fit_loglog(samples) -> GrowthFit:
    """Ordinary least squares of partial sums against ``log(log N)``."""
    samples = [(int(N), float(v)) for N, v in samples]
    if len(samples) < 3:
        raise DomainError(f"need at least 3 grid points, got {len(samples)}")
    if min(N for N, _ in samples) < 3:
        raise DomainError("log(log N) needs N >= 3")
    x = np.log(np.log(np.array([N for N, _ in samples], dtype=np.float64)))
    y = np.array([v for _, v in samples])
    A = np.column_stack([x, np.ones_like(x)])
    (a, b), *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - (a * x + b)
    ss_tot = float(((y - y.mean()) ** 2).sum())
    scale = max(1.0, float(np.abs(y).max()))
    if ss_tot <= (1e-12 * scale) ** 2:
        # constant partial sums: the slope carries no information
        return GrowthFit(0.0, float(y.mean()), 0.0, samples, [0.0] * len(y), True)
    r2 = min(1.0, max(0.0, 1.0 - float((resid**2).sum()) / ss_tot))
    return GrowthFit(float(a), float(b), r2, samples, resid.tolist(), False)


def _check_grid(grid, table: SieveTable, extra: int = 0):
    grid = [int(N) for N in grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError(f"grid must be strictly ascending: {grid}")
    if grid and grid[-1] + extra > table.limit:
        raise TableRangeError(f"grid point {grid[-1]} (+{extra}) exceeds sieve limit {table.limit}")
    return grid


def euler_baseline(N_grid, table: SieveTable) -> list[MertensProbe]:
    """Sum of 1/p against log(log(psi(N))) on each grid point."""
    grid = _check_grid(N_grid, table)
    if grid and grid[0] < 2:
        raise DomainError("N must be >= 2")
    primes = table.prime_array(2, grid[-1]) if grid else np.zeros(0, np.int64)
    recip = 1.0 / primes.astype(np.float64)
    out = []
    for N in grid:
        cut = int(np.searchsorted(primes, N, side="right"))
        s = chunked_sum(recip[:cut], primes[:cut])[0]
        psi = table.chebyshev_psi(N)
        ll = math.log(math.log(psi)) if psi > math.e else float("nan")
        out.append(MertensProbe(N, s, ll, s - ll))
    return out


def tuple_divergence_probe(H, m: int, N_grid, table: SieveTable, threads: int = 1) -> GrowthFit:
    """Partial sums of the prime-form series at ``s = 1`` and their log-log fit."""
    H = as_tuple(H)
    grid = _check_grid(N_grid, table, H.diameter)
    if len(grid) < 3:
        raise DomainError(f"need at least 3 grid points, got {len(grid)}")
    ctx = TupleWeightContext(H, table, threads)
    samples = [(N, prime_form_sum(m, 1.0, N, ctx, force=True).value) for N in grid]
    fit = fit_loglog(samples)
    if fit.degenerate:
        log.warning("partial sums for H=%s, m=%d are constant on the grid; fit is degenerate", H, m)
    return fit


def proposition_probe(two_j: int, s_grid, N: int, table: SieveTable, threads: int = 1):
    """First derivative series for ``{0, 2j}`` across ``s_grid``."""
    ctx = TupleWeightContext((0, two_j), table, threads)
    return [(float(s), log_zeta_k_deriv(1, s, N, ctx).value) for s in s_grid]


def theorem_ratio_probe(H, s_grid, N: int, table: SieveTable, threads: int = 1):
    """Prime-form over von-Mangoldt-form series, both with ``k - 1`` log factors."""
    H = as_tuple(H)
    if not check_admissible(H).admissible:
        log.warning("H=%s is not admissible; computing the ratio anyway", H)
    ctx = TupleWeightContext(H, table, threads)
    m = H.k - 1
    rows = []
    for s in s_grid:
        den = log_zeta_k_deriv(m, s, N, ctx).value
        if den == 0:
            raise DomainError(f"zero denominator at s={s}, N={N}")
        rows.append((float(s), prime_form_sum(m, s, N, ctx).value / den))
    return rows


def twin_corollary_probe(H, limit: int, table: SieveTable) -> dict:
    """Count full tuples up to ``limit`` once per offset pair whose gap is an even power.

    Every even gap is a first power of itself, so every pair qualifies; the key
    records the pair and the value the shared tuple count.
    """
    H = as_tuple(H)
    if not check_admissible(H).admissible:
        raise DomainError(f"H={H} is not admissible")
    if H.k < 2:
        return {}
    total = count_tuples(H, limit, table)
    return {pair: total for pair in combinations(H.offsets, 2)}


def similarity_probe(two_j: int, N_grid, table: SieveTable):
    """Compare the two sides of the informal step in the pair divergence argument.

    Returns rows ``(N, lhs, rhs, ratio)`` with
    ``lhs = sum lambda_(2)(n) log(n_(2)) / (n + 2j)`` and
    ``rhs = sum w_(2)(n) Lambda(n) / ((n + 2j) log(n + 2j))``.
    """
    grid = _check_grid(N_grid, table, two_j)
    ctx = TupleWeightContext((0, two_j), table)
    sup = ctx.support(grid[-1])
    shifted = (sup.n + two_j).astype(np.float64)
    lhs_terms = sup.lam * sup.log_nk / shifted
    vm = np.array([table.von_mangoldt(int(n)) for n in sup.n])
    rhs_terms = vm / (shifted * np.log(shifted))
    rows = []
    for N in grid:
        cut = int(np.searchsorted(sup.n, N, side="right"))
        a = compensated_sum(lhs_terms[:cut])[0]
        b = compensated_sum(rhs_terms[:cut])[0]
        rows.append((N, a, b, a / b if b else math.nan))
    return rows


def induction_hypothesis_probe(H, N_grid, table: SieveTable):
    """Running maximum of ``w lambda_(k)(n) log(n_(k))**(k-1) / lambda(n + h_k)``.

    ``lambda(x) = Lambda(x) / log(x)``.  Rows are ``(N, running_max)``.
    """
    H = as_tuple(H)
    grid = _check_grid(N_grid, table, H.diameter)
    ctx = TupleWeightContext(H, table)
    sup = ctx.support(grid[-1])
    last = np.array([table.prime_power_exponent(int(n) + H.diameter) for n in sup.n], dtype=float)
    ratio = sup.lam * sup.log_nk ** (H.k - 1) * last
    running = np.maximum.accumulate(ratio) if ratio.size else ratio
    rows = []
    for N in grid:
        cut = int(np.searchsorted(sup.n, N, side="right"))
        rows.append((N, float(running[cut - 1]) if cut else 0.0))
    return rows
