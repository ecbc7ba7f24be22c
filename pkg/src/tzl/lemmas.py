"""Finite-N audits of the shift inequalities between prime-pair series.

For an even gap ``g`` write ``A_g(a, b)`` for

    sum_{a <= n <= b} mu_(2)(n) lambda_(2)(n) log(n(n+g)) / (n(n+g))**(s/2)

over the pair offsets ``{0, g}``.  The two audited inequalities compare
``A`` for a gap and for one of its integer powers, each with an explicit
window remainder.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .admissible import is_power_of
from .errors import DomainError, TableRangeError
from .series import TupleWeightContext, log_zeta_k_deriv, mu_lambda_log_sum
from .sieve import SieveTable

REL_TOL = 1e-9


@dataclass(frozen=True)
class LemmaReport:
    lhs: float
    rhs: float
    remainder: float
    holds: bool
    margin: float
    params: dict = field(default_factory=dict)
    window: tuple[int, int] = (0, 0)

    def row(self) -> dict:
        out = {k: v for k, v in asdict(self).items() if k not in ("params", "window")}
        out.update(self.params)
        out["window_lo"], out["window_hi"] = self.window
        return out


@dataclass(frozen=True)
class RayCheck:
    pairs_checked: int
    violations: int
    first_violation: int | None


def _pair_sum(gap: int, s: float, lo: int, hi: int, table: SieveTable) -> float:
    return mu_lambda_log_sum(s, hi, TupleWeightContext((0, gap), table), start=lo)


def _validate(gap: int, l: int, s: float, table: SieveTable, N: int):
    if gap < 2 or gap % 2:
        raise DomainError(f"gap must be an even integer >= 2, got {gap}")
    if l < 1:
        raise DomainError(f"l must be >= 1, got {l}")
    if not s > 1:
        raise DomainError(f"s must be > 1, got {s}")
    big = gap**l
    if N + big > table.limit:
        raise TableRangeError(f"N={N} + gap {big} exceeds sieve limit {table.limit}")
    return big


def _report(lhs, rhs, remainder, params, window):
    margin = lhs - rhs + remainder
    tol = REL_TOL * max(abs(lhs), abs(rhs))
    return LemmaReport(lhs, rhs, remainder, margin >= -tol, margin, params, window)


def lemma2_check(two_i: int, l: int, s: float, N: int, table: SieveTable) -> LemmaReport:
    """``A_{2i}(1, N) >= A_{2j}(1, N - d) - R`` with ``2j = (2i)**l``, ``d = 2j - 2i``.

    ``R`` is the trailing window ``A_{2j}(N + 1 - d, N)``, the finite stand-in
    for the tail-window limit.
    """
    two_j = _validate(two_i, l, s, table, N)
    d = two_j - two_i
    if N <= 1 + d:
        raise DomainError(f"N={N} must exceed 1 + (2j - 2i) = {1 + d}")
    lhs = _pair_sum(two_i, s, 1, N, table)
    rhs = _pair_sum(two_j, s, 1, N - d, table)
    rem = _pair_sum(two_j, s, N + 1 - d, N, table)
    params = {"two_i": two_i, "two_j": two_j, "l": l, "s": s, "N": N}
    return _report(lhs, rhs, rem, params, (N + 1 - d, N))


def lemma3_check(two_j: int, l: int, s: float, N: int, table: SieveTable) -> LemmaReport:
    """``A_{2m}(1, N) >= A_{2j}(1, N) - R`` with ``2m = (2j)**l``.

    ``R`` is the head window ``A_{2j}(1, 2m - 2j)``.
    """
    two_m = _validate(two_j, l, s, table, N)
    d = two_m - two_j
    lhs = _pair_sum(two_m, s, 1, N, table)
    rhs = _pair_sum(two_j, s, 1, N, table)
    rem = _pair_sum(two_j, s, 1, d, table)
    params = {"two_j": two_j, "two_m": two_m, "l": l, "s": s, "N": N}
    return _report(lhs, rhs, rem, params, (1, d))


def gcd_shift_audit(two_i: int, two_j: int, N: int, *, force: bool = False) -> RayCheck:
    """Check that ``n -> n' = n + 2i - 2j`` keeps coprime pairs coprime.

    Counts ``n <= N`` with ``gcd(n, n + 2i) == 1`` but ``gcd(n', n' + 2j) != 1``.
    """
    for v, name in ((two_i, "two_i"), (two_j, "two_j")):
        if v < 2 or v % 2:
            raise DomainError(f"{name} must be an even integer >= 2, got {v}")
    if not force and not (two_i == two_j or is_power_of(two_j, two_i)):
        raise DomainError(f"{two_j} is not a power of {two_i}; pass force to audit anyway")
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    n = np.arange(1, N + 1, dtype=np.int64)
    coprime = np.gcd(n, n + two_i) == 1
    shifted = n + two_i - two_j
    bad = coprime & (np.gcd(shifted, shifted + two_j) != 1)
    hits = np.flatnonzero(bad)
    return RayCheck(int(coprime.sum()), int(hits.size), int(hits[0]) + 1 if hits.size else None)


def corollary_equivalence_probe(two_i: int, l: int, s_grid, N: int,
                                table: SieveTable) -> list[tuple[float, float]]:
    """Raw ratio of the first derivative series for ``{0, 2i}`` over ``{0, (2i)**l}``."""
    two_j = _validate(two_i, l, min(s_grid), table, N)
    ci = TupleWeightContext((0, two_i), table)
    cj = ci if two_j == two_i else TupleWeightContext((0, two_j), table)
    rows = []
    for s in s_grid:
        num = log_zeta_k_deriv(1, s, N, ci).value
        den = log_zeta_k_deriv(1, s, N, cj).value
        rows.append((float(s), num / den if den else math.inf))
    return rows
