"""Tuple weights and truncated log-zeta-type series for an offset tuple.

For offsets ``H`` with ``k`` entries the per-``n`` ingredients are

* ``n_(k)``: geometric mean of ``n + h`` over all offsets,
* ``lambda_(k)(n)``: product of ``Lambda(n+h) / log(n+h)``, i.e. of ``1/a``
  when ``n + h = p**a`` (zero unless every component is a prime power),
* ``mu_(k)(n)``: ``(-1)**k`` times the product of ``mu(n+h)``,
* ``w_(k)(n)``: 1 when every component is a prime power.

Every series here has nonnegative terms and is reported unsigned.  The
derivative series of order ``m`` is ``(-1)**m`` times the ``m``-th
``s``-derivative of the base series.
"""

from __future__ import annotations

import enum
import math
import threading
from dataclasses import dataclass

import numpy as np

from .admissible import OffsetTuple, as_tuple
from .errors import DomainError, TableRangeError
from .sieve import SieveTable
from .summation import SUM_CHUNK, chunked_sum, compensated_sum

# per-term relative rounding, in eps, from log/exp/pow evaluation
_TERM_ULPS = 8.0

ZETA_DIRECT_TERMS = 10**4


class SeriesKind(str, enum.Enum):
    VON_MANGOLDT_FORM = "VON_MANGOLDT_FORM"
    PRIME_FORM = "PRIME_FORM"
    PRIME_POWER_REMAINDER = "PRIME_POWER_REMAINDER"


@dataclass(frozen=True)
class SeriesSample:
    s: float
    N: int
    m: int
    kind: SeriesKind
    value: float
    err_bound: float

    def row(self) -> dict:
        return {"s": self.s, "N": self.N, "m": self.m, "kind": self.kind.value,
                "value": self.value, "err_bound": self.err_bound}


@dataclass(frozen=True)
class TupleSupport:
    """The ``n`` at which every component is a prime power, with their weights."""

    n: np.ndarray
    lam: np.ndarray
    all_prime: np.ndarray
    all_power: np.ndarray
    mu_k: np.ndarray
    log_nk: np.ndarray

    def upto(self, N: int, start: int = 1) -> "TupleSupport":
        a = int(np.searchsorted(self.n, start))
        b = int(np.searchsorted(self.n, N, side="right"))
        return TupleSupport(self.n[a:b], self.lam[a:b], self.all_prime[a:b],
                            self.all_power[a:b], self.mu_k[a:b], self.log_nk[a:b])


class TupleWeightContext:
    """Offsets plus the table they are evaluated against.

    The nonzero support of ``lambda_(k)`` is computed once per context (for the
    largest ``N`` requested so far) and reused by every series.
    """

    def __init__(self, H, table: SieveTable, threads: int = 1):
        self.H = as_tuple(H)
        self.table = table
        self.threads = threads
        self._support: TupleSupport | None = None
        self._support_N = 0
        self._lock = threading.Lock()

    def __repr__(self):
        return f"TupleWeightContext(H={self.H}, limit={self.table.limit})"

    @property
    def k(self) -> int:
        return self.H.k

    def check_n(self, n: int):
        if n < 1:
            raise DomainError(f"n must be >= 1, got {n}")
        if n + self.H.diameter > self.table.limit:
            raise TableRangeError(
                f"n={n} + max offset {self.H.diameter} exceeds sieve limit {self.table.limit}"
            )

    def check_N(self, N: int):
        if N < 0:
            raise DomainError(f"N must be >= 0, got {N}")
        if N and N + self.H.diameter > self.table.limit:
            raise TableRangeError(
                f"N={N} + max offset {self.H.diameter} exceeds sieve limit {self.table.limit}"
            )

    def _support_chunk(self, lo: int, hi: int):
        exps = [self.table.exponent_range(lo + h, hi + h) for h in self.H]
        mask = np.ones(hi - lo, dtype=bool)
        for e in exps:
            mask &= e > 0
        idx = np.flatnonzero(mask)
        n = idx.astype(np.int64) + lo
        lam = np.ones(idx.size)
        all_prime = np.ones(idx.size, dtype=bool)
        all_power = np.ones(idx.size, dtype=bool)
        mu_prod = np.ones(idx.size, dtype=np.int8)
        logs = np.zeros(idx.size)
        for h, e in zip(self.H, exps):
            a = e[idx]
            lam /= a
            all_prime &= a == 1
            all_power &= a >= 2
            # mu(p) = -1, mu(p**a) = 0 for a >= 2
            mu_prod *= np.where(a == 1, -1, 0).astype(np.int8)
            logs += np.log((n + h).astype(np.float64))
        sign = -1 if self.k % 2 else 1
        return n, lam, all_prime, all_power, (sign * mu_prod).astype(np.int8), logs / self.k

    def support(self, N: int) -> TupleSupport:
        self.check_N(N)
        with self._lock:
            if self._support is None or N > self._support_N:
                chunks = [self._support_chunk(lo, min(N + 1, lo + SUM_CHUNK))
                          for lo in range(1, N + 1, SUM_CHUNK)]
                if chunks:
                    cols = [np.concatenate(c) for c in zip(*chunks)]
                else:
                    cols = [np.zeros(0, np.int64), np.zeros(0), np.zeros(0, bool),
                            np.zeros(0, bool), np.zeros(0, np.int8), np.zeros(0)]
                self._support = TupleSupport(*cols)
                self._support_N = N
            sup = self._support
        return sup.upto(N)


# pointwise weights -------------------------------------------------------


def geometric_mean_nk(n: int, H) -> float:
    """``(prod (n + h))**(1/k)`` evaluated as ``exp(mean log)``."""
    H = as_tuple(H)
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if H.k == 1:
        return float(n)
    return math.exp(math.fsum(math.log(n + h) for h in H) / H.k)


def lambda_k(n: int, ctx: TupleWeightContext) -> float:
    ctx.check_n(n)
    out = 1.0
    for h in ctx.H:
        a = ctx.table.prime_power_exponent(n + h)
        if a == 0:
            return 0.0
        out /= a
    return out


def mu_k(n: int, ctx: TupleWeightContext) -> int:
    ctx.check_n(n)
    out = -1 if ctx.k % 2 else 1
    for h in ctx.H:
        out *= ctx.table.mobius(n + h)
    return out


def w_k(n: int, ctx: TupleWeightContext) -> int:
    ctx.check_n(n)
    return int(all(ctx.table.prime_power_exponent(n + h) for h in ctx.H))


def big_lambda_k(n: int, ctx: TupleWeightContext) -> float:
    """``lambda_(k)(n) * log(n_(k))**k``."""
    return lambda_k(n, ctx) * math.log(geometric_mean_nk(n, ctx.H)) ** ctx.k


# series ------------------------------------------------------------------


def _check_s(s: float, force: bool):
    if not math.isfinite(s):
        raise DomainError(f"s must be finite, got {s}")
    if s <= 1 and not force:
        raise DomainError(f"s={s} is outside Re(s) > 1; pass force to explore it")


def series_terms(sup: TupleSupport, s: float, m: int, weights: np.ndarray) -> np.ndarray:
    """``weights * log(n_(k))**m / n_(k)**s`` over a support slice."""
    t = weights * np.exp(-s * sup.log_nk)
    if m:
        t = t * sup.log_nk**m
    return t


def _sample(sup, s, N, m, kind, weights, threads):
    terms = series_terms(sup, s, m, weights)
    value, err = chunked_sum(terms, sup.n, term_ulps=_TERM_ULPS + m, threads=threads)
    return SeriesSample(float(s), int(N), int(m), kind, value, err)


def log_zeta_k_deriv(m: int, s: float, N: int, ctx: TupleWeightContext,
                     *, force: bool = False) -> SeriesSample:
    """``sum_{n<=N} lambda_(k)(n) log(n_(k))**m / n_(k)**s`` (unsigned)."""
    if m < 0:
        raise DomainError(f"m must be >= 0, got {m}")
    _check_s(s, force)
    sup = ctx.support(N)
    return _sample(sup, s, N, m, SeriesKind.VON_MANGOLDT_FORM, sup.lam, ctx.threads)


def log_zeta_k(s: float, N: int, ctx: TupleWeightContext, *, force: bool = False) -> SeriesSample:
    return log_zeta_k_deriv(0, s, N, ctx, force=force)


def prime_form_sum(m: int, s: float, N: int, ctx: TupleWeightContext,
                   *, force: bool = False) -> SeriesSample:
    """Same series restricted to base primes whose every component is prime."""
    if m < 0:
        raise DomainError(f"m must be >= 0, got {m}")
    _check_s(s, force)
    sup = ctx.support(N)
    weights = sup.all_prime.astype(np.float64)
    return _sample(sup, s, N, m, SeriesKind.PRIME_FORM, weights, ctx.threads)


def remainder_sample(s: float, N: int, ctx: TupleWeightContext, *, force: bool = False) -> SeriesSample:
    _check_s(s, force)
    sup = ctx.support(N)
    weights = np.where(sup.all_prime, 0.0, sup.lam)
    return _sample(sup, s, N, 0, SeriesKind.PRIME_POWER_REMAINDER, weights, ctx.threads)


def remainder_S(s: float, N: int, ctx: TupleWeightContext, *, force: bool = False) -> float:
    """Prime-power part of ``log_zeta_k``: the terms with some ``n + h = p**a``, ``a >= 2``.

    Summed directly over those terms, so it is nonnegative by construction and
    equals ``log_zeta_k - prime_form_sum(0, ...)`` up to rounding.
    """
    return remainder_sample(s, N, ctx, force=force).value


def pure_power_sum(s: float, N: int, ctx: TupleWeightContext, *, force: bool = False) -> float:
    """Part of the remainder where every component is a proper power ``p**a``, ``a >= 2``.

    Mixed terms such as ``(2, 4)``, with one prime and one proper power, are
    excluded here but included in :func:`remainder_S`.
    """
    _check_s(s, force)
    sup = ctx.support(N)
    weights = np.where(sup.all_power, sup.lam, 0.0)
    return chunked_sum(series_terms(sup, s, 0, weights), sup.n, threads=ctx.threads)[0]


def mu_lambda_log_sum(s: float, N: int, ctx: TupleWeightContext, start: int = 1) -> float:
    """``sum_{start<=n<=N} mu_(k) lambda_(k) log(prod(n+h)) / prod(n+h)**(s/k)``."""
    _check_s(s, False)
    if N < start:
        return 0.0
    sup = ctx.support(N).upto(N, start)
    weights = sup.mu_k * sup.lam * ctx.k
    return chunked_sum(series_terms(sup, s, 1, weights), sup.n, threads=ctx.threads)[0]


# reference zeta ------------------------------------------------------------

# B_2/2!, B_4/4!, B_6/6!, B_8/8!
_EM_COEFFS = (1 / 12, -1 / 720, 1 / 30240, -1 / 1209600)


def zeta_eval(s: float, direct_terms: int = ZETA_DIRECT_TERMS) -> float:
    """Riemann zeta for real ``s > 1``: direct sum plus Euler-Maclaurin tail."""
    if not s > 1:
        raise DomainError(f"zeta_eval needs s > 1, got {s}")
    M = direct_terms
    n = np.arange(1, M, dtype=np.float64)
    head, _ = compensated_sum(n**-s)
    tail = [M ** (1 - s) / (s - 1), 0.5 * M**-s]
    rising = s  # s (s+1) ... (s+2j-2)
    for j, c in enumerate(_EM_COEFFS):
        tail.append(c * rising * M ** (-s - 2 * j - 1))
        rising *= (s + 2 * j + 1) * (s + 2 * j + 2)
    return math.fsum([head, *tail])
