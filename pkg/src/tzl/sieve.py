"""Segmented odd-only sieve and the arithmetic-function table built on it.

The table stores primality as a packed bitset over odd integers (bit ``i``
stands for ``2*i + 1``) plus a short sorted list of the higher prime powers
``p**a`` with ``a >= 2``.  Von Mangoldt values are derived from those records
on demand, and Moebius values are produced by a small range sieve, so a table
up to 10**8 costs a little over 6 MB.
"""

from __future__ import annotations

import math
import os
import struct
import threading
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Iterator

import numpy as np

from .errors import DomainError, ResourceError, TableRangeError
from .summation import compensated_sum

DEFAULT_SEGMENT_SIZE = 1 << 22
DEFAULT_MEMORY_BUDGET = 1 << 30
CACHE_MAGIC = b"TZL1"
MOBIUS_BLOCK = 1 << 16
_CHUNK = 1 << 22


def small_primes(limit: int) -> np.ndarray:
    """Plain Eratosthenes up to ``limit`` inclusive; used for base primes."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def _sieve_segment(i0: int, slots: int, n_odd: int, base: np.ndarray) -> np.ndarray:
    # slot i <-> odd integer 2*i + 1, segment covers slots [i0, i0 + slots)
    seg = np.ones(slots, dtype=bool)
    valid = min(slots, n_odd - i0)
    seg[valid:] = False
    if i0 == 0:
        seg[0] = False  # 1 is not prime
    n_lo = 2 * i0 + 1
    n_hi = 2 * (i0 + valid) - 1
    for p in base:
        p = int(p)
        if p == 2:
            continue
        pp = p * p
        if pp > n_hi:
            break
        start = max(pp, -(-n_lo // p) * p)
        if start % 2 == 0:
            start += p
        idx = (start - 1) // 2 - i0
        if idx < valid:
            seg[idx:valid:p] = False
    return seg


class SieveTable:
    """Immutable table of primality, von Mangoldt and Moebius data on 1..limit.

    Build one with :func:`build_sieve`.  Scalar queries are O(1) (Moebius is
    O(1) amortised over a cached block); the ``*_range`` methods return numpy
    arrays for half-open ranges ``[lo, hi)`` and are what the series code uses.
    """

    def __init__(self, limit: int, bits: np.ndarray, prime_count: int):
        self.limit = int(limit)
        self._bits = bits
        self._bits.setflags(write=False)
        self.prime_count = int(prime_count)
        self._base = small_primes(math.isqrt(self.limit))
        values, bases, exps = [], [], []
        for p in self._base:
            p = int(p)
            q, a = p * p, 2
            while q <= self.limit:
                values.append(q)
                bases.append(p)
                exps.append(a)
                q *= p
                a += 1
        order = np.argsort(values, kind="stable")
        self._pp_values = np.asarray(values, dtype=np.int64)[order]
        self._pp_bases = np.asarray(bases, dtype=np.int64)[order]
        self._pp_exps = np.asarray(exps, dtype=np.int8)[order]
        self._mu_cache: dict[int, np.ndarray] = {}
        self._mu_lock = threading.Lock()

    def __repr__(self):
        return f"SieveTable(limit={self.limit}, primes={self.prime_count})"

    # scalar queries -------------------------------------------------------

    def _check(self, n: int):
        if n < 1 or n > self.limit:
            raise TableRangeError(f"n={n} outside table range 1..{self.limit}")

    def is_prime(self, n: int) -> bool:
        self._check(n)
        if n == 2:
            return True
        if n % 2 == 0:
            return False
        i = (n - 1) >> 1
        return bool((self._bits[i >> 3] >> (i & 7)) & 1)

    def _pp_index(self, n: int) -> int:
        j = int(np.searchsorted(self._pp_values, n))
        if j < len(self._pp_values) and self._pp_values[j] == n:
            return j
        return -1

    def prime_power_exponent(self, n: int) -> int:
        """``a`` when ``n == p**a`` for a prime ``p``, else 0."""
        if self.is_prime(n):
            return 1
        j = self._pp_index(n)
        return int(self._pp_exps[j]) if j >= 0 else 0

    def prime_power_base(self, n: int) -> int:
        """The prime ``p`` with ``n == p**a``, or 0 if ``n`` is not a prime power."""
        if self.is_prime(n):
            return n
        j = self._pp_index(n)
        return int(self._pp_bases[j]) if j >= 0 else 0

    def von_mangoldt(self, n: int) -> float:
        p = self.prime_power_base(n)
        return math.log(p) if p else 0.0

    def mobius(self, n: int) -> int:
        self._check(n)
        block = n // MOBIUS_BLOCK
        mu = self._mu_cache.get(block)
        if mu is None:
            lo = max(1, block * MOBIUS_BLOCK)
            hi = min(self.limit + 1, (block + 1) * MOBIUS_BLOCK)
            mu = self.mobius_range(lo, hi)
            with self._mu_lock:
                if len(self._mu_cache) > 64:
                    self._mu_cache.clear()
                self._mu_cache[block] = mu
        return int(mu[n - max(1, block * MOBIUS_BLOCK)])

    def count_primes(self, n: int) -> int:
        """pi(n) for ``0 <= n <= limit``."""
        if n < 2:
            return 0
        self._check(n)
        slots = (n + 1) // 2
        full, rest = divmod(slots, 8)
        count = int(np.bitwise_count(self._bits[:full]).sum())
        if rest:
            count += int(np.bitwise_count(self._bits[full] & ((1 << rest) - 1)))
        return count + 1

    # range queries --------------------------------------------------------

    def _check_range(self, lo: int, hi: int):
        if lo < 1 or hi > self.limit + 1 or lo > hi:
            raise TableRangeError(
                f"range [{lo}, {hi}) outside table range 1..{self.limit}"
            )

    def is_prime_range(self, lo: int, hi: int) -> np.ndarray:
        """Boolean primality of every integer in ``[lo, hi)``."""
        self._check_range(lo, hi)
        out = np.zeros(hi - lo, dtype=bool)
        if hi <= lo:
            return out
        first_odd = lo | 1
        if first_odd < hi:
            i0 = (first_odd - 1) >> 1
            i1 = (hi - 2) >> 1 if hi % 2 == 0 else (hi - 3) >> 1
            b0, b1 = i0 >> 3, (i1 >> 3) + 1
            unpacked = np.unpackbits(self._bits[b0:b1], bitorder="little")
            out[first_odd - lo :: 2] = unpacked[i0 - 8 * b0 : i1 - 8 * b0 + 1]
        if lo <= 2 < hi:
            out[2 - lo] = True
        return out

    def exponent_range(self, lo: int, hi: int) -> np.ndarray:
        """Prime-power exponent (0 when not a prime power) on ``[lo, hi)``."""
        ex = self.is_prime_range(lo, hi).astype(np.int8)
        a = np.searchsorted(self._pp_values, lo)
        b = np.searchsorted(self._pp_values, hi)
        ex[self._pp_values[a:b] - lo] = self._pp_exps[a:b]
        return ex

    def von_mangoldt_range(self, lo: int, hi: int) -> np.ndarray:
        self._check_range(lo, hi)
        out = np.zeros(hi - lo)
        primes = np.flatnonzero(self.is_prime_range(lo, hi))
        out[primes] = np.log((primes + lo).astype(np.float64))
        a = np.searchsorted(self._pp_values, lo)
        b = np.searchsorted(self._pp_values, hi)
        out[self._pp_values[a:b] - lo] = np.log(self._pp_bases[a:b].astype(np.float64))
        return out

    def mobius_range(self, lo: int, hi: int) -> np.ndarray:
        """Moebius values on ``[lo, hi)`` via a range sieve over the base primes."""
        self._check_range(lo, hi)
        size = hi - lo
        mu = np.ones(size, dtype=np.int8)
        prod = np.ones(size, dtype=np.int64)
        top = math.isqrt(hi - 1) if hi > 1 else 0
        for p in self._base:
            p = int(p)
            if p > top:
                break
            start = -(-lo // p) * p - lo
            mu[start::p] *= -1
            prod[start::p] *= p
            pp = p * p
            start = -(-lo // pp) * pp - lo
            mu[start::pp] = 0
        n = np.arange(lo, hi, dtype=np.int64)
        big = prod != n  # exactly one prime factor above sqrt(hi) remains
        mu[big] *= -1
        return mu

    def primes_in_range(self, a: int, b: int) -> Iterator[int]:
        """Stream the primes in ``[a, b]`` in ascending order."""
        if a > b:
            raise TableRangeError(f"empty range a={a} > b={b}")
        self._check_range(a, b + 1)
        for lo in range(a, b + 1, _CHUNK):
            hi = min(b + 1, lo + _CHUNK)
            for p in np.flatnonzero(self.is_prime_range(lo, hi)):
                yield int(p) + lo

    def prime_array(self, a: int, b: int) -> np.ndarray:
        self._check_range(a, b + 1)
        return np.flatnonzero(self.is_prime_range(a, b + 1)).astype(np.int64) + a

    def chebyshev_psi(self, N: int) -> float:
        if N < 1:
            raise TableRangeError(f"N={N} must be >= 1")
        self._check(N)
        primes = self.prime_array(1, N) if N >= 2 else np.zeros(0, dtype=np.int64)
        b = np.searchsorted(self._pp_values, N, side="right")
        terms = np.concatenate(
            [np.log(primes.astype(np.float64)), np.log(self._pp_bases[:b].astype(np.float64))]
        )
        return compensated_sum(terms)[0]

    # persistence ----------------------------------------------------------

    def bitset_bytes(self) -> bytes:
        return self._bits.tobytes()

    def save(self, path) -> Path:
        """Write the primality cache: magic, little-endian u64 limit, packed odd bits."""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(path.suffix + ".tmp")
        with open(tmp, "wb") as fh:
            fh.write(CACHE_MAGIC)
            fh.write(struct.pack("<Q", self.limit))
            fh.write(self._bits.tobytes())
        os.replace(tmp, path)
        return path

    @classmethod
    def load(cls, path) -> "SieveTable":
        with open(path, "rb") as fh:
            head = fh.read(12)
            if len(head) != 12 or head[:4] != CACHE_MAGIC:
                raise DomainError(f"{path}: not a TZL1 sieve cache")
            (limit,) = struct.unpack("<Q", head[4:])
            bits = np.frombuffer(fh.read(), dtype=np.uint8).copy()
        if len(bits) != -(-((limit + 1) // 2) // 8):
            raise DomainError(f"{path}: truncated bitset for limit {limit}")
        count = int(np.bitwise_count(bits).sum()) + (1 if limit >= 2 else 0)
        return cls(limit, bits, count)


def build_sieve(
    limit: int,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    *,
    threads: int = 1,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
) -> SieveTable:
    """Sieve 1..limit segment by segment; output does not depend on segment_size."""
    if limit < 2:
        raise DomainError(f"limit must be >= 2, got {limit}")
    if segment_size < 64:
        raise DomainError(f"segment_size must be >= 64, got {segment_size}")
    n_odd = (limit + 1) // 2
    slots = max(32, (segment_size // 2) // 8 * 8)
    need = -(-n_odd // 8) + slots + 8 * math.isqrt(limit)
    if need > memory_budget:
        raise ResourceError(
            f"sieve up to {limit} needs ~{need} bytes, over the memory budget of "
            f"{memory_budget} bytes"
        )
    base = small_primes(math.isqrt(limit))
    starts = range(0, n_odd, slots)

    def work(i0):
        seg = _sieve_segment(i0, slots, n_odd, base)
        return np.packbits(seg, bitorder="little"), int(seg.sum())

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, starts))
    else:
        parts = [work(i0) for i0 in starts]
    bits = np.concatenate([p[0] for p in parts])[: -(-n_odd // 8)]
    count = sum(p[1] for p in parts) + 1  # the prime 2
    return SieveTable(limit, bits, count)


def von_mangoldt(n: int, table: SieveTable) -> float:
    return table.von_mangoldt(n)


def mobius(n: int, table: SieveTable) -> int:
    return table.mobius(n)


def chebyshev_psi(N: int, table: SieveTable) -> float:
    """psi(N) = sum of Lambda(n) for n <= N, summed with error compensation."""
    return table.chebyshev_psi(N)


def primes_in_range(a: int, b: int, table: SieveTable) -> Iterator[int]:
    return table.primes_in_range(a, b)
