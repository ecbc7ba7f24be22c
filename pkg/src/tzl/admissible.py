"""Offset tuples, admissibility, power classes of even shifts, tuple search.

A set of k offsets can only cover every residue class modulo p when k >= p,
so admissibility needs checking only at primes p <= k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import DomainError, ExtensionError, TableRangeError
from .sieve import SieveTable

DEFAULT_MAX_POWER = 4
_CHUNK = 1 << 22


def _primes_upto(k: int) -> list[int]:
    return [p for p in range(2, k + 1) if all(p % d for d in range(2, int(p**0.5) + 1))]


@dataclass(frozen=True)
class OffsetTuple:
    """Offsets ``{0, h_2, ..., h_k}``, strictly increasing, nonzero ones even."""

    offsets: tuple[int, ...]

    def __post_init__(self):
        offs = tuple(int(h) for h in self.offsets)
        object.__setattr__(self, "offsets", offs)
        if not offs or offs[0] != 0:
            raise DomainError(f"offsets must start at 0: {offs}")
        if any(b <= a for a, b in zip(offs, offs[1:])):
            raise DomainError(f"offsets must be strictly increasing: {offs}")
        if any(h % 2 for h in offs):
            raise DomainError(f"odd offset in {offs}; only even shifts can be admissible")

    @classmethod
    def parse(cls, text: str) -> "OffsetTuple":
        try:
            return cls(tuple(int(t) for t in text.replace(" ", "").split(",") if t))
        except ValueError as exc:
            raise DomainError(f"cannot parse offset tuple {text!r}") from exc

    def __str__(self):
        return ",".join(map(str, self.offsets))

    def __iter__(self):
        return iter(self.offsets)

    def __len__(self):
        return len(self.offsets)

    @property
    def k(self) -> int:
        return len(self.offsets)

    @property
    def diameter(self) -> int:
        return self.offsets[-1]

    @property
    def gaps(self) -> tuple[int, ...]:
        return tuple(b - a for a, b in zip(self.offsets, self.offsets[1:]))


@dataclass(frozen=True)
class AdmissibilityReport:
    admissible: bool
    witness_prime: int | None
    residue_profiles: dict[int, frozenset[int]] = field(default_factory=dict)


@dataclass(frozen=True)
class EquivalenceClass:
    base: int
    members: tuple[int, ...]


def as_tuple(H) -> OffsetTuple:
    if isinstance(H, OffsetTuple):
        return H
    if isinstance(H, str):
        return OffsetTuple.parse(H)
    return OffsetTuple(tuple(H))


def check_admissible(H) -> AdmissibilityReport:
    H = as_tuple(H)
    profiles = {p: frozenset(h % p for h in H) for p in _primes_upto(H.k)}
    witness = next((p for p, res in profiles.items() if len(res) == p), None)
    return AdmissibilityReport(witness is None, witness, profiles)


def _require_even(value: int, what: str):
    if value < 2 or value % 2:
        raise DomainError(f"{what} must be an even integer >= 2, got {value}")


def equivalence_class(base: int, bound: int) -> EquivalenceClass:
    """All powers ``base**l <= bound``, ascending."""
    _require_even(base, "base")
    if bound < base:
        raise DomainError(f"bound {bound} is below base {base}")
    members, q = [], base
    while q <= bound:
        members.append(q)
        q *= base
    return EquivalenceClass(base, tuple(members))


def _exact_root(h: int, l: int) -> int | None:
    r = round(h ** (1.0 / l))
    for c in (r - 1, r, r + 1):
        if c >= 2 and c**l == h:
            return c
    return None


def class_root(h: int) -> int:
    """Smallest even ``r`` with ``r**l == h`` for some ``l >= 1``."""
    _require_even(h, "h")
    for l in range(h.bit_length(), 1, -1):
        r = _exact_root(h, l)
        if r is not None:
            return r
    return h


def is_power_of(value: int, base: int) -> bool:
    if base < 2 or value < base:
        return False
    while value % base == 0:
        value //= base
    return value == 1


def extend_admissible(H, class_base: int, max_power: int = DEFAULT_MAX_POWER) -> OffsetTuple:
    """Append ``h_k + class_base**l`` for the smallest admissible ``l <= max_power``.

    Each candidate is checked directly with :func:`check_admissible`.
    """
    H = as_tuple(H)
    _require_even(class_base, "class_base")
    if max_power < 1:
        raise DomainError(f"max_power must be >= 1, got {max_power}")
    if not check_admissible(H).admissible:
        raise DomainError(f"cannot extend inadmissible tuple {H}")
    obstructions = {}
    for l in range(1, max_power + 1):
        cand = OffsetTuple(H.offsets + (H.diameter + class_base**l,))
        rep = check_admissible(cand)
        if rep.admissible:
            return cand
        obstructions[l] = (rep.witness_prime, sorted(rep.residue_profiles[rep.witness_prime]))
    raise ExtensionError(
        f"no power {class_base}^l with l <= {max_power} extends {H} admissibly", obstructions
    )


def _tuple_mask(H: OffsetTuple, lo: int, hi: int, table: SieveTable) -> np.ndarray:
    mask = table.is_prime_range(lo, hi)
    for h in H.offsets[1:]:
        mask &= table.is_prime_range(lo + h, hi + h)
    return mask


def _check_limit(H: OffsetTuple, limit: int, table: SieveTable):
    if limit < 1:
        raise DomainError(f"limit must be >= 1, got {limit}")
    if limit + H.diameter > table.limit:
        raise TableRangeError(
            f"limit {limit} + max offset {H.diameter} exceeds sieve limit {table.limit}"
        )


def enumerate_tuples(H, limit: int, table: SieveTable) -> Iterator[int]:
    """Base primes ``p <= limit`` with ``p + h`` prime for every offset, ascending."""
    H = as_tuple(H)
    _check_limit(H, limit, table)
    for lo in range(1, limit + 1, _CHUNK):
        hi = min(limit + 1, lo + _CHUNK)
        for i in np.flatnonzero(_tuple_mask(H, lo, hi, table)):
            yield int(i) + lo


def tuple_array(H, limit: int, table: SieveTable) -> np.ndarray:
    H = as_tuple(H)
    _check_limit(H, limit, table)
    parts = [
        np.flatnonzero(_tuple_mask(H, lo, min(limit + 1, lo + _CHUNK), table)) + lo
        for lo in range(1, limit + 1, _CHUNK)
    ]
    return np.concatenate(parts).astype(np.int64)


def count_tuples(H, limit: int, table: SieveTable) -> int:
    H = as_tuple(H)
    _check_limit(H, limit, table)
    return sum(
        int(_tuple_mask(H, lo, min(limit + 1, lo + _CHUNK), table).sum())
        for lo in range(1, limit + 1, _CHUNK)
    )
