"""Deterministic compensated summation over fixed-size chunks.

Each chunk is reduced with :func:`math.fsum` (exactly rounded), and the chunk
partials are reduced the same way in chunk order.  Chunk boundaries depend
only on the index of a term, never on the worker count, so results are
bit-identical for any ``threads``.
"""

from __future__ import annotations

import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

EPS = sys.float_info.epsilon
SUM_CHUNK = 10**6


def compensated_sum(terms, *, term_ulps: float = 0.0) -> tuple[float, float]:
    """Return ``(value, err_bound)`` for a flat array of terms.

    ``term_ulps`` is the relative error (in units of eps) already carried by
    each term from its evaluation; it enters the bound as ``ulps*eps*sum|t|``.
    """
    terms = np.asarray(terms, dtype=np.float64)
    value = math.fsum(terms)
    err = term_ulps * EPS * float(np.abs(terms).sum()) + 0.5 * EPS * abs(value)
    return value, err


def chunked_sum(terms, keys, *, term_ulps: float = 0.0, threads: int = 1,
                chunk: int = SUM_CHUNK) -> tuple[float, float]:
    """Sum ``terms`` grouped by ``keys // chunk`` (``keys`` ascending).

    ``keys`` are the summation indices ``n``; the grouping therefore lands on
    fixed 10**6 boundaries of ``n`` whatever the sparsity of the terms.
    """
    terms = np.asarray(terms, dtype=np.float64)
    keys = np.asarray(keys)
    if terms.size == 0:
        return 0.0, 0.0
    groups = keys // chunk
    cuts = np.flatnonzero(np.diff(groups)) + 1
    pieces = np.split(terms, cuts)
    if threads > 1 and len(pieces) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda t: compensated_sum(t, term_ulps=term_ulps), pieces))
    else:
        parts = [compensated_sum(t, term_ulps=term_ulps) for t in pieces]
    value = math.fsum(p[0] for p in parts)
    err = math.fsum(p[1] for p in parts) + 0.5 * EPS * abs(value)
    return value, err
