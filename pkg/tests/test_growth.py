import math

import numpy as np
import pytest

from tzl.errors import DomainError
from tzl.growth import (GrowthFit, euler_baseline, fit_loglog, induction_hypothesis_probe,
                        proposition_probe, similarity_probe, theorem_ratio_probe,
                        tuple_divergence_probe, twin_corollary_probe)

import oracles


def test_euler_small(small_table):
    p2, p10 = euler_baseline([2, 10], small_table)
    assert p2.sum_recip_primes == 0.5
    assert p10.sum_recip_primes == pytest.approx(1 / 2 + 1 / 3 + 1 / 5 + 1 / 7, rel=1e-15)
    assert p10.loglog_psi == pytest.approx(math.log(math.log(math.log(2520))), rel=1e-14)


def test_euler_monotone_and_settling(table_1e6):
    probes = euler_baseline([10**3, 10**4, 10**5, 10**6], table_1e6)
    sums = [p.sum_recip_primes for p in probes]
    assert all(b > a for a, b in zip(sums, sums[1:]))
    assert abs(probes[-1].delta - probes[-2].delta) < 0.01


def test_single_prime_divergence_matches_euler(table_1e6):
    grid = [10**3, 10**4, 10**5, 10**6]
    fit = tuple_divergence_probe("0", 0, grid, table_1e6)
    for (N, v), p in zip(fit.samples, euler_baseline(grid, table_1e6)):
        assert v == pytest.approx(p.sum_recip_primes, rel=1e-14)


def test_twin_divergence(table_1e6):
    fit = tuple_divergence_probe("0,2", 1, [10**3, 10**4, 10**5, 10**6], table_1e6)
    values = [v for _, v in fit.samples]
    assert all(b > a for a, b in zip(values, values[1:]))
    assert fit.r2 >= 0.95 and not fit.degenerate
    first = sum(math.log(math.sqrt(p * (p + 2))) / math.sqrt(p * (p + 2))
                for p in range(3, 1001) if oracles.is_prime(p) and oracles.is_prime(p + 2))
    assert values[0] == pytest.approx(first, rel=1e-13)


def test_inadmissible_triple_is_degenerate(small_table):
    fit = tuple_divergence_probe("0,2,4", 2, [10, 100, 1000], small_table)
    assert fit.degenerate
    only = math.log((3 * 5 * 7) ** (1 / 3)) ** 2 / (3 * 5 * 7) ** (1 / 3)
    assert all(v == pytest.approx(only, rel=1e-14) for _, v in fit.samples)


def test_fit_recovers_exact_law():
    grid = [10**3, 10**4, 10**5, 10**6]
    fit = fit_loglog([(N, 1.7 * math.log(math.log(N)) - 0.3) for N in grid])
    assert fit.a == pytest.approx(1.7) and fit.b == pytest.approx(-0.3)
    assert fit.r2 == pytest.approx(1.0)
    with pytest.raises(DomainError):
        fit_loglog([(10, 1.0), (100, 2.0)])


def test_sign_run():
    assert GrowthFit(0, 0, 1, residuals=[1, 1, -1, 1, 1, 1, -1]).longest_sign_run == 3


def test_proposition_probe(table_1e6):
    rows = proposition_probe(2, [2.0], 10, table_1e6)
    assert rows[0][1] == pytest.approx(oracles.series_brute((0, 2), 2, 10, 1), rel=1e-14)
    for gap in (2, 4):
        vals = [v for _, v in proposition_probe(gap, [1.5, 1.2, 1.1, 1.05], 10**6, table_1e6)]
        assert all(b > a for a, b in zip(vals, vals[1:]))


def test_ratio_probe(table_1e6):
    (_, r), = theorem_ratio_probe("0", [2.0], 10**6, table_1e6)
    assert 0.9 < r < 1
    rows = theorem_ratio_probe("0,2", [1.5, 1.2, 1.1], 10**6, table_1e6)
    ratios = [r for _, r in rows]
    assert all(0 < r <= 1 + 1e-12 for r in ratios)
    assert all(b > a for a, b in zip(ratios, ratios[1:]))
    with pytest.raises(DomainError):
        theorem_ratio_probe("0,2", [1.5], 0, table_1e6)


def test_twin_corollary(small_table):
    assert twin_corollary_probe("0,2,6", 50, small_table) == {(0, 2): 4, (0, 6): 4, (2, 6): 4}
    assert twin_corollary_probe("0,2", 100, small_table) == {(0, 2): 8}
    assert twin_corollary_probe("0", 1000, small_table) == {}


def test_similarity_and_hypothesis_probes(table_1e6):
    rows = similarity_probe(2, [10**4, 10**5, 10**6], table_1e6)
    assert all(a > 0 and b > 0 and r == pytest.approx(a / b) for _, a, b, r in rows)
    hyp = induction_hypothesis_probe("0,2,6", [10**4, 10**5, 10**6], table_1e6)
    maxima = [v for _, v in hyp]
    assert all(b >= a for a, b in zip(maxima, maxima[1:]))
