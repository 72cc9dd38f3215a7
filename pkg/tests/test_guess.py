"""Tests for optimal guessing moments and the clustering-gain bounds."""

import itertools
import math

import numpy as np
import pytest

from renyibounds import (
    DomainError,
    InstanceTooLargeError,
    Pmf,
    aggregation_penalty,
    arikan_bounds,
    clustering_gain_bounds,
    exact_guessing_moment,
    flattest_coarsening,
    huffman_aggregation,
    ranking_permutation,
    renyi_entropy,
)

RNG = np.random.default_rng(141421)


def random_pmf(n):
    return Pmf(RNG.dirichlet(np.ones(n)))


def brute_moment(p, rho_g, k):
    masses = sorted(p.power(k).masses, reverse=True)
    return math.fsum(
        mass * float(rank) ** rho_g
        for rank, mass in enumerate(masses, start=1)
        if mass > 0.0
    )


def test_ranking_permutation():
    assert ranking_permutation(Pmf([0.2, 0.5, 0.3])) == (3, 1, 2)
    # ties resolve toward the smaller original index
    assert ranking_permutation(Pmf([0.25, 0.25, 0.5])) == (2, 3, 1)
    for _ in range(50):
        p = random_pmf(int(RNG.integers(2, 9)))
        ranks = ranking_permutation(p)
        assert sorted(ranks) == list(range(1, p.n + 1))
        by_rank = sorted(range(p.n), key=lambda i: ranks[i])
        masses = [p.masses[i] for i in by_rank]
        assert all(a >= b for a, b in zip(masses, masses[1:]))


def test_exact_moment_examples():
    for n in range(2, 7):
        assert math.isclose(exact_guessing_moment(Pmf.uniform(n), 1.0), (n + 1) / 2.0, rel_tol=1e-12)
    p = Pmf([0.5, 0.25, 0.25])
    assert math.isclose(exact_guessing_moment(p, 1.0), 1.75, abs_tol=1e-12)
    assert math.isclose(exact_guessing_moment(p, 2.0, 2), brute_moment(p, 2.0, 2), rel_tol=1e-12)


def test_exact_moment_matches_brute_force():
    for _ in range(40):
        n = int(RNG.integers(2, 6))
        k = int(RNG.integers(1, 4))
        rho_g = float(RNG.choice((0.5, 1.0, 2.0)))
        p = random_pmf(n)
        assert math.isclose(
            exact_guessing_moment(p, rho_g, k), brute_moment(p, rho_g, k), rel_tol=1e-11
        )
    # repeated masses: any tie resolution yields the same moment
    for p in (Pmf.uniform(4), Pmf([0.4, 0.3, 0.3]), Pmf([0.25, 0.25, 0.25, 0.25])):
        for k in (1, 2, 3):
            assert math.isclose(
                exact_guessing_moment(p, 1.5, k), brute_moment(p, 1.5, k), rel_tol=1e-11
            )


def test_exact_moment_skips_zero_atoms():
    padded = Pmf([0.5, 0.25, 0.25, 0.0])
    bare = Pmf([0.5, 0.25, 0.25])
    assert math.isclose(
        exact_guessing_moment(padded, 2.0, 2), exact_guessing_moment(bare, 2.0, 2), rel_tol=1e-12
    )


def test_ranking_is_optimal_among_permutations():
    for _ in range(20):
        n = int(RNG.integers(3, 6))
        p = random_pmf(n)
        for rho_g in (0.5, 1.0, 2.0):
            best = exact_guessing_moment(p, rho_g)
            for sigma in itertools.permutations(range(1, n + 1)):
                value = math.fsum(
                    mass * float(r) ** rho_g for mass, r in zip(p.masses, sigma)
                )
                assert value >= best - 1e-12


def test_moment_enumeration_cap():
    with pytest.raises(InstanceTooLargeError):
        exact_guessing_moment(Pmf.uniform(10), 1.0, 8)
    with pytest.raises(DomainError):
        exact_guessing_moment(Pmf.uniform(4), 0.0)
    with pytest.raises(DomainError):
        exact_guessing_moment(Pmf.uniform(4), -1.0)


def test_arikan_bounds_examples():
    for n in (2, 5, 9):
        for rho_g in (0.5, 1.0, 2.0):
            _, upper = arikan_bounds(Pmf.uniform(n), rho_g)
            assert math.isclose(upper, rho_g * math.log2(n), rel_tol=1e-12)
    p = Pmf([0.5, 0.25, 0.25])
    lower, upper = arikan_bounds(p, 1.0)
    assert math.isclose(upper, renyi_entropy(p, 0.5), rel_tol=1e-12)
    assert lower <= math.log2(1.75) <= upper


def test_arikan_bounds_bracket_exact_moments():
    for _ in range(30):
        n = int(RNG.integers(2, 7))
        k = int(RNG.integers(1, 4))
        rho_g = float(RNG.choice((0.5, 1.0, 2.0)))
        p = random_pmf(n)
        lower, upper = arikan_bounds(p, rho_g, k)
        value = math.log2(exact_guessing_moment(p, rho_g, k)) / k
        assert lower - 1e-10 <= value <= upper + 1e-10
        # the bracket width is exactly the vanishing correction term
        width = rho_g * math.log2(1.0 + k * math.log(n)) / k
        assert abs((upper - lower) - width) < 1e-12


def test_correction_term_vanishes_in_k():
    p = Pmf.geometric(24.0 / 25.0, 128)
    widths = []
    for k in (10**2, 10**3, 10**4, 10**5, 10**6):
        lower, upper = arikan_bounds(p, 1.0, k)
        widths.append(upper - lower)
    assert all(w1 > w2 for w1, w2 in zip(widths, widths[1:]))
    assert widths[-1] < 1e-4


def test_clustering_gain_report():
    p = Pmf(sorted(RNG.dirichlet(np.ones(12)), reverse=True))
    for rho_g in (0.5, 1.0, 2.0):
        for k in (1, 10, 1000):
            report = clustering_gain_bounds(p, 4, rho_g, k)
            assert report.k == k and report.rho_g == rho_g
            assert report.lower <= report.upper
            alpha = 1.0 / (1.0 + rho_g)
            budget = rho_g * aggregation_penalty(alpha) + rho_g * (
                math.log2(1.0 + k * math.log(12.0)) + math.log2(1.0 + k * math.log(4.0))
            ) / k
            assert report.upper - report.lower <= budget + 1e-12


def test_clustering_gain_formula_terms():
    p = Pmf(sorted(RNG.dirichlet(np.ones(8)), reverse=True))
    m, rho_g, k = 3, 2.0, 5
    report = clustering_gain_bounds(p, m, rho_g, k)
    alpha = 1.0 / (1.0 + rho_g)
    h_x = renyi_entropy(p, alpha)
    h_flat = renyi_entropy(flattest_coarsening(p, m), alpha)
    lower = rho_g * (h_x - h_flat) - rho_g * math.log2(1.0 + k * math.log(p.n)) / k
    upper = rho_g * (h_x - h_flat + aggregation_penalty(alpha)) + rho_g * math.log2(
        1.0 + k * math.log(m)
    ) / k
    assert abs(report.lower - lower) < 1e-12
    assert abs(report.upper - upper) < 1e-12


def test_clustering_gain_near_uniform_collapses():
    # when p(1) < 1/m the flattest coarsening is exactly uniform(m)
    n = 6
    raw = 1.0 + 0.01 * RNG.random(n)
    p = Pmf(sorted(raw / math.fsum(raw), reverse=True))
    m = n - 1
    flat = flattest_coarsening(p, m)
    assert all(abs(x - 1.0 / m) < 1e-15 for x in flat.masses)
    rho_g, k = 1.0, 100
    report = clustering_gain_bounds(p, m, rho_g, k)
    want = rho_g * (renyi_entropy(p, 0.5) - math.log2(m)) - rho_g * math.log2(
        1.0 + k * math.log(n)
    ) / k
    assert abs(report.lower - want) < 1e-12


def test_clustering_gain_brackets_exact_ratio():
    for _ in range(10):
        n, m, k = 6, 3, 2
        p = Pmf(sorted(RNG.dirichlet(np.ones(n)), reverse=True))
        agg, _ = huffman_aggregation(p, m)
        y = agg.induced(p)
        for rho_g in (0.5, 1.0, 2.0):
            gain = (
                math.log2(
                    exact_guessing_moment(p, rho_g, k) / exact_guessing_moment(y, rho_g, k)
                )
                / k
            )
            report = clustering_gain_bounds(p, m, rho_g, k)
            assert report.lower - 1e-10 <= gain <= report.upper + 1e-10


def test_clustering_gain_input_checks():
    with pytest.raises(DomainError):
        clustering_gain_bounds(Pmf([0.2, 0.3, 0.5]), 2, 1.0)  # unsorted
    with pytest.raises(DomainError):
        clustering_gain_bounds(Pmf([0.5, 0.3, 0.2]), 3, 1.0)  # m = n
    with pytest.raises(DomainError):
        clustering_gain_bounds(Pmf([0.5, 0.3, 0.2]), 2, 0.0)
