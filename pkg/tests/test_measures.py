import math
from itertools import combinations

import numpy as np
import pytest

from ersc import (
    GeneralParams,
    KahleParams,
    RngState,
    closure,
    counts,
    enumerate_space,
    exact_distribution,
    expected_a,
    expected_b,
    expected_f,
    expected_phi,
    full_simplex,
    hamiltonian_general,
    log_prob_general,
    log_prob_gnp,
    log_prob_kahle,
    log_prob_lm,
    sample_batch,
)
from ersc.measures import NotInSampleSpace, conditional_probability, kahle_for

P1, P2 = 0.4, 0.6


def test_kahle_three_vertex_values():
    params = KahleParams(3, (P1, P2))
    assert log_prob_kahle(full_simplex(3), params) == pytest.approx(math.log(P1**3 * P2), abs=1e-14)
    bare = closure([(0,), (1,), (2,)], 3)
    assert log_prob_kahle(bare, params) == pytest.approx(3 * math.log(1 - P1), abs=1e-14)
    S = enumerate_space("C_n", 3)
    assert sum(math.exp(log_prob_kahle(C, params)) for C in S) == pytest.approx(1.0, abs=1e-14)


def test_kahle_needs_all_vertices():
    with pytest.raises(NotInSampleSpace):
        log_prob_kahle(closure([(0, 1)], 3), KahleParams(3, (P1, P2)))


def test_kahle_zero_factor_is_minus_inf():
    params = KahleParams(3, (1.0, 0.5))
    assert log_prob_kahle(closure([(0, 1), (2,)], 3), params) == -math.inf


@pytest.mark.parametrize("kind,n", [("C_n", 3), ("C_n", 4), ("C_le_n", 3), ("C_le_n", 4)])
def test_normalisation(kind, n):
    S = enumerate_space(kind, n)
    if kind == "C_le_n":
        g = GeneralParams.random(n, 0.1, 0.9, seed=n)
        assert sum(math.exp(log_prob_general(C, g)) for C in S) == pytest.approx(1.0, abs=1e-10)
    else:
        k = KahleParams(n, tuple(np.linspace(0.2, 0.8, n - 1)))
        assert sum(math.exp(log_prob_kahle(C, k)) for C in S) == pytest.approx(1.0, abs=1e-10)


def test_graph_models_normalised_at_five():
    S = enumerate_space("graphs", 5)
    assert sum(math.exp(log_prob_gnp(C, 5, 0.3)) for C in S) == pytest.approx(1.0, abs=1e-10)


def test_general_empty_and_full():
    g = GeneralParams(3, {(0,): 0.2, (1,): 0.5}, 0.7)
    empty = closure([], 3)
    assert log_prob_general(empty, g) == pytest.approx(math.log(0.8 * 0.5 * 0.3))
    assert log_prob_general(full_simplex(4), GeneralParams(4, {}, 1.0)) == 0.0


def test_general_matches_kahle_when_vertices_certain():
    k = KahleParams(3, (P1, P2))
    g = GeneralParams.from_kahle(k)
    for C in enumerate_space("C_n", 3):
        assert log_prob_general(C, g) == pytest.approx(log_prob_kahle(C, k), abs=1e-14)


def test_hamiltonian_is_minus_log_prob():
    g = GeneralParams.random(3, 0.1, 0.9, seed=5)
    S = enumerate_space("C_le_n", 3)
    hs = np.array([hamiltonian_general(C, g)[0] for C in S])
    lp = np.array([log_prob_general(C, g) for C in S])
    assert np.abs(hs + lp).max() < 1e-12
    gibbs = np.exp(-hs) / np.exp(-hs).sum()
    assert np.abs(gibbs - np.exp(lp)).max() < 1e-14


def test_multipliers_at_one_half():
    _, m = hamiltonian_general(closure([], 3), GeneralParams(3, {}, 0.5))
    for s in [(0,), (0, 1), (0, 1, 2)]:
        assert m.alpha(s) == pytest.approx(0.0, abs=1e-15)
    assert m.beta((0, 1)) == pytest.approx(math.log(2))
    assert m.xi == pytest.approx(3 * math.log(2))


def test_kahle_multipliers():
    _, m = hamiltonian_general(closure([], 3), GeneralParams(3, {}, (0.999, P1, P2)))
    assert m.alpha((0, 1)) == pytest.approx(math.log((1 - P1) / P1))
    assert m.beta((0, 1, 2)) == pytest.approx(math.log(1 / (1 - P2)))


def test_hamiltonian_rejects_certain_probabilities():
    with pytest.raises(ValueError):
        hamiltonian_general(closure([], 3), GeneralParams(3, {}, 1.0))


def test_expected_three_vertex():
    k = KahleParams(3, (P1, P2))
    assert expected_f(k, 1) == pytest.approx(3 * P1)
    assert expected_f(k, 2) == pytest.approx(P1**3 * P2)
    assert expected_phi(k, 2) == pytest.approx(P1**3)
    assert expected_f(KahleParams(4, (0.5, 0.0, 0.3)), 2) == 0.0
    with pytest.raises(ValueError):
        expected_f(k, 3)


@pytest.mark.parametrize("n", [4, 5])
def test_expected_f_matches_enumeration(n):
    k = KahleParams(n, tuple(np.linspace(0.3, 0.7, n - 1)))
    dist = exact_distribution(k, enumerate_space("C_n", n))
    cs = [counts(C) for C in dist.space]
    for d in range(1, n):
        f = np.array([c.f[d] for c in cs])
        phi = np.array([c.phi[d] for c in cs])
        assert dist.probs @ f == pytest.approx(expected_f(k, d), abs=1e-12)
        assert dist.probs @ phi == pytest.approx(expected_phi(k, d), abs=1e-12)
        assert expected_f(k, d) == pytest.approx(k.p[d - 1] * expected_phi(k, d), rel=1e-15)


def test_expected_f_monte_carlo_n12():
    k = KahleParams(12, (0.5,) * 11)
    batch = sample_batch(k, 100_000, RngState(12))
    f3 = batch.f_counts()[:, 3]
    se = f3.std(ddof=1) / math.sqrt(len(f3))
    assert abs(f3.mean() - expected_f(k, 3)) <= 4 * se


def test_expected_a_b_products():
    g = GeneralParams.random(4, 0.1, 0.9, seed=9)
    p = g.prob
    assert expected_b((0, 2), g) == pytest.approx(p((0,)) * p((2,)))
    assert expected_a((0, 2), g) == pytest.approx(p((0,)) * p((2,)) * p((0, 2)))
    tri = (1, 2, 3)
    want = math.prod(p(e) for e in combinations(tri, 2)) * math.prod(p((v,)) for v in tri)
    assert expected_b(tri, g) == pytest.approx(want)
    for k in range(1, 5):
        for s in combinations(range(4), k):
            assert expected_a(s, g) == pytest.approx(p(s) * expected_b(s, g), rel=1e-15)
    one = GeneralParams(4, {}, 1.0)
    assert expected_a((0, 1, 2, 3), one) == expected_b((0, 1, 2, 3), one) == 1.0


def test_expected_a_b_match_enumeration():
    g = GeneralParams.random(4, 0.2, 0.9, seed=10)
    dist = exact_distribution(g, enumerate_space("C_le_n", 4))
    for s in [(1,), (0, 3), (0, 1, 2), (0, 1, 2, 3)]:
        pa = sum(q for C, q in zip(dist.space, dist.probs) if s in C)
        assert pa == pytest.approx(expected_a(s, g), abs=1e-13)


def test_conditional_probability():
    g = GeneralParams.random(3, 0.2, 0.9, seed=12)
    dist = exact_distribution(g, enumerate_space("C_le_n", 3))
    for s in [(0, 1, 2), (0, 2), (1,)]:
        assert conditional_probability(dist, s) == pytest.approx(g.prob(s), abs=1e-12)
    g1 = GeneralParams(3, {(0, 1): 1.0}, 0.5)
    d1 = exact_distribution(g1, enumerate_space("C_le_n", 3))
    assert conditional_probability(d1, (0, 1)) == pytest.approx(1.0, abs=1e-12)
    d0 = exact_distribution(GeneralParams(3, {(0,): 0.0}, 0.5), enumerate_space("C_le_n", 3))
    with pytest.raises(ZeroDivisionError):
        conditional_probability(d0, (0, 1))


def test_gnp_specialisation_on_graphs():
    p = 0.3
    k = kahle_for("gnp", 5, p)
    for C in enumerate_space("graphs", 5):
        e = counts(C).f[1]
        want = e * math.log(p) + (10 - e) * math.log(1 - p)
        assert log_prob_kahle(C, k) == pytest.approx(want, abs=1e-12)
        assert log_prob_gnp(C, 5, p) == pytest.approx(want, abs=1e-12)


def test_lm_support():
    assert log_prob_lm(closure([(0, 1), (2,)], 3), 3, 1, 0.5) == -math.inf
    with pytest.raises(NotInSampleSpace):
        log_prob_lm(closure([(0, 1)], 3), 3, 1, 0.5)
    assert log_prob_lm(full_simplex(3), 3, 1, 0.25) == pytest.approx(math.log(0.25))
