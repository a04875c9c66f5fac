import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bosondist.errors import DimensionError, UnitarityError
from bosondist.interference import (
    Experiment,
    occupations,
    prob_a,
    prob_a_classical,
    prob_a_ideal,
    prob_a_occupation,
    prob_a_table,
    prob_b,
    prob_b_ideal,
    prob_b_pure_permanent,
    prob_b_table,
)
from bosondist.linalg import beam_splitter_50_50, haar_unitary
from bosondist.photon_model import GaussianModel, chi, purity_order_n, time_density


def haar_exp(n, m, eta=0.1, seed=0, freqs=()):
    return Experiment(GaussianModel.from_eta(n, eta, frequencies=freqs), haar_unitary(m, seed))


def hom(eta):
    return Experiment(GaussianModel.from_eta(2, eta), beam_splitter_50_50())


def all_tuples(exp):
    return itertools.product(range(exp.n_modes), repeat=exp.n_photons)


def test_experiment_validation():
    with pytest.raises(DimensionError):
        Experiment(GaussianModel(3), haar_unitary(2, 0))
    bad = np.eye(3, dtype=complex)
    bad[0, 1] = 1e-3
    with pytest.raises(UnitarityError):
        Experiment(GaussianModel(2), bad)


def test_port_range_checked():
    exp = haar_exp(2, 3)
    with pytest.raises(DimensionError):
        prob_a(exp, (0, 3))
    with pytest.raises(DimensionError):
        prob_a(exp, (0,))


def test_single_photon():
    exp = haar_exp(1, 4, eta=0.3)
    for l in range(4):
        assert prob_a(exp, (l,)) == pytest.approx(abs(exp.unitary[0, l]) ** 2)
        assert prob_a_ideal(exp, (l,)) == pytest.approx(abs(exp.unitary[0, l]) ** 2)
        t = [0.4]
        expected = abs(exp.unitary[0, l]) ** 2 * abs(chi(exp.model, 0, 0.4)) ** 2
        assert prob_b(exp, (l,), t) == pytest.approx(expected)
        assert prob_b_ideal(exp, (l,), t) == pytest.approx(expected)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_pure_photons_match_ideal(n):
    exp = haar_exp(n, 5, eta=0.0, seed=n)
    for l in [(0,) * n, tuple(range(n)), (4, 1, 1, 0)[:n]]:
        assert prob_a(exp, l) == pytest.approx(prob_a_ideal(exp, l), abs=1e-14)


def test_hom_coincidence():
    e = 0.1
    exp = hom(e)
    coincidence = 2 * prob_a(exp, (0, 1))
    assert coincidence == pytest.approx((1 - purity_order_n(e, 2)) / 2, abs=1e-14)
    assert coincidence == pytest.approx(0.0097096, abs=1e-7)
    assert prob_a_ideal(exp, (0, 1)) == pytest.approx(0.0, abs=1e-30)


def test_hom_occupations_pure():
    exp = hom(0.0)
    assert prob_a_occupation(exp, (2, 0)) == pytest.approx(0.5)
    assert prob_a_occupation(exp, (0, 2)) == pytest.approx(0.5)
    assert prob_a_occupation(exp, (1, 1)) == pytest.approx(0.0, abs=1e-15)


def test_hom_coincidence_grows_with_eta():
    vals = [prob_a_occupation(hom(e), (1, 1)) for e in np.linspace(0, 3, 31)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))


def test_occupation_sum_and_rejects():
    exp = haar_exp(3, 6, eta=0.1, seed=1)
    assert sum(prob_a_occupation(exp, m) for m in occupations(6, 3)) == pytest.approx(1.0, abs=1e-10)
    single = haar_exp(1, 5, seed=2)
    assert sum(prob_a_occupation(single, m) for m in occupations(5, 1)) == pytest.approx(1.0)
    with pytest.raises(DimensionError):
        prob_a_occupation(exp, (1, 1, 0, 0, 0, 0))


def test_classical_beam_splitter():
    exp = hom(0.2)
    assert prob_a_classical(exp, (0, 1)) == pytest.approx(0.25)
    assert 2 * prob_a_classical(exp, (0, 1)) == pytest.approx(0.5)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_classical_sums_to_one(n):
    exp = haar_exp(n, 4, seed=n)
    assert sum(prob_a_classical(exp, l) for l in all_tuples(exp)) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("n", [2, 3])
def test_large_spread_approaches_classical(n):
    # every interference term carries a factor J(sigma) <= Tr(rho^2)
    for ratio in (100.0, 1e7):
        exp = Experiment(GaussianModel(n, 1.0, ratio), haar_unitary(4, 10 + n))
        gap = max(abs(prob_a(exp, l) - prob_a_classical(exp, l)) for l in all_tuples(exp))
        assert gap <= math.factorial(n) * purity_order_n(exp.model.eta, 2)
    assert gap <= 1e-6


@pytest.mark.parametrize("n,m", [(1, 3), (2, 5), (3, 4), (4, 4)])
def test_ordered_tuples_normalised(n, m):
    exp = haar_exp(n, m, eta=0.15, seed=n + m)
    table = prob_a_table(exp)
    assert table.sum() == pytest.approx(1.0, abs=1e-10)
    assert table.min() >= -1e-12
    assert prob_a_table(exp, ideal=True).sum() == pytest.approx(1.0, abs=1e-10)


def test_table_matches_pointwise():
    exp = haar_exp(3, 4, eta=0.2, seed=3)
    table = prob_a_table(exp)
    for l in [(0, 1, 2), (3, 3, 0), (1, 1, 1)]:
        assert table[l] == pytest.approx(prob_a(exp, l), abs=1e-14)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 4).flatmap(lambda n: st.tuples(
    st.lists(st.integers(0, 4), min_size=n, max_size=n), st.permutations(range(n)))),
    st.integers(0, 1000))
def test_reordering_symmetry(l_perm, seed):
    l, perm = l_perm
    n = len(l)
    rng = np.random.default_rng(seed)
    freqs = rng.normal(size=n)
    exp = haar_exp(n, 5, eta=0.3, seed=seed, freqs=freqs)
    t = rng.normal(size=n)
    l2 = [l[k] for k in perm]
    t2 = t[list(perm)]
    assert prob_a(exp, l2) == pytest.approx(prob_a(exp, l), rel=1e-10, abs=1e-15)
    assert prob_b(exp, l2, t2) == pytest.approx(prob_b(exp, l, t), rel=1e-10, abs=1e-15)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_grouped_equals_direct(n, rng):
    exp = haar_exp(n, n + 1, eta=0.25, seed=n, freqs=rng.normal(size=n))
    for _ in range(3):
        l = tuple(rng.integers(0, n + 1, size=n))
        t = rng.normal(size=n)
        assert prob_a(exp, l, method="grouped") == pytest.approx(prob_a(exp, l, method="direct"), abs=1e-11)
        assert prob_b(exp, l, t, method="grouped") == pytest.approx(prob_b(exp, l, t, method="direct"), abs=1e-11)


def test_prob_b_pure_limit_is_single_permanent(rng):
    for n in range(1, 5):
        exp = Experiment(GaussianModel(n, 1.3, 0.0, rng.normal(size=n)), haar_unitary(5, n))
        for _ in range(3):
            l = tuple(rng.integers(0, 5, size=n))
            t = rng.normal(size=n)
            ref = prob_b_pure_permanent(exp, l, t)
            assert prob_b(exp, l, t) == pytest.approx(ref, rel=1e-12, abs=1e-15)
            assert prob_b_ideal(exp, l, t) == pytest.approx(ref, rel=1e-12, abs=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_prob_b_sums_to_time_density(n, rng):
    exp = haar_exp(n, 4, eta=0.3, seed=n, freqs=rng.normal(size=n))
    t = rng.normal(size=n)
    p = time_density(exp.model, t)
    assert sum(prob_b(exp, l, t) for l in all_tuples(exp)) == pytest.approx(p, rel=1e-10)
    assert sum(prob_b_ideal(exp, l, t) for l in all_tuples(exp)) == pytest.approx(p, rel=1e-10)
    assert prob_b_table(exp, t).sum() == pytest.approx(p, rel=1e-10)


def test_prob_b_two_photon_cross_term():
    # equal frequencies on a beam splitter: the coincidence density is
    # p(t) (1 - J~(t; swap)) / 4, the interference term scaled by J~
    e, t = 0.3, np.array([0.8, -0.4])
    exp = hom(e)
    model = exp.model
    j_swap = math.exp(-(e**2) * 2 * (t[0] - t[1]) ** 2 / model.envelope_var)
    expected = time_density(model, t) * (1 - j_swap) / 4
    assert prob_b(exp, (0, 1), t) == pytest.approx(expected, rel=1e-12)


def test_prob_b_table_entries():
    exp = haar_exp(2, 3, eta=0.2, seed=4, freqs=(0.0, 1.0))
    t = [0.1, -0.6]
    table = prob_b_table(exp, t)
    ideal = prob_b_table(exp, t, ideal=True)
    for l in all_tuples(exp):
        assert table[l] == pytest.approx(prob_b(exp, l, t), rel=1e-12)
        assert ideal[l] == pytest.approx(prob_b_ideal(exp, l, t), rel=1e-12)
