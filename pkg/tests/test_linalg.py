import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bosondist.errors import DimensionError, SizeLimitError, UnitarityError
from bosondist.linalg import (
    beam_splitter_50_50,
    check_unitary,
    circulant_det,
    circulant_matrix,
    haar_unitary,
    load_unitary,
    permanent,
    permanent_naive,
    save_unitary,
    unitarity_residual,
    unitary_from_json,
    unitary_to_json,
)


def rand_c(rng, n):
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def test_permanent_identity_and_ones():
    assert permanent(np.eye(3)) == pytest.approx(1.0)
    assert permanent(np.ones((3, 3))) == pytest.approx(6.0)
    assert permanent(np.ones((3, 3)), method="ryser") == pytest.approx(6.0)


def test_permanent_naive_small_cases():
    assert permanent_naive(np.eye(2)) == pytest.approx(1.0)
    assert permanent_naive([[0, 1], [1, 0]]) == pytest.approx(1.0)
    assert permanent_naive(np.ones((4, 4))) == pytest.approx(24.0)


def test_permanent_2x2_by_hand():
    assert permanent([[1, -2], [-3, 4]]) == pytest.approx(10.0)


@pytest.mark.parametrize("n", range(1, 9))
@pytest.mark.parametrize("method", ["glynn", "ryser"])
def test_fast_permanents_match_naive(rng, n, method):
    for _ in range(3):
        m = rand_c(rng, n)
        ref = permanent_naive(m)
        assert abs(permanent(m, method=method) - ref) <= 1e-12 * max(1.0, abs(ref)) * 10


def test_permanent_6x6_relative(rng):
    m = rand_c(rng, 6)
    ref = permanent_naive(m)
    assert abs(permanent(m) - ref) / abs(ref) < 1e-12


def test_zero_row_gives_zero(rng):
    m = rand_c(rng, 5)
    m[2] = 0
    assert abs(permanent(m)) < 1e-12
    assert abs(permanent(m, method="ryser")) < 1e-12


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 6), seed=st.integers(0, 2**31), data=st.data())
def test_permanent_invariant_under_row_and_column_shuffles(n, seed, data):
    rng = np.random.default_rng(seed)
    m = rand_c(rng, n)
    rows = data.draw(st.permutations(range(n)))
    cols = data.draw(st.permutations(range(n)))
    ref = permanent(m)
    shuffled = m[np.ix_(rows, cols)]
    assert abs(permanent(shuffled) - ref) <= 1e-10 * max(1.0, abs(ref))


def test_permanent_rejects_bad_shapes():
    with pytest.raises(DimensionError):
        permanent(np.ones((2, 3)))
    with pytest.raises(SizeLimitError):
        permanent_naive(np.ones((10, 10)))
    with pytest.raises(ValueError):
        permanent(np.eye(2), method="bogus")


def test_permanent_rejects_nan():
    with pytest.raises(ValueError):
        permanent([[1.0, np.nan], [0.0, 1.0]])


def test_haar_m1_is_phase():
    u = haar_unitary(1, seed=3)
    assert u.shape == (1, 1)
    assert abs(abs(u[0, 0]) - 1) < 1e-14


def test_haar_deterministic_and_unitary():
    a = haar_unitary(8, seed=42)
    b = haar_unitary(8, seed=42)
    assert np.array_equal(a, b)
    assert unitarity_residual(a) <= 1e-10
    assert not np.array_equal(a, haar_unitary(8, seed=43))


@pytest.mark.parametrize("m", [2, 5, 16, 32])
def test_haar_unitarity_up_to_32(m):
    assert unitarity_residual(haar_unitary(m, seed=m)) <= 1e-10


def test_haar_first_moment():
    # E|U_00|^2 = 1/m under the Haar measure
    m = 4
    vals = [abs(haar_unitary(m, seed=s)[0, 0]) ** 2 for s in range(2000)]
    assert np.mean(vals) == pytest.approx(1 / m, abs=4 * np.std(vals) / math.sqrt(len(vals)))


def test_haar_diagonal_phase_is_uniform():
    # without the R-diagonal phase fix the phase of U_00 is biased
    phases = np.array([np.angle(haar_unitary(3, seed=s)[0, 0]) for s in range(4000)])
    assert abs(np.mean(np.exp(1j * phases))) < 0.05


def test_check_unitary_rejects_without_repair():
    u = haar_unitary(3, seed=1)
    bad = u.copy()
    bad[0, 0] += 1e-6
    with pytest.raises(UnitarityError) as info:
        check_unitary(bad)
    assert info.value.residual > 1e-10


def test_beam_splitter():
    bs = beam_splitter_50_50()
    assert unitarity_residual(bs) <= 1e-15
    assert np.allclose(np.abs(bs), 1 / math.sqrt(2))


def test_circulant_examples():
    assert circulant_det([2.5]) == pytest.approx(2.5)
    eta = 0.1
    assert circulant_det([1 + 2 * eta**2, -2 * eta**2]) == pytest.approx(1.04, abs=1e-14)


def test_circulant_purity_generator_n5():
    eta = 0.1
    a = [1 + 2 * eta**2, -eta**2, 0, 0, -eta**2]
    assert circulant_det(a) == pytest.approx(np.linalg.det(circulant_matrix(a)), rel=1e-12)


def test_circulant_matrix_layout():
    c = circulant_matrix([1, 2, 3])
    assert np.array_equal(c, [[1, 3, 2], [2, 1, 3], [3, 2, 1]])


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-2, 2, allow_nan=False), min_size=1, max_size=12))
def test_circulant_det_matches_dense(a):
    dense = np.linalg.det(circulant_matrix(a))
    fast = circulant_det(a)
    assert abs(fast - dense) <= 1e-10 * max(1.0, abs(dense))


def test_unitary_json_roundtrip(tmp_path):
    u = haar_unitary(8, seed=42)
    path = tmp_path / "u.json"
    save_unitary(path, u)
    assert np.array_equal(load_unitary(path), u)
    obj = json.loads(path.read_text())
    assert set(obj) == {"m", "re", "im"} and obj["m"] == 8
    assert np.array_equal(unitary_from_json(unitary_to_json(u)), u)


def test_unitary_json_validates():
    obj = {"m": 2, "re": [[1, 1], [0, 1]], "im": [[0, 0], [0, 0]]}
    with pytest.raises(UnitarityError):
        unitary_from_json(obj)
    with pytest.raises(DimensionError):
        unitary_from_json({"m": 3, "re": [[1, 0], [0, 1]], "im": [[0, 0], [0, 0]]})


def test_permanent_naive_enumeration_agrees_with_definition(rng):
    m = rand_c(rng, 4)
    total = sum(np.prod([m[p[k], k] for k in range(4)]) for p in itertools.permutations(range(4)))
    assert permanent_naive(m) == pytest.approx(total)
