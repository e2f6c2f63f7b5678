import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from selfimprove import encodings as E
from selfimprove.vlist import PivotList


def test_b_encode_hand_example():
    vl = PivotList(np.array([2.0, 4.0]), lam=1)
    assert E.b_encode([1.5, 3.7], vl) == (0, 1)


def test_b_encode_all_left_and_empty():
    vl = PivotList(np.array([2.0, 4.0]), lam=1)
    assert E.b_encode([0.0, 1.0, -5.0], vl) == (0, 0, 0)
    assert E.b_encode([], vl) == ()


def test_b_encode_monotone_under_sorted_values():
    rng = np.random.default_rng(0)
    vl = PivotList(np.sort(rng.random(10)), lam=1)
    vals = np.sort(rng.uniform(-0.2, 1.2, 40))
    code = E.b_encode(vals, vl)
    assert all(a <= b for a, b in zip(code, code[1:]))


def test_pi_encode_hand_examples():
    assert E.pi_encode([10, 20, 30]) == (0, 1, 2)
    assert E.pi_encode([30, 20, 10]) == (0, 0, 0)
    assert E.pi_encode([20, 10, 30]) == (0, 0, 1)


def test_pi_encode_duplicate_rejected():
    with pytest.raises(E.DuplicateValueError):
        E.pi_encode([1.0, 2.0, 1.0])


def test_pi_code_invariants():
    rng = np.random.default_rng(1)
    for _ in range(50):
        vals = rng.permutation(rng.integers(1, 30)) + rng.random()
        code = E.pi_encode(vals)
        assert code[0] == 0
        assert all(0 <= j < i for i, j in enumerate(code, start=1))


def test_sort_from_pi_hand_example():
    vals = [20, 10, 30]
    assert E.sort_from_pi(vals, (0, 0, 1)) == [2, 1, 3]


def test_sort_from_pi_identity_and_singleton():
    assert E.sort_from_pi([1, 2, 3, 4], (0, 1, 2, 3)) == [1, 2, 3, 4]
    assert E.sort_from_pi([42.0], (0,)) == [1]


def test_sort_from_pi_inconsistent_code_detected():
    with pytest.raises(E.InconsistentCodeError):
        E.sort_from_pi([10, 20, 30], (0, 0, 0))


@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=64, unique=True))
@settings(max_examples=300, deadline=None)
def test_round_trip_matches_comparison_sort(vals):
    order = E.sort_from_pi(vals, E.pi_encode(vals))
    expect = sorted(range(1, len(vals) + 1), key=lambda i: vals[i - 1])
    assert order == expect


def test_round_trip_bulk_random_lengths():
    rng = np.random.default_rng(2)
    for _ in range(300):
        m = int(rng.integers(1, 513))
        vals = rng.standard_normal(m)
        order = E.sort_from_pi(vals, E.pi_encode(vals))
        assert np.array_equal(np.array(order) - 1, np.argsort(vals))


def test_pi_encode_order_isomorphism_invariant():
    rng = np.random.default_rng(3)
    for _ in range(50):
        vals = rng.standard_normal(int(rng.integers(1, 100)))
        base = E.pi_encode(vals)
        affine = E.pi_encode(3.5 * vals + 11.0)
        cubic = E.pi_encode(vals ** 3 + 2 * vals)  # strictly increasing map
        assert base == affine == cubic


def test_code_serialization_roundtrip():
    code = (0, 1, 0, 3, 2)
    buf = E.code_to_bytes(code)
    back, off = E.code_from_bytes(buf)
    assert back == code and off == len(buf)
