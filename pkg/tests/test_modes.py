import numpy as np
import pytest

from ramsel import ModeAssignment, enumerate_mode_digits, num_states


def test_state_index_mixed_radix():
    # antenna 0 is the most significant digit
    a = ModeAssignment((2, 1, 3), 3)
    assert a.state_index == 1 * 9 + 0 * 3 + 2


def test_state_index_round_trip_full_space():
    for idx in range(num_states(3, 3)):
        a = ModeAssignment.from_state_index(idx, 3, 3)
        assert a.state_index == idx


def test_enumerate_mode_digits_matches_assignments():
    digits = enumerate_mode_digits(3, 2)
    assert digits.shape == (8, 3)
    for idx in range(8):
        a = ModeAssignment.from_state_index(idx, 3, 2)
        assert tuple(digits[idx] + 1) == a.modes


def test_one_hot_round_trip():
    a = ModeAssignment((3, 1, 2, 2), 3)
    w = a.one_hot()
    assert w.shape == (4, 3)
    assert np.array_equal(w.sum(axis=1), np.ones(4, dtype=w.dtype))
    back = ModeAssignment.from_one_hot(w)
    assert back == a


def test_from_one_hot_rejects_bad_rows():
    with pytest.raises(ValueError, match="invalid one-hot assignment"):
        ModeAssignment.from_one_hot(np.array([[1, 1], [0, 1]]))
    with pytest.raises(ValueError, match="invalid one-hot assignment"):
        ModeAssignment.from_one_hot(np.array([[0.5, 0.5], [0, 1]]))
    with pytest.raises(ValueError, match="invalid one-hot assignment"):
        ModeAssignment.from_one_hot(np.array([[0, 0], [0, 1]]))


def test_mode_out_of_range_rejected():
    with pytest.raises(ValueError):
        ModeAssignment((0, 1), 3)
    with pytest.raises(ValueError):
        ModeAssignment((1, 4), 3)


def test_num_states():
    assert num_states(4, 3) == 81
    assert num_states(2, 1) == 1
