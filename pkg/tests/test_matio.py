import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from levcur.matio import load_matrix, save_matrix


def test_round_trip_simple(tmp_path):
    M = np.array([[1.0, -2.5], [1e-300, 3.141592653589793]])
    p = tmp_path / "m.txt"
    save_matrix(p, M)
    assert np.array_equal(load_matrix(p), M)


@settings(max_examples=25, deadline=None)
@given(
    arrays(
        np.float64,
        st.tuples(st.integers(1, 6), st.integers(1, 6)),
        elements=st.floats(
            allow_nan=False, allow_infinity=False, width=64, min_value=-1e30,
            max_value=1e30,
        ),
    )
)
def test_round_trip_exact(tmp_path_factory, M):
    p = tmp_path_factory.mktemp("matio") / "m.txt"
    save_matrix(p, M)
    back = load_matrix(p)
    assert back.shape == M.shape
    assert np.array_equal(back, M)


def test_header_format(tmp_path):
    p = tmp_path / "m.txt"
    save_matrix(p, np.arange(6.0).reshape(2, 3))
    first = p.read_text().splitlines()[0]
    assert first == "2 3"


def test_load_rejects_bad_header(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("2\n1 2\n")
    with pytest.raises(ValueError, match="header"):
        load_matrix(p)


def test_load_rejects_short_row(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("2 3\n1 2 3\n4 5\n")
    with pytest.raises(ValueError, match="line 3"):
        load_matrix(p)


def test_save_rejects_nan(tmp_path):
    M = np.array([[np.nan]])
    with pytest.raises(ValueError):
        save_matrix(tmp_path / "m.txt", M)
