import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ppath.tournament import random_tournament, transitive
from ppath.trn import (
    BadDiagonal,
    MalformedHeader,
    NonSquareMatrix,
    OrientationViolation,
    TrnError,
    read_trn,
    write_trn,
)


def test_exact_bytes_for_two_vertices():
    assert write_trn(transitive(2)) == b"TRN 1\n2\n-1\n0-\n"


def test_round_trip_random_50():
    t = random_tournament(50, 7)
    assert read_trn(write_trn(t)).rows == t.rows
    assert write_trn(read_trn(write_trn(t))) == write_trn(t)


@given(
    st.integers(min_value=1, max_value=30),
    st.integers(min_value=0, max_value=2**32),
)
@settings(max_examples=40, deadline=None)
def test_round_trip_property(n, seed):
    t = random_tournament(n, seed)
    assert read_trn(write_trn(t)).rows == t.rows


def test_orientation_violation_both_ways():
    with pytest.raises(OrientationViolation):
        read_trn(b"TRN 1\n2\n-1\n1-\n")
    with pytest.raises(OrientationViolation):
        read_trn(b"TRN 1\n2\n-0\n0-\n")


def test_malformed_header():
    with pytest.raises(MalformedHeader):
        read_trn(b"TRN 2\n2\n-1\n0-\n")
    with pytest.raises(MalformedHeader):
        read_trn(b"TRN 1\nxx\n-1\n0-\n")
    with pytest.raises(MalformedHeader):
        read_trn(b"")


def test_non_square():
    with pytest.raises(NonSquareMatrix):
        read_trn(b"TRN 1\n2\n-1\n")
    with pytest.raises(NonSquareMatrix):
        read_trn(b"TRN 1\n2\n-11\n0-\n")
    with pytest.raises(NonSquareMatrix):
        read_trn(b"TRN 1\n2\n-1\n0-\nextra\n")


def test_bad_diagonal():
    with pytest.raises(BadDiagonal):
        read_trn(b"TRN 1\n2\n01\n0-\n")  # diagonal (0,0) not '-'
    with pytest.raises(BadDiagonal):
        read_trn(b"TRN 1\n2\n--\n0-\n")  # '-' off the diagonal


def test_stray_character():
    with pytest.raises(TrnError):
        read_trn(b"TRN 1\n2\n-x\n0-\n")
