import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from wavemc.wavelet import (
    DimensionError,
    Pyramid,
    SubbandSet,
    analyze,
    haar_forward,
    haar_inverse,
    upsample_zero_detail,
)


def test_constant_block():
    pyr = haar_forward(np.full((2, 2), 3.5), 1)
    assert pyr.approx[0, 0] == 7.0
    for d in pyr.details[0]:
        assert d[0, 0] == 0.0


def test_hand_computed_block():
    bands = analyze(np.array([[1.0, 2.0], [3.0, 4.0]]))
    assert (bands.A[0, 0], bands.a[0, 0], bands.b[0, 0], bands.c[0, 0]) == (5.0, -1.0, -2.0, 0.0)


def test_inverse_examples():
    pyr = Pyramid([(np.zeros((1, 1)),) * 3], np.array([[2.0]]))
    np.testing.assert_array_equal(haar_inverse(pyr), np.ones((2, 2)))
    pyr = Pyramid([(np.array([[-1.0]]), np.array([[-2.0]]), np.array([[0.0]]))], np.array([[5.0]]))
    np.testing.assert_array_equal(haar_inverse(pyr), [[1.0, 2.0], [3.0, 4.0]])


def test_round_trip_random(rng):
    f = rng.random((64, 64)) * 255
    assert np.max(np.abs(haar_inverse(haar_forward(f, 3)) - f)) <= 1e-10


def test_pyramid_shapes(rng):
    pyr = haar_forward(rng.random((32, 48)), 3)
    assert [d[0].shape for d in pyr.details] == [(16, 24), (8, 12), (4, 6)]
    assert pyr.approx.shape == (4, 6)
    assert len(pyr.planes()) == 10


def test_padding_and_crop(rng):
    f = rng.random((37, 21))
    pyr = haar_forward(f, 2)
    assert pyr.approx.shape == (10, 6)
    np.testing.assert_allclose(haar_inverse(pyr), f, atol=1e-12)


def test_no_padding_raises():
    with pytest.raises(DimensionError):
        haar_forward(np.zeros((6, 8)), 2, pad=False)


def test_inconsistent_planes():
    with pytest.raises(DimensionError):
        SubbandSet(np.zeros((2, 2)), np.zeros((2, 2)), np.zeros((2, 3)), np.zeros((2, 2)))


def test_upsample_examples(rng):
    f = rng.random((5, 7))
    np.testing.assert_array_equal(upsample_zero_detail(f, 0), f)
    np.testing.assert_array_equal(upsample_zero_detail(np.array([[2.0]]), 1), np.ones((2, 2)))


def test_upsample_has_zero_details(rng):
    f = rng.random((8, 8))
    pyr = haar_forward(upsample_zero_detail(f, 2), 2)
    np.testing.assert_allclose(pyr.approx, f, atol=1e-12)
    for d in pyr.details:
        for p in d:
            assert np.max(np.abs(p)) <= 1e-12


frames = st.tuples(st.integers(1, 4), st.integers(1, 3), st.integers(1, 3)).flatmap(
    lambda t: st.tuples(
        st.just(t[0]),
        arrays(np.float64, (t[1] << t[0], t[2] << t[0]),
               elements=st.floats(-1000, 1000, allow_nan=False)),
    )
)


@settings(max_examples=60, deadline=None)
@given(frames)
def test_perfect_reconstruction(case):
    levels, f = case
    assert np.max(np.abs(haar_inverse(haar_forward(f, levels)) - f)) <= 1e-10


@settings(max_examples=60, deadline=None)
@given(frames)
def test_energy_preserved(case):
    levels, f = case
    energy = sum(float(np.sum(p * p)) for p in haar_forward(f, levels).planes())
    ref = float(np.sum(f * f))
    assert abs(energy - ref) <= 1e-8 * max(ref, 1.0)


@settings(max_examples=30, deadline=None)
@given(frames, st.floats(-3, 3), st.floats(-3, 3))
def test_linearity(case, alpha, beta):
    levels, f = case
    g = np.flipud(f)
    lhs = haar_forward(alpha * f + beta * g, levels).planes()
    fp = haar_forward(f, levels).planes()
    gp = haar_forward(g, levels).planes()
    for x, p, q in zip(lhs, fp, gp):
        np.testing.assert_allclose(x, alpha * p + beta * q, atol=1e-10 * (1 + np.max(np.abs(f))))


@settings(max_examples=30, deadline=None)
@given(arrays(np.float64, (3, 4), elements=st.floats(-100, 100)), st.integers(0, 3), st.integers(0, 3))
def test_upsample_composes(f, h1, h2):
    np.testing.assert_array_equal(
        upsample_zero_detail(upsample_zero_detail(f, h1), h2), upsample_zero_detail(f, h1 + h2)
    )
