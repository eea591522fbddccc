import numpy as np
import pytest

from wavemc.inband_shift import oracle_shift_bands
from wavemc.motion import (
    MotionField,
    MotionVector,
    SearchParams,
    add_back,
    block_cost,
    block_region,
    candidate_grid,
    compensate,
    full_search,
    residual,
)
from wavemc.inband_shift import apply_inband_shift
from wavemc.wavelet import DimensionError, SubbandSet, analyze


@pytest.fixture
def oracle_pair(texture):
    return analyze(texture), oracle_shift_bands(texture, 1.25, -0.75)


def brute_force_best(ref, tgt, region, params):
    """Exhaustive rescan with block_cost only; returns the minimal cost."""
    unit = 1 << params.h
    lim = params.search_range * unit
    return min(
        block_cost(ref, tgt, region, MotionVector(dx, dy, params.h))
        for dy in range(-lim, lim + 1)
        for dx in range(-lim, lim + 1)
    )


def test_block_cost_zero_for_identical(texture):
    b = analyze(texture)
    assert block_cost(b, b, block_region(b.shape, 8, 1, 1), MotionVector(0, 0)) == 0.0


def test_block_cost_even_shift(texture):
    ref = analyze(texture)
    tgt = analyze(np.roll(texture, 2, axis=1))
    region = block_region(ref.shape, 8, 2, 1)
    cost = block_cost(ref, tgt, region, MotionVector(2, 0, 0))
    assert cost <= 1e-16 * 64


def test_block_cost_zero_reference(rng):
    tgt = analyze(rng.random((16, 16)))
    ref = tgt.map(np.zeros_like)
    region = block_region(tgt.shape, 4, 0, 1)
    energy = sum(float(np.sum(p[region] ** 2)) for p in tgt.planes())
    assert block_cost(ref, tgt, region, MotionVector(3, -1, 2)) == energy


def test_block_cost_out_of_bounds(texture):
    b = analyze(texture)
    with pytest.raises(IndexError):
        block_cost(b, b, (slice(28, 40), slice(0, 8)), MotionVector(0, 0))
    with pytest.raises(IndexError):
        block_region(b.shape, 8, 4, 0)


def test_candidate_count():
    assert len(candidate_grid(1, 0)) == 9
    assert candidate_grid(1, 0)[0] == (0, 0)
    assert len(candidate_grid(2, 2)) == 17 ** 2


def test_identical_frames_zero_field(texture):
    b = analyze(texture)
    f = full_search(b, b, SearchParams(2, 1, 8))
    assert not f.vectors.any()
    assert f.candidates_evaluated == 81


def test_search_range_one_full_pel(texture):
    b = analyze(texture)
    f = full_search(b, analyze(np.roll(texture, 1, axis=0)), SearchParams(1, 0, 8))
    assert f.candidates_evaluated == 9
    assert (f.vectors == [0, 1]).all()


def test_recovers_subpixel_motion(oracle_pair):
    ref, tgt = oracle_pair
    f = full_search(ref, tgt, SearchParams(3, 2, 8))
    hits = (f.vectors == [5, -3]).all(axis=2)
    assert hits.mean() >= 0.95
    pred = compensate(ref, f)
    assert residual(tgt, pred).energy() <= 1e-12 * tgt.energy()


def test_optimal_on_grid(oracle_pair, rng):
    ref, _ = oracle_pair
    tgt = analyze(rng.random((32, 32)) * 50)
    ref = analyze(rng.random((32, 32)) * 50)
    params = SearchParams(1, 1, 8)
    f = full_search(ref, tgt, params)
    for rc, region in f.blocks():
        won = block_cost(ref, tgt, region, f[rc])
        assert won == pytest.approx(f.costs[rc], rel=1e-12, abs=1e-12)
        assert won <= brute_force_best(ref, tgt, region, params) * (1 + 1e-12)


def test_tie_break_prefers_small_then_raster():
    # flat frames make every candidate tie
    b = analyze(np.full((16, 16), 9.0))
    f = full_search(b, b, SearchParams(2, 1, 4))
    assert not f.vectors.any()
    cands = candidate_grid(1, 0)
    assert cands[1:5] == [(0, -1), (-1, 0), (1, 0), (0, 1)]


def test_deterministic(oracle_pair):
    ref, tgt = oracle_pair
    p = SearchParams(2, 2, 8)
    a, b = full_search(ref, tgt, p), full_search(ref, tgt, p)
    assert a == b and np.array_equal(a.costs, b.costs)


def test_shrinking_edge_blocks(rng):
    f = rng.random((40, 24))
    ref = analyze(f)
    tgt = analyze(np.roll(f, 2, axis=1))
    field = full_search(ref, tgt, SearchParams(2, 0, 8))
    assert field.grid == (3, 2)
    assert (field.vectors == [2, 0]).all()
    assert block_region(ref.shape, 8, 2, 1) == (slice(16, 20), slice(8, 12))


def test_zero_field_compensation(texture):
    b = analyze(texture)
    pred = compensate(b, MotionField.zeros(b.shape, 8, 2))
    for p, q in zip(pred.planes(), b.planes()):
        np.testing.assert_array_equal(p, q)


def test_single_block_matches_global(texture):
    b = analyze(texture)
    field = MotionField.zeros(b.shape, 32, 0)
    field.vectors[0, 0] = (2, 0)
    pred = compensate(b, field)
    whole = apply_inband_shift(b, MotionVector(2, 0, 0).spec())
    for p, q in zip(pred.planes(), whole.planes()):
        np.testing.assert_array_equal(p, q)


def test_compensate_dimension_mismatch(texture):
    b = analyze(texture)
    with pytest.raises(DimensionError):
        compensate(b, MotionField.zeros((16, 16), 8, 2))


def test_residual_round_trip(rng):
    t = analyze(rng.random((16, 16)))
    p = analyze(rng.random((16, 16)))
    back = add_back(p, residual(t, p))
    for x, y in zip(back.planes(), t.planes()):
        np.testing.assert_allclose(x, y, atol=1e-15)
    assert residual(t, t).energy() == 0.0


def test_residual_energy_never_exceeds_zero_vector(rng):
    for seed in range(5):
        r = np.random.default_rng(seed)
        ref = analyze(r.random((32, 32)))
        tgt = analyze(r.random((32, 32)))
        f = full_search(ref, tgt, SearchParams(1, 2, 8))
        assert residual(tgt, compensate(ref, f)).energy() <= residual(tgt, ref).energy()


def test_params_validation():
    with pytest.raises(ValueError):
        SearchParams(0, 1, 8)
    with pytest.raises(ValueError):
        SearchParams(4, 4, 8)
