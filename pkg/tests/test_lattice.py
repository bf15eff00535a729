import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latticehydro.errors import BoxTooSmallError
from latticehydro.lattice import (
    CoupledConfig,
    ExclusionConfig,
    Flip,
    IncrementConfig,
    PottsWeights,
    SurfaceConfig,
    ZrJump,
    admissible_zr_jumps,
    allowed_flips,
    apply_flip,
    flip_to_zr_jump,
    increments_to_surface,
    kipnis_forward,
    kipnis_inverse,
    surface_to_increments,
)


# -- strategies -------------------------------------------------------------

increments = st.builds(
    IncrementConfig,
    lo=st.integers(min_value=-6, max_value=0),
    counts=st.lists(st.integers(min_value=0, max_value=3), min_size=1, max_size=10).map(
        np.array
    ),
)


def surfaces(min_size=2, max_size=10):
    return st.builds(
        lambda lo, steps, f_lo: SurfaceConfig(lo, f_lo + np.cumsum([0] + steps)),
        st.integers(min_value=-6, max_value=0),
        st.lists(st.integers(min_value=0, max_value=3), min_size=min_size - 1, max_size=max_size - 1),
        st.integers(min_value=-5, max_value=5),
    )


# -- surface <-> increments -------------------------------------------------


def test_surface_to_increments_flat():
    f = SurfaceConfig(-3, np.zeros(7, dtype=int))
    eta = surface_to_increments(f)
    assert eta.window == (-2, 3)
    assert np.array_equal(eta.counts, np.zeros(6, dtype=int))


def test_surface_to_increments_staircase():
    f = SurfaceConfig(-3, np.arange(-3, 4))
    eta = surface_to_increments(f)
    assert np.array_equal(eta.counts, np.ones(6, dtype=int))


def test_surface_to_increments_example():
    f = SurfaceConfig(-2, [-1, -1, 0, 2, 3])
    eta = surface_to_increments(f)
    assert eta.window == (-1, 2)
    assert np.array_equal(eta.counts, [0, 1, 2, 1])


def test_surface_window_too_small():
    with pytest.raises(ValueError):
        surface_to_increments(SurfaceConfig(0, [5]))


def test_increments_to_surface_zero():
    eta = IncrementConfig(-2, np.zeros(3, dtype=int))
    f = increments_to_surface(eta, 0)
    assert f.window == (-3, 0)
    assert np.array_equal(f.heights, np.zeros(4, dtype=int))


def test_increments_to_surface_example():
    eta = IncrementConfig(-1, [1, 1, 1, 1])
    f = increments_to_surface(eta, 5)
    assert f.window == (-2, 2)
    assert np.array_equal(f.heights, [3, 4, 5, 6, 7])


@given(surfaces())
def test_surface_increment_round_trip(f):
    eta = surface_to_increments(f)
    back = increments_to_surface(eta, f.height(0)) if f.lo <= 0 <= f.hi else None
    if back is not None:
        assert back == f


@given(increments)
def test_increment_surface_round_trip(eta):
    if eta.hi < 0:
        return  # origin outside the resulting surface window
    f = increments_to_surface(eta, 2)
    assert surface_to_increments(f) == eta
    assert f.height(0) == 2


# -- Kipnis map ---------------------------------------------------------------


def test_kipnis_forward_packed():
    eta = IncrementConfig(1, [0, 0, 0])
    xi = kipnis_forward(eta, 3)
    assert np.array_equal(xi.occupancy, [1, 1, 1])


def test_kipnis_forward_example():
    eta = IncrementConfig(1, [2, 0, 1])
    xi = kipnis_forward(eta, 7)
    assert set(xi.particles()) == {3, 4, 6}


def test_kipnis_forward_single():
    k = 4
    eta = IncrementConfig(1, [k])
    xi = kipnis_forward(eta, k + 1)
    assert set(xi.particles()) == {k + 1}


def test_kipnis_forward_box_too_small():
    with pytest.raises(BoxTooSmallError):
        kipnis_forward(IncrementConfig(1, [2, 0, 1]), 2)


def test_kipnis_inverse_examples():
    assert np.array_equal(kipnis_inverse(ExclusionConfig([1, 1, 1])).counts, [0, 0, 0])
    occ = np.zeros(7, dtype=int)
    occ[[2, 3, 5]] = 1
    assert np.array_equal(kipnis_inverse(ExclusionConfig(occ)).counts, [2, 0, 1])
    assert kipnis_inverse(ExclusionConfig([])).counts.size == 0


@given(st.lists(st.integers(min_value=0, max_value=1), min_size=0, max_size=20))
def test_kipnis_round_trip_from_exclusion(bits):
    xi = ExclusionConfig(np.array(bits, dtype=int))
    eta = kipnis_inverse(xi)
    if eta.counts.size == 0:
        return
    last = int(xi.particles()[-1])
    back = kipnis_forward(eta, last)
    assert np.array_equal(back.occupancy, xi.occupancy[:last])


@given(st.lists(st.integers(min_value=0, max_value=3), min_size=1, max_size=10))
def test_kipnis_round_trip_from_increments(counts):
    eta = IncrementConfig(1, np.array(counts))
    box = int(sum(counts)) + len(counts)
    xi = kipnis_forward(eta, box)
    assert kipnis_inverse(xi) == eta


def test_kipnis_intertwines_translation():
    # adding one particle's worth of gap at site 1 equals the shift of xi
    eta = IncrementConfig(1, [2, 0, 1])
    box = 9
    xi = kipnis_forward(eta, box)
    shifted = np.concatenate(([0], xi.occupancy[:-1]))
    bumped = IncrementConfig(1, [3, 0, 1])
    assert np.array_equal(kipnis_forward(bumped, box).occupancy, shifted)


def test_kipnis_intertwines_jumps():
    # zero-range jump n -> n+1 moves particle n one site left, and n+1 -> n
    # moves it one site right
    eta = IncrementConfig(1, [2, 1, 3])
    box = 12
    n = 2
    left_move = IncrementConfig(1, [2, 0, 4])  # jump n=2 -> 3
    xi = kipnis_forward(eta, box)
    expect = xi.occupancy.copy()
    p = xi.particles()[n - 1]
    expect[p - 1], expect[p - 2] = 0, 1
    assert np.array_equal(kipnis_forward(left_move, box).occupancy, expect)

    right_move = IncrementConfig(1, [2, 2, 2])  # jump n+1=3 -> 2
    expect = xi.occupancy.copy()
    expect[p - 1], expect[p] = 0, 1
    assert np.array_equal(kipnis_forward(right_move, box).occupancy, expect)


# -- flips --------------------------------------------------------------------


def test_weights_ordering_enforced():
    PottsWeights(2.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        PottsWeights(1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        PottsWeights(2.0, 1.0, 1.5)
    with pytest.raises(ValueError):
        PottsWeights(2.0, -1.0, -1.0)


def test_allowed_flips_flat():
    f = SurfaceConfig(-3, np.zeros(7, dtype=int))
    assert allowed_flips(f) == set()


def test_allowed_flips_single_step():
    heights = np.array([0, 0, 0, 1, 1])  # window [-2, 2], step between 0 and 1
    f = SurfaceConfig(-2, heights)
    assert allowed_flips(f) == {Flip(1, 1)}


def test_allowed_flips_staircase():
    f = SurfaceConfig(-3, np.arange(-3, 4))
    got = allowed_flips(f)
    expect = {Flip(x, 1) for x in range(-2, 3)}
    expect |= {Flip(x, 0) for x in (-2, -1)}
    expect |= {Flip(x, -1) for x in (1, 2)}
    assert got == expect


def test_apply_flip_cases():
    f = SurfaceConfig(-2, [0, 0, 0, 1, 1])
    g = apply_flip(f, Flip(1, 1))
    assert np.array_equal(g.heights, [0, 0, 0, 0, 1])

    stair = SurfaceConfig(-3, np.arange(-3, 4))
    g = apply_flip(stair, Flip(-1, 0))
    assert g.height(-1) == 0 and stair.height(-1) == -1


def test_apply_flip_rejects_disallowed():
    f = SurfaceConfig(-2, [0, 0, 0, 1, 1])
    with pytest.raises(ValueError):
        apply_flip(f, Flip(0, 1))


@given(surfaces(min_size=3, max_size=10))
@settings(max_examples=60)
def test_flips_preserve_monotonicity(f):
    for flip in allowed_flips(f):
        g = apply_flip(f, flip)  # constructor re-validates monotonicity
        assert np.array_equal(np.sort(g.heights), g.heights)


def test_flip_to_zr_jump_examples():
    stair = SurfaceConfig(-3, np.arange(-3, 4))
    assert flip_to_zr_jump(Flip(0, 1), stair) == ZrJump(0, 1)
    assert flip_to_zr_jump(Flip(-1, 0), stair) == ZrJump(0, -1)
    assert flip_to_zr_jump(Flip(1, -1), stair) == ZrJump(2, 1)


def _enumerate_windows():
    # windows of 3..8 sites in assorted positions relative to the origin
    for size in range(3, 9):
        for lo in (-size, -size + 1, -size // 2, -1, 0):
            yield lo, lo + size - 1


def test_flip_jump_bijection_exhaustive():
    # every admissible zero-range move on the window is the image of exactly
    # one allowed flip, for all increment configurations with counts <= 3
    rng = np.random.default_rng(20240817)
    for lo, hi in _enumerate_windows():
        n_inc = hi - lo  # increments live on [lo+1, hi]
        pool = list(itertools.product(range(4), repeat=n_inc))
        if len(pool) > 2000:
            idx = rng.choice(len(pool), size=2000, replace=False)
            pool = [pool[i] for i in idx]
        for counts in pool:
            eta = IncrementConfig(lo + 1, np.array(counts, dtype=int))
            f = increments_to_surface(eta, 0) if lo + 1 <= 1 and hi >= 0 else None
            if f is None:
                # origin outside the surface window: pin the level at lo instead
                heights = np.concatenate(([0], np.cumsum(counts)))
                f = SurfaceConfig(lo, heights)
            flips = allowed_flips(f)
            images = [flip_to_zr_jump(fl, f) for fl in flips]
            assert len(images) == len(set(images)), "flip map not injective"
            assert set(images) == admissible_zr_jumps(eta)


# -- coupled config and serialization ----------------------------------------


def test_coupled_ledger():
    eta = IncrementConfig(-3, [1, 0, 2, 1])
    xi = ExclusionConfig([1, 0, 1])
    c = CoupledConfig(eta, xi)
    assert c.left_ledger == 4
    c.check_ledger()
    c2 = CoupledConfig(eta, xi, crossings=3)
    assert c2.left_ledger == 7


def test_coupled_eta_window_must_end_at_origin():
    with pytest.raises(ValueError):
        CoupledConfig(IncrementConfig(-3, [1, 0, 2]), ExclusionConfig([1]))


@given(increments)
def test_increment_text_round_trip(eta):
    assert IncrementConfig.from_text(eta.to_text()) == eta


def test_text_round_trips():
    f = SurfaceConfig(-2, [-1, -1, 0, 2, 3])
    assert SurfaceConfig.from_text(f.to_text()) == f
    xi = ExclusionConfig([1, 0, 1, 1])
    assert ExclusionConfig.from_text(xi.to_text()) == xi
    c = CoupledConfig(IncrementConfig(-2, [1, 0, 2]), xi, crossings=2)
    assert CoupledConfig.from_text(c.to_text()) == c
