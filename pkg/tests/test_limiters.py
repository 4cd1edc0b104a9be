import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slopelim.limiters import (
    HIGH_RESOLUTION_KINDS,
    SYMMETRIC_KINDS,
    LimiterKind,
    Region,
    bounding_slopes,
    check_region,
    hr_region_bounds,
    phi,
    phi_berger,
    sample_grid,
    special_points,
    symmetry_defect,
    tvd_region_bounds,
)
from slopelim.mesh import StretchRatios

ratios_st = st.tuples(st.floats(0.1, 10.0), st.floats(0.1, 10.0)).map(lambda ab: StretchRatios(*ab))


def test_parse():
    assert LimiterKind.parse("van_leer") is LimiterKind.VAN_LEER
    with pytest.raises(ValueError, match="superbee"):
        LimiterKind.parse("bogus")
    assert len(LimiterKind) == 8


@pytest.mark.parametrize(
    "kind,f,expected",
    [
        ("superbee", 0.5, 1.0),
        ("minmod", 0.25, 0.5),
        ("van_leer", 0.25, 0.75),
        ("mc", -0.2, 0.0),
        ("sin", 0.5, 1.0),
    ],
)
def test_phi_examples(kind, f, expected):
    assert phi(kind, f) == pytest.approx(expected, abs=1e-15)


def test_phi_vectorised_matches_scalar():
    f = np.linspace(-0.5, 1.5, 41)
    for kind in LimiterKind:
        vec = phi(kind, f, (2.0, 0.7))
        assert vec.shape == f.shape
        np.testing.assert_array_equal(vec, [phi(kind, x, (2.0, 0.7)) for x in f])


def test_none_is_zero():
    assert np.all(phi("none", np.linspace(-1, 2, 31)) == 0)


@pytest.mark.parametrize("kind", list(LimiterKind))
def test_zero_outside_unit_interval_and_at_ends(kind):
    f = np.array([-1e9, -3.0, -1e-12, 0.0, 1.0, 1 + 1e-12, 7.0, 1e9])
    for r in [(1, 1), (2, 3), (0.2, 5)]:
        assert np.all(phi(kind, f, r) == 0.0)


@settings(max_examples=200, deadline=None)
@given(kind=st.sampled_from(list(LimiterKind)), f=st.floats(allow_nan=False, allow_infinity=False), r=ratios_st)
def test_zero_slope_at_extrema(kind, f, r):
    if f < 0 or f > 1:
        assert phi(kind, f, r) == 0.0


def test_only_berger_depends_on_ratios():
    f = np.linspace(0, 1, 101)
    for kind in LimiterKind:
        same = np.array_equal(phi(kind, f, (1, 1)), phi(kind, f, (3, 0.4)))
        assert same == (kind is not LimiterKind.BERGER)


# --- Berger -----------------------------------------------------------------


def berger_mp(f, a, b):
    """High-precision evaluation straight from the two-branch formula."""
    f, a, b = mpmath.mpf(f), mpmath.mpf(a), mpmath.mpf(b)
    f2 = (1 + a) / (2 + a + b)
    if f <= f2:
        inner = f * (1 - a / (1 + a) * (f / f2) ** (1 / a))
    else:
        inner = (1 - f) * (1 - b / (1 + b) * ((1 - f) / (1 - f2)) ** (1 / b))
    return (2 + a + b) * inner


def test_berger_examples():
    assert phi_berger(0.5) == pytest.approx(1.0, abs=1e-15)
    assert phi_berger(0.25) == pytest.approx(0.75, abs=1e-15)


@pytest.mark.parametrize("a,b", [(2, 1), (1, 3), (0.5, 0.5)])
def test_berger_is_one_at_f2(a, b):
    # Independent check: at f2 the two centre-to-neighbour slopes are both 1.
    f2 = Fraction(1 + a) / (2 + a + b) if isinstance(a, int) and isinstance(b, int) else None
    if f2 is not None:
        s = 2 + a + b
        assert s * f2 / (1 + a) == 1 and s * (1 - f2) / (1 + b) == 1
    sp = special_points((a, b))
    bs = bounding_slopes(sp.f2, (a, b))
    assert bs.phi_minus == pytest.approx(1.0, abs=1e-14)
    assert bs.phi_plus == pytest.approx(1.0, abs=1e-14)
    assert phi_berger(sp.f2, (a, b)) == pytest.approx(1.0, abs=1e-12)
    assert float(berger_mp(sp.f2, a, b)) == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("a,b", [(2, 1), (1, 3), (0.5, 0.5), (2, 3), (7, 0.2)])
def test_berger_matches_high_precision(a, b):
    f = np.linspace(0, 1, 257)[1:-1]
    expected = np.array([float(berger_mp(x, a, b)) for x in f])
    np.testing.assert_allclose(phi_berger(f, (a, b)), expected, rtol=0, atol=1e-13)


@pytest.mark.parametrize("a,b", [(2, 1), (1, 3), (0.5, 0.5), (2, 3), (10, 0.1)])
def test_berger_continuous_at_f2(a, b):
    f2 = special_points((a, b)).f2
    h = 1e-9
    left, right = phi_berger(f2 - h, (a, b)), phi_berger(f2 + h, (a, b))
    assert abs(left - 1.0) < 1e-8 and abs(right - 1.0) < 1e-8


@pytest.mark.parametrize("a,b", [(2, 1), (1, 3), (0.5, 0.5), (2, 3)])
def test_berger_in_high_resolution_region(a, b):
    assert check_region("berger", (a, b), 4097, 1e-10, "high_resolution").ok


# --- bounding slopes and regions -----------------------------------------------


@pytest.mark.parametrize(
    "f,r,expected",
    [
        (0.4, (1, 1), (0.8, 1.6, 1.2, 2.4)),
        (0.5, (1, 1), (1, 2, 1, 2)),
        (0.25, (2, 1), (5 / 3 * 0.25, 1.25, 1.875, 3.75)),
    ],
)
def test_bounding_slopes_examples(f, r, expected):
    np.testing.assert_allclose(bounding_slopes(f, r).as_tuple(), expected, rtol=1e-15)


def test_bounding_slopes_uniform_reduction():
    f = np.linspace(0, 1, 101)
    bs = bounding_slopes(f)
    np.testing.assert_allclose(bs.phi_minus, 2 * f, atol=1e-15)
    np.testing.assert_allclose(bs.phi_left, 4 * f, atol=1e-15)
    np.testing.assert_allclose(bs.phi_plus, 2 * (1 - f), atol=1e-15)
    np.testing.assert_allclose(bs.phi_right, 4 * (1 - f), atol=1e-15)


@settings(max_examples=200, deadline=None)
@given(f=st.floats(0, 1), r=ratios_st)
def test_bounding_slope_ordering(f, r):
    bs = bounding_slopes(f, r)
    assert 0 <= bs.phi_minus <= bs.phi_left
    assert 0 <= bs.phi_plus <= bs.phi_right


@pytest.mark.parametrize(
    "f,r,expected", [(0.4, (1, 1), (0.8, 1.2)), (0.5, (1, 1), (1.0, 1.0)), (1.7, (3, 2), (0.0, 0.0))]
)
def test_hr_bounds_examples(f, r, expected):
    # Oracle for the first row: sorted({0.8, 1.6, 1.2, 2.4}) -> two smallest.
    assert hr_region_bounds(f, r) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize(
    "f,r,expected", [(0.25, (1, 1), (0, 1)), (0.5, (1, 1), (0, 2)), (0.25, (2, 1), (0, 1.25))]
)
def test_tvd_bounds_examples(f, r, expected):
    assert tvd_region_bounds(f, r) == pytest.approx(expected, abs=1e-15)


def test_bounds_vanish_off_interval():
    for bounds in (hr_region_bounds, tvd_region_bounds):
        lo, hi = bounds(np.array([-0.1, 1.1]), (2, 3))
        assert np.all(lo == 0) and np.all(hi == 0)


@settings(max_examples=300, deadline=None)
@given(f=st.floats(0, 1), r=ratios_st)
def test_hr_region_inside_tvd_region(f, r):
    lo, hi = hr_region_bounds(f, r)
    # Brute force: two smallest of the four slopes by plain sorting.
    brute = sorted(bounding_slopes(f, r).as_tuple())
    assert (lo, hi) == (brute[0], brute[1])
    assert 0 <= lo <= hi <= tvd_region_bounds(f, r)[1]


def test_uniform_hr_bounds_are_minmod_and_superbee():
    f = np.linspace(0, 1, 10_000)
    lo, hi = hr_region_bounds(f)
    np.testing.assert_allclose(lo, np.minimum(2 * f, 2 * (1 - f)), rtol=0, atol=1e-12)
    np.testing.assert_allclose(hi, phi("superbee", f), rtol=0, atol=1e-12)


# --- special points ---------------------------------------------------------


@pytest.mark.parametrize(
    "r,expected", [((1, 1), (1 / 3, 1 / 2, 2 / 3)), ((2, 1), (1 / 3, 3 / 5, 3 / 4)), ((1, 2), (1 / 4, 2 / 5, 2 / 3))]
)
def test_special_points_examples(r, expected):
    sp = special_points(r)
    assert (sp.f1, sp.f2, sp.f3) == pytest.approx(expected, abs=1e-16)


def _crossing(g, lo=0.0, hi=1.0):
    """Root of g on [lo, hi] by bisection."""
    glo = g(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if (g(mid) > 0) == (glo > 0):
            lo, glo = mid, g(mid)
        else:
            hi = mid
    return 0.5 * (lo + hi)


@pytest.mark.parametrize("r", [(1, 1), (2, 1), (1, 2), (0.3, 4.0), (9.0, 0.15)])
def test_special_points_against_bisection(r):
    a, b = r
    s = 2 + a + b
    sp = special_points(r)
    assert sp.f1 == pytest.approx(_crossing(lambda f: s * f - s / (1 + b) * (1 - f)), abs=1e-14)
    assert sp.f2 == pytest.approx(_crossing(lambda f: s / (1 + a) * f - s / (1 + b) * (1 - f)), abs=1e-14)
    assert sp.f3 == pytest.approx(_crossing(lambda f: s / (1 + a) * f - s * (1 - f)), abs=1e-14)


@settings(max_examples=1000, deadline=None)
@given(r=ratios_st)
def test_special_points_interlace(r):
    sp = special_points(r)
    assert 0 < sp.f1 <= sp.f2 <= sp.f3 < 1


# --- region checks ------------------------------------------------------------


def test_sample_grid_contains_special_points_and_ends():
    g = sample_grid(11, (2, 3))
    sp = special_points((2, 3))
    for x in (0.0, 1.0, sp.f1, sp.f2, sp.f3):
        assert x in g
    with pytest.raises(ValueError):
        sample_grid(1)


def test_minmod_is_lower_bound():
    rep = check_region("minmod", (1, 1), 1001, 1e-12, "high_resolution")
    assert rep.ok and rep.max_excess <= 1e-12
    f = sample_grid(1001)
    np.testing.assert_allclose(phi("minmod", f), hr_region_bounds(f)[0], rtol=0, atol=1e-15)


def test_superbee_is_upper_bound():
    rep = check_region("superbee", (1, 1), 1001, 1e-12, "high_resolution")
    assert rep.ok
    f = sample_grid(1001)
    np.testing.assert_allclose(phi("superbee", f), hr_region_bounds(f)[1], rtol=0, atol=1e-15)


@pytest.mark.parametrize("kind", HIGH_RESOLUTION_KINDS)
def test_uniform_kinds_in_both_regions(kind):
    for region in Region:
        assert check_region(kind, (1, 1), 1001, 1e-12, region).ok


def test_violations_recorded():
    rep = check_region("superbee", (2, 1), 1001, 1e-12, "high_resolution")
    assert not rep.ok
    assert rep.max_excess > 1e-12
    for f, p, lo, hi, excess in rep.rows():
        assert excess > 1e-12 and (p < lo or p > hi)
    # uniform-mesh minmod misses phi(f2) = 1 when a != b
    assert not check_region("minmod", (2, 1), 101).ok


def test_none_is_tvd_but_not_high_resolution():
    assert check_region("none", (1, 1), 101, region="tvd").ok
    assert not check_region("none", (1, 1), 101, region="high_resolution").ok


@settings(max_examples=100, deadline=None)
@given(kind=st.sampled_from(list(LimiterKind)), r=ratios_st, tol=st.floats(0, 1e-3))
def test_report_consistency(kind, r, tol):
    rep = check_region(kind, r, 64, tol, "high_resolution")
    assert rep.ok == (rep.max_excess <= tol)


@pytest.mark.parametrize("kind", SYMMETRIC_KINDS)
def test_symmetry(kind):
    assert symmetry_defect(kind, 1001) <= 1e-12


def test_berger_asymmetric_off_uniform_mesh():
    f = np.linspace(0, 1, 101)
    assert np.max(np.abs(phi("berger", 1 - f, (3, 1)) - phi("berger", f, (3, 1)))) > 1e-3


@pytest.mark.parametrize("kind", HIGH_RESOLUTION_KINDS)
def test_passes_through_one_at_half(kind):
    assert math.isclose(phi(kind, 0.5), 1.0, abs_tol=1e-12)
