import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cbar import catalog
from cbar.approximation import (
    ApproximationError,
    ConditioningError,
    DDiscontinuityError,
    DegreeCapError,
    HarmonicAngle,
    StarCompact,
    approx_finite_type,
    approx_infinite_type,
    approx_real_segment,
    approx_segment,
    approx_star_compact,
    approx_trig_on_circle,
    approximate,
    scaling_for,
    search_dilation,
    sup_d_error,
    taylor_to_tolerance,
)
from cbar.geometry import CPointArray, metric_d_array
from cbar.grids import CircleGrid, DiscGrid, PolarGrid, SegmentGrid
from cbar.polynomials import Polynomial, TrigPolynomial


def dense_check(f, Q, n_boundary=8192, n_angular=512, n_radial=128, node_gap=0.0):
    """Independent Horner evaluation on a mesh other than the verification one,
    skipping points within ``node_gap`` of a boundary singularity."""
    g = DiscGrid(n_boundary, n_angular, n_radial, exclusion=1e-6)
    z = g.points()
    for node in getattr(f, "singular_nodes", ()):
        z = z[np.abs(z - node) >= node_gap]
    return float(np.max(metric_d_array(f.evaluate(z), CPointArray.from_finite(Q(z)))))


# --- building blocks ---------------------------------------------------------


def test_search_dilation_finds_threshold():
    r, e = search_dilation(lambda r: 1 - r, 1e-3)
    assert e < 1e-3
    assert 1 - r > 1e-3 * 10 ** (-1e-4) * 0.99


def test_search_dilation_stalls_on_constant_error():
    with pytest.raises(ApproximationError, match="stalls"):
        search_dilation(lambda r: 1.0, 0.5)


def test_taylor_to_tolerance_geometric():
    P, tail = taylor_to_tolerance(lambda w: 1 / (1 - w), 0.5, 1e-6, 4096)
    # tail of sum 0.5**k from N on is 2 * 0.5**N
    assert P.degree + 1 == math.ceil(math.log2(2 / 1e-6))
    assert tail < 1e-6
    with pytest.raises(DegreeCapError):
        taylor_to_tolerance(lambda w: 1 / (1 - w), 0.999, 1e-6, 64)


def test_scaling_for():
    for delta, budget in [(1.0, 0.1), (0.5, 1 / 3), (0.37, 0.0167), (1e-3, 0.01)]:
        n = scaling_for(delta, budget)
        assert 1 / (1 + delta * n) < budget
        assert n == 1 or 1 / (1 + delta * (n - 1)) >= budget


# --- sup_d_error --------------------------------------------------------------


def test_sup_d_error_examples():
    f = catalog.identity()
    assert sup_d_error(f, Polynomial([0, 1]), DiscGrid(64, 16, 8)) < 1e-15  # ring FFT rounding
    assert sup_d_error(f, Polynomial([0, 1]), DiscGrid(64, 16, 8).points()) == 0
    assert sup_d_error(f, Polynomial([0, 2]), CircleGrid(97).points()) == pytest.approx(1 / 6, abs=1e-12)
    w = 1 / math.sqrt(2)
    assert sup_d_error(f, Polynomial([0, 2]), np.array([w])) == pytest.approx(1 / (3 + 2 * math.sqrt(2)), abs=1e-12)
    # the boundary value is strictly below the interior one
    assert 1 / 6 < 1 / (3 + 2 * math.sqrt(2))


def test_sup_d_error_on_grid_objects_matches_raw_points():
    f, Q = catalog.log1m(), Polynomial([0, 1, 0.5, 1 / 3])
    for g in (DiscGrid(128, 16, 8).with_nodes([1]), PolarGrid(32, 8)):
        assert sup_d_error(f, Q, g) == pytest.approx(sup_d_error(f, Q, g.points().ravel()), abs=1e-14)
    T = TrigPolynomial([0, 0, 1])
    assert sup_d_error(catalog.circle_id(), T, CircleGrid(64)) < 1e-15


def test_sup_d_error_empty_grid():
    with pytest.raises(ValueError):
        sup_d_error(catalog.identity(), Polynomial([0]), np.array([]))


# --- finite type on the disc ----------------------------------------------------


def test_square_is_reproduced():
    Q, rep = approx_finite_type(catalog.poly([0, 0, 1]), 1e-3)
    assert rep.success and rep.achieved_error < 1e-3
    assert Q.degree <= 2


def test_constant_is_reproduced():
    Q, rep = approx_finite_type(catalog.const(7), 1e-6)
    assert Q.degree == 0 and Q.coeffs[0] == pytest.approx(7, abs=1e-12)
    assert rep.achieved_error < 1e-6


def test_log1m_eps_1e2():
    f = catalog.log1m()
    Q, rep = approx_finite_type(f, 1e-2)
    assert rep.success and rep.achieved_error < 1e-2
    assert rep.grid_size == 2048 + 256 * 64
    assert 0 < rep.dilation_r < 1
    # an independent denser mesh, away from the node
    assert dense_check(f, Q, node_gap=1e-2) < 1e-2


def test_log1m_resolution_limit_at_the_node():
    # At z = 1 the error is 1/(1 + |Q(1)|) with |Q(1)| about log(1/(1-r)); an
    # error below 1e-2 there would need 1 - r < exp(-99), which no double
    # provides. The guarantee is therefore a grid guarantee near the node.
    f = catalog.log1m()
    Q, rep = approx_finite_type(f, 1e-2)
    at_one = 1 / (1 + abs(Q(1.0)))
    assert at_one == pytest.approx(1 / (1 + math.log(1 / (1 - rep.dilation_r))), rel=1e-3)
    assert at_one > 1e-2
    assert 1 / (1 + math.log(1 / np.finfo(float).eps)) > 1e-2


def test_soundness_on_4x_denser_grid():
    # construction on 512 + 64x16, verification on 2048 + 256x64
    f = catalog.strip()
    Q, rep = approx_finite_type(f, 0.05, grid=DiscGrid(512, 64, 16))
    g = DiscGrid(2048, 256, 64).with_nodes(f.singular_nodes)
    assert sup_d_error(f, Q, g.points()) < 0.05


def test_euclidean_error_dominates_d_error():
    # for finite values d <= |.|, so the Euclidean error on the dilated disc bounds d there
    f = catalog.exp()
    Q, rep = approx_finite_type(f, 1e-4)
    r = rep.dilation_r
    z = r * PolarGrid(128, 32).points().ravel()
    P = Polynomial(Q.coeffs / r ** np.arange(Q.coeffs.size))  # undo the dilation
    euclid = float(np.max(np.abs(np.exp(z) - P(z))))
    d = float(np.max(metric_d_array(CPointArray.from_finite(np.exp(z)), CPointArray.from_finite(P(z)))))
    assert d <= euclid + 1e-16
    assert euclid <= rep.euclidean_error + 1e-15


@pytest.mark.parametrize("make", [catalog.log1m, catalog.strip, catalog.exp], ids=lambda m: m.__name__)
def test_halving_eps_does_not_increase_error(make):
    f = make()
    errs = [approx_finite_type(f, eps)[1].achieved_error for eps in (0.2, 0.1, 0.05, 0.025)]
    assert all(b <= a for a, b in zip(errs, errs[1:]))


def test_degree_cap_reported():
    with pytest.raises(DegreeCapError) as info:
        approx_finite_type(catalog.log1m(), 1e-3, degree_cap=4096)
    assert info.value.report is not None and not info.value.report.success


def test_eps_must_be_positive():
    for bad in (0, -1, math.nan):
        with pytest.raises(ValueError):
            approx_finite_type(catalog.exp(), bad)
        with pytest.raises(ValueError):
            approx_infinite_type(catalog.theta_re(), bad)


def test_report_serializes():
    _, rep = approx_finite_type(catalog.exp(), 1e-3)
    data = rep.to_json()
    assert data["kind"] == "finite" and data["success"] is True
    assert data["degree"] == rep.degree and data["target_epsilon"] == 1e-3


# --- infinite type on the disc --------------------------------------------------


def test_constant_angle_gives_constant():
    f = catalog.theta_const(0.0)
    Q, rep = approx_infinite_type(f, 0.1)
    assert Q.degree == 0
    n = Q.coeffs[0]
    assert n.imag == pytest.approx(0, abs=1e-12) and n.real >= 10
    assert rep.achieved_error == pytest.approx(1 / (1 + n.real), rel=1e-12)
    assert rep.achieved_error < 0.1


def test_theta_re():
    f = catalog.theta_re()
    Q, rep = approx_infinite_type(f, 0.05)
    assert rep.success and rep.achieved_error < 0.05
    assert rep.scaling_n >= 1 and 1 / (1 + rep.delta * rep.scaling_n) < 0.05 / 3
    assert rep.delta >= 0.9 * math.exp(-rep.dilation_r) * (1 - 1e-12)
    assert dense_check(f, Q) < 0.05
    # Q(z) tracks n exp(i r z)
    z = 0.5 * np.exp(1j * np.linspace(0, 2 * np.pi, 50))
    ref = rep.scaling_n * np.exp(1j * rep.dilation_r * z)
    assert np.max(np.abs(Q(z) - ref)) < 0.05 / 3


def test_karg_image_covers_circle():
    f = catalog.theta_karg()
    Q, rep = approx_infinite_type(f, 0.1)
    assert rep.success
    phi = 2 * np.pi * np.arange(4096) / 4096
    ang = np.angle(Q(np.exp(1j * phi)))
    hist, _ = np.histogram(np.mod(ang, 2 * np.pi), bins=64, range=(0, 2 * np.pi))
    assert hist.min() > 0


def test_approximate_dispatches():
    assert approximate(catalog.theta_const(1.0), 0.2)[1].kind == "infinite"
    assert approximate(catalog.exp(), 0.2)[1].kind == "finite"


def test_np_convergence():
    # d(nP, inf*exp(i 6 arg(2+z))) = 1/(1 + n|P|) <= 1/(1+n) as |P| >= 1
    g = PolarGrid(256, 64)
    z = g.points()
    target = CPointArray.from_angles(6 * np.angle(2 + z).ravel())
    sups = []
    for n in (10, 100, 1000):
        vals = CPointArray.from_finite((n * (2 + z) ** 6).ravel())
        sups.append(float(np.max(metric_d_array(target, vals))))
    assert sups[0] > sups[1] > sups[2]
    assert sups[2] < 2e-2 and sups[2] <= 1 / 1001 + 1e-12


# --- circle ---------------------------------------------------------------------


def test_circle_identity():
    T, rep = approx_trig_on_circle(catalog.circle_id(), 1e-3)
    assert T.degree == 1
    assert rep.achieved_error < 1e-12


def test_circle_infinity():
    f = catalog.circle_inf()
    T, rep = approx_trig_on_circle(f, 0.1)
    assert rep.success and rep.achieved_error < 0.1
    phi = 2 * np.pi * np.arange(10007) / 10007
    d = metric_d_array(f.evaluate(np.exp(1j * phi)), CPointArray.from_finite(T(phi)))
    assert np.max(d) < 0.1
    # the clamp gives R exp(i phi): only the first positive mode survives
    assert abs(T.coefficient(1)) == pytest.approx(rep.clamp_R)


@pytest.mark.parametrize("at_pi", [0.0, math.pi])
def test_circle_tan_rejected(at_pi):
    with pytest.raises(DDiscontinuityError):
        approx_trig_on_circle(catalog.circle_tan(at_pi), 0.1)


# --- segment --------------------------------------------------------------------


def test_segment_square():
    S, rep = approx_real_segment(catalog.seg_x2(), 1e-6)
    assert S.is_real
    assert np.allclose(S.to_polynomial().coeffs, [0, 0, 1], atol=1e-12)


def test_segment_inverse_square():
    f = catalog.seg_invx2()
    S, rep = approx_real_segment(f, 0.05)
    assert S.is_real and rep.achieved_error < 0.05
    x = SegmentGrid(20001).points()
    d = metric_d_array(f.evaluate(x), CPointArray.from_finite(S(x)))
    assert np.max(d) < 0.05


@pytest.mark.parametrize("at_zero", [0.0, math.pi])
def test_segment_reciprocal_rejected(at_zero):
    with pytest.raises(DDiscontinuityError):
        approx_real_segment(catalog.seg_invx(at_zero), 0.05)


def test_real_segment_rejects_nonreal_infinity():
    with pytest.raises(ValueError, match="extended-real"):
        approx_real_segment(catalog.seg_invx(1.0), 0.05)


def test_complex_segment_target():
    f = catalog.PathFunction("expix", "segment", lambda x: CPointArray.from_finite(np.exp(1j * np.asarray(x))))
    S, rep = approx_segment(f, 1e-8)
    assert not S.is_real and rep.achieved_error < 1e-8


# --- star-shaped compacts ---------------------------------------------------------


def test_star_disc_cubic():
    Q, rep = approx_star_compact(StarCompact.disc(), catalog.poly([0, 0, 0, 1]), 1e-6)
    assert Q.degree == 3 and rep.achieved_error < 1e-6


def test_square_exponential():
    L = StarCompact.square()
    Q, rep = approx_star_compact(L, catalog.exp(), 1e-4)
    assert rep.success
    x = np.linspace(-1, 1, 301)
    z = (x[:, None] + 1j * x[None, :]).ravel()
    vals = CPointArray.from_finite(np.exp(z))
    assert np.max(metric_d_array(vals, CPointArray.from_finite(Q(z)))) < 1e-4


def test_star_disc_matches_disc_driver():
    f = catalog.log1m()
    _, disc = approx_finite_type(f, 1e-2)
    Q, star = approx_star_compact(StarCompact.disc(), f, 1e-2)
    assert star.success and disc.success
    assert star.achieved_error < 1e-2 and disc.achieved_error < 1e-2
    assert dense_check(f, Q, node_gap=1e-2) < 1e-2


def test_star_infinite_type_on_square():
    L = StarCompact.square(0.8)
    f = HarmonicAngle(lambda z: np.real(z), "re")
    Q, rep = approx_star_compact(L, f, 0.1)
    assert rep.success and rep.scaling_n >= 1
    x = np.linspace(-0.8, 0.8, 101)
    z = (x[:, None] + 1j * x[None, :]).ravel()
    d = metric_d_array(CPointArray.from_angles(np.real(z)), CPointArray.from_finite(Q(z)))
    assert np.max(d) < 0.1


def test_star_conditioning_reported():
    # monomials are nearly dependent on a 20:1 ellipse
    ellipse = StarCompact(0j, lambda phi: 1 / np.hypot(np.cos(phi), np.sin(phi) / 0.05), "ellipse")
    Q, rep = approx_star_compact(ellipse, catalog.exp(), 1e-4)
    assert rep.condition_number > 100
    with pytest.raises(ConditioningError) as info:
        approx_star_compact(ellipse, catalog.exp(), 1e-8, cond_max=1e4)
    assert info.value.report.condition_number > 1e4
    assert "condition" in str(info.value)


@settings(max_examples=10)
@given(st.floats(0.3, 2.0), st.floats(-0.5, 0.5), st.floats(-0.5, 0.5))
def test_star_shifted_disc_reproduces_polynomial(radius, cx, cy):
    L = StarCompact.disc(complex(cx, cy), radius)
    Q, rep = approx_star_compact(L, catalog.poly([1, -2, 0.5]), 1e-6)
    assert rep.achieved_error < 1e-6
    z = L.mesh(4096, 512, 16)
    exact = CPointArray.from_finite(1 - 2 * z + 0.5 * z**2)
    assert np.max(metric_d_array(exact, CPointArray.from_finite(Q(z)))) < 1e-6
