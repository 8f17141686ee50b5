import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvteleport import states, teleport
from cvteleport.errors import DomainError, NumericError
from cvteleport.numerics import Grid2D
from cvteleport.states import CatLike, Coherent, IdealCat, SqueezedVacuum, SqueezeParams
from cvteleport.teleport import FidelityResult, TeleportJob

RS = [0.25, 0.5, 1.0, 1.5]


def job(inp, res, r, **kw):
    return TeleportJob.make(inp, res, r, **kw)


def test_job_defaults_and_validation():
    j = job(Coherent(1.0), "tps", 0.5)
    assert j.sq.phi == pytest.approx(math.pi)
    assert j.optimal_phase
    assert j.with_r(1.0).gamma == pytest.approx(math.exp(-2))
    assert j.with_resource("tmsv").resource is states.ResourceKind.TMSV
    with pytest.raises(DomainError):
        job(Coherent(1.0), "tps", 0.0)


def test_fidelity_result_bounds():
    with pytest.raises(NumericError):
        FidelityResult(1.1, teleport.ROUTE_CLOSED)
    FidelityResult(1.0 + 5e-10, teleport.ROUTE_CLOSED)


@pytest.mark.parametrize("inp", [Coherent(0.5 + 0.5j), SqueezedVacuum(0.4, 0.0), CatLike(0.313, 0.0)])
@pytest.mark.parametrize("res", ["tmsv", "tps"])
def test_chi_output_at_origin(inp, res):
    assert teleport.chi_output(job(inp, res, 0.7), 0.0) == pytest.approx(1.0, abs=1e-12)


def test_chi_output_tmsv_damping():
    j = job(CatLike(0.313, 0.0), "tmsv", 0.6)
    for a in (0.3, 0.5 - 0.7j, 1.4j):
        ratio = teleport.chi_output(j, a) / states.chi_input(j.input, a)
        assert abs(ratio) == pytest.approx(math.exp(-j.gamma * abs(a) ** 2), rel=1e-12)


@pytest.mark.parametrize("res", ["tmsv", "tps"])
def test_chi_output_ideal_limit(res):
    x = np.linspace(-3, 3, 31)
    pts = (x[None, :] + 1j * x[:, None]).ravel()
    pts = pts[np.abs(pts) <= 3]
    j = job(Coherent(0.8 - 0.3j), res, 5.0)
    diff = np.abs(teleport.chi_output(j, pts) - states.chi_input(j.input, pts))
    assert diff.max() < 1e-4
    # for a broader input the gap is set by gamma |alpha|^2 |chi_in|, not by a fixed number
    j = job(CatLike(0.313, 0.0), res, 5.0)
    chi_in = states.chi_input(j.input, pts)
    diff = np.abs(teleport.chi_output(j, pts) - chi_in)
    assert np.all(diff <= 1.01 * j.gamma * np.abs(pts) ** 2 * np.abs(chi_in) + 1e-15)


def test_fidelity_numeric_examples():
    assert teleport.fidelity_numeric(job(Coherent(0.3), "tmsv", 0.0)).value == pytest.approx(0.5, abs=1e-9)
    f2 = teleport.fidelity_numeric(job(Coherent(0.0), "tps", 0.5)).value
    g = math.exp(-1)
    assert f2 == pytest.approx((1 + 2 * g + 5 * g * g) / ((1 + g) ** 3 * (1 + g * g)), abs=1e-8)
    assert f2 == pytest.approx(0.8302102, abs=1e-7)
    assert teleport.fidelity_numeric(job(CatLike(0.0, 0.0), "tmsv", 0.0)).value == pytest.approx(0.25, abs=1e-9)


def test_fidelity_numeric_reports_route():
    res = teleport.fidelity_numeric(job(CatLike(0.313, 0.0), "tps", 0.5))
    assert res.route == teleport.ROUTE_INTEGRAL
    assert res.error >= 0


def test_fidelity_closed_examples():
    assert teleport.fidelity_closed(job(Coherent(0), "tmsv", 0.5)).value == pytest.approx(1 / (1 + math.exp(-1)))
    f1 = teleport.fidelity_closed(job(CatLike(0.313, 0.0), "tmsv", 0.5)).value
    assert f1 == pytest.approx(0.42666, abs=1e-5)
    f2 = teleport.fidelity_closed(job(CatLike(0.313, 0.0), "tps", 0.5))
    assert f2.route == teleport.ROUTE_GAMMA
    assert f2.value > f1


def test_fidelity_closed_needs_optimal_phase():
    with pytest.raises(DomainError):
        teleport.fidelity_closed(job(Coherent(0), "tmsv", 0.5, phi=0.0))
    with pytest.raises(DomainError):
        teleport.fidelity_closed(job(IdealCat(1.0), "tmsv", 0.5))


@pytest.mark.parametrize("r", RS)
@pytest.mark.parametrize(
    "inp,res",
    [
        (Coherent(0.7), "tmsv"),
        (Coherent(0.7), "tps"),
        (SqueezedVacuum(0.3, 0.0), "tmsv"),
        (CatLike(0.0, 0.0), "tmsv"),
        (CatLike(0.313, 0.0), "tmsv"),
        (CatLike(0.0, 0.0), "tps"),
        (CatLike(0.313, 0.0), "tps"),
    ],
)
def test_closed_and_integral_routes_agree(inp, res, r):
    j = job(inp, res, r)
    assert abs(teleport.fidelity_closed(j).value - teleport.fidelity_numeric(j).value) < 1e-6


def test_squeezed_vacuum_tps_divergence_is_flagged():
    j = job(SqueezedVacuum(0.3, 0.0), "tps", 0.5)
    res = teleport.fidelity_closed(j)
    assert res.route == teleport.ROUTE_INTEGRAL
    assert not res.consistent
    assert res.reference == pytest.approx(teleport.squeezed_f2_printed(0.3, j.gamma))
    assert res.value == pytest.approx(teleport.fidelity_squeezed_gamma(0.3, j.gamma), abs=1e-6)
    # the tabulated formula fails its own rho=0 limit
    assert teleport.squeezed_f2_printed(0.0, 1.0) == pytest.approx(0.25)
    assert teleport.coherent_f2(1.0) == pytest.approx(0.5)


def test_squeezed_f1_reduces_to_coherent():
    for g in np.linspace(0.01, 1.0, 25):
        assert abs(teleport.squeezed_f1(0.0, g) - teleport.coherent_f1(g)) < 1e-12


def test_gamma_apply_examples():
    assert teleport.gamma_apply(lambda g: 1.0, 0.3) == pytest.approx(1.0, abs=1e-12)
    g, u = 0.4, 1.0
    expected = math.exp(-g) * (1 + 2 * g * g * (1 - g) * u / (1 + g * g) + g * g * (1 - g) ** 2 * u * u / (2 * (1 + g * g)))
    assert teleport.gamma_apply(lambda x: math.exp(-x * u), g) == pytest.approx(expected, abs=1e-8)
    ge = math.exp(-1)
    assert teleport.gamma_apply(teleport.coherent_f1, ge) == pytest.approx(teleport.coherent_f2(ge), abs=1e-6)
    for bad in (0.0, 1.0, 1.2):
        with pytest.raises(DomainError):
            teleport.gamma_apply(teleport.coherent_f1, bad)


def test_gamma_identity_with_tps_bracket():
    # the Gamma image of exp(-g u) equals the TPS/TMSV ratio of chi_EPR at |alpha|^2 = u
    for r in (0.3, 0.8):
        sq = SqueezeParams(r, math.pi)
        g = sq.gamma
        for a in (0.5, 1.0 + 0.3j):
            u = abs(a) ** 2
            lhs = teleport.gamma_apply(lambda x: math.exp(-x * u), g)
            rhs = states.chi_resource("tps", sq, np.conj(a), a) / states.chi_resource("tmsv", sq, np.conj(a), a) * math.exp(-g * u)
            assert lhs == pytest.approx(rhs.real, abs=1e-7)


@settings(max_examples=20, deadline=None)
@given(a0=st.complex_numbers(max_magnitude=2.5), r=st.floats(0.05, 2.0))
def test_coherent_fidelity_independent_of_amplitude(a0, r):
    base = teleport.fidelity_numeric(job(Coherent(0.0), "tps", r)).value
    assert abs(teleport.fidelity_numeric(job(Coherent(a0), "tps", r)).value - base) < 1e-9


@pytest.mark.parametrize("inp", [Coherent(1.0), SqueezedVacuum(0.5, 0.0), CatLike(0.313, 0.0)])
@pytest.mark.parametrize("res", ["tmsv", "tps"])
def test_fidelity_tends_to_one(inp, res):
    v = teleport.fidelity_numeric(job(inp, res, 5.0)).value
    assert 1 - 1e-3 <= v <= 1 + 1e-9


def test_cat_f2_beats_f1():
    for r in np.linspace(0.1, 2.0, 20):
        g = math.exp(-2 * r)
        assert teleport.cat_f2(0.313, g) >= teleport.cat_f1(0.313, g)


def test_cat_w1_limits():
    # identity teleportation at large r
    assert abs(teleport.cat_w1(0.313, 0.0, math.exp(-10), 0.0) - states.wigner_catlike(0.313, 0.0, 0.0)) < 1e-3
    # the printed bracket is exact at the origin and at rho = 0
    for g in (0.2, 0.5):
        assert teleport.cat_w1_printed(0.313, 0.0, g, 0.0) == pytest.approx(teleport.cat_w1(0.313, 0.0, g, 0.0), abs=1e-12)
        for a in (0.4, 0.3 - 0.6j):
            assert teleport.cat_w1_printed(0.0, 0.0, g, a) == pytest.approx(teleport.cat_w1(0.0, 0.0, g, a), abs=1e-12)


@pytest.mark.parametrize("res", ["tmsv", "tps"])
@pytest.mark.parametrize("phase", [0.0, 0.8])
def test_wigner_routes_agree(res, phase):
    j = job(CatLike(0.313, phase), res, 0.5)
    for a in (0.0, 0.6, -0.4 + 0.9j, 1.5j):
        closed = teleport.wigner_output(j, a, route="closed")
        numeric = teleport.wigner_output(j, a, route="numeric")
        assert closed == pytest.approx(numeric, abs=1e-5)


def test_tmsv_output_is_gaussian_convolution():
    # TMSV teleportation convolves the input Wigner function with a Gaussian of width gamma
    j = job(CatLike(0.313, 0.4), "tmsv", 0.8)
    g = j.gamma
    x = np.linspace(-6, 6, 481)
    dx = x[1] - x[0]
    pts = x[None, :] + 1j * x[:, None]
    w_in = states.wigner_catlike(0.313, 0.4, pts)
    for b in (0.0, 0.5 + 0.2j, -0.3j):
        kernel = np.exp(-np.abs(pts - b) ** 2 / g) / (math.pi * g)
        ref = float(np.sum(w_in * kernel) * dx * dx)
        assert teleport.wigner_output(j, b, route="numeric") == pytest.approx(ref, abs=1e-6)
        assert teleport.wigner_output(j, b, route="closed") == pytest.approx(ref, abs=1e-6)


@pytest.mark.parametrize(
    "inp,res",
    [(CatLike(0.313, 0.0), "tps"), (Coherent(0.5), "tmsv"), (SqueezedVacuum(0.4, 0.3), "tps"), (CatLike(0.6, 1.0), "tmsv")],
)
def test_output_wigner_is_normalised(inp, res):
    j = job(inp, res, 0.5, grid=Grid2D(6.0, 241))
    w = teleport.wigner_output_grid(j)
    assert j.grid.integrate(w) == pytest.approx(1.0, abs=1e-6)


def test_grid_minima():
    m1 = teleport.grid_minimum(job(CatLike(0.313, 0.0), "tmsv", 0.5))
    m2 = teleport.grid_minimum(job(CatLike(0.313, 0.0), "tps", 0.5))
    assert m1.value == pytest.approx(-0.048471, abs=1e-5)
    assert m2.value == pytest.approx(-0.172455, abs=1e-5)
    assert m1.value <= m1.grid_value + 1e-15
    assert abs(m2.location) < 0.05


def test_threshold_crossings():
    cat = CatLike(0.313, 0.0)
    r1, s1 = teleport.threshold(cat, "tmsv")
    r2, s2 = teleport.threshold(cat, "tps")
    assert r1 == pytest.approx(math.log(2) / 2, abs=1e-3)
    assert r2 == pytest.approx(0.191501, abs=1e-3)
    assert r2 < r1
    for r in (r1 + 0.05, 1.0):
        assert teleport.w0_at(job(cat, "tmsv", 1.0), r) < 0
    assert np.all(s2.values[s2.r > r2 + 0.01] < 0)


def test_missing_crossing_is_not_an_error():
    series = teleport.w0_scan(CatLike(0.313, 0.0), "tps", np.linspace(0.5, 1.0, 6))
    assert teleport.zero_crossing(series) is None


def test_benchmark_margin():
    sq = SqueezeParams(1.0, math.pi)
    assert teleport.benchmark_margin("tmsv", sq, 0.0) == pytest.approx(0.0, abs=1e-15)
    x = np.linspace(0.05, 3, 40)
    for r in (0.2, 0.5):
        m = teleport.benchmark_margin("tmsv", SqueezeParams(r, math.pi), x)
        g = math.exp(-2 * r)
        assert np.allclose(m, np.exp(-2 * g * x**2) - np.exp(-(x**2) / 2), atol=1e-14)
    # gamma < 1/4, i.e. r > ln 2, beats the benchmark everywhere
    assert np.all(teleport.benchmark_margin("tmsv", SqueezeParams(0.75, math.pi), x) > 0)
    assert np.all(teleport.benchmark_margin("tmsv", SqueezeParams(0.65, math.pi), x) < 0)
    assert teleport.benchmark_margin("tps", sq, 1.0) > teleport.benchmark_margin("tmsv", sq, 1.0)
