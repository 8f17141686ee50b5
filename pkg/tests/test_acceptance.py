"""Acceptance suite.

Each test prints one ``criterion N: PASS|FAIL`` line with the measured
numbers and then asserts. Run ``pytest tests/test_acceptance.py -v`` or
``python tests/test_acceptance.py`` for the bare report.
"""

import contextlib
import math
import sys

import numpy as np
import pytest

from cvteleport import checks, entanglement, fock, states, teleport
from cvteleport.numerics import Grid2D
from cvteleport.states import CatLike, Coherent, SqueezedVacuum, SqueezeParams
from cvteleport.teleport import TeleportJob

RS = (0.25, 0.5, 1.0, 1.5)


@pytest.fixture
def report(request):
    capman = request.config.pluginmanager.getplugin("capturemanager")

    def emit(n, ok, detail):
        line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ctx = capman.global_and_fixture_disabled() if capman else contextlib.nullcontext()
        with ctx:
            print("\n" + line, flush=True)
        return ok

    return emit


def test_criterion_01_logneg_oracle(report):
    worst = 0.0
    for kind in ("tmsv", "tps"):
        for r in RS:
            cut = fock.auto_cutoff(kind, r, tol=1e-10, amplitude=True)
            num = fock.numeric_logneg(fock.build_resource(kind, r, 0.0, cutoff=cut))
            worst = max(worst, abs(num - entanglement.logneg_closed(kind, r)))
    assert report(1, worst < 1e-6, f"max |eps_closed - eps_partial_transpose| = {worst:.2e} (tol 1e-6)")


def test_criterion_02_fidelity_oracle(report):
    worst_closed = 0.0
    worst_gamma = 0.0
    for r in RS:
        for res in ("tmsv", "tps"):
            j = TeleportJob.make(Coherent(1.0), res, r)
            worst_closed = max(worst_closed, abs(teleport.fidelity_closed(j).value - teleport.fidelity_numeric(j).value))
        for rho in (0.0, 0.313):
            g = math.exp(-2 * r)
            f1 = teleport.fidelity_numeric(TeleportJob.make(CatLike(rho, 0.0), "tmsv", r)).value
            f2 = teleport.fidelity_numeric(TeleportJob.make(CatLike(rho, 0.0), "tps", r)).value
            worst_closed = max(worst_closed, abs(teleport.cat_f1(rho, g) - f1))
            worst_gamma = max(worst_gamma, abs(teleport.cat_f2(rho, g) - f2))
    ok = worst_closed < 1e-6 and worst_gamma < 1e-6
    assert report(2, ok, f"closed vs integral {worst_closed:.2e}, gamma operator vs chi_TPS integral {worst_gamma:.2e} (tol 1e-6)")


def test_criterion_03_input_cat(report):
    rho, fid = fock.optimize_cat_rho(1.0, math.pi)
    ok = abs(rho - 0.313) <= 0.005 and abs(fid - 0.997) <= 0.001
    assert report(3, ok, f"rho* = {rho:.5f} (0.313 +- 0.005), fidelity = {fid:.5f} (0.997 +- 0.001)")


def test_criterion_04_thresholds(report):
    cat = CatLike(0.313, 0.0)
    r_tps, _ = teleport.threshold(cat, "tps")
    r_tmsv, _ = teleport.threshold(cat, "tmsv")
    ok = r_tps is not None and r_tmsv is not None and abs(r_tps - 0.20) <= 0.02 and abs(r_tmsv - 0.35) <= 0.02
    assert report(4, ok, f"r*_TPS = {r_tps:.5f} (0.20 +- 0.02), r*_TMSV = {r_tmsv:.5f} (0.35 +- 0.02)")


def test_criterion_05_negativity_depth(report):
    w2 = teleport.grid_minimum(TeleportJob.make(CatLike(0.313, 0.0), "tps", 0.5)).value
    w1 = teleport.grid_minimum(TeleportJob.make(CatLike(0.313, 0.0), "tmsv", 0.5)).value
    ok = abs(w2 + 0.20) <= 0.03 and abs(w1 + 0.05) <= 0.02
    assert report(5, ok, f"min W2 = {w2:.5f} (-0.20 +- 0.03), min W1 = {w1:.5f} (-0.05 +- 0.02)")


def test_criterion_06_photon_statistics(report):
    sq5 = SqueezeParams(5.0)
    ratio5 = states.photon_number_prob("tps", sq5, 1) / states.photon_number_prob("tmsv", sq5, 1)
    # r = 1 against the Fock-space coefficients
    tps = fock.build_resource("tps", 1.0, 0.0)
    tmsv = fock.build_resource("tmsv", 1.0, 0.0)
    oracle = abs(tps.amplitudes[1, 1]) ** 2 / abs(tmsv.amplitudes[1, 1]) ** 2
    sq1 = SqueezeParams(1.0)
    ratio1 = states.photon_number_prob("tps", sq1, 1) / states.photon_number_prob("tmsv", sq1, 1)
    ok = 5e-8 <= ratio5 <= 8e-8 and abs(ratio1 - oracle) < 1e-10 and abs(ratio1 - 0.447) < 5e-4
    detail = f"ratio(r=5) = {ratio5:.3e} in [5e-8, 8e-8]; ratio(r=1) = {ratio1:.5f} vs Fock {oracle:.5f} (printed 'about 0.3' is a documented discrepancy)"
    assert report(6, ok, detail)


def test_criterion_07_heralding(report):
    sq = SqueezeParams(0.8, 0.0)
    ideal = fock.build_resource("tps", 0.8, 0.0)
    fids = []
    with pytest.warns(fock.TruncationWarning):
        setups = [fock.HeraldingSetup(T) for T in (0.5, 0.7, 0.9, 0.99)]
    for setup in setups:
        s, _ = fock.herald_tps(sq, setup)
        fids.append(abs(fock.overlap(ideal, s)) ** 2)
    monotone = all(b >= a for a, b in zip(fids, fids[1:]))
    ok = fids[-1] >= 0.999 and monotone
    assert report(7, ok, "fidelity at T = 0.5, 0.7, 0.9, 0.99: " + ", ".join(f"{f:.6f}" for f in fids))


def test_criterion_08_structural_identity(report):
    out = fock.basis_change_5050(fock.build_resource("tps", 0.8, 0.0, cutoff=60))
    ref = fock.pm_tps_construction(0.8, 0.0, out.cutoff)
    ov = abs(fock.overlap(ref, out)) ** 2
    assert report(8, ov >= 1 - 1e-8, f"overlap deficit 1 - |<a|b>|^2 = {max(1 - ov, 0.0):.1e} (need <= 1e-8)")


def test_criterion_09_orderings(report):
    rs = np.linspace(0.1, 2.0, 20)
    fid_order = all(teleport.cat_f2(0.313, math.exp(-2 * r)) >= teleport.cat_f1(0.313, math.exp(-2 * r)) for r in rs)
    e_tps = entanglement.logneg_closed("tps", 1.0)
    e_tmsv = entanglement.logneg_closed("tmsv", 1.0)
    e_pa = fock.numeric_logneg(fock.build_resource("photon_added", 1.0, 0.0, cutoff=fock.auto_cutoff("photon_added", 1.0, tol=1e-10, amplitude=True)))
    ent_order = e_tps > e_pa > e_tmsv
    sq_order = all(abs(states.squeezing_closed("tps", r)) >= abs(states.squeezing_closed("tmsv", r)) for r in rs)
    spread = 0.0
    for r in rs:
        for res in ("tmsv", "tps"):
            vals = [teleport.fidelity_numeric(TeleportJob.make(Coherent(a0), res, r)).value for a0 in (0.0, 1.0, 2 + 1j)]
            spread = max(spread, max(vals) - min(vals))
    ok = fid_order and ent_order and sq_order and spread < 1e-9
    detail = (
        f"F2>=F1 {fid_order}; eps TPS {e_tps:.4f} > PA {e_pa:.4f} > TMSV {e_tmsv:.4f} {ent_order}; "
        f"|S_TPS|>=|S_TMSV| {sq_order}; coherent spread {spread:.1e}"
    )
    assert report(9, ok, detail)


def _two_mode_norm(kind, r, phi):
    # integrate in the Bogoliubov frame, where the map is volume preserving
    sq = SqueezeParams(r, phi)
    x = np.linspace(-4, 4, 41)
    h = x[1] - x[0]
    z = (x[None, :] + 1j * x[:, None]).ravel()
    at, bt = z[:, None], z[None, :]
    a, b = sq.bogoliubov().inverse(at, bt)
    w = states.wigner_resource(kind, sq, a, b)
    return float(np.sum(w) * h**4)


def test_criterion_10_normalisation(report):
    worst_w = 0.0
    for kind in ("tmsv", "tps"):
        for r, phi in ((0.5, 0.0), (1.0, math.pi)):
            worst_w = max(worst_w, abs(_two_mode_norm(kind, r, phi) - 1))
    big = Grid2D(6.0, 241)
    pts = big.points()
    worst_w = max(worst_w, abs(big.integrate(states.wigner_catlike(0.313, 0.0, pts)) - 1))
    for inp, res in ((CatLike(0.313, 0.0), "tps"), (CatLike(0.313, 0.0), "tmsv"), (Coherent(0.5), "tps"), (SqueezedVacuum(0.4, 0.0), "tmsv")):
        j = TeleportJob.make(inp, res, 0.5, grid=big)
        worst_w = max(worst_w, abs(big.integrate(teleport.wigner_output_grid(j)) - 1))

    worst_chi = 0.0
    for kind in ("tmsv", "tps"):
        for r in RS:
            sq = SqueezeParams(r, 0.3)
            worst_chi = max(worst_chi, abs(states.chi_resource(kind, sq, 0, 0) - 1))
            worst_chi = max(worst_chi, abs(fock.numeric_characteristic(fock.build_resource(kind, r, 0.3), 0, 0) - 1))
    for inp in (Coherent(1 + 1j), SqueezedVacuum(0.5, 0.2), CatLike(0.313, 0.0)):
        worst_chi = max(worst_chi, abs(states.chi_input(inp, 0) - 1))
        for res in ("tmsv", "tps"):
            worst_chi = max(worst_chi, abs(teleport.chi_output(TeleportJob.make(inp, res, 0.5), 0) - 1))

    worst_p = 0.0
    n = np.arange(20000)
    for kind in ("tmsv", "tps"):
        for r in RS:
            worst_p = max(worst_p, abs(math.fsum(states.photon_number_prob(kind, SqueezeParams(r), n)) - 1))

    ok = worst_w < 1e-6 and worst_chi < 1e-10 and worst_p < 1e-10
    assert report(10, ok, f"Wigner {worst_w:.1e} (1e-6), chi(0) {worst_chi:.1e} (1e-10), P(n) {worst_p:.1e} (1e-10)")


def test_criterion_11_documented_divergences(report):
    rep = checks.run("full")
    div = rep.divergences
    ok = len(div) == 2 and not rep.failures
    names = "; ".join(f"{d.function}: {d.invariant}" for d in div)
    assert report(11, ok, f"{len(rep.results)} checks, {len(rep.failures)} failures, {len(div)} expected divergences ({names})")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
