"""Oracle-equivalence and invariant checks behind ``cvteleport verify``.

Each check compares a closed form with an independent route (mostly the
Fock-space oracle) and records the observed deviation. Two entries are
known divergences between the source formulas and their oracles; they are
reported with status ``expected-divergence`` instead of failing.

Functions under test are looked up through their modules at call time, so
a patched function (for example a deliberately broken closed form) is
what gets checked.
"""

import math
import time
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from . import entanglement, fock, numerics, states, teleport
from .states import CatLike, Coherent, IdealCat, SqueezedVacuum, SqueezeParams

PASS = "pass"
FAIL = "fail"
EXPECTED = "expected-divergence"

TIERS = {
    "fast": {"r": (0.5, 1.0), "phi": (0.0, np.pi), "rho": (0.0, 0.313)},
    "full": {"r": (0.25, 0.5, 1.0, 1.5), "phi": (0.0, np.pi), "rho": (0.0, 0.313)},
}


@dataclass
class CheckResult:
    module: str
    invariant: str
    function: str
    params: dict
    deviation: float
    tolerance: float
    status: str
    message: str = ""


@dataclass
class Report:
    tier: str
    results: list = field(default_factory=list)
    seconds: float = 0.0

    def add(self, module, invariant, function, params, deviation, tolerance, message=""):
        ok = bool(np.isfinite(deviation) and deviation <= tolerance)
        self.results.append(
            CheckResult(module, invariant, function, params, float(deviation), tolerance, PASS if ok else FAIL, message)
        )
        return ok

    def expected(self, module, invariant, function, params, deviation, message):
        self.results.append(CheckResult(module, invariant, function, params, float(deviation), 0.0, EXPECTED, message))

    def error(self, module, invariant, function, params, exc):
        self.results.append(
            CheckResult(module, invariant, function, params, float("inf"), 0.0, FAIL, f"{type(exc).__name__}: {exc}")
        )

    @property
    def failures(self):
        return [r for r in self.results if r.status == FAIL]

    @property
    def divergences(self):
        return [r for r in self.results if r.status == EXPECTED]

    @property
    def ok(self):
        return not self.failures

    def as_dict(self):
        return {
            "tier": self.tier,
            "ok": self.ok,
            "summary": {
                "checks": len(self.results),
                "passed": sum(r.status == PASS for r in self.results),
                "failed": len(self.failures),
                "expected_divergence": len(self.divergences),
            },
            "checks": [asdict(r) for r in self.results],
        }


def _guard(report, module, invariant, function, params):
    """Decorator-free try/except wrapper used by every check group."""

    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, et, ev, tb):
            if ev is not None and isinstance(ev, Exception):
                report.error(module, invariant, function, params, ev)
                return True
            return False

    return _Ctx()


SAMPLE_POINTS = np.array([0.0, 0.4 + 0.1j, -0.3 + 0.5j, 0.7 - 0.2j, -0.5 - 0.6j])


# ---------------------------------------------------------------------------


def check_numerics(rep, tier):
    m = "numerics"
    spec = numerics.QuadratureSpec(order=32)
    cases = [
        ("gaussian", lambda a: np.exp(-np.abs(a) ** 2), 1.0, 1.0),
        ("scaled gaussian", lambda a: np.exp(-2 * np.abs(a) ** 2), 2.0, 0.5),
        ("radial moment", lambda a: np.abs(a) ** 2 * np.exp(-np.abs(a) ** 2), 1.0, 1.0),
    ]
    for name, f, damp, exact in cases:
        with _guard(rep, m, f"integral of {name}", "numerics.integrate_phase_plane", {}):
            v = numerics.integrate_phase_plane(f, spec.with_damping(damp))
            rep.add(m, f"integral of {name}", "numerics.integrate_phase_plane", {"order": 32}, abs(v - exact), 1e-10)
    with _guard(rep, m, "linearity", "numerics.integrate_phase_plane", {}):
        f = lambda a: np.exp(-np.abs(a) ** 2) * (1 + a.real**2)
        g = lambda a: np.exp(-1.5 * np.abs(a) ** 2) * a.imag**2
        s = spec.with_damping(1.0)
        lhs = numerics.integrate_phase_plane(lambda a: 2 * f(a) - 3 * g(a), s)
        rhs = 2 * numerics.integrate_phase_plane(f, s) - 3 * numerics.integrate_phase_plane(g, s)
        rep.add(m, "linearity", "numerics.integrate_phase_plane", {}, abs(lhs - rhs), 1e-10)
    with _guard(rep, m, "vacuum Wigner", "numerics.wigner_from_characteristic", {}):
        chi = lambda a: np.exp(-0.5 * np.abs(a) ** 2)
        w = numerics.wigner_from_characteristic(chi, np.array([0.0, 1.0]))
        dev = max(abs(w[0] - 2 / np.pi), abs(w[1] - 2 / np.pi * np.exp(-2)))
        rep.add(m, "vacuum Wigner", "numerics.wigner_from_characteristic", {"beta": [0, 1]}, dev, 1e-10)
    with _guard(rep, m, "derivative accuracy", "numerics.derivative", {}):
        dev = max(
            abs(numerics.derivative(lambda g: g**3, 0.5, 1) - 0.75),
            abs(numerics.derivative(lambda g: g**3, 0.5, 2) - 3.0),
            abs(numerics.derivative(lambda g: np.exp(-g), 0.3, 2) - np.exp(-0.3)),
        )
        rep.add(m, "derivative accuracy", "numerics.derivative", {}, dev, 1e-7)


def check_states(rep, tier):
    m = "states"
    grid = TIERS[tier]
    for r in grid["r"]:
        for phi in grid["phi"]:
            sq = SqueezeParams(r, phi)
            p = {"r": r, "phi": phi}
            for kind in ("tmsv", "tps"):
                pk = dict(p, kind=kind)
                with _guard(rep, m, "chi(0)=1", "states.chi_resource", pk):
                    v = states.chi_resource(kind, sq, 0.0, 0.0)
                    rep.add(m, "chi(0)=1", "states.chi_resource", pk, abs(v - 1), 1e-10)
                with _guard(rep, m, "Fock oracle equivalence", "states.chi_resource", pk):
                    s = fock.build_resource(kind, r, phi)
                    a1, a2 = 0.3 - 0.4j, -0.5 + 0.2j
                    dev = abs(states.chi_resource(kind, sq, a1, a2) - fock.resource_characteristic(s, a1, a2))
                    rep.add(m, "Fock oracle equivalence", "states.chi_resource", pk, dev, 1e-6)
                with _guard(rep, m, "Fock oracle equivalence", "states.wigner_resource", pk):
                    al = SAMPLE_POINTS
                    be = SAMPLE_POINTS[::-1] * 0.8
                    closed = states.wigner_resource(kind, sq, al, be)
                    num = fock.numeric_wigner(s, al, be)
                    rep.add(m, "Fock oracle equivalence", "states.wigner_resource", pk, np.max(np.abs(closed - num)), 1e-6)
                with _guard(rep, m, "Fock oracle equivalence", "states.quadrature_amplitude", pk):
                    xa = np.array([0.0, 0.5, -0.8, 1.2, -0.3])
                    xb = np.array([0.1, -0.6, 0.4, 0.9, -1.1])
                    dev = np.max(np.abs(states.quadrature_amplitude(kind, sq, xa, xb) - fock.numeric_quadrature(s, xa, xb)))
                    rep.add(m, "Fock oracle equivalence", "states.quadrature_amplitude", pk, dev, 1e-6)
                with _guard(rep, m, "Fock oracle equivalence", "states.photon_number_prob", pk):
                    n = np.arange(s.cutoff + 1)
                    dev = np.max(np.abs(states.photon_number_prob(kind, sq, n) - np.abs(np.diag(s.amplitudes)) ** 2))
                    rep.add(m, "Fock oracle equivalence", "states.photon_number_prob", pk, dev, 1e-6)
                with _guard(rep, m, "normalisation", "states.photon_number_prob", pk):
                    tot = np.sum(states.photon_number_prob(kind, sq, np.arange(2000)))
                    rep.add(m, "normalisation", "states.photon_number_prob", pk, abs(tot - 1), 1e-10)
                with _guard(rep, m, "Fock oracle equivalence", "states.squeezing_closed", pk):
                    num = fock.numeric_squeezing(s, phi / 2 + np.pi / 2)
                    rep.add(m, "Fock oracle equivalence", "states.squeezing_closed", pk, abs(num - states.squeezing_closed(kind, r)), 1e-6)
            with _guard(rep, m, "unit determinant", "states.BogoliubovMap", p):
                rep.add(m, "unit determinant", "states.BogoliubovMap", p, abs(sq.bogoliubov().determinant - 1), 1e-12)
    for rho in grid["rho"]:
        inp = CatLike(rho, 0.0)
        p = {"rho": rho}
        with _guard(rep, m, "Fourier consistency", "states.wigner_catlike", p):
            spec = numerics.QuadratureSpec(damping=0.5 * math.exp(-2 * rho))
            ft = numerics.wigner_from_characteristic(lambda a: states.chi_input(inp, a), SAMPLE_POINTS, spec)
            dev = np.max(np.abs(ft - states.wigner_catlike(rho, 0.0, SAMPLE_POINTS)))
            rep.add(m, "Fourier consistency", "states.wigner_catlike", p, dev, 1e-6)
        with _guard(rep, m, "Fock oracle equivalence", "states.wigner_catlike", p):
            s = fock.build_input(inp)
            dev = np.max(np.abs(fock.numeric_wigner(s, SAMPLE_POINTS) - states.wigner_catlike(rho, 0.0, SAMPLE_POINTS)))
            rep.add(m, "Fock oracle equivalence", "states.wigner_catlike", p, dev, 1e-6)
    with _guard(rep, m, "TPS to TMSV continuity", "states.chi_resource", {"r": 1e-5}):
        sq = SqueezeParams(1e-5, 0.3)
        dev = abs(states.chi_resource("tps", sq, 0.4, -0.2j) - states.chi_resource("tmsv", sq, 0.4, -0.2j))
        rep.add(m, "TPS to TMSV continuity", "states.chi_resource", {"r": 1e-5}, dev, 1e-4)
    with _guard(rep, m, "squeezing ordering", "states.squeezing_closed", {}):
        rs = np.linspace(0.02, 2.0, 20)
        gap = max(abs(states.squeezing_closed("tmsv", r)) - abs(states.squeezing_closed("tps", r)) for r in rs)
        rep.add(m, "squeezing ordering |S_TPS| >= |S_TMSV|", "states.squeezing_closed", {"r": "0.02..2"}, max(gap, 0.0), 0.0)
    # photon statistics
    ratio = lambda r: (
        states.photon_number_prob("tps", SqueezeParams(r), 1) / states.photon_number_prob("tmsv", SqueezeParams(r), 1)
    )
    with _guard(rep, m, "r=5 coincidence ratio in [5e-8, 8e-8]", "states.photon_number_prob", {"r": 5}):
        v = ratio(5.0)
        dev = 0.0 if 5e-8 <= v <= 8e-8 else abs(v - 6.5e-8)
        rep.add(m, "r=5 coincidence ratio in [5e-8, 8e-8]", "states.photon_number_prob", {"r": 5, "value": v}, dev, 0.0)
    with _guard(rep, m, "r=1 coincidence ratio", "states.photon_number_prob", {"r": 1}):
        v = ratio(1.0)
        formula = 4 / (math.cosh(1) ** 4 * (1 + math.tanh(1) ** 2))
        rep.add(m, "r=1 coincidence ratio matches formula", "states.photon_number_prob", {"r": 1}, abs(v - formula), 1e-12)
        rep.expected(
            m,
            "r=1 coincidence ratio versus quoted value",
            "states.photon_number_prob",
            {"r": 1, "computed": v, "quoted": 0.3},
            abs(v - 0.3),
            "the formula gives 0.447 while the text quotes about 0.3; the r=5 value agrees with the formula",
        )


def check_entanglement(rep, tier):
    m = "entanglement"
    for r in TIERS[tier]["r"]:
        for kind in ("tmsv", "tps"):
            p = {"r": r, "kind": kind}
            with _guard(rep, m, "Fock oracle equivalence", "entanglement.logneg_closed", p):
                cut = fock.auto_cutoff(kind, r, tol=1e-10, amplitude=True)
                num = fock.numeric_logneg(fock.build_resource(kind, r, 0.3, cutoff=cut))
                rep.add(m, "Fock oracle equivalence", "entanglement.logneg_closed", dict(p, cutoff=cut), abs(num - entanglement.logneg_closed(kind, r)), 1e-6)
            with _guard(rep, m, "Schmidt-sum formula", "entanglement.logneg_from_coeffs", p):
                v = entanglement.logneg_from_coeffs(entanglement.schmidt_coeffs(kind, r))
                rep.add(m, "Schmidt-sum formula", "entanglement.logneg_from_coeffs", p, abs(v - entanglement.logneg_closed(kind, r)), 1e-6)
    with _guard(rep, m, "ordering TPS > photon-added > TMSV", "entanglement.logneg_ratio", {"r": 1}):
        pa = entanglement.logneg_ratio(entanglement.PHOTON_ADDED, 1.0)
        tps = entanglement.logneg_ratio("tps", 1.0)
        gap = max(0.0, pa - tps, 1.0 - pa)
        rep.add(m, "ordering TPS > photon-added > TMSV", "entanglement.logneg_ratio", {"r": 1, "pa": pa, "tps": tps}, gap, 0.0)
    with _guard(rep, m, "monotone in r", "entanglement.logneg_closed", {}):
        rs = np.linspace(0.1, 5.0, 50)
        worst = 0.0
        for kind in ("tmsv", "tps"):
            e = np.array([entanglement.logneg_closed(kind, r) for r in rs])
            worst = max(worst, float(np.max(-np.diff(e))) if np.any(np.diff(e) <= 0) else 0.0)
        rep.add(m, "monotone in r", "entanglement.logneg_closed", {"r": "0.1..5"}, worst, 0.0)


def check_fock(rep, tier):
    m = "fock"
    with _guard(rep, m, "displacement unitarity", "fock.displacement_matrix", {}):
        worst = 0.0
        for a in (0.5, 1.2 - 0.7j, 2.0j):
            d = fock.displacement_matrix(a, 120)
            blk = (d @ d.conj().T)[:30, :30]
            worst = max(worst, np.max(np.abs(blk - np.eye(30))))
        rep.add(m, "displacement unitarity", "fock.displacement_matrix", {"cutoff": 119}, worst, 1e-8)
    with _guard(rep, m, "Laguerre element agrees with recurrence", "fock.displacement_matrix_element", {}):
        a = 0.7 - 0.4j
        d = fock.displacement_matrix(a, 12)
        dev = max(abs(fock.displacement_matrix_element(i, j, a) - d[i, j]) for i in range(12) for j in range(12))
        rep.add(m, "Laguerre element agrees with recurrence", "fock.displacement_matrix_element", {}, dev, 1e-12)
    with _guard(rep, m, "heralding limit", "fock.herald_tps", {"r": 0.8}):
        sq = SqueezeParams(0.8, 0.0)
        ideal = fock.build_resource("tps", 0.8, 0.0)
        fids = []
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            for t in (0.5, 0.7, 0.9, 0.99):
                h, _ = fock.herald_tps(sq, fock.HeraldingSetup(t))
                fids.append(abs(fock.overlap(ideal, h)) ** 2)
        mono = max(0.0, float(np.max(-np.diff(fids))))
        rep.add(m, "heralding limit T=0.99", "fock.herald_tps", {"r": 0.8, "fidelity": fids[-1]}, max(0.0, 0.999 - fids[-1]), 0.0)
        rep.add(m, "heralding fidelity monotone in T", "fock.herald_tps", {"T": [0.5, 0.7, 0.9, 0.99]}, mono, 0.0)
    with _guard(rep, m, "50:50 basis change identity", "fock.basis_change_5050", {"r": 0.8}):
        tps = fock.build_resource("tps", 0.8, 0.0, cutoff=60)
        img = fock.basis_change_5050(tps)
        ref = fock.pm_tps_construction(0.8, 0.0, img.cutoff)
        rep.add(m, "50:50 basis change identity", "fock.basis_change_5050", {"r": 0.8, "cutoff": 60}, 1 - abs(fock.overlap(img, ref)) ** 2, 1e-8)
        rep.add(m, "norm preserved", "fock.basis_change_5050", {"r": 0.8}, abs(img.norm - tps.norm), 1e-10)
    with _guard(rep, m, "optimal cat squeezing", "fock.optimize_cat_rho", {"alpha0": 1}):
        rho, fid = fock.optimize_cat_rho(1.0, np.pi)
        dev = max(abs(rho - 0.313) - 0.005, abs(fid - 0.997) - 0.001, 0.0)
        rep.add(m, "optimal cat squeezing", "fock.optimize_cat_rho", {"rho": rho, "fidelity": fid}, dev, 0.0)
    with _guard(rep, m, "state and density-matrix negativity agree", "fock.numeric_logneg", {}):
        s = fock.build_resource("tps", 0.25, 0.4, cutoff=14)
        dev = abs(fock.numeric_logneg(s) - fock.numeric_logneg(s.density_matrix()))
        rep.add(m, "state and density-matrix negativity agree", "fock.numeric_logneg", {"r": 0.25}, dev, 1e-10)
    with _guard(rep, m, "ideal cat characteristic function", "fock.numeric_characteristic", {}):
        cat = IdealCat(1.0, np.pi)
        s = fock.build_input(cat)
        a = 0.3
        a0 = 1.0
        # four-term coherent-overlap expansion
        def term(x, y):
            return np.exp(-0.5 * abs(a) ** 2 + a * np.conj(x) - np.conj(a) * y - 0.5 * abs(x) ** 2 - 0.5 * abs(y) ** 2 + np.conj(x) * y)

        c = np.exp(1j * cat.theta)
        exact = (term(a0, a0) + c * term(a0, -a0) + np.conj(c) * term(-a0, a0) + term(-a0, -a0)) / cat.norm**2
        rep.add(m, "ideal cat characteristic function", "fock.numeric_characteristic", {"alpha": a}, abs(fock.numeric_characteristic(s, a) - exact), 1e-8)


def check_teleport(rep, tier):
    m = "teleport"
    grid = TIERS[tier]
    for r in grid["r"]:
        inputs = [Coherent(0.7 - 0.3j)] + [CatLike(rho, 0.0) for rho in grid["rho"]] + [SqueezedVacuum(0.3, 0.0)]
        for inp in inputs:
            for res in ("tmsv", "tps"):
                job = teleport.TeleportJob.make(inp, res, r)
                p = {"r": r, "input": repr(inp), "resource": res}
                fn = "teleport.fidelity_closed"
                with _guard(rep, m, "route agreement", fn, p):
                    num = teleport.fidelity_numeric(job).value
                    if isinstance(inp, SqueezedVacuum) and res == "tps":
                        printed = teleport.squeezed_f2_printed(inp.rho, job.gamma)
                        gam = teleport.fidelity_squeezed_gamma(inp.rho, job.gamma)
                        rep.add(m, "gamma-operator route agreement", "teleport.gamma_apply", p, abs(gam - num), 1e-6)
                        if r == grid["r"][0]:
                            rep.expected(
                                m,
                                "tabulated squeezed-vacuum TPS fidelity versus integral",
                                "teleport.squeezed_f2_printed",
                                dict(p, printed=printed, integral=num),
                                abs(printed - num),
                                "the tabulated formula gives 1/4 at gamma=1, rho=0 (coherent value 1/2) and disagrees with the integral; the integral is reported",
                            )
                        continue
                    closed = teleport.fidelity_closed(job).value
                    rep.add(m, "route agreement", fn, p, abs(closed - num), 1e-6)
        with _guard(rep, m, "output Wigner route agreement", "teleport.wigner_output", {"r": r}):
            worst = 0.0
            for res in ("tmsv", "tps"):
                job = teleport.TeleportJob.make(CatLike(0.313, 0.0), res, r)
                diff = teleport.wigner_output(job, SAMPLE_POINTS, "closed") - teleport.wigner_output(job, SAMPLE_POINTS, "numeric")
                worst = max(worst, np.max(np.abs(diff)))
            rep.add(m, "output Wigner route agreement", "teleport.wigner_output", {"r": r}, worst, 1e-5)
        with _guard(rep, m, "output Wigner normalisation", "teleport.wigner_output", {"r": r}):
            worst = 0.0
            for res in ("tmsv", "tps"):
                job = teleport.TeleportJob.make(CatLike(0.313, 0.0), res, r)
                spec = numerics.QuadratureSpec(damping=1.0 / (0.5 * math.exp(2 * 0.313) + job.gamma))
                tot = numerics.integrate_phase_plane(lambda a: teleport.wigner_output(job, a, "closed"), spec) * np.pi
                worst = max(worst, abs(tot - 1))
            rep.add(m, "output Wigner normalisation", "teleport.wigner_output", {"r": r}, worst, 1e-6)
    with _guard(rep, m, "fidelity tends to 1", "teleport.fidelity_numeric", {"r": 5}):
        worst = 0.0
        for inp in (Coherent(1.0), SqueezedVacuum(0.3, 0.0), CatLike(0.313, 0.0)):
            for res in ("tmsv", "tps"):
                worst = max(worst, 1 - teleport.fidelity_numeric(teleport.TeleportJob.make(inp, res, 5.0)).value)
        rep.add(m, "fidelity tends to 1", "teleport.fidelity_numeric", {"r": 5}, worst, 1e-3)
    with _guard(rep, m, "coherent fidelity independent of amplitude", "teleport.fidelity_numeric", {}):
        worst = 0.0
        for res in ("tmsv", "tps"):
            vals = [teleport.fidelity_numeric(teleport.TeleportJob.make(Coherent(a0), res, 0.7)).value for a0 in (0, 1, 2 + 1j)]
            worst = max(worst, max(vals) - min(vals))
        rep.add(m, "coherent fidelity independent of amplitude", "teleport.fidelity_numeric", {"alpha0": [0, 1, "2+i"]}, worst, 1e-9)
    with _guard(rep, m, "squeezed F1 at rho=0 equals coherent F1", "teleport.fidelity_closed", {}):
        dev = max(abs(teleport.squeezed_f1(0.0, g) - teleport.coherent_f1(g)) for g in (0.1, 0.5, 0.9))
        rep.add(m, "squeezed F1 at rho=0 equals coherent F1", "teleport.fidelity_closed", {}, dev, 1e-12)
    with _guard(rep, m, "F2 >= F1 for the cat", "teleport.fidelity_closed", {"rho": 0.313}):
        gap = 0.0
        for r in np.linspace(0.1, 2.0, 20):
            f1 = teleport.cat_f1(0.313, math.exp(-2 * r))
            f2 = teleport.cat_f2(0.313, math.exp(-2 * r))
            gap = max(gap, f1 - f2)
        rep.add(m, "F2 >= F1 for the cat", "teleport.fidelity_closed", {"r": "0.1..2"}, gap, 0.0)
    with _guard(rep, m, "thresholds", "teleport.zero_crossing", {}):
        cat = CatLike(0.313, 0.0)
        for res, target in (("tmsv", 0.35), ("tps", 0.20)):
            rstar, _ = teleport.threshold(cat, res)
            dev = float("inf") if rstar is None else abs(rstar - target)
            rep.add(m, f"threshold {res}", "teleport.zero_crossing", {"r_star": rstar, "quoted": target}, dev, 0.02)
    with _guard(rep, m, "negativity depth", "teleport.grid_minimum", {"r": 0.5}):
        for res, target, tol in (("tmsv", -0.05, 0.02), ("tps", -0.20, 0.03)):
            mn = teleport.grid_minimum(teleport.TeleportJob.make(CatLike(0.313, 0.0), res, 0.5))
            rep.add(m, f"negativity depth {res}", "teleport.grid_minimum", {"min": mn.value, "quoted": target}, abs(mn.value - target), tol)
    with _guard(rep, m, "benchmark margin", "teleport.benchmark_margin", {}):
        a = np.array([0.3, 1.0, 2.0 + 1j])
        dev = 0.0
        for r in (0.2, 0.5, 1.0):
            sq = SqueezeParams(r, np.pi)
            g = sq.gamma
            dev = max(dev, np.max(np.abs(teleport.benchmark_margin("tmsv", sq, a) - (np.exp(-2 * g * np.abs(a) ** 2) - np.exp(-0.5 * np.abs(a) ** 2)))))
        rep.add(m, "benchmark margin", "teleport.benchmark_margin", {}, dev, 1e-12)


GROUPS = (check_numerics, check_states, check_entanglement, check_fock, check_teleport)


def run(tier="fast"):
    if tier not in TIERS:
        raise ValueError(f"unknown tier {tier!r}")
    rep = Report(tier)
    t0 = time.perf_counter()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", fock.TruncationWarning)
        for group in GROUPS:
            group(rep, tier)
    rep.seconds = time.perf_counter() - t0
    return rep
