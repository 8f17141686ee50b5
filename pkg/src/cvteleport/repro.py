"""Data series behind each figure and the fidelity table.

Every builder returns a list of :class:`Table` objects; the CLI writes each
one as CSV with a manifest recording the caption parameters.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import entanglement, fock, states, teleport
from .errors import NumericError
from .states import CatLike, Coherent, SqueezedVacuum, SqueezeParams

CAT_RHO = 0.313


@dataclass
class Table:
    name: str
    columns: list
    rows: list
    params: dict = field(default_factory=dict)


def _grid(extent, n):
    return np.linspace(-extent, extent, n)


def fig2(n=81):
    """TPS Wigner prefactor at r=1 over (|alpha~|, |beta~|)."""
    t = math.tanh(1.0)
    x = np.linspace(0.0, 2.0, n)
    rows = [(xi, yi, float(states.tps_wigner_prefactor(t, xi, yi))) for yi in x for xi in x]
    return [Table("fig2", ["x", "y", "prefactor"], rows, {"r": 1.0, "slice": "alpha~ beta~ cos(phi) = -x y"})]


def fig3(nmax=15):
    sq = SqueezeParams(1.0, 0.0)
    n = np.arange(nmax + 1)
    pt = states.photon_number_prob("tmsv", sq, n)
    pp = states.photon_number_prob("tps", sq, n)
    return [Table("fig3", ["n", "P_tmsv", "P_tps"], list(zip(n, pt, pp)), {"r": 1.0})]


def fig4(n=81):
    tables = []
    for r in (1.0, 5.0):
        sq = SqueezeParams(r, math.pi)
        e1 = 4.0 * math.exp(-r)
        e2 = min(4.0 * math.exp(r), 12.0)
        x1 = _grid(e1, n)
        x2 = _grid(e2, n)
        for kind in ("tmsv", "tps"):
            rows = []
            for b in x2:
                psi = states.quadrature_amplitude_rotated(kind, sq, x1, np.full_like(x1, b))
                rows.extend((a, b, float(abs(p) ** 2)) for a, p in zip(x1, psi))
            tables.append(
                Table(f"fig4_{kind}_r{r:g}", ["x1", "x2", "intensity"], rows, {"r": r, "phi": "pi", "kind": kind, "x1_extent": e1, "x2_extent": e2})
            )
    return tables


def fig5(rmax=2.0, steps=50):
    rs = np.linspace(rmax / steps, rmax, steps)
    rows = [(r, states.squeezing_closed("tmsv", r), states.squeezing_closed("tps", r)) for r in rs]
    return [Table("fig5", ["r", "S_tmsv", "S_tps"], rows, {"rmax": rmax, "steps": steps})]


def fig6(rmax=2.0, steps=20):
    rs = np.linspace(rmax / steps, rmax, steps)
    rows = []
    for r in rs:
        e_t = entanglement.logneg_closed("tmsv", r)
        e_p = entanglement.logneg_closed("tps", r)
        cut = fock.auto_cutoff("photon_added", r, tol=1e-10, amplitude=True)
        e_a = fock.numeric_logneg(fock.build_resource("photon_added", r, 0.0, cutoff=cut))
        rows.append((r, e_t, e_p, e_a, 2.0 ** (e_p - e_t), 2.0 ** (e_a - e_t)))
    cols = ["r", "eps_tmsv", "eps_tps", "eps_photon_added_numeric", "ratio_tps", "ratio_photon_added_numeric"]
    return [Table("fig6", cols, rows, {"photon_added": "Fock partial-transpose oracle"})]


def fig7(rmax=3.0, steps=60):
    rs = np.linspace(rmax / steps, rmax, steps)
    rows = [(r, teleport.coherent_f1(math.exp(-2 * r)), teleport.coherent_f2(math.exp(-2 * r))) for r in rs]
    return [Table("fig7", ["r", "F_tmsv", "F_tps"], rows, {"input": "coherent"})]


def fig8(rmax=2.0, rho_max=1.0, steps=21):
    rows = []
    for rho in np.linspace(0.0, rho_max, steps):
        for r in np.linspace(rmax / steps, rmax, steps):
            g = math.exp(-2 * r)
            f1 = teleport.squeezed_f1(rho, g)
            f2 = teleport.fidelity_numeric(teleport.TeleportJob.make(SqueezedVacuum(rho, 0.0), "tps", r)).value
            rows.append((rho, r, f1, f2, teleport.squeezed_f2_printed(rho, g)))
    cols = ["rho", "r", "F_tmsv", "F_tps_integral", "F_tps_tabulated"]
    return [Table("fig8", cols, rows, {"input": "squeezed vacuum", "note": "tabulated TPS column disagrees with the integral"})]


def fig9(rmax=3.0, steps=60):
    rows = []
    for r in np.linspace(rmax / steps, rmax, steps):
        g = math.exp(-2 * r)
        f1 = teleport.cat_f1(CAT_RHO, g)
        f2 = teleport.cat_f2(CAT_RHO, g)
        rows.append((r, f1, f2, f2 / f1))
    return [Table("fig9", ["r", "F1", "F2", "ratio"], rows, {"rho": CAT_RHO, "alpha0": 1, "theta": "pi"})]


def _field_rows(x, w):
    return [(x[j], x[i], w[i, j]) for i in range(x.size) for j in range(x.size)]


def fig10(r=0.5, resolution=121, extent=3.0):
    tables = []
    for res in ("tmsv", "tps"):
        job = teleport.TeleportJob.make(CatLike(CAT_RHO, 0.0), res, r, grid=teleport.Grid2D(extent, resolution))
        w = teleport.wigner_output_grid(job)
        mn = teleport.grid_minimum(job, field_values=w)
        tables.append(
            Table(f"fig10_{res}", ["re_alpha", "im_alpha", "W"], _field_rows(job.grid.axis, w), {"r": r, "rho": CAT_RHO, "resource": res, "minimum": mn.value})
        )
    return tables


def fig11(a_steps=15, r_steps=20, rmax=2.0):
    rows = []
    for a0 in np.linspace(0.6, 2.0, a_steps):
        try:
            rho, fin = fock.optimize_cat_rho(a0, math.pi)
        except NumericError:
            continue
        for r in np.linspace(rmax / r_steps, rmax, r_steps):
            g = math.exp(-2 * r)
            rows.append((a0, rho, fin, r, teleport.cat_f1(rho, g), teleport.cat_f2(rho, g)))
    cols = ["alpha0", "rho_opt", "input_fidelity", "r", "F1", "F2"]
    return [Table("fig11", cols, rows, {"theta": "pi"})]


def fig12(resolution=121, extent=3.0):
    x = _grid(extent, resolution)
    pts = x[None, :] + 1j * x[:, None]
    w = states.wigner_catlike(CAT_RHO, 0.0, pts)
    return [Table("fig12", ["re_alpha", "im_alpha", "W"], _field_rows(x, w), {"rho": CAT_RHO})]


def fig13(rmax=1.0, steps=50):
    cat = CatLike(CAT_RHO, 0.0)
    rs = np.linspace(rmax / steps, rmax, steps)
    s1 = teleport.w0_scan(cat, "tmsv", rs)
    s2 = teleport.w0_scan(cat, "tps", rs)
    c1 = teleport.zero_crossing(s1, cat, "tmsv")
    c2 = teleport.zero_crossing(s2, cat, "tps")
    rows = list(zip(rs, s1.values, s2.values))
    return [Table("fig13", ["r", "W0_tmsv", "W0_tps"], rows, {"rho": CAT_RHO, "crossing_tmsv": c1, "crossing_tps": c2})]


def table1():
    rows = []
    for r in (0.25, 0.5, 1.0, 1.5):
        for inp, label in ((Coherent(1.0), "coherent"), (SqueezedVacuum(0.0, 0.0), "squeezed rho=0"), (SqueezedVacuum(0.5, 0.0), "squeezed rho=0.5")):
            for res in ("tmsv", "tps"):
                job = teleport.TeleportJob.make(inp, res, r)
                num = teleport.fidelity_numeric(job).value
                if isinstance(inp, SqueezedVacuum) and res == "tps":
                    closed = teleport.squeezed_f2_printed(inp.rho, job.gamma)
                    gam = teleport.fidelity_squeezed_gamma(inp.rho, job.gamma)
                else:
                    closed = teleport.fidelity_closed(job).value
                    gam = None
                rows.append((label, res, r, closed, num, gam, abs(closed - num)))
    cols = ["input", "resource", "r", "closed_form", "integral", "gamma_operator", "abs_difference"]
    return [Table("table1", cols, rows, {"note": "squeezed-vacuum TPS closed form is the tabulated formula"})]


FIGURES = {
    "fig2": fig2,
    "fig3": fig3,
    "fig4": fig4,
    "fig5": fig5,
    "fig6": fig6,
    "fig7": fig7,
    "fig8": fig8,
    "fig9": fig9,
    "fig10": fig10,
    "fig11": fig11,
    "fig12": fig12,
    "fig13": fig13,
    "table1": table1,
}


def build(figure):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", fock.TruncationWarning)
        return FIGURES[figure]()
