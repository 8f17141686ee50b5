"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 domain
error, 4 internal consistency failure (routes that should agree do not).
"""

import argparse
import math
import sys

import numpy as np

from . import __version__, checks, repro, states, teleport
from .errors import DomainError, InconsistencyError, NumericError, ValidationError
from .numerics import Grid2D, QuadratureSpec
from .output import OUTPUT_DIR_ENV, Sink
from .states import CatLike, Coherent, SqueezedVacuum, SqueezeParams

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_CONSISTENCY = 4


class RouteDisagreement(Exception):
    def __init__(self, message, details):
        super().__init__(message)
        self.details = details


def _complex(text):
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def _add_output(p):
    p.add_argument("--out", help=f"output file ('-' for stdout; default: ${OUTPUT_DIR_ENV}/<name>.csv or stdout)")


def _add_resource(p, phi_default):
    p.add_argument("--kind", "--resource", dest="kind", choices=["tmsv", "tps"], default="tmsv")
    p.add_argument("--r", type=float, required=True, help="two-mode squeezing amplitude")
    p.add_argument("--phi", type=float, default=phi_default, help="two-mode squeezing phase (rad)")


def _add_input(p):
    p.add_argument("--input", choices=["coherent", "squeezed", "cat"], default="cat")
    p.add_argument("--alpha0", type=_complex, default=1.0, help="coherent amplitude")
    p.add_argument("--rho", type=float, default=repro.CAT_RHO, help="single-mode squeezing of the input")
    p.add_argument("--phase", type=float, default=0.0, help="input squeezing phase (rad)")


def _add_quad(p):
    p.add_argument("--order", type=int, default=64, help="Gauss-Hermite nodes per axis")


def build_parser():
    ap = argparse.ArgumentParser(prog="cvteleport", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    st = sub.add_parser("state", help="closed-form state functions")
    ss = st.add_subparsers(dest="sub", required=True)
    p = ss.add_parser("wigner", help="two-mode Wigner function on the (Re alpha, Re beta) plane")
    _add_resource(p, 0.0)
    p.add_argument("--grid", type=int, default=101)
    p.add_argument("--extent", type=float, default=3.0)
    _add_output(p)
    p = ss.add_parser("quadrature", help="quadrature amplitude in rotated coordinates")
    _add_resource(p, math.pi)
    p.add_argument("--grid", type=int, default=81)
    p.add_argument("--extent", type=float, default=3.0)
    _add_output(p)
    p = ss.add_parser("pnd", help="photon-number distribution")
    _add_resource(p, 0.0)
    p.add_argument("--nmax", type=int, default=20)
    _add_output(p)
    p = ss.add_parser("squeezing", help="two-mode squeezing of both resources versus r")
    p.add_argument("--rmax", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=50)
    _add_output(p)
    p = ss.add_parser("chi", help="resource characteristic function at one point")
    _add_resource(p, math.pi)
    p.add_argument("--alpha1", type=_complex, required=True)
    p.add_argument("--alpha2", type=_complex, required=True)
    _add_output(p)

    tp = sub.add_parser("teleport", help="teleportation fidelities and output fields")
    ts = tp.add_subparsers(dest="sub", required=True)
    p = ts.add_parser("fidelity", help="fidelity by every available route")
    _add_input(p)
    _add_resource(p, math.pi)
    _add_quad(p)
    p.add_argument("--tol", type=float, default=teleport.AGREEMENT_TOL)
    _add_output(p)
    p = ts.add_parser("wigner", help="output Wigner field")
    _add_input(p)
    _add_resource(p, math.pi)
    _add_quad(p)
    p.add_argument("--grid", type=int, default=121)
    p.add_argument("--extent", type=float, default=3.0)
    p.add_argument("--route", choices=["auto", "closed", "numeric"], default="auto")
    _add_output(p)
    p = ts.add_parser("threshold", help="squeezing at which W_out(0) turns negative")
    _add_input(p)
    p.add_argument("--kind", "--resource", dest="kind", choices=["tmsv", "tps"], default="tmsv")
    p.add_argument("--phi", type=float, default=math.pi)
    p.add_argument("--rmin", type=float, default=0.02)
    p.add_argument("--rmax", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=100)
    _add_output(p)
    p = ts.add_parser("scan", help="fidelity or W_out(0) versus r")
    _add_input(p)
    p.add_argument("--kind", "--resource", dest="kind", choices=["tmsv", "tps"], default="tmsv")
    p.add_argument("--phi", type=float, default=math.pi)
    p.add_argument("--quantity", choices=["fidelity", "w0"], default="fidelity")
    p.add_argument("--rmin", type=float, default=0.05)
    p.add_argument("--rmax", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=40)
    _add_quad(p)
    _add_output(p)

    p = sub.add_parser("repro", help="data behind a figure or the fidelity table")
    p.add_argument("figure", choices=sorted(repro.FIGURES, key=lambda s: (len(s), s)))
    p.add_argument("--outdir", help=f"output directory (default ${OUTPUT_DIR_ENV} or current directory)")

    p = sub.add_parser("verify", help="run the oracle-equivalence checks")
    p.add_argument("tier", choices=["fast", "full"], nargs="?", default="fast")
    p.add_argument("--report", help="JSON report path ('-' for stdout, the default)")
    return ap


def _input_from(args):
    if args.input == "coherent":
        return Coherent(args.alpha0)
    if args.input == "squeezed":
        return SqueezedVacuum(args.rho, args.phase)
    return CatLike(args.rho, args.phase)


def _echo(argv):
    return "cvteleport " + " ".join(argv)


def _params(args):
    return {k: (v if not isinstance(v, complex) else [v.real, v.imag]) for k, v in sorted(vars(args).items()) if k not in ("out",)}


# ---------------------------------------------------------------------------


def cmd_state(args, sink, argv):
    man = {"command": _echo(argv), "parameters": _params(args)}
    if args.sub == "wigner":
        sq = SqueezeParams(args.r, args.phi)
        x = np.linspace(-args.extent, args.extent, args.grid)
        a, b = np.meshgrid(x, x)
        w = states.wigner_resource(args.kind, sq, a.astype(complex), b.astype(complex))
        rows = [(a.flat[i], b.flat[i], w.flat[i]) for i in range(w.size)]
        man["minimum"] = float(np.min(w))
        sink.write_table(f"state_wigner_{args.kind}.csv", ["re_alpha", "re_beta", "W"], rows, man)
    elif args.sub == "quadrature":
        sq = SqueezeParams(args.r, args.phi)
        x = np.linspace(-args.extent, args.extent, args.grid)
        x1, x2 = np.meshgrid(x, x)
        psi = states.quadrature_amplitude_rotated(args.kind, sq, x1, x2)
        rows = [(x1.flat[i], x2.flat[i], psi.flat[i].real, psi.flat[i].imag, abs(psi.flat[i]) ** 2) for i in range(psi.size)]
        sink.write_table(f"state_quadrature_{args.kind}.csv", ["x1", "x2", "psi_re", "psi_im", "intensity"], rows, man)
    elif args.sub == "pnd":
        if args.nmax < 0:
            raise DomainError("--nmax must be nonnegative")
        n = np.arange(args.nmax + 1)
        p = states.photon_number_prob(args.kind, SqueezeParams(args.r, args.phi), n)
        sink.write_table(f"state_pnd_{args.kind}.csv", ["n", "P"], list(zip(n, p)), man)
    elif args.sub == "squeezing":
        if not args.rmax > 0 or args.steps < 1:
            raise DomainError("--rmax must be positive and --steps at least 1")
        (t,) = repro.fig5(args.rmax, args.steps)
        sink.write_table("state_squeezing.csv", t.columns, t.rows, man)
    elif args.sub == "chi":
        v = complex(states.chi_resource(args.kind, SqueezeParams(args.r, args.phi), args.alpha1, args.alpha2))
        a1, a2 = args.alpha1, args.alpha2
        row = (a1.real, a1.imag, a2.real, a2.imag, v.real, v.imag)
        sink.write_table(f"state_chi_{args.kind}.csv", ["a1_re", "a1_im", "a2_re", "a2_im", "chi_re", "chi_im"], [row], man)
    return EXIT_OK


def _job(args, r=None):
    quad = QuadratureSpec(order=getattr(args, "order", 64))
    grid = Grid2D(getattr(args, "extent", 3.0), getattr(args, "grid", 121))
    return teleport.TeleportJob.make(_input_from(args), args.kind, args.r if r is None else r, args.phi, quad=quad, grid=grid)


def cmd_teleport(args, sink, argv):
    man = {"command": _echo(argv), "parameters": _params(args)}
    if args.sub == "fidelity":
        job = _job(args)
        num = teleport.fidelity_numeric(job)
        closed = gamma = None
        expected = False
        inp = job.input
        tps = job.resource is states.ResourceKind.TPS
        if job.optimal_phase:
            if isinstance(inp, SqueezedVacuum) and tps:
                closed = teleport.squeezed_f2_printed(inp.rho, job.gamma)
                gamma = teleport.fidelity_squeezed_gamma(inp.rho, job.gamma)
                expected = True
            else:
                closed = teleport.fidelity_closed(job, check=False).value
                if tps and isinstance(inp, (Coherent, CatLike)):
                    f1 = teleport.coherent_f1 if isinstance(inp, Coherent) else (lambda g: teleport.cat_f1(inp.rho, g))
                    gamma = float(teleport.gamma_apply(f1, job.gamma))
        routes = [v for v in (closed, gamma) if v is not None]
        dev = max((abs(v - num.value) for v in routes), default=0.0)
        if expected:
            dev_checked = abs(gamma - num.value)
            status = "expected-divergence" if abs(closed - num.value) > args.tol else "agree"
        else:
            dev_checked = dev
            status = "agree" if dev <= args.tol else "disagree"
        cols = ["input", "resource", "r", "phi", "integral", "closed_form", "gamma_operator", "max_abs_difference", "status"]
        row = (args.input, args.kind, args.r, args.phi, num.value, closed, gamma, dev, status)
        man["integral_error_estimate"] = num.error
        sink.write_table(f"teleport_fidelity_{args.input}_{args.kind}.csv", cols, [row], man)
        if dev_checked > args.tol:
            raise RouteDisagreement(
                "fidelity routes disagree",
                {"integral": num.value, "closed_form": closed, "gamma_operator": gamma, "tolerance": args.tol},
            )
    elif args.sub == "wigner":
        job = _job(args)
        w = teleport.wigner_output_grid(job, args.route)
        mn = teleport.grid_minimum(job, args.route, field_values=w)
        man["minimum"] = mn.value
        man["minimum_location"] = [mn.location.real, mn.location.imag]
        x = job.grid.axis
        rows = [(x[j], x[i], w[i, j]) for i in range(x.size) for j in range(x.size)]
        sink.write_table(f"teleport_wigner_{args.kind}.csv", ["re_alpha", "im_alpha", "W"], rows, man)
        sys.stderr.write(f"minimum W = {mn.value:.6f} at alpha = {mn.location.real:.4f}{mn.location.imag:+.4f}i\n")
    elif args.sub == "threshold":
        inp = _input_from(args)
        if not isinstance(inp, CatLike):
            raise DomainError("thresholds are defined for the cat-like input")
        rstar, _ = teleport.threshold(inp, args.kind, args.rmin, args.rmax, args.steps, args.phi)
        sink.write_table(f"teleport_threshold_{args.kind}.csv", ["resource", "rho", "r_star"], [(args.kind, args.rho, rstar)], man)
        sys.stderr.write(f"r* = {rstar if rstar is not None else 'none'}\n")
    elif args.sub == "scan":
        if args.steps < 2 or not args.rmax > args.rmin >= 0:
            raise DomainError("scan needs 0 <= rmin < rmax and at least two steps")
        rs = np.linspace(args.rmin, args.rmax, args.steps)
        rows = []
        for r in rs:
            job = _job(args, r)
            if args.quantity == "fidelity":
                rows.append((r, teleport.fidelity_numeric(job).value))
            else:
                rows.append((r, teleport.w0_at(job, r)))
        sink.write_table(f"teleport_scan_{args.quantity}_{args.kind}.csv", ["r", args.quantity], rows, man)
    return EXIT_OK


def cmd_repro(args, sink, argv):
    import os

    outdir = args.outdir or os.environ.get(OUTPUT_DIR_ENV) or "."
    for t in repro.build(args.figure):
        man = {"command": _echo(argv), "figure": args.figure, "parameters": t.params}
        Sink(os.path.join(outdir, t.name + ".csv")).write_table(t.name + ".csv", t.columns, t.rows, man)
        sys.stderr.write(f"wrote {os.path.join(outdir, t.name + '.csv')} ({len(t.rows)} rows)\n")
    return EXIT_OK


def cmd_verify(args, sink, argv):
    rep = checks.run(args.tier)
    out = Sink(args.report or "-", stdout=sink.stdout)
    out.write_json(f"verify_{args.tier}.json", rep.as_dict())
    for f in rep.failures:
        sys.stderr.write(f"FAIL {f.function} [{f.module}] {f.invariant} params={f.params} deviation={f.deviation:.3e} {f.message}\n")
    return EXIT_OK if rep.ok else EXIT_VERIFY


COMMANDS = {"state": cmd_state, "teleport": cmd_teleport, "repro": cmd_repro, "verify": cmd_verify}


def main(argv=None, stdout=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    sink = Sink(getattr(args, "out", None), stdout=stdout)
    try:
        return COMMANDS[args.command](args, sink, argv)
    except (DomainError, ValidationError) as exc:
        sys.stderr.write(f"domain error: {exc}\n")
        return EXIT_DOMAIN
    except RouteDisagreement as exc:
        sys.stderr.write(f"consistency failure: {exc}\n")
        for k, v in exc.details.items():
            sys.stderr.write(f"  {k}: {v}\n")
        return EXIT_CONSISTENCY
    except (InconsistencyError, NumericError) as exc:
        sys.stderr.write(f"consistency failure: {exc}\n")
        return EXIT_CONSISTENCY


if __name__ == "__main__":
    sys.exit(main())
