"""Ensemble-level VBK teleportation through characteristic functions.

With unity gain the output characteristic function is

    chi_out(alpha) = chi_in(alpha) * chi_EPR(alpha^*, alpha),

and the fidelity with a pure input is

    F = (1/pi) * integral chi_in(alpha) chi_in(-alpha) chi_EPR(-alpha^*, -alpha) d^2 alpha.

At the optimal resource phase ``phi = pi`` the TMSV factor is
``exp(-gamma |alpha|^2)`` with ``gamma = exp(-2r)``, and the TPS factor is
obtained from it by the differential operator :func:`gamma_apply`, so every
TPS closed form is the Gamma-image of its TMSV counterpart.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from . import numerics, states
from .errors import DomainError, NumericError, ValidationError
from .numerics import DiffSpec, Grid2D, QuadratureSpec
from .states import CatLike, Coherent, IdealCat, ResourceKind, SqueezedVacuum, SqueezeParams

ROUTE_CLOSED = "closed-form"
ROUTE_INTEGRAL = "integral"
ROUTE_GAMMA = "gamma-operator"

AGREEMENT_TOL = 1e-6


@dataclass(frozen=True)
class TeleportJob:
    """One teleportation request.

    Attributes
    ----------
    input : Coherent | SqueezedVacuum | CatLike | IdealCat
    resource : ResourceKind
    sq : SqueezeParams
        Resource squeezing; the phase defaults to the optimal ``pi``.
    quad : QuadratureSpec
        Controls for the phase-plane integrals. The damping field is
        replaced by the job's own envelope estimate.
    grid : Grid2D
        Window for output Wigner fields.
    """

    input: object
    resource: ResourceKind
    sq: SqueezeParams
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)
    grid: Grid2D = field(default_factory=lambda: Grid2D(3.0, 121))

    def __post_init__(self):
        object.__setattr__(self, "resource", ResourceKind.parse(self.resource))
        if not isinstance(self.input, (Coherent, SqueezedVacuum, CatLike, IdealCat)):
            raise ValidationError(f"unsupported input state {self.input!r}")
        if self.resource is ResourceKind.TPS and not self.sq.r > 0:
            raise DomainError("the photon-subtracted resource needs r > 0")

    @classmethod
    def make(cls, input, resource, r, phi=np.pi, **kw):
        return cls(input, ResourceKind.parse(resource), SqueezeParams(r, phi), **kw)

    @property
    def gamma(self):
        return self.sq.gamma

    @property
    def optimal_phase(self):
        return math.isclose(math.cos(self.sq.phi), -1.0, abs_tol=1e-12)

    def with_r(self, r):
        return TeleportJob(self.input, self.resource, SqueezeParams(r, self.sq.phi), self.quad, self.grid)

    def with_resource(self, resource):
        return TeleportJob(self.input, ResourceKind.parse(resource), self.sq, self.quad, self.grid)


@dataclass(frozen=True)
class FidelityResult:
    """A fidelity value with its provenance.

    ``reference`` holds the value from an independent route when one was
    computed; ``consistent`` records whether the two agree.
    """

    value: float
    route: str
    error: float = 0.0
    consistent: bool = True
    reference: float | None = None
    note: str = ""

    def __post_init__(self):
        if not -1e-9 <= self.value <= 1.0 + 1e-9:
            raise NumericError(f"fidelity {self.value!r} lies outside [0, 1]")


# ---------------------------------------------------------------------------
# characteristic functions


def _input_damping(inp):
    """Decay constant of ``|chi_in(alpha) chi_in(-alpha)|`` along its weakest axis."""
    if isinstance(inp, Coherent):
        return 1.0
    if isinstance(inp, (SqueezedVacuum, CatLike)):
        return math.exp(-2.0 * inp.rho)
    raise DomainError(f"no closed-form characteristic function for {type(inp).__name__}")


def resource_damping(sq):
    """``kappa`` with ``|chi_EPR(-alpha^*, -alpha)| ~ exp(-kappa |alpha|^2)``."""
    return math.cosh(2.0 * sq.r) + math.sinh(2.0 * sq.r) * math.cos(sq.phi)


def chi_output(job, alpha):
    """``chi_in(alpha) * chi_EPR(alpha^*, alpha)``; vectorised over ``alpha``."""
    alpha = np.asarray(alpha, dtype=complex)
    return states.chi_input(job.input, alpha) * states.chi_resource(job.resource, job.sq, np.conj(alpha), alpha)


def benchmark_margin(resource, sq, alpha):
    """``|chi_EPR(alpha^*, alpha)|^2 - exp(-|alpha|^2 / 2)``.

    Positive values mean the resource beats the classical benchmark at that
    phase-space point.
    """
    alpha = np.asarray(alpha, dtype=complex)
    chi = states.chi_resource(resource, sq, np.conj(alpha), alpha)
    out = np.abs(chi) ** 2 - np.exp(-0.5 * np.abs(alpha) ** 2)
    return float(out) if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# fidelity


def _fidelity_integrand(job):
    def f(alpha):
        return (
            states.chi_input(job.input, alpha)
            * states.chi_input(job.input, -alpha)
            * states.chi_resource(job.resource, job.sq, -np.conj(alpha), -alpha)
        )

    return f


def _input_quadratic(inp):
    """2x2 matrix ``M`` with ``|chi_in(alpha) chi_in(-alpha)| ~ exp(-v^T M v)``,
    ``v = (Re alpha, Im alpha)``."""
    if isinstance(inp, Coherent):
        return np.eye(2)
    if isinstance(inp, SqueezedVacuum):
        lin = lambda a: np.conj(a) * math.cosh(inp.rho) + np.exp(-1j * inp.phase) * a * math.sinh(inp.rho)
    elif isinstance(inp, CatLike):
        lin = lambda a: _cat_tilde(inp.rho, inp.phase, a)
    else:
        raise DomainError(f"no closed-form characteristic function for {type(inp).__name__}")
    q1, qi = complex(lin(1.0)), complex(lin(1j))
    off = (q1 * np.conj(qi)).real
    return np.array([[abs(q1) ** 2, off], [off, abs(qi) ** 2]])


def principal_frame(job):
    """Area-preserving map ``z -> alpha`` that makes the fidelity integrand's
    Gaussian envelope isotropic, and the resulting decay constant."""
    m = _input_quadratic(job.input) + resource_damping(job.sq) * np.eye(2)
    c, vecs = np.linalg.eigh(m)
    damping = math.sqrt(c[0] * c[1])
    lmap = vecs @ np.diag(np.sqrt(damping / c))
    return lmap, damping


def fidelity_numeric(job):
    """Fidelity from the phase-plane integral of characteristic functions.

    The integral is evaluated in the principal frame of the integrand's
    Gaussian envelope, so strongly squeezed inputs need no extra nodes.
    """
    lmap, damping = principal_frame(job)
    f = _fidelity_integrand(job)

    def g(z):
        x, y = z.real, z.imag
        return f((lmap[0, 0] * x + lmap[0, 1] * y) + 1j * (lmap[1, 0] * x + lmap[1, 1] * y))

    spec = job.quad.with_damping(damping)
    value, err, _ = numerics.integrate_with_error(g, spec)
    if abs(value.imag) > numerics.IMAG_RESIDUE_TOL:
        raise NumericError(f"fidelity integral has imaginary residue {abs(value.imag):.3e}")
    return FidelityResult(float(value.real), ROUTE_INTEGRAL, float(err) if np.isfinite(err) else 0.0)


def gamma_apply(f, gamma, spec=None):
    """Apply the operator taking TMSV closed forms to TPS closed forms.

    ``f(gamma) + c(gamma) * [((1-g)/(1+g))^2 f'' - 4 (1-g)/(1+g)^2 f']`` with
    ``c = g^2 (1+g)^2 / (2 (1+g^2))``.

    Parameters
    ----------
    f : callable
        Smooth function of ``gamma``; may return an ndarray.
    gamma : float
        Strictly inside (0, 1).
    spec : DiffSpec, optional
        Defaults to a step that keeps the stencil inside (0, 1).
    """
    if not 0.0 < gamma < 1.0:
        raise DomainError(f"gamma must lie strictly inside (0, 1), got {gamma}")
    if spec is None:
        step = min(1e-2, 0.25 * min(gamma, 1.0 - gamma))
        if not step > 1e-6:
            raise DomainError(f"gamma={gamma} is too close to the boundary for differentiation")
        spec = DiffSpec(step=step)
    d1 = numerics.derivative(f, gamma, 1, spec, domain=(0.0, 1.0))
    d2 = numerics.derivative(f, gamma, 2, spec, domain=(0.0, 1.0))
    g = gamma
    c = g * g * (1 + g) ** 2 / (2 * (1 + g * g))
    return np.asarray(f(g)) + c * (((1 - g) / (1 + g)) ** 2 * d2 - 4 * (1 - g) / (1 + g) ** 2 * d1)


def coherent_f1(gamma):
    return 1.0 / (1.0 + gamma)


def coherent_f2(gamma):
    g = gamma
    return (1 + 2 * g + 5 * g * g) / ((1 + g) ** 3 * (1 + g * g))


def squeezed_f1(rho, gamma):
    return 1.0 / math.sqrt(1.0 + 2.0 * gamma * math.cosh(2.0 * rho) + gamma * gamma)


def squeezed_f2_printed(rho, gamma):
    """The tabulated squeezed-vacuum TPS fidelity, exactly as printed.

    It does not reduce to the coherent value at ``rho = 0`` and disagrees
    with the fidelity integral; it is reported only alongside that integral.
    """
    g = gamma
    c2r, c4r = math.cosh(2 * rho), math.cosh(4 * rho)
    c4 = 3 * c4r + 8 * c2r + 9
    c3 = 2 * c4r + 32 * c2r + 14
    c2 = 11 * c4r + 8 * c2r + 21
    c1 = 16 * c2r
    c0 = 4
    root = math.sqrt(1 + 2 * g * c2r + g * g)
    return (c4 * g**4 + c3 * g**3 + c2 * g**2 + c1 + c0) / (4 * (1 + g) ** 2 * root**5)


def cat_f1(rho, gamma):
    g = gamma
    c2r = math.cosh(2 * rho)
    num = 2 + 4 * g * c2r + (1 + 3 * math.cosh(4 * rho)) * g * g + 4 * g**3 * c2r + 2 * g**4
    return num / (2 * (1 + 2 * g * c2r + g * g) ** 2.5)


def cat_f2(rho, gamma, spec=None):
    return float(gamma_apply(lambda g: cat_f1(rho, g), gamma, spec))


def fidelity_closed(job, check=True):
    """Closed-form fidelity at the optimal resource phase.

    The tabulated squeezed-vacuum TPS formula can exceed 1 and does not
    reduce to the coherent value at ``rho = 0``. For that entry the value
    is the fidelity integral, ``reference`` carries the tabulated formula and
    ``consistent`` is False when the two differ by more than 1e-6. With
    ``check=False`` the Gamma-image of the TMSV formula is returned instead
    of running the integral.
    """
    if not job.optimal_phase:
        raise DomainError("closed-form fidelities hold at the optimal resource phase phi = pi")
    g = job.gamma
    inp = job.input
    tps = job.resource is ResourceKind.TPS
    if isinstance(inp, Coherent):
        return FidelityResult(coherent_f2(g) if tps else coherent_f1(g), ROUTE_CLOSED)
    if isinstance(inp, SqueezedVacuum):
        if not tps:
            return FidelityResult(squeezed_f1(inp.rho, g), ROUTE_CLOSED)
        printed = squeezed_f2_printed(inp.rho, g)
        if not check:
            return FidelityResult(fidelity_squeezed_gamma(inp.rho, g), ROUTE_GAMMA, reference=printed)
        num = fidelity_numeric(job)
        ok = abs(printed - num.value) <= AGREEMENT_TOL
        note = "" if ok else "tabulated squeezed-vacuum TPS formula disagrees with the fidelity integral"
        return FidelityResult(num.value, ROUTE_INTEGRAL, num.error, consistent=ok, reference=printed, note=note)
    if isinstance(inp, CatLike):
        if not tps:
            return FidelityResult(cat_f1(inp.rho, g), ROUTE_CLOSED)
        return FidelityResult(cat_f2(inp.rho, g), ROUTE_GAMMA)
    raise DomainError(f"no closed-form fidelity for {type(inp).__name__}")


def fidelity_squeezed_gamma(rho, gamma):
    """Gamma-image of the squeezed-vacuum TMSV fidelity (the TPS value
    consistent with the fidelity integral)."""
    return float(gamma_apply(lambda g: 1.0 / np.sqrt(1.0 + 2.0 * g * np.cosh(2.0 * rho) + g * g), gamma))


# ---------------------------------------------------------------------------
# output Wigner functions


def _cat_tilde(rho, phase, alpha):
    return alpha * math.cosh(rho) - np.exp(1j * phase) * np.conj(alpha) * math.sinh(rho)


def cat_w1_printed(rho, phase, gamma, alpha):
    """The tabulated TMSV-output Wigner function, exactly as printed.

    It is exact at ``rho = 0`` and at the phase-space origin but its
    polynomial bracket is wrong elsewhere when ``rho > 0``; kept for
    comparison only.
    """
    alpha = np.asarray(alpha, dtype=complex)
    a2 = np.abs(alpha) ** 2
    t2 = np.abs(_cat_tilde(rho, phase, alpha)) ** 2
    g = gamma
    c2r = math.cosh(2 * rho)
    den = 1 + 4 * g * c2r + 4 * g * g
    bracket = (
        (4 * t2 - 1)
        + 4 * (4 * a2 - c2r) * g
        + 16 * (3 * t2 - 2 * a2 * c2r) * g * g
        + 16 * g**3 * c2r
        + 16 * g**4
    )
    return 2.0 / (np.pi * den**2.5) * np.exp(-2.0 / den * (2 * g * a2 + t2)) * bracket


def cat_w1(rho, phase, gamma, alpha):
    """Output Wigner function of the cat-like input with the TMSV resource.

    In the frame rotated by ``-phase/2`` the input Wigner function separates
    into ``x`` and ``y`` factors with Gaussian widths ``a = 2 e^{-2 rho}`` and
    ``b = 2 e^{2 rho}``; teleportation convolves each with a Gaussian of
    variance ``gamma/2``.
    """
    alpha = np.asarray(alpha, dtype=complex) * np.exp(-0.5j * phase)
    x2 = alpha.real**2
    y2 = alpha.imag**2
    g = gamma
    a = 2.0 * math.exp(-2.0 * rho)
    b = 2.0 * math.exp(2.0 * rho)
    ca = 1.0 + a * g
    cb = 1.0 + b * g
    env = np.exp(-a * x2 / ca - b * y2 / cb) / np.sqrt(ca * cb)
    poly = 2.0 * a * (0.5 * g / ca + x2 / ca**2) + 2.0 * b * (0.5 * g / cb + y2 / cb**2) - 1.0
    return 2.0 / np.pi * env * poly


def cat_w2(rho, phase, gamma, alpha, spec=None):
    """Output Wigner function of the cat-like input with the TPS resource."""
    out = gamma_apply(lambda g: cat_w1(rho, phase, g, alpha), gamma, spec)
    return float(out) if np.ndim(out) == 0 else out


def wigner_output_numeric(job, alpha):
    """Output Wigner function by Fourier-transforming :func:`chi_output`."""
    damping = 0.5 * _input_damping(job.input) + resource_damping(job.sq)
    spec = QuadratureSpec(order=job.quad.order, damping=damping, rtol=1e-10)
    return numerics.wigner_from_characteristic(lambda a: chi_output(job, a), alpha, spec)


def wigner_output(job, alpha, route="auto"):
    """Output Wigner function at ``alpha`` (scalar or array).

    ``route='closed'`` uses the cat-like closed forms (optimal phase only),
    ``'numeric'`` the characteristic-function transform; ``'auto'`` picks
    the closed form when it applies.
    """
    closed_ok = isinstance(job.input, CatLike) and job.optimal_phase
    if route == "auto":
        route = "closed" if closed_ok else "numeric"
    if route == "closed":
        if not closed_ok:
            raise DomainError("closed-form output Wigner functions need a cat-like input at phi = pi")
        inp = job.input
        if job.resource is ResourceKind.TMSV:
            out = cat_w1(inp.rho, inp.phase, job.gamma, alpha)
            return float(out) if np.ndim(out) == 0 else out
        return cat_w2(inp.rho, inp.phase, job.gamma, alpha)
    if route == "numeric":
        return wigner_output_numeric(job, alpha)
    raise ValidationError(f"unknown route {route!r}")


def wigner_output_grid(job, route="auto"):
    """Output Wigner field on ``job.grid``; rows run over Im(alpha)."""
    return wigner_output(job, job.grid.points(), route)


@dataclass(frozen=True)
class GridMinimum:
    value: float
    location: complex
    grid_value: float


def grid_minimum(job, route="auto", field_values=None):
    """Minimum of the output Wigner field, refined once by a local quadratic fit."""
    w = wigner_output_grid(job, route) if field_values is None else field_values
    grid = job.grid
    x = grid.axis
    i, j = np.unravel_index(int(np.argmin(w)), w.shape)
    best = float(w[i, j])
    loc = complex(x[j], x[i])
    if 0 < i < w.shape[0] - 1 and 0 < j < w.shape[1] - 1:
        h = grid.step
        patch = w[i - 1 : i + 2, j - 1 : j + 2]
        gx = (patch[1, 2] - patch[1, 0]) / (2 * h)
        gy = (patch[2, 1] - patch[0, 1]) / (2 * h)
        hxx = (patch[1, 2] - 2 * patch[1, 1] + patch[1, 0]) / h**2
        hyy = (patch[2, 1] - 2 * patch[1, 1] + patch[0, 1]) / h**2
        hxy = (patch[2, 2] - patch[2, 0] - patch[0, 2] + patch[0, 0]) / (4 * h * h)
        hess = np.array([[hxx, hxy], [hxy, hyy]])
        if np.all(np.linalg.eigvalsh(hess) > 0):
            dx, dy = -np.linalg.solve(hess, [gx, gy])
            if abs(dx) <= h and abs(dy) <= h:
                cand = complex(x[j] + dx, x[i] + dy)
                val = float(wigner_output(job, cand, route))
                if val < best:
                    return GridMinimum(val, cand, float(w[i, j]))
    return GridMinimum(best, loc, best)


# ---------------------------------------------------------------------------
# scans


@dataclass(frozen=True)
class ScanSeries:
    r: np.ndarray
    values: np.ndarray
    label: str = ""


def w0_at(job, r):
    return float(wigner_output(job.with_r(r), 0.0))


def w0_scan(input, resource, r_values, phi=np.pi):
    """Output Wigner function at the origin across squeezing amplitudes."""
    job = TeleportJob.make(input, resource, max(float(np.min(r_values)), 1e-3), phi)
    r_values = np.asarray(r_values, dtype=float)
    vals = np.array([w0_at(job, r) for r in r_values])
    return ScanSeries(r_values, vals, f"W(0) {ResourceKind.parse(resource).value}")


def zero_crossing(series, input=None, resource=None, phi=np.pi, xtol=1e-6):
    """First sign change of a scan, located by Brent's method.

    Returns None when the scan does not change sign. When ``input`` and
    ``resource`` are given, the root is polished on the continuous function;
    otherwise it is linearly interpolated.
    """
    v = series.values
    idx = np.nonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0)[0]
    if idx.size == 0:
        return None
    k = int(idx[0])
    a, b = float(series.r[k]), float(series.r[k + 1])
    if input is None:
        return a + (b - a) * v[k] / (v[k] - v[k + 1])
    job = TeleportJob.make(input, resource, a, phi)
    return float(optimize.brentq(lambda r: w0_at(job, r), a, b, xtol=xtol))


def threshold(input, resource, r_min=0.02, r_max=2.0, steps=100, phi=np.pi):
    """Squeezing amplitude at which the teleported ``W(0)`` turns negative."""
    series = w0_scan(input, resource, np.linspace(r_min, r_max, steps), phi)
    return zero_crossing(series, input, resource, phi), series
