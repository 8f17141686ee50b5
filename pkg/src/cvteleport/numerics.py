"""Numerical engines: phase-plane quadrature, characteristic-to-Wigner
transforms and Richardson-extrapolated finite differences.

Every integrand handled here is a Gaussian envelope times a polynomial (or
a bounded oscillatory factor), so a tensor-product Gauss-Hermite rule with a
scale matched to the envelope is used throughout.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import trapezoid

from .errors import DomainError, EvaluationError, InconsistencyError, NumericError, ValidationError

IMAG_RESIDUE_TOL = 1e-8
# hermgauss weights underflow beyond this order
MAX_ORDER = 256


@dataclass(frozen=True)
class QuadratureSpec:
    """Controls for the Gauss-Hermite phase-plane rule.

    ``damping`` is the smallest decay constant ``c`` of the integrand's
    Gaussian envelope ``exp(-c |alpha|^2)``. With ``adaptive`` set, the
    order is doubled until two successive orders agree to ``rtol``.
    """

    order: int = 64
    damping: float = 1.0
    adaptive: bool = True
    rtol: float = 1e-9
    max_order: int = MAX_ORDER

    def __post_init__(self):
        if int(self.order) != self.order or self.order < 8:
            raise ValidationError(f"quadrature order must be an integer >= 8, got {self.order}")
        if not (np.isfinite(self.damping) and self.damping > 0):
            raise ValidationError(f"damping must be positive, got {self.damping}")
        if self.max_order > MAX_ORDER:
            raise ValidationError(f"max_order is capped at {MAX_ORDER}")

    def with_damping(self, damping):
        return QuadratureSpec(self.order, float(damping), self.adaptive, self.rtol, self.max_order)


@dataclass(frozen=True)
class Grid2D:
    """Square phase-space window ``[-extent, extent]^2`` sampled at
    ``resolution`` points per axis. Row index runs over the imaginary part.
    """

    extent: float
    resolution: int

    def __post_init__(self):
        if not self.extent > 0:
            raise ValidationError(f"grid extent must be positive, got {self.extent}")
        if int(self.resolution) != self.resolution or self.resolution < 16:
            raise ValidationError(f"grid resolution must be an integer >= 16, got {self.resolution}")

    @classmethod
    def for_damping(cls, damping, resolution=201):
        """Window wide enough that ``exp(-damping |alpha|^2)`` is negligible at the edge."""
        return cls(max(6.0, 8.0 / np.sqrt(damping)), resolution)

    @property
    def axis(self):
        return np.linspace(-self.extent, self.extent, self.resolution)

    @property
    def step(self):
        return 2.0 * self.extent / (self.resolution - 1)

    def points(self):
        x = self.axis
        return x[None, :] + 1j * x[:, None]

    def integrate(self, values):
        """Trapezoidal integral of a field sampled on this grid (d^2 alpha = dx dy)."""
        values = np.asarray(values)
        x = self.axis
        return trapezoid(trapezoid(values, x, axis=1), x, axis=0)

    def boundary_ratio(self, values):
        """Largest edge magnitude relative to the field's peak magnitude."""
        a = np.abs(np.asarray(values))
        edge = max(a[0].max(), a[-1].max(), a[:, 0].max(), a[:, -1].max())
        return edge / a.max()


@dataclass(frozen=True)
class DiffSpec:
    """Central differences with ``levels`` rounds of Richardson extrapolation.

    The stencil reaches ``step`` away from the evaluation point; successive
    levels halve the step.
    """

    step: float = 1e-2
    levels: int = 4

    def __post_init__(self):
        if not 1e-6 < self.step < 1e-1:
            raise ValidationError(f"base step must lie in (1e-6, 1e-1), got {self.step}")
        if int(self.levels) != self.levels or not 2 <= self.levels <= 6:
            raise ValidationError(f"richardson levels must be in [2, 6], got {self.levels}")


@lru_cache(maxsize=32)
def _hermite_rule(order):
    x, w = np.polynomial.hermite.hermgauss(order)
    # weights with the e^{-x^2} factor folded back in
    scaled = w * np.exp(x * x)
    x.setflags(write=False)
    scaled.setflags(write=False)
    return x, scaled


def plane_rule(order, damping):
    """Nodes and weights for ``(1/pi) * integral f(alpha) d^2 alpha``.

    Returns ``(u, w)`` with 1-D node coordinates ``u`` (used for both real and
    imaginary parts) and 1-D weights ``w`` such that the integral is
    ``sum_ij w_i w_j f(u_i + 1j u_j) / pi``.
    """
    x, scaled = _hermite_rule(int(order))
    s = 1.0 / np.sqrt(damping)
    return x * s, scaled * s


def _evaluate(f, nodes):
    vals = np.asarray(f(nodes), dtype=complex)
    vals = np.broadcast_to(vals, nodes.shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        node = nodes[bad][0]
        raise EvaluationError(f"integrand is not finite at alpha={node!r}", node=node)
    return vals


def _integrate_at(f, order, damping):
    u, w = plane_rule(order, damping)
    nodes = u[:, None] + 1j * u[None, :]
    vals = _evaluate(f, nodes)
    weights = np.outer(w, w) / np.pi
    # np.sum reduces pairwise in a fixed order, independent of threading
    value = np.sum(weights * vals)
    scale = np.sum(weights * np.abs(vals))
    return complex(value), float(scale)


def integrate_with_error(f, spec=None):
    """Like :func:`integrate_phase_plane` but also returns ``(error, order)``.

    The error estimate is the difference between the last two orders tried.
    """
    spec = spec or QuadratureSpec()
    order = spec.order
    if not spec.adaptive:
        value, _ = _integrate_at(f, order, spec.damping)
        return value, float("nan"), order
    prev, _ = _integrate_at(f, max(order // 2, 4), spec.damping)
    cur, scale = _integrate_at(f, order, spec.damping)
    while abs(cur - prev) > spec.rtol * max(abs(cur), scale):
        order *= 2
        if order > spec.max_order:
            raise NumericError(
                f"phase-plane quadrature did not converge by order {spec.max_order} "
                f"(last change {abs(cur - prev):.3e}, damping {spec.damping})"
            )
        prev = cur
        cur, scale = _integrate_at(f, order, spec.damping)
    return cur, abs(cur - prev), order


def integrate_phase_plane(f, spec=None):
    """Compute ``(1/pi) * integral f(alpha) d^2 alpha`` over the complex plane.

    Parameters
    ----------
    f : callable
        Vectorised function of a complex ndarray. ``f(alpha) * exp(damping |alpha|^2)``
        must be polynomially bounded.
    spec : QuadratureSpec, optional

    Returns
    -------
    complex
    """
    value, _, _ = integrate_with_error(f, spec)
    return value


def _as_points(beta):
    beta = np.asarray(beta, dtype=complex)
    return beta, beta.reshape(-1)


def _wigner_transform_at(chi_vals, u, w, flat_beta):
    # W(beta) = (1/pi^2) int chi(a) exp(2i Im(beta a*)) d^2a, a = x + iy,
    # Im(beta a*) = q x - p y for beta = p + iq
    g = np.outer(w, w) * chi_vals / np.pi**2
    out = np.empty(flat_beta.size, dtype=complex)
    chunk = 4096
    for start in range(0, flat_beta.size, chunk):
        b = flat_beta[start:start + chunk]
        ex = np.exp(2j * b.imag[:, None] * u[None, :])
        ey = np.exp(-2j * b.real[:, None] * u[None, :])
        out[start:start + chunk] = np.sum((ex @ g) * ey, axis=1)
    return out


def wigner_from_characteristic(chi, beta, spec=None):
    """Fourier transform of a single-mode characteristic function.

    ``W(beta) = (1/pi^2) * integral chi(alpha) exp(beta alpha* - beta* alpha) d^2 alpha``

    ``beta`` may be a scalar or an array; the result has the same shape.
    ``chi`` is evaluated once on the quadrature nodes and reused for every
    ``beta``. The imaginary residue of the transform must stay below 1e-8.
    """
    spec = spec or QuadratureSpec(damping=0.5)
    shape, flat = _as_points(beta)
    shape = shape.shape

    def at(order):
        u, w = plane_rule(order, spec.damping)
        vals = _evaluate(chi, u[:, None] + 1j * u[None, :])
        return _wigner_transform_at(vals, u, w, flat)

    order = spec.order
    cur = at(order)
    if spec.adaptive:
        prev = at(max(order // 2, 4))
        while np.max(np.abs(cur - prev)) > spec.rtol * max(np.max(np.abs(cur)), 1e-3):
            order *= 2
            if order > spec.max_order:
                raise NumericError(f"Wigner transform did not converge by order {spec.max_order}")
            prev, cur = cur, at(order)
    residue = np.max(np.abs(cur.imag)) if cur.size else 0.0
    if residue > IMAG_RESIDUE_TOL:
        raise InconsistencyError(
            f"Wigner transform has imaginary residue {residue:.3e}; the characteristic "
            "function is not Hermitian (chi(-a) != conj(chi(a)))"
        )
    real = cur.real.reshape(shape)
    return float(real) if real.ndim == 0 else real


def wigner_from_characteristic_two_mode(chi, alpha, beta, spec=None, coords=None):
    """Two-mode version of :func:`wigner_from_characteristic` at one point.

    ``chi(a1, a2)`` is integrated on a 4-D Gauss-Hermite grid. ``coords``, if
    given, maps the grid variables ``(z1, z2)`` to ``(a1, a2)``; it must be a
    volume-preserving real-linear map (e.g. a symplectic mode transformation),
    which lets anisotropic envelopes be integrated in their natural frame.
    """
    spec = spec or QuadratureSpec(order=24, damping=0.5, adaptive=False)

    def at(order):
        u, w = plane_rule(order, spec.damping)
        z = u[:, None] + 1j * u[None, :]
        wz = np.outer(w, w)
        z1 = z[:, :, None, None]
        z2 = z[None, None, :, :]
        if coords is None:
            a1, a2 = z1, z2
        else:
            a1, a2 = coords(z1, z2)
        vals = np.asarray(chi(a1, a2), dtype=complex)
        if not np.all(np.isfinite(vals)):
            raise EvaluationError("two-mode characteristic function is not finite on the grid")
        phase = np.exp(alpha * np.conj(a1) - np.conj(alpha) * a1 + beta * np.conj(a2) - np.conj(beta) * a2)
        weights = wz[:, :, None, None] * wz[None, None, :, :]
        return complex(np.sum(weights * vals * phase)) / np.pi**4

    order = spec.order
    cur = at(order)
    if spec.adaptive:
        prev = at(max(order // 2, 4))
        while abs(cur - prev) > spec.rtol * max(abs(cur), 1e-3):
            order = int(order * 1.5)
            if order > 48:
                raise NumericError("two-mode Wigner transform did not converge by order 48")
            prev, cur = cur, at(order)
    if abs(cur.imag) > IMAG_RESIDUE_TOL:
        raise InconsistencyError(f"two-mode Wigner transform has imaginary residue {abs(cur.imag):.3e}")
    return cur.real


def derivative(f, x, order=1, spec=None, domain=None):
    """Richardson-extrapolated central difference of ``f`` at ``x``.

    Parameters
    ----------
    f : callable
        Smooth function of one real variable; may return an ndarray, in
        which case the derivative is taken elementwise.
    x : float
    order : {1, 2}
    spec : DiffSpec, optional
    domain : (float, float), optional
        Open interval on which ``f`` is defined. The whole stencil
        ``[x - step, x + step]`` must fit inside it.
    """
    if order not in (1, 2):
        raise ValueError("only first and second derivatives are supported")
    spec = spec or DiffSpec()
    h = spec.step
    if domain is not None:
        lo, hi = domain
        if not (lo < x - h and x + h < hi):
            raise DomainError(
                f"difference stencil [{x - h}, {x + h}] leaves the domain ({lo}, {hi})"
            )
    f0 = np.asarray(f(x), dtype=float) if order == 2 else None
    table = []
    for k in range(spec.levels):
        hk = h / 2**k
        fp = np.asarray(f(x + hk), dtype=float)
        fm = np.asarray(f(x - hk), dtype=float)
        if order == 1:
            row = [(fp - fm) / (2 * hk)]
        else:
            row = [(fp - 2 * f0 + fm) / hk**2]
        for j in range(1, k + 1):
            row.append(row[j - 1] + (row[j - 1] - table[k - 1][j - 1]) / (4**j - 1))
        table.append(row)
    best = table[-1][-1]
    return float(best) if np.ndim(best) == 0 else best
