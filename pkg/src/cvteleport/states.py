"""Closed-form state functions for the two entangled resources and the
single-mode input states.

Conventions
-----------
* Displacement ``D(a) = exp(a a^dag - a^* a)``; characteristic function
  ``chi(a) = <D(a)>``; Wigner function normalised so that the vacuum is
  ``(2/pi) exp(-2|a|^2)``.
* The two-mode squeezer is ``S(xi) = exp(xi a^dag b^dag - xi^* a b)`` with
  ``xi = r e^{i phi}``, so the resource is
  ``sum_n e^{i n phi} tanh^n r |n, n> / cosh r``.
* Resource characteristic functions (:func:`chi_resource`) are quoted in the
  b-mirrored frame used by the teleportation protocol:
  ``chi_resource(a1, a2) = <D_a(a1) D_b(-a2)>``. In that frame the resource
  phase ``phi = pi`` is the optimal one for teleportation.
* Single-mode squeezing is ``S(xi) = exp((xi a^dag^2 - xi^* a^2) / 2)``.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ValidationError

R_MAX = 20.0


class ResourceKind(enum.Enum):
    TMSV = "tmsv"
    TPS = "tps"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValidationError(f"unknown resource kind {value!r}; expected 'tmsv' or 'tps'") from None


@dataclass(frozen=True)
class SqueezeParams:
    """Two-mode squeezing amplitude ``r`` and phase ``phi`` (radians)."""

    r: float
    phi: float = 0.0

    def __post_init__(self):
        if not np.isfinite(self.r) or self.r < 0:
            raise DomainError(f"squeezing amplitude must be a finite r >= 0, got {self.r}")
        if self.r > R_MAX:
            raise DomainError(f"squeezing amplitude r={self.r} exceeds the supported range r <= {R_MAX}")
        if not np.isfinite(self.phi):
            raise DomainError(f"squeezing phase must be finite, got {self.phi}")

    @property
    def gamma(self):
        return np.exp(-2.0 * self.r)

    @property
    def tanh(self):
        return np.tanh(self.r)

    @property
    def eta(self):
        return np.exp(1j * self.phi) * np.tanh(self.r)

    def bogoliubov(self):
        return BogoliubovMap(self.r, self.phi)


@dataclass(frozen=True)
class Coherent:
    alpha0: complex = 0.0


@dataclass(frozen=True)
class SqueezedVacuum:
    rho: float = 0.0
    phase: float = 0.0

    def __post_init__(self):
        if not self.rho >= 0:
            raise DomainError(f"single-mode squeezing must be rho >= 0, got {self.rho}")


@dataclass(frozen=True)
class CatLike:
    """Normalised ``a S(rho e^{i phase}) |0>``, the photon-subtracted squeezed vacuum."""

    rho: float = 0.313
    phase: float = 0.0

    def __post_init__(self):
        if not self.rho >= 0:
            raise DomainError(f"cat-like squeezing must be rho >= 0, got {self.rho}")


@dataclass(frozen=True)
class IdealCat:
    """``(|alpha0> + e^{i theta} |-alpha0>) / N``."""

    alpha0: complex = 1.0
    theta: float = np.pi

    def __post_init__(self):
        if self.norm <= 1e-12:
            raise DomainError("ideal cat with alpha0=0 and theta=pi has zero norm")

    @property
    def norm(self):
        a2 = abs(self.alpha0) ** 2
        return float(np.sqrt(2.0 * (1.0 + np.exp(-2.0 * a2) * np.cos(self.theta))))


InputKind = Coherent | SqueezedVacuum | CatLike | IdealCat


def _ch_sh(r):
    return np.cosh(r), np.sinh(r)


def _mix(x, y, r, phase):
    """``x cosh r + e^{i phase} y sinh r`` without cancellation for large r."""
    e = np.exp(1j * phase) * y
    return 0.5 * np.exp(r) * (x + e) + 0.5 * np.exp(-r) * (x - e)


@dataclass(frozen=True)
class BogoliubovMap:
    """Linear map ``(alpha, beta*) -> (alpha~, beta~*)`` that undoes the two-mode
    squeezer in phase space::

        [alpha~ ]   [ cosh r            -sinh r e^{i phi} ] [alpha ]
        [beta~* ] = [ -sinh r e^{-i phi}  cosh r          ] [beta* ]
    """

    r: float
    phi: float

    @property
    def matrix(self):
        ch, sh = _ch_sh(self.r)
        return np.array([[ch, -sh * np.exp(1j * self.phi)], [-sh * np.exp(-1j * self.phi), ch]])

    @property
    def determinant(self):
        """``cosh^2 r - sinh^2 r`` in the factored form ``(cosh r - sinh r)(cosh r + sinh r)``.

        Subtracting the two squares loses every digit once ``r`` is large, so
        ``cosh r - sinh r`` is taken as ``e^{-r}`` and the off-diagonal phases
        are multiplied in separately.
        """
        m = self.matrix
        phase = (m[0, 1] / abs(m[0, 1])) * (m[1, 0] / abs(m[1, 0])) if self.r != 0 else 1.0
        ch, sh = _ch_sh(abs(self.r))
        return complex(np.exp(-abs(self.r)) * (ch + sh) * phase)

    def apply(self, alpha, beta):
        alpha = np.asarray(alpha, dtype=complex)
        beta = np.asarray(beta, dtype=complex)
        at = _mix(alpha, -np.conj(beta), self.r, self.phi)
        bt_conj = _mix(np.conj(beta), -alpha, self.r, -self.phi)
        return at, np.conj(bt_conj)

    def inverse(self, alpha_t, beta_t):
        return BogoliubovMap(-self.r, self.phi).apply(alpha_t, beta_t)


def _require_tps_domain(kind, r):
    if kind is ResourceKind.TPS and r <= 0:
        raise DomainError("photon subtraction needs r > 0 (the TPS state is undefined at r = 0)")


def chi_resource(kind, sq, alpha1, alpha2):
    """Characteristic function of the entangled resource in the mirrored frame.

    Vectorised over ``alpha1`` and ``alpha2``.
    """
    kind = ResourceKind.parse(kind)
    _require_tps_domain(kind, sq.r)
    a1 = np.asarray(alpha1, dtype=complex)
    a2 = np.asarray(alpha2, dtype=complex)
    z1 = _mix(a1, np.conj(a2), sq.r, sq.phi)
    z2 = _mix(a2, np.conj(a1), sq.r, sq.phi)
    n1 = np.abs(z1) ** 2
    n2 = np.abs(z2) ** 2
    base = np.exp(-0.5 * (n1 + n2))
    if kind is ResourceKind.TMSV:
        return base
    t = sq.tanh
    bracket = 1.0 - 2.0 * t * np.real(np.exp(-1j * sq.phi) * z1 * z2) + (1.0 - n1) * (1.0 - n2) * t * t
    return base * bracket / (1.0 + t * t)


def _catlike_tilde(rho, phase, alpha):
    alpha = np.asarray(alpha, dtype=complex)
    return alpha * np.cosh(rho) - np.exp(1j * phase) * np.conj(alpha) * np.sinh(rho)


def chi_input(inp, alpha):
    """Characteristic function of a single-mode input state.

    The ideal cat has no closed form here; use
    :func:`cvteleport.fock.numeric_characteristic` for it.
    """
    alpha = np.asarray(alpha, dtype=complex)
    if isinstance(inp, Coherent):
        return np.exp(-0.5 * np.abs(alpha) ** 2 + 2j * np.imag(alpha * np.conj(inp.alpha0)))
    if isinstance(inp, SqueezedVacuum):
        q = np.conj(alpha) * np.cosh(inp.rho) + np.exp(-1j * inp.phase) * alpha * np.sinh(inp.rho)
        return np.exp(-0.5 * np.abs(q) ** 2) + 0j
    if isinstance(inp, CatLike):
        n = np.abs(_catlike_tilde(inp.rho, inp.phase, alpha)) ** 2
        return (1.0 - n) * np.exp(-0.5 * n) + 0j
    if isinstance(inp, IdealCat):
        raise DomainError("no closed-form characteristic function for the ideal cat; use the Fock oracle")
    raise ValidationError(f"unsupported input state {inp!r}")


def wigner_resource(kind, sq, alpha, beta):
    """Two-mode Wigner function ``W(alpha, beta)`` of the resource state."""
    kind = ResourceKind.parse(kind)
    _require_tps_domain(kind, sq.r)
    at, bt = sq.bogoliubov().apply(alpha, beta)
    na = np.abs(at) ** 2
    nb = np.abs(bt) ** 2
    gauss = np.exp(-2.0 * (na + nb))
    if kind is ResourceKind.TMSV:
        return 4.0 / np.pi**2 * gauss
    t = sq.tanh
    bracket = (
        1.0
        + 8.0 * t * np.real(np.exp(-1j * sq.phi) * at * bt)
        + (4.0 * na - 1.0) * (4.0 * nb - 1.0) * t * t
    )
    return 4.0 / ((1.0 + t * t) * np.pi**2) * gauss * bracket


def tps_wigner_prefactor(t, x, y):
    """Polynomial prefactor of the TPS Wigner function on the slice where
    ``|alpha~| = x``, ``|beta~| = y`` and ``alpha~ beta~`` is real negative."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return 1.0 - 8.0 * x * y * t + (4.0 * x * x - 1.0) * (4.0 * y * y - 1.0) * t * t


def wigner_catlike(rho, phase, alpha):
    """Wigner function of the normalised ``a S(rho e^{i phase}) |0>``."""
    if rho < 0:
        raise DomainError(f"rho must be >= 0, got {rho}")
    n = np.abs(_catlike_tilde(rho, phase, alpha)) ** 2
    return 2.0 / np.pi * (4.0 * n - 1.0) * np.exp(-2.0 * n)


def _one_minus_eta_sq(sq):
    # 1 - e^{2i phi} tanh^2 r, written to avoid cancellation at large r
    e2 = np.exp(2j * sq.phi)
    return (1.0 - e2) + e2 / np.cosh(sq.r) ** 2


def quadrature_amplitude(kind, sq, xa, xb):
    """Position-quadrature wavefunction ``psi(x_a, x_b)`` of the resource.

    The TPS amplitude carries the global phase ``e^{i phi}`` of the
    normalised ``a b S(xi)|0,0>``.
    """
    kind = ResourceKind.parse(kind)
    _require_tps_domain(kind, sq.r)
    xa = np.asarray(xa, dtype=float)
    xb = np.asarray(xb, dtype=float)
    eta = sq.eta
    d = _one_minus_eta_sq(sq)
    s = xa * xa + xb * xb
    p = xa * xb
    mehler = np.exp(-0.5 * s + (2.0 * p * eta - s * eta * eta) / d) / np.sqrt(np.pi * d)
    if kind is ResourceKind.TMSV:
        return mehler / np.cosh(sq.r)
    # (1 + eta d/d eta) applied to the Mehler kernel
    dlog = eta / d + (2.0 * p * (1.0 + eta * eta) - 2.0 * eta * s) / d**2
    t = sq.tanh
    pref = np.exp(1j * sq.phi) / (np.cosh(sq.r) ** 3 * np.sqrt(1.0 + t * t))
    return pref * mehler * (1.0 + eta * dlog)


def quadrature_amplitude_rotated(kind, sq, x1, x2):
    """:func:`quadrature_amplitude` in ``x1 = (x_a + x_b)/sqrt 2``, ``x2 = (x_a - x_b)/sqrt 2``."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    return quadrature_amplitude(kind, sq, (x1 + x2) / np.sqrt(2.0), (x1 - x2) / np.sqrt(2.0))


def _log_cosh(r):
    return r + np.log1p(np.exp(-2.0 * r)) - np.log(2.0)


def photon_number_prob(kind, sq, n):
    """Probability of ``n`` photons in each mode. Vectorised over ``n``."""
    kind = ResourceKind.parse(kind)
    _require_tps_domain(kind, sq.r)
    n = np.asarray(n)
    if np.any(n < 0):
        raise DomainError("photon number must be nonnegative")
    r = sq.r
    if r == 0:
        return np.where(n == 0, 1.0, 0.0)
    log_t = np.log(np.tanh(r))
    if kind is ResourceKind.TMSV:
        return np.exp(2.0 * n * log_t - 2.0 * _log_cosh(r))
    t = np.tanh(r)
    logp = 2.0 * np.log1p(n) + 2.0 * n * log_t - 6.0 * _log_cosh(r) - np.log1p(t * t)
    return np.exp(logp)


def squeezing_closed(kind, r):
    """Two-mode quadrature squeezing at the optimal quadrature angle."""
    kind = ResourceKind.parse(kind)
    if r < 0:
        raise DomainError(f"r must be >= 0, got {r}")
    _require_tps_domain(kind, r)
    if kind is ResourceKind.TMSV:
        return -0.5 * (-np.expm1(-2.0 * r))
    return 0.5 * (-np.expm1(-2.0 * r)) * (np.tanh(2.0 * r) - 2.0)
