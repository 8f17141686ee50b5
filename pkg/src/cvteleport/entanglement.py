"""Logarithmic negativity of Schmidt-diagonal two-mode states.

For a pure state ``sum_n c_n e^{i n phi} |n, n>`` the partial transpose has
negative eigenvalues ``-c_n c_m`` (n < m), so that

    epsilon = log2((sum_n c_n)^2).

Closed forms follow for the two resources; the single-photon-added state has
no closed form and is evaluated with the Fock-space oracle.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, TruncationError, ValidationError
from .states import R_MAX, ResourceKind

LOG2E = 1.0 / np.log(2.0)
TAIL_MASS = 1e-14
MAX_TERMS = 400


class PhotonAdded(enum.Enum):
    """Marker for the single-photon-added resource ``a^dag S(xi)|0,0>``."""

    PA = "pa"


PHOTON_ADDED = PhotonAdded.PA


@dataclass(frozen=True)
class SchmidtCoeffs:
    """Nonnegative Schmidt coefficients normalised to ``sum c_n^2 = 1``."""

    c: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=float)
        if c.ndim != 1 or c.size == 0:
            raise ValidationError("Schmidt coefficients must form a nonempty 1-D sequence")
        if not np.all(np.isfinite(c)) or np.any(c < 0):
            raise ValidationError("Schmidt coefficients must be finite and nonnegative")
        norm = float(np.sum(c * c))
        if abs(norm - 1.0) > 1e-8:
            raise ValidationError(f"Schmidt coefficients are not normalised: sum c^2 = {norm!r}")
        object.__setattr__(self, "c", c)

    @classmethod
    def from_magnitudes(cls, values):
        """Build from possibly complex amplitudes, keeping magnitudes only."""
        return cls(np.abs(np.asarray(values)))


def _log2_cosh(x):
    return (abs(x) + np.log1p(np.exp(-2.0 * abs(x))) - np.log(2.0)) * LOG2E


def _check_r(kind, r):
    if not np.isfinite(r) or r < 0:
        raise DomainError(f"squeezing amplitude must be a finite r >= 0, got {r}")
    if r > R_MAX:
        raise DomainError(f"r={r} exceeds the supported range r <= {R_MAX}")
    if kind is ResourceKind.TPS and r == 0:
        raise DomainError("the photon-subtracted resource needs r > 0")


def logneg_closed(kind, r):
    """Closed-form logarithmic negativity (bits) of the TMSV or TPS resource."""
    kind = ResourceKind.parse(kind)
    _check_r(kind, r)
    if kind is ResourceKind.TMSV:
        return 2.0 * r * LOG2E
    return 4.0 * r * LOG2E - _log2_cosh(2.0 * r)


def logneg_from_coeffs(c):
    """``log2((sum c_n)^2)`` for normalised Schmidt coefficients."""
    if not isinstance(c, SchmidtCoeffs):
        c = SchmidtCoeffs(c)
    s = float(np.sum(c.c))
    return max(0.0, 2.0 * np.log2(s))


def schmidt_coeffs(kind, r, tail=TAIL_MASS, max_terms=MAX_TERMS):
    """Truncated Schmidt coefficients of the resource.

    The sequence is cut at the first index where the cumulative probability
    exceeds ``1 - tail``; more than ``max_terms`` terms raise a truncation error.
    """
    kind = ResourceKind.parse(kind)
    _check_r(kind, r)
    n = np.arange(max_terms)
    t = np.tanh(r)
    with np.errstate(divide="ignore"):
        log_t = np.log(t) if t > 0 else -np.inf
    lc = r + np.log1p(np.exp(-2.0 * r)) - np.log(2.0)
    if kind is ResourceKind.TMSV:
        logc = n * log_t - lc if t > 0 else np.where(n == 0, 0.0, -np.inf)
    else:
        logc = np.log1p(n) + n * log_t - 3.0 * lc - 0.5 * np.log1p(t * t)
    c = np.exp(logc)
    cum = np.cumsum(c * c)
    idx = np.nonzero(cum > 1.0 - tail)[0]
    if idx.size == 0:
        raise TruncationError(f"{kind.value} at r={r} needs more than {max_terms} Schmidt terms")
    c = c[: idx[0] + 1]
    return SchmidtCoeffs(c / np.sqrt(np.sum(c * c)))


def logneg_ratio(kind, r, cutoff=None):
    """``2^epsilon / 2^epsilon_TMSV`` at the same squeezing amplitude.

    ``kind`` may be a :class:`ResourceKind` or :data:`PHOTON_ADDED`; the latter is
    computed numerically from the Fock-space partial transpose.
    """
    if not r > 0:
        raise DomainError(f"the entanglement ratio needs r > 0, got {r}")
    if kind is PHOTON_ADDED or (isinstance(kind, str) and kind.lower() in ("pa", "photon_added", "photonadded")):
        from . import fock

        state = fock.build_resource("photon_added", r, 0.0, cutoff=cutoff)
        eps = fock.numeric_logneg(state)
    else:
        eps = logneg_closed(kind, r)
    return float(2.0 ** (eps - logneg_closed(ResourceKind.TMSV, r)))
