"""Truncated Fock-space oracle.

Every state is built here from operator primitives (matrix exponentials of
squeezing and mixing generators, ladder operators and displacement matrices)
rather than from the closed-form expansions, so that the closed forms in
:mod:`cvteleport.states`, :mod:`cvteleport.entanglement` and
:mod:`cvteleport.teleport` can be checked against an independent route.

Amplitude tensors are indexed by photon number, ``psi[n_a, n_b]`` for two
modes and ``psi[n]`` for one.
"""

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import linalg, optimize, sparse
from scipy.sparse import csgraph
from scipy.special import eval_genlaguerre, gammaln

from .errors import DomainError, HeraldError, NumericError, TruncationError, TruncationWarning, ValidationError
from .states import CatLike, Coherent, IdealCat, ResourceKind, SqueezedVacuum, SqueezeParams

MIN_CUTOFF = 20
MAX_CUTOFF = 400
TAIL_TOL = 1e-8
PT_ZERO = 1e-12

RESOURCE_NAMES = ("tmsv", "tps", "photon_added")


@dataclass(frozen=True)
class FockState:
    """Truncated pure state.

    Parameters
    ----------
    amplitudes : ndarray
        Complex amplitudes, shape ``(cutoff+1,)`` or ``(cutoff+1, cutoff+1)``.
    label : str
        Free-form description used in dumps and error messages.
    """

    amplitudes: np.ndarray
    label: str = ""

    def __post_init__(self):
        psi = np.asarray(self.amplitudes, dtype=complex)
        if psi.ndim not in (1, 2):
            raise ValidationError("a Fock state has one or two modes")
        if psi.ndim == 2 and psi.shape[0] != psi.shape[1]:
            raise ValidationError("two-mode amplitudes must share one cutoff")
        if not np.all(np.isfinite(psi)):
            raise ValidationError("Fock amplitudes must be finite")
        object.__setattr__(self, "amplitudes", psi)

    @property
    def modes(self):
        return self.amplitudes.ndim

    @property
    def cutoff(self):
        return self.amplitudes.shape[0] - 1

    @property
    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def normalize(self):
        n = self.norm
        if n == 0:
            raise ValidationError("cannot normalise the zero vector")
        return FockState(self.amplitudes / n, self.label)

    def tail_mass(self, levels=2):
        """Probability carried by the top ``levels`` Fock levels of any mode."""
        p = np.abs(self.amplitudes) ** 2
        if self.modes == 1:
            return float(np.sum(p[-levels:]))
        mask = np.zeros(p.shape, dtype=bool)
        mask[-levels:, :] = True
        mask[:, -levels:] = True
        return float(np.sum(p[mask]))

    def healthy(self, tol=TAIL_TOL):
        return self.tail_mass() < tol

    def resize(self, cutoff):
        """Zero-pad or crop to a new cutoff."""
        n = cutoff + 1
        out = np.zeros((n,) * self.modes, dtype=complex)
        m = min(n, self.cutoff + 1)
        out[(slice(0, m),) * self.modes] = self.amplitudes[(slice(0, m),) * self.modes]
        return FockState(out, self.label)

    def density_matrix(self):
        return DensityMatrix.from_state(self)

    def dumps(self):
        """Text dump: one line per nonzero basis element, ``indices re im``."""
        lines = [f"# modes={self.modes} cutoff={self.cutoff} label={self.label}"]
        for idx in zip(*np.nonzero(self.amplitudes)):
            z = self.amplitudes[idx]
            head = " ".join(str(int(i)) for i in idx)
            lines.append(f"{head} {z.real:.16e} {z.imag:.16e}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text):
        lines = text.splitlines()
        head = dict(item.split("=", 1) for item in lines[0].lstrip("# ").split(" ", 2))
        modes, cutoff = int(head["modes"]), int(head["cutoff"])
        psi = np.zeros((cutoff + 1,) * modes, dtype=complex)
        for line in lines[1:]:
            if not line.strip():
                continue
            parts = line.split()
            idx = tuple(int(p) for p in parts[:modes])
            psi[idx] = complex(float(parts[modes]), float(parts[modes + 1]))
        return cls(psi, head.get("label", ""))


@dataclass(frozen=True)
class DensityMatrix:
    """Two-mode density matrix over the basis ``|n_a, n_b>`` (row-major)."""

    matrix: np.ndarray
    dims: tuple = field(default=(1, 1))

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        da, db = self.dims
        if m.shape != (da * db, da * db):
            raise ValidationError(f"density matrix shape {m.shape} does not match dims {self.dims}")
        if np.max(np.abs(m - m.conj().T), initial=0.0) > 1e-12:
            raise ValidationError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > 1e-10:
            raise ValidationError(f"density matrix trace is {np.trace(m).real!r}, not 1")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_state(cls, state):
        if state.modes != 2:
            raise ValidationError("density matrices are built for two-mode states")
        psi = state.normalize().amplitudes
        v = psi.reshape(-1)
        return cls(np.outer(v, v.conj()), psi.shape)

    def partial_transpose(self):
        da, db = self.dims
        t = self.matrix.reshape(da, db, da, db).transpose(0, 3, 2, 1)
        return t.reshape(da * db, da * db)


@dataclass(frozen=True)
class HeraldingSetup:
    """Tap-off beamsplitters of intensity transmissivity ``T`` on both modes."""

    transmissivity: float = 0.99
    cutoff: int | None = None

    def __post_init__(self):
        if not 0.0 < self.transmissivity < 1.0:
            raise DomainError(f"transmissivity must lie in (0, 1), got {self.transmissivity}")
        if self.transmissivity <= 0.5:
            warnings.warn("heralding is intended for highly transmissive taps (T > 0.5)", TruncationWarning, stacklevel=2)


# ---------------------------------------------------------------------------
# operator primitives


def lowering(n):
    """Annihilation operator on ``n`` Fock levels."""
    return np.diag(np.sqrt(np.arange(1, n, dtype=float)), 1)


def apply_lowering(psi, axis=0):
    """``a psi`` on the given mode, keeping the array shape."""
    psi = np.moveaxis(np.asarray(psi, dtype=complex), axis, 0)
    out = np.zeros_like(psi)
    k = np.sqrt(np.arange(1, psi.shape[0], dtype=float))
    out[:-1] = (k.reshape((-1,) + (1,) * (psi.ndim - 1))) * psi[1:]
    return np.moveaxis(out, 0, axis)


def apply_raising(psi, axis=0):
    """``a^dag psi``; the top level must be empty or the result is truncated."""
    psi = np.moveaxis(np.asarray(psi, dtype=complex), axis, 0)
    out = np.zeros_like(psi)
    k = np.sqrt(np.arange(1, psi.shape[0], dtype=float))
    out[1:] = (k.reshape((-1,) + (1,) * (psi.ndim - 1))) * psi[:-1]
    return np.moveaxis(out, 0, axis)


def _pad(cutoff):
    return max(40, cutoff // 2)


def two_mode_squeezed_column(xi, cutoff):
    """``S(xi)|0,0>`` from the matrix exponential of the squeezing generator.

    The generator ``xi a^dag b^dag - xi^* a b`` leaves the diagonal sector
    ``|n, n>`` invariant, so it is exponentiated there on a padded ladder.
    """
    m = cutoff + 1 + _pad(cutoff)
    k = np.arange(1, m, dtype=float)
    gen = np.diag(xi * k, -1) - np.diag(np.conj(xi) * k, 1)
    col = linalg.expm(gen)[:, 0]
    psi = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    idx = np.arange(cutoff + 1)
    psi[idx, idx] = col[: cutoff + 1]
    return psi


def single_mode_squeezed_column(xi, cutoff):
    """``S(xi)|0>`` with ``S(xi) = exp((xi a^dag^2 - xi^* a^2) / 2)``."""
    m = cutoff + 1 + _pad(cutoff)
    a = lowering(m)
    a2 = a @ a
    gen = 0.5 * (xi * a2.T - np.conj(xi) * a2)
    return linalg.expm(gen)[: cutoff + 1, 0]


def displacement_matrix_element(m, n, alpha):
    """``<m|D(alpha)|n>`` from the associated-Laguerre closed form."""
    if m < 0 or n < 0:
        raise DomainError("Fock indices must be nonnegative")
    alpha = complex(alpha)
    x = abs(alpha) ** 2
    if m >= n:
        lo, hi, z = n, m, alpha
    else:
        lo, hi, z = m, n, -alpha.conjugate()
    d = hi - lo
    if z == 0:
        return complex(np.exp(-0.5 * x) if d == 0 else 0.0)
    log_mag = 0.5 * (gammaln(lo + 1) - gammaln(hi + 1)) + d * np.log(abs(z)) - 0.5 * x
    phase = (z / abs(z)) ** d
    return complex(phase * np.exp(log_mag) * eval_genlaguerre(lo, d, x))


def displacement_matrix(alpha, rows, cols=None):
    """Matrix of ``D(alpha)`` with exact entries on a ``rows x cols`` window.

    Built column by column from ``D|n> = (a^dag - alpha^*) D|n-1> / sqrt(n)``.
    """
    cols = rows if cols is None else cols
    alpha = complex(alpha)
    t = np.zeros((rows, cols), dtype=complex)
    col = np.zeros(rows, dtype=complex)
    col[0] = np.exp(-0.5 * abs(alpha) ** 2)
    for m in range(1, rows):
        col[m] = alpha / np.sqrt(m) * col[m - 1]
    t[:, 0] = col
    sq = np.sqrt(np.arange(rows, dtype=float))
    for n in range(1, cols):
        prev = t[:, n - 1]
        new = -alpha.conjugate() * prev
        new[1:] += sq[1:] * prev[:-1]
        t[:, n] = new / np.sqrt(n)
    return t


def _displaced_rows(cutoff, alpha):
    r = math.sqrt(cutoff) + abs(alpha) + 8.0
    return int(math.ceil(r * r)) + 1


# ---------------------------------------------------------------------------
# cutoffs and state construction


def _resource_log_probs(kind, r, n):
    t = np.tanh(r)
    lc = r + np.log1p(np.exp(-2.0 * r)) - np.log(2.0)
    log_t2 = 2.0 * np.log(t)
    if kind == "tmsv":
        return n * log_t2 - 2.0 * lc
    if kind == "tps":
        return 2.0 * np.log1p(n) + n * log_t2 - 6.0 * lc - np.log1p(t * t)
    # a^dag on mode a: weights (n+1) t^{2n} / cosh^4 r
    return np.log1p(n) + n * log_t2 - 4.0 * lc


def auto_cutoff(kind, r, tol=1e-12, amplitude=False):
    """Smallest cutoff whose discarded tail is below ``tol``, clamped to [20, 400].

    With ``amplitude`` set the rule bounds the tail of the amplitude sum
    ``sum_n c_n`` relative to the full sum, which is what the logarithmic
    negativity needs.
    """
    kind = _resource_name(kind)
    if r <= 0:
        return MIN_CUTOFF
    n = np.arange(MAX_CUTOFF + 1)
    logp = _resource_log_probs(kind, r, n)
    w = np.exp(0.5 * logp) if amplitude else np.exp(logp)
    tail = np.cumsum(w[::-1])[::-1] / np.sum(w)
    ok = np.nonzero(tail < tol)[0]
    # the photon-added state occupies one extra level on mode a
    extra = 2 if kind == "photon_added" else 1
    n_cut = ok[0] + extra if ok.size else MAX_CUTOFF
    return int(min(max(n_cut, MIN_CUTOFF), MAX_CUTOFF))


def _resource_name(kind):
    if isinstance(kind, ResourceKind):
        return kind.value
    name = getattr(kind, "value", kind)
    name = str(name).lower()
    if name in ("pa", "photonadded", "photon-added"):
        name = "photon_added"
    if name not in RESOURCE_NAMES:
        raise ValidationError(f"unknown resource {kind!r}")
    return name


def _with_health(builder, cutoff, label, auto):
    """Call ``builder(cutoff)`` and raise the cutoff until the tail is small."""
    while True:
        state = FockState(builder(cutoff), label).normalize()
        if state.healthy():
            return state
        if not auto or cutoff >= MAX_CUTOFF:
            raise TruncationError(f"{label}: tail mass {state.tail_mass():.3e} at cutoff {cutoff}")
        cutoff = min(MAX_CUTOFF, 2 * cutoff)


def build_resource(kind, r, phi=0.0, cutoff=None):
    """Two-mode resource built from the squeezing generator.

    ``kind`` is ``tmsv``, ``tps`` (``a b S(xi)|0,0>``) or ``photon_added``
    (``a^dag S(xi)|0,0>``).
    """
    name = _resource_name(kind)
    sq = SqueezeParams(r, phi)
    if name == "tps" and r <= 0:
        raise DomainError("photon subtraction needs r > 0")
    auto = cutoff is None
    cutoff = auto_cutoff(name, r) if auto else int(cutoff)
    xi = r * np.exp(1j * phi)

    def make(n):
        if name == "tmsv":
            return two_mode_squeezed_column(xi, n)
        if name == "tps":
            psi = two_mode_squeezed_column(xi, n + 1)
            psi = apply_lowering(apply_lowering(psi, 0), 1)
            return psi[: n + 1, : n + 1]
        psi = two_mode_squeezed_column(xi, n)
        psi[-1, :] = 0.0
        return apply_raising(psi, 0)

    return _with_health(make, cutoff, f"{name}(r={sq.r!r}, phi={sq.phi!r})", auto)


def _coherent_column(alpha, cutoff):
    return displacement_matrix(alpha, cutoff + 1, 1)[:, 0]


def build_input(inp, cutoff=None):
    """Single-mode input state from operator primitives.

    The squeezed vacuum carries the phase convention of its closed-form
    characteristic function, which corresponds to ``S(rho e^{i(phase+pi)})|0>``.
    """
    auto = cutoff is None
    cutoff = MIN_CUTOFF if auto else int(cutoff)
    if isinstance(inp, Coherent):
        make = lambda n: _coherent_column(inp.alpha0, n)
    elif isinstance(inp, SqueezedVacuum):
        make = lambda n: single_mode_squeezed_column(inp.rho * np.exp(1j * (inp.phase + np.pi)), n)
    elif isinstance(inp, CatLike):

        def make(n):
            xi = inp.rho * np.exp(1j * inp.phase)
            if inp.rho == 0:
                # normalised rho -> 0 limit of a S(xi)|0>, which is |1>
                col = np.zeros(n + 1, dtype=complex)
                col[1] = 1.0
                return col
            col = single_mode_squeezed_column(xi, n + 1)
            return apply_lowering(col)[: n + 1]

    elif isinstance(inp, IdealCat):

        def make(n):
            return _coherent_column(inp.alpha0, n) + np.exp(1j * inp.theta) * _coherent_column(-inp.alpha0, n)

    else:
        raise ValidationError(f"unsupported input state {inp!r}")
    return _with_health(make, cutoff, repr(inp), auto)


def build_state(descriptor, params=None, cutoff=None):
    """Dispatch to :func:`build_resource` or :func:`build_input`.

    ``descriptor`` is either an input dataclass or a resource name/kind, in
    which case ``params`` is a :class:`SqueezeParams`.
    """
    if isinstance(descriptor, (Coherent, SqueezedVacuum, CatLike, IdealCat)):
        return build_input(descriptor, cutoff)
    if params is None:
        raise ValidationError("resource states need SqueezeParams")
    return build_resource(descriptor, params.r, params.phi, cutoff)


def vacuum(modes=2, cutoff=MIN_CUTOFF):
    psi = np.zeros((cutoff + 1,) * modes, dtype=complex)
    psi[(0,) * modes] = 1.0
    return FockState(psi, "vacuum")


# ---------------------------------------------------------------------------
# heralding


@lru_cache(maxsize=512)
def _tap_amplitude(n, theta):
    """``<n-1, 1| exp(theta (a^dag c - a c^dag)) |n, 0>`` in the total-``n`` block."""
    k = np.arange(n + 1)  # photons in the ancilla
    na = n - k
    # a^dag c |na, k> = sqrt(na+1) sqrt(k) |na+1, k-1>
    up = np.sqrt((na[1:] + 1.0) * k[1:])
    gen = np.zeros((n + 1, n + 1))
    gen[np.arange(n), np.arange(1, n + 1)] = up
    gen -= gen.T
    return float(linalg.expm(theta * gen)[1, 0])


def tap_operator(transmissivity, cutoff):
    """Kraus operator on one mode for a single photon detected in the tap.

    The joint mode-ancilla unitary is exponentiated exactly in every
    total-photon block, so no ancilla truncation is involved.
    """
    theta = float(np.arccos(np.sqrt(transmissivity)))
    m = np.zeros((cutoff + 1, cutoff + 1))
    for n in range(1, cutoff + 1):
        m[n - 1, n] = _tap_amplitude(n, theta)
    return m


def herald_tps(sq, setup=None):
    """Subtract one photon from each resource mode by heralded tap-off.

    Returns
    -------
    (FockState, float)
        The normalised heralded state and the coincidence probability.
    """
    setup = setup or HeraldingSetup()
    if not sq.r > 0:
        raise DomainError("heralded subtraction needs r > 0")
    cutoff = setup.cutoff or auto_cutoff("tmsv", sq.r, tol=1e-14)
    tmsv = build_resource("tmsv", sq.r, sq.phi, cutoff)
    k = tap_operator(setup.transmissivity, tmsv.cutoff)
    out = k @ tmsv.amplitudes @ k.T
    prob = float(np.sum(np.abs(out) ** 2))
    if prob < 1e-30:
        raise HeraldError(f"coincidence probability {prob:.3e} vanishes")
    return FockState(out / np.sqrt(prob), f"heralded(r={sq.r!r}, T={setup.transmissivity!r})"), prob


# ---------------------------------------------------------------------------
# numeric evaluators


def overlap(s1, s2):
    """``<s1|s2>``, zero-padding the smaller cutoff."""
    if s1.modes != s2.modes:
        raise ValidationError("overlap needs states with the same number of modes")
    n = max(s1.cutoff, s2.cutoff)
    a, b = s1.resize(n).amplitudes, s2.resize(n).amplitudes
    return complex(np.vdot(a, b))


def _window_check(state, *alphas):
    limit = state.cutoff / 4.0
    for a in alphas:
        if abs(a) ** 2 > limit:
            warnings.warn(
                f"|alpha|^2={abs(a) ** 2:.3g} exceeds the reliable window cutoff/4={limit:.3g}",
                TruncationWarning,
                stacklevel=3,
            )


def numeric_characteristic(state, alpha1, alpha2=None):
    """``<D(alpha1)>`` or ``<D_a(alpha1) D_b(alpha2)>`` in the truncated state."""
    psi = state.amplitudes
    n = state.cutoff + 1
    if state.modes == 1:
        _window_check(state, alpha1)
        return complex(np.vdot(psi, displacement_matrix(alpha1, n) @ psi))
    if alpha2 is None:
        raise ValidationError("two-mode characteristic functions need two arguments")
    _window_check(state, alpha1, alpha2)
    da = displacement_matrix(alpha1, n)
    db = displacement_matrix(alpha2, n)
    return complex(np.vdot(psi, da @ psi @ db.T))


def resource_characteristic(state, alpha1, alpha2):
    """Resource characteristic function in the b-mirrored frame of
    :func:`cvteleport.states.chi_resource`: ``<D_a(alpha1) D_b(-alpha2)>``."""
    return numeric_characteristic(state, alpha1, -complex(alpha2))


def _parity(n):
    return 1.0 - 2.0 * (np.arange(n) % 2)


def numeric_wigner(state, alpha, beta=None):
    """Wigner function from the displaced-parity expectation.

    ``alpha`` (and ``beta`` for two modes) may be arrays of equal shape.
    """
    psi = state.amplitudes
    n = state.cutoff + 1
    alpha = np.asarray(alpha, dtype=complex)
    if state.modes == 2:
        if beta is None:
            raise ValidationError("two-mode Wigner functions need alpha and beta")
        beta = np.broadcast_to(np.asarray(beta, dtype=complex), alpha.shape)
    out = np.empty(alpha.shape)
    for idx in np.ndindex(alpha.shape):
        a = complex(alpha[idx])
        if state.modes == 1:
            _window_check(state, a)
            rows = _displaced_rows(state.cutoff, a)
            phi = displacement_matrix(-a, rows, n) @ psi
            out[idx] = 2.0 / np.pi * np.dot(_parity(rows), np.abs(phi) ** 2)
        else:
            b = complex(beta[idx])
            _window_check(state, a, b)
            ra = _displaced_rows(state.cutoff, a)
            rb = _displaced_rows(state.cutoff, b)
            phi = displacement_matrix(-a, ra, n) @ psi @ displacement_matrix(-b, rb, n).T
            out[idx] = (2.0 / np.pi) ** 2 * (_parity(ra) @ (np.abs(phi) ** 2) @ _parity(rb))
    return float(out) if out.ndim == 0 else out


def hermite_functions(x, n):
    """Harmonic-oscillator eigenfunctions ``psi_k(x)``, k < n, for
    ``x = (a + a^dag)/sqrt 2``. Shape ``(n,) + x.shape``."""
    x = np.asarray(x, dtype=float)
    h = np.empty((n,) + x.shape)
    h[0] = np.pi**-0.25 * np.exp(-0.5 * x * x)
    if n > 1:
        h[1] = np.sqrt(2.0) * x * h[0]
    for k in range(1, n - 1):
        h[k + 1] = np.sqrt(2.0 / (k + 1)) * x * h[k] - np.sqrt(k / (k + 1.0)) * h[k - 1]
    return h


def numeric_quadrature(state, xa, xb=None):
    """Position-representation amplitude from the Hermite-function expansion."""
    n = state.cutoff + 1
    xa = np.asarray(xa, dtype=float)
    limit = np.sqrt(2.0 * state.cutoff)
    if np.any(np.abs(xa) > limit) or (xb is not None and np.any(np.abs(np.asarray(xb)) > limit)):
        warnings.warn(f"quadrature point beyond sqrt(2 cutoff)={limit:.3g}", TruncationWarning, stacklevel=2)
    ha = hermite_functions(xa, n)
    if state.modes == 1:
        return np.tensordot(state.amplitudes, ha, axes=(0, 0))
    xb = np.broadcast_to(np.asarray(xb, dtype=float), xa.shape)
    hb = hermite_functions(xb, n)
    return np.einsum("jk,j...,k...->...", state.amplitudes, ha, hb)


def numeric_squeezing(state, theta):
    """Variance of ``X_theta`` of ``d = (a+b)/sqrt 2`` minus the vacuum value 1/2."""
    if state.modes != 2:
        raise ValidationError("two-mode squeezing needs a two-mode state")
    psi = state.normalize().amplitudes
    dpsi = (apply_lowering(psi, 0) + apply_lowering(psi, 1)) / np.sqrt(2.0)
    ddpsi = (apply_lowering(dpsi, 0) + apply_lowering(dpsi, 1)) / np.sqrt(2.0)
    n_d = np.vdot(dpsi, dpsi).real
    d2 = np.vdot(psi, ddpsi)
    d1 = np.vdot(psi, dpsi)
    ph = np.exp(-1j * theta)
    x2 = np.real(ph * ph * d2) + n_d + 0.5
    x1 = np.sqrt(2.0) * np.real(ph * d1)
    return float(x2 - x1 * x1 - 0.5)


def _pt_eigenvalues_sparse(psi):
    """Eigenvalues of the partial transpose of ``|psi><psi|`` on mode b.

    ``<i,l|rho^T_b|k,j> = psi[i,j] psi[k,l]^*``; only nonzero amplitudes
    contribute, and the matrix splits into connected blocks that are
    diagonalised independently.
    """
    dim = psi.shape[1]
    ii, jj = np.nonzero(psi)
    vals = psi[ii, jj]
    i_, k_ = np.meshgrid(np.arange(ii.size), np.arange(ii.size), indexing="ij")
    i_, k_ = i_.ravel(), k_.ravel()
    rows = ii[i_] * dim + jj[k_]  # |i, l> with l = j of the second factor
    cols = ii[k_] * dim + jj[i_]  # |k, j>
    data = vals[i_] * np.conj(vals[k_])
    size = psi.shape[0] * dim
    mat = sparse.coo_matrix((data, (rows, cols)), shape=(size, size)).tocsr()
    mat.sum_duplicates()
    pattern = sparse.csr_matrix((np.ones(mat.nnz), mat.indices, mat.indptr), shape=mat.shape)
    ncomp, labels = csgraph.connected_components(pattern, directed=False)
    order = np.argsort(labels, kind="stable")
    counts = np.bincount(labels, minlength=ncomp)
    starts = np.concatenate(([0], np.cumsum(counts)))
    eig = []
    for s in np.unique(counts):
        comps = np.nonzero(counts == s)[0]
        idx = order[starts[comps][:, None] + np.arange(s)[None, :]]
        r = np.broadcast_to(idx[:, :, None], (comps.size, s, s)).ravel()
        c = np.broadcast_to(idx[:, None, :], (comps.size, s, s)).ravel()
        blocks = np.asarray(mat[r, c]).reshape(comps.size, s, s)
        eig.append(np.linalg.eigvalsh(blocks).ravel())
    return np.concatenate(eig)


def numeric_logneg(state):
    """Logarithmic negativity ``log2(1 + 2 |sum of negative PT eigenvalues|)``."""
    try:
        if isinstance(state, DensityMatrix):
            ev = np.linalg.eigvalsh(state.partial_transpose())
        elif state.modes == 2:
            ev = _pt_eigenvalues_sparse(state.normalize().amplitudes)
        else:
            raise ValidationError("logarithmic negativity needs a two-mode state")
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigen-decomposition failed: {exc}") from exc
    neg = ev[ev < -PT_ZERO]
    return float(np.log2(1.0 + 2.0 * abs(np.sum(neg))))


@lru_cache(maxsize=1024)
def _mixing_block(n):
    """``exp(-(pi/4)(a^dag b - a b^dag)) (-1)^{n_b}`` on the total-``n`` block,
    basis ``|n-k, k>``, k = 0..n."""
    k = np.arange(n + 1)
    gen = np.zeros((n + 1, n + 1))
    # a^dag b |n-k, k> = sqrt(n-k+1) sqrt(k) |n-k+1, k-1>
    gen[k[1:] - 1, k[1:]] = np.sqrt((n - k[1:] + 1.0) * k[1:])
    gen -= gen.T
    return linalg.expm(-0.25 * np.pi * gen) * _parity(n + 1)[None, :]


def basis_change_5050(state):
    """Rewrite a two-mode state in the modes ``a_pm = (a +- b)/sqrt 2``.

    The output cutoff doubles so that the mixing, which conserves total
    photon number, is represented exactly.
    """
    if state.modes != 2:
        raise ValidationError("the 50:50 basis change needs a two-mode state")
    psi = state.amplitudes
    n_in = state.cutoff
    n_out = 2 * n_in
    out = np.zeros((n_out + 1, n_out + 1), dtype=complex)
    for tot in range(2 * n_in + 1):
        k = np.arange(max(0, tot - n_in), min(tot, n_in) + 1)
        v = np.zeros(tot + 1, dtype=complex)
        v[k] = psi[tot - k, k]
        if not np.any(v):
            continue
        w = _mixing_block(tot) @ v
        kk = np.arange(tot + 1)
        out[tot - kk, kk] = w
    return FockState(out, f"pm-basis({state.label})")


def product_squeezed(xi_plus, xi_minus, cutoff):
    """``S_+(xi_plus) S_-(xi_minus) |0, 0>`` as a two-mode tensor."""
    return FockState(
        np.outer(single_mode_squeezed_column(xi_plus, cutoff), single_mode_squeezed_column(xi_minus, cutoff)),
        "product-squeezed",
    )


def pm_tps_construction(r, phi, cutoff):
    """Normalised ``(a_+^2 - a_-^2)/2`` applied to ``S_+(xi) S_-(-xi)|0,0>``."""
    xi = r * np.exp(1j * phi)
    psi = product_squeezed(xi, -xi, cutoff + 2).amplitudes
    out = 0.5 * (apply_lowering(apply_lowering(psi, 0), 0) - apply_lowering(apply_lowering(psi, 1), 1))
    return FockState(out[: cutoff + 1, : cutoff + 1], "pm-tps").normalize()


def optimize_cat_rho(alpha0=1.0, theta=np.pi, cutoff=60, xtol=1e-4):
    """Squeezing ``rho`` in [0, 1] maximising ``|<Psi_cat|Phi_cat(rho)>|^2``.

    The squeezing phase follows the cat orientation, ``2 arg(alpha0)``.
    Returns ``(rho_star, fidelity)``.
    """
    target = build_input(IdealCat(alpha0, theta), cutoff)
    phase = 2.0 * np.angle(alpha0)

    def loss(rho):
        return -abs(overlap(target, build_input(CatLike(abs(rho), phase)))) ** 2

    grid = np.linspace(0.0, 1.0, 21)
    vals = np.array([loss(g) for g in grid])
    i = int(np.argmin(vals))
    if i == 0 or i == grid.size - 1:
        raise NumericError(f"cat fidelity has no interior maximum in [0, 1] (best at rho={grid[i]})")
    rho = optimize.golden(loss, brack=(grid[i - 1], grid[i], grid[i + 1]), tol=xtol)
    return float(rho), float(-loss(rho))
