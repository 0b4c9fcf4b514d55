"""Truncated Fock-space states and operators.

Everything here works on a number basis ``|0>, ..., |N>`` where ``N`` is the
cutoff.  Two independent routes to displacement matrix elements live side by
side:

* :func:`displacement_operator` builds ``D(alpha)`` from the normally ordered
  product ``exp(-|alpha|^2/2) exp(alpha a+) exp(-alpha* a)`` on a padded
  space.  It is the brute-force oracle.
* :func:`displacement_elements` evaluates ``<m|D(beta)|n>`` with a three-term
  Laguerre recurrence.  The analytic modules build on it.

Displacements compose as ``D(a) D(b) = exp(i Im(a b*)) D(a + b)``.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .errors import InsufficientCutoffError

NORM_TOL = 1e-10
UNITARY_TOL = 1e-9
ORACLE_TOL = 1e-9


def _frozen(array, dtype=complex):
    out = np.array(array, dtype=dtype)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class CutoffPolicy:
    """Rule for choosing a Fock cutoff that keeps truncation error negligible.

    A displacement of size ``|alpha|`` acting on states with at most
    ``n_max`` photons needs

        N >= ceil(|alpha|^2 + 6|alpha| + 2|alpha| sqrt(n_max)) + n_max + base_pad

    The ``sqrt(n_max)`` term tracks the outer turning point
    ``(sqrt(n) + |alpha|)^2`` of a displaced number state.
    """

    base_pad: int = 10
    tail_tol: float = 1e-9

    def pad(self, alpha, n_max=0):
        a = abs(alpha)
        return math.ceil(a * a + 6 * a + 2 * a * math.sqrt(n_max)) + self.base_pad

    def cutoff_for(self, alpha, n_max=0):
        return n_max + self.pad(alpha, n_max)

    def interior(self, cutoff, alpha):
        """Largest ``n_max`` for which ``cutoff`` satisfies the policy (``-1`` if none)."""
        n = -1
        while self.cutoff_for(alpha, n + 1) <= cutoff:
            n += 1
        return n

    def squeeze_pad(self, r):
        th = math.tanh(abs(r))
        if th == 0.0:
            return self.base_pad
        # squeezed-vacuum populations fall off like tanh(r)^(2k) in k pairs
        return 2 * math.ceil(math.log(self.tail_tol) / (2 * math.log(th))) + self.base_pad

    def squeeze_cutoff(self, r, n_max=0):
        # squeezing stretches |n> over roughly n e^(2r) photons
        return n_max + self.squeeze_pad(r) + math.ceil(2 * n_max * math.exp(2 * abs(r)))

    def check(self, cutoff, alpha, n_max=0):
        need = self.cutoff_for(alpha, n_max)
        if cutoff < need:
            raise InsufficientCutoffError(
                f"insufficient cutoff: {cutoff} < {need} for |alpha|={abs(alpha):.6g}, "
                f"n_max={n_max}",
                minimal_cutoff=need,
            )


DEFAULT_POLICY = CutoffPolicy()


@dataclass(frozen=True)
class FockVector:
    """Pure single-mode state; ``amplitudes[n]`` is the amplitude of ``|n>``."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim != 1 or amps.size == 0:
            raise ValueError("FockVector needs a non-empty 1-D amplitude array")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def cutoff(self):
        return self.amplitudes.size - 1

    def norm_squared(self):
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def normalized(self):
        return FockVector(self.amplitudes / math.sqrt(self.norm_squared()))

    def tail_mass(self):
        return float(abs(self.amplitudes[-1]) ** 2)

    def padded(self, cutoff):
        if cutoff < self.cutoff:
            raise ValueError("padded() cannot shrink a vector")
        out = np.zeros(cutoff + 1, dtype=complex)
        out[: self.amplitudes.size] = self.amplitudes
        return FockVector(out)


@dataclass(frozen=True)
class MultiModeState:
    """Pure M-mode state stored as a dense amplitude tensor.

    Axis ``k`` of ``amplitudes`` indexes the photon number of mode ``k``.
    Cutoffs may differ from mode to mode.
    """

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim < 1:
            raise ValueError("MultiModeState needs at least one mode")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def mode_count(self):
        return self.amplitudes.ndim

    @property
    def cutoffs(self):
        return tuple(d - 1 for d in self.amplitudes.shape)

    def norm_squared(self):
        a = self.amplitudes.ravel()
        return float(np.vdot(a, a).real)

    def normalized(self):
        return MultiModeState(self.amplitudes / math.sqrt(self.norm_squared()))

    def tail_mass(self, mode):
        edge = np.take(self.amplitudes, -1, axis=mode)
        return float(np.sum(np.abs(edge) ** 2))

    @classmethod
    def product(cls, *states):
        """Tensor product of single-mode vectors and/or multi-mode states."""
        out = np.ones((), dtype=complex)
        for st in states:
            out = np.multiply.outer(out, st.amplitudes)
        return cls(out)


@dataclass(frozen=True)
class OperatorMatrix:
    """Truncated operator matrix.

    For ``unitary=True`` the matrix is only trusted to be unitary on the
    interior block ``0..cutoff - pad``.
    """

    entries: np.ndarray
    unitary: bool = False
    pad: int = 0
    _meta: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen(self.entries))

    @property
    def cutoff(self):
        return self.entries.shape[0] - 1

    @property
    def interior(self):
        return self.cutoff - self.pad

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)

    def apply(self, state):
        if state.cutoff != self.cutoff:
            raise ValueError("operator and state cutoffs differ")
        return FockVector(self.entries @ state.amplitudes)

    def unitarity_deviation(self, block=None):
        k = (self.interior if block is None else block) + 1
        m = self.entries[:, :k]
        return float(np.max(np.abs(m.conj().T @ m - np.eye(k))))


def ladder_matrices(cutoff):
    """Annihilation and creation operators ``(a, a+)`` on ``0..cutoff``."""
    if cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    a = np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), 1).astype(complex)
    return OperatorMatrix(a), OperatorMatrix(a.conj().T)


def _lower_elements(beta, rows, cols):
    """``<n+k|D(beta)|n>`` for all ``n+k <= rows``, ``n <= cols``; zero above the diagonal."""
    x = abs(beta) ** 2
    out = np.zeros((rows + 1, cols + 1), dtype=complex)
    lead = complex(math.exp(-x / 2))
    for k in range(rows + 1):
        if k:
            lead *= beta / math.sqrt(k)
        top = min(cols, rows - k)
        # g[j] = sqrt(j!/(j+k)!) L_j^(k)(x) * sqrt(k!), bounded for all j
        g = np.empty(top + 1)
        g[0] = 1.0
        if top >= 1:
            g[1] = (1 + k - x) / math.sqrt(k + 1)
        for j in range(1, top):
            g[j + 1] = ((2 * j + 1 + k - x) * g[j] - math.sqrt(j * (j + k)) * g[j - 1]) / math.sqrt(
                (j + 1) * (j + 1 + k))
        n = np.arange(top + 1)
        out[n + k, n] = lead * g
    return out


def displacement_elements(beta, rows, cols=None):
    """Exact matrix elements ``<m|D(beta)|n>`` for ``m <= rows``, ``n <= cols``.

    Each diagonal ``m - n = k`` is an associated Laguerre sequence in ``n``;
    it is generated by the normalized three-term recurrence, which stays
    accurate to ~1e-15 relative for cutoffs in the hundreds.  The upper
    triangle follows from ``<m|D(beta)|n> = conj(<n|D(-beta)|m>)``.  No
    truncation is involved, so any rectangular block is exact up to rounding.
    """
    cols = rows if cols is None else cols
    beta = complex(beta)
    out = _lower_elements(beta, rows, cols)
    if cols > 0:
        upper = _lower_elements(-beta, cols, rows).conj().T
        iu = np.triu_indices(rows + 1, 1, cols + 1)
        out[iu] = upper[iu]
    return out


def _raising_exp(alpha, size):
    """``exp(alpha a+)`` on ``0..size-1`` in extended precision.

    The series terminates: term ``k`` is ``(alpha a+)^k / k!``, which lives
    on the ``k``-th sub-diagonal with entries ``alpha^k sqrt(m!/(m-k)!) / k!``.
    """
    alpha = np.clongdouble(alpha)
    out = np.zeros((size, size), dtype=np.clongdouble)
    m = np.arange(size, dtype=np.longdouble)
    coef = np.ones(size, dtype=np.clongdouble)
    for k in range(size):
        # coef[m] = alpha^k sqrt(m!/(m-k)!) / k!  for rows m >= k
        idx = np.arange(k, size)
        out[idx, idx - k] = coef[k:]
        if k + 1 < size:
            coef = coef * alpha * np.sqrt(np.maximum(m - k, 0)) / (k + 1)
    return out


def displacement_operator(alpha, cutoff, n_max=0, policy=DEFAULT_POLICY):
    """Brute-force ``D(alpha) = exp(alpha a+ - alpha* a)`` truncated to ``0..cutoff``.

    Built from the normally ordered factors on a space padded by
    ``base_pad + ceil(4|alpha|)``, then cropped.
    """
    policy.check(cutoff, alpha, n_max)
    alpha = complex(alpha)
    big = cutoff + policy.base_pad + math.ceil(4 * abs(alpha))
    # extended precision: the product cancels badly for large |alpha|
    left = _raising_exp(alpha, big + 1)
    right = _raising_exp(-alpha, big + 1).conj().T
    d = np.exp(np.longdouble(-abs(alpha) ** 2 / 2)) * (left @ right)
    d = d.astype(complex)
    return OperatorMatrix(d[: cutoff + 1, : cutoff + 1], unitary=True,
                          pad=cutoff - policy.interior(cutoff, alpha))


def fock_state(n, cutoff):
    if not 0 <= n <= cutoff:
        raise ValueError(f"|{n}> does not fit under cutoff {cutoff}")
    v = np.zeros(cutoff + 1, dtype=complex)
    v[n] = 1.0
    return FockVector(v)


def coherent_state(alpha, cutoff):
    """``|0, alpha>`` from its closed-form number expansion."""
    return FockVector(displacement_elements(alpha, cutoff, 0)[:, 0])


def displaced_number_state(n, alpha, cutoff, policy=DEFAULT_POLICY):
    """``|n, alpha> = D(alpha)|n>``, taken as column ``n`` of the oracle."""
    policy.check(cutoff, alpha, n)
    d = displacement_operator(alpha, cutoff, n_max=n, policy=policy)
    return FockVector(d.entries[:, n])


def mean_photon_number(state, norm_tol=1e-8):
    p = np.abs(state.amplitudes) ** 2
    if abs(p.sum() - 1.0) > norm_tol:
        raise ValueError(f"state is not normalized (norm^2 = {p.sum():.12g})")
    return float(np.dot(np.arange(p.size), p))


def tmsv_minimal_cutoff(r, tail_tol):
    th = math.tanh(r)
    if th == 0.0:
        return 0
    # discarded mass is tanh(r)^(2(N+1))
    return max(0, math.ceil(math.log(tail_tol) / (2 * math.log(th))) - 1)


def tmsv_state(r, cutoffs, policy=DEFAULT_POLICY):
    """Two-mode squeezed vacuum ``sum_n tanh(r)^n |n>|n> / cosh(r)``."""
    if r < 0:
        raise ValueError("squeezing r must be non-negative")
    n1, n2 = cutoffs
    n = min(n1, n2)
    need = tmsv_minimal_cutoff(r, policy.tail_tol)
    if n < need:
        raise InsufficientCutoffError(
            f"insufficient cutoff: TMSV with r={r} needs cutoff >= {need} per mode "
            f"for tail_tol={policy.tail_tol:g}",
            minimal_cutoff=need,
        )
    amps = np.zeros((n1 + 1, n2 + 1), dtype=complex)
    k = np.arange(n + 1)
    amps[k, k] = math.tanh(r) ** k / math.cosh(r)
    return MultiModeState(amps)


def single_mode_squeeze(r, cutoff, n_max=0, policy=DEFAULT_POLICY):
    """``S(r) = exp(r (a+^2 - a^2) / 2)`` truncated to ``0..cutoff``.

    The exponential is taken on a space enlarged by ``policy.squeeze_pad(r)``
    and cropped.
    """
    need = policy.squeeze_cutoff(r, n_max)
    if cutoff < need:
        raise InsufficientCutoffError(
            f"insufficient cutoff: {cutoff} < {need} for squeezing r={r}",
            minimal_cutoff=need)
    big = cutoff + policy.squeeze_pad(r)
    a, ad = ladder_matrices(big)
    gen = 0.5 * r * (ad.entries @ ad.entries - a.entries @ a.entries)
    s = expm(gen)[: cutoff + 1, : cutoff + 1]
    return OperatorMatrix(s, unitary=True, pad=cutoff - n_max)


def inner_product(x, y):
    if x.amplitudes.shape != y.amplitudes.shape:
        raise ValueError(
            f"shape mismatch: {x.amplitudes.shape} vs {y.amplitudes.shape}")
    return complex(np.vdot(x.amplitudes.ravel(), y.amplitudes.ravel()))


def fidelity(x, y, norm_tol=1e-6):
    """``|<x|y>|^2`` for two normalized pure states of identical shape."""
    for s in (x, y):
        if abs(s.norm_squared() - 1.0) > norm_tol:
            raise ValueError(f"fidelity needs normalized states (norm^2 = {s.norm_squared():.12g})")
    return abs(inner_product(x, y)) ** 2
