"""Basis change between displaced number bases and the alpha-representation.

A pure state written as ``sum_m a_m |m, alpha'>`` is re-expanded as
``sum_k b_k |k, alpha>`` with ``b = F U^T a``.  ``U`` (with the scalar ``F``
fused in) has entries ``<k, alpha | l, alpha'>``.  The ``alpha' = 0``
direction has the closed form :func:`coefficient_c`.
"""

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from .errors import InsufficientCutoffError
from .fock import DEFAULT_POLICY, FockVector, _frozen, displacement_elements


def coefficient_c(l, n, alpha):
    """Closed-form ``c_ln(alpha)`` with ``|l> = exp(-|alpha|^2/2) sum_n c_ln |n, alpha>``.

    With ``p = min(l, n)``, ``q = max(l, n)`` and ``x = |alpha|^2``::

        c_ln = phase * |alpha|^(q-p) / sqrt(l! n!)
               * sum_{k=0}^{p} (-1)^k C(p, k) x^k prod_{j=k}^{p-1} (q - p + j + 1)

    where ``phase = (alpha*/|alpha|)^(l-n)`` for ``n < l`` and
    ``(-alpha/|alpha|)^(n-l)`` otherwise.  The alternating sum equals
    ``p! L_p^(q-p)(x)``; it is evaluated through the generalized Laguerre
    recurrence because the term-by-term sum cancels catastrophically for
    large indices.
    """
    if l < 0 or n < 0:
        raise ValueError("indices must be non-negative")
    alpha = complex(alpha)
    x = abs(alpha) ** 2
    if x == 0.0:
        return complex(l == n)
    p, q = min(l, n), max(l, n)
    log_pref = (q - p) * 0.5 * math.log(x) + 0.5 * (gammaln(p + 1) - gammaln(q + 1))
    total = math.exp(log_pref) * float(eval_genlaguerre(p, q - p, x))
    unit = alpha / abs(alpha)
    phase = unit.conjugate() ** (l - n) if n < l else (-unit) ** (n - l)
    return phase * total


@dataclass(frozen=True)
class TransformMatrix:
    """``U`` connecting ``{|l, alpha_to>}`` (rows) to ``{|k, alpha_from>}`` (columns).

    ``entries[l, k] = <k, alpha_from | l, alpha_to>`` and already contains
    ``prefactor_F = exp(-(|alpha_from|^2 + |alpha_to|^2)/2) exp(alpha_to alpha_from*)``,
    so ``|l, alpha_to> = sum_k entries[l, k] |k, alpha_from>``.
    """

    alpha_to: complex
    alpha_from: complex
    entries: np.ndarray
    prefactor_F: complex

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen(self.entries))

    @property
    def cutoff(self):
        return self.entries.shape[0] - 1

    @property
    def coefficients(self):
        """Matrix elements ``c_lk(alpha_to, alpha_from)`` with ``F`` divided out."""
        return self.entries / self.prefactor_F

    def unitarity_deviation(self, block):
        u = self.entries[: block + 1, :]
        return float(np.max(np.abs(u @ u.conj().T - np.eye(block + 1))))


def _basis_phase(alpha_to, alpha_from):
    # D(-a) D(a') = exp(i Im(-a a'*)) D(a' - a)
    return cmath.exp(1j * (-alpha_from * alpha_to.conjugate()).imag)


def transform_matrix(alpha_to, alpha_from, cutoff, policy=DEFAULT_POLICY):
    alpha_to, alpha_from = complex(alpha_to), complex(alpha_from)
    policy.check(cutoff, alpha_to - alpha_from)
    e = displacement_elements(alpha_to - alpha_from, cutoff, cutoff)
    f = cmath.exp(-(abs(alpha_from) ** 2 + abs(alpha_to) ** 2) / 2
                  + alpha_to * alpha_from.conjugate())
    return TransformMatrix(alpha_to, alpha_from,
                           _basis_phase(alpha_to, alpha_from) * e.T, f)


@dataclass(frozen=True)
class AlphaRepresentation:
    """Amplitudes ``b`` of a state in the displaced basis ``{|n, alpha>}``."""

    alpha: complex
    amplitudes: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", _frozen(self.amplitudes))

    @property
    def cutoff(self):
        return self.amplitudes.size - 1

    def probabilities(self):
        return np.abs(self.amplitudes) ** 2

    def norm_squared(self):
        return float(self.probabilities().sum())


def change_basis(amplitudes, alpha_from, alpha_to, cutoff=None, policy=DEFAULT_POLICY):
    """Re-expand ``sum_m a_m |m, alpha_from>`` over ``{|k, alpha_to>}``, ``k <= cutoff``.

    Refuses (``InsufficientCutoffError``) when more than ``policy.tail_tol``
    of the norm falls beyond ``cutoff``.
    """
    a = np.asarray(amplitudes, dtype=complex)
    alpha_from, alpha_to = complex(alpha_from), complex(alpha_to)
    shift = alpha_from - alpha_to
    n_in = a.size - 1
    if cutoff is None:
        cutoff = policy.cutoff_for(shift, n_in)
    # b_k = sum_l <k, alpha_to | l, alpha_from> a_l
    e = displacement_elements(shift, cutoff, n_in)
    b = _basis_phase(alpha_from, alpha_to) * (e @ a)
    lost = float(np.vdot(a, a).real) - float(np.vdot(b, b).real)
    if lost > policy.tail_tol:
        raise InsufficientCutoffError(
            f"insufficient cutoff: {lost:.3g} of the norm lies above n={cutoff}",
            minimal_cutoff=policy.cutoff_for(shift, n_in))
    return b


def to_alpha_representation(state, alpha, source_alpha=0.0, cutoff=None, policy=DEFAULT_POLICY):
    """alpha-representation of ``state``, whose amplitudes refer to ``{|m, source_alpha>}``."""
    b = change_basis(state.amplitudes, source_alpha, alpha, cutoff, policy)
    return AlphaRepresentation(complex(alpha), b)


def from_alpha_representation(rep, target_alpha=0.0, cutoff=None, policy=DEFAULT_POLICY):
    """Inverse of :func:`to_alpha_representation`; returns amplitudes over ``{|m, target_alpha>}``."""
    return FockVector(change_basis(rep.amplitudes, rep.alpha, target_alpha, cutoff, policy))


def displaced_distribution(state, alpha, n_max, policy=DEFAULT_POLICY):
    """``P_n = |<n, alpha|state>|^2`` for ``n <= n_max``."""
    cutoff = max(n_max, policy.cutoff_for(alpha, state.cutoff))
    b = change_basis(state.amplitudes, 0.0, alpha, cutoff, policy)
    return np.abs(b[: n_max + 1]) ** 2


def count_local_maxima(values, floor=1e-12):
    """Number of strict local maxima, endpoints included, ignoring values below ``floor * max``."""
    v = np.asarray(values, dtype=float)
    thr = floor * v.max()
    count = 0
    for i, x in enumerate(v):
        if x <= thr:
            continue
        left = v[i - 1] if i > 0 else -np.inf
        right = v[i + 1] if i + 1 < v.size else -np.inf
        if x > left and x > right:
            count += 1
    return count
