"""Closed-form alpha-representations of a few useful states.

Covers the balanced vacuum/single-photon superpositions ``Delta_+-``, the
non-Schmidt decomposition of the two-mode squeezed vacuum (TMSV) together
with its intermediate coefficients, and the special amplitudes used by the
gate constructions.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import eval_laguerre, gammaln

from .basis import coefficient_c
from .errors import InsufficientCutoffError
from .fock import (DEFAULT_POLICY, FockVector, _frozen, coherent_state, fidelity,
                   fock_state, single_mode_squeeze)


def _sign_value(sign):
    if sign in ("+", +1, 1):
        return 1
    if sign in ("-", -1):
        return -1
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


@dataclass(frozen=True)
class DeltaSuperposition:
    """``(|0> +- |1>)/sqrt(2)`` expanded over ``{|n, alpha>}``."""

    sign: int
    alpha: complex
    amplitudes: np.ndarray
    probabilities: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", _frozen(self.amplitudes))
        object.__setattr__(self, "probabilities", _frozen(self.probabilities, float))


def delta_probabilities(sign, alpha, n_max):
    """``P_n = exp(-x) x^(n-1) |alpha -+ (n - x)|^2 / (2 n!)`` with ``x = |alpha|^2``.

    The ``n = 0`` entry is written as ``exp(-x) |1 +- alpha*|^2 / 2`` so that
    it stays finite at ``alpha = 0``.
    """
    s = _sign_value(sign)
    alpha = complex(alpha)
    x = abs(alpha) ** 2
    p = np.empty(n_max + 1)
    p[0] = math.exp(-x) * abs(1 + s * alpha.conjugate()) ** 2 / 2
    for n in range(1, n_max + 1):
        core = abs(alpha - s * (n - x)) ** 2
        if x == 0.0:
            p[n] = core / 2 if n == 1 else 0.0
        else:
            p[n] = math.exp(-x + (n - 1) * math.log(x) - gammaln(n + 1)) * core / 2
    return p


def delta_superposition(sign, alpha, cutoff=None, policy=DEFAULT_POLICY):
    s = _sign_value(sign)
    alpha = complex(alpha)
    if cutoff is None:
        cutoff = policy.cutoff_for(alpha, 1)
    policy.check(cutoff, alpha, 1)
    x = abs(alpha) ** 2
    pref = math.exp(-x / 2) / math.sqrt(2)
    b = np.empty(cutoff + 1, dtype=complex)
    b[0] = pref * (1 + s * alpha.conjugate())
    # running value of alpha^(n-1) / sqrt(n!)
    term = 1.0 + 0j
    for n in range(1, cutoff + 1):
        if n > 1:
            term *= alpha
        term /= math.sqrt(n)
        b[n] = pref * (-1) ** n * term * (alpha - s * (n - x))
    return DeltaSuperposition(s, alpha, b, delta_probabilities(s, alpha, cutoff))


def tmsv_delta(r, alpha):
    """``delta = alpha* (1 - tanh^2 r) / tanh r``."""
    if r <= 0:
        raise ValueError("delta is undefined for r <= 0 (division by tanh r)")
    th = math.tanh(r)
    return complex(alpha).conjugate() * (1 - th * th) / th


def alpha_for_delta(r, delta):
    """Inverse of :func:`tmsv_delta`."""
    if r <= 0:
        raise ValueError("r must be positive")
    th = math.tanh(r)
    return complex(delta).conjugate() * th / (1 - th * th)


def norm_factor(n, delta):
    """``N_n = ||(a+ - delta*)^n |0>|| / sqrt(n!) = sqrt(L_n(-|delta|^2))``."""
    return math.sqrt(eval_laguerre(n, -abs(delta) ** 2))


def printed_norm_factor(n, delta):
    """``(1 + sum_l |delta|^(2l) n!/((n-l)! l!))^(1/2)``.

    Kept only to document that this expression differs from the true norm
    for ``n >= 2``; use :func:`norm_factor`.
    """
    return math.sqrt(sum(math.comb(n, l) * abs(delta) ** (2 * l) for l in range(n + 1)))


def _raised_vacuum(n, delta, cutoff):
    """``(a+ - delta*)^n |0> / sqrt(n!)``, built by repeated application."""
    v = np.zeros(cutoff + 1, dtype=complex)
    v[0] = 1.0
    shift = complex(delta).conjugate()
    for k in range(n):
        w = -shift * v
        w[1:] += np.sqrt(np.arange(1, cutoff + 1)) * v[:-1]
        v = w / math.sqrt(k + 1)
    return v


def tmsv_probabilities(delta, r, n_max):
    """``P_n = tanh(r)^(2n) N_n^2 exp(-sinh^2 r |delta|^2) / cosh^2 r``."""
    th = math.tanh(r)
    base = math.exp(-math.sinh(r) ** 2 * abs(delta) ** 2) / math.cosh(r) ** 2
    return np.array([th ** (2 * n) * eval_laguerre(n, -abs(delta) ** 2) * base
                     for n in range(n_max + 1)])


@dataclass(frozen=True)
class TmsvAlphaRep:
    """TMSV written as ``C D1(beta) D2(alpha) sum_n tanh(r)^n N_n |Psi_n>_1 |n>_2``.

    ``beta = alpha* tanh r`` and ``C = exp(-sinh^2 r |delta|^2 / 2) / cosh r``.
    """

    r: float
    alpha: complex
    delta: complex
    N_n: np.ndarray
    psi_n: tuple
    b_n: np.ndarray
    P_n: np.ndarray

    @property
    def beta(self):
        return self.alpha.conjugate() * math.tanh(self.r)


def tmsv_alpha_rep(r, alpha, n_max, cutoff=None, policy=DEFAULT_POLICY):
    alpha = complex(alpha)
    delta = tmsv_delta(r, alpha)
    if cutoff is None:
        cutoff = n_max + policy.base_pad
    if n_max > cutoff - policy.base_pad:
        raise InsufficientCutoffError(
            f"insufficient cutoff: n_max={n_max} needs cutoff >= {n_max + policy.base_pad}",
            minimal_cutoff=n_max + policy.base_pad)
    th = math.tanh(r)
    c = math.exp(-math.sinh(r) ** 2 * abs(delta) ** 2 / 2) / math.cosh(r)
    norms, psis = [], []
    for n in range(n_max + 1):
        v = _raised_vacuum(n, delta, cutoff)
        nn = math.sqrt(float(np.vdot(v, v).real))
        norms.append(nn)
        psis.append(FockVector(v / nn))
    norms = np.array(norms)
    b = c * th ** np.arange(n_max + 1) * norms
    return TmsvAlphaRep(float(r), alpha, delta, _frozen(norms, float), tuple(psis),
                        _frozen(b), _frozen(np.abs(b) ** 2, float))


def tmsv_gamma(r, alpha):
    """``gamma = tanh r / (alpha (tanh^2 r - 1))``."""
    alpha = complex(alpha)
    if alpha == 0:
        raise ValueError("gamma is undefined at alpha = 0")
    th = math.tanh(r)
    return th / (alpha * (th * th - 1))


def tmsv_a_coefficients(r, alpha, n):
    """``a_nk = n!/(n-k)! alpha^(n-k) tanh(r)^k (tanh^2 r - 1)^(n-k) / sqrt(k! n!)``, ``k = 0..n``."""
    alpha = complex(alpha)
    th = math.tanh(r)
    out = np.empty(n + 1, dtype=complex)
    for k in range(n + 1):
        falling = math.exp(gammaln(n + 1) - gammaln(n - k + 1))
        out[k] = (falling * alpha ** (n - k) * th ** k * (th * th - 1) ** (n - k)
                  / math.sqrt(math.factorial(k) * math.factorial(n)))
    return out


def tmsv_b_coefficients(r, alpha, n):
    """``b_nk = a_nk / a_n0 = n!/(n-k)! gamma^k / sqrt(k!)``."""
    g = tmsv_gamma(r, alpha)
    return np.array([math.exp(gammaln(n + 1) - gammaln(n - k + 1)) * g ** k
                     / math.sqrt(math.factorial(k)) for k in range(n + 1)])


def tmsv_intermediate_identities(r, alpha, n, l_max=12):
    """Max deviations of three identities behind the TMSV decomposition.

    * ``raising_power``: ``sum_k b_nk |k>`` against ``(1 + gamma a+)^n |0>`` built by
      repeated operator application.
    * ``leading_product``: ``a_n0 gamma^n`` against ``tanh(r)^n / sqrt(n!)``.
    * ``decomposition``: ``c_ln(alpha) tanh(r)^l`` against ``sum_k a_nk c*_lk(beta)``
      with ``beta = alpha* tanh r``, for ``l <= l_max``.
    """
    if n > 12:
        raise ValueError("identities are checked for n <= 12")
    alpha = complex(alpha)
    th = math.tanh(r)
    g = tmsv_gamma(r, alpha)
    a = tmsv_a_coefficients(r, alpha, n)
    b = tmsv_b_coefficients(r, alpha, n)

    v = np.zeros(n + 1, dtype=complex)
    v[0] = 1.0
    for _ in range(n):
        w = v.copy()
        w[1:] += g * np.sqrt(np.arange(1, n + 1)) * v[:-1]
        v = w
    raising_power = float(np.max(np.abs(v - b)))

    leading_product = abs(a[0] * g ** n - th ** n / math.sqrt(math.factorial(n)))

    beta = alpha.conjugate() * th
    decomposition = 0.0
    for l in range(l_max + 1):
        lhs = coefficient_c(l, n, alpha) * th ** l
        rhs = sum(a[k] * coefficient_c(l, k, beta).conjugate() for k in range(n + 1))
        decomposition = max(decomposition, abs(lhs - rhs))
    return {"decomposition": decomposition, "raising_power": raising_power,
            "leading_product": leading_product}


def magic_alpha():
    """Real amplitude balancing ``|<0, alpha|1>|`` and ``|<1, alpha|1>|``.

    ``c_10 = alpha*`` and ``c_11 = 1 - |alpha|^2``, so equality of magnitudes
    for real positive alpha means ``alpha^2 + alpha - 1 = 0``.
    """
    value = (math.sqrt(5) - 1) / 2
    assert abs(value * value + value - 1) < 1e-15
    assert magic_imbalance(value) < 1e-12
    return value


def magic_imbalance(alpha):
    """``| |c_10(alpha)| - |c_11(alpha)| |``."""
    return abs(abs(coefficient_c(1, 0, alpha)) - abs(coefficient_c(1, 1, alpha)))


def hadamard_alpha(s):
    """``alpha = sinh s cosh s``, the real amplitude giving ``delta = 1`` at squeezing ``s``."""
    if s <= 0:
        raise ValueError("squeezing s must be positive")
    alpha = math.sinh(s) * math.cosh(s)
    assert abs(tmsv_delta(s, alpha) - 1) < 1e-12
    return alpha


def _cat_state(alpha, parity, cutoff):
    plus = coherent_state(alpha, cutoff).amplitudes
    minus = coherent_state(-alpha, cutoff).amplitudes
    v = plus + minus if parity == "even" else plus - minus
    return FockVector(v).normalized()


def scs_approx_fidelity(r, alpha, parity, policy=DEFAULT_POLICY):
    """Fidelity of ``S(r)|0>`` (even) or ``S(r)|1>`` (odd) with the matching cat state.

    An odd cat at ``alpha = 0`` is taken as its limit ``|1>``.
    """
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    n0 = 0 if parity == "even" else 1
    cutoff = max(policy.squeeze_cutoff(r, n0), policy.cutoff_for(alpha))
    squeezed = single_mode_squeeze(r, cutoff, n_max=n0, policy=policy).apply(fock_state(n0, cutoff))
    if alpha == 0:
        cat = fock_state(n0, cutoff)
    else:
        cat = _cat_state(alpha, parity, cutoff)
    return fidelity(squeezed.normalized(), cat)


def optimal_scs_fidelity(alpha, parity, r_max=2.0, policy=DEFAULT_POLICY):
    """``(r_opt, F_max)`` maximizing :func:`scs_approx_fidelity` over ``0 <= r <= r_max``."""
    res = minimize_scalar(lambda r: -scs_approx_fidelity(r, alpha, parity, policy),
                          bounds=(0.0, r_max), method="bounded",
                          options={"xatol": 1e-6})
    return float(res.x), float(-res.fun)
