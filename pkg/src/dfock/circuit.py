"""Linear-optical circuits on truncated multi-mode Fock space.

Modes are numbered from 0.  A beam splitter acting on ``mode_pair = (i, j)``
is described by the 2x2 matrix

    M(t, r, phi) = [[t, -r exp(-i phi)],
                    [r exp(i phi),  t]]

whose rows give the images of the creation operators,
``a_i+ -> M[0,0] a_i+ + M[0,1] a_j+`` and ``a_j+ -> M[1,0] a_i+ + M[1,1] a_j+``.
Coherent amplitudes therefore transform as ``beta_out = M^T beta_in``.

Two state representations are supported by the same circuit elements:

* :class:`~dfock.fock.MultiModeState`, a dense Fock tensor (brute force);
* :class:`CoherentFrameState`, a finite sum ``sum_k w_k D(beta_k) |psi_k>``
  in which every branch carries its coherent amplitudes classically and only
  the small remainder ``psi_k`` lives in Fock space.  Passive optics never
  mixes the two parts, so this is exact and lets modes with large coherent
  amplitudes keep tiny cutoffs.
"""

import cmath
import json
import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from .errors import HeadroomError, ImprobableOutcomeError
from .fock import (DEFAULT_POLICY, FockVector, MultiModeState, coherent_state,
                   displacement_elements, fock_state)

UNDERFLOW_TOL = 1e-14


@dataclass(frozen=True)
class BeamSplitter:
    t: float
    r: float
    phi: float = 0.0
    mode_pair: tuple = (0, 1)

    def __post_init__(self):
        if abs(self.t ** 2 + self.r ** 2 - 1.0) > 1e-12:
            raise ValueError(f"beam splitter needs t^2 + r^2 = 1, got {self.t ** 2 + self.r ** 2!r}")
        i, j = self.mode_pair
        if i == j:
            raise ValueError("beam splitter needs two distinct modes")
        object.__setattr__(self, "mode_pair", (int(i), int(j)))

    @classmethod
    def from_transmittance(cls, T, phi=0.0, mode_pair=(0, 1)):
        return cls(math.sqrt(T), math.sqrt(1.0 - T), phi, mode_pair)

    @property
    def matrix(self):
        return np.array([[self.t, -self.r * cmath.exp(-1j * self.phi)],
                         [self.r * cmath.exp(1j * self.phi), self.t]])

    def inverse(self):
        """Beam splitter undoing this one: same ``t, r`` with ``phi + pi``."""
        return BeamSplitter(self.t, self.r, self.phi + math.pi, self.mode_pair)


@dataclass(frozen=True)
class PhaseShifter:
    theta: float
    mode: int


@dataclass(frozen=True)
class Displacement:
    beta: complex
    mode: int


@dataclass(frozen=True)
class PnrdMeasurement:
    mode: int
    n: int


@dataclass(frozen=True)
class ApdMeasurement:
    mode: int
    outcome: str

    def __post_init__(self):
        if self.outcome not in ("click", "no_click"):
            raise ValueError("APD outcome must be 'click' or 'no_click'")


@dataclass(frozen=True)
class ConditionalResult:
    """Normalized post-measurement state and the probability of the outcome."""

    state: object
    probability: float


# ---------------------------------------------------------------- Fock tensors

@lru_cache(maxsize=4096)
def _sector_unitary(t, r, phi, total):
    """Beam-splitter unitary on the ``total``-photon sector, basis ``|m, total-m>``.

    ``U = exp(theta (e^{i phi} a_i+ a_j - e^{-i phi} a_i a_j+))`` with
    ``cos theta = t`` and ``sin theta = r``.
    """
    theta = math.atan2(r, t)
    m = np.arange(total)
    hop = np.zeros((total + 1, total + 1), dtype=complex)
    hop[m + 1, m] = np.sqrt((m + 1) * (total - m))
    gen = theta * (cmath.exp(1j * phi) * hop - cmath.exp(-1j * phi) * hop.T)
    u = expm(gen)
    u.setflags(write=False)
    return u


def _check_headroom(before, after, policy, what):
    lost = before - after
    if lost > policy.tail_tol * max(before, 1e-300):
        raise HeadroomError(f"insufficient cutoff: {what} pushed {lost:.3g} of the norm "
                            f"past the cutoff (tail_tol={policy.tail_tol:g})")


def apply_beam_splitter(state, bs, out_cutoffs=None, policy=DEFAULT_POLICY):
    """Exact two-mode action, one photon-number sector at a time.

    ``out_cutoffs`` optionally resizes the two modes.  Raises
    :class:`HeadroomError` if more than ``tail_tol`` of the norm would land
    above the output cutoffs.
    """
    if isinstance(state, CoherentFrameState):
        return state.apply_beam_splitter(bs, policy=policy)
    i, j = bs.mode_pair
    amps = np.moveaxis(state.amplitudes, (i, j), (-2, -1))
    ci, cj = amps.shape[-2] - 1, amps.shape[-1] - 1
    oi, oj = (ci, cj) if out_cutoffs is None else out_cutoffs
    out = np.zeros(amps.shape[:-2] + (oi + 1, oj + 1), dtype=complex)
    for total in range(ci + cj + 1):
        m_out = np.arange(max(0, total - oj), min(total, oi) + 1)
        if m_out.size == 0:
            continue
        m_in = np.arange(max(0, total - cj), min(total, ci) + 1)
        u = _sector_unitary(bs.t, bs.r, bs.phi, total)[np.ix_(m_out, m_in)]
        out[..., m_out, total - m_out] = amps[..., m_in, total - m_in] @ u.T
    result = MultiModeState(np.moveaxis(out, (-2, -1), (i, j)))
    _check_headroom(state.norm_squared(), result.norm_squared(), policy, "beam splitter")
    return result


def apply_phase_shift(state, ps):
    """Multiply the amplitude of ``n`` photons in ``ps.mode`` by ``exp(i theta n)``."""
    if isinstance(state, CoherentFrameState):
        return state.apply_phase_shift(ps)
    amps = state.amplitudes
    shape = [1] * amps.ndim
    shape[ps.mode] = amps.shape[ps.mode]
    phases = np.exp(1j * ps.theta * np.arange(amps.shape[ps.mode])).reshape(shape)
    return MultiModeState(amps * phases)


def _apply_on_axis(amps, matrix, axis):
    moved = np.tensordot(matrix, amps, axes=([1], [axis]))
    return np.moveaxis(moved, 0, axis)


def occupied_max(state, mode, floor=1e-15):
    """Highest photon number of ``mode`` whose marginal weight exceeds ``floor`` (relative)."""
    amps = np.moveaxis(state.amplitudes, mode, 0)
    marg = np.sum(np.abs(amps.reshape(amps.shape[0], -1)) ** 2, axis=1)
    idx = np.nonzero(marg > floor * max(marg.sum(), 1e-300))[0]
    return int(idx[-1]) if idx.size else 0


def trim_tails(state, tol=1e-15):
    """Drop trailing photon-number slices whose combined weight is below ``tol`` (relative)."""
    amps = state.amplitudes
    total = max(state.norm_squared(), 1e-300)
    index = []
    for mode in range(amps.ndim):
        moved = np.moveaxis(amps, mode, 0)
        marg = np.sum(np.abs(moved.reshape(moved.shape[0], -1)) ** 2, axis=1)
        tail = np.cumsum(marg[::-1])[::-1] / total
        keep = int(np.count_nonzero(tail > tol))
        index.append(slice(0, max(keep, 1)))
    return MultiModeState(amps[tuple(index)])


def displace_mode(state, mode, beta, out_cutoff=None, policy=DEFAULT_POLICY):
    """Exact ``D(beta)`` on one mode using closed-form matrix elements.

    The output cutoff defaults to the larger of the current one and the
    policy requirement for ``|beta|`` plus the occupied photon numbers.
    """
    if isinstance(state, CoherentFrameState):
        return state.displace(mode, beta)
    n_occ = occupied_max(state, mode)
    need = policy.cutoff_for(beta, n_occ)
    c_in = state.cutoffs[mode]
    if out_cutoff is None:
        out_cutoff = max(c_in, need)
    policy.check(out_cutoff, beta, n_occ)
    d = displacement_elements(beta, out_cutoff, c_in)
    result = MultiModeState(_apply_on_axis(state.amplitudes, d, mode))
    _check_headroom(state.norm_squared(), result.norm_squared(), policy, "displacement")
    return result


def append_mode(state, vector):
    """Tensor a single-mode vector onto the end of ``state``."""
    return MultiModeState(np.multiply.outer(state.amplitudes, vector.amplitudes))


def displace_via_ubs(state, mode, ancilla_amplitude, T, phi=0.0, ancilla_cutoff=None,
                     policy=DEFAULT_POLICY):
    """Approximate displacement by mixing with a strong coherent ancilla.

    The ancilla ``|0, ancilla_amplitude>`` is appended as the last mode and
    both meet on a beam splitter of transmittance ``T``.  The signal receives
    ``sqrt(1 - T) exp(i phi) ancilla_amplitude`` in the limit ``T -> 1``.
    The ancilla mode is kept.
    """
    if not 0.0 < T <= 1.0:
        raise ValueError("transmittance must lie in (0, 1]")
    if T < 0.9:
        warnings.warn(f"UBS displacement with T={T} is far from the T -> 1 limit", stacklevel=2)
    if ancilla_cutoff is None:
        ancilla_cutoff = policy.cutoff_for(ancilla_amplitude)
    policy.check(ancilla_cutoff, ancilla_amplitude)
    full = append_mode(state, coherent_state(ancilla_amplitude, ancilla_cutoff))
    anc = full.mode_count - 1
    bs = BeamSplitter.from_transmittance(T, phi, (mode, anc))
    beta = math.sqrt(1.0 - T) * ancilla_amplitude
    c_sig = max(state.cutoffs[mode], policy.cutoff_for(beta, occupied_max(state, mode)))
    c_anc = max(ancilla_cutoff, policy.cutoff_for(ancilla_amplitude, occupied_max(state, mode)))
    return apply_beam_splitter(full, bs, out_cutoffs=(c_sig, c_anc), policy=policy)


def ubs_fidelity_gap(vector, beta, T, policy=DEFAULT_POLICY):
    """``1 - <phi|rho_signal|phi>`` with ``phi = D(beta)|vector>`` and the UBS output ``rho``."""
    anc = beta / math.sqrt(1.0 - T)
    out = displace_via_ubs(MultiModeState(vector.amplitudes), 0, anc, T, policy=policy)
    c_sig = out.cutoffs[0]
    target = displacement_elements(beta, c_sig, vector.cutoff) @ vector.amplitudes
    overlap = target.conj() @ out.amplitudes
    return 1.0 - float(np.sum(np.abs(overlap) ** 2))


def _conditional(projected, before, underflow_tol, what):
    p_raw = float(np.vdot(projected.ravel(), projected.ravel()).real)
    p = p_raw / before
    if p < underflow_tol:
        raise ImprobableOutcomeError(f"improbable outcome: {what} has probability {p:.3g}", p)
    return ConditionalResult(MultiModeState(projected / math.sqrt(p_raw)), p)


def project_pnrd(state, mode, n, underflow_tol=UNDERFLOW_TOL):
    """Project ``mode`` onto ``|n>``, remove it and renormalize."""
    if isinstance(state, CoherentFrameState):
        return state.project_pnrd(mode, n, underflow_tol)
    if not 0 <= n <= state.cutoffs[mode]:
        raise ValueError(f"n={n} exceeds the cutoff {state.cutoffs[mode]} of mode {mode}")
    projected = np.take(state.amplitudes, n, axis=mode)
    return _conditional(projected, state.norm_squared(), underflow_tol, f"|{n}> in mode {mode}")


def measure_apd(state, mode, outcome, underflow_tol=UNDERFLOW_TOL):
    """On/off detection.

    ``no_click`` is the vacuum projection and removes the mode.  ``click``
    zeroes the vacuum slice and keeps the mode, because the remaining pure
    state is still correlated with the photon number that was not resolved.
    """
    if outcome == "no_click":
        return project_pnrd(state, mode, 0, underflow_tol)
    if outcome != "click":
        raise ValueError("APD outcome must be 'click' or 'no_click'")
    if isinstance(state, CoherentFrameState):
        raise NotImplementedError("APD click needs a Fock tensor; call to_fock() first")
    amps = np.array(state.amplitudes)
    idx = [slice(None)] * amps.ndim
    idx[mode] = 0
    amps[tuple(idx)] = 0.0
    return _conditional(amps, state.norm_squared(), underflow_tol, f"click in mode {mode}")


def attenuate_coherent(components, A):
    """Divide every coherent amplitude by ``A >= 1``; weights are untouched."""
    if A < 1:
        raise ValueError("absorbing coefficient must be >= 1")
    return [(complex(w), complex(a) / A) for w, a in components]


def coherent_components_to_fock(components, cutoff):
    """Normalized ``sum_k w_k |0, a_k>`` as a FockVector."""
    v = sum(w * coherent_state(a, cutoff).amplitudes for w, a in components)
    return FockVector(v).normalized()


# ------------------------------------------------------------ displaced frame

@dataclass(frozen=True)
class FrameBranch:
    weight: complex
    betas: tuple
    amplitudes: np.ndarray


@dataclass(frozen=True)
class CoherentFrameState:
    """``sum_k weight_k D(betas_k) |amplitudes_k>`` over a fixed list of modes."""

    branches: tuple
    caps: tuple = None

    @classmethod
    def from_fock(cls, state, betas=None):
        betas = (0j,) * state.mode_count if betas is None else tuple(complex(b) for b in betas)
        return cls((FrameBranch(1.0 + 0j, betas, np.asarray(state.amplitudes)),))

    def with_caps(self, caps):
        """Copy whose Fock remainders are kept within the per-mode cutoffs ``caps``."""
        return CoherentFrameState(self.branches, tuple(caps))

    @property
    def mode_count(self):
        return len(self.branches[0].betas)

    def scaled(self, factor):
        return CoherentFrameState(tuple(FrameBranch(b.weight * factor, b.betas, b.amplitudes)
                                        for b in self.branches), self.caps)

    def __add__(self, other):
        return CoherentFrameState(self.branches + other.branches, self.caps)

    def apply_beam_splitter(self, bs, policy=DEFAULT_POLICY):
        i, j = bs.mode_pair
        m = bs.matrix
        out = []
        for b in self.branches:
            betas = list(b.betas)
            bi, bj = betas[i], betas[j]
            betas[i] = m[0, 0] * bi + m[1, 0] * bj
            betas[j] = m[0, 1] * bi + m[1, 1] * bj
            c = b.amplitudes.shape[i] + b.amplitudes.shape[j] - 2
            ci, cj = (c, c) if self.caps is None else (min(c, self.caps[i]), min(c, self.caps[j]))
            moved = apply_beam_splitter(MultiModeState(b.amplitudes), bs, out_cutoffs=(ci, cj),
                                        policy=policy)
            amps = trim_tails(moved, policy.tail_tol * 1e-6).amplitudes
            out.append(FrameBranch(b.weight, tuple(betas), amps))
        return CoherentFrameState(tuple(out), self.caps)

    def apply_phase_shift(self, ps):
        out = []
        for b in self.branches:
            betas = list(b.betas)
            betas[ps.mode] *= cmath.exp(1j * ps.theta)
            amps = apply_phase_shift(MultiModeState(b.amplitudes), ps).amplitudes
            out.append(FrameBranch(b.weight, tuple(betas), amps))
        return CoherentFrameState(tuple(out), self.caps)

    def displace(self, mode, beta):
        beta = complex(beta)
        out = []
        for b in self.branches:
            betas = list(b.betas)
            old = betas[mode]
            # D(beta) D(old) = exp(i Im(beta old*)) D(beta + old)
            phase = cmath.exp(1j * (beta * old.conjugate()).imag)
            betas[mode] = old + beta
            out.append(FrameBranch(b.weight * phase, tuple(betas), b.amplitudes))
        return CoherentFrameState(tuple(out), self.caps)

    def _project_unnormalized(self, mode, n):
        out = []
        for b in self.branches:
            c = b.amplitudes.shape[mode] - 1
            row = displacement_elements(b.betas[mode], n, c)[n]
            amps = np.tensordot(row, b.amplitudes, axes=([0], [mode]))
            betas = b.betas[:mode] + b.betas[mode + 1:]
            out.append(FrameBranch(b.weight, betas, amps))
        caps = None if self.caps is None else self.caps[:mode] + self.caps[mode + 1:]
        return CoherentFrameState(tuple(out), caps)

    def project_pnrd(self, mode, n, underflow_tol=UNDERFLOW_TOL):
        projected = self._project_unnormalized(mode, n)
        p_raw = projected.norm_squared()
        p = p_raw / self.norm_squared()
        if p < underflow_tol:
            raise ImprobableOutcomeError(
                f"improbable outcome: |{n}> in mode {mode} has probability {p:.3g}", p)
        return ConditionalResult(projected.scaled(1 / math.sqrt(p_raw)), p)

    def inner(self, other):
        """Exact ``<self|other>``; no truncation beyond that of the stored remainders."""
        total = 0j
        for x in self.branches:
            for y in other.branches:
                phase = 1.0 + 0j
                amps = y.amplitudes
                for mode, (bx, by) in enumerate(zip(x.betas, y.betas)):
                    # D(-bx) D(by) = exp(i Im(-bx by*)) D(by - bx)
                    phase *= cmath.exp(1j * (-bx * by.conjugate()).imag)
                    d = displacement_elements(by - bx, x.amplitudes.shape[mode] - 1,
                                              amps.shape[mode] - 1)
                    amps = _apply_on_axis(amps, d, mode)
                total += (x.weight.conjugate() * y.weight * phase
                          * np.vdot(x.amplitudes.ravel(), amps.ravel()))
        return complex(total)

    def norm_squared(self):
        return self.inner(self).real

    def normalized(self):
        return self.scaled(1 / math.sqrt(self.norm_squared()))

    def required_cutoffs(self, policy=DEFAULT_POLICY):
        """Per-mode cutoffs that hold every branch within the policy tail."""
        cuts = []
        for mode in range(self.mode_count):
            cuts.append(max(policy.cutoff_for(b.betas[mode], b.amplitudes.shape[mode] - 1)
                            for b in self.branches))
        return tuple(cuts)

    def to_fock(self, cutoffs=None, policy=DEFAULT_POLICY):
        if cutoffs is None:
            cutoffs = self.required_cutoffs(policy)
        total = np.zeros(tuple(c + 1 for c in cutoffs), dtype=complex)
        for b in self.branches:
            amps = b.amplitudes
            for mode, beta in enumerate(b.betas):
                d = displacement_elements(beta, cutoffs[mode], amps.shape[mode] - 1)
                amps = _apply_on_axis(amps, d, mode)
            total += b.weight * amps
        return MultiModeState(total)


# ------------------------------------------------------------------- circuits

_ELEMENT_TYPES = {
    "bs": BeamSplitter,
    "phase": PhaseShifter,
    "displace": Displacement,
    "measure_pnrd": PnrdMeasurement,
    "measure_apd": ApdMeasurement,
}


def _element_to_dict(el):
    if isinstance(el, BeamSplitter):
        return {"type": "bs", "t": el.t, "r": el.r, "phi": el.phi, "modes": list(el.mode_pair)}
    if isinstance(el, PhaseShifter):
        return {"type": "phase", "theta": el.theta, "mode": el.mode}
    if isinstance(el, Displacement):
        b = complex(el.beta)
        return {"type": "displace", "beta": [b.real, b.imag], "mode": el.mode}
    if isinstance(el, PnrdMeasurement):
        return {"type": "measure_pnrd", "mode": el.mode, "n": el.n}
    if isinstance(el, ApdMeasurement):
        return {"type": "measure_apd", "mode": el.mode, "outcome": el.outcome}
    raise TypeError(f"unknown circuit element {el!r}")


def _element_from_dict(d):
    kind = d.get("type")
    if kind not in _ELEMENT_TYPES:
        raise ValueError(f"unknown element type {kind!r}")
    if kind == "bs":
        return BeamSplitter(float(d["t"]), float(d["r"]), float(d.get("phi", 0.0)),
                            tuple(d["modes"]))
    if kind == "phase":
        return PhaseShifter(float(d["theta"]), int(d["mode"]))
    if kind == "displace":
        re, im = d["beta"]
        return Displacement(complex(re, im), int(d["mode"]))
    if kind == "measure_pnrd":
        return PnrdMeasurement(int(d["mode"]), int(d["n"]))
    return ApdMeasurement(int(d["mode"]), d["outcome"])


@dataclass(frozen=True)
class Circuit:
    """Ordered list of elements acting on ``mode_count`` labelled modes.

    Mode indices always refer to the original labels, even after earlier
    measurements have removed modes from the state.
    """

    mode_count: int
    elements: tuple = field(default_factory=tuple)

    def run(self, state, policy=DEFAULT_POLICY, underflow_tol=UNDERFLOW_TOL):
        if state.mode_count != self.mode_count:
            raise ValueError(f"circuit has {self.mode_count} modes, state has {state.mode_count}")
        labels = list(range(self.mode_count))
        probability = 1.0
        for el in self.elements:
            if isinstance(el, BeamSplitter):
                pair = tuple(labels.index(m) for m in el.mode_pair)
                state = apply_beam_splitter(state, BeamSplitter(el.t, el.r, el.phi, pair),
                                            policy=policy)
            elif isinstance(el, PhaseShifter):
                state = apply_phase_shift(state, PhaseShifter(el.theta, labels.index(el.mode)))
            elif isinstance(el, Displacement):
                state = displace_mode(state, labels.index(el.mode), el.beta, policy=policy)
            elif isinstance(el, PnrdMeasurement):
                res = project_pnrd(state, labels.index(el.mode), el.n, underflow_tol)
                state, probability = res.state, probability * res.probability
                labels.remove(el.mode)
            elif isinstance(el, ApdMeasurement):
                res = measure_apd(state, labels.index(el.mode), el.outcome, underflow_tol)
                state, probability = res.state, probability * res.probability
                if el.outcome == "no_click":
                    labels.remove(el.mode)
            else:
                raise TypeError(f"unknown circuit element {el!r}")
        return ConditionalResult(state, probability)

    def to_dict(self):
        return {"modes": self.mode_count, "elements": [_element_to_dict(e) for e in self.elements]}

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d):
        return cls(int(d["modes"]), tuple(_element_from_dict(e) for e in d["elements"]))

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def vacuum(cutoffs):
    """Multi-mode vacuum with the given per-mode cutoffs."""
    return MultiModeState.product(*(fock_state(0, c) for c in cutoffs))
