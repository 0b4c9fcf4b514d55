"""Heralded gate pipelines built from the circuit engine.

The interferometer gates share one optical layout on four modes (numbered
from 0 here):

0. control mode carrying the coherent qubit ``a|+beta0> + b|-beta0>``;
1. second interferometer arm, initially vacuum;
2. and 3. the two halves of a TMSV with squeezing ``s``.

The sequence is: input beam splitter on (0, 1), weak couplers (0, 2) and
(1, 3), output beam splitter on (0, 1) undoing the input one, a phase flip
of mode 0 and a single-photon herald on mode 3.  Each run returns a
:class:`GateReport` comparing the heralded state with the ideal target built
at the same finite parameters and with the strict ``r_bs -> 0`` target.
"""

import cmath
import json
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .analytic import alpha_for_delta, magic_alpha, tmsv_alpha_rep
from .circuit import (BeamSplitter, Circuit, CoherentFrameState, ConditionalResult, FrameBranch,
                      PhaseShifter, PnrdMeasurement, UNDERFLOW_TOL)
from .fock import DEFAULT_POLICY, MultiModeState, fidelity, tmsv_state


def _check_qubit(a, b, name="control"):
    a, b = complex(a), complex(b)
    if abs(abs(a) ** 2 + abs(b) ** 2 - 1.0) > 1e-9:
        raise ValueError(f"{name} qubit amplitudes must satisfy |a|^2 + |b|^2 = 1")
    return a, b


def _micro(a1, b1):
    return np.array([a1, b1], dtype=complex)


def _frame(*terms):
    """Frame state from ``(weight, betas, remainder array)`` triples."""
    return CoherentFrameState(tuple(FrameBranch(complex(w), tuple(complex(x) for x in betas),
                                                np.asarray(amps, dtype=complex))
                                    for w, betas, amps in terms))


@dataclass(frozen=True)
class LogicalBasis:
    """A pair of basis states together with their overlap ``|<0_L|1_L>|^2``."""

    kind: str
    parameters: dict
    basis_states: tuple
    overlap: float = field(init=False)

    def __post_init__(self):
        x, y = self.basis_states
        ov = abs(np.vdot(x.amplitudes.ravel(), y.amplitudes.ravel())) ** 2
        object.__setattr__(self, "overlap", float(ov))


def coherent_basis(gamma, cutoff=None, policy=DEFAULT_POLICY):
    """``{|0, gamma>, |0, -gamma>}``; overlap ``exp(-4|gamma|^2)``."""
    cutoff = policy.cutoff_for(gamma) if cutoff is None else cutoff
    states = tuple(_frame((1, (g,), [1.0])).to_fock((cutoff,)) for g in (gamma, -gamma))
    return LogicalBasis("coherent", {"gamma": complex(gamma)}, states)


def micro_basis(cutoff=1):
    states = tuple(MultiModeState(np.eye(cutoff + 1, dtype=complex)[k]) for k in (0, 1))
    return LogicalBasis("micro", {}, states)


def hybrid_states(gamma, a1=1 / math.sqrt(2), b1=1 / math.sqrt(2)):
    """``Phi_+-`` as frame states on (coherent mode, micro mode).

    ``Phi_+- = (|gamma>(a1|0> + b1|1>) +- |-gamma>(-a1|0> + b1|1>)) / 2``;
    the balanced default makes them exactly orthogonal.
    """
    x = (1 / 2, (gamma, 0), _micro(a1, b1)[None, :])
    y = (1 / 2, (-gamma, 0), _micro(-a1, b1)[None, :])
    plus = _frame(x, y)
    minus = _frame(x, (-y[0], y[1], y[2]))
    return plus, minus


def hybrid_basis(gamma, cutoff=None, policy=DEFAULT_POLICY):
    cutoff = policy.cutoff_for(gamma, 1) if cutoff is None else cutoff
    plus, minus = hybrid_states(gamma)
    states = tuple(s.normalized().to_fock((cutoff, 1)) for s in (plus, minus))
    return LogicalBasis("hybrid", {"gamma": complex(gamma)}, states)


@dataclass(frozen=True)
class GateReport:
    output: ConditionalResult
    ideal: MultiModeState
    fidelity: float
    fidelity_strict: float
    success_probability: float
    parameters: dict
    branch_amplitudes: tuple = ()
    extras: dict = field(default_factory=dict)

    def to_dict(self):
        def enc(v):
            if isinstance(v, complex):
                return [v.real, v.imag]
            if isinstance(v, (list, tuple)):
                return [enc(x) for x in v]
            if isinstance(v, dict):
                return {k: enc(x) for k, x in v.items()}
            if isinstance(v, (np.floating, np.integer)):
                return v.item()
            return v
        return {
            "fidelity": float(self.fidelity),
            "fidelity_strict": float(self.fidelity_strict),
            "success_probability": float(self.success_probability),
            "parameters": enc(dict(self.parameters)),
            "branch_amplitudes": enc([complex(x) for x in self.branch_amplitudes]),
            "extras": enc(dict(self.extras)),
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


# ---------------------------------------------------------- interferometer

@dataclass(frozen=True)
class InterferometerLayout:
    """Derived amplitudes of the four-mode interferometer."""

    alpha: complex
    s: float
    r_bs: float
    t: float
    t1: float
    r1: float
    beta0: complex

    @property
    def gamma_out(self):
        """Control amplitude of the ``|0_L>`` branch after the phase flip."""
        return -self.t * self.beta0

    @property
    def gamma_strict(self):
        """The ``r_bs -> 0`` reading of the output amplitude, with the same sign convention."""
        return -self.alpha * math.sqrt(1 + math.tanh(self.s) ** 2) / self.r_bs

    @property
    def alpha_eff(self):
        """Displacement seen by the heralded TMSV half (mode 3)."""
        return self.r_bs * self.r1 * self.beta0

    def finite_target(self):
        """``(a1, b1, eps)`` for the ``|0_L>`` branch at these finite parameters.

        Both TMSV halves cross a coupler of transmission ``t``, so on the
        subspace without leaked photons the pair correlations scale as
        ``tanh s' = t^2 tanh s``.  Heralding after the displacement
        ``alpha_eff`` then leaves ``(a+ + delta'*)|0>`` on mode 2 with
        ``delta' = alpha_eff* (1 - tanh^2 s') / tanh s'``, shifted by
        ``eps = alpha_eff* (tanh s - tanh s')``.
        """
        th = math.tanh(self.s)
        thp = self.t ** 2 * th
        x = complex(self.alpha_eff).conjugate()
        d = x * (1 - thp ** 2) / thp
        a1, b1 = _target_amplitudes(d.conjugate())
        return a1, b1, x * (th - thp)


def interferometer_layout(s, r_bs, delta=1.0):
    if s <= 0:
        raise ValueError("squeezing s must be positive")
    if not 0 < r_bs < 1:
        raise ValueError("r_bs must lie in (0, 1)")
    if r_bs > 0.3:
        warnings.warn(f"r_bs={r_bs} is far from the weak-coupling regime", stacklevel=3)
    th = math.tanh(s)
    t = math.sqrt(1 - r_bs ** 2)
    alpha = alpha_for_delta(s, delta)
    beta0 = alpha * t * math.sqrt(1 + th ** 2) / r_bs
    return InterferometerLayout(alpha, s, r_bs, t, th / math.sqrt(1 + th ** 2),
                                1 / math.sqrt(1 + th ** 2), beta0)


def interferometer_circuit(layout, couple=True, phase_flip=True, herald=True):
    """The four-mode element list; ``couple=False`` drops both weak couplers."""
    els = [BeamSplitter(layout.t1, layout.r1, math.pi, (0, 1))]
    if couple:
        els.append(BeamSplitter(layout.t, layout.r_bs, math.pi, (0, 2)))
        els.append(BeamSplitter(layout.t, layout.r_bs, -math.pi, (1, 3)))
    els.append(BeamSplitter(layout.t1, layout.r1, 0.0, (0, 1)))
    if phase_flip:
        els.append(PhaseShifter(math.pi, 0))
    if herald:
        els.append(PnrdMeasurement(3, 1))
    return Circuit(4, tuple(els))


def _interferometer_input(a, b, layout, cutoffs, policy):
    c1, c2, c3, c4 = cutoffs
    tmsv = tmsv_state(layout.s, (c3, c4), policy).amplitudes
    rest = tmsv[None, None, :, :]
    frame = _frame((a, (layout.beta0, 0, 0, 0), rest), (b, (-layout.beta0, 0, 0, 0), rest))
    # the control remainder only collects photons leaking out of the TMSV
    return frame.with_caps((c2, c2, c3, c4))


def _target_amplitudes(delta):
    norm = math.sqrt(1 + abs(delta) ** 2)
    return complex(delta).conjugate() / norm, 1 / norm


def _default_cutoffs(cutoffs):
    return (None, 6, 8, 8) if cutoffs is None else tuple(cutoffs)


def _final_fock(frame, c1, policy):
    cuts = list(frame.required_cutoffs(policy))
    if c1 is not None:
        policy.check(c1, max(abs(b.betas[0]) for b in frame.branches),
                     max(b.amplitudes.shape[0] - 1 for b in frame.branches))
        cuts[0] = c1
    return frame.to_fock(tuple(cuts), policy)


def _fid(state, ideal_frame, policy):
    ideal = ideal_frame.normalized().to_fock(state.cutoffs, policy)
    return fidelity(state, ideal), ideal


def _logical_amplitudes(state, gamma, policy):
    """Least-squares components of ``state`` on ``|+-gamma>|0>|k>``, ``k in {0, 1}``."""
    cols = []
    for g in (gamma, -gamma):
        for k in (0, 1):
            v = np.zeros((1, 1, 2), dtype=complex)
            v[0, 0, k] = 1.0
            cols.append(_frame((1, (g, 0, 0), v)).to_fock(state.cutoffs, policy).amplitudes.ravel())
    m = np.array(cols).T
    coef, *_ = np.linalg.lstsq(m, state.amplitudes.ravel(), rcond=None)
    return tuple(complex(c) for c in coef)


def _run_interferometer(a, b, s, r_bs, delta, cutoffs, policy, couple=True, extra_herald=None,
                        underflow_tol=UNDERFLOW_TOL):
    layout = interferometer_layout(s, r_bs, delta)
    cutoffs = _default_cutoffs(cutoffs)
    inp = _interferometer_input(a, b, layout, cutoffs, policy)
    circuit = interferometer_circuit(layout, couple=couple)
    if extra_herald is not None:
        circuit = Circuit(4, circuit.elements + (PnrdMeasurement(0, extra_herald),))
    res = circuit.run(inp, policy=policy, underflow_tol=underflow_tol)
    return layout, cutoffs, res


def run_cz_interferometer(a, b, s=0.3, r_bs=0.2, cutoffs=None, delta=1.0,
                          policy=DEFAULT_POLICY):
    """Controlled-sign gate between a coherent-state qubit and a vacuum/photon qubit.

    The target amplitudes are not free: they are fixed by ``delta`` as
    ``a1 = delta*/sqrt(1 + |delta|^2)`` and ``b1 = 1/sqrt(1 + |delta|^2)``.
    ``cutoffs = (c_control, c_arm, c_tmsv, c_tmsv)``: the last three bound
    the Fock remainders, the first the final control-mode tensor (``None``
    picks the policy value).
    """
    a, b = _check_qubit(a, b)
    layout, cutoffs, res = _run_interferometer(a, b, s, r_bs, delta, cutoffs, policy)
    out = _final_fock(res.state, cutoffs[0], policy)
    g = layout.gamma_out
    a1, b1, eps = layout.finite_target()
    ideal = _frame((a, (g, 0, eps), _micro(a1, b1)[None, None, :]),
                   (b, (-g, 0, -eps), _micro(-a1, b1)[None, None, :]))
    a1s, b1s = _target_amplitudes(delta)
    gs = layout.gamma_strict
    strict = _frame((a, (gs, 0, 0), _micro(a1s, b1s)[None, None, :]),
                    (b, (-gs, 0, 0), _micro(-a1s, b1s)[None, None, :]))
    f, ideal_state = _fid(out, ideal, policy)
    fs, _ = _fid(out, strict, policy)
    params = {"gate": "cz", "a": a, "b": b, "s": s, "r_bs": r_bs, "delta": complex(delta),
              "alpha": layout.alpha, "beta0": layout.beta0, "gamma_out": g,
              "cutoffs": list(out.cutoffs)}
    return GateReport(ConditionalResult(out, res.probability), ideal_state, f, fs,
                      res.probability, params, _logical_amplitudes(out, g, policy))


def interferometer_identity_fidelity(a, b, s=0.3, r_bs=0.2, policy=DEFAULT_POLICY):
    """Fidelity of mode 0 with the input qubit when both weak couplers are removed.

    Without the couplers the output beam splitter undoes the input one, so
    the control qubit must leave in mode 0 with the arm in vacuum.
    """
    a, b = _check_qubit(a, b)
    layout = interferometer_layout(s, r_bs)
    inp = _frame((a, (layout.beta0, 0), np.ones((1, 1))), (b, (-layout.beta0, 0), np.ones((1, 1))))
    els = interferometer_circuit(layout, couple=False, phase_flip=False, herald=False).elements
    circuit = Circuit(2, tuple(e for e in els))
    out = circuit.run(inp.with_caps((4, 4)), policy=policy).state
    cut = out.required_cutoffs(policy)
    return fidelity(out.normalized().to_fock(cut, policy), inp.normalized().to_fock(cut, policy))


def cz_sign_pattern(s=0.3, r_bs=0.2, delta=1.0, cutoffs=None, policy=DEFAULT_POLICY):
    """Diagonal of the logical gate, phase-aligned so the largest entry is real positive.

    The target qubit is written in the permuted basis ``|0_L1> = |1>``,
    ``|1_L1> = |0>``.  Entries are heralded logical amplitudes divided by the
    input amplitudes of a balanced control run, in the order
    ``(0_L 0_L1, 0_L 1_L1, 1_L 0_L1, 1_L 1_L1)``.
    """
    a = b = 1 / math.sqrt(2)
    rep = run_cz_interferometer(a, b, s, r_bs, cutoffs, delta, policy=policy)
    layout = interferometer_layout(s, r_bs, delta)
    a1, b1, _ = layout.finite_target()
    c00, c01, c10, c11 = rep.branch_amplitudes
    # physical (|g>|0>, |g>|1>, |-g>|0>, |-g>|1>) -> logical order with the target basis swapped
    out = np.array([c01, c00, c11, c10])
    inp = np.array([a * b1, a * a1, b * b1, b * a1])
    g = out / inp
    k = int(np.argmax(np.abs(g)))
    g = g * cmath.exp(-1j * cmath.phase(g[k]))
    return g / np.max(np.abs(g))


def run_cz_direct(a, b, a1, b1, T=0.99, cutoffs=None, herald_mode=2, policy=DEFAULT_POLICY):
    """Controlled-sign gate with the target entangled with an auxiliary mode.

    Modes: 0 control coherent qubit with amplitude
    ``magic_alpha() sqrt(T)/sqrt(1 - T)``, 1 target, 2 auxiliary.  The
    target pair starts in ``a1|0>_1|1>_2 + b1|1>_1|0>_2``; the control and
    auxiliary modes meet on a UBS of transmittance ``T`` and a single photon
    is heralded on ``herald_mode``.
    """
    a, b = _check_qubit(a, b)
    a1, b1 = _check_qubit(a1, b1, "target")
    if not 0 < T < 1:
        raise ValueError("T must lie in (0, 1)")
    t, r = math.sqrt(T), math.sqrt(1 - T)
    beta_in = magic_alpha() * t / r
    pair = np.zeros((1, 2, 2), dtype=complex)
    pair[0, 0, 1] = a1
    pair[0, 1, 0] = b1
    inp = _frame((a, (beta_in, 0, 0), pair), (b, (-beta_in, 0, 0), pair))
    circuit = Circuit(3, (BeamSplitter(t, r, math.pi, (0, 2)), PnrdMeasurement(herald_mode, 1)))
    res = circuit.run(inp, policy=policy)
    c0 = None if cutoffs is None else cutoffs[0]
    out = _final_fock(res.state, c0, policy) if herald_mode != 0 else res.state.to_fock(None, policy)

    def target(g):
        return _frame((a, (g, 0), _micro(a1, b1)[None, :]), (b, (-g, 0), _micro(a1, -b1)[None, :]))

    if herald_mode == 0:
        f = fs = float("nan")
        ideal_state = out
    else:
        f, ideal_state = _fid(out, target(t * beta_in), policy)
        fs, _ = _fid(out, target(beta_in), policy)
    params = {"gate": "cz-direct", "a": a, "b": b, "a1": a1, "b1": b1, "T": T,
              "alpha": magic_alpha(), "beta_in": beta_in, "herald_mode": herald_mode,
              "cutoffs": list(out.cutoffs)}
    return GateReport(ConditionalResult(out, res.probability), ideal_state, f, fs,
                      res.probability, params)


# ------------------------------------------------------------- Hadamard

def _hybrid_target(a, b, gamma):
    """``((a+b) Phi_+ + (a-b) Phi_-)/sqrt(2)`` on (coherent, arm, micro) modes."""
    plus, minus = hybrid_states(gamma)
    w = ((a + b) / math.sqrt(2), (a - b) / math.sqrt(2))
    branches = []
    for weight, st in zip(w, (plus, minus)):
        for br in st.branches:
            betas = (br.betas[0], 0, br.betas[1])
            branches.append(FrameBranch(weight * br.weight, betas, br.amplitudes[:, None, :]))
    return CoherentFrameState(tuple(branches))


def run_hadamard_hybrid(a, b, s=0.3, r_bs=0.2, cutoffs=None, policy=DEFAULT_POLICY):
    """Hadamard from the coherent qubit to the hybrid basis ``Phi_+-`` (``delta = 1``)."""
    a, b = _check_qubit(a, b)
    layout, cutoffs, res = _run_interferometer(a, b, s, r_bs, 1.0, cutoffs, policy)
    out = _final_fock(res.state, cutoffs[0], policy)
    f, ideal_state = _fid(out, _hybrid_target(a, b, layout.gamma_out), policy)
    fs, _ = _fid(out, _hybrid_target(a, b, layout.gamma_strict), policy)
    plus, minus = (p.normalized().to_fock(out.cutoffs, policy) for p in
                   (_hybrid_target(1, 1, layout.gamma_out), _hybrid_target(1, -1, layout.gamma_out)))
    weights = tuple(complex(np.vdot(p.amplitudes.ravel(), out.amplitudes.ravel()))
                    for p in (plus, minus))
    p_, m_ = hybrid_states(layout.gamma_out)
    params = {"gate": "hadamard-hybrid", "a": a, "b": b, "s": s, "r_bs": r_bs,
              "alpha": layout.alpha, "gamma_out": layout.gamma_out, "cutoffs": list(out.cutoffs)}
    extras = {"phi_overlap": abs(p_.inner(m_)),
              "phi_weights": [abs(w) ** 2 for w in weights]}
    return GateReport(ConditionalResult(out, res.probability), ideal_state, f, fs,
                      res.probability, params, weights, extras)


def micro_hadamard_target(a, b, n_detect):
    """``((a - (-1)^n b)|0> + (a + (-1)^n b)|1>)/sqrt(2)``: Hadamard for odd ``n``."""
    sgn = (-1) ** n_detect
    return np.array([a - sgn * b, a + sgn * b]) / math.sqrt(2)


def run_hadamard_micro(a, b, s=0.25, r_bs=0.2, n_detect=1, cutoffs=None, policy=DEFAULT_POLICY):
    """Hadamard from the coherent qubit to vacuum/single photon, heralding ``n_detect`` on mode 0."""
    a, b = _check_qubit(a, b)
    if n_detect < 0:
        raise ValueError("n_detect must be non-negative")
    layout, cutoffs, res = _run_interferometer(a, b, s, r_bs, 1.0, cutoffs, policy,
                                               extra_herald=n_detect)
    out = _final_fock(res.state, None, policy)
    target = micro_hadamard_target(a, b, n_detect)
    ideal = _frame((1, (0, 0), target[None, :]))
    f, ideal_state = _fid(out, ideal, policy)
    params = {"gate": "hadamard-micro", "a": a, "b": b, "s": s, "r_bs": r_bs,
              "n_detect": n_detect, "alpha": layout.alpha, "cutoffs": list(out.cutoffs)}
    return GateReport(ConditionalResult(out, res.probability), ideal_state, f, f,
                      res.probability, params, tuple(complex(x) for x in target))


def hadamard_inverse_input(a, b, gamma, cutoffs=None, policy=DEFAULT_POLICY):
    """``a Phi_+ + b Phi_-`` on (coherent, micro) as a normalized Fock tensor."""
    plus, minus = hybrid_states(gamma)
    st = plus.scaled(a) + minus.scaled(b)
    if cutoffs is None:
        cutoffs = (policy.cutoff_for(gamma, 1), 1)
    return st.normalized().to_fock(cutoffs, policy)


def run_hadamard_inverse(a, b, s=0.3, r_bs=0.2, T=0.98, cutoffs=None, input_state=None,
                         gamma_in=None, policy=DEFAULT_POLICY):
    """Hybrid basis back to a coherent-state qubit.

    The coherent and micro modes meet on a UBS of transmittance ``T`` and a
    single photon is heralded on the micro mode.  ``input_state`` (a
    two-mode tensor over (coherent, micro)) overrides the prepared input
    ``a Phi_+ + b Phi_-``; ``gamma_in`` then names its coherent amplitude.
    """
    a, b = _check_qubit(a, b)
    th = math.tanh(s)
    t = math.sqrt(1 - r_bs ** 2)
    alpha = alpha_for_delta(s, 1.0)
    if gamma_in is None:
        gamma_in = alpha * t * math.sqrt(1 + th ** 2) / r_bs
    gamma_strict = math.copysign(1, complex(gamma_in).real) * alpha * t * math.sqrt(1 + th ** 2) / (T * r_bs)
    if input_state is None:
        input_state = hadamard_inverse_input(a, b, gamma_in, None, policy)
    x = math.sqrt(1 - T) * abs(gamma_in)
    c_coh = max(input_state.cutoffs[0], policy.cutoff_for(gamma_in, 1))
    c_mic = policy.cutoff_for(x, input_state.cutoffs[1])
    if cutoffs is not None:
        c_coh, c_mic = (d if c is None else c for c, d in zip(cutoffs, (c_coh, c_mic)))
    padded = np.zeros((c_coh + 1, c_mic + 1), dtype=complex)
    n0, n1 = (min(d, c + 1) for d, c in zip(input_state.amplitudes.shape, (c_coh, c_mic)))
    padded[:n0, :n1] = input_state.amplitudes[:n0, :n1]
    circuit = Circuit(2, (BeamSplitter(math.sqrt(T), math.sqrt(1 - T), math.pi, (0, 1)),
                          PnrdMeasurement(1, 1)))
    res = circuit.run(MultiModeState(padded), policy=policy)
    out = res.state

    def target(g):
        return _frame(((a + b) / math.sqrt(2), (g,), [1.0]), ((a - b) / math.sqrt(2), (-g,), [1.0]))

    f, ideal_state = _fid(out, target(math.sqrt(T) * gamma_in), policy)
    fs, _ = _fid(out, target(gamma_strict), policy)
    params = {"gate": "hadamard-inverse", "a": a, "b": b, "s": s, "r_bs": r_bs, "T": T,
              "gamma_in": complex(gamma_in), "gamma_strict": complex(gamma_strict),
              "cutoffs": list(out.cutoffs)}
    return GateReport(ConditionalResult(out, res.probability), ideal_state, f, fs,
                      res.probability, params)


def hadamard_involution_fidelity(a, b, s=0.3, r_bs=0.2, T=0.98, policy=DEFAULT_POLICY):
    """Hybrid Hadamard followed by its inverse, compared with ``a|g'> + b|-g'>``.

    The empty interferometer arm is heralded in vacuum between the two gates.
    ``g'`` is the coherent amplitude that the ``|0_L>`` branch carries at the
    end, ``sqrt(T)`` times the hybrid gate's output amplitude.
    """
    first = run_hadamard_hybrid(a, b, s, r_bs, policy=policy)
    gamma = first.parameters["gamma_out"]
    mid = Circuit(3, (PnrdMeasurement(1, 0),)).run(first.output.state)
    second = run_hadamard_inverse((a + b) / math.sqrt(2), (a - b) / math.sqrt(2), s, r_bs, T,
                                  input_state=mid.state, gamma_in=gamma, policy=policy)
    g = math.sqrt(T) * gamma
    target = _frame((a, (g,), [1.0]), (b, (-g,), [1.0]))
    f, _ = _fid(second.output.state, target, policy)
    return f, first.success_probability * mid.probability * second.success_probability


def apd_ratio_curves(delta, s_grid, k_max):
    """Rows ``(s, P_1/P_2, ..., P_1/P_kmax)`` of TMSV herald probabilities at fixed ``delta``."""
    if k_max < 2:
        raise ValueError("k_max must be at least 2")
    rows = []
    for s in s_grid:
        p = tmsv_alpha_rep(s, alpha_for_delta(s, delta), k_max).P_n
        rows.append([float(s)] + [float(p[1] / p[k]) for k in range(2, k_max + 1)])
    return rows
