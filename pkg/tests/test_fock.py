import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from dfock.errors import InsufficientCutoffError
from dfock.fock import (DEFAULT_POLICY, ORACLE_TOL, CutoffPolicy, FockVector, MultiModeState, OperatorMatrix,
                        coherent_state, displaced_number_state, displacement_elements,
                        displacement_operator, fidelity, fock_state, inner_product, ladder_matrices,
                        mean_photon_number, single_mode_squeeze, tmsv_minimal_cutoff, tmsv_state)

complex_alpha = st.builds(lambda r, th: r * cmath.exp(1j * th),
                          st.floats(0.0, 2.0), st.floats(-math.pi, math.pi))


def expm_displacement(alpha, cutoff, pad=60):
    """Independent oracle: matrix exponential of the generator on a larger space."""
    a, ad = ladder_matrices(cutoff + pad)
    g = alpha * ad.entries - np.conj(alpha) * a.entries
    return expm(g)[: cutoff + 1, : cutoff + 1]


def mp_element(m, n, beta):
    """<m|D(beta)|n> in 40-digit arithmetic via the associated Laguerre form."""
    mpmath.mp.dps = 40
    beta = mpmath.mpc(beta.real, beta.imag)
    x = abs(beta) ** 2
    if m >= n:
        val = mpmath.sqrt(mpmath.factorial(n) / mpmath.factorial(m)) * beta ** (m - n) \
            * mpmath.laguerre(n, m - n, x)
    else:
        val = mpmath.sqrt(mpmath.factorial(m) / mpmath.factorial(n)) * (-mpmath.conj(beta)) ** (n - m) \
            * mpmath.laguerre(m, n - m, x)
    return complex(val * mpmath.exp(-x / 2))


class TestLadder:
    def test_cutoff_one(self):
        a, ad = ladder_matrices(1)
        assert np.count_nonzero(a.entries) == 1
        assert a.entries[0, 1] == 1.0

    def test_creation_entry(self):
        _, ad = ladder_matrices(3)
        assert ad.entries[3, 2] == pytest.approx(math.sqrt(3))

    def test_adjoint(self):
        a, ad = ladder_matrices(7)
        assert np.array_equal(ad.entries, a.entries.conj().T)

    def test_commutator_interior(self):
        a, ad = ladder_matrices(50)
        comm = a.entries @ ad.entries - ad.entries @ a.entries
        assert np.max(np.abs(comm[:50, :50] - np.eye(50))) < 1e-12
        assert comm[50, 50] == pytest.approx(-50)


class TestDisplacementOperator:
    def test_zero_is_identity(self):
        d = displacement_operator(0, 20)
        assert np.allclose(d.entries, np.eye(21))

    def test_vacuum_element(self):
        d = displacement_operator(1.0, 40)
        assert d.entries[0, 0] == pytest.approx(math.exp(-0.5), abs=1e-12)

    def test_unitary_block(self):
        d = displacement_operator(0.7, 60)
        m = d.entries[:, :41]
        assert np.max(np.abs(m.conj().T @ m - np.eye(41))) < 1e-10

    def test_refuses_small_cutoff(self):
        with pytest.raises(InsufficientCutoffError) as exc:
            displacement_operator(2.0, 10)
        assert exc.value.minimal_cutoff == DEFAULT_POLICY.cutoff_for(2.0)

    @pytest.mark.parametrize("alpha", [0.3, 1.0 + 0.5j, -1.5j, 2.0])
    def test_matches_matrix_exponential(self, alpha):
        cutoff = DEFAULT_POLICY.cutoff_for(alpha, 10)
        d = displacement_operator(alpha, cutoff, n_max=10)
        ref = expm_displacement(alpha, cutoff)
        assert np.max(np.abs(d.entries[:, :11] - ref[:, :11])) < 1e-10

    @pytest.mark.parametrize("alpha", [0.7, 2.5 - 1j, 3.0])
    def test_recurrence_matches_oracle(self, alpha):
        cutoff = DEFAULT_POLICY.cutoff_for(alpha, 30)
        d = displacement_operator(alpha, cutoff, n_max=30)
        e = displacement_elements(alpha, cutoff, 30)
        # the long-double oracle itself drifts to ~3e-10 at |alpha| = 3, n = 30
        assert np.max(np.abs(d.entries[:, :31] - e)) < ORACLE_TOL

    @pytest.mark.parametrize("m,n,beta", [(66, 0, 3.0), (80, 70, 2.0 + 1j), (3, 90, -2.5j),
                                          (120, 118, 4.0)])
    def test_recurrence_deep_entries_vs_mpmath(self, m, n, beta):
        e = displacement_elements(beta, max(m, n), max(m, n))
        assert abs(e[m, n] - mp_element(m, n, complex(beta))) < 1e-13

    @settings(max_examples=25, deadline=None)
    @given(complex_alpha, complex_alpha)
    def test_composition_phase(self, a, b):
        cutoff = DEFAULT_POLICY.cutoff_for(abs(a) + abs(b), 8) + 10
        lhs = displacement_elements(a, cutoff, cutoff) @ displacement_elements(b, cutoff, 8)
        rhs = cmath.exp(1j * (a * b.conjugate()).imag) * displacement_elements(a + b, cutoff, 8)
        assert np.max(np.abs(lhs[:20] - rhs[:20])) < 1e-9

    @settings(max_examples=25, deadline=None)
    @given(complex_alpha)
    def test_unitarity_property(self, alpha):
        cutoff = DEFAULT_POLICY.cutoff_for(alpha, 20)
        d = displacement_operator(alpha, cutoff, n_max=20)
        m = d.entries[:, :21]
        assert np.max(np.abs(m.conj().T @ m - np.eye(21))) < 1e-9


class TestDisplacedNumberStates:
    def test_vacuum_at_origin(self):
        v = displaced_number_state(0, 0, 12)
        assert np.allclose(v.amplitudes, np.eye(13)[0])

    def test_coherent_closed_form(self):
        cutoff = DEFAULT_POLICY.cutoff_for(1.5)
        v = displaced_number_state(0, 1.5, cutoff)
        n = np.arange(cutoff + 1)
        ref = np.exp(-1.125) * 1.5 ** n / np.array([math.sqrt(math.factorial(k)) for k in n])
        assert np.allclose(v.amplitudes, ref, atol=1e-13)
        assert np.allclose(coherent_state(1.5, cutoff).amplitudes, ref, atol=1e-13)

    def test_refuses_n_near_cutoff(self):
        with pytest.raises(InsufficientCutoffError):
            displaced_number_state(18, 0.5, 20)

    @pytest.mark.parametrize("n,alpha", [(3, 0.8), (0, 1.2j), (10, 1.5), (5, -1 + 1j)])
    def test_ladder_relations(self, n, alpha):
        cutoff = DEFAULT_POLICY.cutoff_for(alpha, n + 1)
        a, ad = ladder_matrices(cutoff)
        ket = displaced_number_state(n, alpha, cutoff).amplitudes
        # the last row of a truncated ladder operator misses |cutoff + 1>
        lower = (a.entries - alpha * np.eye(cutoff + 1)) @ ket
        ref = math.sqrt(n) * displaced_number_state(n - 1, alpha, cutoff).amplitudes if n else 0
        assert np.max(np.abs((lower - ref)[:-1])) < 1e-9
        upper = (ad.entries - np.conj(alpha) * np.eye(cutoff + 1)) @ ket
        ref = math.sqrt(n + 1) * displaced_number_state(n + 1, alpha, cutoff).amplitudes
        assert np.max(np.abs(upper[:-1] - ref[:-1])) < 1e-9

    @pytest.mark.parametrize("n,alpha,expected", [(2, 1.5, 4.25), (0, 0.5, 0.25)])
    def test_mean_photon_number(self, n, alpha, expected):
        v = displaced_number_state(n, alpha, DEFAULT_POLICY.cutoff_for(alpha, n))
        assert mean_photon_number(v) == pytest.approx(expected, abs=1e-8)

    def test_mean_photon_number_fock(self):
        assert mean_photon_number(fock_state(2, 5)) == 2

    def test_mean_photon_number_rejects_unnormalized(self):
        with pytest.raises(ValueError):
            mean_photon_number(FockVector([1.0, 1.0]))

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10), complex_alpha)
    def test_energy_property(self, n, alpha):
        v = displaced_number_state(n, alpha, DEFAULT_POLICY.cutoff_for(alpha, n))
        assert mean_photon_number(v) == pytest.approx(n + abs(alpha) ** 2, abs=1e-8)


class TestTmsv:
    def test_zero_squeezing(self):
        s = tmsv_state(0.0, (3, 3))
        assert s.amplitudes[0, 0] == 1.0
        assert np.count_nonzero(s.amplitudes) == 1

    def test_ratio(self):
        s = tmsv_state(0.5, (30, 30))
        assert s.amplitudes[1, 1] / s.amplitudes[0, 0] == pytest.approx(0.462117, abs=1e-6)

    def test_norm(self):
        s = tmsv_state(0.3, (20, 20))
        assert abs(s.norm_squared() - 1) < 1e-12

    def test_diagonal_only(self):
        s = tmsv_state(0.8, (40, 40)).amplitudes
        assert np.all(s[~np.eye(41, dtype=bool)] == 0)

    def test_minimal_cutoff_is_sufficient(self):
        with pytest.raises(InsufficientCutoffError) as exc:
            tmsv_state(1.0, (5, 5))
        need = exc.value.minimal_cutoff
        s = tmsv_state(1.0, (need, need))
        assert 1 - s.norm_squared() <= DEFAULT_POLICY.tail_tol
        assert need == tmsv_minimal_cutoff(1.0, DEFAULT_POLICY.tail_tol)


class TestSqueeze:
    def test_zero_is_identity(self):
        assert np.allclose(single_mode_squeeze(0.0, 10).entries, np.eye(11))

    def test_odd_amplitudes_vanish(self):
        v = single_mode_squeeze(0.4, 40).entries[:, 0]
        assert np.max(np.abs(v[1::2])) < 1e-15

    def test_vacuum_amplitude(self):
        value = abs(single_mode_squeeze(0.4, 40).entries[0, 0])
        assert value == pytest.approx(1 / math.sqrt(math.cosh(0.4)), abs=1e-12)
        assert value == pytest.approx(0.961773, abs=1e-6)

    def test_squeezed_vacuum_expansion(self):
        r = 0.7
        v = single_mode_squeeze(r, 60).entries[:, 0]
        k = np.arange(15)
        mags = np.array([math.sqrt(math.factorial(2 * j)) / (2 ** j * math.factorial(j)) for j in k])
        ref = mags * math.tanh(r) ** k / math.sqrt(math.cosh(r))
        assert np.allclose(np.abs(v[: 30: 2]), ref, atol=1e-12)

    @pytest.mark.parametrize("r,n_max", [(0.5, 20), (1.2, 10), (2.0, 3)])
    def test_unitary_block(self, r, n_max):
        cutoff = DEFAULT_POLICY.squeeze_cutoff(r, n_max)
        op = single_mode_squeeze(r, cutoff, n_max=n_max)
        assert op.unitarity_deviation(n_max) < 1e-9


class TestFidelity:
    def test_self(self):
        x = coherent_state(0.5, 20)
        assert fidelity(x, x) == pytest.approx(1.0)

    def test_orthogonal(self):
        assert fidelity(fock_state(0, 3), fock_state(1, 3)) == 0.0

    def test_coherent_overlap(self):
        c = DEFAULT_POLICY.cutoff_for(0.6)
        f = fidelity(coherent_state(0.6, c), coherent_state(-0.6, c))
        assert f == pytest.approx(math.exp(-4 * 0.36), abs=1e-9)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            fidelity(fock_state(0, 3), fock_state(0, 4))

    def test_multimode_product(self):
        s = MultiModeState.product(fock_state(1, 2), coherent_state(0.3, 20))
        assert s.amplitudes.shape == (3, 21)
        assert inner_product(s, s) == pytest.approx(1.0)


class TestPolicy:
    @settings(max_examples=50)
    @given(st.floats(0, 5), st.floats(0, 5), st.integers(0, 30), st.integers(0, 30))
    def test_monotone(self, a1, a2, n1, n2):
        p = CutoffPolicy()
        lo_a, hi_a = sorted((a1, a2))
        lo_n, hi_n = sorted((n1, n2))
        assert p.cutoff_for(lo_a, lo_n) <= p.cutoff_for(hi_a, hi_n)

    def test_interior_inverts_cutoff_for(self):
        p = CutoffPolicy()
        c = p.cutoff_for(1.3, 12)
        assert p.interior(c, 1.3) == 12

    def test_operator_unitarity_helper(self):
        op = OperatorMatrix(np.eye(4))
        assert op.unitarity_deviation() == 0.0
