import json
import math

import numpy as np
import pytest

from dfock.analytic import magic_alpha
from dfock.fock import MultiModeState, coherent_state, fidelity, tmsv_state
from dfock.gates import (apd_ratio_curves, coherent_basis, cz_sign_pattern, hadamard_involution_fidelity,
                         hybrid_basis, hybrid_states, interferometer_circuit,
                         interferometer_identity_fidelity, interferometer_layout, micro_basis,
                         micro_hadamard_target, run_cz_direct, run_cz_interferometer,
                         run_hadamard_hybrid, run_hadamard_inverse, run_hadamard_micro)

H = 1 / math.sqrt(2)


def overlap_on_common_support(x, y):
    n = tuple(slice(0, min(a, b) + 1) for a, b in zip(x.cutoffs, y.cutoffs))
    return abs(np.vdot(x.amplitudes[n], y.amplitudes[n])) ** 2


class TestBases:
    def test_coherent_overlap(self):
        basis = coherent_basis(0.6)
        assert basis.overlap == pytest.approx(math.exp(-4 * 0.36), rel=1e-10)

    def test_micro_orthogonal(self):
        assert micro_basis().overlap == 0

    def test_hybrid_orthogonal(self):
        assert hybrid_basis(1.3).overlap <= 1e-9
        plus, minus = hybrid_states(1.3)
        assert abs(plus.inner(minus)) <= 1e-9


class TestInterferometer:
    @pytest.mark.parametrize("a,b", [(1, 0), (0, 1), (0.6, 0.8j), (H, -H)])
    def test_identity_without_couplers(self, a, b):
        assert interferometer_identity_fidelity(a, b) >= 1 - 1e-9

    def test_matches_plain_fock_simulation(self):
        """The frame engine against the same circuit on ordinary Fock tensors."""
        a, b = 0.6, 0.8
        layout = interferometer_layout(0.3, 0.3)
        c = 24
        qubit = a * coherent_state(layout.beta0, c).amplitudes + b * coherent_state(-layout.beta0, c).amplitudes
        pair = np.pad(tmsv_state(0.3, (8, 8)).amplitudes, ((0, 8), (0, 8)))
        arm = np.eye(c + 1)[0]
        inp = MultiModeState(qubit[:, None, None, None] * arm[None, :, None, None] * pair[None, None]).normalized()
        brute = interferometer_circuit(layout).run(inp)
        rep = run_cz_interferometer(a, b, r_bs=0.3)
        assert rep.success_probability == pytest.approx(brute.probability, rel=1e-7)
        assert overlap_on_common_support(rep.output.state, brute.state) >= 1 - 1e-9

    def test_fidelity_improves_with_weaker_coupling(self):
        f = [run_cz_interferometer(H, H, r_bs=r).fidelity for r in (0.3, 0.2, 0.1)]
        assert f[0] < f[1] < f[2]

    def test_sign_pattern(self):
        g = cz_sign_pattern()
        assert np.all(np.abs(g.imag) < 1e-9)
        assert list(np.sign(g.real)) == [1, 1, 1, -1]
        # magnitudes agree to the order of the finite-coupling error
        assert np.min(np.abs(g)) > 0.98

    def test_report_json(self):
        rep = run_cz_interferometer(0.6, 0.8)
        d = json.loads(rep.to_json())
        assert d["fidelity"] == pytest.approx(rep.fidelity)
        assert d["parameters"]["gate"] == "cz"
        assert len(d["branch_amplitudes"]) == 4
        assert 0 < d["success_probability"] < 1

    def test_rejects_unnormalized_qubit(self):
        with pytest.raises(ValueError):
            run_cz_interferometer(1, 1)

    def test_layout_validation(self):
        with pytest.raises(ValueError):
            interferometer_layout(0.0, 0.2)
        with pytest.raises(ValueError):
            interferometer_layout(0.3, 1.0)
        with pytest.warns(UserWarning):
            interferometer_layout(0.3, 0.5)


class TestCzDirect:
    @pytest.mark.parametrize("a,b", [(1, 0), (0.6, 0.8)])
    def test_high_fidelity(self, a, b):
        rep = run_cz_direct(a, b, H, H, T=0.99)
        assert rep.fidelity >= 0.99
        assert rep.parameters["beta_in"] == pytest.approx(magic_alpha() * math.sqrt(99))

    def test_closer_to_limit_is_better(self):
        f = [run_cz_direct(0.6, 0.8, H, H, T=T).fidelity for T in (0.95, 0.99)]
        assert f[0] < f[1]

    def test_bad_transmittance(self):
        with pytest.raises(ValueError):
            run_cz_direct(1, 0, H, H, T=1.0)


class TestHadamard:
    def test_hybrid_weights(self):
        rep = run_hadamard_hybrid(H, H)
        assert rep.extras["phi_overlap"] <= 1e-9
        assert rep.extras["phi_weights"][1] < 0.02
        assert rep.extras["phi_weights"][0] == pytest.approx(rep.fidelity, abs=1e-9)

    def test_hybrid_minus_branch(self):
        rep = run_hadamard_hybrid(H, -H)
        assert rep.extras["phi_weights"][0] < 0.02

    def test_micro_target(self):
        assert np.allclose(micro_hadamard_target(1, 0, 1), [H, H])
        assert np.allclose(micro_hadamard_target(1, 0, 2), [H, H])
        assert np.allclose(micro_hadamard_target(0, 1, 1), [H, -H])
        assert np.allclose(micro_hadamard_target(0, 1, 2), [-H, H])

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_micro_parity_swap(self, n):
        a, b = 0.6, 0.8
        rep = run_hadamard_micro(a, b, n_detect=n)
        out = rep.output.state
        wrong = micro_hadamard_target(a, b, n + 1)
        wrong_state = MultiModeState(np.pad(wrong[None, :], [(0, c + 1 - s) for c, s in zip(out.cutoffs, (1, 2))]))
        assert rep.fidelity > 0.95
        assert fidelity(out, wrong_state) < 0.1

    def test_inverse(self):
        rep = run_hadamard_inverse(0.6, 0.8)
        assert rep.fidelity > 0.99

    def test_involution(self):
        f, p = hadamard_involution_fidelity(0.6, 0.8)
        assert f >= 0.9
        assert 0 < p < 1


class TestApdRatios:
    def test_monotone_and_large_at_weak_squeezing(self):
        rows = apd_ratio_curves(1.0, [0.2, 0.5, 1.0], 5)
        assert rows[0][1] > 10
        for col in range(1, 5):
            values = [r[col] for r in rows]
            assert all(x > y for x, y in zip(values, values[1:]))

    def test_rejects_small_kmax(self):
        with pytest.raises(ValueError):
            apd_ratio_curves(1.0, [0.2], 1)
