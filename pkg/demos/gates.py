"""Heralded gates on coherent-state qubits.

Every report carries the heralded state, its fidelity with the ideal output
at the same finite parameters and the success probability.

Run with ``python3 demos/gates.py``.
"""

# %%
import math

from dfock import (apd_ratio_curves, cz_sign_pattern, hadamard_involution_fidelity, run_cz_direct,
                   run_cz_interferometer, run_hadamard_hybrid, run_hadamard_micro)

h = 1 / math.sqrt(2)

# %% Controlled sign between a coherent qubit and a vacuum/photon qubit
for r_bs in (0.3, 0.2, 0.1):
    rep = run_cz_interferometer(h, h, s=0.3, r_bs=r_bs)
    print(f"CZ r_bs={r_bs}: fidelity {rep.fidelity:.5f}, success {rep.success_probability:.4f}")
print("diagonal after phase alignment:", [round(float(x.real), 4) for x in cz_sign_pattern()])

rep = run_cz_direct(0.6, 0.8, h, h, T=0.99)
print(f"CZ with an auxiliary mode, T=0.99: fidelity {rep.fidelity:.5f}")

# %% Hadamard into the hybrid basis, into vacuum/photon, and back again
rep = run_hadamard_hybrid(h, h)
print(f"hybrid Hadamard: fidelity {rep.fidelity:.5f}, Phi weights {rep.extras['phi_weights']}")
for n in (1, 2, 3):
    rep = run_hadamard_micro(0.6, 0.8, n_detect=n)
    print(f"micro Hadamard, {n} photon(s) heralded: fidelity {rep.fidelity:.5f}")
f, p = hadamard_involution_fidelity(0.6, 0.8)
print(f"Hadamard then its inverse: fidelity {f:.5f}, overall success {p:.4f}")

# %% Why a weakly squeezed resource suits an on/off detector
for row in apd_ratio_curves(1.0, [0.1, 0.2, 0.5, 1.0], 3):
    print(f"s={row[0]}: P1/P2={row[1]:.2f}, P1/P3={row[2]:.2f}")
