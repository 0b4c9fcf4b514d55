"""Displaced number states and changes between displaced bases.

Run with ``python3 demos/displaced_basis.py``.
"""

# %% A single photon seen from a displaced basis
import numpy as np

from dfock import (FockVector, change_basis, coefficient_c, count_local_maxima, displaced_distribution,
                   fock_state, magic_alpha, magic_imbalance, to_alpha_representation)

for l in (1, 2, 3):
    p = displaced_distribution(fock_state(l, l), 3.0, 60)
    print(f"|{l}> at alpha=3: {count_local_maxima(p)} peaks, most likely n = {int(np.argmax(p))}")

# %% Expansion coefficients: |l> = exp(-|alpha|^2/2) sum_n c_ln(alpha) |n, alpha>
alpha = 0.7
row = [abs(coefficient_c(1, n, alpha)) for n in range(5)]
print("|c_1n(0.7)|, n = 0..4:", np.round(row, 4))

# at the golden-ratio amplitude the |0, alpha> and |1, alpha> weights of |1> balance
a = magic_alpha()
print(f"magic amplitude {a:.6f}: imbalance {magic_imbalance(a):.1e}")

# %% Round trip between two displaced bases
psi = FockVector(np.array([0.6, 0.8j]))
rep = to_alpha_representation(psi, 1.2 - 0.4j)
print(f"alpha-representation at 1.2-0.4j uses {rep.cutoff + 1} coefficients, norm {rep.norm_squared():.12f}")
back = change_basis(rep.amplitudes, 1.2 - 0.4j, 0.0, cutoff=5)
print("back in the Fock basis:", np.round(back[:3], 12))
