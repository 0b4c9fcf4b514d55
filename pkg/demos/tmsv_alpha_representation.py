"""Two-mode squeezed vacuum expanded over a displaced basis of one mode.

Projecting mode 2 onto |n, alpha> leaves mode 1 in a displaced copy of
Psi_n.  The script compares the closed form with a direct projection of the
Fock-space state.

Run with ``python3 demos/tmsv_alpha_representation.py``.
"""

# %%
import math

import numpy as np

from dfock import FockVector, fidelity, tmsv_alpha_rep, tmsv_state
from dfock.fock import displacement_elements

r, alpha, cutoff = 0.8, 1.0, 60
rep = tmsv_alpha_rep(r, alpha, 4, cutoff=cutoff)
print(f"r={r}, alpha={alpha}: delta={rep.delta:.4f}, shift beta={rep.beta:.4f}")
print("herald probabilities P_n:", np.round(rep.P_n, 6))

# %% Direct projection on the truncated two-mode state
pair = tmsv_state(r, (cutoff, cutoff)).amplitudes
shift = displacement_elements(rep.beta, cutoff, cutoff)
for n in range(5):
    v = pair @ displacement_elements(alpha, cutoff, n)[:, n].conj()
    p = float(np.vdot(v, v).real)
    f = fidelity(FockVector(v / math.sqrt(p)), FockVector(shift @ rep.psi_n[n].amplitudes))
    print(f"n={n}: projected probability {p:.8f}, closed form {rep.P_n[n]:.8f}, fidelity {f:.12f}")
