"""Approximating small cat states with a squeezed vacuum or squeezed photon.

Run with ``python3 demos/cat_states.py``.
"""

# %%
from dfock import optimal_scs_fidelity

for parity in ("even", "odd"):
    for alpha in (0.5, 0.75, 1.0, 1.5, 2.0):
        r, f = optimal_scs_fidelity(alpha, parity)
        print(f"{parity} cat, alpha={alpha}: best squeezing r={r:.4f}, fidelity {f:.5f}")
