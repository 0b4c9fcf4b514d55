"""Linear-optics building blocks: beam splitters, displacement by an
unbalanced beam splitter and heralding detectors.

Run with ``python3 demos/circuits.py``.
"""

# %% Hong-Ou-Mandel dip on a balanced beam splitter
import math

import numpy as np

from dfock import (BeamSplitter, Circuit, MultiModeState, PnrdMeasurement, apply_beam_splitter,
                   coherent_state, fock_state, measure_apd, tmsv_state)
from dfock.circuit import ubs_fidelity_gap

h = 1 / math.sqrt(2)
out = apply_beam_splitter(MultiModeState.product(fock_state(1, 2), fock_state(1, 2)), BeamSplitter(h, h))
print("P(1,1) after a 50:50 splitter:", round(abs(out.amplitudes[1, 1]) ** 2, 15))

# %% A strong coherent ancilla on a high-transmittance splitter approximates D(beta)
for T in (0.9, 0.99, 0.999):
    print(f"T={T}: fidelity with D(0.3)|1> = {1 - ubs_fidelity_gap(fock_state(1, 1), 0.3, T):.6f}")

# %% Heralding on a TMSV
r = 0.6
circuit = Circuit(2, (PnrdMeasurement(1, 1),))
res = circuit.run(tmsv_state(r, (30, 30)))
print(f"one photon heralded with probability {res.probability:.6f}; mode 0 holds |1>: "
      f"{abs(res.state.amplitudes[1]) ** 2:.6f}")
click = measure_apd(MultiModeState.product(coherent_state(0.5, 25)), 0, "click")
print(f"APD click on |0.5>: {click.probability:.6f} (1 - exp(-0.25) = {1 - math.exp(-0.25):.6f})")

# %% Circuits serialize to JSON
print(Circuit(2, (BeamSplitter(0.6, 0.8, math.pi, (0, 1)), PnrdMeasurement(1, 0))).to_json())
