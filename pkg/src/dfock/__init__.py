"""Displaced number states, basis transformations and heralded optical gates."""

from .analytic import (alpha_for_delta, delta_probabilities, delta_superposition, hadamard_alpha,
                       magic_alpha, magic_imbalance, norm_factor, optimal_scs_fidelity,
                       scs_approx_fidelity, tmsv_alpha_rep, tmsv_delta, tmsv_probabilities)
from .basis import (AlphaRepresentation, TransformMatrix, change_basis, coefficient_c,
                    count_local_maxima, displaced_distribution, from_alpha_representation,
                    to_alpha_representation, transform_matrix)
from .circuit import (ApdMeasurement, BeamSplitter, Circuit, CoherentFrameState, Displacement,
                      PhaseShifter, PnrdMeasurement, apply_beam_splitter, displace_via_ubs,
                      measure_apd, project_pnrd)
from .errors import HeadroomError, ImprobableOutcomeError, InsufficientCutoffError
from .fock import (DEFAULT_POLICY, CutoffPolicy, FockVector, MultiModeState, OperatorMatrix,
                   coherent_state, displacement_operator, fidelity, fock_state, tmsv_state)
from .gates import (GateReport, apd_ratio_curves, cz_sign_pattern, hadamard_involution_fidelity,
                    run_cz_direct, run_cz_interferometer, run_hadamard_hybrid,
                    run_hadamard_inverse, run_hadamard_micro)

__version__ = "0.1.0"
