"""Optimal phase-covariant cloning and transposition channels.

The package builds symmetry-reduced semidefinite programs for 1->2 phase-covariant
maps, solves them with a log-barrier method, certifies closed-form optima with
dual pairs and cross-checks everything with seeded Monte Carlo.
"""

from .qcore import (MAX_DIM, ChannelChoi, DimensionError, DomainError, apply_channel,
                    choi_from_kraus, max_entangled, partial_trace, partial_transpose,
                    phase_state, random_channel)
from .symmetry import (CLONER_AVERAGING, HYBRID_AVERAGING, TRANSPOSE_AVERAGING,
                       TRANSPOSE_CLONER_AVERAGING, AveragingSpec, PhaseSignature, average_choi,
                       phase_twirl, subsystem_permutation)
from .bases import BasisFamily, ReducedPoint, assemble, build_family, coefficients
from .sdp import (SdpCertificate, SdpProblem, SolveResult, certificates_for, ew_linear_program,
                  solve_primal, verify_certificate)
from .oracle import SamplerConfig, SamplingMode, haar_unitary, mc_process_fidelity
from .cloners import (MapKind, closed_form_fidelity, optimal_channel, process_fidelity_analytic,
                      reference_table, single_qudit_fidelity)
from .composition import WiringSpec, compose, modular_report

__version__ = "0.1.0"
