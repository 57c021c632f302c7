"""Time-domain models: generators, moment integration, stochastic ensembles,
the phase-conjugate echo and the reduced-model validation."""
from .generators import (Generator, build_full_generator, build_rwa_generator, rwa_from_design,
                         floquet_exponents, full_model_floquet, to_lab_frame)
from .integrate import (Trajectory, check_step, commutator_deviation, commutator_of,
                        integrate_covariance, integrate_first_moments, propagator,
                        vacuum_covariance)
from .ensemble import (Ensemble, Periodogram, expected_periodogram, monte_carlo_ensemble,
                       periodogram_spectrum)
from .echo import (EchoPlan, EchoResult, EchoSweep, ForceSignal, echo_protocol, echo_residual_sweep,
                   matched_amplitudes, phase_conjugate_swap, pulse_swap, residual_bracket)
from .validation import RWAReport, derive_bare_modes, self_energy, validate_rwa
