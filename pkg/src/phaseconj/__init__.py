"""Phase-conjugate coupling of two optomechanical modes: drive design, response
and noise spectra, qubit temperature readout, time-domain dynamics and echo."""
from .errors import (DegenerateProduct, GridMiss, InvalidParameter, NonPSDDiffusion, PhaseConjError,
                     PlanMismatch, RegimeUnavailable, SingularPoint, StepTooLarge, Undefined,
                     WindowTooShort)
from .model import (CavityParams, DriveTone, EffectiveMode, MechMode, QubitParams, SystemConfig,
                    ValidatedConfig, natural_units_normalize, validate_config)

__version__ = "0.1.0"
