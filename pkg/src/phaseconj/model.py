"""Physical parameters of the two-mode optomechanical system.

Units are natural (hbar = k_B = 1): every frequency, rate and temperature is
expressed in the same inverse-time unit.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

from .errors import InvalidParameter, RegimeUnavailable


@dataclass(frozen=True)
class CavityParams:
    omega_c: float
    kappa: float


@dataclass(frozen=True)
class MechMode:
    """Bare mechanical mode: frequency, intrinsic damping, single-photon coupling
    and thermal bath occupation."""

    omega: float
    gamma: float
    g: float
    n_bath: float = 0.0


@dataclass(frozen=True)
class EffectiveMode:
    """Mode frequency and damping after optical spring and cold damping."""

    Omega: float
    Gamma: float


@dataclass(frozen=True)
class DriveTone:
    eta: complex
    omega_L: float
    Delta: float

    @classmethod
    def at(cls, eta, omega_L, omega_c):
        return cls(complex(eta), float(omega_L), float(omega_c) - float(omega_L))


@dataclass(frozen=True)
class QubitParams:
    A: float = 1.0
    Gamma_decay: float = 0.01
    # None means "use effective[0].Omega"
    omega_q: Optional[float] = None


@dataclass(frozen=True)
class SystemConfig:
    cavity: CavityParams
    modes: Tuple[MechMode, MechMode]
    effective: Tuple[EffectiveMode, EffectiveMode]
    drives: Tuple[DriveTone, DriveTone]
    qubit: QubitParams = field(default_factory=QubitParams)
    force: object = None
    branch: int = 1
    pc_design: bool = True

    @property
    def Omega(self):
        return (self.effective[0].Omega, self.effective[1].Omega)

    @property
    def Gamma(self):
        return (self.effective[0].Gamma, self.effective[1].Gamma)

    @property
    def qubit_frequency(self):
        q = self.qubit.omega_q
        return self.effective[0].Omega if q is None else q


@dataclass(frozen=True)
class ValidatedConfig:
    cfg: SystemConfig
    pc_available: bool
    separation_ratio: float  # kappa / |Omega1 - Omega2|

    def __getattr__(self, name):
        # delegate field access so a ValidatedConfig can stand in for its config
        return getattr(self.cfg, name)


def _require(cond, name, message):
    if not cond:
        raise InvalidParameter(name, message)


def _finite(x):
    return math.isfinite(abs(x))


def validate_config(cfg: SystemConfig) -> ValidatedConfig:
    """Check every type invariant; raise on the first violation."""
    cav = cfg.cavity
    _require(_finite(cav.kappa) and cav.kappa > 0, "cavity.kappa", f"must be > 0, got {cav.kappa}")
    _require(_finite(cav.omega_c) and cav.omega_c > 0, "cavity.omega_c", f"must be > 0, got {cav.omega_c}")
    _require(len(cfg.modes) == 2, "modes", "exactly two mechanical modes")
    _require(len(cfg.effective) == 2, "effective", "exactly two effective modes")
    _require(len(cfg.drives) == 2, "drives", "exactly two drive tones")
    for j, m in enumerate(cfg.modes):
        _require(_finite(m.omega) and m.omega > 0, f"modes[{j}].omega", f"must be > 0, got {m.omega}")
        _require(_finite(m.gamma) and m.gamma >= 0, f"modes[{j}].gamma", f"must be >= 0, got {m.gamma}")
        _require(_finite(m.g), f"modes[{j}].g", "must be finite")
        _require(_finite(m.n_bath) and m.n_bath >= 0, f"modes[{j}].n_bath", f"must be >= 0, got {m.n_bath}")
    for j, e in enumerate(cfg.effective):
        _require(_finite(e.Omega) and e.Omega > 0, f"effective[{j}].Omega", f"must be > 0, got {e.Omega}")
        _require(_finite(e.Gamma) and e.Gamma >= 0, f"effective[{j}].Gamma", f"must be >= 0, got {e.Gamma}")
    for j, d in enumerate(cfg.drives):
        _require(_finite(d.eta) and _finite(d.omega_L), f"drives[{j}]", "must be finite")
        _require(d.Delta == cav.omega_c - d.omega_L, f"drives[{j}].Delta",
                 "must equal omega_c - omega_L exactly")
    q = cfg.qubit
    _require(_finite(q.A) and q.A >= 0, "qubit.A", f"must be >= 0, got {q.A}")
    _require(_finite(q.Gamma_decay) and q.Gamma_decay >= 0, "qubit.Gamma_decay",
             f"must be >= 0, got {q.Gamma_decay}")
    if q.omega_q is not None:
        _require(q.omega_q > 0, "qubit.omega_q", "must be > 0")
    _require(cfg.branch in (1, -1), "branch", "must be +1 or -1")

    sep = abs(cfg.effective[0].Omega - cfg.effective[1].Omega)
    pc_available = sep > cav.kappa
    if cfg.pc_design and not pc_available:
        raise RegimeUnavailable(
            f"|Omega1 - Omega2| = {sep:g} must exceed kappa = {cav.kappa:g} for phase conjugation")
    ratio = cav.kappa / sep if sep > 0 else math.inf
    return ValidatedConfig(cfg, pc_available, ratio)


def natural_units_normalize(cfg: SystemConfig, reference: float) -> SystemConfig:
    """Divide every frequency, rate and temperature by ``reference``."""
    if not (reference > 0 and math.isfinite(reference)):
        raise InvalidParameter("reference", f"must be > 0, got {reference}")
    if reference == 1:
        return cfg
    r = float(reference)
    cavity = CavityParams(cfg.cavity.omega_c / r, cfg.cavity.kappa / r)
    modes = tuple(MechMode(m.omega / r, m.gamma / r, m.g / r, m.n_bath) for m in cfg.modes)
    effective = tuple(EffectiveMode(e.Omega / r, e.Gamma / r) for e in cfg.effective)
    drives = tuple(DriveTone(d.eta / r, d.omega_L / r, d.Delta / r) for d in cfg.drives)
    q = cfg.qubit
    qubit = QubitParams(q.A / r, q.Gamma_decay / r, None if q.omega_q is None else q.omega_q / r)
    force = cfg.force.scaled(r) if cfg.force is not None else None
    return replace(cfg, cavity=cavity, modes=modes, effective=effective, drives=drives,
                   qubit=qubit, force=force)
