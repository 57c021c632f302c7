"""Spectrum-analyser qubit coupled to the position of mode 1.

The qubit's Golden-Rule rates sample S_xx,1 at -/+ its transition frequency;
its steady-state populations give a signed temperature.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidParameter, Undefined
from .response import (LINEAR, PC, ForceModel, ReducedNoise, ResponseSet,
                       force_position_spectrum, intrinsic_position_spectrum, reduced_noise)

INFINITE_TEMPERATURE = math.inf


@dataclass(frozen=True)
class QubitRates:
    rate_up: float
    rate_down: float
    decay: float


@dataclass(frozen=True)
class QubitState:
    p_e: float
    p_g: float
    T_qubit: float
    # True when p_e == p_g and T_qubit is the +/- infinity sentinel
    infinite: bool = False


def golden_rule_rates(A, Sxx_at_minus_Omega1, Sxx_at_plus_Omega1, decay=0.0) -> QubitRates:
    if Sxx_at_minus_Omega1 < 0 or Sxx_at_plus_Omega1 < 0:
        raise InvalidParameter("Sxx", "spectral densities must be >= 0")
    if decay < 0:
        raise InvalidParameter("decay", "must be >= 0")
    return QubitRates(A ** 2 * Sxx_at_minus_Omega1, A ** 2 * Sxx_at_plus_Omega1, decay)


def steady_state(rates: QubitRates, omega_q=1.0) -> QubitState:
    down = rates.rate_down + rates.decay
    total = rates.rate_up + down
    if not total > 0:
        raise Undefined("all transition rates vanish")
    p_e = rates.rate_up / total
    p_g = down / total
    if rates.rate_up == 0:
        return QubitState(0.0, 1.0, 0.0)
    if rates.rate_up == down:
        return QubitState(p_e, p_g, INFINITE_TEMPERATURE, infinite=True)
    # ratio of rates avoids cancellation in p_g / p_e
    return QubitState(p_e, p_g, omega_q / math.log(down / rates.rate_up))


def qubit_temperature(rs: ResponseSet, fm: ForceModel, noise: ReducedNoise, A=1.0, decay=0.0,
                      omega_q=None) -> QubitState:
    wq = rs.Omega[0] if omega_q is None else omega_q
    pts = np.array([-wq, wq])
    S = force_position_spectrum(1, rs, fm, pts) if fm is not None else np.zeros(2)
    if noise is not None:
        S = S + intrinsic_position_spectrum(1, rs, noise, pts)
    rates = golden_rule_rates(A, float(S[0]), float(S[1]), decay)
    return steady_state(rates, wq)


@dataclass(frozen=True)
class ReadoutSetup:
    """Everything the sweeps need besides the swept variable."""

    Omega: tuple = (1.0, 1.5)
    Gamma: tuple = (0.1, 0.1)
    C: float = 0.025
    gamma: tuple = None
    n_bath: tuple = (0.0, 0.0)
    A: float = 1.0
    decay: float = 0.01
    S0: float = 1.0
    sigma_F: float = 0.005
    omega_0: float = None
    T_eff: float = 10.0
    target: str = "both"
    force_kind: str = "bose"
    include_noise: bool = True

    @classmethod
    def from_config(cls, cfg, C, **overrides):
        fm = cfg.force
        kw = dict(Omega=tuple(cfg.Omega), Gamma=tuple(cfg.Gamma), C=float(C),
                  gamma=tuple(m.gamma for m in cfg.modes), n_bath=tuple(m.n_bath for m in cfg.modes),
                  A=cfg.qubit.A, decay=cfg.qubit.Gamma_decay)
        if fm is not None:
            kw.update(S0=fm.S0, sigma_F=fm.sigma_F, omega_0=fm.omega_0, T_eff=fm.T_eff,
                      target=fm.target, force_kind=fm.kind)
        kw.update(overrides)
        return cls(**kw)

    def response(self, kind):
        return ResponseSet(tuple(self.Omega), tuple(self.Gamma), self.C, kind)

    def force(self, **changes):
        w0 = self.Omega[1] if self.omega_0 is None else self.omega_0
        fm = ForceModel(self.T_eff, self.sigma_F, w0, self.S0, self.target, self.force_kind)
        return replace(fm, **changes) if changes else fm

    def noise(self, rs):
        if not self.include_noise:
            return None
        gamma = self.Gamma if self.gamma is None else self.gamma
        return reduced_noise(rs, gamma, self.n_bath)


def _curve(setup: ReadoutSetup, coupling_kind, param, values):
    kind = {"pc": PC, "PhaseConjugate": PC, "linear": LINEAR, "Linear": LINEAR}[coupling_kind]
    rs = setup.response(kind)
    noise = setup.noise(rs)
    out = np.empty(len(values))
    for i, v in enumerate(values):
        st = qubit_temperature(rs, setup.force(**{param: float(v)}), noise, setup.A, setup.decay)
        out[i] = st.T_qubit
    return out


def temperature_vs_force_temperature(setup: ReadoutSetup, coupling_kind, T_grid):
    return _curve(setup, coupling_kind, "T_eff", np.asarray(T_grid, dtype=float))


def temperature_vs_width(setup: ReadoutSetup, coupling_kind, sigma_grid):
    return _curve(setup, coupling_kind, "sigma_F", np.asarray(sigma_grid, dtype=float))


def high_temperature_slope(T_grid, T_qubit, T_min=10.0):
    """Least-squares slope of T_qubit against T_eff over T_eff >= T_min."""
    T_grid = np.asarray(T_grid, dtype=float)
    sel = T_grid >= T_min
    if sel.sum() < 2:
        raise InvalidParameter("T_grid", f"need at least two points with T_eff >= {T_min}")
    return float(np.polyfit(T_grid[sel], np.asarray(T_qubit)[sel], 1)[0])
