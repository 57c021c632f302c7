"""Two-colour drive design for phase-conjugate coupling of the mechanical modes.

Picks the laser frequencies whose beat note bridges Omega1 + Omega2, evaluates
the resulting mode-mode coupling constants and classifies the interaction.
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import DegenerateProduct, InvalidParameter, RegimeUnavailable
from .model import DriveTone, SystemConfig, validate_config

PHASE_CONJUGATION = "PhaseConjugation"
PARAMETRIC_AMPLIFICATION = "ParametricAmplification"
MIXED = "Mixed"

SYMMETRY_RTOL = 1e-6


@dataclass(frozen=True)
class MeanField:
    alpha: Tuple[complex, complex]
    omega_L: Tuple[float, float]

    def as_function(self, t):
        t = np.asarray(t, dtype=float)
        return sum(a * np.exp(-1j * w * t) for a, w in zip(self.alpha, self.omega_L))


@dataclass(frozen=True)
class Regime:
    kind: str
    eigenvalues: Tuple[complex, complex]


@dataclass(frozen=True)
class CouplingDesign:
    omega_L: Tuple[float, float]
    branch: int
    alpha: Tuple[complex, complex]
    Delta: Tuple[float, float]
    C1_plus: complex
    C2_plus_conj: complex
    product: complex
    regime: Regime
    C: float
    phase_rotations: Tuple[float, float]
    asymmetry: float  # |C2+| / |C1+|
    symmetric: bool


def mean_field_amplitude(eta, kappa, Delta):
    if not kappa > 0:
        raise InvalidParameter("kappa", f"must be > 0, got {kappa}")
    return -1j * complex(eta) / (kappa / 2 + 1j * Delta)


def drive_detunings(Omega1, Omega2, kappa, branch=1):
    """Detunings Delta_l = omega_c - omega_Ll of the phase-conjugating tones, computed
    without forming the absolute frequencies (no loss to the size of omega_c)."""
    if branch not in (1, -1):
        raise InvalidParameter("branch", "must be +1 or -1")
    d = abs(Omega1 - Omega2)
    # factored to avoid cancellation as kappa approaches |Omega1 - Omega2|
    split2 = (d - kappa) * (d + kappa)
    if not split2 > 0:
        raise RegimeUnavailable(
            f"|Omega1 - Omega2| = {abs(Omega1 - Omega2):g} must exceed kappa = {kappa:g}")
    root = branch * math.sqrt(split2) / 2
    half_sum = (Omega1 + Omega2) / 2
    return half_sum - root, -half_sum - root


def select_drive_frequencies(Omega1, Omega2, omega_c, kappa, branch=1):
    """Laser frequencies realising pure phase conjugation.

    Both branches share the same beat note ``omega_L2 - omega_L1 = Omega1 + Omega2``.
    """
    if branch not in (1, -1):
        raise InvalidParameter("branch", "must be +1 or -1")
    d = abs(Omega1 - Omega2)
    # factored to avoid cancellation as kappa approaches |Omega1 - Omega2|
    split2 = (d - kappa) * (d + kappa)
    if not split2 > 0:
        raise RegimeUnavailable(
            f"|Omega1 - Omega2| = {abs(Omega1 - Omega2):g} must exceed kappa = {kappa:g}")
    root = branch * math.sqrt(split2) / 2
    half_sum = (Omega1 + Omega2) / 2
    # anchor both tones on the same centre so the difference is exact in floating point
    centre = omega_c + root
    return centre - half_sum, centre + half_sum


def coupling_constants(alpha1, alpha2, g1, g2, Delta1, Delta2, Omega1, Omega2, kappa):
    """Return ``(C1_plus, C2_plus_conj)`` for the resonant conjugate channel."""
    if not kappa > 0:
        raise InvalidParameter("kappa", f"must be > 0, got {kappa}")
    h = kappa / 2
    num = g1 * g2 * (Delta1 + Delta2)
    c1 = 1j * np.conj(alpha1) * alpha2 * num / ((h - 1j * (Delta1 - Omega2)) * (h + 1j * (Delta2 + Omega2)))
    c2 = -1j * alpha1 * np.conj(alpha2) * num / ((h + 1j * (Delta1 - Omega1)) * (h - 1j * (Delta2 + Omega1)))
    return complex(c1), complex(c2)


def coupling_product(C1_plus, C2_plus_conj):
    return complex(C1_plus) * complex(C2_plus_conj)


def closed_form_product(alpha1, alpha2, g1, g2, Omega1, Omega2, kappa):
    """Product of the coupling constants when the drives sit at the pure-PC frequencies."""
    d2 = (Omega1 - Omega2) ** 2
    return -4 * abs(alpha1 * alpha2 * g1 * g2) ** 2 * abs(d2 - kappa ** 2) / (kappa ** 2 * d2)


def classify_regime(product, tol=1e-9):
    product = complex(product)
    if not tol > 0:
        raise InvalidParameter("tol", "must be > 0")
    mag = abs(product)
    if mag <= tol:
        raise DegenerateProduct(f"|product| = {mag:g} <= tol")
    root = cmath.sqrt(product)
    eig = (root, -root)
    real_like = abs(product.imag) <= tol * mag
    if real_like and product.real < 0:
        return Regime(PHASE_CONJUGATION, eig)
    if real_like and product.real > 0:
        return Regime(PARAMETRIC_AMPLIFICATION, eig)
    return Regime(MIXED, eig)


def absorb_phases(C1_plus, C2_plus_conj):
    """Rotate ``b1 -> exp(i th1) b1``, ``b2 -> exp(i th2) b2`` so the conjugate coupling
    of mode 1 becomes real and positive.

    Returns ``(C, (th1, th2), asymmetry)``. Only ``th1 + th2`` is fixed; ``th2 = 0``.
    """
    c1, c2 = complex(C1_plus), complex(C2_plus_conj)
    if abs(c1) == 0 or abs(c2) == 0:
        raise DegenerateProduct("zero coupling constant")
    th1 = cmath.phase(c1)
    th1 = 0.0 if th1 == 0 else th1
    return abs(c1), (th1, 0.0), abs(c2) / abs(c1)


def rotate_constants(C1_plus, C2_plus_conj, rotations):
    """Coupling constants seen by the rotated operators."""
    th = rotations[0] + rotations[1]
    return C1_plus * cmath.exp(-1j * th), C2_plus_conj * cmath.exp(1j * th)


def design_from_drives(cfg: SystemConfig, tol=1e-9) -> CouplingDesign:
    """Evaluate mean fields, couplings and regime for the drives already in ``cfg``."""
    kappa = cfg.cavity.kappa
    (O1, O2), (m1, m2) = cfg.Omega, cfg.modes
    d1, d2 = cfg.drives
    a1 = mean_field_amplitude(d1.eta, kappa, d1.Delta)
    a2 = mean_field_amplitude(d2.eta, kappa, d2.Delta)
    c1, c2 = coupling_constants(a1, a2, m1.g, m2.g, d1.Delta, d2.Delta, O1, O2, kappa)
    prod = coupling_product(c1, c2)
    try:
        regime = classify_regime(prod, tol)
    except DegenerateProduct:
        regime = Regime(MIXED, (0j, 0j))
    if abs(c1) > 0 and abs(c2) > 0:
        C, rot, asym = absorb_phases(c1, c2)
    else:
        C, rot, asym = 0.0, (0.0, 0.0), 1.0
    symmetric = abs(asym - 1) <= SYMMETRY_RTOL
    if C > 0 and not symmetric:
        warnings.warn(f"asymmetric conjugate couplings: |C2+|/|C1+| = {asym:.6g}", stacklevel=2)
    return CouplingDesign((d1.omega_L, d2.omega_L), cfg.branch, (a1, a2), (d1.Delta, d2.Delta),
                          c1, c2, prod, regime, C, rot, asym, symmetric)


def drives_for_coupling(Omega1, Omega2, omega_c, kappa, g1, g2, C_target, branch=1, phase=0.0):
    """Drive tones at the pure-PC frequencies with equal mean-field magnitudes giving
    ``|C1_plus| = C_target``."""
    wL1, wL2 = select_drive_frequencies(Omega1, Omega2, omega_c, kappa, branch)
    if C_target < 0:
        raise InvalidParameter("C_target", "must be >= 0")
    if C_target == 0:
        amp = 0.0
    else:
        if g1 * g2 == 0:
            raise InvalidParameter("g", "nonzero couplings required for C_target > 0")
        d = abs(Omega1 - Omega2)
        root = math.sqrt(d ** 2 - kappa ** 2)
        # |C| = |a1 a2 g1 g2| root / (kappa d / 2)
        amp = math.sqrt(C_target * kappa * d / (2 * abs(g1 * g2) * root))
    tones = []
    for wL, ph in ((wL1, phase), (wL2, 0.0)):
        Delta = omega_c - wL
        alpha = amp * cmath.exp(1j * ph)
        eta = 1j * alpha * (kappa / 2 + 1j * Delta)
        tones.append(DriveTone(eta, wL, Delta))
    return tuple(tones)


def design(cfg: SystemConfig, tol=1e-9) -> CouplingDesign:
    """Validate, check the drive frequencies sit on the pure-PC branch and evaluate."""
    validate_config(cfg)
    return design_from_drives(cfg, tol)
