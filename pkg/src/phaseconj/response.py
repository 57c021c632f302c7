"""Frequency-domain response of the coupled mechanical modes.

Spectra follow the convention S(w) = int dt exp(i w t) <X(t) X(0)>, so that
S(+w) is the emission side (weight n+1 for a thermal oscillator at w > 0) and
detailed balance reads S(w) / S(-w) = exp(w / T).

Fourier amplitudes of operators use x~(w) = int dt exp(-i w t) x(t); with this
choice the response functions R_j peak at w = -Omega_j.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Dict, Optional, Tuple

import numpy as np

from .errors import GridMiss, InvalidParameter, SingularPoint

PC = "pc"
LINEAR = "linear"
_TARGETS = {"mode1": (1.0, 0.0), "mode2": (0.0, 1.0), "both": (1.0, 1.0)}


@dataclass(frozen=True)
class ResponseSet:
    Omega: Tuple[float, float]
    Gamma: Tuple[float, float]
    C: float
    kind: str = PC

    def __post_init__(self):
        if self.kind not in (PC, LINEAR):
            raise InvalidParameter("kind", f"unknown coupling kind {self.kind!r}")
        if self.C < 0:
            raise InvalidParameter("C", "must be >= 0")

    @property
    def beat(self):
        """Frequency offset between a mode's response and the force it picks up."""
        O1, O2 = self.Omega
        return O1 + O2 if self.kind == PC else O1 - O2

    def drift(self):
        """Rotating-frame drift over (B1, B2^dag) for PC or (B1, B2) for linear coupling."""
        (G1, G2), C = self.Gamma, self.C
        if self.kind == PC:
            return np.array([[-G1 / 2, C], [-C, -G2 / 2]], dtype=complex)
        return np.array([[-G1 / 2, -1j * C], [-1j * C, -G2 / 2]], dtype=complex)

    @property
    def creation_slots(self):
        # second slot of the reduced PC vector holds b2^dag
        return (False, True) if self.kind == PC else (False, False)


@dataclass(frozen=True)
class SpectralFunction:
    omega: np.ndarray
    values: np.ndarray
    stderr: Optional[np.ndarray] = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        w = np.asarray(self.omega, dtype=float)
        if w.ndim != 1 or w.size == 0 or (w.size > 1 and not np.all(np.diff(w) > 0)):
            raise InvalidParameter("omega", "grid must be one-dimensional and strictly increasing")

    def __call__(self, omega):
        w = np.asarray(omega, dtype=float)
        lo, hi = self.omega[0], self.omega[-1]
        if np.any(w < lo) or np.any(w > hi):
            raise GridMiss(f"frequency outside grid [{lo:g}, {hi:g}]")
        v = np.asarray(self.values)
        if np.iscomplexobj(v):
            return np.interp(w, self.omega, v.real) + 1j * np.interp(w, self.omega, v.imag)
        return np.interp(w, self.omega, v)


@dataclass(frozen=True)
class ForceModel:
    """Stationary external force obeying detailed balance at temperature ``T_eff``.

    ``kind="bose"`` uses S_F = S0 E(w) |w / (1 - exp(-w/T))| which stays finite as
    T -> 0 and grows like T at high temperature. ``kind="exp"`` uses
    S_F = S0 E(w) exp(w / 2T). Both satisfy S_F(w) / S_F(-w) = exp(w / T).
    """

    T_eff: float
    sigma_F: float
    omega_0: float
    S0: float = 1.0
    target: str = "mode2"
    kind: str = "bose"

    def __post_init__(self):
        if not self.sigma_F > 0:
            raise InvalidParameter("sigma_F", f"must be > 0, got {self.sigma_F}")
        if self.T_eff == 0 or math.isnan(self.T_eff):
            raise InvalidParameter("T_eff", "must be nonzero")
        if self.S0 < 0:
            raise InvalidParameter("S0", "must be >= 0")
        if self.target not in _TARGETS:
            raise InvalidParameter("target", f"one of {sorted(_TARGETS)}")
        if self.kind not in ("bose", "exp"):
            raise InvalidParameter("kind", "'bose' or 'exp'")

    @property
    def weights(self):
        return _TARGETS[self.target]

    def log_envelope(self, omega):
        w = np.asarray(omega, dtype=float)
        s2 = 2 * self.sigma_F ** 2
        return np.logaddexp(-(w - self.omega_0) ** 2 / s2, -(w + self.omega_0) ** 2 / s2)

    def envelope(self, omega):
        return np.exp(self.log_envelope(omega))

    def log_balance_factor(self, omega):
        w = np.asarray(omega, dtype=float)
        T = self.T_eff
        if math.isinf(T):
            with np.errstate(divide="ignore"):
                return np.log(np.abs(w)) if self.kind == "bose" else np.zeros_like(w)
        x = w / T
        if self.kind == "exp":
            return x / 2
        ax = np.abs(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            # |w| / |1 - exp(-x)|, written so that neither branch overflows
            out = np.log(np.abs(w)) - np.log(-np.expm1(-ax)) - np.where(x < 0, ax, 0.0)
        return np.where(w == 0, math.log(abs(T)), out)

    def balance_factor(self, omega):
        return np.exp(self.log_balance_factor(omega))

    def evaluate(self, omega):
        if self.S0 == 0:
            return np.zeros(np.shape(omega))
        return np.exp(math.log(self.S0) + self.log_envelope(omega) + self.log_balance_factor(omega))

    def scaled(self, r):
        # S_F carries one power of frequency in both families
        S0 = self.S0 if self.kind == "bose" else self.S0 / r
        return replace(self, T_eff=self.T_eff / r, sigma_F=self.sigma_F / r,
                       omega_0=self.omega_0 / r, S0=S0)


@dataclass(frozen=True)
class ReducedNoise:
    """White noise driving the rotating-frame reduced amplitudes.

    ``P[i, j]`` is the rate of <n_i n_j^dag>, ``Nn[i, j]`` the rate of <n_j^dag n_i>.
    """

    P: np.ndarray
    Nn: np.ndarray

    @property
    def commutator(self):
        return self.P - self.Nn

    @property
    def symmetric(self):
        return (self.P + self.Nn) / 2


def cavity_lorentzian_L(C, gamma, omega):
    gamma = np.asarray(gamma, dtype=float)
    omega = np.asarray(omega, dtype=float)
    den = gamma / 2 + 1j * omega
    if np.any(den == 0):
        raise SingularPoint("gamma=0, omega=0")
    out = C / den
    return out if out.ndim else complex(out)


def _other(j):
    if j not in (1, 2):
        raise InvalidParameter("j", "mode index must be 1 or 2")
    return 2 if j == 1 else 1


def response_R(j, omega, rs: ResponseSet):
    k = _other(j)
    w = np.asarray(omega, dtype=float)
    Oj, Gj, Gk = rs.Omega[j - 1], rs.Gamma[j - 1], rs.Gamma[k - 1]
    nu = np.asarray(w + Oj, dtype=complex)
    den_k = Gk / 2 + 1j * nu
    with np.errstate(divide="ignore", invalid="ignore"):
        den = np.asarray(Gj / 2 + 1j * nu + (rs.C ** 2 / den_k if rs.C else 0), dtype=complex)
    bad = (den == 0) | ~np.isfinite(den)
    if np.any(bad):
        raise SingularPoint(np.atleast_1d(w)[np.atleast_1d(bad)][0],
                            f"R_{j} has a pole at omega = {np.atleast_1d(w)[np.atleast_1d(bad)][0]:g}")
    out = np.asarray(1 / den)
    return out if out.ndim else complex(out)


def susceptibilities(j, omega, rs: ResponseSet):
    """Direct and conjugate susceptibilities of mode ``j`` for PC coupling.

    The conjugate channel of mode 1 carries -i R_1 L, that of mode 2 carries +i R_2 L;
    the sign follows from the opposite signs of the coupling in the two equations.
    """
    if rs.kind != PC:
        raise InvalidParameter("kind", "conjugate susceptibilities are defined for PC coupling")
    k = _other(j)
    w = np.asarray(omega, dtype=float)
    R = response_R(j, w, rs)
    chi = 1j * (R - np.conj(response_R(j, -w, rs)))
    L = cavity_lorentzian_L(rs.C, rs.Gamma[k - 1], w + rs.Omega[j - 1]) if rs.C else 0 * R
    sign = -1 if j == 1 else 1
    chi_c = sign * 1j * R * L
    return chi, chi_c


def _green(j, omega, rs):
    """Elements (G11, G12) of the 2x2 frequency-domain solve for mode ``j``."""
    k = _other(j)
    w = np.asarray(omega, dtype=float)
    nu = w + rs.Omega[j - 1]
    dj = rs.Gamma[j - 1] / 2 + 1j * nu
    dk = rs.Gamma[k - 1] / 2 + 1j * nu
    det = dj * dk + rs.C ** 2
    if np.any(det == 0):
        raise SingularPoint(float(np.atleast_1d(w)[np.atleast_1d(det == 0)][0]))
    if rs.kind == PC:
        off = -(-1 if j == 1 else 1) * rs.C
    else:
        off = -1j * rs.C
    return dk / det, off / det


def force_transfer(j, omega, rs: ResponseSet, weights=(1.0, 1.0)) -> Dict[float, np.ndarray]:
    """Coefficients H_s with x~_j(w) = sum_s H_s(w) F~(w + s) for a Hermitian force F
    applied to mode m with weight ``weights[m-1]``."""
    k = _other(j)
    w = np.asarray(omega, dtype=float)
    wj, wk = weights[j - 1], weights[k - 1]
    g11, g12 = _green(j, w, rs)
    g11m, g12m = _green(j, -w, rs)
    s = rs.beat if rs.kind == PC else rs.Omega[j - 1] - rs.Omega[k - 1]
    H0 = 1j * wj * (g11 - np.conj(g11m))
    if rs.kind == PC:
        Hp, Hm = -1j * wk * g12, 1j * wk * np.conj(g12m)
    else:
        Hp, Hm = 1j * wk * g12, -1j * wk * np.conj(g12m)
    return {0.0: H0, s: Hp, -s: Hm}


def position_response(j, omega, rs: ResponseSet, F_tilde: SpectralFunction, weights=(1.0, 1.0)):
    """x~_j(w) for a sampled force amplitude; shifted lookups interpolate ``F_tilde``."""
    w = np.asarray(omega, dtype=float)
    out = np.zeros(w.shape, dtype=complex)
    for shift, H in force_transfer(j, w, rs, weights).items():
        if np.all(H == 0):
            continue
        out = out + H * F_tilde(w + shift)
    return out if out.ndim else complex(out)


def spectrum_cross_terms(j, omega, rs: ResponseSet, weights=(1.0, 1.0)):
    """All nine products H_s(w) H_s'(w') paired by the delta correlation of the force.

    Each entry is ``(force_frequency, s, s_prime, coefficient)``; summing coefficient
    times S_F(force_frequency) reproduces the full integral over w' including the
    terms oscillating at multiples of the beat note.
    """
    w = float(omega)
    Hw = force_transfer(j, w, rs, weights)
    terms = []
    for s, Hs in Hw.items():
        f = w + s
        for sp in Hw:
            wp = -f - sp
            Hp = force_transfer(j, wp, rs, weights)[sp]
            terms.append((f, s, sp, complex(Hs) * complex(Hp)))
    return terms


def force_spectrum(fm: ForceModel, grid) -> SpectralFunction:
    w = np.asarray(grid, dtype=float)
    return SpectralFunction(w, fm.evaluate(w), meta={"quantity": "S_F", "T_eff": fm.T_eff,
                                                      "sigma_F": fm.sigma_F, "kind": fm.kind})


def _lorentz(kappa, x):
    return kappa / ((kappa / 2) ** 2 + x ** 2)


def intrinsic_noise_spectra(cfg, grid, alpha=None):
    """Noise spectra entering each mode: ``[(absorption, emission), ...]``.

    Emission is S_{n n^dag}(w) (relevant at w = +Omega_j), absorption is
    S_{n^dag n}(w) (relevant at w = -Omega_j). The cavity contribution is the
    vacuum input filtered by the cavity Lorentzian and shifted by each tone's
    detuning; beat-note cross terms are non-stationary and omitted here.
    """
    w = np.asarray(grid, dtype=float)
    kappa = cfg.cavity.kappa
    if alpha is None:
        from .drive_design import mean_field_amplitude
        alpha = [mean_field_amplitude(d.eta, kappa, d.Delta) for d in cfg.drives]
    Deltas = [d.Delta for d in cfg.drives]
    out = []
    for m in cfg.modes:
        em = np.full_like(w, m.gamma * (m.n_bath + 1))
        ab = np.full_like(w, m.gamma * m.n_bath)
        for a, D in zip(alpha, Deltas):
            weight = m.g ** 2 * abs(a) ** 2
            if weight:
                em = em + weight * _lorentz(kappa, w - D)
                ab = ab + weight * _lorentz(kappa, w + D)
        out.append((SpectralFunction(w, ab, meta={"side": "absorption"}),
                    SpectralFunction(w, em, meta={"side": "emission"})))
    return out


def _split_hermitian(N):
    vals, vecs = np.linalg.eigh((N + N.conj().T) / 2)
    pos = (vecs * np.clip(vals, 0, None)) @ vecs.conj().T
    neg = (vecs * np.clip(-vals, 0, None)) @ vecs.conj().T
    return pos, neg


def reduced_noise(rs: ResponseSet, gamma=None, n_bath=(0.0, 0.0), include_cavity=True) -> ReducedNoise:
    """Thermal bath noise plus the minimal cavity-mediated noise that keeps the
    reduced model's commutators fixed.

    ``gamma`` are the intrinsic damping rates (default: the effective ones, i.e.
    no cold damping). With ``include_cavity=False`` only the thermal part is kept.
    """
    gamma = rs.Gamma if gamma is None else gamma
    P = np.zeros((2, 2), dtype=complex)
    Nn = np.zeros((2, 2), dtype=complex)
    for i, (g, n, cre) in enumerate(zip(gamma, n_bath, rs.creation_slots)):
        if cre:
            P[i, i], Nn[i, i] = g * n, g * (n + 1)
        else:
            P[i, i], Nn[i, i] = g * (n + 1), g * n
    if include_cavity:
        A = rs.drift()
        K0 = np.diag([-1.0 if c else 1.0 for c in rs.creation_slots]).astype(complex)
        required = -(A @ K0 + K0 @ A.conj().T)
        pos, neg = _split_hermitian(required - (P - Nn))
        P, Nn = P + pos, Nn + neg
    return ReducedNoise(P, Nn)


def _noise_spectra(rs, noise, omega_rot):
    """Diagonal rotating-frame spectra S_{a a^dag} and S_{a^dag a} at ``omega_rot``."""
    A = rs.drift()
    w = np.atleast_1d(np.asarray(omega_rot, dtype=float))
    eye = np.eye(2)
    G = np.linalg.inv(-1j * w[:, None, None] * eye - A)
    Gm = np.linalg.inv(1j * w[:, None, None] * eye - A)
    S_aad = np.einsum("wik,kl,wil->wi", G, noise.P, G.conj()).real
    S_ada = np.einsum("wik,kl,wil->wi", Gm.conj(), noise.Nn.T, Gm).real
    return S_aad, S_ada


def intrinsic_position_spectrum(j, rs: ResponseSet, noise: ReducedNoise, omega):
    _other(j)
    w = np.asarray(omega, dtype=float)
    Oj = rs.Omega[j - 1]
    i = j - 1
    S_aad_m, S_ada_m = _noise_spectra(rs, noise, w.ravel() - Oj)
    S_aad_p, S_ada_p = _noise_spectra(rs, noise, w.ravel() + Oj)
    if rs.creation_slots[i]:
        out = S_ada_m[:, i] + S_aad_p[:, i]
    else:
        out = S_aad_m[:, i] + S_ada_p[:, i]
    return out.reshape(w.shape)


def force_position_spectrum(j, rs: ResponseSet, fm: ForceModel, omega):
    w = np.asarray(omega, dtype=float)
    out = np.zeros(w.shape)
    for shift, H in force_transfer(j, w, rs, fm.weights).items():
        out = out + np.abs(H) ** 2 * fm.evaluate(w + shift)
    return out


def position_spectrum(j, rs: ResponseSet, fm: Optional[ForceModel], noise: Optional[ReducedNoise],
                      grid, symmetrized=False) -> SpectralFunction:
    """Stationary position spectrum of mode ``j``: force plus intrinsic noise.

    Only force terms whose frequency shifts cancel survive time averaging, so the
    result is real and non-negative. ``symmetrized`` returns (S(w) + S(-w)) / 2.
    """
    w = np.asarray(grid, dtype=float)

    def total(x):
        s = np.zeros(x.shape)
        if fm is not None:
            s = s + force_position_spectrum(j, rs, fm, x)
        if noise is not None:
            s = s + intrinsic_position_spectrum(j, rs, noise, x)
        return s

    vals = (total(w) + total(-w)) / 2 if symmetrized else total(w)
    return SpectralFunction(w, vals, meta={"quantity": f"S_xx,{j}", "kind": rs.kind,
                                           "symmetrized": symmetrized})


def response_set(cfg, design=None, kind=PC, C=None) -> ResponseSet:
    if C is None:
        C = design.C if design is not None else 0.0
    return ResponseSet(tuple(cfg.Omega), tuple(cfg.Gamma), float(C), kind)
