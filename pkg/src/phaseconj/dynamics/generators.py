"""Linear stochastic generators in the doubled operator representation.

A state vector lists operators in adjacent pairs ``(c, c^dag)``. The drift may be
time periodic: ``M(t) = M0 + sum_nu M_nu exp(-i nu t)``; the same holds for the
deterministic drive and the diffusion. ``diffusion[i, j]`` is the rate of
``<n_i n_j^dag>`` for the noise operators entering each slot.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from ..errors import NonPSDDiffusion, RegimeUnavailable
from ..drive_design import PHASE_CONJUGATION

FULL_LABELS = ("a", "a^dag", "b1", "b1^dag", "b2", "b2^dag")
REDUCED_LABELS = ("b1", "b1^dag", "b2^dag", "b2")


def _harmonic_sum(base, harmonics, t):
    out = np.array(base, dtype=complex)
    for nu, m in harmonics.items():
        out = out + m * np.exp(-1j * nu * t)
    return out


@dataclass(frozen=True)
class Generator:
    drift0: np.ndarray
    diffusion0: np.ndarray
    drive0: np.ndarray
    creation: Tuple[bool, ...]
    labels: Tuple[str, ...]
    drift_harmonics: Dict[float, np.ndarray] = field(default_factory=dict)
    diffusion_harmonics: Dict[float, np.ndarray] = field(default_factory=dict)
    drive_harmonics: Dict[float, np.ndarray] = field(default_factory=dict)
    # rotation frequency of each slot relative to the lab frame (v_lab = exp(-i f t) v)
    frame: Tuple[float, ...] = ()

    @property
    def dim(self):
        return self.drift0.shape[0]

    @property
    def partner(self):
        idx = np.arange(self.dim)
        return idx ^ 1

    @property
    def time_dependent(self):
        return bool(self.drift_harmonics or self.drive_harmonics or self.diffusion_harmonics)

    def drift(self, t):
        return _harmonic_sum(self.drift0, self.drift_harmonics, t)

    def diffusion(self, t):
        return _harmonic_sum(self.diffusion0, self.diffusion_harmonics, t)

    def drive(self, t):
        return _harmonic_sum(self.drive0, self.drive_harmonics, t)

    def max_frequency(self):
        freqs = [np.max(np.abs(np.linalg.eigvals(self.drift0)))]
        for h in (self.drift_harmonics, self.drive_harmonics, self.diffusion_harmonics):
            freqs.extend(abs(nu) + np.max(np.abs(m)) for nu, m in h.items())
        return float(max(freqs))

    def commutator0(self):
        """Canonical commutator matrix <[v_i, v_j^dag]> of the slots."""
        return np.diag([-1.0 if c else 1.0 for c in self.creation]).astype(complex)

    def noise_commutator(self, t=0.0):
        D = self.diffusion(t)
        p = self.partner
        return D - D.T[np.ix_(p, p)]

    def symmetric_diffusion(self, t=0.0):
        D = self.diffusion(t)
        p = self.partner
        return (D + D.T[np.ix_(p, p)]) / 2

    def check_psd(self, tol=1e-12):
        D = self.diffusion0
        if not np.allclose(D, D.conj().T, atol=tol):
            raise NonPSDDiffusion("diffusion is not Hermitian")
        lam = np.linalg.eigvalsh((D + D.conj().T) / 2)
        if lam.min() < -tol * max(1.0, abs(lam).max()):
            raise NonPSDDiffusion(f"diffusion has negative eigenvalue {lam.min():g}")


def _add(h, nu, i, j, value, dim):
    nu = float(nu)
    if nu == 0:
        nu = 0.0
    m = h.setdefault(nu, np.zeros((dim, dim), dtype=complex))
    m[i, j] += value


def build_full_generator(cfg, design, modes=None, include_drive=False, omega_L=None):
    """Linearised cavity + two-mode model around the two-tone mean field.

    Slots: (da, da^dag, b1, b1^dag, b2, b2^dag); the cavity fluctuation is taken in a
    frame rotating at omega_c, the mechanics in the lab frame. ``modes`` overrides
    the bare mechanical parameters; ``omega_L`` overrides the tone frequencies (the
    mean-field amplitudes are then recomputed from the drive amplitudes).
    """
    from ..drive_design import mean_field_amplitude

    modes = cfg.modes if modes is None else modes
    kappa = cfg.cavity.kappa
    if omega_L is None:
        alpha = design.alpha
        Deltas = design.Delta
    else:
        Deltas = tuple(cfg.cavity.omega_c - w for w in omega_L)
        alpha = tuple(mean_field_amplitude(d.eta, kappa, D) for d, D in zip(cfg.drives, Deltas))
    n = 6
    M0 = np.zeros((n, n), dtype=complex)
    M0[0, 0] = M0[1, 1] = -kappa / 2
    H = {}
    for j, m in enumerate(modes):
        b, bd = 2 + 2 * j, 3 + 2 * j
        M0[b, b] = -1j * m.omega - m.gamma / 2
        M0[bd, bd] = 1j * m.omega - m.gamma / 2
        for a, D in zip(alpha, Deltas):
            if a == 0 or m.g == 0:
                continue
            # alpha_r(t) = sum_l alpha_l exp(i Delta_l t) -> harmonic nu = -Delta_l
            for col in (b, bd):
                _add(H, -D, 0, col, -1j * m.g * a, n)
                _add(H, D, 1, col, 1j * m.g * np.conj(a), n)
            _add(H, D, b, 0, -1j * m.g * np.conj(a), n)
            _add(H, -D, b, 1, -1j * m.g * a, n)
            _add(H, -D, bd, 1, 1j * m.g * a, n)
            _add(H, D, bd, 0, 1j * m.g * np.conj(a), n)
    D0 = np.diag([kappa, 0.0] + [v for m in modes for v in (m.gamma * (m.n_bath + 1), m.gamma * m.n_bath)])
    d0 = np.zeros(n, dtype=complex)
    dH = {}
    if include_drive:
        for l, (al, Dl) in enumerate(zip(alpha, Deltas)):
            for am, Dm in zip(alpha, Deltas):
                w = al * np.conj(am)
                nu = -(Dl - Dm)
                for j, m in enumerate(modes):
                    vec = np.zeros(n, dtype=complex)
                    vec[2 + 2 * j] = -1j * m.g * w
                    vec[3 + 2 * j] = 1j * m.g * w
                    if nu == 0:
                        d0 = d0 + vec
                    else:
                        dH[nu] = dH.get(nu, np.zeros(n, dtype=complex)) + vec
    omega_c = cfg.cavity.omega_c
    return Generator(M0, D0.astype(complex), d0, (False, True) * 3, FULL_LABELS,
                     {k: v for k, v in H.items() if np.any(v)}, {}, dH,
                     frame=(omega_c, -omega_c, 0.0, 0.0, 0.0, 0.0))


def _reduced_diffusion(noise):
    D = np.zeros((4, 4), dtype=complex)
    if noise is None:
        return D
    # slot order (B1, B1^dag, B2c, B2c^dag); annihilation-like slots are 0 and 2
    ann, cre = [0, 2], [1, 3]
    D[np.ix_(ann, ann)] = noise.P
    D[np.ix_(cre, cre)] = noise.Nn.T
    return D


def build_rwa_generator(Omega, Gamma, C1, C2c, noise=None, frame="rotating", kind="pc"):
    """Reduced two-mode model.

    For ``kind="pc"`` the slots are (b1, b1^dag, b2^dag, b2) with
    db1/dt = (-i Omega1 - Gamma1/2) b1 + C1 exp(-i S t) b2^dag and
    db2^dag/dt = (i Omega2 - Gamma2/2) b2^dag + C2c exp(i S t) b1, S = Omega1 + Omega2.
    For ``kind="linear"`` the slots are (b1, b1^dag, b2, b2^dag) with exchange
    coupling -i C1 / -i C2c. In the rotating frame the explicit exponentials vanish.
    """
    (O1, O2), (G1, G2) = Omega, Gamma
    A = np.array([[-G1 / 2, C1], [C2c, -G2 / 2]], dtype=complex)
    if kind == "linear":
        A = np.array([[-G1 / 2, -1j * C1], [-1j * C2c, -G2 / 2]], dtype=complex)
    M = np.zeros((4, 4), dtype=complex)
    M[np.ix_([0, 2], [0, 2])] = A
    M[np.ix_([1, 3], [1, 3])] = A.conj()
    D = _reduced_diffusion(noise)
    if kind == "pc":
        creation, labels, f2 = (False, True, True, False), REDUCED_LABELS, -O2
    else:
        creation, labels, f2 = (False, True, False, True), ("b1", "b1^dag", "b2", "b2^dag"), O2
    f = (O1, -O1, f2, -f2)
    if frame == "rotating":
        return Generator(M, D, np.zeros(4, dtype=complex), creation, labels, frame=(0.0,) * 4)
    if frame != "lab":
        raise ValueError("frame must be 'rotating' or 'lab'")
    return to_lab_frame(Generator(M, D, np.zeros(4, dtype=complex), creation, labels, frame=(0.0,) * 4), f)


def to_lab_frame(gen: Generator, f):
    """Undo per-slot rotations v_lab = exp(-i f_i t) v_rot."""
    f = np.asarray(f, dtype=float)
    n = gen.dim
    M0 = np.zeros((n, n), dtype=complex)
    D0 = np.zeros((n, n), dtype=complex)
    MH, DH = {}, {}
    for i in range(n):
        M0[i, i] -= 1j * f[i]
        for j in range(n):
            nu = float(f[i] - f[j])
            for src, base, harm in ((gen.drift0, M0, MH), (gen.diffusion0, D0, DH)):
                v = src[i, j]
                if v == 0:
                    continue
                if nu == 0:
                    base[i, j] += v
                else:
                    _add(harm, nu, i, j, v, n)
    return Generator(M0, D0, gen.drive0.copy(), gen.creation, gen.labels, MH, DH, {}, frame=tuple(f))


def rwa_from_design(cfg, design, noise=None, frame="rotating", phase_absorbed=True):
    if design.regime.kind != PHASE_CONJUGATION:
        raise RegimeUnavailable(f"reduced PC model needs the PC regime, got {design.regime.kind}")
    if phase_absorbed:
        C1, C2c = design.C, -design.C * design.asymmetry
    else:
        C1, C2c = design.C1_plus, design.C2_plus_conj
    return build_rwa_generator(cfg.Omega, cfg.Gamma, C1, C2c, noise, frame)


def floquet_exponents(gen: Generator, period, shift=None, steps_per_period=None):
    """Floquet exponents log(mu)/period of the homogeneous drift.

    ``shift`` gives per-slot frequencies f_i of a frame v' = exp(i f t) v in which
    the drift is periodic with ``period``; the multipliers are those of
    exp(i f period) U(period).
    """
    from .integrate import propagator
    n = steps_per_period or int(np.ceil(period * gen.max_frequency() / 0.02))
    U = propagator(gen, 0.0, period, period / n)
    if shift is not None:
        U = np.exp(1j * np.asarray(shift, dtype=float) * period)[:, None] * U
    return np.log(np.linalg.eigvals(U).astype(complex)) / period


def full_model_floquet(gen: Generator, design):
    """Floquet exponents of a full generator with the cavity moved to the frame of tone 1,
    where the drift repeats with the beat period 2 pi / (omega_L2 - omega_L1)."""
    D1 = design.Delta[0]
    beat = abs(design.omega_L[1] - design.omega_L[0])
    return floquet_exponents(gen, 2 * np.pi / beat, (-D1, D1, 0.0, 0.0, 0.0, 0.0))
