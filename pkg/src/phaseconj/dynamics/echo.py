"""Phase-conjugate echo: free evolution under a classical force, an instantaneous
conjugating swap at t = 0, and free evolution again.

In the rotating frames B_j = exp(i Omega_j t) b_j the undamped modes obey
dB_j/dt = -i exp(i Omega_j t) F_j(t).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate

from ..errors import InvalidParameter, PlanMismatch

ECHO_RTOL = 1e-12


@dataclass(frozen=True)
class EchoPlan:
    """Swap at t = 0 after ``t1`` of evolution; ``t2`` of evolution afterwards.

    ``j`` is the mode read out at ``t2``; its partner ``k`` is the one whose
    conjugated initial state it should reproduce.
    """

    t1: float
    t2: float
    tau: float
    Omega: tuple
    j: int = 1
    swap_noise: Optional[np.ndarray] = None

    @property
    def k(self):
        return 3 - self.j

    @classmethod
    def from_tau(cls, tau, Omega, j=1, swap_noise=None):
        if not tau > 0:
            raise InvalidParameter("tau", "must be > 0")
        if j not in (1, 2):
            raise InvalidParameter("j", "must be 1 or 2")
        Oj, Ok = Omega[j - 1], Omega[2 - j]
        return cls(tau / Ok, tau / Oj, float(tau), tuple(Omega), j, swap_noise)

    def check(self):
        Oj, Ok = self.Omega[self.j - 1], self.Omega[self.k - 1]
        for name, v in (("Omega_k t1", Ok * self.t1), ("Omega_j t2", Oj * self.t2)):
            if abs(v - self.tau) > ECHO_RTOL * abs(self.tau):
                raise PlanMismatch(f"{name} = {v!r} differs from tau = {self.tau!r}")
        return self


@dataclass(frozen=True)
class ForceSignal:
    forces: Sequence[Callable[[float], float]]

    def __call__(self, j, t):
        return self.forces[j - 1](t)

    @classmethod
    def static(cls, F1, F2):
        return cls((lambda t, a=F1: a, lambda t, a=F2: a))

    @classmethod
    def ramp(cls, a, Omega, bandwidth):
        """F_j(t) = a_j (1 + bandwidth * Omega_j * t)."""
        return cls(tuple((lambda t, aj=aj, Oj=Oj: aj * (1 + bandwidth * Oj * t))
                         for aj, Oj in zip(a, Omega)))

    @classmethod
    def zero(cls):
        return cls.static(0.0, 0.0)


@dataclass(frozen=True)
class EchoResult:
    initial: np.ndarray
    after_swap: np.ndarray
    final: np.ndarray
    residual: complex
    t: np.ndarray
    trace: np.ndarray  # (len(t), 2) rotating-frame amplitudes over [0, t2]


def phase_conjugate_swap(state, swap_noise=None, rng=None):
    """(beta1, beta2) -> (beta2*, beta1*), optionally plus complex Gaussian noise
    with covariance ``swap_noise`` (2x2 Hermitian, E[n n^dag])."""
    b1, b2 = np.asarray(state, dtype=complex)
    out = np.array([np.conj(b2), np.conj(b1)])
    if swap_noise is not None:
        cov = np.asarray(swap_noise, dtype=complex)
        if rng is None:
            raise InvalidParameter("rng", "needed when swap_noise is given")
        vals, vecs = np.linalg.eigh((cov + cov.conj().T) / 2)
        L = vecs * np.sqrt(np.clip(vals, 0, None))
        z = (rng.standard_normal(2) + 1j * rng.standard_normal(2)) / math.sqrt(2)
        out = out + L @ z
    return out


def pulse_swap(state, C, Gamma=(0.0, 0.0), n_steps=2000):
    """Finite-duration swap: evolve the rotating-frame PC pair for Ct = pi/2.

    Without damping this maps (beta1, beta2) -> (beta2*, -beta1*).
    """
    b1, b2 = np.asarray(state, dtype=complex)
    A = np.array([[-Gamma[0] / 2, C], [-C, -Gamma[1] / 2]], dtype=complex)
    from scipy.linalg import expm
    v = expm(A * (math.pi / (2 * C))) @ np.array([b1, np.conj(b2)])
    return np.array([v[0], np.conj(v[1])])


def _evolve(Omega, forces, state, t0, t1, n_out=2, rtol=1e-12, atol=1e-14):
    """Integrate dB_j/dt = -i exp(i Omega_j t) F_j(t) as a real ODE system."""
    def rhs(t, y):
        out = np.empty(4)
        for j in (1, 2):
            d = -1j * np.exp(1j * Omega[j - 1] * t) * forces(j, t)
            out[2 * j - 2], out[2 * j - 1] = d.real, d.imag
        return out

    y0 = np.array([state[0].real, state[0].imag, state[1].real, state[1].imag])
    t_eval = np.linspace(t0, t1, n_out)
    sol = integrate.solve_ivp(rhs, (t0, t1), y0, method="DOP853", t_eval=t_eval,
                              rtol=rtol, atol=atol)
    y = sol.y.T
    return t_eval, y[:, 0::2] + 1j * y[:, 1::2]


def echo_protocol(plan: EchoPlan, forces: ForceSignal, initial=(1.0, 0.0), rng=None,
                  n_out=2, swap="instant", C=None):
    """Run the protocol and return B_j(t2) and r_j = B_j(t2) - B_k(-t1)^*."""
    plan.check()
    b0 = np.asarray(initial, dtype=complex)
    _, pre = _evolve(plan.Omega, forces, b0, -plan.t1, 0.0)
    if swap == "instant":
        mid = phase_conjugate_swap(pre[-1], plan.swap_noise, rng)
    elif swap == "pulse":
        if C is None:
            raise InvalidParameter("C", "pulse swap needs a coupling")
        mid = pulse_swap(pre[-1], C)
    else:
        raise InvalidParameter("swap", "must be 'instant' or 'pulse'")
    t, post = _evolve(plan.Omega, forces, mid, 0.0, plan.t2, n_out)
    j, k = plan.j, plan.k
    residual = complex(post[-1, j - 1] - np.conj(b0[k - 1]))
    return EchoResult(b0, mid, post[-1], residual, t, post)


def residual_bracket(plan: EchoPlan, forces: ForceSignal, sign=1):
    """Independent quadrature of
    i int_0^tau exp(sign i s) [F_k(-s/Omega_k)/Omega_k - F_j(s/Omega_j)/Omega_j] ds.

    ``sign=+1`` is the residual of the protocol above; ``sign=-1`` is its mirror
    image, equal in magnitude for real forces.
    """
    j, k = plan.j, plan.k
    Oj, Ok = plan.Omega[j - 1], plan.Omega[k - 1]

    def g(s):
        return forces(k, -s / Ok) / Ok - forces(j, s / Oj) / Oj

    # absolute floor tied to the force scale so a cancelling integrand is not chased into roundoff
    f_scale = max(abs(forces(k, -s / Ok) / Ok) + abs(forces(j, s / Oj) / Oj)
                  for s in np.linspace(0, plan.tau, 33))
    kw = dict(limit=400, epsabs=1e-13 * max(f_scale * plan.tau, 1e-300), epsrel=1e-13)
    re = integrate.quad(lambda s: math.cos(s) * g(s), 0, plan.tau, **kw)[0]
    im = integrate.quad(lambda s: math.sin(s) * g(s), 0, plan.tau, **kw)[0]
    return 1j * complex(re, sign * im)


@dataclass(frozen=True)
class EchoSweep:
    bandwidth: np.ndarray
    residual: np.ndarray  # complex
    quadrature: np.ndarray  # complex


def echo_residual_sweep(plan: EchoPlan, amplitudes, bandwidths, initial=(1.0, 0.0)) -> EchoSweep:
    """Residual against relative force bandwidth for the ramp family."""
    bw = np.asarray(bandwidths, dtype=float)
    res = np.empty(len(bw), dtype=complex)
    quad = np.empty(len(bw), dtype=complex)
    for i, e in enumerate(bw):
        f = ForceSignal.ramp(amplitudes, plan.Omega, e)
        res[i] = echo_protocol(plan, f, initial).residual
        quad[i] = residual_bracket(plan, f)
    return EchoSweep(bw, res, quad)


def matched_amplitudes(scale, Omega):
    """Amplitudes with F_1/Omega_1 = F_2/Omega_2 = scale."""
    return (scale * Omega[0], scale * Omega[1])
