"""Deterministic integration of first and second moments."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidParameter, NonPSDDiffusion, StepTooLarge
from .generators import Generator

# dt must resolve the fastest rotation by this factor
STEP_FRACTION = 0.05


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    y: np.ndarray  # shape (len(t), ...) complex


def check_step(gen: Generator, dt):
    if not dt > 0:
        raise InvalidParameter("dt", "must be > 0")
    fmax = gen.max_frequency()
    if fmax > 0 and dt > STEP_FRACTION / fmax:
        raise StepTooLarge(f"dt = {dt:g} exceeds {STEP_FRACTION}/max|freq| = {STEP_FRACTION / fmax:g}")


def _time_grid(window, dt):
    t0, t1 = map(float, window)
    if not t1 > t0:
        raise InvalidParameter("window", "need t1 > t0")
    n = int(np.ceil((t1 - t0) / dt - 1e-9))
    return np.linspace(t0, t1, n + 1)


def rk4(f, y0, ts, record_every=1):
    y = np.array(y0, dtype=complex)
    keep = [0] + list(range(record_every, len(ts), record_every))
    if keep[-1] != len(ts) - 1:
        keep.append(len(ts) - 1)
    out = np.empty((len(keep),) + y.shape, dtype=complex)
    out[0] = y
    k = 1
    for i in range(len(ts) - 1):
        t, h = ts[i], ts[i + 1] - ts[i]
        k1 = f(t, y)
        k2 = f(t + h / 2, y + h / 2 * k1)
        k3 = f(t + h / 2, y + h / 2 * k2)
        k4 = f(t + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        if k < len(keep) and keep[k] == i + 1:
            out[k] = y
            k += 1
    return ts[keep], out


def integrate_first_moments(gen: Generator, initial, window, dt, record_every=1) -> Trajectory:
    """<v>(t) from d<v>/dt = M(t) <v> + d(t)."""
    check_step(gen, dt)
    initial = np.asarray(initial, dtype=complex)
    if initial.shape != (gen.dim,):
        raise InvalidParameter("initial", f"expected length {gen.dim}")
    ts = _time_grid(window, dt)
    t, y = rk4(lambda s, v: gen.drift(s) @ v + gen.drive(s), initial, ts, record_every)
    return Trajectory(t, y)


def vacuum_covariance(gen: Generator, n_bath=None):
    """Second moments <v v^dag> of uncorrelated thermal states (vacuum by default)."""
    n = np.zeros(gen.dim // 2) if n_bath is None else np.asarray(n_bath, dtype=float)
    diag = []
    for p in range(gen.dim // 2):
        for slot in (2 * p, 2 * p + 1):
            diag.append(n[p] + (0.0 if gen.creation[slot] else 1.0))
    return np.diag(diag).astype(complex)


def commutator_of(gen: Generator, sigma):
    """<[v_i, v_j^dag]> from second moments <v_i v_j^dag>."""
    p = gen.partner
    return sigma - sigma.T[np.ix_(p, p)]


def integrate_covariance(gen: Generator, initial, window, dt, record_every=1):
    """Second moments Sigma = <v v^dag> from dSigma/dt = M Sigma + Sigma M^dag + D.

    Returns ``(Trajectory, commutators)``; the commutator series has the same
    time stamps.
    """
    check_step(gen, dt)
    gen.check_psd()
    sigma0 = np.asarray(initial, dtype=complex)
    if sigma0.shape != (gen.dim, gen.dim):
        raise InvalidParameter("initial", f"expected {gen.dim}x{gen.dim}")
    if not np.allclose(sigma0, sigma0.conj().T):
        raise NonPSDDiffusion("initial second-moment matrix is not Hermitian")

    def f(s, S):
        M = gen.drift(s)
        return M @ S + S @ M.conj().T + gen.diffusion(s)

    ts = _time_grid(window, dt)
    t, y = rk4(f, sigma0, ts, record_every)
    comm = np.array([commutator_of(gen, S) for S in y])
    return Trajectory(t, y), comm


def commutator_deviation(gen: Generator, comm):
    """max_t max_ij |K(t) - K_canonical|."""
    K0 = gen.commutator0()
    return float(np.max(np.abs(comm - K0[None])))


def propagator(gen: Generator, t0, t1, dt):
    """Fundamental matrix of the homogeneous drift over [t0, t1]."""
    ts = _time_grid((t0, t1), dt)
    _, U = rk4(lambda s, X: gen.drift(s) @ X, np.eye(gen.dim, dtype=complex), ts, len(ts))
    return U[-1]
