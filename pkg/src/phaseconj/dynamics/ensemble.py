"""Stochastic c-number trajectories and periodogram spectra.

Operators are replaced by c-numbers sampled from the symmetrically ordered
(Wigner) distribution, so ensemble averages of products give symmetrized
moments. Each trajectory owns an independent stream spawned from one seed,
so results do not depend on how trajectories are batched.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, linalg, signal

from ..errors import InvalidParameter, WindowTooShort
from .generators import Generator
from .integrate import check_step

CHUNK = 2048


@dataclass(frozen=True)
class Ensemble:
    t: np.ndarray
    samples: np.ndarray  # (n_traj, len(t), n_obs)
    seed: int
    meta: dict = field(default_factory=dict)

    @property
    def n_traj(self):
        return self.samples.shape[0]

    def mean(self):
        return self.samples.mean(axis=0)

    def stderr(self):
        return self.samples.std(axis=0, ddof=1) / np.sqrt(self.n_traj)


def _real_basis(dim):
    # v = T r with r the real quadratures of each (c, c^dag) pair
    T = np.zeros((dim, dim), dtype=complex)
    for p in range(dim // 2):
        T[2 * p, 2 * p], T[2 * p, 2 * p + 1] = 1, 1j
        T[2 * p + 1, 2 * p], T[2 * p + 1, 2 * p + 1] = 1, -1j
    return T / np.sqrt(2)


def _psd_sqrt(Q):
    Q = (Q + Q.T) / 2
    vals, vecs = np.linalg.eigh(Q)
    return vecs * np.sqrt(np.clip(vals, 0, None))


def _discrete_ou(Mr, Dr, dt):
    """Exact one-step map r -> Phi r + xi with xi ~ N(0, Q) (Van Loan)."""
    n = Mr.shape[0]
    blk = np.zeros((2 * n, 2 * n))
    blk[:n, :n] = -Mr
    blk[:n, n:] = Dr
    blk[n:, n:] = Mr.T
    E = linalg.expm(blk * dt)
    Phi = E[n:, n:].T
    Q = Phi @ E[:n, n:]
    return Phi, _psd_sqrt(Q)


def sample_initial(gen: Generator, sigma, rng, size):
    """Gaussian c-number samples with symmetrized second moments of ``sigma``."""
    p = gen.partner
    sym = (sigma + sigma.T[np.ix_(p, p)]) / 2
    T = _real_basis(gen.dim)
    Ti = np.linalg.inv(T)
    cov = (Ti @ sym @ Ti.conj().T).real
    return rng.standard_normal((size, gen.dim)) @ _psd_sqrt(cov).T


def monte_carlo_ensemble(gen: Generator, n_traj, window, dt, seed, initial_mean=None,
                         initial_sigma=None, observable=None, record_every=1, transient=0.0):
    """Integrate ``n_traj`` c-number trajectories.

    ``observable(t, v)`` maps complex states of shape (n_traj, dim) to the values to
    keep (default: the full state). Samples before ``window[0] + transient`` are
    discarded. Time-independent generators use the exact discrete
    Ornstein-Uhlenbeck map, otherwise a stochastic Heun step.
    """
    if n_traj < 2:
        raise InvalidParameter("n_traj", "need at least two trajectories")
    check_step(gen, dt) if gen.time_dependent else None
    t0, t1 = map(float, window)
    n_steps = int(round((t1 - t0) / dt))
    if n_steps < 1:
        raise InvalidParameter("window", "shorter than one step")
    dim = gen.dim
    T = _real_basis(dim)
    Ti = np.linalg.inv(T)
    streams = [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n_traj)]
    from .integrate import vacuum_covariance
    sigma = vacuum_covariance(gen) if initial_sigma is None else np.asarray(initial_sigma, dtype=complex)
    r = np.stack([sample_initial(gen, sigma, rng, 1)[0] for rng in streams])
    if initial_mean is not None:
        r = r + (Ti @ np.asarray(initial_mean, dtype=complex)).real

    def to_v(rr):
        return rr @ T.T

    obs = observable if observable is not None else (lambda t, v: v)
    start = int(round(transient / dt))
    times, rec = [], []

    def keep(i, rr):
        if i >= start and (i - start) % record_every == 0:
            times.append(t0 + i * dt)
            rec.append(np.asarray(obs(t0 + i * dt, to_v(rr))))

    def real_drift(t):
        return (Ti @ gen.drift(t) @ T).real

    def real_diff_sqrt(t):
        return _psd_sqrt((Ti @ gen.symmetric_diffusion(t) @ Ti.conj().T).real)

    def real_drive(t):
        return (Ti @ gen.drive(t)).real

    exact = not gen.time_dependent
    if exact:
        Phi, L = _discrete_ou(real_drift(0.0), (Ti @ gen.symmetric_diffusion(0.0) @ Ti.conj().T).real, dt)
        Mr = real_drift(0.0)
        shift = np.linalg.solve(Mr, real_drive(0.0)) if np.any(gen.drive0) else None
    keep(0, r)
    i = 0
    while i < n_steps:
        m = min(CHUNK, n_steps - i)
        noise = np.stack([rng.standard_normal((m, dim)) for rng in streams], axis=1)
        for k in range(m):
            t = t0 + i * dt
            if exact:
                if shift is not None:
                    # drive enters via the fixed point -M^-1 d
                    r = (r + shift) @ Phi.T - shift + noise[k] @ L.T
                else:
                    r = r @ Phi.T + noise[k] @ L.T
            else:
                dW = noise[k] @ real_diff_sqrt(t).T * np.sqrt(dt)
                f0 = r @ real_drift(t).T + real_drive(t)
                pred = r + f0 * dt + dW
                f1 = pred @ real_drift(t + dt).T + real_drive(t + dt)
                r = r + (f0 + f1) * dt / 2 + dW
            i += 1
            keep(i, r)
    samples = np.stack(rec, axis=1)
    if samples.ndim == 2:
        samples = samples[:, :, None]
    return Ensemble(np.array(times), samples, int(seed),
                    {"dt": dt * record_every, "method": "exact-ou" if exact else "heun"})


@dataclass(frozen=True)
class Periodogram:
    omega: np.ndarray
    value: np.ndarray
    stderr: np.ndarray
    nperseg: int
    dt: float


def periodogram_spectrum(ens: Ensemble, column=0, nperseg=4096, correlation_time=None) -> Periodogram:
    """Two-sided Welch density S(omega) = int <x(t) x(0)> exp(i omega t) dt of one
    recorded real observable, averaged over trajectories."""
    x = ens.samples[:, :, column]
    if np.iscomplexobj(x):
        if np.max(np.abs(x.imag)) > 1e-9 * max(1.0, np.max(np.abs(x.real))):
            raise InvalidParameter("column", "observable must be real")
        x = x.real
    dt = float(ens.meta["dt"])
    if x.shape[1] < nperseg:
        raise WindowTooShort(f"{x.shape[1]} samples < nperseg = {nperseg}")
    if correlation_time is not None and nperseg * dt < 10 * correlation_time:
        raise WindowTooShort(f"segment {nperseg * dt:g} < 10 correlation times ({correlation_time:g})")
    f, P = signal.welch(x, fs=1 / dt, window="hann", nperseg=nperseg, detrend=False,
                        return_onesided=False, scaling="density", axis=-1)
    # a real record has an even periodogram, so the Fourier sign convention is moot
    order = np.argsort(f)
    omega = 2 * np.pi * f[order]
    P = P[:, order]
    return Periodogram(omega, P.mean(axis=0), P.std(axis=0, ddof=1) / np.sqrt(P.shape[0]), nperseg, dt)


def expected_periodogram(S, omega, nperseg, dt, n_kernel=4001, width=40):
    """Analytic spectrum ``S`` smoothed by the Hann window kernel, i.e. the
    expectation value of the Welch estimator at ``omega`` (aliasing neglected)."""
    w = signal.get_window("hann", nperseg)
    T = nperseg * dt
    d = np.linspace(-width * 2 * np.pi / T, width * 2 * np.pi / T, n_kernel)
    n = np.arange(nperseg)
    K = np.abs(np.exp(-1j * np.outer(d, n) * dt) @ w) ** 2 * dt / np.sum(w ** 2)
    K = K / integrate.trapezoid(K, d)
    omega = np.asarray(omega, dtype=float)
    return np.array([integrate.trapezoid(K * S(wk - d), d) for wk in omega])
