"""Acceptance criteria 1-8. Each test prints one PASS/FAIL line."""
import math
import time

import numpy as np
import pytest

from phaseconj.cli import main
from phaseconj.drive_design import closed_form_product, coupling_constants, coupling_product, drive_detunings
from phaseconj.dynamics import (EchoPlan, ForceSignal, build_full_generator, build_rwa_generator,
                                commutator_deviation, derive_bare_modes, echo_protocol, echo_residual_sweep,
                                expected_periodogram, integrate_covariance, matched_amplitudes,
                                monte_carlo_ensemble, periodogram_spectrum, residual_bracket, validate_rwa,
                                vacuum_covariance)
from phaseconj.drive_design import design_from_drives
from phaseconj.qubit_readout import (ReadoutSetup, high_temperature_slope, temperature_vs_force_temperature,
                                     temperature_vs_width)
from phaseconj.response import PC, ResponseSet, intrinsic_position_spectrum, reduced_noise, spectrum_cross_terms

from conftest import make_config


@pytest.fixture
def report(capsys):
    def _report(n, ok, elapsed, bound, detail):
        ok_all = bool(ok) and elapsed < bound
        with capsys.disabled():
            print(f"\nCRITERION {n}: {'PASS' if ok_all else 'FAIL'} ({elapsed:.2f} s < {bound:g} s) {detail}")
        assert ok, detail
        assert elapsed < bound, f"runtime {elapsed:.2f} s exceeds {bound} s"
    return _report


def test_criterion_1_product_identity(report):
    rng = np.random.default_rng(2024)
    t0 = time.perf_counter()
    worst, all_negative = 0.0, True
    for _ in range(1000):
        O1 = rng.uniform(0.2, 5)
        O2 = O1 + rng.uniform(0.05, 3)
        kappa = rng.uniform(0.05, 0.99) * (O2 - O1)
        g1, g2 = rng.uniform(1e-4, 0.1, 2)
        a1, a2 = rng.uniform(0.1, 50, 2) * np.exp(1j * rng.uniform(-np.pi, np.pi, 2))
        branch = 1 if rng.random() < 0.5 else -1
        D1, D2 = drive_detunings(O1, O2, kappa, branch)
        c1, c2 = coupling_constants(a1, a2, g1, g2, D1, D2, O1, O2, kappa)
        p = coupling_product(c1, c2)
        ref = closed_form_product(a1, a2, g1, g2, O1, O2, kappa)
        worst = max(worst, abs(p - ref) / abs(ref))
        all_negative &= p.real < 0 and abs(p.imag) <= 1e-12 * abs(p)
    el = time.perf_counter() - t0
    report(1, worst <= 1e-12 and all_negative, el, 1.0,
           f"max rel err {worst:.2e}, real-negative {all_negative}")


def test_criterion_2_fig1(report):
    t0 = time.perf_counter()
    setup = ReadoutSetup()
    T = np.geomspace(1e-3, 100, 51)
    pc = temperature_vs_force_temperature(setup, "pc", T)
    lin = temperature_vs_force_temperature(setup, "linear", T)
    s_pc, s_lin = high_temperature_slope(T, pc), high_temperature_slope(T, lin)
    low = pc[T <= 0.01]
    plateau = bool(np.all(low < 0) and np.all(np.isfinite(low))
                   and np.all(np.abs(np.diff(low)) <= 0.05 * np.abs(low[:-1])))
    el = time.perf_counter() - t0
    ok = abs(s_pc + 1) <= 0.1 and abs(s_lin - 1) <= 0.1 and plateau
    report(2, ok, el, 10.0, f"slope pc {s_pc:.4f}, slope linear {s_lin:.4f}, plateau {plateau} ({low[-1]:.5f})")


def test_criterion_3_fig2(report):
    t0 = time.perf_counter()
    setup = ReadoutSetup()
    sep = abs(setup.Omega[1] - setup.Omega[0])
    sig = np.unique(np.concatenate([np.geomspace(1e-3, 2, 61), [0.1 * sep, 3 * sep]]))
    pc = temperature_vs_width(setup, "pc", sig)
    narrow = pc[sig <= 0.1 * sep] / -setup.T_eff
    wide = pc[sig >= 3 * sep]
    el = time.perf_counter() - t0
    ok = (np.all(np.abs(narrow - 1) <= 0.1) and np.all(np.sign(wide) == np.sign(setup.T_eff))
          and np.all(np.isfinite(pc)))
    report(3, ok, el, 30.0, f"narrow T/(-T_eff) in [{narrow.min():.4f}, {narrow.max():.4f}], "
                            f"wide min {wide.min():.4f}, finite {np.all(np.isfinite(pc))}")


def test_criterion_4_spectral_oracle(report):
    t0 = time.perf_counter()
    Omega, Gamma, C = (1.0, 1.5), (0.05, 0.05), 0.08
    rs = ResponseSet(Omega, Gamma, C, PC)
    noise = reduced_noise(rs)
    gen = build_rwa_generator(Omega, Gamma, C, -C, noise)
    dt, nper, relax = 0.5, 4096, 200.0

    def x1(t, v):
        return 2 * np.real(v[:, 0] * np.exp(-1j * Omega[0] * t))

    ens = monte_carlo_ensemble(gen, 256, (0.0, relax + 4.5 * nper * dt), dt, 7, observable=x1, transient=relax)
    pg = periodogram_spectrum(ens, 0, nper)

    def S(w):
        return (intrinsic_position_spectrum(1, rs, noise, w) + intrinsic_position_spectrum(1, rs, noise, -w)) / 2

    # resolved peaks: the split doublet around +/- Omega_1, within a half-width of each maximum
    z_peak = []
    for centre in (-Omega[0] - C, -Omega[0] + C, Omega[0] - C, Omega[0] + C):
        sel = np.abs(pg.omega - centre) <= Gamma[0] / 2
        exp = expected_periodogram(S, pg.omega[sel], nper, pg.dt)
        z_peak.append(np.max(np.abs(pg.value[sel] - exp) / pg.stderr[sel]))
    zmax = float(max(z_peak))

    def coeff(c):
        r = ResponseSet(Omega, (0.1, 0.1), c, PC)
        return sum(k for f, s, sp, k in spectrum_cross_terms(1, Omega[0], r, (0, 1)) if abs(f + Omega[1]) < 1e-12)

    c_on, c_off = coeff(0.025), coeff(0.0)
    el = time.perf_counter() - t0
    ok = zmax <= 3 and abs(c_on) > 0 and c_off == 0
    report(4, ok, el, 120.0, f"max |z| at peaks {zmax:.2f}, S_F(-Omega2) coefficient {abs(c_on):.3e} (C>0), "
                             f"{abs(c_off):.1e} (C=0)")


def test_criterion_5_rwa(report):
    t0 = time.perf_counter()
    sep = 0.5
    rows, ok = [], True
    for ratio in (0.005, 0.01, 0.05):
        C = ratio * sep
        cfg = make_config(C=C, Gamma=(2.2 * C, 0.2 * C))
        res = validate_rwa(cfg)
        det = validate_rwa(cfg, detune=5 * C)
        ok &= res.rms <= 0.02 and det.rms > res.rms
        rows.append(f"C/sep={ratio}: rms {res.rms:.4f}, detuned {det.rms:.4f}")
    el = time.perf_counter() - t0
    report(5, ok, el, 60.0, "; ".join(rows))


def test_criterion_6_commutators(report):
    t0 = time.perf_counter()
    cfg = make_config()
    d = design_from_drives(cfg)
    C = d.C
    full = build_full_generator(cfg, d, derive_bare_modes(cfg, d))
    devs = []
    for dt in (0.03, 0.015):
        _, comm = integrate_covariance(full, vacuum_covariance(full), (0, math.pi / C), dt, 40)
        devs.append(commutator_deviation(full, comm))
    rs = ResponseSet(cfg.Omega, cfg.Gamma, C, PC)
    no_zeta = build_rwa_generator(cfg.Omega, cfg.Gamma, C, -C, reduced_noise(rs, include_cavity=False))
    zeta = build_rwa_generator(cfg.Omega, cfg.Gamma, C, -C, reduced_noise(rs))
    red = []
    for gen in (no_zeta, zeta):
        _, comm = integrate_covariance(gen, vacuum_covariance(gen), (0, math.pi / C), 0.05, 20)
        red.append(commutator_deviation(gen, comm))
    el = time.perf_counter() - t0
    ok = max(devs) <= 1e-6 and red[0] > 1e-3 and red[1] <= 1e-6
    report(6, ok, el, 60.0, f"full model dev {devs[0]:.1e} (dt 0.03), {devs[1]:.1e} (dt 0.015); "
                            f"reduced without zeta {red[0]:.3f}, with zeta {red[1]:.1e}")


def test_criterion_7_echo(report):
    t0 = time.perf_counter()
    Omega = (1.0, 1.5)
    plan = EchoPlan.from_tau(20.0, Omega)
    r0 = abs(echo_protocol(plan, ForceSignal.zero(), initial=(0.3 + 0.4j, -0.2j)).residual)
    scale = 0.1
    rs = abs(echo_protocol(plan, ForceSignal.static(*matched_amplitudes(scale, Omega))).residual)
    quad_err = 0.0
    for eps in (1e-3, 1e-2, 5e-2):
        f = ForceSignal.ramp(matched_amplitudes(scale, Omega), Omega, eps)
        r, q = echo_protocol(plan, f).residual, residual_bracket(plan, f)
        quad_err = max(quad_err, abs(r - q) / abs(q))
    sw = echo_residual_sweep(plan, matched_amplitudes(scale, Omega), np.linspace(0, 0.05, 21))
    mono = bool(np.all(np.diff(np.abs(sw.residual)) >= 0))
    el = time.perf_counter() - t0
    ok = r0 < 1e-12 and rs <= 1e-8 * scale * plan.tau and quad_err <= 1e-6 and mono
    report(7, ok, el, 30.0, f"zero-force {r0:.1e}, static matched {rs / (scale * plan.tau):.1e} of scale*tau, "
                            f"quadrature rel err {quad_err:.1e}, monotone {mono}")


def test_criterion_8_determinism(report, tmp_path):
    t0 = time.perf_counter()
    runs = [("design",), ("fig1",), ("fig2",), ("spectrum", "--mc", "4", "--nperseg", "256", "--seed", "3"),
            ("validate-rwa", "--periods", "0.3", "--detune", "0"), ("echo",)]
    mismatched = []
    for argv in runs:
        outs = []
        for tag in ("a", "b"):
            d = tmp_path / f"{argv[0]}_{tag}"
            main([argv[0], "--out", str(d), *argv[1:]])
            outs.append({p.name: p.read_bytes() for p in sorted(d.glob("*.csv"))})
        if not outs[0] or outs[0] != outs[1]:
            mismatched.append(argv[0])
    el = time.perf_counter() - t0
    report(8, not mismatched, el, 300.0, f"{len(runs)} subcommands, mismatched: {mismatched or 'none'}")
