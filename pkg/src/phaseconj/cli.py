"""Command-line front end.

Every subcommand writes its CSV output(s) and a ``<name>.json`` manifest into
``--out``. Exit codes: 0 ok, 1 check failed, 2 invalid config, 3 regime
unavailable, 4 echo plan mismatch.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
import time
from pathlib import Path

import numpy as np

from .config import config_hash, load_config, parse_branch
from .errors import InvalidParameter, PlanMismatch, RegimeUnavailable
from .io import RunManifest, now_iso, write_csv

log = logging.getLogger("phaseconj")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_REGIME, EXIT_PLAN = 0, 1, 2, 3, 4


def parse_grid(text, log_spaced=False):
    try:
        start, stop, n = text.split(":")
        start, stop, n = float(start), float(stop), int(n)
    except ValueError:
        raise InvalidParameter("grid", f"expected start:stop:n, got {text!r}") from None
    if n < 1:
        raise InvalidParameter("grid", "n must be >= 1")
    if log_spaced:
        if not (start > 0 and stop > 0):
            raise InvalidParameter("grid", "log grid needs positive bounds")
        return np.geomspace(start, stop, n)
    return np.linspace(start, stop, n)


def _load(args):
    from dataclasses import replace
    cfg = load_config(args.config)
    if getattr(args, "branch", None) is not None and cfg.branch != parse_branch(args.branch):
        # re-place the tones on the requested branch with the same coupling
        from .drive_design import design_from_drives, drives_for_coupling
        import warnings
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            C = design_from_drives(cfg).C
        b = parse_branch(args.branch)
        m1, m2 = cfg.modes
        drives = drives_for_coupling(cfg.Omega[0], cfg.Omega[1], cfg.cavity.omega_c, cfg.cavity.kappa,
                                     m1.g, m2.g, C, b)
        cfg = replace(cfg, drives=drives, branch=b)
    return cfg


def _manifest(args, name, outputs, results, t0, seed=None):
    overrides = {k: v for k, v in sorted(vars(args).items())
                 if k not in ("func", "config", "out", "seed", "command") and v is not None}
    m = RunManifest(name, config_hash(args.config), args.config, seed, overrides,
                    [str(p) for p in outputs], results, round(time.time() - t0, 6), now_iso())
    return m.write(Path(args.out) / f"{name}.json")


def _design_and_cfg(args):
    from .drive_design import design
    from .model import validate_config
    cfg = _load(args)
    validate_config(cfg)
    return cfg, design(cfg)


def cmd_design(args):
    t0 = time.time()
    cfg, d = _design_and_cfg(args)
    rows = [
        ("omega_L1", d.omega_L[0]), ("omega_L2", d.omega_L[1]),
        ("C1_plus_re", d.C1_plus.real), ("C1_plus_im", d.C1_plus.imag),
        ("C2_plus_conj_re", d.C2_plus_conj.real), ("C2_plus_conj_im", d.C2_plus_conj.imag),
        ("product_re", d.product.real), ("product_im", d.product.imag),
        ("C", d.C), ("asymmetry", d.asymmetry),
    ]
    for k, v in rows:
        print(f"{k} = {v!r}")
    print(f"regime = {d.regime.kind}")
    out = write_csv(Path(args.out) / "design.csv", ["quantity", "value"],
                    [[k for k, _ in rows] + ["regime"], [repr(float(v)) for _, v in rows] + [d.regime.kind]])
    _manifest(args, "design", [out], {"regime": d.regime.kind, "C": d.C}, t0)
    return EXIT_OK


def _setup(args):
    from .drive_design import design_from_drives
    from .qubit_readout import ReadoutSetup
    cfg = _load(args)
    from .model import validate_config
    validate_config(cfg)
    C = design_from_drives(cfg).C
    setup = ReadoutSetup.from_config(cfg, C)
    return cfg, setup


def cmd_fig1(args):
    from .qubit_readout import high_temperature_slope, temperature_vs_force_temperature
    t0 = time.time()
    cfg, setup = _setup(args)
    grid = parse_grid(args.grid, args.log) if args.grid else np.geomspace(1e-3, 100.0, 51)
    pc = temperature_vs_force_temperature(setup, "pc", grid)
    lin = temperature_vs_force_temperature(setup, "linear", grid)
    out = write_csv(Path(args.out) / "fig1.csv", ["T_eff", "T_qubit_pc", "T_qubit_linear"], [grid, pc, lin])
    results = {"C": setup.C}
    if np.sum(grid >= 10) >= 2:
        results["slope_pc"] = high_temperature_slope(grid, pc)
        results["slope_linear"] = high_temperature_slope(grid, lin)
    low = grid <= 0.01
    if low.sum() >= 2:
        v = pc[low]
        results["plateau_rel_change"] = float(abs(v[-1] - v[0]) / abs(v[-1]))
    for k, v in results.items():
        print(f"{k} = {v!r}")
    _manifest(args, "fig1", [out], results, t0)
    return EXIT_OK


def cmd_fig2(args):
    from .qubit_readout import temperature_vs_width
    t0 = time.time()
    cfg, setup = _setup(args)
    grid = parse_grid(args.grid, args.log) if args.grid else np.geomspace(1e-3, 2.0, 61)
    pc = temperature_vs_width(setup, "pc", grid)
    lin = temperature_vs_width(setup, "linear", grid)
    out = write_csv(Path(args.out) / "fig2.csv", ["sigma_F", "T_qubit_pc", "T_qubit_linear"], [grid, pc, lin])
    finite = bool(np.all(np.isfinite(pc)) and np.all(np.isfinite(lin)))
    results = {"T_eff": setup.T_eff, "all_finite": finite}
    print(f"all_finite = {finite}")
    _manifest(args, "fig2", [out], results, t0)
    return EXIT_OK if finite else EXIT_FAIL


def cmd_spectrum(args):
    from .response import LINEAR, PC, position_spectrum
    t0 = time.time()
    cfg, setup = _setup(args)
    kind = PC if args.coupling == "pc" else LINEAR
    rs = setup.response(kind)
    grid = parse_grid(args.grid) if args.grid else np.linspace(-3.0, 3.0, 1201)
    noise = setup.noise(rs)
    S = position_spectrum(args.mode, rs, setup.force(), noise, grid)
    outputs = [write_csv(Path(args.out) / "spectrum.csv", ["omega", "value"], [grid, S.values])]
    results = {"mode": args.mode, "coupling": args.coupling}
    seed = None
    if args.mc:
        seed = args.seed
        outputs.append(_mc_overlay(args, cfg, rs, noise, results))
    _manifest(args, "spectrum", outputs, results, t0, seed)
    return EXIT_OK


def _mc_overlay(args, cfg, rs, noise, results):
    """Reduced-model Monte Carlo of the intrinsic-noise spectrum with error bars."""
    from .dynamics import build_rwa_generator, expected_periodogram, monte_carlo_ensemble, periodogram_spectrum
    from .response import PC, intrinsic_position_spectrum
    j = args.mode
    C1, C2c = (rs.C, -rs.C) if rs.kind == PC else (rs.C, rs.C)
    gen = build_rwa_generator(rs.Omega, rs.Gamma, C1, C2c, noise, kind="pc" if rs.kind == PC else "linear")
    Oj = rs.Omega[j - 1]
    slot = 0 if j == 1 else 2
    conj = rs.creation_slots[j - 1]
    dt, nper = args.mc_dt, args.nperseg
    relax = 10.0 / max(min(rs.Gamma), 1e-3)

    def obs(t, v):
        b = np.conj(v[:, slot]) if conj else v[:, slot]
        return 2 * np.real(b * np.exp(-1j * Oj * t))

    ens = monte_carlo_ensemble(gen, args.mc, (0.0, relax + dt * nper * 4.5), dt, args.seed,
                               observable=obs, transient=relax)
    pg = periodogram_spectrum(ens, 0, nper)

    def S(w):
        return (intrinsic_position_spectrum(j, rs, noise, w) + intrinsic_position_spectrum(j, rs, noise, -w)) / 2

    expected = expected_periodogram(S, pg.omega, nper, pg.dt)
    results["mc_trajectories"] = args.mc
    return write_csv(Path(args.out) / "spectrum_mc.csv", ["omega", "value", "stderr", "expected"],
                     [pg.omega, pg.value, pg.stderr, expected])


def cmd_validate_rwa(args):
    from .dynamics.validation import RWA_TOLERANCE, validate_rwa
    t0 = time.time()
    cfg, d = _design_and_cfg(args)
    rep = validate_rwa(cfg, d, periods=args.periods)
    results = {"C": d.C, "C_ratio": rep.C_ratio, "rms": rep.rms, "passed": rep.passed,
               "tolerance": RWA_TOLERANCE}
    print(f"rms = {rep.rms!r} ({'PASS' if rep.passed else 'FAIL'} at {RWA_TOLERANCE})")
    cols = [rep.t, np.abs(rep.B_full[:, 0]), np.abs(rep.B_full[:, 1]),
            np.abs(rep.B_rwa[:, 0]), np.abs(rep.B_rwa[:, 1])]
    header = ["t", "abs_B1_full", "abs_B2_full", "abs_B1_rwa", "abs_B2_rwa"]
    if args.detune:
        det = validate_rwa(cfg, d, detune=args.detune * d.C, periods=args.periods)
        results["rms_detuned"] = det.rms
        results["detuned_larger"] = bool(det.rms > rep.rms)
        print(f"rms_detuned = {det.rms!r}")
    out = write_csv(Path(args.out) / "validate_rwa.csv", header, cols)
    _manifest(args, "validate-rwa", [out], results, t0)
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_echo(args):
    from .dynamics.echo import (EchoPlan, ForceSignal, echo_protocol, echo_residual_sweep,
                                residual_bracket)
    t0 = time.time()
    cfg = _load(args)
    Omega = cfg.Omega
    plan = EchoPlan.from_tau(args.tau, Omega, args.j)
    if args.t1 is not None or args.t2 is not None:
        from dataclasses import replace
        plan = replace(plan, t1=args.t1 if args.t1 is not None else plan.t1,
                       t2=args.t2 if args.t2 is not None else plan.t2)
    plan.check()
    scale = args.amplitude
    amps = (scale * Omega[0], scale * Omega[1] * args.mismatch)
    forces = ForceSignal.ramp(amps, Omega, args.bandwidth)
    rng = np.random.default_rng(args.seed)
    res = echo_protocol(plan, forces, (1.0, 0.0), rng=rng, n_out=args.samples)
    b0 = res.initial
    r1 = np.abs(res.trace[:, 0] - np.conj(b0[1]))
    r2 = np.abs(res.trace[:, 1] - np.conj(b0[0]))
    out1 = write_csv(Path(args.out) / "echo_trace.csv", ["t", "residual_1", "residual_2"], [res.t, r1, r2])
    bw = parse_grid(args.grid) if args.grid else np.linspace(0.0, 0.05, 11)
    sweep = echo_residual_sweep(plan, amps, bw)
    out2 = write_csv(Path(args.out) / "echo_sweep.csv", ["bandwidth", "residual_abs", "quadrature_abs"],
                     [bw, np.abs(sweep.residual), np.abs(sweep.quadrature)])
    q = residual_bracket(plan, forces)
    results = {"residual_abs": abs(res.residual), "quadrature_abs": abs(q),
               "t1": plan.t1, "t2": plan.t2, "tau": plan.tau}
    print(f"residual = {abs(res.residual)!r}")
    _manifest(args, "echo", [out1, out2], results, t0, args.seed)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="phaseconj", description="Optomechanical phase-conjugation simulator")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, grid=True):
        sp.add_argument("--config", default=None, help="JSON config (default: built-in figure parameters)")
        sp.add_argument("--out", default="out", help="output directory")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--branch", choices=["plus", "minus"], default=None)
        if grid:
            sp.add_argument("--grid", default=None, help="start:stop:n")
            sp.add_argument("--log", action="store_true", help="log-spaced grid")
        return sp

    common(sub.add_parser("design", help="drive frequencies, couplings and regime"), grid=False).set_defaults(func=cmd_design)
    common(sub.add_parser("fig1", help="qubit temperature vs force temperature")).set_defaults(func=cmd_fig1)
    common(sub.add_parser("fig2", help="qubit temperature vs force bandwidth")).set_defaults(func=cmd_fig2)
    sp = common(sub.add_parser("spectrum", help="position spectrum of one mode"))
    sp.add_argument("--mode", type=int, choices=[1, 2], default=1)
    sp.add_argument("--coupling", choices=["pc", "linear"], default="pc")
    sp.add_argument("--mc", type=int, default=0, help="Monte Carlo trajectories for an overlay")
    sp.add_argument("--mc-dt", type=float, default=0.5)
    sp.add_argument("--nperseg", type=int, default=4096)
    sp.set_defaults(func=cmd_spectrum)
    sp = common(sub.add_parser("validate-rwa", help="full vs reduced model mean amplitudes"), grid=False)
    sp.add_argument("--periods", type=float, default=math.pi, help="window in units of 1/C")
    sp.add_argument("--detune", type=float, default=5.0, help="beat-note detuning in units of C (0: skip)")
    sp.set_defaults(func=cmd_validate_rwa)
    sp = common(sub.add_parser("echo", help="phase-conjugate echo and bandwidth sweep"))
    sp.add_argument("--tau", type=float, default=20.0)
    sp.add_argument("--j", type=int, choices=[1, 2], default=1)
    sp.add_argument("--t1", type=float, default=None)
    sp.add_argument("--t2", type=float, default=None)
    sp.add_argument("--amplitude", type=float, default=0.1, help="F_1 / Omega_1")
    sp.add_argument("--mismatch", type=float, default=1.0, help="(F_2/Omega_2) / (F_1/Omega_1)")
    sp.add_argument("--bandwidth", type=float, default=0.0)
    sp.add_argument("--samples", type=int, default=201)
    sp.set_defaults(func=cmd_echo)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except InvalidParameter as e:
        print(f"invalid config: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except RegimeUnavailable as e:
        print(f"regime unavailable: {e}", file=sys.stderr)
        return EXIT_REGIME
    except PlanMismatch as e:
        print(f"echo plan mismatch: {e}", file=sys.stderr)
        return EXIT_PLAN


if __name__ == "__main__":
    sys.exit(main())
