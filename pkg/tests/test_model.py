import math
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from phaseconj.errors import InvalidParameter, RegimeUnavailable
from phaseconj.model import (CavityParams, DriveTone, EffectiveMode, MechMode, QubitParams,
                             SystemConfig, natural_units_normalize, validate_config)
from phaseconj.response import ForceModel

from conftest import make_config


def test_fig1_parameters_valid(fig1_config):
    v = validate_config(fig1_config)
    assert v.pc_available
    assert v.separation_ratio == pytest.approx(0.4)
    assert v.Omega == (1.0, 1.5)


def test_degenerate_frequencies_regime_unavailable():
    cfg = make_config(kappa=0.1)
    cfg = replace(cfg, effective=(EffectiveMode(1.0, 0.1), EffectiveMode(1.0, 0.1)))
    with pytest.raises(RegimeUnavailable):
        validate_config(cfg)
    # without a PC design request the same config is acceptable
    assert not validate_config(replace(cfg, pc_design=False)).pc_available


def test_negative_kappa_names_field(fig1_config):
    cfg = replace(fig1_config, cavity=CavityParams(100.0, -0.1))
    with pytest.raises(InvalidParameter) as e:
        validate_config(cfg)
    assert e.value.field == "cavity.kappa"


@pytest.mark.parametrize("field,value", [
    ("gamma", -1e-3), ("omega", 0.0), ("n_bath", -0.5), ("omega", math.nan),
])
def test_mode_bounds(fig1_config, field, value):
    m = replace(fig1_config.modes[0], **{field: value})
    with pytest.raises(InvalidParameter) as e:
        validate_config(replace(fig1_config, modes=(m, fig1_config.modes[1])))
    assert e.value.field == f"modes[0].{field}"


def test_delta_must_match_exactly(fig1_config):
    d = fig1_config.drives[0]
    bad = DriveTone(d.eta, d.omega_L, d.Delta + 1e-12)
    with pytest.raises(InvalidParameter):
        validate_config(replace(fig1_config, drives=(bad, fig1_config.drives[1])))


def test_qubit_bounds(fig1_config):
    with pytest.raises(InvalidParameter):
        validate_config(replace(fig1_config, qubit=QubitParams(A=-1.0)))
    with pytest.raises(InvalidParameter):
        validate_config(replace(fig1_config, qubit=QubitParams(Gamma_decay=-0.1)))


def test_normalize_identity(fig1_config):
    assert natural_units_normalize(fig1_config, 1.0) is fig1_config


def test_normalize_to_first_mode():
    cfg = make_config(Omega=(2.0, 3.0), Gamma=(0.2, 0.2), kappa=0.4)
    n = natural_units_normalize(cfg, cfg.Omega[0])
    assert n.effective[0].Omega == 1.0
    assert n.cavity.kappa == pytest.approx(0.2, rel=1e-15)


@pytest.mark.parametrize("bad", [0.0, -2.0, math.inf])
def test_normalize_rejects(fig1_config, bad):
    with pytest.raises(InvalidParameter):
        natural_units_normalize(fig1_config, bad)


@settings(max_examples=60, deadline=None)
@given(r=st.floats(1e-3, 1e3))
def test_normalize_round_trip(r):
    cfg = replace(make_config(), force=ForceModel(10.0, 0.005, 1.5))
    back = natural_units_normalize(natural_units_normalize(cfg, r), 1 / r)
    pairs = [
        (back.cavity.kappa, cfg.cavity.kappa), (back.cavity.omega_c, cfg.cavity.omega_c),
        (back.effective[1].Gamma, cfg.effective[1].Gamma), (back.modes[0].g, cfg.modes[0].g),
        (back.drives[1].omega_L, cfg.drives[1].omega_L), (abs(back.drives[0].eta), abs(cfg.drives[0].eta)),
        (back.force.T_eff, cfg.force.T_eff), (back.force.sigma_F, cfg.force.sigma_F),
    ]
    for a, b in pairs:
        assert a == pytest.approx(b, rel=1e-14)


@settings(max_examples=60, deadline=None)
@given(r=st.floats(1e-3, 1e3))
def test_normalize_keeps_ratios(r):
    cfg = make_config()
    n = natural_units_normalize(cfg, r)
    sep = abs(n.Omega[0] - n.Omega[1])
    assert n.cavity.kappa / sep == pytest.approx(cfg.cavity.kappa / 0.5, rel=1e-14)
    assert n.Gamma[0] / n.Omega[0] == pytest.approx(0.1, rel=1e-14)


@settings(max_examples=200, deadline=None)
@given(kappa=st.floats(-1.0, 1.0), gamma=st.floats(-0.1, 0.5), Om1=st.floats(-0.5, 3.0),
       Om2=st.floats(0.01, 3.0), nb=st.floats(-1.0, 5.0))
def test_validator_accepts_iff_invariants(kappa, gamma, Om1, Om2, nb):
    cav = CavityParams(10.0, kappa)
    modes = (MechMode(1.0, gamma, 0.01, nb), MechMode(1.5, 0.1, 0.01))
    eff = (EffectiveMode(Om1, 0.1), EffectiveMode(Om2, 0.1))
    drives = (DriveTone.at(1.0, 9.0, 10.0), DriveTone.at(1.0, 11.0, 10.0))
    cfg = SystemConfig(cav, modes, eff, drives, pc_design=False)
    ok = kappa > 0 and gamma >= 0 and Om1 > 0 and nb >= 0
    if ok:
        validate_config(cfg)
    else:
        with pytest.raises(InvalidParameter):
            validate_config(cfg)
