import warnings

import pytest

from phaseconj.drive_design import design_from_drives, drives_for_coupling
from phaseconj.model import CavityParams, EffectiveMode, MechMode, QubitParams, SystemConfig


def make_config(C=0.025, kappa=0.2, Omega=(1.0, 1.5), Gamma=(0.1, 0.1), g=0.01, omega_c=100.0,
                branch=1, n_bath=(0.0, 0.0)):
    drives = drives_for_coupling(Omega[0], Omega[1], omega_c, kappa, g, g, C, branch)
    modes = tuple(MechMode(O, G, g, n) for O, G, n in zip(Omega, Gamma, n_bath))
    eff = tuple(EffectiveMode(O, G) for O, G in zip(Omega, Gamma))
    return SystemConfig(CavityParams(omega_c, kappa), modes, eff, drives, QubitParams(), None, branch)


@pytest.fixture
def fig1_config():
    return make_config()


@pytest.fixture
def fig1_design(fig1_config):
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        return design_from_drives(fig1_config)
