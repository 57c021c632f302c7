"""JSON configuration documents.

Field names match the dataclasses in :mod:`phaseconj.model`. A document either
lists both drive tones explicitly or gives ``target_C``, in which case the tones
are placed at the pure phase-conjugation frequencies with equal mean fields.
"""
from __future__ import annotations

import copy
import hashlib
import json
import math
from pathlib import Path

from .errors import InvalidParameter
from .model import (CavityParams, DriveTone, EffectiveMode, MechMode, QubitParams, SystemConfig,
                    natural_units_normalize)
from .response import ForceModel

# parameters of the qubit-temperature figures; the cavity and drives are not
# part of that parameter set and are chosen to satisfy |Omega1 - Omega2| > kappa
DEFAULT_CONFIG = {
    "units": "natural",
    "cavity": {"omega_c": 100.0, "kappa": 0.2},
    "modes": [
        {"omega": 1.0, "gamma": 0.1, "g": 0.01, "n_bath": 0.0},
        {"omega": 1.5, "gamma": 0.1, "g": 0.01, "n_bath": 0.0},
    ],
    "effective": [{"Omega": 1.0, "Gamma": 0.1}, {"Omega": 1.5, "Gamma": 0.1}],
    "target_C": 0.025,
    "branch": 1,
    "pc_design": True,
    "qubit": {"A": 1.0, "Gamma_decay": 0.01, "omega_q": None},
    "force": {"T_eff": 10.0, "sigma_F": 0.005, "omega_0": None, "S0": 1.0,
              "target": "both", "kind": "bose"},
}

_BRANCHES = {"plus": 1, "minus": -1, 1: 1, -1: -1, "+1": 1, "-1": -1}


def default_config_dict():
    return copy.deepcopy(DEFAULT_CONFIG)


def _get(d, key, where, default=...):
    if not isinstance(d, dict):
        raise InvalidParameter(where, "expected an object")
    if key not in d:
        if default is ...:
            raise InvalidParameter(f"{where}.{key}" if where else key, "missing")
        return default
    return d[key]


def _number(v, where):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InvalidParameter(where, f"expected a number, got {v!r}")
    if not math.isfinite(v):
        raise InvalidParameter(where, "must be finite")
    return float(v)


def _complex(v, where):
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise InvalidParameter(where, "complex values are [re, im]")
        return complex(_number(v[0], where), _number(v[1], where))
    if isinstance(v, dict):
        return complex(_number(_get(v, "re", where), where), _number(_get(v, "im", where), where))
    return complex(_number(v, where), 0.0)


def _pair(d, key, where):
    v = _get(d, key, where)
    if not isinstance(v, list) or len(v) != 2:
        raise InvalidParameter(f"{where}.{key}" if where else key, "expected a list of two entries")
    return v


def parse_branch(v):
    try:
        return _BRANCHES[v]
    except (KeyError, TypeError):
        raise InvalidParameter("branch", f"must be plus/minus or +1/-1, got {v!r}") from None


def config_from_dict(doc) -> SystemConfig:
    if not isinstance(doc, dict):
        raise InvalidParameter("config", "top level must be an object")
    units = doc.get("units", "natural")
    if units != "natural":
        raise InvalidParameter("units", f"only natural units are supported, got {units!r}")
    cav = _get(doc, "cavity", "")
    cavity = CavityParams(_number(_get(cav, "omega_c", "cavity"), "cavity.omega_c"),
                          _number(_get(cav, "kappa", "cavity"), "cavity.kappa"))
    modes = []
    for j, m in enumerate(_pair(doc, "modes", "")):
        w = f"modes[{j}]"
        modes.append(MechMode(_number(_get(m, "omega", w), f"{w}.omega"),
                              _number(_get(m, "gamma", w), f"{w}.gamma"),
                              _number(_get(m, "g", w), f"{w}.g"),
                              _number(_get(m, "n_bath", w, 0.0), f"{w}.n_bath")))
    effective = []
    for j, e in enumerate(_pair(doc, "effective", "")):
        w = f"effective[{j}]"
        effective.append(EffectiveMode(_number(_get(e, "Omega", w), f"{w}.Omega"),
                                       _number(_get(e, "Gamma", w), f"{w}.Gamma")))
    branch = parse_branch(doc.get("branch", 1))
    if "drives" in doc:
        drives = []
        for j, d in enumerate(_pair(doc, "drives", "")):
            w = f"drives[{j}]"
            tone = DriveTone.at(_complex(_get(d, "eta", w), f"{w}.eta"),
                                _number(_get(d, "omega_L", w), f"{w}.omega_L"), cavity.omega_c)
            if "Delta" in d and _number(d["Delta"], f"{w}.Delta") != tone.Delta:
                raise InvalidParameter(f"{w}.Delta", "must equal omega_c - omega_L exactly")
            drives.append(tone)
        drives = tuple(drives)
    elif "target_C" in doc:
        from .drive_design import drives_for_coupling
        C = _number(doc["target_C"], "target_C")
        if C < 0:
            raise InvalidParameter("target_C", "must be >= 0")
        drives = drives_for_coupling(effective[0].Omega, effective[1].Omega, cavity.omega_c,
                                     cavity.kappa, modes[0].g, modes[1].g, C, branch)
    else:
        raise InvalidParameter("drives", "give either 'drives' or 'target_C'")
    q = doc.get("qubit", {})
    omega_q = q.get("omega_q") if isinstance(q, dict) else None
    qubit = QubitParams(_number(q.get("A", 1.0), "qubit.A"),
                        _number(q.get("Gamma_decay", 0.01), "qubit.Gamma_decay"),
                        None if omega_q is None else _number(omega_q, "qubit.omega_q"))
    force = None
    f = doc.get("force")
    if f is not None:
        w0 = f.get("omega_0")
        force = ForceModel(_number(_get(f, "T_eff", "force"), "force.T_eff"),
                           _number(_get(f, "sigma_F", "force"), "force.sigma_F"),
                           effective[1].Omega if w0 is None else _number(w0, "force.omega_0"),
                           _number(f.get("S0", 1.0), "force.S0"),
                           f.get("target", "both"), f.get("kind", "bose"))
    pc = doc.get("pc_design", True)
    if not isinstance(pc, bool):
        raise InvalidParameter("pc_design", "must be true or false")
    cfg = SystemConfig(cavity, tuple(modes), tuple(effective), drives, qubit, force, branch, pc)
    ref = doc.get("reference")
    if ref is not None:
        cfg = natural_units_normalize(cfg, _number(ref, "reference"))
    return cfg


def load_config(path=None) -> SystemConfig:
    """Read a JSON config file; ``None`` gives the default configuration."""
    if path is None:
        return config_from_dict(default_config_dict())
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise InvalidParameter("config", f"malformed JSON at line {e.lineno} column {e.colno}: {e.msg}") from None
    except OSError as e:
        raise InvalidParameter("config", f"cannot read {path}: {e.strerror}") from None
    return config_from_dict(doc)


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=_json_default)


def _json_default(o):
    if isinstance(o, complex):
        return [o.real, o.imag]
    if hasattr(o, "tolist"):
        return o.tolist()
    raise TypeError(f"not serialisable: {type(o).__name__}")


def config_hash(path=None):
    """SHA-256 of the config document (or of the default document)."""
    if path is None:
        data = canonical_json(default_config_dict()).encode()
    else:
        data = Path(path).read_bytes()
    return hashlib.sha256(data).hexdigest()
