"""Run configuration: schema, defaults, strict validation, hashing.

One JSON document drives every subcommand.  Unknown keys are rejected; all
quantities carry their unit in the key name (GHz, MV/m, Angstrom).  The
effective configuration (defaults merged with the file and the --seed
override) is hashed and echoed into every output file, so outputs are
reproducible byte for byte from the recorded configuration alone.
"""

from __future__ import annotations

import copy
import hashlib
import json

import jsonschema

# Default spin-spin amplitudes are the Gaussian-model integrals at the
# default geometry and p_n = 0.2, seed 0 (the `spin-spin` subcommand
# reproduces them).
DEFAULT_CONFIG = {
    "seed": 0,
    "fine_structure": {
        "lambda_z_ghz": 5.5,
        "lambda_xy_ghz": 7.3,
        "delta_ghz": 0.5332,
        "delta_prime_ghz": 1.2504,
        "delta_dprime_ghz": 0.3458,
    },
    "piezo": {
        "a_per_mvm": 0.3e-6,
        "b_per_mvm": 0.3e-6,
        "c_per_mvm": 0.3e-6,
        "d_per_mvm": 3.0e-6,
        "g_ghz": 2.0e6,
    },
    "single_particle": {"v_c": -10.0, "v_n": -12.0, "h_c": -1.0, "h_n": -0.5},
    "geometry": {
        "bond_length_angstrom": 1.54,
        "carbon_scale": 1.0,
        "nitrogen_scale": 1.0,
    },
    "orbital_model": {"width_angstrom": None, "p_n": 0.2},
    "config_offsets_ghz": {"e2": 0.0, "ae": 0.0, "a2": 0.0},
    "coulomb": {"source": "none", "entries": {}},
    "quadrature": {
        "log2_points": 17,
        "scrambles": 8,
        "eta_factors": [0.6, 0.45, 0.3],
        "target_rel_error": 0.05,
    },
    "scans": {
        "strain": {"component": "E1", "max_ghz": 20.0, "points": 81,
                   "pre_strain_ghz": 0.0},
        "stark": {"axis": "z", "max_mvm": 1.0, "points": 21,
                  "pre_strain_e2_ghz": 0.0},
        "spin_spin": {"p_n_start": 0.0, "p_n_stop": 1.0, "p_n_points": 11},
    },
}

_NUM = {"type": "number"}
_POSINT = {"type": "integer", "minimum": 1}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "seed": {"type": "integer", "minimum": 0},
        "fine_structure": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "lambda_z_ghz": _NUM,
                "lambda_xy_ghz": _NUM,
                "delta_ghz": _NUM,
                "delta_prime_ghz": _NUM,
                "delta_dprime_ghz": _NUM,
            },
        },
        "piezo": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "a_per_mvm": _NUM,
                "b_per_mvm": _NUM,
                "c_per_mvm": _NUM,
                "d_per_mvm": _NUM,
                "g_ghz": _NUM,
            },
        },
        "single_particle": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"v_c": _NUM, "v_n": _NUM, "h_c": _NUM, "h_n": _NUM},
        },
        "geometry": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "bond_length_angstrom": {"type": "number", "exclusiveMinimum": 0},
                "carbon_scale": {"type": "number", "exclusiveMinimum": 0},
                "nitrogen_scale": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "orbital_model": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "width_angstrom": {"type": ["number", "null"], "exclusiveMinimum": 0},
                "p_n": {"type": "number", "minimum": 0, "maximum": 1},
            },
        },
        "config_offsets_ghz": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"e2": _NUM, "ae": _NUM, "a2": _NUM},
        },
        "coulomb": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "source": {"enum": ["none", "gaussian", "tensor"]},
                "entries": {
                    "type": "object",
                    "additionalProperties": False,
                    "patternProperties": {"^[xy]{4}$": _NUM},
                },
            },
        },
        "quadrature": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "log2_points": {"type": "integer", "minimum": 8, "maximum": 24},
                "scrambles": {"type": "integer", "minimum": 2, "maximum": 64},
                "eta_factors": {
                    "type": "array",
                    "items": {"type": "number", "exclusiveMinimum": 0},
                    "minItems": 2,
                },
                "target_rel_error": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "scans": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "strain": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "component": {"enum": ["E1", "E2"]},
                        "max_ghz": _NUM,
                        "points": _POSINT,
                        "pre_strain_ghz": _NUM,
                    },
                },
                "stark": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "axis": {"enum": ["x", "y", "z"]},
                        "max_mvm": _NUM,
                        "points": _POSINT,
                        "pre_strain_e2_ghz": _NUM,
                    },
                },
                "spin_spin": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "p_n_start": {"type": "number", "minimum": 0, "maximum": 1},
                        "p_n_stop": {"type": "number", "minimum": 0, "maximum": 1},
                        "p_n_points": _POSINT,
                    },
                },
            },
        },
    },
}


class ConfigError(ValueError):
    pass


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, val in override.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], val)
        else:
            out[key] = copy.deepcopy(val)
    return out


def load_config(path: str | None = None, seed: int | None = None) -> dict:
    """Validated effective configuration (defaults <- file <- seed override)."""
    user = {}
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            try:
                user = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"config is not valid JSON: {exc}") from exc
    try:
        jsonschema.validate(user, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config invalid at {where}: {exc.message}") from exc
    cfg = _merge(DEFAULT_CONFIG, user)
    if seed is not None:
        cfg["seed"] = int(seed)
    return cfg


def config_hash(cfg: dict) -> str:
    canon = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()
