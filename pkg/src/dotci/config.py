"""Run configuration: a flat, sectioned key = value document.

Grammar (see README for the full key list)::

    [section]
    key = value [unit]      # '#' or ';' starts a comment line

Numbers may carry their unit after a space (``12 meV``, ``108 ueV``,
``2.5 kV/cm``); a unit other than the key's own is rejected. Lists are
comma separated. Unknown sections or keys are errors.
"""

import configparser
from dataclasses import dataclass, field as dc_field
import math
import re

from .basis import ELECTRON, HOLE, ParticleParams
from .errors import ConfigError
from .interaction import DEFAULT_EPS_R
from .manybody import ExchangeParams
from .sweep import Model

_UNITS = {
    "meV": {"mev"},
    "ueV": {"uev", "µev", "μev"},
    "kV/cm": {"kv/cm"},
    "V per kV/cm": {"v/(kv/cm)", "v*cm/kv"},
    "1": set(),
}

# section -> key -> (type, unit, default)
SCHEMA = {
    "electron": {
        "hbar_omega": (float, "meV", 12.0),
        "mass_ratio": (float, "1", 0.055),
    },
    "hole": {
        "hbar_omega": (float, "meV", 6.0),
        "mass_ratio": (float, "1", 0.11),
    },
    "model": {
        "n_shells": (int, "1", 3),
        "eps_r": (float, "1", DEFAULT_EPS_R),
        "delta1_0": (float, "ueV", 108.0),
        "delta0": (float, "ueV", 0.0),
        "exchange_scaling": (str, None, "overlap"),
        "gap_offset": (float, "meV", 0.0),
    },
    "field": {
        "field": (float, "kV/cm", 0.0),
        "start": (float, "kV/cm", 0.0),
        "end": (float, "kV/cm", 4.0),
        "n_points": (int, "1", 40),
        "bias_per_field": (float, "V per kV/cm", None),
    },
    "crossing": {
        "lo": (float, "kV/cm", 0.0),
        "hi": (float, "kV/cm", 8.0),
        "tol": (float, "ueV", 1.0),
    },
    "spectrum": {
        "gamma": ("floatlist", "ueV", (50.0,)),
        "window": (float, "meV", 15.0),
        "step": (float, "ueV", 5.0),
    },
    "output": {
        "dir": (str, None, "out"),
        "seed": (int, "1", 0),
    },
}

POSITIVE = {
    ("electron", "hbar_omega"), ("electron", "mass_ratio"),
    ("hole", "hbar_omega"), ("hole", "mass_ratio"),
    ("model", "n_shells"), ("model", "eps_r"),
    ("field", "n_points"), ("crossing", "tol"),
    ("spectrum", "gamma"), ("spectrum", "window"), ("spectrum", "step"),
}
NON_NEGATIVE = {("model", "delta1_0"), ("model", "delta0")}


@dataclass
class RunConfig:
    values: dict  # section -> key -> parsed value
    raw: dict = dc_field(default_factory=dict)  # (section, key) -> text as given

    def __getitem__(self, item):
        section, key = item
        return self.values[section][key]

    def electron(self):
        return ParticleParams(ELECTRON, self["electron", "hbar_omega"], self["electron", "mass_ratio"])

    def hole(self):
        return ParticleParams(HOLE, self["hole", "hbar_omega"], self["hole", "mass_ratio"])

    def model(self):
        return Model(
            electron=self.electron(),
            hole=self.hole(),
            n_shells=self["model", "n_shells"],
            eps_r=self["model", "eps_r"],
            exchange=ExchangeParams(self["model", "delta1_0"], self["model", "delta0"],
                                    self["model", "exchange_scaling"]),
            gap_offset=self["model", "gap_offset"],
        )

    @property
    def gammas(self):
        return list(self["spectrum", "gamma"])

    def echo(self):
        """Effective configuration as text; given values are reproduced verbatim."""
        out = []
        for section, keys in SCHEMA.items():
            out.append(f"[{section}]")
            for key, (kind, unit, _) in keys.items():
                value = self.values[section][key]
                if value is None:
                    continue
                text = self.raw.get((section, key))
                if text is None:
                    text = _format(value, kind)
                out.append(f"{key} = {text}")
            out.append("")
        return "\n".join(out)


def _format(value, kind):
    if kind == "floatlist":
        return ", ".join(repr(float(v)) for v in value)
    if kind is float:
        return repr(float(value))
    return str(value)


def _line_of(text, section, key):
    current = None
    for n, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        m = re.match(r"\[(.+)\]$", s)
        if m:
            current = m.group(1).strip()
            continue
        if current == section and re.match(rf"{re.escape(key)}\s*[=:]", s, re.IGNORECASE):
            return n
    return None


def _parse_number(text, kind, unit, section, key, line):
    parts = text.split(None, 1)
    if not parts:
        raise ConfigError("empty value", key, line)
    num, given = parts[0], (parts[1].strip() if len(parts) > 1 else None)
    if given is not None:
        allowed = {unit.lower()} | _UNITS.get(unit, set())
        if unit == "1" or given.lower() not in allowed:
            raise ConfigError(f"bad unit {given!r} (expected {unit})", key, line)
    try:
        v = int(num) if kind is int else float(num)
    except ValueError:
        raise ConfigError(f"not a number: {num!r}", key, line) from None
    if kind is float and not math.isfinite(v):
        raise ConfigError(f"not a finite number: {num!r}", key, line)
    return v


def parse_config(text):
    cp = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=None, strict=True)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        line = getattr(exc, "lineno", None)
        raise ConfigError(f"cannot parse configuration: {exc.message if hasattr(exc, 'message') else exc}",
                          None, line) from None
    if cp.defaults():
        raise ConfigError("keys outside any section are not allowed", next(iter(cp.defaults())))
    values = {s: {k: spec[2] for k, spec in keys.items()} for s, keys in SCHEMA.items()}
    raw = {}
    for section in cp.sections():
        if section not in SCHEMA:
            raise ConfigError(f"unknown section [{section}]", section, _line_of_section(text, section))
        for key, text_value in cp.items(section):
            line = _line_of(text, section, key)
            if key not in SCHEMA[section]:
                raise ConfigError(f"unknown key in [{section}]", key, line)
            kind, unit, _ = SCHEMA[section][key]
            tv = text_value.strip()
            if kind == "floatlist":
                v = tuple(_parse_number(t.strip(), float, unit, section, key, line) for t in tv.split(","))
            elif kind is str:
                v = tv
            else:
                v = _parse_number(tv, kind, unit, section, key, line)
            values[section][key] = v
            raw[(section, key)] = tv
    cfg = RunConfig(values, raw)
    _validate(cfg, text)
    return cfg


def _line_of_section(text, section):
    for n, line in enumerate(text.splitlines(), 1):
        if line.strip() == f"[{section}]":
            return n
    return None


def _validate(cfg, text):
    for section, key in POSITIVE:
        v = cfg[section, key]
        bad = any(x <= 0 for x in v) if isinstance(v, tuple) else v <= 0
        if bad:
            raise ConfigError(f"{key} must be positive", key, _line_of(text, section, key))
    for section, key in NON_NEGATIVE:
        if cfg[section, key] < 0:
            raise ConfigError(f"{key} must be non-negative", key, _line_of(text, section, key))
    if cfg["model", "exchange_scaling"] not in ("overlap", "none"):
        raise ConfigError("exchange_scaling must be 'overlap' or 'none'", "exchange_scaling",
                          _line_of(text, "model", "exchange_scaling"))
    if cfg["field", "n_points"] < 2:
        raise ConfigError("n_points must be at least 2", "n_points", _line_of(text, "field", "n_points"))
    if cfg["field", "end"] <= cfg["field", "start"]:
        raise ConfigError("field grid must be increasing (end > start)", "end", _line_of(text, "field", "end"))


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
