"""Run configuration: INI-style files with command-line overrides."""

import configparser
import math
from dataclasses import dataclass, field, fields

from .symbols import (
    PhysicalParams,
    SymbolSpec,
    FHSingularity,
    flatband_symbol,
    gaussian_bump_symbol,
    magnetic_symbol,
    xray_symbol,
)

__all__ = ["ConfigError", "RunConfig", "load_config", "MODELS"]

MODELS = ("xray", "flatband", "magnetic", "pure_fh", "custom")

_PARAM_KEYS = {f.name for f in fields(PhysicalParams)}
_REQUIRED = {
    "xray": ("m", "fermi_energy", "coupling"),
    "flatband": ("coupling", "d0", "a0"),
    "magnetic": ("fermi_energy", "coupling", "omega_c", "delta"),
    "pure_fh": (),
    "custom": (),
}
_DEFAULT_PARAMS = {
    "xray": {"m": 1.0, "fermi_energy": 1.0, "coupling": math.sqrt(2.0)},
    "flatband": {"coupling": 0.1, "d0": 1.0, "a0": 1.0},
    "magnetic": {"fermi_energy": 1.0, "coupling": 0.5, "omega_c": 0.5, "delta": 0.1},
    "pure_fh": {},
    "custom": {},
}
_SECTIONS = {
    "model": {"name"},
    "params": _PARAM_KEYS,
    "fh": {"alpha", "beta", "location"},
    "custom": {"eps", "width"},
    "sweep": {"t", "n_per_unit", "n_max", "rule", "constants"},
    "kernel": {"t_max", "count"},
    "output": {"csv", "json", "prefix"},
    "tolerance": {"barnes", "det2", "factor", "trivial"},
}
_TOLERANCES = {"barnes": 1e-9, "det2": 1e-12, "factor": 1e-8, "trivial": 1e-14}


class ConfigError(ValueError):
    """Invalid or incomplete configuration."""


@dataclass
class RunConfig:
    model: str = "xray"
    params: PhysicalParams = field(default_factory=PhysicalParams)
    alpha: complex = 0.2
    beta: complex = 0.2
    location: float = 0.0
    bump_eps: float = 0.5
    bump_width: float = 1.0
    T_list: tuple = (10.0, 20.0, 40.0, 80.0)
    n_per_unit: float = 24.0
    n_max: int = 2048
    rule: str = "trapezoid"
    constants: bool = True
    kernel_t_max: float = 10.0
    kernel_count: int = 201
    out_prefix: str = "whasym_out"
    csv_path: str = ""
    json_path: str = ""
    tolerances: dict = field(default_factory=lambda: dict(_TOLERANCES))

    def symbol(self):
        if self.model == "xray":
            return xray_symbol(self.params)
        if self.model == "flatband":
            return flatband_symbol(self.params)
        if self.model == "magnetic":
            return magnetic_symbol(self.params)
        if self.model == "pure_fh":
            sing = FHSingularity(self.location, self.alpha, self.beta)
            return SymbolSpec(singularities=(sing,), label="pure_fh")
        return gaussian_bump_symbol(self.bump_eps, self.bump_width)

    @property
    def csv(self):
        return self.csv_path or self.out_prefix + ".csv"

    @property
    def json(self):
        return self.json_path or self.out_prefix + ".json"


def _number(section, key, text, kind=float):
    try:
        if kind is complex:
            return complex(text.replace(" ", ""))
        return kind(text)
    except ValueError:
        raise ConfigError(f"[{section}] {key}: cannot parse '{text}'") from None


def _t_list(text, where="T"):
    try:
        vals = tuple(float(x) for x in text.replace(";", ",").split(",") if x.strip())
    except ValueError:
        raise ConfigError(f"{where}: expected comma-separated numbers, got '{text}'") from None
    if not vals or any(not v > 0 for v in vals) or any(b <= a for a, b in zip(vals, vals[1:])):
        raise ConfigError(f"{where}: values must be positive and increasing")
    return vals


def _bool(section, key, text):
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"[{section}] {key}: expected a boolean, got '{text}'")


def load_config(path=None, model=None, T=None, n_per_unit=None, out=None):
    """Build a validated RunConfig from an optional file and flag overrides.

    Without a file the chosen model gets its default parameters; with a file
    every key the model requires must be present in ``[params]``.
    """
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str.lower
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                parser.read_file(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from None
        except configparser.Error as exc:
            raise ConfigError(f"malformed config file: {str(exc).splitlines()[0]}") from None
    for section in parser.sections():
        if section not in _SECTIONS:
            raise ConfigError(f"unknown section [{section}]")
        for key in parser[section]:
            if key not in _SECTIONS[section]:
                raise ConfigError(f"unknown key '{key}' in [{section}]")

    cfg = RunConfig()
    name = model or parser.get("model", "name", fallback="xray").strip()
    if name not in MODELS:
        raise ConfigError(f"unknown model '{name}' (choose from {', '.join(MODELS)})")
    cfg.model = name

    given = dict(parser["params"]) if parser.has_section("params") else {}
    if path is not None:
        missing = [k for k in _REQUIRED[name] if k not in given]
        if missing:
            raise ConfigError(f"missing required key '{missing[0]}' in [params] for model {name}")
        values = {}
    else:
        values = dict(_DEFAULT_PARAMS[name])
    for key, text in given.items():
        values[key] = _number("params", key, text)
    try:
        cfg.params = PhysicalParams(**values)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid parameters: {exc}") from None

    if parser.has_section("fh"):
        sec = parser["fh"]
        cfg.alpha = _number("fh", "alpha", sec.get("alpha", "0.2"), complex)
        cfg.beta = _number("fh", "beta", sec.get("beta", "0.2"), complex)
        cfg.location = _number("fh", "location", sec.get("location", "0"))
        if cfg.alpha.imag == 0:
            cfg.alpha = cfg.alpha.real
        if cfg.beta.imag == 0:
            cfg.beta = cfg.beta.real
    if parser.has_section("custom"):
        cfg.bump_eps = _number("custom", "eps", parser["custom"].get("eps", "0.5"))
        cfg.bump_width = _number("custom", "width", parser["custom"].get("width", "1"))

    if parser.has_section("sweep"):
        sec = parser["sweep"]
        if "t" in sec:
            cfg.T_list = _t_list(sec["t"], "[sweep] T")
        if "n_per_unit" in sec:
            cfg.n_per_unit = _number("sweep", "n_per_unit", sec["n_per_unit"])
        if "n_max" in sec:
            cfg.n_max = _number("sweep", "n_max", sec["n_max"], int)
        if "rule" in sec:
            cfg.rule = sec["rule"].strip()
        if "constants" in sec:
            cfg.constants = _bool("sweep", "constants", sec["constants"])
    if parser.has_section("kernel"):
        sec = parser["kernel"]
        cfg.kernel_t_max = _number("kernel", "t_max", sec.get("t_max", "10"))
        cfg.kernel_count = _number("kernel", "count", sec.get("count", "201"), int)
    if parser.has_section("output"):
        sec = parser["output"]
        cfg.out_prefix = sec.get("prefix", cfg.out_prefix)
        cfg.csv_path = sec.get("csv", "")
        cfg.json_path = sec.get("json", "")
    if parser.has_section("tolerance"):
        for key, text in parser["tolerance"].items():
            cfg.tolerances[key] = _number("tolerance", key, text)

    if T is not None:
        cfg.T_list = _t_list(T, "--T")
    if n_per_unit is not None:
        cfg.n_per_unit = float(n_per_unit)
    if out is not None:
        cfg.out_prefix, cfg.csv_path, cfg.json_path = out, "", ""
    _validate(cfg)
    return cfg


def _validate(cfg):
    if not cfg.n_per_unit > 0:
        raise ConfigError("n_per_unit must be positive")
    if cfg.n_max < 64:
        raise ConfigError("n_max must be at least 64")
    if cfg.rule not in ("trapezoid", "uniform-trapezoid", "gauss-legendre"):
        raise ConfigError(f"unknown quadrature rule '{cfg.rule}'")
    if not cfg.kernel_t_max > 0 or cfg.kernel_count < 2:
        raise ConfigError("kernel needs t_max > 0 and count >= 2")
    for key, tol in cfg.tolerances.items():
        if not tol > 0:
            raise ConfigError(f"tolerance '{key}' must be positive")
