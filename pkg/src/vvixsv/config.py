"""Run configuration read from an INI file.

Sections mirror the objects they build::

    [run]         variant, input, output_dir
    [chain]       ChainConfig fields
    [priors]      name = mean, variance   (or shape, scale for the *2 entries)
    [steps]       initial random-walk scales
    [jumptest]    window, alpha, log_returns
    [simulation]  T, N, seed, pvalue_mode
    [params]      parameter values used by ``simulate``

Anything left out falls back to the documented defaults.
"""

from __future__ import annotations

import configparser
import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .model import (
    REFERENCE_P,
    REFERENCE_Q,
    REFERENCE_SIGMA_P,
    ModelVariant,
    PParams,
    QParams,
)
from .mcmc.priors import INVGAMMA_PARAMS, NORMAL_PARAMS, ChainConfig, PriorHyper
from .mcmc.state import Params


class ConfigError(ValueError):
    pass


@dataclass
class JumpTestSettings:
    window: int = 22
    alpha: float = 0.05
    log_returns: bool = False

    def __post_init__(self):
        if self.window < 2:
            raise ConfigError("jumptest.window must be >= 2")
        if not 0 < self.alpha < 1:
            raise ConfigError("jumptest.alpha must lie in (0, 1)")


@dataclass
class SimulationSettings:
    T: int = 1989
    N: int = 1000
    seed: int = 0
    pvalue_mode: str = "mean"

    def __post_init__(self):
        if self.T < 2 or self.N < 1:
            raise ConfigError("simulation.T must be >= 2 and simulation.N >= 1")
        if self.pvalue_mode not in ("mean", "draws"):
            raise ConfigError("simulation.pvalue_mode must be 'mean' or 'draws'")


def default_params() -> Params:
    return Params(p=REFERENCE_P, q=REFERENCE_Q, sigma_P=REFERENCE_SIGMA_P)


@dataclass
class RunConfig:
    variant: ModelVariant = ModelVariant.SVJJ_S
    chain: ChainConfig = field(default_factory=ChainConfig)
    priors: dict = field(default_factory=dict)
    steps: dict = field(default_factory=dict)
    jumptest: JumpTestSettings = field(default_factory=JumpTestSettings)
    simulation: SimulationSettings = field(default_factory=SimulationSettings)
    params: Params = field(default_factory=default_params)
    input: str | None = None
    output_dir: str = "out"

    def prior_hyper(self, y=None, delta=None) -> PriorHyper:
        """Priors from the config; unset centres come from the data if given."""
        from .mcmc.priors import default_priors

        overrides = dict(self.priors)
        if self.steps:
            base = PriorHyper().steps
            base.update(self.steps)
            overrides["steps"] = base
        if y is None:
            return PriorHyper(**overrides)
        return default_priors(y, delta or self.chain.delta, **overrides)

    def as_dict(self) -> dict:
        return {
            "variant": self.variant.value,
            "chain": self.chain.as_dict(),
            "priors": {k: list(v) for k, v in sorted(self.priors.items())},
            "steps": dict(sorted(self.steps.items())),
            "jumptest": asdict(self.jumptest),
            "simulation": asdict(self.simulation),
            "params": self.params.as_dict(),
            "input": self.input,
            "output_dir": self.output_dir,
        }

    def hash(self) -> str:
        """Digest of the settings that affect numeric output (paths excluded)."""
        d = self.as_dict()
        d.pop("output_dir")
        d.pop("input")
        blob = json.dumps(d, sort_keys=True, default=str).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _coerce(cls, section: dict, name: str):
    types = {f.name: f.type for f in fields(cls)}
    out = {}
    for key, raw in section.items():
        if key not in types:
            raise ConfigError(f"unknown key {key!r} in [{name}]")
        t = str(types[key])
        try:
            if "bool" in t:
                out[key] = _bool(raw)
            elif "tuple" in t:
                out[key] = tuple(float(x) for x in raw.split(","))
            elif t == "int":
                out[key] = int(raw)
            elif t == "float":
                out[key] = float(raw)
            else:
                out[key] = raw.strip()
        except ValueError as exc:
            raise ConfigError(f"[{name}] {key}: {exc}") from None
    return out


def _pair(raw: str, key: str) -> tuple[float, float]:
    parts = [x.strip() for x in raw.split(",")]
    if len(parts) != 2:
        raise ConfigError(f"[priors] {key} needs two comma-separated numbers")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError:
        raise ConfigError(f"[priors] {key}: cannot parse {raw!r}") from None


def load_config(path=None, text: str | None = None) -> RunConfig:
    """Parse an INI file (or string) into a validated :class:`RunConfig`."""
    parser = configparser.ConfigParser()
    parser.optionxform = str
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        parser.read(path)
    elif text is not None:
        parser.read_string(text)
    known = {"run", "chain", "priors", "steps", "jumptest", "simulation", "params"}
    extra = set(parser.sections()) - known
    if extra:
        raise ConfigError(f"unknown config sections: {sorted(extra)}")

    def sec(name):
        return dict(parser[name]) if parser.has_section(name) else {}

    run = sec("run")
    try:
        variant = ModelVariant.parse(run.pop("variant", "SVJJ_S"))
        chain = ChainConfig(**_coerce(ChainConfig, sec("chain"), "chain"))
        jumptest = JumpTestSettings(**_coerce(JumpTestSettings, sec("jumptest"), "jumptest"))
        simulation = SimulationSettings(**_coerce(SimulationSettings, sec("simulation"), "simulation"))
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None

    priors = {}
    for key, raw in sec("priors").items():
        if key not in NORMAL_PARAMS and key not in INVGAMMA_PARAMS:
            raise ConfigError(f"unknown prior {key!r}")
        priors[key] = _pair(raw, key)
    steps = {}
    for key, raw in sec("steps").items():
        try:
            steps[key] = float(raw)
        except ValueError:
            raise ConfigError(f"[steps] {key}: cannot parse {raw!r}") from None

    values = default_params().as_dict()
    values.pop("varsigma_omega")
    for key, raw in sec("params").items():
        if key not in values:
            raise ConfigError(f"unknown parameter {key!r} in [params]")
        try:
            values[key] = float(raw)
        except ValueError:
            raise ConfigError(f"[params] {key}: cannot parse {raw!r}") from None
    try:
        params = Params(
            p=PParams(**{k: values[k] for k in PParams.__dataclass_fields__}).validate(),
            q=QParams(**{k: values[k] for k in QParams.__dataclass_fields__}).validate(),
            sigma_P=values["sigma_P"],
        )
        cfg = RunConfig(
            variant=variant,
            chain=chain,
            priors=priors,
            steps=steps,
            jumptest=jumptest,
            simulation=simulation,
            params=params,
            input=run.pop("input", None),
            output_dir=run.pop("output_dir", "out"),
        )
        cfg.prior_hyper()
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    if run:
        raise ConfigError(f"unknown keys in [run]: {sorted(run)}")
    return cfg
