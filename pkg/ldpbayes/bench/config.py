"""Experiment configuration: sectioned YAML, validated against a fixed schema.

Resolution order: built-in defaults for the experiment kind, then the file,
then command-line overrides. Unknown sections and keys are rejected with
the line they appear on.
"""

import math
from dataclasses import dataclass, field, fields
from pathlib import Path

import yaml

from ldpbayes.inference import SamplerConfig, model_from_dict
from ldpbayes.inference.models import MODELS
from ldpbayes.mechanisms import PrivacyBudget
from ldpbayes.settings import Config
from ldpbayes.utils.base import BaseMixin
from ldpbayes.utils.errors import ConfigError, LdpBayesError

EXPERIMENTS = ("coverage", "histogram", "ecdf", "regression")

SCHEMA = {
    "experiment": {"kind", "repeats", "seed", "output_dir", "plot", "masses", "parameter", "oracle"},
    "privacy": {"epsilon", "delta"},
    "data": {"n", "theta", "weight_scale", "feature_scale", "residual_std", "test_fraction"},
    "model": {
        "kind", "d", "bounds", "b", "R", "Ry", "ratios", "ratio", "interval", "label_fraction",
    },
    "sampler": {"chains", "draws", "warmup_fraction", "target_accept", "max_tree_depth"},
    "sgd": {"group_constant", "learning_rate", "clip"},
}

DEFAULTS = {
    "coverage": {
        "model": {"kind": "gaussian"},
        "privacy": {"epsilon": [0.5, 1.0, 2.0], "delta": 1e-5},
        "data": {"n": [2000]},
        "experiment": {"repeats": 200, "masses": [0.5, 0.7, 0.9, 0.95]},
    },
    "histogram": {
        "model": {"kind": "multinomial", "d": 3},
        "privacy": {"epsilon": [0.5]},
        "data": {"n": [100, 500], "theta": [0.7, 0.2, 0.1]},
        "experiment": {"repeats": 50},
    },
    "ecdf": {
        "model": {"kind": "multinomial", "d": 3},
        "privacy": {"epsilon": [0.5, 1.0, 2.0, 4.0]},
        "data": {"n": [1000], "theta": [0.7, 0.2, 0.1]},
        "experiment": {"repeats": 50},
    },
    "regression": {
        "model": {"kind": "logistic", "d": 2},
        "privacy": {"epsilon": [0.3, 0.8, 2.0, 5.0], "delta": 1e-5},
        "data": {"n": [5000]},
        "experiment": {"repeats": 30},
    },
}

REGRESSION_TASKS = ("linear", "logistic")


@dataclass(frozen=True)
class DataConfig(BaseMixin):
    theta: tuple | None = None
    weight_scale: float = 3.0
    feature_scale: float = 0.5
    residual_std: float = 0.1
    test_fraction: float = 0.2


@dataclass(frozen=True)
class SGDOptions(BaseMixin):
    group_constant: float = 1.0
    learning_rate: float = 0.1
    clip: float = 1.0


@dataclass(frozen=True)
class ExperimentConfig(BaseMixin):
    kind: str
    model: dict
    epsilons: tuple
    delta: float
    n: tuple
    repeats: int
    seed: int = 0
    output_dir: str = Config.OUTPUT_DIR
    plot: bool = False
    masses: tuple = (0.5, 0.7, 0.9, 0.95)
    parameter: str | None = None
    oracle: bool = False
    data: DataConfig = field(default_factory=DataConfig)
    sampler: SamplerConfig = field(default_factory=SamplerConfig)
    sgd: SGDOptions = field(default_factory=SGDOptions)

    def budget(self, epsilon):
        return PrivacyBudget(epsilon, self.delta)

    def model_for(self, epsilon, kind=None):
        """The model at one privacy level; the oracle control drops the mechanism."""
        options = dict(self.model)
        options["kind"] = kind or options["kind"]
        cls = MODELS[options["kind"]]
        names = {f.name for f in fields(cls)}
        options = {k: v for k, v in options.items() if k in names or k == "kind"}
        budget = None if self.oracle else self.budget(epsilon)
        options["budget"] = budget.to_dict() if budget is not None else None
        return model_from_dict(options)


def _epsilon(value):
    if isinstance(value, str) and value.strip().lower() in ("inf", "infinity", ".inf"):
        return math.inf
    return float(value)


def _as_tuple(value, cast):
    if isinstance(value, list | tuple):
        return tuple(cast(v) for v in value)
    return (cast(value),)


def _check_schema(root, source):
    """Walk the composed YAML tree so unknown keys report their line."""
    if root is None:
        return
    if not isinstance(root, yaml.MappingNode):
        raise ConfigError("top level must be a mapping of sections", line=root.start_mark.line + 1, source=source)
    for key_node, value_node in root.value:
        section = key_node.value
        line = key_node.start_mark.line + 1
        if section not in SCHEMA:
            raise ConfigError(f"unknown section {section!r}", line=line, source=source)
        if not isinstance(value_node, yaml.MappingNode):
            raise ConfigError(f"section {section!r} must be a mapping", line=line, source=source)
        for child, _ in value_node.value:
            if child.value not in SCHEMA[section]:
                raise ConfigError(
                    f"unknown key {section}.{child.value}", line=child.start_mark.line + 1, source=source
                )


def read_config_file(path):
    """Parsed sections of a config file; malformed YAML and unknown keys raise ConfigError."""
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    text = path.read_text()
    try:
        _check_schema(yaml.compose(text), str(path))
        return yaml.safe_load(text) or {}
    except yaml.MarkedYAMLError as e:
        line = e.problem_mark.line + 1 if e.problem_mark else None
        raise ConfigError(f"malformed YAML: {e.problem}", line=line, source=str(path)) from e


def _merge(base, extra):
    merged = {section: dict(values) for section, values in base.items()}
    for section, values in (extra or {}).items():
        merged.setdefault(section, {}).update(values or {})
    return merged


def load_config(kind, path=None, overrides=None):
    """Resolve an ExperimentConfig for `kind` from defaults, an optional file and overrides.

    `overrides` uses the same section layout as the file; None values are ignored.
    """
    if kind not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {kind!r}; choose from {', '.join(EXPERIMENTS)}")
    source = str(path) if path else None
    sections = _merge(DEFAULTS[kind], read_config_file(path) if path else {})
    cleaned = {s: {k: v for k, v in (vals or {}).items() if v is not None} for s, vals in (overrides or {}).items()}
    sections = _merge(sections, cleaned)

    experiment = sections.get("experiment", {})
    file_kind = experiment.get("kind", kind)
    if file_kind != kind:
        raise ConfigError(f"config is for experiment {file_kind!r}, not {kind!r}", source=source)

    model = dict(sections.get("model", {}))
    valid_models = REGRESSION_TASKS if kind == "regression" else tuple(MODELS)
    if model.get("kind") not in valid_models:
        raise ConfigError(
            f"model {model.get('kind')!r} is not valid here; choose from {', '.join(valid_models)}",
            source=source,
        )
    if kind in ("histogram", "ecdf") and model["kind"] != "multinomial":
        raise ConfigError(f"the {kind} experiment needs the multinomial model", source=source)

    privacy = sections.get("privacy", {})
    data = dict(sections.get("data", {}))
    try:
        repeats = int(experiment.get("repeats", 1))
        if repeats < 1:
            raise ConfigError("experiment.repeats must be >= 1", source=source)
        n = _as_tuple(data.pop("n", [1000]), int)
        if any(v < 0 for v in n):
            raise ConfigError("data.n must be >= 0", source=source)
        if "theta" in data and data["theta"] is not None:
            data["theta"] = tuple(float(v) for v in data["theta"])
            if kind in ("histogram", "ecdf", "coverage") and model["kind"] == "multinomial":
                model["d"] = len(data["theta"])
        config = ExperimentConfig(
            kind=kind,
            model=model,
            epsilons=_as_tuple(privacy.get("epsilon", [1.0]), _epsilon),
            delta=float(privacy.get("delta", 0.0)),
            n=n,
            repeats=repeats,
            seed=int(experiment.get("seed", 0)),
            output_dir=str(experiment.get("output_dir", Config.OUTPUT_DIR)),
            plot=bool(experiment.get("plot", False)),
            masses=_as_tuple(experiment.get("masses", [0.5, 0.7, 0.9, 0.95]), float),
            parameter=experiment.get("parameter"),
            oracle=bool(experiment.get("oracle", False)),
            data=DataConfig.from_dict(data, source=source),
            sampler=SamplerConfig.from_dict(sections.get("sampler", {}), source=source),
            sgd=SGDOptions.from_dict(sections.get("sgd", {}), source=source),
        )
        for epsilon in config.epsilons:
            if kind == "regression":
                for suffix in ("ss", "input"):
                    config.model_for(epsilon, kind=f"{model['kind']}_{suffix}")
            else:
                config.model_for(epsilon)
        if not 0.0 < config.data.test_fraction < 1.0:
            raise ConfigError("data.test_fraction must be in (0, 1)", source=source)
    except ConfigError:
        raise
    except (LdpBayesError, TypeError, ValueError) as e:
        raise ConfigError(str(e), source=source) from e
    return config
