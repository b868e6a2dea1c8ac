"""Posterior draws on the constrained space, with CSV and JSON serialization."""

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import orjson

from ldpbayes.inference.diagnostics import credible_interval, rhat
from ldpbayes.utils.errors import InvalidParameterError

SUMMARY_QUANTILES = (0.05, 0.5, 0.95)


def site_names(name, shape):
    """Scalar names for a sample site: `mu`, `theta[0]`, upper-triangle `Sigma[0,1]`."""
    if shape == ():
        return [name], [()]
    if len(shape) == 1:
        return [f"{name}[{i}]" for i in range(shape[0])], [(i,) for i in range(shape[0])]
    if len(shape) == 2 and shape[0] == shape[1]:
        index = [(i, j) for i in range(shape[0]) for j in range(i, shape[1])]
        return [f"{name}[{i},{j}]" for i, j in index], index
    raise InvalidParameterError(f"site {name!r} has unsupported shape {shape}")


def flatten_sites(values, sites):
    """{scalar name: value} for a dict of site values (true parameters or one draw)."""
    flat = {}
    for site in sites:
        value = np.asarray(values[site], dtype=float)
        names, index = site_names(site, value.shape)
        for name, idx in zip(names, index, strict=True):
            flat[name] = float(value[idx])
    return flat


@dataclass
class ChainSet:
    """Draws shaped (chains, draws, parameters) after warmup was discarded."""

    names: tuple
    samples: np.ndarray
    warmup_fraction: float = 0.5
    divergent: np.ndarray | None = None
    warnings: list = field(default_factory=list)

    def __post_init__(self):
        self.names = tuple(self.names)
        self.samples = np.asarray(self.samples, dtype=float)
        if self.samples.ndim != 3 or self.samples.shape[2] != len(self.names):
            raise InvalidParameterError("samples must be shaped (chains, draws, parameters)")
        if self.chains < 2:
            raise InvalidParameterError("a ChainSet needs at least two chains")
        if self.draws < 1:
            raise InvalidParameterError("a ChainSet needs at least one post-warmup draw")
        if self.divergent is None:
            self.divergent = np.zeros(self.samples.shape[:2], dtype=bool)
        self._index = {name: i for i, name in enumerate(self.names)}
        self._rhat = None

    @classmethod
    def from_samples(cls, samples, sites, warmup_fraction=0.5, divergent=None):
        """Flatten per-site arrays shaped (chains, draws, *shape) into scalar columns."""
        names, columns = [], []
        for site in sites:
            value = np.asarray(samples[site], dtype=float)
            site_scalars, index = site_names(site, value.shape[2:])
            names += site_scalars
            columns += [value[(slice(None), slice(None), *idx)] for idx in index]
        return cls(tuple(names), np.stack(columns, axis=-1), warmup_fraction, divergent)

    @property
    def chains(self):
        return self.samples.shape[0]

    @property
    def draws(self):
        return self.samples.shape[1]

    def param(self, name):
        """Draws of one scalar parameter, shaped (chains, draws)."""
        if name not in self._index:
            raise InvalidParameterError(f"unknown parameter {name!r}")
        return self.samples[:, :, self._index[name]]

    def mean(self, name):
        return float(np.mean(self.param(name)))

    def means(self, prefix):
        """Posterior means of every scalar whose name starts with `prefix[`, in order."""
        return np.array([self.mean(n) for n in self.names if n.startswith(f"{prefix}[")])

    def pooled(self, prefix):
        """Draws of the `prefix[...]` scalars with chains pooled, shaped (chains * draws, k)."""
        columns = [self._index[n] for n in self.names if n.startswith(f"{prefix}[")]
        return self.samples[:, :, columns].reshape(-1, len(columns))

    @property
    def divergence_rate(self):
        return float(np.mean(self.divergent))

    @property
    def rhat(self):
        if self._rhat is None:
            self._rhat = rhat(self)
        return self._rhat

    def interval(self, name, mass):
        return credible_interval(self, name, mass)

    # Serialization

    def summary(self):
        report = self.rhat
        params = {}
        for name in self.names:
            draws = self.param(name).ravel()
            quantiles = np.quantile(draws, SUMMARY_QUANTILES)
            params[name] = {
                "mean": float(np.mean(draws)),
                "sd": float(np.std(draws, ddof=1)) if draws.size > 1 else 0.0,
                **{f"q{int(q * 100)}": float(v) for q, v in zip(SUMMARY_QUANTILES, quantiles, strict=True)},
                "rhat": report[name],
            }
        return {
            "chains": self.chains,
            "draws": self.draws,
            "warmup_fraction": self.warmup_fraction,
            "divergence_rate": self.divergence_rate,
            "degenerate": list(report.degenerate),
            "warnings": list(self.warnings),
            "parameters": params,
        }

    def to_json(self):
        return orjson.dumps(
            self.summary(),
            option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY,
        )

    def write_csv(self, path):
        path = Path(path)
        with path.open("w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["chain", "draw", "parameter", "value"])
            for c in range(self.chains):
                for t in range(self.draws):
                    for name, value in zip(self.names, self.samples[c, t], strict=True):
                        writer.writerow([c, t, name, repr(float(value))])
        return path

    @classmethod
    def read_csv(cls, path, warmup_fraction=0.5):
        names, cells = [], {}
        with Path(path).open(newline="") as f:
            for row in csv.DictReader(f):
                name = row["parameter"]
                if name not in cells:
                    names.append(name)
                    cells[name] = {}
                cells[name][(int(row["chain"]), int(row["draw"]))] = float(row["value"])
        if not names:
            raise InvalidParameterError(f"{path}: no draws")
        keys = cells[names[0]]
        chains = 1 + max(c for c, _ in keys)
        draws = 1 + max(t for _, t in keys)
        samples = np.empty((chains, draws, len(names)))
        for j, name in enumerate(names):
            for (c, t), value in cells[name].items():
                samples[c, t, j] = value
        return cls(tuple(names), samples, warmup_fraction)
