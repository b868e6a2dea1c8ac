import dataclasses
import math

import numpy as np
import orjson

from ldpbayes.utils.errors import ConfigError


def _plain(value):
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        if hasattr(value, "to_dict"):
            return value.to_dict()
        return {f.name: _plain(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        return _plain(value.item())
    if isinstance(value, tuple | list):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, float) and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


class BaseMixin:
    """Dict/JSON round-tripping for the frozen config and result dataclasses."""

    def to_dict(self):
        result = {"kind": self.kind} if hasattr(type(self), "kind") else {}
        for field in dataclasses.fields(self):
            if field.name.startswith("_"):
                continue
            result[field.name] = _plain(getattr(self, field.name))
        return result

    def to_json(self):
        return orjson.dumps(self.to_dict(), option=orjson.OPT_SORT_KEYS)

    @classmethod
    def from_dict(cls, data, source=None):
        """Build an instance, rejecting keys the dataclass does not declare."""
        names = {f.name for f in dataclasses.fields(cls) if f.init}
        unknown = sorted(set(data) - names - {"kind"})
        if unknown:
            raise ConfigError(
                f"unknown key(s) for {cls.__name__}: {', '.join(unknown)}",
                source=source,
            )
        try:
            return cls(**{k: v for k, v in data.items() if k in names})
        except TypeError as e:
            raise ConfigError(f"{cls.__name__}: {e}", source=source) from e
