"""Key=value run configuration shared by the command line tools.

The schema is flat text, one ``key = value`` per line, ``#`` comments allowed::

    # competition process with linear interaction
    type = II
    lambda1 = 1.0
    lambda2 = 1.0
    alpha1 = 2.0
    alpha2 = 2.0
    beta1 = 1.0
    beta2 = 1.0
    # experiment
    x1 = 1
    x2 = 1
    seeds = 200
    master_seed = 20240901
    max_jumps = 100000

Model keys by ``type``:

* ``I``: ``lambda1 lambda2 alpha1 alpha2`` plus, per interaction,
  ``g1_scale g1_index g1_log_exponent`` (defaults 1, 1, 0) and the ``g2_*``
  mirror.
* ``II``: ``lambda1 lambda2 alpha1 alpha2 beta1 beta2`` and optional
  ``strict_theorem2``.
* ``urn``: ``alpha beta``.

Unknown keys are hard errors, never ignored.
"""

from __future__ import annotations

from .errors import ConfigError
from .models import AuxUrnModel, InteractionFunction, TypeIIModel, TypeIModel, validate

_TYPE_KEYS = {
    "I": {"type", "lambda1", "lambda2", "alpha1", "alpha2",
          "g1_scale", "g1_index", "g1_log_exponent",
          "g2_scale", "g2_index", "g2_log_exponent"},
    "II": {"type", "lambda1", "lambda2", "alpha1", "alpha2",
           "beta1", "beta2", "strict_theorem2"},
    "urn": {"type", "alpha", "beta"},
}


def parse_kv(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines; comments and blank lines are skipped."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        key, value = key.strip(), value.strip()
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value in {raw!r}")
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def load_config(path) -> dict[str, str]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_kv(fh.read())


def get_float(cfg, key, default=None):
    if key not in cfg:
        if default is None:
            raise ConfigError(f"missing required key {key!r}")
        return default
    try:
        return float(cfg[key])
    except ValueError:
        raise ConfigError(f"key {key!r}: {cfg[key]!r} is not a number") from None


def get_int(cfg, key, default=None):
    if key not in cfg:
        if default is None:
            raise ConfigError(f"missing required key {key!r}")
        return default
    try:
        return int(cfg[key])
    except ValueError:
        raise ConfigError(f"key {key!r}: {cfg[key]!r} is not an integer") from None


def get_bool(cfg, key, default=False):
    if key not in cfg:
        return default
    value = cfg[key].lower()
    if value in ("true", "1", "yes"):
        return True
    if value in ("false", "0", "no"):
        return False
    raise ConfigError(f"key {key!r}: {cfg[key]!r} is not a boolean")


def model_keys(cfg: dict[str, str]) -> set[str]:
    """The set of model keys admitted by the config's ``type``."""
    kind = cfg.get("type")
    if kind is None:
        raise ConfigError("missing required key 'type'")
    if kind not in _TYPE_KEYS:
        raise ConfigError(f"type must be one of I, II, urn; got {kind!r}")
    return _TYPE_KEYS[kind]


def build_model(cfg: dict[str, str]):
    """Construct and validate the model described by the config."""
    model_keys(cfg)  # rejects unknown/missing 'type'
    kind = cfg.get("type")
    if kind == "I":
        model = TypeIModel(
            lambda1=get_float(cfg, "lambda1"),
            lambda2=get_float(cfg, "lambda2"),
            alpha1=get_float(cfg, "alpha1"),
            alpha2=get_float(cfg, "alpha2"),
            g1=InteractionFunction(get_float(cfg, "g1_scale", 1.0),
                                   get_float(cfg, "g1_index", 1.0),
                                   get_float(cfg, "g1_log_exponent", 0.0)),
            g2=InteractionFunction(get_float(cfg, "g2_scale", 1.0),
                                   get_float(cfg, "g2_index", 1.0),
                                   get_float(cfg, "g2_log_exponent", 0.0)),
        )
    elif kind == "II":
        model = TypeIIModel(
            lambda1=get_float(cfg, "lambda1"),
            lambda2=get_float(cfg, "lambda2"),
            alpha1=get_float(cfg, "alpha1"),
            alpha2=get_float(cfg, "alpha2"),
            beta1=get_float(cfg, "beta1"),
            beta2=get_float(cfg, "beta2"),
            strict_theorem2=get_bool(cfg, "strict_theorem2"),
        )
    else:
        model = AuxUrnModel(alpha=get_float(cfg, "alpha"), beta=get_float(cfg, "beta"))
    violations = validate(model)
    if violations:
        raise ConfigError("invalid model: " + "; ".join(violations))
    return model
