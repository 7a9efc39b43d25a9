"""Scenario configuration as flat ``section.key = value`` text.

Blank lines and ``#`` comments are ignored. List values are comma
separated. ``Scenario.to_text`` writes every key, and parsing that text
gives back an equal scenario.
"""
from __future__ import annotations

from dataclasses import dataclass, field, fields, replace

from .area import AreaParams, MemoryAreaModel
from .errors import ConfigError, UnsupportedSizeError
from .latency import LatencyParams
from .memory import GIB, AccessModel, sm_dram_latency_for_capacity
from .topology import KINDS, TopologySpec
from .workload import PRESETS, InstructionMix, preset, synthetic_mix

FORMATS = ("csv", "json")
MIX_CHOICES = (*PRESETS, "custom")


@dataclass(frozen=True)
class Scenario:
    tiles: tuple[int, ...] = (64, 256, 1024, 4096)
    networks: tuple[str, ...] = ("clos", "mesh")
    radix: int = 32
    tiles_per_switch: int | None = None
    latency: LatencyParams = field(default_factory=LatencyParams)
    access: AccessModel = field(default_factory=AccessModel)
    sm_dram_auto: bool = True  # derive the SM latency from capacity_gb
    mix: str = "dhrystone"
    global_frac: float = 0.10  # custom mix only
    local_frac: float = 0.10  # custom and synthetic sweeps
    global_fracs: tuple[float, ...] = ()
    area: AreaParams = field(default_factory=AreaParams)
    memory: MemoryAreaModel = field(default_factory=MemoryAreaModel)
    capacity_gb: float = 4.0
    samples: int = 10_000
    seed: int = 0
    format: str = "csv"

    def __post_init__(self):
        if not self.tiles:
            raise ConfigError("no tile counts")
        if not self.networks:
            raise ConfigError("no networks")
        for kind in self.networks:
            if kind not in KINDS:
                raise ConfigError(f"unknown network kind {kind!r}")
        if self.mix not in MIX_CHOICES:
            raise ConfigError(f"unknown mix {self.mix!r}; choose from {MIX_CHOICES}")
        if self.format not in FORMATS:
            raise ConfigError(f"unknown output format {self.format!r}")
        if self.capacity_gb <= 0:
            raise ConfigError("capacity_gb must be positive")
        if self.samples < 1:
            raise ConfigError("samples must be at least 1")
        self.mix_points()
        for kind in self.networks:
            for p in self.tiles:
                self.spec(kind, p)

    def spec(self, kind: str, p: int) -> TopologySpec:
        try:
            return TopologySpec(kind, p, self.radix, self.tiles_per_switch)
        except UnsupportedSizeError as e:
            raise UnsupportedSizeError(f"{kind} with {p} tiles: {e}") from None

    @property
    def capacity_bytes(self) -> int:
        return int(self.capacity_gb * GIB)

    @property
    def capacity_mb(self) -> float:
        return self.capacity_gb * 1024

    def access_model(self) -> AccessModel:
        if self.sm_dram_auto:
            return replace(
                self.access,
                sm_dram_latency_ns=sm_dram_latency_for_capacity(self.capacity_bytes),
            )
        return self.access

    def mix_points(self) -> list[tuple[str, InstructionMix]]:
        if self.global_fracs:
            return [(f"g{f:g}", synthetic_mix(f, self.local_frac)) for f in self.global_fracs]
        if self.mix == "custom":
            return [("custom", synthetic_mix(self.global_frac, self.local_frac))]
        return [(self.mix, preset(self.mix))]

    def to_text(self) -> str:
        lines = []
        for key, (get, _) in _KEYS.items():
            lines.append(f"{key} = {_fmt(get(self))}")
        return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if v is None:
        return "auto"
    if isinstance(v, tuple):
        return ", ".join(_fmt(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v).lower() if isinstance(v, bool) else str(v)


def _bool(s: str) -> bool:
    low = s.lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _opt_int(s: str):
    return None if s.lower() == "auto" else int(s)


def _list(conv):
    def parse(s: str):
        return tuple(conv(x.strip()) for x in s.split(",") if x.strip())

    return parse


_CONVERTERS = {"bool": _bool, "int": int, "float": float, "str": str}


def _nested(attr: str, cls) -> dict:
    """Getter/setter pairs for the scalar fields of the dataclass at ``attr``."""
    out = {}
    for f in fields(cls):
        if f.name == "controller_tile":
            conv = _opt_int
        elif f.type in _CONVERTERS:
            conv = _CONVERTERS[f.type]
        else:
            continue

        def get(sc, name=f.name):
            return getattr(getattr(sc, attr), name)

        def put(kw, v, name=f.name, conv=conv):
            kw.setdefault(attr, {})[name] = conv(v)

        out[f.name] = (get, put)
    return out


def _top(name: str, conv):
    return (
        lambda sc: getattr(sc, name),
        lambda kw, v: kw.__setitem__(name, conv(v)),
    )


def _sm_get(sc):
    return None if sc.sm_dram_auto else sc.access.sm_dram_latency_ns


def _sm_set(kw, v):
    if v.lower() == "auto":
        kw["sm_dram_auto"] = True
    else:
        kw["sm_dram_auto"] = False
        kw.setdefault("access", {})["sm_dram_latency_ns"] = float(v)


_KEYS: dict = {
    "network.tiles": _top("tiles", _list(int)),
    "network.kinds": _top("networks", _list(str)),
    "network.radix": _top("radix", int),
    "network.tiles_per_switch": _top("tiles_per_switch", _opt_int),
}
_KEYS.update({f"latency.{k}": v for k, v in _nested("latency", LatencyParams).items()})
_KEYS.update(
    {
        f"access.{k}": v
        for k, v in _nested("access", AccessModel).items()
        if k != "sm_dram_latency_ns"
    }
)
_KEYS["access.sm_dram_latency_ns"] = (_sm_get, _sm_set)
_KEYS.update(
    {
        "workload.mix": _top("mix", str),
        "workload.global_frac": _top("global_frac", float),
        "workload.local_frac": _top("local_frac", float),
        "workload.global_fracs": _top("global_fracs", _list(float)),
    }
)
_KEYS.update({f"area.{k}": v for k, v in _nested("area", AreaParams).items()})
_KEYS.update({f"memory.{k}": v for k, v in _nested("memory", MemoryAreaModel).items()})
_KEYS.update(
    {
        "run.capacity_gb": _top("capacity_gb", float),
        "run.samples": _top("samples", int),
        "run.seed": _top("seed", int),
        "run.format": _top("format", str),
    }
)

_NESTED_CLS = {
    "latency": LatencyParams,
    "access": AccessModel,
    "area": AreaParams,
    "memory": MemoryAreaModel,
}

KNOWN_KEYS = tuple(_KEYS)


def build_scenario(kw: dict, base: Scenario | None = None) -> Scenario:
    """Apply parsed keyword overrides to ``base`` (default: all defaults)."""
    base = base or Scenario()
    kw = dict(kw)
    for name, cls in _NESTED_CLS.items():
        if name in kw:
            kw[name] = replace(getattr(base, name), **kw[name])
    return replace(base, **kw)


def parse_scenario(text: str, source: str = "<config>", base: Scenario | None = None) -> Scenario:
    kw: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        where = f"{source}:{lineno}"
        if not sep:
            raise ConfigError(f"{where}: expected 'key = value', got {raw.strip()!r}")
        if key not in _KEYS:
            raise ConfigError(f"{where}: unknown key {key!r}")
        try:
            _KEYS[key][1](kw, value)
        except ValueError as e:
            raise ConfigError(f"{where}: bad value for {key}: {e}") from None
    try:
        return build_scenario(kw, base)
    except UnsupportedSizeError:
        raise
    except (ConfigError, TypeError) as e:
        raise ConfigError(f"{source}: {e}") from None


def load_scenario(path: str, base: Scenario | None = None) -> Scenario:
    try:
        with open(path) as f:
            text = f.read()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    return parse_scenario(text, path, base)
