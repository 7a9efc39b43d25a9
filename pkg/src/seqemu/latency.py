"""Zero-load wormhole message latency."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError

ROUTES = ("open", "closed")


@dataclass(frozen=True)
class LatencyParams:
    """Cycle costs of the message path. One cycle is 1 ns at the default clock.

    ``t_sc`` is the *additional* cost per switch when a route is closed after
    each packet. Setting ``closed_is_total`` reads it instead as the whole
    per-switch cost of a closed route.
    """

    t_ts: float = 1  # tile <-> switch link
    t_s: float = 2  # per switch, route open
    t_sc: float = 5  # extra per switch, route closed
    t_sr: float = 2  # serialisation
    t_l: float = 2  # per inter-switch link
    clock_hz: float = 1e9
    closed_is_total: bool = False

    def __post_init__(self):
        for name in ("t_ts", "t_s", "t_sc", "t_sr", "t_l"):
            if getattr(self, name) < 0:
                raise ConfigError(f"latency parameter {name} must be non-negative")
        if self.clock_hz <= 0:
            raise ConfigError("clock_hz must be positive")

    @property
    def closed_switch_cycles(self) -> float:
        return self.t_sc if self.closed_is_total else self.t_s + self.t_sc


def zero_load_latency(params: LatencyParams, h: int, route: str = "closed") -> float:
    """Cycles for one message crossing ``h`` inter-switch links without contention."""
    if h < 0:
        raise ConfigError(f"hop count must be non-negative, got {h}")
    if route == "closed":
        per_switch = params.closed_switch_cycles
    elif route == "open":
        per_switch = params.t_s
    else:
        raise ConfigError(f"route must be one of {ROUTES}, got {route!r}")
    return 2 * params.t_ts + params.t_sr + (h + 1) * per_switch + h * params.t_l


def cycles_to_ns(params: LatencyParams, cycles: float) -> float:
    return cycles * 1e9 / params.clock_hz
