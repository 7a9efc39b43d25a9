"""Instruction mixes, expected operation times, and PM-vs-SM slowdown."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError
from .latency import LatencyParams, cycles_to_ns
from .memory import (
    DEFAULT_CAPACITY,
    AccessModel,
    MemoryMap,
    average_access_latency,
    sm_access_latency,
    tile_access_ns,
    tiles_for_addresses,
)
from .topology import SwitchGraph

GLOBAL, LOCAL, OTHER = 0, 1, 2
SYNTHETIC_LOCAL_FRAC = 0.10
SYNTHETIC_GLOBAL_FRACS = (0.05, 0.10, 0.20, 0.30)


@dataclass(frozen=True)
class InstructionMix:
    global_frac: float
    local_frac: float
    other_frac: float

    def __post_init__(self):
        fracs = (self.global_frac, self.local_frac, self.other_frac)
        if any(not 0.0 <= f <= 1.0 for f in fracs):
            raise ConfigError(f"mix fractions must lie in [0, 1], got {fracs}")
        if abs(sum(fracs) - 1.0) > 1e-9:
            raise ConfigError(f"mix fractions must sum to 1, got {sum(fracs)!r}")

    def as_array(self) -> np.ndarray:
        return np.array([self.global_frac, self.local_frac, self.other_frac])


def synthetic_mix(global_frac: float, local_frac: float = SYNTHETIC_LOCAL_FRAC) -> InstructionMix:
    """Mix with the given global and local fractions, the rest non-memory."""
    other = 1.0 - global_frac - local_frac
    if -1e-12 < other < 0:  # rounding, e.g. 1 - 0.9 - 0.1
        other = 0.0
    return InstructionMix(global_frac, local_frac, other)


# Local fractions are measured; global fractions are calibrated (see README).
PRESETS = {
    "dhrystone": InstructionMix(0.10, 0.12, 0.78),
    "compiler": InstructionMix(0.05, 0.21, 0.74),
}


def preset(name: str) -> InstructionMix:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown mix preset {name!r}; known: {sorted(PRESETS)}") from None


@dataclass(frozen=True)
class MachineModel:
    """Latency in ns of each operation class on one machine."""

    global_ns: float
    local_ns: float
    other_ns: float = 1.0

    def __post_init__(self):
        if min(self.global_ns, self.local_ns, self.other_ns) < 0:
            raise ConfigError("machine latencies must be non-negative")

    def scaled(self, c: float) -> MachineModel:
        return MachineModel(self.global_ns * c, self.local_ns * c, self.other_ns * c)


def pm_machine(g: SwitchGraph, lp: LatencyParams, am: AccessModel) -> MachineModel:
    """The parallel machine: global accesses go through the emulated memory."""
    return MachineModel(
        average_access_latency(g, lp, am),
        cycles_to_ns(lp, am.t_mem_local),
        cycles_to_ns(lp, 1),
    )


def sm_machine(lp: LatencyParams, am: AccessModel) -> MachineModel:
    """The sequential machine: global accesses cost the fixed DRAM latency."""
    return MachineModel(
        sm_access_latency(am), cycles_to_ns(lp, am.t_mem_local), cycles_to_ns(lp, 1)
    )


def expected_op_time(mix: InstructionMix, m: MachineModel) -> float:
    return (
        mix.global_frac * m.global_ns
        + mix.local_frac * m.local_ns
        + mix.other_frac * m.other_ns
    )


def slowdown(mix: InstructionMix, pm: MachineModel, sm: MachineModel) -> float:
    """Ratio of expected PM runtime to SM runtime for the same operation stream."""
    base = expected_op_time(mix, sm)
    if base <= 0:
        raise ConfigError("sequential machine has zero expected operation time")
    return expected_op_time(mix, pm) / base


def worst_case_slowdown(pm: MachineModel, sm: MachineModel) -> float:
    """Slowdown of a stream made only of global accesses."""
    if sm.global_ns <= 0:
        raise ConfigError("sequential machine global latency must be positive")
    return pm.global_ns / sm.global_ns


def simulate_stream(
    mix: InstructionMix,
    n_ops: int,
    seed: int,
    g: SwitchGraph,
    lp: LatencyParams,
    am: AccessModel,
    capacity: int = DEFAULT_CAPACITY,
) -> float:
    """Total ns of ``n_ops`` operations drawn i.i.d. from ``mix``.

    Global operations pick a uniformly random byte address and pay the
    emulated access latency of the tile holding it.
    """
    if n_ops < 1:
        raise ConfigError("need at least one operation")
    rng = np.random.default_rng(seed)
    cum = np.cumsum(mix.as_array())
    cum[-1] = 1.0
    classes = np.searchsorted(cum, rng.random(n_ops), side="right").astype(np.int8)
    n_global = int(np.count_nonzero(classes == GLOBAL))
    mmap = MemoryMap(capacity, g.tiles)
    targets = tiles_for_addresses(mmap, rng.integers(0, capacity, size=n_global))
    class_cost = np.array([0.0, cycles_to_ns(lp, am.t_mem_local), cycles_to_ns(lp, 1)])
    return kernels.stream_total(classes, targets, class_cost, tile_access_ns(g, lp, am))
