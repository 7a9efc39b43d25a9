"""Emulated global memory: address partitioning, request/reply access cost,
and the sequential-machine DRAM baseline.

A memory controller process on ``controller_tile`` receives each access from
the program (on the same tile), forwards it to the tile holding the address,
and relays the reply back. Each of the four messages is a zero-load message.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError
from .latency import ROUTES, LatencyParams, cycles_to_ns, zero_load_latency
from .topology import SwitchGraph

GIB = 1 << 30
DEFAULT_CAPACITY = 4 * GIB

SM_DRAM_SINGLE_RANK_NS = 35.0
SM_DRAM_MULTI_RANK_NS = 36.0


def sm_dram_latency_for_capacity(capacity_bytes: int) -> float:
    """Average random-access latency of a DDR3 system of the given size."""
    return SM_DRAM_SINGLE_RANK_NS if capacity_bytes <= GIB else SM_DRAM_MULTI_RANK_NS


@dataclass(frozen=True)
class MemoryMap:
    """Equal contiguous address blocks, block i on tile i.

    Blocks are whole words; the first ``words % tiles`` blocks hold one extra
    word. Trailing bytes that do not fill a word belong to the last tile.
    """

    total_capacity: int
    tiles: int
    controller_tile: int = 0
    word_bytes: int = 4

    def __post_init__(self):
        if self.tiles <= 0:
            raise ConfigError("memory map needs at least one tile")
        if self.total_capacity < self.tiles * self.word_bytes:
            raise ConfigError("capacity is smaller than one word per tile")
        if not 0 <= self.controller_tile < self.tiles:
            raise ConfigError(f"controller tile {self.controller_tile} out of range")

    @property
    def _layout(self):
        words = self.total_capacity // self.word_bytes
        base, extra = divmod(words, self.tiles)
        return base, extra

    def block_bounds(self, tile: int) -> tuple[int, int]:
        """Byte range ``[start, stop)`` owned by ``tile``."""
        if not 0 <= tile < self.tiles:
            raise ConfigError(f"unknown tile {tile}")
        base, extra = self._layout
        start = tile * base + min(tile, extra)
        stop = start + base + (tile < extra)
        stop_b = stop * self.word_bytes
        if tile == self.tiles - 1:
            stop_b = self.total_capacity
        return start * self.word_bytes, stop_b


def tiles_for_addresses(mmap: MemoryMap, addrs) -> np.ndarray:
    addrs = np.asarray(addrs, dtype=np.int64)
    if np.any((addrs < 0) | (addrs >= mmap.total_capacity)):
        raise ConfigError("address outside the emulated memory")
    base, extra = mmap._layout
    w = addrs // mmap.word_bytes
    split = extra * (base + 1)
    tile = np.where(w < split, w // (base + 1), extra + (w - split) // max(base, 1))
    return np.minimum(tile, mmap.tiles - 1)


def tile_for_address(mmap: MemoryMap, addr: int) -> int:
    """Tile owning byte offset ``addr``."""
    return int(tiles_for_addresses(mmap, [addr])[0])


@dataclass(frozen=True)
class AccessModel:
    """Cost of the emulation protocol and the baseline DRAM.

    ``controller_tile`` of None places the controller on tile 0 for a Clos
    and on the most central switch of a mesh.
    """

    t_mem_local: float = 10  # cycles
    controller_overhead: float = 0  # cycles per request
    sm_dram_latency_ns: float = SM_DRAM_MULTI_RANK_NS
    route_mode: str = "closed"
    controller_tile: int | None = None

    def __post_init__(self):
        for name in ("t_mem_local", "controller_overhead", "sm_dram_latency_ns"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be non-negative")
        if self.route_mode not in ROUTES:
            raise ConfigError(f"route_mode must be one of {ROUTES}")


def central_tile(g: SwitchGraph) -> int:
    """First tile of the switch with the smallest mean distance to all tiles."""
    hosts = g.host_switches
    weights = g.tiles_on_switch[hosts]
    cost = g.host_distances @ weights
    best = int(hosts[int(np.argmin(cost))])
    return int(np.flatnonzero(g.tile_switch == best)[0])


def controller_tile(g: SwitchGraph, am: AccessModel) -> int:
    if am.controller_tile is not None:
        g.switch_of(am.controller_tile)
        return am.controller_tile
    return central_tile(g) if g.kind == "mesh" else 0


def access_cycles(lp: LatencyParams, am: AccessModel, h_req: int, h_rep: int) -> float:
    """Cycles of one emulated access whose request/reply travel h_req/h_rep hops."""
    local = zero_load_latency(lp, 0, am.route_mode)
    return (
        local
        + zero_load_latency(lp, h_req, am.route_mode)
        + am.t_mem_local
        + zero_load_latency(lp, h_rep, am.route_mode)
        + local
        + am.controller_overhead
    )


def switch_access_ns(g: SwitchGraph, lp: LatencyParams, am: AccessModel) -> np.ndarray:
    """Access latency (ns) for a target on each switch; NaN for switches without tiles."""
    ctrl = g.switch_of(controller_tile(g, am))
    dist = g.distances_from(ctrl)
    out = np.full(g.n_switches, np.nan)
    for s in g.host_switches:
        h = int(dist[s])
        out[s] = cycles_to_ns(lp, access_cycles(lp, am, h, h))
    return out


def tile_access_ns(g: SwitchGraph, lp: LatencyParams, am: AccessModel) -> np.ndarray:
    return switch_access_ns(g, lp, am)[g.tile_switch]


def emulated_access_latency(
    g: SwitchGraph, lp: LatencyParams, am: AccessModel, target: int
) -> float:
    """Nanoseconds for the program to read or write one word held on ``target``."""
    ctrl_sw = g.switch_of(controller_tile(g, am))
    tgt_sw = g.switch_of(target)
    h_req = int(g.distances_from(ctrl_sw)[tgt_sw])
    h_rep = int(g.distances_from(tgt_sw)[ctrl_sw])
    return cycles_to_ns(lp, access_cycles(lp, am, h_req, h_rep))


def average_access_latency(g: SwitchGraph, lp: LatencyParams, am: AccessModel) -> float:
    """Expected access latency with the target tile drawn uniformly."""
    per_switch = switch_access_ns(g, lp, am)
    hosts = g.host_switches
    return float(np.dot(per_switch[hosts], g.tiles_on_switch[hosts])) / g.tiles


@dataclass(frozen=True)
class LatencySample:
    mean_ns: float
    stddev_ns: float
    n: int

    @property
    def stderr_ns(self) -> float:
        return self.stddev_ns / np.sqrt(self.n)


def sample_access_latency(
    g: SwitchGraph,
    lp: LatencyParams,
    am: AccessModel,
    n: int,
    seed: int,
    capacity: int = DEFAULT_CAPACITY,
) -> LatencySample:
    """Monte Carlo access latency over ``n`` uniformly random byte addresses."""
    if n < 1:
        raise ConfigError("need at least one sample")
    mmap = MemoryMap(capacity, g.tiles)
    rng = np.random.default_rng(seed)
    targets = tiles_for_addresses(mmap, rng.integers(0, capacity, size=n))
    mean, var = kernels.gather_moments(targets, tile_access_ns(g, lp, am))
    return LatencySample(mean, float(np.sqrt(var)), n)


def sm_access_latency(am: AccessModel) -> float:
    return am.sm_dram_latency_ns
