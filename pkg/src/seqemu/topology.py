"""Folded-Clos and 2D-mesh switch graphs built from fixed-radix crossbars.

Tiles are numbered contiguously per switch. Clos switches are numbered edge
first, then mid (3-level only), then core; mesh switches are numbered
row-major over a nearly square grid.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import kernels
from .errors import ConfigError, TopologyError, UnsupportedSizeError

KINDS = ("clos", "mesh")
STAGE_ORDER = {"edge": 0, "mid": 1, "core": 2}


@dataclass(frozen=True)
class TopologySpec:
    kind: str
    tiles: int
    radix: int = 32
    tiles_per_switch: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown network kind {self.kind!r}")
        if self.radix <= 0 or self.radix % 2:
            raise ConfigError(f"radix must be a positive even integer, got {self.radix}")
        if self.tiles_per_switch is None:
            object.__setattr__(self, "tiles_per_switch", self.radix // 2)
        t = self.tiles_per_switch
        if t <= 0 or t > self.radix:
            raise ConfigError(f"tiles per switch must be in 1..{self.radix}, got {t}")
        if self.tiles <= 0:
            raise ConfigError("tile count must be positive")
        if self.kind == "clos" and self.tiles <= self.radix:
            return
        if self.tiles % t:
            raise UnsupportedSizeError(
                f"{self.tiles} tiles is not a multiple of {t} tiles per switch"
            )
        if self.kind == "clos":
            if t != self.radix // 2:
                raise UnsupportedSizeError(
                    "multi-switch Clos needs tiles_per_switch == radix/2 "
                    "to conserve bandwidth between stages"
                )
            if self.tiles > self.capacity:
                raise UnsupportedSizeError(
                    f"{self.tiles} tiles exceeds the 3-level Clos capacity "
                    f"{self.capacity} for radix {self.radix}"
                )
        elif t + 4 > self.radix:
            raise UnsupportedSizeError(
                f"mesh switch needs {t} tile ports + 4 links but radix is {self.radix}"
            )

    @property
    def capacity(self) -> int:
        """Largest tile count a 3-level Clos of this radix supports."""
        if self.kind != "clos":
            return math.inf
        k = self.radix
        return self.tiles_per_switch * k * (k // 2)


@dataclass(frozen=True)
class Switch:
    index: int
    stage: str  # edge | mid | core | mesh
    pod: int | None = None
    coord: tuple[int, int] | None = None


@dataclass(frozen=True, eq=False)
class SwitchGraph:
    spec: TopologySpec
    switches: tuple[Switch, ...]
    links: dict  # (a, b) with a < b -> multiplicity
    tile_switch: np.ndarray  # tile -> switch index
    levels: int = 1
    grid: tuple[int, int] | None = None
    _dist_cache: dict = field(default_factory=dict, repr=False)

    @property
    def kind(self) -> str:
        return self.spec.kind

    @property
    def tiles(self) -> int:
        return self.spec.tiles

    @property
    def n_switches(self) -> int:
        return len(self.switches)

    @cached_property
    def tiles_on_switch(self) -> np.ndarray:
        return np.bincount(self.tile_switch, minlength=self.n_switches)

    @cached_property
    def csr(self) -> tuple[np.ndarray, np.ndarray]:
        nbrs = [[] for _ in self.switches]
        for a, b in self.links:
            nbrs[a].append(b)
            nbrs[b].append(a)
        indptr = np.zeros(self.n_switches + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(n) for n in nbrs])
        indices = np.fromiter(
            (v for n in nbrs for v in sorted(n)), dtype=np.int64, count=int(indptr[-1])
        )
        return indptr, indices

    @cached_property
    def port_use(self) -> np.ndarray:
        """Tiles plus link multiplicities attached to each switch."""
        use = self.tiles_on_switch.copy()
        for (a, b), m in self.links.items():
            use[a] += m
            use[b] += m
        return use

    @cached_property
    def host_switches(self) -> np.ndarray:
        return np.flatnonzero(self.tiles_on_switch)

    def distances_from(self, switch: int) -> np.ndarray:
        d = self._dist_cache.get(switch)
        if d is None:
            d = kernels.bfs_hops(*self.csr, switch)
            self._dist_cache[switch] = d
        return d

    @cached_property
    def host_distances(self) -> np.ndarray:
        """Hop matrix between all tile-hosting switches (rows/cols in host order)."""
        hosts = self.host_switches
        full = kernels.multi_source_hops(*self.csr, hosts)
        return full[:, hosts]

    def switch_of(self, tile: int) -> int:
        if not 0 <= tile < self.tiles:
            raise ConfigError(f"unknown tile {tile} (network has {self.tiles} tiles)")
        return int(self.tile_switch[tile])

    def link_multiplicity(self, a: int, b: int) -> int:
        return self.links.get((min(a, b), max(a, b)), 0)

    def stage_indices(self, stage: str) -> list[int]:
        return [s.index for s in self.switches if s.stage == stage]


def _attach_tiles(n_tiles: int, per_switch: int) -> np.ndarray:
    return np.arange(n_tiles, dtype=np.int64) // per_switch


def _build_clos(spec: TopologySpec) -> SwitchGraph:
    p, k, t = spec.tiles, spec.radix, spec.tiles_per_switch
    links: Counter = Counter()

    if p <= k:
        return SwitchGraph(
            spec, (Switch(0, "edge"),), {}, np.zeros(p, dtype=np.int64), levels=1
        )

    n_edge = p // t
    up = k - t
    switches = [Switch(e, "edge") for e in range(n_edge)]

    if p <= t * k:
        n_core = math.ceil(n_edge * up / k)
        switches += [Switch(n_edge + c, "core") for c in range(n_core)]
        for e in range(n_edge):
            for j in range(up):
                links[(e, n_edge + (e * up + j) % n_core)] += 1
        levels = 2
    else:
        half = k // 2
        n_pods = math.ceil(n_edge / half)
        switches = [Switch(e, "edge", pod=e // half) for e in range(n_edge)]
        mid0 = n_edge
        for q in range(n_pods):
            switches += [Switch(mid0 + q * half + j, "mid", pod=q) for j in range(half)]
        core0 = mid0 + n_pods * half
        per_block = math.ceil(n_edge / k)
        switches += [Switch(core0 + c, "core") for c in range(half * per_block)]
        for e in range(n_edge):
            q = e // half
            for j in range(half):
                links[(e, mid0 + q * half + j)] += 1
        for j in range(half):
            r = 0
            for q in range(n_pods):
                pod_edges = min(half, n_edge - q * half)
                for _ in range(pod_edges):
                    links[(mid0 + q * half + j, core0 + j * per_block + r % per_block)] += 1
                    r += 1
        levels = 3

    return SwitchGraph(spec, tuple(switches), dict(links), _attach_tiles(p, t), levels)


def mesh_shape(n_switches: int) -> tuple[int, int]:
    rows = math.isqrt(n_switches)
    return rows, math.ceil(n_switches / rows)


def _build_mesh(spec: TopologySpec) -> SwitchGraph:
    n = spec.tiles // spec.tiles_per_switch
    rows, cols = mesh_shape(n)
    switches = tuple(Switch(i, "mesh", coord=divmod(i, cols)) for i in range(n))
    links = {}
    for i in range(n):
        r, c = divmod(i, cols)
        if c + 1 < cols and i + 1 < n:
            links[(i, i + 1)] = 1
        if i + cols < n:
            links[(i, i + cols)] = 1
    levels = 1
    return SwitchGraph(
        spec, switches, links, _attach_tiles(spec.tiles, spec.tiles_per_switch),
        levels, grid=(rows, cols),
    )


def build_topology(spec: TopologySpec) -> SwitchGraph:
    """Construct and validate the switch graph described by ``spec``."""
    g = _build_clos(spec) if spec.kind == "clos" else _build_mesh(spec)
    validate(g)
    return g


def validate(g: SwitchGraph) -> None:
    """Raise TopologyError if ``g`` breaks a structural invariant."""
    spec = g.spec
    if len(g.tile_switch) != spec.tiles:
        raise TopologyError("tile attachment does not cover every tile")
    bad = np.flatnonzero(g.port_use > spec.radix)
    if len(bad):
        raise TopologyError(f"switch {bad[0]} uses {g.port_use[bad[0]]} > {spec.radix} ports")
    for (a, b), m in g.links.items():
        if a >= b or m <= 0:
            raise TopologyError(f"malformed link {(a, b)} x{m}")

    counts = g.tiles_on_switch
    if g.kind == "mesh" or g.levels > 1:
        hosts = [s.index for s in g.switches if s.stage in ("edge", "mesh")]
        if np.any(counts[hosts] != spec.tiles_per_switch):
            raise TopologyError("an edge switch does not host exactly t tiles")
    if np.any(counts[[s.index for s in g.switches if s.stage in ("mid", "core")]]):
        raise TopologyError("tiles attached above the edge stage")

    if g.kind == "clos":
        _check_clos_bandwidth(g)
    else:
        for a, b in g.links:
            (ra, ca), (rb, cb) = g.switches[a].coord, g.switches[b].coord
            if abs(ra - rb) + abs(ca - cb) != 1:
                raise TopologyError(f"mesh link {(a, b)} is not between grid neighbours")
        indptr, _ = g.csr
        if np.any(np.diff(indptr) > 4):
            raise TopologyError("mesh switch with more than 4 neighbours")

    if np.any(g.distances_from(int(g.host_switches[0]))[g.host_switches] < 0):
        raise TopologyError("network is disconnected")


def _check_clos_bandwidth(g: SwitchGraph) -> None:
    upward = Counter()
    for (a, b), m in g.links.items():
        sa, sb = g.switches[a].stage, g.switches[b].stage
        lo, hi = sorted((sa, sb), key=STAGE_ORDER.get)
        if STAGE_ORDER[hi] - STAGE_ORDER[lo] < 1:
            raise TopologyError(f"link {(a, b)} joins two {sa} switches")
        upward[lo] += m
    for stage in ("edge", "mid")[: g.levels - 1]:
        if upward[stage] != g.tiles:
            raise TopologyError(
                f"bandwidth above the {stage} stage is {upward[stage]}, expected {g.tiles}"
            )


def hop_count(g: SwitchGraph, s: int, d: int) -> int:
    """Inter-switch links on a shortest route between the switches of tiles s and d."""
    a, b = g.switch_of(s), g.switch_of(d)
    return int(g.distances_from(a)[b])


def diameter(g: SwitchGraph) -> int:
    """Largest hop count over all tile pairs."""
    return int(g.host_distances.max())


def mean_hops_from(g: SwitchGraph, s: int) -> float:
    """Expected hop count from tile s to a destination tile drawn uniformly (s included)."""
    dist = g.distances_from(g.switch_of(s))
    return float(np.dot(dist, g.tiles_on_switch)) / g.tiles


def hop_histogram(g: SwitchGraph, s: int) -> dict[int, int]:
    """Number of destination tiles at each hop distance from tile s."""
    dist = g.distances_from(g.switch_of(s))
    hist = np.bincount(dist[g.host_switches], weights=g.tiles_on_switch[g.host_switches])
    return {h: int(n) for h, n in enumerate(hist) if n}
