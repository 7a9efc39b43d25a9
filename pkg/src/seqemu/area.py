"""Silicon area of the processing chip and its stacked tile memories.

Clos layout: an H-tree. Core switches sit at the chip centre, each lower
stage is split into four groups placed in the quadrants of the level above,
and quadrants are separated by cross-shaped wiring channels. Every switch
group is a staggered set: a staircase of switches, each shifted by the width
of the wire bundle it escapes on each side, so that every bundle leaves the
group without crossing another switch.

Mesh layout: one block of tiles per switch, the switch at the block corner,
neighbouring switches joined by a link bundle routed between blocks.

Tile-to-switch wiring is routed over logic and costs no area. Inter-switch
wires use dedicated channels on all routing layers.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace

import numpy as np

from .errors import ConfigError
from .topology import STAGE_ORDER, SwitchGraph, TopologySpec, build_topology

C104_SWITCH_AREA_MM2 = 0.03  # scaled from the C104 die; alternative to the 0.05 default


@dataclass(frozen=True)
class AreaParams:
    proc_area_mm2: float = 0.10
    switch_area_mm2: float = 0.05
    wires_per_link: int = 16
    wire_pitch_nm: float = 125
    pitch_factor: float = 2.0  # contacted pitch / capacitance margin
    routing_layers: int = 4
    peripheral_overhead: float = 0.20
    tsv_per_mm2: float = 400

    def __post_init__(self):
        for name, v in asdict(self).items():
            if v <= 0 and name != "peripheral_overhead":
                raise ConfigError(f"area parameter {name} must be positive")
        if self.peripheral_overhead < 0:
            raise ConfigError("peripheral_overhead must be non-negative")
        if self.routing_layers % 2:
            raise ConfigError("routing_layers must be even (half per direction)")

    @property
    def switch_side_mm(self) -> float:
        return math.sqrt(self.switch_area_mm2)

    @property
    def effective_pitch_mm(self) -> float:
        return self.wire_pitch_nm * self.pitch_factor * 1e-6

    def bundle_mm(self, links: float, layers: int) -> float:
        """Width of a bundle of ``links`` links spread over ``layers`` metal layers."""
        return links * self.wires_per_link * self.effective_pitch_mm / layers


@dataclass(frozen=True)
class MemoryAreaModel:
    """Affine DRAM area curve: a fixed periphery cost plus a per-MB array cost.

    ``latency_curve`` optionally holds (capacity MB, access ns) points.
    """

    fixed_mm2: float = 0.25
    per_mb_mm2: float = 0.40
    latency_curve: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        if self.fixed_mm2 <= 0 or self.per_mb_mm2 <= 0:
            raise ConfigError("memory area coefficients must be positive")


def memory_area(capacity_mb: float, m: MemoryAreaModel) -> float:
    """Area in mm^2 of one DRAM of ``capacity_mb`` megabytes."""
    if capacity_mb <= 0:
        raise ConfigError(f"memory capacity must be positive, got {capacity_mb}")
    return m.fixed_mm2 + capacity_mb * m.per_mb_mm2


def memory_latency_ns(capacity_mb: float, m: MemoryAreaModel) -> float:
    """Access latency interpolated log-linearly in capacity."""
    if not m.latency_curve:
        raise ConfigError("memory model has no latency curve")
    if capacity_mb <= 0:
        raise ConfigError(f"memory capacity must be positive, got {capacity_mb}")
    pts = sorted(m.latency_curve)
    xs = np.log2([c for c, _ in pts])
    return float(np.interp(math.log2(capacity_mb), xs, [t for _, t in pts]))


@dataclass(frozen=True)
class AreaReport:
    kind: str
    tiles: int
    switches: int
    processor_mm2: float
    switch_mm2: float  # switch footprint including group packing
    switch_raw_mm2: float  # switch count x unit area
    wire_channel_mm2: float
    peripheral_overhead: float
    chip_side_mm: float
    tsv_ok: bool
    memory_total_mm2: float = 0.0
    monolithic_dram_mm2: float = 0.0

    @property
    def interconnect_total_mm2(self) -> float:
        return self.switch_mm2 + self.wire_channel_mm2

    @property
    def processing_mm2(self) -> float:
        """Processors plus interconnect."""
        return self.processor_mm2 + self.interconnect_total_mm2

    @property
    def peripheral_mm2(self) -> float:
        return self.peripheral_overhead * self.processing_mm2

    @property
    def chip_mm2(self) -> float:
        return self.processing_mm2 + self.peripheral_mm2

    @property
    def system_mm2(self) -> float:
        return self.chip_mm2 + self.memory_total_mm2

    @property
    def ratio_pm_over_sm(self) -> float:
        if self.monolithic_dram_mm2 <= 0:
            return math.nan
        return self.system_mm2 / self.monolithic_dram_mm2

    @property
    def wire_fraction(self) -> float:
        """Share of the processor + interconnect area taken by wiring channels."""
        return self.wire_channel_mm2 / self.processing_mm2

    @property
    def per_tile(self) -> dict[str, float]:
        p = self.tiles
        return {
            "processor_mm2": self.processor_mm2 / p,
            "switch_mm2": self.switch_mm2 / p,
            "wire_mm2": self.wire_channel_mm2 / p,
            "processing_mm2": self.processing_mm2 / p,
        }

    def as_dict(self) -> dict:
        d = asdict(self)
        for name in (
            "interconnect_total_mm2", "processing_mm2", "peripheral_mm2", "chip_mm2",
            "system_mm2", "ratio_pm_over_sm", "wire_fraction",
        ):
            d[name] = getattr(self, name)
        d.update({f"per_tile_{k}": v for k, v in self.per_tile.items()})
        return d


def _tsv_ok(a: AreaParams) -> bool:
    # one link-wide memory interface per tile through TSVs under the tile
    return a.wires_per_link <= a.tsv_per_mm2 * a.proc_area_mm2


def _stage_links(g: SwitchGraph) -> tuple[dict, dict]:
    """Per stage, the largest total and upward link count of any switch."""
    total = {s.stage: 0 for s in g.switches}
    up = dict(total)
    per_sw = np.zeros(g.n_switches, dtype=np.int64)
    per_up = np.zeros(g.n_switches, dtype=np.int64)
    for (a, b), m in g.links.items():
        per_sw[a] += m
        per_sw[b] += m
        lo = a if STAGE_ORDER[g.switches[a].stage] < STAGE_ORDER[g.switches[b].stage] else b
        per_up[lo] += m
    for s in g.switches:
        total[s.stage] = max(total[s.stage], int(per_sw[s.index]))
        up[s.stage] = max(up[s.stage], int(per_up[s.index]))
    return total, up


def _staircase(n: int, links: int, a: AreaParams) -> float:
    """Bounding-box area of ``n`` staggered switches escaping ``links`` each."""
    if n == 0:
        return 0.0
    step = a.bundle_mm(links / 2, a.routing_layers // 2)
    s = a.switch_side_mm
    return (n * s) * (s + (n - 1) * step)


def layout_clos_area(g: SwitchGraph, a: AreaParams) -> AreaReport:
    if g.kind != "clos":
        raise ConfigError("layout_clos_area needs a Clos graph")
    p = g.tiles
    if g.levels == 1:
        side = math.sqrt(p * a.proc_area_mm2 + a.switch_area_mm2)
        return AreaReport(
            "clos", p, 1, p * a.proc_area_mm2, a.switch_area_mm2, a.switch_area_mm2, 0.0,
            a.peripheral_overhead, side, _tsv_ok(a),
        )

    stages = sorted({s.stage for s in g.switches}, key=STAGE_ORDER.get, reverse=True)
    total_links, up_links = _stage_links(g)
    groups, per_group = [], []
    for depth, stage in enumerate(stages):
        n = len(g.stage_indices(stage))
        k = min(4**depth, n)
        groups.append(k)
        per_group.append(math.ceil(n / k))

    switch_mm2 = sum(
        k * _staircase(n, total_links[st], a) for k, n, st in zip(groups, per_group, stages)
    )
    leaf_box = _staircase(per_group[-1], total_links[stages[-1]], a)
    side = math.sqrt(p / groups[-1] * a.proc_area_mm2 + leaf_box)
    wire = 0.0
    for depth in range(len(stages) - 2, -1, -1):
        child = stages[depth + 1]
        w = max(
            a.bundle_mm(per_group[depth + 1] * up_links[child], a.routing_layers),
            a.bundle_mm(up_links[child], 1),
        )
        side = 2 * side + w
        wire += groups[depth] * (2 * w * side - w * w)

    return AreaReport(
        "clos", p, g.n_switches, p * a.proc_area_mm2, switch_mm2,
        g.n_switches * a.switch_area_mm2, wire,
        a.peripheral_overhead, side, _tsv_ok(a),
    )


def layout_mesh_area(g: SwitchGraph, a: AreaParams) -> AreaReport:
    if g.kind != "mesh":
        raise ConfigError("layout_mesh_area needs a mesh graph")
    t = g.spec.tiles_per_switch
    pitch = math.sqrt(t * a.proc_area_mm2 + a.switch_area_mm2)
    wire = sum(g.links.values()) * pitch * a.bundle_mm(1, a.routing_layers)
    rows, cols = g.grid
    return AreaReport(
        "mesh", g.tiles, g.n_switches, g.tiles * a.proc_area_mm2,
        g.n_switches * a.switch_area_mm2, g.n_switches * a.switch_area_mm2, wire,
        a.peripheral_overhead,
        max(rows, cols) * pitch, _tsv_ok(a),
    )


def layout_area(g: SwitchGraph, a: AreaParams) -> AreaReport:
    return layout_clos_area(g, a) if g.kind == "clos" else layout_mesh_area(g, a)


def with_memory(report: AreaReport, capacity_mb: float, m: MemoryAreaModel) -> AreaReport:
    """Attach per-tile memories holding ``capacity_mb`` in total, and the monolithic baseline."""
    return replace(
        report,
        memory_total_mm2=report.tiles * memory_area(capacity_mb / report.tiles, m),
        monolithic_dram_mm2=memory_area(capacity_mb, m),
    )


def system_area(
    p: int,
    kind: str,
    capacity_mb: float,
    a: AreaParams | None = None,
    m: MemoryAreaModel | None = None,
    radix: int = 32,
    tiles_per_switch: int | None = None,
) -> AreaReport:
    """Processing chip plus stacked tile memories, against one monolithic DRAM."""
    a = a or AreaParams()
    m = m or MemoryAreaModel()
    g = build_topology(TopologySpec(kind, p, radix, tiles_per_switch))
    return with_memory(layout_area(g, a), capacity_mb, m)
