"""Sweep execution and figure tables.

Every number in a row comes straight from a library call; this module only
arranges them. Rows are sorted by (tiles, network, mix) whatever order the
points were computed in.
"""
from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .area import layout_area, with_memory
from .config import Scenario
from .errors import ConfigError
from .latency import cycles_to_ns, zero_load_latency
from .memory import (
    average_access_latency,
    controller_tile,
    sample_access_latency,
    sm_access_latency,
)
from .topology import KINDS, build_topology, diameter, mean_hops_from
from .workload import (
    PRESETS,
    SYNTHETIC_GLOBAL_FRACS,
    pm_machine,
    slowdown,
    sm_machine,
    synthetic_mix,
    worst_case_slowdown,
)

SWEEP_COLUMNS = (
    "tiles", "network", "mix", "global_frac", "local_frac", "switches", "levels",
    "diameter", "mean_hops", "avg_access_ns", "mc_access_ns", "mc_stderr_ns", "sm_ns",
    "latency_ratio", "slowdown", "worst_case_slowdown", "processor_mm2", "switch_mm2",
    "wire_mm2", "interconnect_mm2", "processing_mm2", "chip_mm2", "memory_mm2",
    "system_mm2", "monolithic_mm2", "area_ratio",
)
FIGURES = ("fig4", "fig6", "fig7", "fig8", "fig10", "fig11", "fig12")
FIGURE_CAPACITIES_GB = (1, 2, 4, 8)


def point_seed(seed: int, p: int, kind: str) -> int:
    """Seed for one (tiles, network) point, independent of execution order."""
    ss = np.random.SeedSequence([seed, p, KINDS.index(kind)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def run_point(s: Scenario, p: int, kind: str) -> list[dict]:
    g = build_topology(s.spec(kind, p))
    lp, am = s.latency, s.access_model()
    pm, sm = pm_machine(g, lp, am), sm_machine(lp, am)
    mc = sample_access_latency(g, lp, am, s.samples, point_seed(s.seed, p, kind), s.capacity_bytes)
    area = with_memory(layout_area(g, s.area), s.capacity_mb, s.memory)
    avg = average_access_latency(g, lp, am)
    base = {
        "tiles": p,
        "network": kind,
        "switches": g.n_switches,
        "levels": g.levels,
        "diameter": diameter(g),
        "mean_hops": mean_hops_from(g, controller_tile(g, am)),
        "avg_access_ns": avg,
        "mc_access_ns": mc.mean_ns,
        "mc_stderr_ns": mc.stderr_ns,
        "sm_ns": sm_access_latency(am),
        "latency_ratio": avg / sm_access_latency(am),
        "worst_case_slowdown": worst_case_slowdown(pm, sm),
        "processor_mm2": area.processor_mm2,
        "switch_mm2": area.switch_mm2,
        "wire_mm2": area.wire_channel_mm2,
        "interconnect_mm2": area.interconnect_total_mm2,
        "processing_mm2": area.processing_mm2,
        "chip_mm2": area.chip_mm2,
        "memory_mm2": area.memory_total_mm2,
        "system_mm2": area.system_mm2,
        "monolithic_mm2": area.monolithic_dram_mm2,
        "area_ratio": area.ratio_pm_over_sm,
    }
    rows = []
    for label, mix in s.mix_points():
        row = dict(base)
        row.update(
            mix=label,
            global_frac=mix.global_frac,
            local_frac=mix.local_frac,
            slowdown=slowdown(mix, pm, sm),
        )
        rows.append({c: row[c] for c in SWEEP_COLUMNS})
    return rows


def _run_point_args(args):
    return run_point(*args)


def run_scenario(s: Scenario, jobs: int = 1) -> list[dict]:
    """One row per (tiles, network, mix point)."""
    points = [(s, p, kind) for p in s.tiles for kind in s.networks]
    if jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_run_point_args, points))
    else:
        chunks = [run_point(*pt) for pt in points]
    rows = [r for chunk in chunks for r in chunk]
    rows.sort(key=lambda r: (r["tiles"], KINDS.index(r["network"]), r["mix"]))
    return rows


def _graphs(s: Scenario, p: int):
    return {kind: build_topology(s.spec(kind, p)) for kind in KINDS}


def _fig4(s):
    cols = ("tiles", "clos_switches", "mesh_switches", "clos_diameter", "mesh_diameter")
    rows = []
    for p in s.tiles:
        g = _graphs(s, p)
        rows.append({
            "tiles": p,
            "clos_switches": g["clos"].n_switches,
            "mesh_switches": g["mesh"].n_switches,
            "clos_diameter": diameter(g["clos"]),
            "mesh_diameter": diameter(g["mesh"]),
        })
    return cols, rows


def _fig6(s):
    mem_cols = [f"memory_{c}gb_mm2" for c in FIGURE_CAPACITIES_GB]
    cols = ("tiles", "clos_processing_mm2", "mesh_processing_mm2", *mem_cols)
    rows = []
    for p in s.tiles:
        g = _graphs(s, p)
        row = {"tiles": p}
        for kind in KINDS:
            row[f"{kind}_processing_mm2"] = layout_area(g[kind], s.area).processing_mm2
        base = layout_area(g["clos"], s.area)
        for c, name in zip(FIGURE_CAPACITIES_GB, mem_cols):
            row[name] = with_memory(base, c * 1024, s.memory).memory_total_mm2
        rows.append(row)
    return cols, rows


def _fig7(s):
    cols = ("tiles", "network", "processor_per_tile_mm2", "switch_per_tile_mm2",
            "wire_per_tile_mm2", "wire_fraction")
    rows = []
    for p in s.tiles:
        for kind, g in _graphs(s, p).items():
            a = layout_area(g, s.area)
            pt = a.per_tile
            rows.append({
                "tiles": p,
                "network": kind,
                "processor_per_tile_mm2": pt["processor_mm2"],
                "switch_per_tile_mm2": pt["switch_mm2"],
                "wire_per_tile_mm2": pt["wire_mm2"],
                "wire_fraction": a.wire_fraction,
            })
    return cols, rows


def _fig8(s):
    cols = ("tiles", "network", "capacity_gb", "system_mm2", "monolithic_mm2", "area_ratio")
    rows = []
    for p in s.tiles:
        for kind, g in _graphs(s, p).items():
            base = layout_area(g, s.area)
            for c in FIGURE_CAPACITIES_GB:
                a = with_memory(base, c * 1024, s.memory)
                rows.append({
                    "tiles": p,
                    "network": kind,
                    "capacity_gb": c,
                    "system_mm2": a.system_mm2,
                    "monolithic_mm2": a.monolithic_dram_mm2,
                    "area_ratio": a.ratio_pm_over_sm,
                })
    return cols, rows


def _fig10(s):
    cols = ("tiles", "clos_ns", "mesh_ns", "sm_ns")
    am = s.access_model()
    rows = []
    for p in s.tiles:
        g = _graphs(s, p)
        rows.append({
            "tiles": p,
            "clos_ns": average_access_latency(g["clos"], s.latency, am),
            "mesh_ns": average_access_latency(g["mesh"], s.latency, am),
            "sm_ns": sm_access_latency(am),
        })
    return cols, rows


def _fig11(s):
    fracs = s.global_fracs or SYNTHETIC_GLOBAL_FRACS
    names = [f"slowdown_g{round(f * 100):02d}" for f in fracs]
    cols = ("tiles", "network", *names)
    am = s.access_model()
    sm = sm_machine(s.latency, am)
    rows = []
    for p in s.tiles:
        for kind, g in _graphs(s, p).items():
            pm = pm_machine(g, s.latency, am)
            row = {"tiles": p, "network": kind}
            for f, name in zip(fracs, names):
                row[name] = slowdown(synthetic_mix(f, s.local_frac), pm, sm)
            rows.append(row)
    return cols, rows


def _fig12(s):
    cols = ("tiles", "clos_slowdown", "mesh_slowdown")
    am = s.access_model()
    sm = sm_machine(s.latency, am)
    rows = []
    for p in s.tiles:
        row = {"tiles": p}
        for kind, g in _graphs(s, p).items():
            row[f"{kind}_slowdown"] = slowdown(PRESETS["compiler"], pm_machine(g, s.latency, am), sm)
        rows.append(row)
    return cols, rows


_FIGURE_FUNCS = {
    "fig4": _fig4, "fig6": _fig6, "fig7": _fig7, "fig8": _fig8,
    "fig10": _fig10, "fig11": _fig11, "fig12": _fig12,
}


def emit_figure_data(figure: str, s: Scenario) -> tuple[tuple[str, ...], list[dict]]:
    """Columns and rows of the data behind one figure of the study."""
    try:
        func = _FIGURE_FUNCS[figure]
    except KeyError:
        raise ConfigError(f"unknown figure {figure!r}; known: {', '.join(FIGURES)}") from None
    return func(s)


def latency_table(s: Scenario, hops) -> tuple[tuple[str, ...], list[dict]]:
    cols = ("hops", "open_cycles", "closed_cycles", "open_ns", "closed_ns")
    rows = []
    for h in hops:
        o = zero_load_latency(s.latency, h, "open")
        c = zero_load_latency(s.latency, h, "closed")
        rows.append({
            "hops": h, "open_cycles": o, "closed_cycles": c,
            "open_ns": cycles_to_ns(s.latency, o), "closed_ns": cycles_to_ns(s.latency, c),
        })
    return cols, rows


def format_table(columns, rows, fmt: str = "csv", scenario: Scenario | None = None) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        return buf.getvalue()
    if fmt == "json":
        doc = {"columns": list(columns), "rows": rows}
        if scenario is not None:
            doc["scenario"] = scenario.to_text()
        return json.dumps(doc, indent=2, allow_nan=True) + "\n"
    raise ConfigError(f"unknown output format {fmt!r}")
