"""Exit criteria. Each test prints one PASS/FAIL line and asserts it.

Run with ``pytest tests/test_acceptance.py -v``.
"""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from seqemu.area import AreaParams, MemoryAreaModel, layout_area, with_memory
from seqemu.config import Scenario
from seqemu.latency import LatencyParams, zero_load_latency
from seqemu.memory import AccessModel, average_access_latency, sample_access_latency
from seqemu.report import point_seed, run_scenario
from seqemu.topology import TopologySpec, build_topology, diameter, validate
from seqemu.workload import (
    InstructionMix,
    pm_machine,
    preset,
    slowdown,
    sm_machine,
    worst_case_slowdown,
)

from conftest import SIZES, graph

LP, AM = LatencyParams(), AccessModel()
SM = sm_machine(LP, AM)
ALL_P = (16, 32, 64, 128, 256, 512, 1024, 2048, 4096)


@pytest.fixture
def verdict(capsys):
    def report(n, title, checks):
        """``checks`` is a list of (label, ok) pairs."""
        failed = [label for label, ok in checks if not ok]
        line = f"criterion {n:2d} {'PASS' if not failed else 'FAIL'}  {title}"
        if failed:
            line += "  [" + "; ".join(failed) + "]"
        with capsys.disabled():
            print("\n" + line)
        assert not failed, line
    return report


def within(x, target, rel):
    return abs(x - target) <= rel * abs(target)


def pm(kind, p, lp=LP, am=AM):
    return pm_machine(graph(kind, p), lp, am)


def test_c01_topology_exactness(verdict):
    checks = []
    for p, d in zip(SIZES, (2, 2, 4, 4)):
        got = diameter(graph("clos", p))
        checks.append((f"clos {p} diameter {got} != {d}", got == d))
    for p in ALL_P:
        g = build_topology(TopologySpec("mesh", p))
        checks.append((f"mesh {p} switches {g.n_switches}", g.n_switches == p // 16))
    for kind in ("clos", "mesh"):
        for p in ALL_P:
            try:
                validate(build_topology(TopologySpec(kind, p)))
                ok = True
            except Exception:
                ok = False
            checks.append((f"{kind} {p} validator", ok))
    verdict(1, "topology exactness", checks)


def test_c02_latency_formula(verdict):
    cases = [((0, "closed"), 11), ((4, "closed"), 47), ((4, "open"), 24)]
    checks = []
    for (h, route), want in cases:
        got = zero_load_latency(LP, h, route)
        checks.append((f"h={h} {route}: got {got:g}, want {want}", got == want))
    verdict(2, "zero-load latency 11/47/24 cycles", checks)


def test_c03_access_latency_endpoints(verdict):
    clos = average_access_latency(graph("clos", 4096), LP, AM)
    mesh = average_access_latency(graph("mesh", 4096), LP, AM)
    sm = SM.global_ns
    verdict(3, f"4096-tile latency clos {clos:.1f} ns, mesh {mesh:.1f} ns", [
        ("clos 125 ns +-30%", within(clos, 125, 0.30)),
        ("mesh 220 ns +-30%", within(mesh, 220, 0.30)),
        ("clos ratio in [2.5, 4.7]", 2.5 <= clos / sm <= 4.7),
        ("mesh ratio in [4.4, 8.2]", 4.4 <= mesh / sm <= 8.2),
    ])


lat_params = st.builds(
    LatencyParams,
    t_ts=st.integers(0, 5), t_s=st.integers(1, 5), t_sc=st.integers(0, 8),
    t_sr=st.integers(0, 5), t_l=st.integers(1, 5),
)
C4_FAILS = []


@settings(max_examples=40, deadline=None)
@given(lat_params, st.integers(0, 30))
def _c4_property(lp, t_mem):
    am = AccessModel(t_mem_local=t_mem)
    clos = [average_access_latency(graph("clos", p), lp, am) for p in SIZES]
    levels = [graph("clos", p).levels for p in SIZES]
    diffs = np.diff(clos)
    step = [d for d, a, b in zip(diffs, levels, levels[1:]) if b > a]
    flat = [d for d, a, b in zip(diffs, levels, levels[1:]) if b == a]
    if not (min(step) > 0 and min(step) > max(flat)):
        C4_FAILS.append(f"clos step {lp}")
    mesh = [average_access_latency(graph("mesh", p), lp, am) for p in SIZES]
    if not all(b > a for a, b in zip(mesh, mesh[1:])):
        C4_FAILS.append(f"mesh not increasing {lp}")


def test_c04_latency_shape(verdict):
    C4_FAILS.clear()
    _c4_property()
    checks = [(f, False) for f in C4_FAILS[:3]] or [("shape", True)]
    verdict(4, "clos steps at 2->3 levels, mesh rises with radius", checks)


def test_c05_slowdown_anchors(verdict):
    d, c = preset("dhrystone"), preset("compiler")
    vals = {
        "dhry clos 4096": slowdown(d, pm("clos", 4096), SM),
        "dhry mesh 4096": slowdown(d, pm("mesh", 4096), SM),
        "comp clos 64": slowdown(c, pm("clos", 64), SM),
        "comp mesh 64": slowdown(c, pm("mesh", 64), SM),
        "comp clos 4096": slowdown(c, pm("clos", 4096), SM),
        "comp mesh 4096": slowdown(c, pm("mesh", 4096), SM),
    }
    desc = ", ".join(f"{k} {v:.2f}" for k, v in vals.items())
    verdict(5, f"slowdown anchors ({desc})", [
        ("dhrystone clos 4096 2.6 +-25%", within(vals["dhry clos 4096"], 2.6, 0.25)),
        ("dhrystone mesh 4096 5.0 +-30%", within(vals["dhry mesh 4096"], 5.0, 0.30)),
        ("compiler clos 64 1.5 +-20%", within(vals["comp clos 64"], 1.5, 0.20)),
        ("compiler mesh 64 1.5 +-20%", within(vals["comp mesh 64"], 1.5, 0.20)),
        ("compiler clos 4096 1.9 +-25%", within(vals["comp clos 4096"], 1.9, 0.25)),
        ("compiler mesh 4096 in [2.5, 4.5]", 2.5 <= vals["comp mesh 4096"] <= 4.5),
    ])


def test_c06_crossover(verdict):
    checks = []
    for name in ("dhrystone", "compiler"):
        m = slowdown(preset(name), pm("mesh", 64), SM)
        c = slowdown(preset(name), pm("clos", 64), SM)
        checks.append((f"{name}: mesh {m:.3f} >= clos {c:.3f}", m < c))
    verdict(6, "mesh beats clos at 64 tiles", checks)


C7_FAILS = []


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["clos", "mesh"]), st.sampled_from(SIZES), st.floats(0, 0.001))
def _c7_property(kind, p, local):
    machine = pm(kind, p)
    near = slowdown(InstructionMix(0.999, local, 0.001 - local), machine, SM)
    worst = worst_case_slowdown(machine, SM)
    if not within(near, worst, 0.01):
        C7_FAILS.append(f"{kind} {p}: {near} vs {worst}")
    none = slowdown(InstructionMix(0.0, 0.5 - local, 0.5 + local), machine, SM)
    if none != 1.0:
        C7_FAILS.append(f"{kind} {p}: global 0 gives {none}")


def test_c07_asymptote(verdict):
    C7_FAILS.clear()
    _c7_property()
    checks = [(f, False) for f in C7_FAILS[:3]] or [("asymptote", True)]
    verdict(7, "slowdown tends to worst case, equals 1 without globals", checks)


def test_c08_area_anchors(verdict):
    a, m = AreaParams(), MemoryAreaModel()

    def rep(kind, p):
        return with_memory(layout_area(graph(kind, p), a), 4096, m)

    mesh_pt = rep("mesh", 4096).per_tile
    wf64, wf4k = rep("clos", 64).wire_fraction, rep("clos", 4096).wire_fraction
    r2k = rep("clos", 2048).processing_mm2 / rep("mesh", 2048).processing_mm2
    r4k = rep("clos", 4096).processing_mm2 / rep("mesh", 4096).processing_mm2
    diff = rep("clos", 4096).system_mm2 / rep("mesh", 4096).system_mm2 - 1
    ratios = [
        with_memory(layout_area(build_topology(TopologySpec(k, p)), a), 4096, m).ratio_pm_over_sm
        for k in ("clos", "mesh") for p in ALL_P
    ]
    verdict(8, (
        f"area (mesh/tile {mesh_pt['processing_mm2']:.4f}, wire {wf64:.3f}/{wf4k:.3f}, "
        f"clos/mesh {r2k:.2f}/{r4k:.2f}, max ratio {max(ratios):.2f}, diff {diff:.3f})"
    ), [
        ("mesh processing/tile 0.10 +-10%", within(mesh_pt["processing_mm2"], 0.10, 0.10)),
        ("mesh switch+wire/tile < 0.01", mesh_pt["switch_mm2"] + mesh_pt["wire_mm2"] < 0.01),
        ("clos wire fraction 64 5% +-3", abs(wf64 - 0.05) <= 0.03),
        ("clos wire fraction 4096 7.5% +-3", abs(wf4k - 0.075) <= 0.03),
        ("clos/mesh 2048 1.5 +-0.2", abs(r2k - 1.5) <= 0.2),
        ("clos/mesh 4096 1.7 +-0.2", abs(r4k - 1.7) <= 0.2),
        ("PM <= 2.2x monolithic", max(ratios) <= 2.2),
        ("clos vs mesh total 10% +-8", abs(diff - 0.10) <= 0.08),
    ])


C9_FAILS = []


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**32 - 1))
def _c9_rerun(seed):
    g = graph("mesh", 1024)
    a = sample_access_latency(g, LP, AM, 20_000, seed)
    b = sample_access_latency(g, LP, AM, 20_000, seed)
    if (a.mean_ns, a.stddev_ns) != (b.mean_ns, b.stddev_ns):
        C9_FAILS.append(f"seed {seed} not reproducible")


def test_c09_stochastic_consistency(verdict):
    C9_FAILS.clear()
    n = 10**6
    checks = []
    for kind, p in (("clos", 4096), ("mesh", 4096), ("clos", 256)):
        g = graph(kind, p)
        s = sample_access_latency(g, LP, AM, n, point_seed(1, p, kind))
        exact = average_access_latency(g, LP, AM)
        z = abs(s.mean_ns - exact) / s.stderr_ns
        checks.append((f"{kind} {p} off by {z:.2f} stderr", z <= 3))
    _c9_rerun()
    checks += [(f, False) for f in C9_FAILS[:3]]
    rows_a = run_scenario(Scenario(samples=5000, seed=11))
    rows_b = run_scenario(Scenario(samples=5000, seed=11), jobs=2)
    checks.append(("sweep rerun identical", rows_a == rows_b))
    verdict(9, "Monte Carlo mean within 3 stderr, reruns bit-identical", checks)


def test_c10_accounting(verdict):
    checks = []
    s = Scenario(tiles=ALL_P[2:], samples=500)
    am = s.access_model()
    for row in run_scenario(s):
        g = build_topology(s.spec(row["network"], row["tiles"]))
        r = with_memory(layout_area(g, s.area), s.capacity_mb, s.memory)
        tag = f"{row['network']} {row['tiles']}"
        parts_ok = (
            r.interconnect_total_mm2 == r.switch_mm2 + r.wire_channel_mm2
            and r.processing_mm2 == r.processor_mm2 + r.interconnect_total_mm2
            and r.chip_mm2 == r.processing_mm2 + r.peripheral_mm2
            and r.system_mm2 == r.chip_mm2 + r.memory_total_mm2
        )
        checks.append((f"{tag} area parts", parts_ok))
        lib = {
            "avg_access_ns": average_access_latency(g, s.latency, am),
            "slowdown": slowdown(preset(s.mix), pm_machine(g, s.latency, am), sm_machine(s.latency, am)),
            "system_mm2": r.system_mm2,
            "interconnect_mm2": r.interconnect_total_mm2,
            "switches": g.n_switches,
            "diameter": diameter(g),
        }
        for k, v in lib.items():
            checks.append((f"{tag} {k}", row[k] == v))
    verdict(10, "area totals equal sum of parts, rows re-derivable", checks)
