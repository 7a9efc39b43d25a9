import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from seqemu.errors import ConfigError
from seqemu.latency import LatencyParams, zero_load_latency
from seqemu.memory import (
    DEFAULT_CAPACITY,
    GIB,
    AccessModel,
    MemoryMap,
    average_access_latency,
    central_tile,
    controller_tile,
    emulated_access_latency,
    sample_access_latency,
    sm_access_latency,
    sm_dram_latency_for_capacity,
    tile_for_address,
    tiles_for_addresses,
)
from seqemu.topology import TopologySpec, build_topology, hop_histogram

from conftest import SIZES, graph


def leg_sum(h, t_mem=10):
    """Controller<->program on one switch, controller<->target over h hops, both ways."""
    local = 2 * 1 + 2 + 1 * (2 + 5)
    remote = 2 * 1 + 2 + (h + 1) * (2 + 5) + h * 2
    return local + remote + t_mem + remote + local


def oracle_average(g, lp, am):
    hist = hop_histogram(g, controller_tile(g, am))
    legs = {h: leg_sum(h, am.t_mem_local) for h in hist}
    return sum(n * legs[h] for h, n in hist.items()) / g.tiles


# address map

def test_address_examples():
    m = MemoryMap(DEFAULT_CAPACITY, 64)
    assert tile_for_address(m, 0) == 0
    assert tile_for_address(m, DEFAULT_CAPACITY - 1) == 63
    assert tile_for_address(m, DEFAULT_CAPACITY // 2) == 32


def test_address_bounds():
    m = MemoryMap(DEFAULT_CAPACITY, 64)
    with pytest.raises(ConfigError):
        tile_for_address(m, DEFAULT_CAPACITY)
    with pytest.raises(ConfigError):
        tile_for_address(m, -1)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 10_000), st.integers(1, 300), st.data())
def test_blocks_equal_and_ordered(words, tiles, data):
    cap = words * 4
    if tiles > words:
        tiles = words
    m = MemoryMap(cap, tiles)
    sizes = [hi - lo for lo, hi in (m.block_bounds(t) for t in range(tiles))]
    assert sum(sizes) == cap and max(sizes) - min(sizes) <= 4
    a = data.draw(st.integers(0, cap - 1))
    b = data.draw(st.integers(0, cap - 1))
    ta, tb = tile_for_address(m, a), tile_for_address(m, b)
    assert (ta <= tb) == (a <= b) or ta == tb
    lo, hi = m.block_bounds(ta)
    assert lo <= a < hi


def test_vectorised_matches_scalar():
    m = MemoryMap(10_000 * 4 + 0, 37)
    addrs = np.random.default_rng(0).integers(0, m.total_capacity, size=500)
    assert list(tiles_for_addresses(m, addrs)) == [tile_for_address(m, int(a)) for a in addrs]


# access latency

def test_leg_examples(lp, am):
    g = graph("clos", 64)
    assert emulated_access_latency(g, lp, am, 0) == 54 == leg_sum(0)
    assert emulated_access_latency(g, lp, am, 63) == 90 == leg_sum(2)
    assert emulated_access_latency(graph("clos", 4096), lp, am, 4095) == 126 == leg_sum(4)


@pytest.mark.parametrize("kind", ("clos", "mesh"))
@pytest.mark.parametrize("p", SIZES)
def test_average_matches_histogram_oracle(kind, p, lp, am):
    g = graph(kind, p)
    assert average_access_latency(g, lp, am) == pytest.approx(oracle_average(g, lp, am), abs=1e-9)


def test_average_anchors(lp, am):
    assert average_access_latency(graph("clos", 4096), lp, am) == pytest.approx(
        (16 * 54 + 240 * 90 + 3840 * 126) / 4096
    )
    assert average_access_latency(graph("clos", 256), lp, am) == pytest.approx(
        (16 * 54 + 240 * 90) / 256
    )
    assert average_access_latency(graph("mesh", 4096), lp, am) == pytest.approx(54 + 18 * 8)


def test_mesh_controller_is_central():
    g = graph("mesh", 4096)
    r, c = g.switches[g.switch_of(central_tile(g))].coord
    assert {r, c} <= {7, 8}
    corner = AccessModel(controller_tile=0)
    assert average_access_latency(g, LatencyParams(), corner) > average_access_latency(
        g, LatencyParams(), AccessModel()
    )


def test_single_switch_sampling(lp, am):
    g = build_topology(TopologySpec("clos", 16))
    s = sample_access_latency(g, lp, am, 1000, 0)
    assert s.mean_ns == 54 and s.stddev_ns == 0


def test_monte_carlo_consistent(lp, am):
    g = graph("clos", 4096)
    n = 10**6
    s = sample_access_latency(g, lp, am, n, 1)
    exact = average_access_latency(g, lp, am)
    assert abs(s.mean_ns - exact) <= 3 * s.stddev_ns / np.sqrt(n)
    s2 = sample_access_latency(g, lp, am, n, 1)
    assert (s.mean_ns, s.stddev_ns) == (s2.mean_ns, s2.stddev_ns)


def test_sm_latency():
    assert sm_access_latency(AccessModel()) == 36
    assert sm_dram_latency_for_capacity(DEFAULT_CAPACITY) == 36
    assert sm_dram_latency_for_capacity(GIB) == 35
    assert sm_access_latency(AccessModel(sm_dram_latency_ns=35)) == 35
    assert sm_access_latency(AccessModel(sm_dram_latency_ns=0)) == 0


def test_access_model_errors():
    with pytest.raises(ConfigError):
        AccessModel(t_mem_local=-1)
    with pytest.raises(ConfigError):
        AccessModel(route_mode="sideways")
    with pytest.raises(ConfigError):
        average_access_latency(graph("clos", 64), LatencyParams(), AccessModel(controller_tile=64))


FIELDS = ("t_ts", "t_s", "t_sc", "t_sr", "t_l")


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(1, 5), st.sampled_from([(k, p) for k in ("clos", "mesh") for p in (64, 1024)]))
def test_monotone_in_params(field, bump, point):
    g = graph(*point)
    base = LatencyParams()
    more = LatencyParams(**{field: getattr(base, field) + bump})
    am = AccessModel()
    assert average_access_latency(g, more, am) > average_access_latency(g, base, am)
    assert average_access_latency(g, base, AccessModel(t_mem_local=10 + bump)) > average_access_latency(g, base, am)


def test_clos_steps_with_levels(lp, am):
    lat = [average_access_latency(graph("clos", p), lp, am) for p in SIZES]
    assert lat == sorted(lat)
    # within one level count the variation is small next to the level step
    assert lat[2] - lat[1] > 2 * max(lat[1] - lat[0], lat[3] - lat[2])


def test_mesh_grows_with_radius(lp, am):
    lat = [average_access_latency(graph("mesh", p), lp, am) for p in SIZES]
    assert all(b > a for a, b in zip(lat, lat[1:]))


def test_latency_ratios(lp, am):
    sm = sm_access_latency(am)
    assert 2.5 <= average_access_latency(graph("clos", 4096), lp, am) / sm <= 4.7
    assert 4.4 <= average_access_latency(graph("mesh", 4096), lp, am) / sm <= 8.2
