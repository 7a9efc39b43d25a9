import functools

import pytest

from seqemu.latency import LatencyParams
from seqemu.memory import AccessModel
from seqemu.topology import TopologySpec, build_topology

SIZES = (64, 256, 1024, 4096)


@functools.lru_cache(maxsize=None)
def graph(kind: str, p: int):
    return build_topology(TopologySpec(kind, p))


@pytest.fixture
def lp():
    return LatencyParams()


@pytest.fixture
def am():
    return AccessModel()
