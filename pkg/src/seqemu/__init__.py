"""Models for emulating a large sequential memory on a tiled many-core chip.

Networks (folded Clos and 2D mesh) are built as explicit switch graphs,
message latency follows a zero-load wormhole model, and the emulated
memory is spread across tile-local memories in equal address blocks.
"""
from .errors import ConfigError, SeqemuError, TopologyError, UnsupportedSizeError
from .kernels import BACKEND
from .topology import (
    KINDS,
    SwitchGraph,
    TopologySpec,
    build_topology,
    diameter,
    hop_count,
    hop_histogram,
    mean_hops_from,
    validate,
)
from .latency import LatencyParams, cycles_to_ns, zero_load_latency
from .memory import (
    AccessModel,
    MemoryMap,
    average_access_latency,
    emulated_access_latency,
    sample_access_latency,
    sm_access_latency,
    tile_for_address,
)
from .workload import (
    InstructionMix,
    MachineModel,
    expected_op_time,
    preset,
    simulate_stream,
    slowdown,
    worst_case_slowdown,
)
from .area import AreaParams, AreaReport, MemoryAreaModel, layout_area, memory_area, system_area
from .config import Scenario, load_scenario, parse_scenario
from .report import emit_figure_data, run_scenario

__version__ = "0.1.0"
