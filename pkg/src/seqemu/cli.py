"""Command-line entry point: ``seqemu <command> [options]``.

Exit status is 0 on success, 2 for configuration errors and 3 for tile
counts a network cannot be built for.
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .config import FORMATS, MIX_CHOICES, Scenario, load_scenario
from .errors import ConfigError, UnsupportedSizeError
from .report import (
    FIGURES,
    SWEEP_COLUMNS,
    emit_figure_data,
    format_table,
    latency_table,
    run_scenario,
)
from .topology import KINDS

EXIT_CONFIG = 2
EXIT_UNSUPPORTED = 3

TOPO_COLUMNS = ("tiles", "network", "switches", "levels", "diameter", "mean_hops")
MEMLAT_COLUMNS = ("tiles", "network", "avg_access_ns", "mc_access_ns", "mc_stderr_ns",
                  "sm_ns", "latency_ratio")
SLOWDOWN_COLUMNS = ("tiles", "network", "mix", "global_frac", "local_frac", "slowdown",
                    "worst_case_slowdown")
AREA_COLUMNS = ("tiles", "network", "processor_mm2", "switch_mm2", "wire_mm2",
                "interconnect_mm2", "processing_mm2", "chip_mm2", "memory_mm2",
                "system_mm2", "monolithic_mm2", "area_ratio")


def _int_list(s: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in s.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", metavar="PATH", help="scenario file (key = value lines)")
    p.add_argument("--tiles", type=_int_list, help="tile count(s), comma separated")
    p.add_argument("--network", choices=(*KINDS, "both"), help="network kind")
    p.add_argument("--radix", type=int, help="crossbar switch radix")
    p.add_argument("--mix", choices=MIX_CHOICES, help="instruction mix preset")
    p.add_argument("--global-frac", type=float, help="global access fraction (custom mix)")
    p.add_argument("--local-frac", type=float, help="local access fraction (custom mix)")
    p.add_argument("--capacity-gb", type=float, help="emulated memory size (default 4)")
    p.add_argument("--samples", type=int, help="Monte Carlo samples per point")
    p.add_argument("--seed", type=int, help="random seed (default 0)")
    p.add_argument("--format", choices=FORMATS, help="output format (default csv)")
    p.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqemu",
        description="Latency, slowdown and area models for emulating a large "
        "sequential memory on a tiled many-core chip.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()
    sub.add_parser("topo", parents=[common], help="switch counts, diameter and hops")
    lat = sub.add_parser("latency", parents=[common], help="zero-load message latency")
    lat.add_argument("--hops", type=_int_list, default=(0, 1, 2, 3, 4))
    sub.add_parser("memlat", parents=[common], help="emulated memory access latency")
    sub.add_parser("slowdown", parents=[common], help="slowdown against the sequential machine")
    sub.add_parser("area", parents=[common], help="silicon area breakdown")
    fig = sub.add_parser("figure", parents=[common], help="data behind one figure")
    fig.add_argument("figure", choices=FIGURES)
    sw = sub.add_parser("sweep", parents=[common], help="full sweep over tiles x networks x mixes")
    sw.add_argument("--echo", metavar="PATH", help="also write the resolved scenario here")
    return parser


def scenario_from_args(args) -> Scenario:
    s = load_scenario(args.config) if args.config else Scenario()
    kw = {}
    if args.tiles is not None:
        kw["tiles"] = args.tiles
    if args.network is not None:
        kw["networks"] = KINDS if args.network == "both" else (args.network,)
    if args.radix is not None:
        kw["radix"] = args.radix
    if args.global_frac is not None:
        kw["global_frac"] = args.global_frac
        kw["mix"] = "custom"
    if args.mix is not None:
        kw["mix"] = args.mix
    for name in ("local_frac", "capacity_gb", "samples", "seed", "format"):
        v = getattr(args, name)
        if v is not None:
            kw[name] = v
    return replace(s, **kw)


def _pick(rows, columns):
    seen, out = set(), []
    for r in rows:
        key = (r["tiles"], r["network"], r.get("mix") if "mix" in columns else None)
        if key not in seen:
            seen.add(key)
            out.append({c: r[c] for c in columns})
    return out


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    s = scenario_from_args(args)
    if args.jobs < 1:
        raise ConfigError("--jobs must be at least 1")

    if args.command == "latency":
        columns, rows = latency_table(s, args.hops)
    elif args.command == "figure":
        columns, rows = emit_figure_data(args.figure, s)
    else:
        rows = run_scenario(s, jobs=args.jobs)
        columns = {
            "topo": TOPO_COLUMNS,
            "memlat": MEMLAT_COLUMNS,
            "slowdown": SLOWDOWN_COLUMNS,
            "area": AREA_COLUMNS,
            "sweep": SWEEP_COLUMNS,
        }[args.command]
        if args.command != "sweep":
            rows = _pick(rows, columns)
        if args.command == "sweep" and args.echo:
            _emit(s.to_text(), args.echo)
    _emit(format_table(columns, rows, s.format, s), args.out)
    return 0


def main(argv=None) -> int:
    try:
        return run(argv)
    except UnsupportedSizeError as e:
        print(f"seqemu: error: {e}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except ConfigError as e:
        print(f"seqemu: error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
