#!/usr/bin/env python3
"""
Spike Regions - Main Entry Point
Construct, simulate and count the regions of discrete-time LIF spiking networks
"""
import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional
from loguru import logger
from colorama import Fore, Style, init

# Initialize colorama
init(autoreset=True)

# Import configuration and lab
from config import Config
from src.errors import ValidationError
from src.region_lab import BUILD_KINDS, SpikeRegionsLab, detect_period

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_VALIDATION = 2
EXIT_IO = 3


def setup_logging(config: Config):
    """Setup logging configuration"""
    logger.remove()  # Remove default handler

    # Add console handler with colors
    logger.add(
        sys.stderr,
        format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan> - <level>{message}</level>",
        level=config.log_level,
        colorize=True
    )

    # Add file handler
    logger.add(
        config.log_file,
        format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function} - {message}",
        level=config.log_level,
        rotation="10 MB",
        retention="7 days"
    )


def print_banner():
    """Print application banner"""
    banner = f"""
{Fore.CYAN}╔═══════════════════════════════════════════════════════════╗
║                                                           ║
║                 SPIKE REGIONS LAB                         ║
║                                                           ║
║       Exact LIF simulation and region counting            ║
║                                                           ║
╚═══════════════════════════════════════════════════════════╝{Style.RESET_ALL}
"""
    print(banner)


def parse_matrix(text: str) -> List[List[str]]:
    """'1,0;0,1' -> [['1', '0'], ['0', '1']]"""
    return [[value.strip() for value in row.split(",")] for row in text.split(";")]


def parse_vector(text: str) -> List[str]:
    return [value.strip() for value in text.split(",")]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spike-regions", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--mode", choices=["exact", "float"], help="numeric mode (SPIKE_REGIONS_MODE)")
    parser.add_argument("--seed", type=int, help="random seed (SPIKE_REGIONS_SEED)")
    parser.add_argument("--output-dir", type=Path, help="artifact directory (SPIKE_REGIONS_OUTPUT_DIR)")
    parser.add_argument("--quiet", action="store_true", help="skip the banner")
    commands = parser.add_subparsers(dest="command", required=True)

    build = commands.add_parser("build", help="construct a network file")
    build.add_argument("kind", choices=BUILD_KINDS)
    build.add_argument("--n", type=int, help="identity width")
    build.add_argument("--T", type=int, help="latency")
    build.add_argument("--L", type=int, help="identity depth")
    build.add_argument("--epsilon", help="identity gadget margin")
    build.add_argument("--A", help="indicator constraint matrix, rows separated by ';'")
    build.add_argument("--b", help="indicator right-hand side, comma separated")
    build.add_argument("--spec", type=Path, help="step-function JSON file")
    build.add_argument("--gamma", help="Lipschitz constant")
    build.add_argument("--eps", help="target accuracy")
    build.add_argument("--box", help="box lo,hi x lo,hi (write --box=-1,1x-1,1 for negative bounds)")
    build.add_argument("--n1", type=int, help="general-position width")
    build.add_argument("--output", type=Path)

    regions = commands.add_parser("regions", help="count the regions of a network file")
    regions.add_argument("network", type=Path)
    method = regions.add_mutually_exclusive_group()
    method.add_argument("--exact2d", action="store_true", help="exact planar arrangement (default)")
    method.add_argument("--sample", type=int, metavar="N", help="sample N Halton points")
    regions.add_argument("--layer", type=int)
    regions.add_argument("--box", help="box lo,hi x lo,hi (write --box=-1,1x-1,1 for negative bounds)")
    regions.add_argument("--output", type=Path)

    shifts = commands.add_parser("shifts", help="realized shift trajectory of one neuron")
    partition = commands.add_parser("partition", help="temporal partition of one neuron")
    for sub in (shifts, partition):
        sub.add_argument("--beta", required=True)
        sub.add_argument("--theta", default="1")
        sub.add_argument("--u0", default="0")
        sub.add_argument("--T", type=int, required=True)
        sub.add_argument("--output", type=Path)
    shifts.add_argument("--z", required=True)

    approx = commands.add_parser("approx", help="grid approximant with exact errors")
    approx.add_argument("--target", choices=["ramp", "staircase"], required=True)
    approx.add_argument("--gamma")
    approx.add_argument("--eps")
    approx.add_argument("--K", type=int)
    approx.add_argument("--output", type=Path)

    table1 = commands.add_parser("table1", help="region counts: bound, construction, random layers")
    table1.add_argument("--random-nets", type=int, default=5)
    table1.add_argument("--output", type=Path)

    run = commands.add_parser("simulate", help="run a network file on one input")
    run.add_argument("network", type=Path)
    run.add_argument("--x", required=True, help="input vector, comma separated")

    return parser


def config_from_args(args: argparse.Namespace) -> Config:
    config = Config()
    updates = {}
    if args.mode:
        updates["mode"] = args.mode
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.output_dir:
        updates["output_dir"] = args.output_dir
    return config.model_copy(update=updates)


def run_command(lab: SpikeRegionsLab, args: argparse.Namespace):
    """Dispatch one parsed command and print its summary"""
    if args.command == "build":
        params = {
            "n": args.n, "T": args.T, "L": args.L, "epsilon": args.epsilon,
            "A": parse_matrix(args.A) if args.A else None,
            "b": parse_vector(args.b) if args.b else None,
            "spec": args.spec, "gamma": args.gamma, "eps": args.eps, "box": args.box, "n1": args.n1,
        }
        params = {key: value for key, value in params.items() if value is not None}
        required = {
            "identity": ["n", "T", "L"],
            "indicator": ["A", "b"],
            "step": ["spec"],
            "lipschitz": ["gamma", "eps"],
            "general-position": ["n1", "T"],
        }[args.kind]
        missing = [name for name in required if name not in params]
        if missing:
            raise ValidationError(f"build {args.kind} needs --{', --'.join(missing)}")
        path, net, metadata = lab.cmd_build(args.kind, args.output, **params)
        print(f"{Fore.GREEN}✓ Wrote {path}{Style.RESET_ALL}")
        print(f"  widths: {list(net.widths)}  T: {net.T}  mode: {metadata['mode']}")
        if "regions" in metadata:
            print(f"  regions: {metadata['regions']} (bound {metadata['bound']})")

    elif args.command == "regions":
        method = "sample" if args.sample else "exact2d"
        report = lab.cmd_regions(args.network, method, args.layer, args.box, args.sample, args.output)
        print(f"{Fore.GREEN}Region counts ({report.method}):{Style.RESET_ALL}")
        print(report.to_json())

    elif args.command == "shifts":
        trajectory = lab.cmd_shifts(args.beta, args.theta, args.u0, args.z, args.T, args.output)
        print(f"{Fore.GREEN}Shift trajectory:{Style.RESET_ALL}")
        for row in trajectory.to_csv_rows():
            marker = f" {Fore.YELLOW}(repeat){Style.RESET_ALL}" if row["repeat"] == "1" else ""
            print(f"  t={row['t']:>3}  z*={row['z_star']}  s={row['bit']}{marker}")
        period = detect_period(trajectory)
        if period:
            print(f"{Fore.CYAN}Shifts settle into period {period}{Style.RESET_ALL}")

    elif args.command == "partition":
        partition = lab.cmd_partition(args.beta, args.theta, args.u0, args.T, args.output)
        print(f"{Fore.GREEN}{partition.count} intervals{Style.RESET_ALL}")
        for row in partition.to_csv_rows():
            print(f"  [{row['interval_lo']}, {row['interval_hi']})  {row['pattern']}")

    elif args.command == "approx":
        report = lab.cmd_approx(args.target, args.gamma, args.eps, args.K, args.output)
        print(f"{Fore.GREEN}Approximation report:{Style.RESET_ALL}")
        print(json.dumps(report, indent=2))

    elif args.command == "table1":
        rows = lab.cmd_table1(args.random_nets, args.output)
        print(f"{Fore.YELLOW}{'T':>3} {'n1':>4} {'theory':>8} {'constructed':>12} {'random mean':>12}{Style.RESET_ALL}")
        for row in rows:
            print(f"{row['T']:>3} {row['n1']:>4} {row['theory']:>8} {row['general_position']:>12} "
                  f"{row['random_mean']:>12}")
        print(f"  seed: {lab.config.seed}")

    elif args.command == "simulate":
        result = lab.cmd_simulate(args.network, parse_vector(args.x))
        for index, train in enumerate(result["trains"], start=1):
            print(f"{Fore.CYAN}layer {index}:{Style.RESET_ALL} {' '.join(train)}")
        print(f"{Fore.GREEN}output:{Style.RESET_ALL} {result['output']}")


def main(argv: Optional[List[str]] = None) -> int:
    """Main application entry point"""
    args = build_parser().parse_args(argv)
    if not args.quiet:
        print_banner()

    try:
        config = config_from_args(args)
        setup_logging(config)
        errors = config.validate_config()
        if errors:
            logger.error("Configuration errors found:")
            for error in errors:
                logger.error(f"  - {error}")
            print(f"{Fore.RED}ERROR: invalid configuration{Style.RESET_ALL}")
            return EXIT_VALIDATION

        lab = SpikeRegionsLab(config)
        run_command(lab, args)
        return EXIT_OK

    except ValueError as e:
        logger.error(f"Validation error: {e}")
        print(f"{Fore.RED}ERROR: {e}{Style.RESET_ALL}")
        return EXIT_VALIDATION
    except OSError as e:
        logger.error(f"I/O error: {e}")
        print(f"{Fore.RED}ERROR: {e}{Style.RESET_ALL}")
        return EXIT_IO
    except Exception as e:
        logger.error(f"Fatal error: {e}")
        print(f"{Fore.RED}Fatal error: {e}{Style.RESET_ALL}")
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print(f"\n{Fore.YELLOW}Application terminated{Style.RESET_ALL}")
        sys.exit(EXIT_UNEXPECTED)
