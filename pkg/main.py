#!/usr/bin/env python3
import asyncio
import argparse
import sys
import json
import math

from src import __version__
from src.batch import run_command
from src.config import CHECK_NAMES, config, load_run_config
from src.errors import AccuracyError, ConfigParseError
from src.utils.logger import logger
from src.utils.table_io import columns_of, render_gnuplot, render_table, write_text

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARSE = 2
EXIT_ACCURACY = 3
DEFAULT_REPORT = "verify_report.json"


def print_banner():
    banner = """
    ╔═══════════════════════════════════════════════════════════╗
    ║                                                           ║
    ║                   CASIMIR FRICTION                        ║
    ║        Dissipation, Forces and Torques Between Plates     ║
    ║                                                           ║
    ╚═══════════════════════════════════════════════════════════╝
    """
    print(banner)


def print_checks(report: dict):
    print("\n" + "=" * 80)
    print("VERIFICATION")
    print("=" * 80 + "\n")

    print(f"{'check':<14}{'status':<9}{'achieved':>16}{'tolerance':>16}")
    for result in report.get("checks", []):
        achieved = result.get("achieved", math.nan)
        print(f"{result['check']:<14}{result['status'].upper():<9}{achieved:>16.6e}{result['tolerance']:>16.6e}")
        if result["status"] == "error":
            print(f"    {result.get('detail')}")

    print(f"\n{report.get('passed', 0)} passed, {len(report.get('failed', []))} failed")
    print("=" * 80)


def save_results(results: dict, output_file: str):
    try:
        with open(output_file, 'w') as f:
            json.dump(results, f, indent=2, default=str)
        logger.info(f"\nResults saved to: {output_file}")
    except Exception as e:
        logger.error(f"Failed to save results: {str(e)}")


def save_gnuplot(results: dict, output_file: str):
    x_index, y_index = results["series"]
    rows = [r for r in results["rows"] if not str(r[-1]).startswith("error")]
    text = render_gnuplot(columns_of(rows, x_index), columns_of(rows, y_index), results["header"][:1]
                          + [f"{results['columns'][x_index]} {results['columns'][y_index]}"])
    write_text(text, output_file)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Casimir friction between Drude plates: closed-form laws, band integration and checks",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py force --config configs/gold.ini               # Friction laws on the velocity grid
  python main.py torque --config configs/gold.ini -o torque.csv  # Disc torque table
  python main.py dissipation --config configs/loop.ini --threads 4
  python main.py dissipation --trajectory path.dat          # Single row for a trajectory file
  python main.py verify --checks torque,sinc_window         # Run selected acceptance checks
        """
    )

    parser.add_argument(
        "--version",
        action="version",
        version=f"casimir-friction {__version__}"
    )

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", "--config", type=str, default=config.config_path,
                        help="INI run configuration (defaults to unit natural parameters)")
    common.add_argument("-o", "--out", type=str, default=config.out,
                        help="Output file (CSV for tables, JSON report for verify)")
    common.add_argument("--threads", type=int, default=config.threads,
                        help="Worker threads (default: CF_THREADS or 1)")
    common.add_argument("--tolerance", type=float, default=config.tolerance,
                        help="Relative accuracy target for torque rows and the torque/qhat checks")
    common.add_argument("--gnuplot", type=str,
                        help="Also write a two-column data file for plotting")
    common.add_argument("-q", "--quiet", action="store_true",
                        help="Quiet mode - only write results")
    common.add_argument("--no-banner", action="store_true",
                        help="Don't show the banner")
    common.add_argument("--debug", action="store_true", default=config.debug,
                        help="Timestamped debug output")

    commands = parser.add_subparsers(dest="command", required=True)
    commands.add_parser("force", parents=[common], help="Friction force per area on the velocity grid")
    commands.add_parser("torque", parents=[common], help="Torque on a rotating disc")
    dissipation = commands.add_parser("dissipation", parents=[common],
                                      help="Energy dissipated over closed trajectories")
    dissipation.add_argument("--trajectory", type=str,
                             help="Trajectory table (t x y) with a '# units:' header")
    verify = commands.add_parser("verify", parents=[common], help="Run acceptance checks")
    verify.add_argument("--checks", type=str,
                        help=f"Comma-separated subset of: {', '.join(CHECK_NAMES)}")
    return parser


def parse_checks(text: str):
    names = [n.strip().lower() for n in text.split(",") if n.strip()]
    unknown = [n for n in names if n not in CHECK_NAMES]
    if unknown:
        raise ConfigParseError(f"unknown check(s): {', '.join(unknown)}", source="--checks")
    return names


async def main():
    parser = build_parser()
    args = parser.parse_args()

    # tables on stdout must not be mixed with progress output
    to_stdout = args.command != "verify" and args.out in (None, "-")
    logger.verbose = not args.quiet and not to_stdout
    logger.debug_enabled = args.debug

    if not args.no_banner and logger.verbose:
        print_banner()

    if args.threads < 1:
        logger.error("--threads must be at least 1")
        sys.exit(EXIT_PARSE)

    try:
        run_config = load_run_config(args.config)
        kwargs = {}
        if args.command == "dissipation" and args.trajectory:
            kwargs["trajectory_file"] = args.trajectory
        if args.command == "verify" and args.checks is not None:
            kwargs["names"] = parse_checks(args.checks)

        results = await run_command(args.command, run_config, threads=args.threads,
                                    tolerance=args.tolerance, verbose=logger.verbose, **kwargs)

        if args.command == "verify":
            if not args.quiet:
                print_checks(results)
            save_results(results, args.out or DEFAULT_REPORT)
        else:
            write_text(render_table(results["columns"], results["rows"], results["header"]), args.out)
            if args.gnuplot:
                save_gnuplot(results, args.gnuplot)

        if results["status"] == "success":
            sys.exit(EXIT_OK)
        elif results["status"] == "failure":
            sys.exit(EXIT_ACCURACY)
        else:
            sys.exit(EXIT_ERROR)

    except ConfigParseError as e:
        logger.error(str(e))
        sys.exit(EXIT_PARSE)
    except AccuracyError as e:
        logger.error(str(e))
        sys.exit(EXIT_ACCURACY)
    except KeyboardInterrupt:
        logger.info("\n\nRun interrupted by user.")
        sys.exit(130)
    except Exception as e:
        logger.error(f"\nFatal error: {str(e)}")
        if args.debug:
            import traceback
            traceback.print_exc()
        sys.exit(EXIT_ERROR)


if __name__ == "__main__":
    asyncio.run(main())
