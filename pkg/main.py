import argparse
import os
import sys
from pathlib import Path

from dotenv import load_dotenv
from loguru import logger

from src.commands import CommandService
from src.settings import get_settings

# load environment variables
load_dotenv()

settings = get_settings()

# get defaults from environment variables
default_log_level = os.getenv("JOINFOREST_LOG_LEVEL", settings.log_level).upper()
default_seed = int(os.getenv("JOINFOREST_SEED", settings.seed))


def configure_logging(level: str) -> None:
    logger.remove()
    logger.add(
        sys.stderr,
        level=level,
        colorize=True,
        format="<green>{time:HH:mm:ss}</green> | <level>{level}</level> | <level>{message}</level>",
    )


def build_parser() -> argparse.ArgumentParser:
    """
    the command line: one subcommand per verb, shared flags accepted after the verb.

    returns:
        argparse.ArgumentParser
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=default_seed, help="seed for sampled checks")
    common.add_argument("--output", "-o", type=str, default=None, help="write the report here instead of stdout")
    common.add_argument(
        "--log-level",
        choices=["TRACE", "DEBUG", "INFO", "WARNING", "ERROR"],
        default=default_log_level,
        help="log level of the stderr sink",
    )
    bounds = argparse.ArgumentParser(add_help=False)
    bounds.add_argument("--depth", type=int, default=None, help="depth bound")
    bounds.add_argument("--width", type=int, default=None, help="width bound per arrangement")

    parser = argparse.ArgumentParser(prog="joinforest", description="join-trees, description schemes and quasi-trees")
    verbs = parser.add_subparsers(dest="verb", required=True)

    p = verbs.add_parser("eval", parents=[common, bounds], help="value of a regular term (equation file)")
    p.add_argument("file")
    p.add_argument("--signature", choices=["F", "F'", "F''"], default="F")

    p = verbs.add_parser("truncate", parents=[common, bounds], help="truncation of a regular term")
    p.add_argument("file")
    p.add_argument("--signature", choices=sorted(["F", "F'", "F''", "A"]), default="F")

    p = verbs.add_parser("scheme", parents=[common], help="description scheme read off a regular term")
    p.add_argument("file")
    p.add_argument("--kind", choices=["sbj", "sj", "soj"], default=None)

    p = verbs.add_parser("unfold", parents=[common, bounds], help="bounded unfolding of a scheme")
    p.add_argument("file")

    p = verbs.add_parser("describe", parents=[common], help="check that a scheme describes a tree or a term's value")
    p.add_argument("scheme")
    p.add_argument("file", help="structured tree file, or an equation file ending in .eq")
    p.add_argument("--run", type=str, default=None, help="run file (state and dir records)")
    p.add_argument("--bound", type=int, default=None, help="node budget for infinite values")

    p = verbs.add_parser("minimize", parents=[common], help="canonical minimal scheme")
    p.add_argument("file")

    p = verbs.add_parser("iso", parents=[common, bounds], help="isomorphism of two schemes")
    p.add_argument("first")
    p.add_argument("second")

    p = verbs.add_parser("axioms", parents=[common], help="betweenness axioms")
    p.add_argument("file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exhaustive", action="store_true", help="check every tuple (default)")
    mode.add_argument("--sample", type=int, default=None, help="check tuples over a sample of this many nodes")

    p = verbs.add_parser("order", parents=[common], help="linear order from its betweenness and two anchors")
    p.add_argument("file")
    p.add_argument("--anchors", nargs=2, required=True, metavar=("A", "B"))

    p = verbs.add_parser("root", parents=[common], help="join-tree of a quasi-tree rooted at a node")
    p.add_argument("file")
    p.add_argument("node")
    p.add_argument("--structure", action="store_true", help="also structure the rooted tree")

    p = verbs.add_parser("median", parents=[common], help="median of three nodes of a quasi-tree")
    p.add_argument("file")
    p.add_argument("nodes", nargs=3)

    p = verbs.add_parser("rankwidth", parents=[common], help="discrete rank-width of a graph")
    p.add_argument("file")
    p.add_argument("--max-n", type=int, default=None, dest="max_n")

    p = verbs.add_parser("cutrank", parents=[common], help="cut-rank of a vertex bipartition")
    p.add_argument("file")
    p.add_argument("--U", nargs="*", default=[], dest="U")
    p.add_argument("--W", nargs="*", default=[], dest="W")

    p = verbs.add_parser("dot", parents=[common, bounds], help="DOT rendering")
    p.add_argument("file")
    p.add_argument("--as", choices=["tree", "btw", "graph", "scheme"], default=None, dest="input_type")
    p.add_argument("--root", type=str, default=None, help="root for betweenness files")
    p.add_argument("--layout", type=str, default=None, help="layout file for graphs")
    p.add_argument("--plain", action="store_true", help="draw the graph itself, not a layout")
    p.add_argument("--max-n", type=int, default=None, dest="max_n")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level)
    status, report = CommandService(settings).run(args)
    if report:
        if args.output:
            Path(args.output).write_text(report)
            logger.info(f"report written to {args.output}")
        else:
            sys.stdout.write(report)
    return status


if __name__ == "__main__":
    sys.exit(main())
