"""Command-line surface of `python -m ordpde`.

`solve` builds the approximating sequence u_1..u_N and writes its reports. `compare` and `check`
take the same problem-file argument, for the characteristics cross-check and for validation alone.
"""
from __future__ import annotations
import argparse, os
from typing import Optional

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("spec", help="Path to a problem file (key = value lines)")
    parser.add_argument("--log-level", dest="log_level", choices=LOG_LEVELS, default=None)


def create_solver_argument_parser(prog: str = "ordpde") -> argparse.ArgumentParser:
    """Parser for the solve, compare and check subcommands; `--out` and `--grid` override the problem file."""
    parser = argparse.ArgumentParser(
        prog=prog,
        description="Generalized solutions of D_y u + F(x,y,u,D_x u) = 0, u(x,0) = f(x)",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python -m ordpde solve sample_data/advection.spec --out results --svg
  python -m ordpde solve sample_data/burgers.spec --grid 128 128
  python -m ordpde compare sample_data/advection.spec --oracle characteristics
  python -m ordpde check sample_data/advection.spec
        """,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="Build the approximating sequence and write reports")
    _add_common(solve)
    solve.add_argument("--out", dest="out_dir", default=None, help="Output directory (overrides the problem file)")
    solve.add_argument("--svg", action="store_true", help="Also write u_<N>.svg and decay.svg")
    solve.add_argument("--grid", nargs=2, type=int, metavar=("NX", "NY"), default=None, help="Evaluation grid cell counts")

    compare = sub.add_parser("compare", help="Cross-check against a classical oracle")
    _add_common(compare)
    compare.add_argument("--oracle", choices=["characteristics"], default="characteristics")
    compare.add_argument("--out", dest="out_dir", default=None)

    check = sub.add_parser("check", help="Parse and validate a problem file only")
    _add_common(check)
    return parser


def apply_log_level_override(log_level: Optional[str]) -> None:
    # read by init_logging, so this must run before it
    if log_level:
        os.environ["ORDPDE_LOG_LEVEL"] = log_level.upper()
__all__ = ["create_solver_argument_parser", "apply_log_level_override", "LOG_LEVELS"]
