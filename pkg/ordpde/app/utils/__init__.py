from .logging_config import init_logging
from .cli_utils import create_solver_argument_parser, apply_log_level_override

__all__ = ["init_logging", "create_solver_argument_parser", "apply_log_level_override"]
