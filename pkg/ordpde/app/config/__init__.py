from .solver_settings import SolverSettings, load_solver_settings

__all__ = ["SolverSettings", "load_solver_settings"]
