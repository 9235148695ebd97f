from .extended import ExtendedArithmeticError, ExtendedReal
from .geometry import (
    SNAP_TOL,
    Domain,
    DomainError,
    SampleGrid,
    gamma_mask,
    gamma_node_fraction,
    gamma_proximity_mask,
)
from .pieces import AffinePiece, InitialPiece, SmoothPiece, residual_of
from .tiled_function import SingularPointError, TiledFunction

__all__ = [
    "ExtendedArithmeticError",
    "ExtendedReal",
    "SNAP_TOL",
    "Domain",
    "DomainError",
    "SampleGrid",
    "gamma_mask",
    "gamma_node_fraction",
    "gamma_proximity_mask",
    "AffinePiece",
    "InitialPiece",
    "SmoothPiece",
    "residual_of",
    "SingularPointError",
    "TiledFunction",
]
