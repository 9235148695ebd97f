from .characteristics import (
    CharacteristicsBlowUpError,
    CharacteristicsResult,
    NotQuasilinearError,
    QuasilinearForm,
    characteristics_solve,
    recognize_quasilinear,
)
from .consistency import ConsistencyReport, consistency_check, fd_tolerance

__all__ = [
    "CharacteristicsBlowUpError",
    "CharacteristicsResult",
    "NotQuasilinearError",
    "QuasilinearForm",
    "characteristics_solve",
    "recognize_quasilinear",
    "ConsistencyReport",
    "consistency_check",
    "fd_tolerance",
]
