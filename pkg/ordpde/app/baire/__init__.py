from .operators import (
    GridFunction,
    InterfaceRuleError,
    interface_value,
    interior_mask,
    is_normal_lsc,
    lower_baire,
    nlsc_regularize,
    upper_baire,
)

__all__ = [
    "GridFunction",
    "InterfaceRuleError",
    "interface_value",
    "interior_mask",
    "is_normal_lsc",
    "lower_baire",
    "nlsc_regularize",
    "upper_baire",
]
