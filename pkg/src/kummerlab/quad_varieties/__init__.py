"""Quadratic fields, local solubility and points on y^2 - a z^2 = t^r + k."""

from .forms import BinaryForm, QuadField, class_list, quad_field, reduced_forms
from .local import INF, hensel_lift, hilbert_symbol, primitive_local_point
from .points import (
    IntegralPoint,
    VarietyInstance,
    conic_rational_point,
    density_report,
    find_fiber_prime,
    integral_point_search,
    represent_by_form,
)

__all__ = [
    "BinaryForm",
    "QuadField",
    "class_list",
    "quad_field",
    "reduced_forms",
    "INF",
    "hensel_lift",
    "hilbert_symbol",
    "primitive_local_point",
    "IntegralPoint",
    "VarietyInstance",
    "conic_rational_point",
    "density_report",
    "find_fiber_prime",
    "integral_point_search",
    "represent_by_form",
]
