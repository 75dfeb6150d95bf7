"""Yamabe flow on periodic n-tori (n >= 3).

Fields are numpy arrays shaped like the grid (axis 0 slowest). Wherever a
field is expected, an expression string such as ``"1+0.3*sin(2*pi*x1)"`` or
a number is accepted too.
"""

from ._core import (
    Background,
    TimeSeries,
    background,
    brendle_sup_check,
    c_psi,
    dirichlet_total,
    dr_dt_residual,
    estimate_yamabe_constant,
    gronwall_bound,
    run_experiment,
    run_flow,
    scalar_curvature,
    scalar_evolution_residual,
    scalar_lower_check,
    total_scalar,
    volume,
    volume_bounds_check,
    yamabe_quotient,
    ye_max_check,
    ye_min_check,
)

__all__ = [
    "Background",
    "TimeSeries",
    "background",
    "brendle_sup_check",
    "c_psi",
    "dirichlet_total",
    "dr_dt_residual",
    "estimate_yamabe_constant",
    "gronwall_bound",
    "run_experiment",
    "run_flow",
    "scalar_curvature",
    "scalar_evolution_residual",
    "scalar_lower_check",
    "total_scalar",
    "volume",
    "volume_bounds_check",
    "yamabe_quotient",
    "ye_max_check",
    "ye_min_check",
]
