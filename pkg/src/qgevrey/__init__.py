"""Exact q-series expansions, Gevrey diagnostics and Borel-Pade-Laplace resummation."""

from .exact import LaurentPoly, ParseError, eval_at_one, l1_norm, parse_laurent, span
from .series import (
    Fps,
    exp_series,
    fps_add,
    fps_compose,
    fps_derive_in_x,
    fps_exp,
    fps_log1p,
    fps_mul,
    fps_sqrt1p,
)
from .habiro import HabiroElement, nicely_bounded_check, pochhammer, taylor_T, taylor_TZ
from .qholonomic import QRecurrence, advance, parse_recurrence, verify_solution
from .gevrey import GevreyReport, borel, borel_radius, gevrey_fit, inverse_borel
from .resum import RationalFunction, laplace_ray, median_sum, pade, poles, resum_series
from .specs import SeriesSpec

__version__ = "0.1.0"
