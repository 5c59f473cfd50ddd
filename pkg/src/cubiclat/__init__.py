"""Ideals of a totally real cubic order, their congruence-root coordinates, and
the statistics of the associated intersection points."""

from .congruence import RootSet, brute_force_roots, roots_mod_m, roots_mod_prime_power
from .errors import CubicLatError
from .field import (DEFAULT_POLY, CubicPoly, OrderElement, basis_matrix_g0, discriminant,
                    is_irreducible, maximality_check, mul, norm, norm_trace, parse_poly,
                    real_roots)
from .ideals import (IdealHNF, enumerate_ideal_tuples, hnf_reduce, ideal_product, is_ideal,
                     lambda_from_roots, verify_obstruction)
from .intersection import (IntersectionPoint, affine_fiber_coords, compute_points,
                           intersection_point, reduce_sl2)
from .stats import StatsReport, badlu_scan, build_report, chi_square_bins, cusp_fraction, ks_uniform
from .units import (UnitSystem, enumerate_domain, find_totally_positive_generators,
                    log_embedding, make_unit_system, reduce_to_domain)

__version__ = "0.1.0"

__all__ = [
    "CubicLatError", "CubicPoly", "DEFAULT_POLY", "IdealHNF", "IntersectionPoint",
    "OrderElement", "RootSet", "StatsReport", "UnitSystem", "affine_fiber_coords",
    "badlu_scan", "basis_matrix_g0", "brute_force_roots", "build_report",
    "chi_square_bins", "compute_points", "cusp_fraction", "discriminant",
    "enumerate_domain", "enumerate_ideal_tuples", "find_totally_positive_generators",
    "hnf_reduce", "ideal_product", "intersection_point", "is_ideal", "is_irreducible",
    "ks_uniform", "lambda_from_roots", "log_embedding", "make_unit_system",
    "maximality_check", "mul", "norm", "norm_trace", "parse_poly", "real_roots",
    "reduce_sl2", "reduce_to_domain", "roots_mod_m", "roots_mod_prime_power",
    "verify_obstruction",
]
