"""Short hybrid character sums along plane curves over F_p and their moment statistics."""

__version__ = "0.1.0"

from .algebra import BivarPoly, RationalMap, check_hypotheses, is_perfect_power
from .characters import AddChar, MultChar
from .field import PrimeField, make_field
from .geometry import PointTable, Rectangle, count_matching_tuples, enumerate_points
from .polyparse import parse_poly, parse_rational
from .stats import DistributionReport, GaussianModel, ks_distance
from .sums import ExperimentConfig, compute_series, moments, moments_via_binomial

__all__ = [
    "AddChar", "BivarPoly", "DistributionReport", "ExperimentConfig", "GaussianModel",
    "MultChar", "PointTable", "PrimeField", "RationalMap", "Rectangle", "check_hypotheses",
    "compute_series", "count_matching_tuples", "enumerate_points", "is_perfect_power",
    "ks_distance", "make_field", "moments", "moments_via_binomial", "parse_poly",
    "parse_rational",
]
