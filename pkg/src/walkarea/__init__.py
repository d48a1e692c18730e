"""Exact enumeration of closed square-lattice walks by algebraic area."""

__version__ = "0.1.0"

from .area_enum import (  # noqa: E402
    composition_term,
    enumerate_areas,
    evaluate_at_flux,
    first_order_q,
    generating_polynomial,
    lambda_area_counts,
    lambda_table,
)
from .combinatorics import Composition, binomial, composition_coefficient, compositions  # noqa: E402
from .structures import AreaDistribution, CosinePolynomial, LaurentPolynomial, RationalFlux  # noqa: E402
from .walk_oracle import oracle_areas, oracle_areas_by_steps  # noqa: E402

__all__ = [
    "AreaDistribution",
    "Composition",
    "CosinePolynomial",
    "LaurentPolynomial",
    "RationalFlux",
    "binomial",
    "composition_coefficient",
    "composition_term",
    "compositions",
    "enumerate_areas",
    "evaluate_at_flux",
    "first_order_q",
    "generating_polynomial",
    "lambda_area_counts",
    "lambda_table",
    "oracle_areas",
    "oracle_areas_by_steps",
]
