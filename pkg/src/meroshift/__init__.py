"""Difference-operator eigen-solutions, Nevanlinna estimates and exact recurrence solving."""

from .expr import Expr, Z, derivative, shift, substitute, to_text
from .evaluate import evaluate, evaluate_many, log_abs
from .nevanlinna import (
    RadialGrid,
    borel_estimate,
    characteristic,
    deficiency,
    order_estimate,
    proximity,
)
from .operators import (
    ExprRecurrence,
    LinearDifferenceOperator,
    LinearDifferentialOperator,
    delta_n,
    residual,
)
from .parse import ParseError, parse
from .poly import ComplexPoly, RatPoly, gcd, integer_roots, resultant
from .rational import PolynomialRecurrence, dispersion, polynomial_solutions, rational_solutions, universal_denominator
from .roots import RootSet, roots
from .sharing import shares_value
from .solutions import PeriodicAtom, build_general_solution, verify_general_solution
from .zeros import count_poles, count_zeros

__version__ = "0.1.0"

__all__ = [
    "ComplexPoly",
    "Expr",
    "ExprRecurrence",
    "LinearDifferenceOperator",
    "LinearDifferentialOperator",
    "ParseError",
    "PeriodicAtom",
    "PolynomialRecurrence",
    "RadialGrid",
    "RatPoly",
    "RootSet",
    "Z",
    "borel_estimate",
    "build_general_solution",
    "characteristic",
    "count_poles",
    "count_zeros",
    "deficiency",
    "delta_n",
    "derivative",
    "dispersion",
    "evaluate",
    "evaluate_many",
    "gcd",
    "integer_roots",
    "log_abs",
    "order_estimate",
    "parse",
    "polynomial_solutions",
    "proximity",
    "rational_solutions",
    "residual",
    "resultant",
    "roots",
    "shares_value",
    "shift",
    "substitute",
    "to_text",
    "universal_denominator",
    "verify_general_solution",
]
