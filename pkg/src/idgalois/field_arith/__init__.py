from .gf import GF, FieldError, FiniteField, is_prime, parse_field
from .lucas import lucas_binom
from .parser import ParseError, parse_expr, parse_int_poly
from .ratfunc import FieldMismatch, RatFunc, ratfunc_arith
from .series import TruncSeries, hensel_root

__all__ = [
    "GF",
    "FieldError",
    "FieldMismatch",
    "FiniteField",
    "ParseError",
    "RatFunc",
    "TruncSeries",
    "hensel_root",
    "is_prime",
    "lucas_binom",
    "parse_expr",
    "parse_field",
    "parse_int_poly",
    "ratfunc_arith",
]
