"""Mod-p Steenrod operations on F_p[x1, ..., xn], partition combinatorics for
T-regular partitions, and an executable checker for the identities linking them."""

from .action import apply_chi, apply_element, apply_expression, apply_hq, apply_milnor, apply_total_power
from .algebra import AlgebraElement, chi_expansion, milnor_basis, milnor_product
from .modp import binom_mod_p, multinom_mod_p
from .partitions import Partition, t_conjugate
from .poly import Polynomial, format_polynomial, parse_polynomial

__all__ = [
    "AlgebraElement",
    "Partition",
    "Polynomial",
    "apply_chi",
    "apply_element",
    "apply_expression",
    "apply_hq",
    "apply_milnor",
    "apply_total_power",
    "binom_mod_p",
    "chi_expansion",
    "format_polynomial",
    "milnor_basis",
    "milnor_product",
    "multinom_mod_p",
    "parse_polynomial",
    "t_conjugate",
]

__version__ = "0.1.0"
