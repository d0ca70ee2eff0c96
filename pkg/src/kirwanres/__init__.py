"""Exact residue formulas and Kirwan kernel tests for Hamiltonian torus actions."""

from .algebra import FactoredRational, LinForm, Poly, divides_product, exact_divide_linear
from .errors import (
    BrokenTransferChain,
    KirwanError,
    NonRegularValue,
    NotInSpan,
    ParseError,
    PoleOnCircleAxis,
    SchemaError,
    SearchExhausted,
    SpaceError,
    TiedMomentValues,
    VariableMismatch,
)
from .io import load_fixture
from .localization import (
    EquivClass,
    FixedPoint,
    Space,
    abbv_sum,
    constant_class,
    pairing,
    product_class,
    split_fixed_points,
    validate_class,
)
from .morse import (
    CanonicalBasis,
    decompose,
    divisibility_witness,
    kernel_test,
    residue_criterion,
    validate_basis,
)
from .parser import parse_fraction, parse_poly, print_fraction, print_poly
from .residue import res_gk, res_plus
from .stages import StageChain, StageSpace, ker_res_test, kernel_via_stages, stage_consistency_check
from .toric import build_fixture, cpn_space, generic_circle, product_space

__version__ = "0.1.0"

__all__ = [
    "FactoredRational",
    "LinForm",
    "Poly",
    "divides_product",
    "exact_divide_linear",
    "BrokenTransferChain",
    "KirwanError",
    "NonRegularValue",
    "NotInSpan",
    "ParseError",
    "PoleOnCircleAxis",
    "SchemaError",
    "SearchExhausted",
    "SpaceError",
    "TiedMomentValues",
    "VariableMismatch",
    "load_fixture",
    "EquivClass",
    "FixedPoint",
    "Space",
    "abbv_sum",
    "constant_class",
    "pairing",
    "product_class",
    "split_fixed_points",
    "validate_class",
    "CanonicalBasis",
    "decompose",
    "divisibility_witness",
    "kernel_test",
    "residue_criterion",
    "validate_basis",
    "parse_fraction",
    "parse_poly",
    "print_fraction",
    "print_poly",
    "res_gk",
    "res_plus",
    "StageChain",
    "StageSpace",
    "ker_res_test",
    "kernel_via_stages",
    "stage_consistency_check",
    "build_fixture",
    "cpn_space",
    "generic_circle",
    "product_space",
]
