"""Paramodular level of the symmetric cube lift of an elliptic curve over Q."""

from .padic import legendre, quad_char_class, square_class, unit_part, valuation
from .weierstrass import Curve, Transformation, invariants, is_minimal_at, minimize, transform
from .local import classify_curve_at, classify_prime, reduction_type
from .sym3 import assemble_global, is_cm, sym3_conductor_general, sym3_local, sym3_matrix, sym3_similitude_form
from .report import AnalyzeOptions, analyze, batch, parse_curve

__version__ = "0.1.0"
