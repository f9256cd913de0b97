"""Exact and rigorous-numeric arithmetic: rationals, cyclotomic fields, complex balls."""

from uniqset.exactnum.ball import (
    BallComplex,
    RealInterval,
    ball_sum,
    cyclo_to_ball,
    exp_i_interval,
    exp_i_rational,
    pi_enclosure,
)
from uniqset.exactnum.cyclotomic import (
    CyclotomicNumber,
    cyclo_arith,
    cyclo_is_zero,
    cyclo_root,
)
from uniqset.exactnum.expsum import ExpSum
from uniqset.exactnum.gaussian import (
    ONE,
    ZERO,
    GaussianRational,
    Rational,
    as_rational,
    rational_sqrt_upper,
)

__all__ = [
    "Rational",
    "GaussianRational",
    "ZERO",
    "ONE",
    "as_rational",
    "rational_sqrt_upper",
    "CyclotomicNumber",
    "cyclo_root",
    "cyclo_arith",
    "cyclo_is_zero",
    "BallComplex",
    "RealInterval",
    "ball_sum",
    "cyclo_to_ball",
    "exp_i_rational",
    "exp_i_interval",
    "pi_enclosure",
    "ExpSum",
]
