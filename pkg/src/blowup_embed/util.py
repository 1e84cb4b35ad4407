from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Union

Number = Union[int, float, Fraction]


def as_fraction(x: Number) -> Fraction:
    """Exact rational for a threshold. Floats go through their shortest repr,
    so ``0.2`` becomes ``1/5`` rather than the nearest binary double."""
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite threshold {x}")
        return Fraction(repr(x))
    raise TypeError(f"expected a real number, got {type(x).__name__}")


def ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def floor_frac(x: Fraction) -> int:
    return x.numerator // x.denominator
