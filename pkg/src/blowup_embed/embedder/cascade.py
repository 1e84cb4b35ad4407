"""The parameter cascade d > d1 > d2 > d3 > eps3 > eps2 > eps1 > eps.

``d1`` .. ``eps`` stand for d', d'', d''', eps''', eps'', eps', eps. Every
derived value is a power of ``base = delta * d**Delta / (8 r Delta)``; the
exponents reach 328, so values are kept as natural logs (and as exact
rationals on demand) rather than floats, which would underflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Mapping, Optional

from ..util import Number, as_fraction

NAMES = ("d1", "d2", "d3", "eps3", "eps2", "eps1", "eps")
EXPONENTS = {"d1": 1, "d2": 3, "d3": 6, "eps3": 12, "eps2": 50, "eps1": 164, "eps": 328}

PAPER = "paper-exact"
PRACTICAL = "practical-override"

# Values used by the embedder in practical mode unless the caller overrides
# them. Calibrated on random triangle blow-ups (N ~ 100-200, d ~ 0.6).
PRACTICAL_DEFAULTS: Dict[str, float] = {
    "d1": 0.09,
    "d2": 0.05,
    "d3": 0.01,
    "eps3": 0.01,
    "eps2": 0.05,
    "eps1": 0.5,
    "eps": 0.08,
}


@dataclass(frozen=True)
class ParameterCascade:
    d: Fraction
    delta: Fraction
    Delta: int
    r: int
    log_base: float
    logs: Dict[str, float]
    mode: str = PAPER
    overrides: Dict[str, Fraction] = field(default_factory=dict)

    @property
    def base(self) -> Fraction:
        return self.delta * self.d**self.Delta / (8 * self.r * self.Delta)

    def value(self, name: str) -> Fraction:
        """Exact value of a derived parameter (override if one was given)."""
        if name in self.overrides:
            return self.overrides[name]
        return self.base ** EXPONENTS[name]

    def log10(self, name: str) -> float:
        return self.logs[name] / math.log(10)

    def as_float(self, name: str) -> float:
        """Float view; 0.0 when the value underflows."""
        return math.exp(self.logs[name])

    def to_dict(self) -> Dict[str, object]:
        return {
            "mode": self.mode,
            "d": float(self.d),
            "delta": float(self.delta),
            "Delta": self.Delta,
            "r": self.r,
            "log10_base": self.log_base / math.log(10),
            "log10": {name: self.log10(name) for name in NAMES},
            "overrides": {k: float(v) for k, v in sorted(self.overrides.items())},
        }


def compute_cascade(
    d: Number,
    delta: Number,
    Delta: int,
    r: int,
    overrides: Optional[Mapping[str, Number]] = None,
) -> ParameterCascade:
    d_q, delta_q = as_fraction(d), as_fraction(delta)
    if not 0 < d_q <= 1 or not 0 < delta_q <= 1:
        raise ValueError("d and delta must lie in (0, 1]")
    if int(Delta) != Delta or Delta < 1:
        raise ValueError("Delta must be an integer >= 1")
    if int(r) != r or r < 2:
        raise ValueError("r must be an integer >= 2")
    Delta, r = int(Delta), int(r)
    lb = math.log(delta_q) + Delta * math.log(d_q) - math.log(8 * r * Delta)
    logs: Dict[str, float] = {"d1": lb}
    logs["d2"] = 3 * logs["d1"]
    logs["d3"] = 2 * logs["d2"]
    logs["eps3"] = 2 * logs["d3"]
    logs["eps2"] = 2 * lb + 2 * logs["d3"] + 3 * logs["eps3"]
    logs["eps1"] = 2 * lb + 2 * logs["d3"] + 3 * logs["eps2"]
    logs["eps"] = 2 * logs["eps1"]
    exact: Dict[str, Fraction] = {}
    for name, val in (overrides or {}).items():
        if name not in EXPONENTS:
            raise ValueError(f"unknown cascade parameter {name!r}; expected one of {', '.join(NAMES)}")
        q = as_fraction(val)
        if not 0 < q <= 1:
            raise ValueError(f"override {name}={val} must lie in (0, 1]")
        exact[name] = q
        logs[name] = math.log(q)
    return ParameterCascade(d_q, delta_q, Delta, r, lb, logs, PRACTICAL if exact else PAPER, exact)
