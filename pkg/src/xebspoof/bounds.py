"""Closed-form bounds on spoofed-XEB scores, success odds, and sample counts.

Everything here is a pure function of small integers and probabilities.  All
exponentials go through expm1/log1p (or exact integer powers) so the bounds
stay meaningful at scales far beyond what a statevector can check, where naive
evaluation would round to 0 or overflow to inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

_LN2 = math.log(2.0)


def _check_count(value: int, name: str) -> int:
    if not isinstance(value, (int,)) or isinstance(value, bool) or value < 0:
        raise ValueError(f"{name} must be a non-negative integer, got {value!r}")
    return value


def _check_unit(value: float, name: str, *, closed: bool) -> float:
    value = float(value)
    ok = 0.0 <= value <= 1.0 if closed else 0.0 < value < 1.0
    if not math.isfinite(value) or not ok:
        span = "[0, 1]" if closed else "(0, 1)"
        raise ValueError(f"{name} must lie in {span}, got {value!r}")
    return value


def theorem_bound(m: int, d: int) -> float:
    """Guaranteed average XEB score when spoofing m depth-d outputs.

    Evaluates (1 + 15**-d)**m - 1 stably; at d=0 this is the ceiling 2**m - 1.
    """
    m = _check_count(m, "m")
    d = _check_count(d, "d")
    return math.expm1(m * math.log1p(15.0**-d))


def success_prob_bound(m: int, d: int, epsilon: float) -> float:
    """Lower bound on the chance one circuit scores above epsilon times the mean.

    Markov on the spoof score, whose ceiling is 2**m: the probability of
    exceeding epsilon * theorem_bound(m, d) is at least
    (1 - epsilon) * theorem_bound(m, d) / 2**m.
    """
    m = _check_count(m, "m")
    d = _check_count(d, "d")
    epsilon = _check_unit(epsilon, "epsilon", closed=True)
    # ((1+15^-d)/2)^m - 2^-m never overflows, unlike theorem_bound / 2^m
    ratio = math.exp(m * (math.log1p(15.0**-d) - _LN2)) - math.exp(-m * _LN2)
    return (1.0 - epsilon) * ratio


def chebyshev_samples(var: float, epsilon: float, delta: float) -> int:
    """Samples guaranteeing the empirical XEB sits within epsilon of its mean
    with probability at least 1 - delta, via Chebyshev: ceil(var / (eps^2 delta)).
    """
    if not math.isfinite(var) or var < 0:
        raise ValueError(f"var must be finite and non-negative, got {var!r}")
    epsilon = _check_unit(epsilon, "epsilon", closed=False)
    delta = _check_unit(delta, "delta", closed=False)
    if var == 0.0:
        return 1
    # exact rational ceiling; float division here could round 1000 up to 1001
    need = Fraction(var) / (Fraction(epsilon) ** 2 * Fraction(delta))
    return max(1, math.ceil(need))


def variance_cp_bound(m: int, n: int, cp: float) -> float:
    """Upper bound 2**(m+n) * cp on the variance of per-sample XEB scores."""
    m = _check_count(m, "m")
    n = _check_count(n, "n")
    cp = _check_unit(cp, "cp", closed=True)
    if cp == 0.0:
        return 0.0
    if m + n <= 50:
        return cp * 2 ** (m + n)
    return 2.0 ** (m + n + math.log2(cp))


def type1_path_bound(n: int, d: int) -> float:
    """Domain-wall contribution bound (1 + (4/5)**d)**(n/2) on 2**n * E[CP].

    Equals 1 + sum_t C(n/2, t) * (4/5)**(d*t) by the binomial theorem; decays
    to at most sqrt(e) once d reaches log(n) / log(5/4).
    """
    n = _check_count(n, "n")
    if n % 2:
        raise ValueError(f"n must be even, got {n}")
    d = _check_count(d, "d")
    return math.exp((n // 2) * math.log1p(0.8**d))


@dataclass(frozen=True)
class BoundInputs:
    """Validated parameter bundle for a full bounds report.

    ``var`` defaults to the collision-probability bound when absent; ``L``
    enables the m <= n // L sanity check when the caller knows the cone size.
    """

    n: int
    d: int
    m: int
    epsilon: float
    delta: float
    cp: float
    L: int | None = None
    var: float | None = None

    def __post_init__(self):
        _check_count(self.n, "n")
        _check_count(self.d, "d")
        _check_count(self.m, "m")
        _check_unit(self.epsilon, "epsilon", closed=False)
        _check_unit(self.delta, "delta", closed=False)
        if not (2.0**-self.n <= self.cp <= 1.0):
            raise ValueError(
                f"cp must lie in [2**-{self.n}, 1], got {self.cp!r}"
            )
        if self.L is not None:
            if self.L < 1:
                raise ValueError(f"L must be positive, got {self.L}")
            if self.m > self.n // self.L:
                raise ValueError(
                    f"m={self.m} exceeds n // L = {self.n // self.L} disjoint cones"
                )
        if self.var is not None and (not math.isfinite(self.var) or self.var < 0):
            raise ValueError(f"var must be finite and non-negative, got {self.var!r}")


def bounds_report(inputs: BoundInputs) -> dict:
    """All five bounds for one parameter set, ready for JSON emission."""
    var = (
        inputs.var
        if inputs.var is not None
        else variance_cp_bound(inputs.m, inputs.n, inputs.cp)
    )
    return {
        "theorem_bound": theorem_bound(inputs.m, inputs.d),
        "success_prob_bound": success_prob_bound(inputs.m, inputs.d, inputs.epsilon),
        "variance_cp_bound": var,
        "chebyshev_samples": chebyshev_samples(var, inputs.epsilon, inputs.delta),
        "type1_path_bound": type1_path_bound(inputs.n, inputs.d),
    }
