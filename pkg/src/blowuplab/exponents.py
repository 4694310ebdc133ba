"""Critical-exponent formulas and the blow-up range classifier.

Thresholds use the convention that a vanishing positive part in a denominator
yields an infinite threshold, so `p <= threshold` stays meaningful at the
degenerate parameter points (n = 1, or n*(1-beta) <= 2).
"""

import math
import operator
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "Threshold",
    "RegionVerdict",
    "conjugate_exponent",
    "strauss_exponent",
    "kato_threshold",
    "beta_threshold",
    "classify",
    "scaling_d",
    "local_existence_bound",
]


@dataclass(frozen=True)
class Threshold:
    """Upper endpoint of a blow-up exponent range; ``value`` may be ``inf``.

    Infinity is a deliberate state produced by a nonpositive denominator,
    never an overflow artifact, and compares greater than every real.
    """

    value: float

    def __post_init__(self):
        if not self.value > 1.0:
            raise ValueError(f"threshold must exceed 1, got {self.value}")

    @property
    def is_finite(self) -> bool:
        return math.isfinite(self.value)

    def admits(self, p: float) -> bool:
        """Whether the exponent p sits in the blow-up range (1, value]."""
        return 1.0 < p <= self.value

    def __float__(self) -> float:
        return float(self.value)


class RegionVerdict(Enum):
    THEOREM_BLOWUP = "TheoremBlowup"
    OUTSIDE_THEOREM = "OutsideTheorem"


def _as_int(n) -> int:
    try:
        return operator.index(n)
    except TypeError:
        raise TypeError(f"expected an integer, got {n!r}") from None


def conjugate_exponent(p: float) -> float:
    """Holder conjugate p / (p - 1); requires p > 1."""
    if not p > 1.0:
        raise ValueError(f"conjugate exponent needs p > 1, got {p}")
    return p / (p - 1.0)


def strauss_exponent(n) -> float:
    """Positive root of (n-1) p^2 - (n+1) p - 2 = 0, defined for n >= 2."""
    n = _as_int(n)
    if n < 2:
        raise ValueError(f"strauss_exponent needs n >= 2, got {n}")
    return (n + 1 + math.sqrt(n * n + 10 * n - 7)) / (2 * (n - 1))


def kato_threshold(n) -> Threshold:
    """(n+1) / (n-1) with the positive-part convention: infinite at n = 1."""
    n = _as_int(n)
    if n < 1:
        raise ValueError(f"kato_threshold needs n >= 1, got {n}")
    if n == 1:
        return Threshold(math.inf)
    return Threshold((n + 1) / (n - 1))


def beta_threshold(n, beta: float) -> Threshold:
    """Blow-up threshold for the damping power beta.

    For beta >= -1 this is the Kato threshold; for beta < -1 it is
    (n(1-beta) + 2) / (n(1-beta) - 2), infinite when the denominator is
    nonpositive.  The two branches agree at beta = -1.
    """
    n = _as_int(n)
    if n < 1:
        raise ValueError(f"beta_threshold needs n >= 1, got {n}")
    if beta >= -1.0:
        return kato_threshold(n)
    den = n * (1.0 - beta) - 2.0
    if den <= 0.0:
        return Threshold(math.inf)
    return Threshold((n * (1.0 - beta) + 2.0) / den)


def classify(n, beta: float, p: float) -> RegionVerdict:
    """Whether (n, beta, p) lies in the proven finite-time blow-up range."""
    if not p > 1.0:
        raise ValueError(f"classify needs p > 1, got {p}")
    if beta_threshold(n, beta).admits(p):
        return RegionVerdict.THEOREM_BLOWUP
    return RegionVerdict.OUTSIDE_THEOREM


def scaling_d(beta: float) -> float:
    """Space-scale exponent used by the window construction: 1 for
    beta >= -1, else (1 - beta) / 2.  Continuous across the branch point."""
    if beta >= -1.0:
        return 1.0
    return (1.0 - beta) / 2.0


def local_existence_bound(n) -> float:
    """Upper bound n / (n-2) on p for the energy-space local theory
    (n >= 3); infinite in one and two dimensions.

    Exposed for sweep configuration; `classify` deliberately does not
    intersect with it.
    """
    n = _as_int(n)
    if n < 1:
        raise ValueError(f"local_existence_bound needs n >= 1, got {n}")
    if n <= 2:
        return math.inf
    return n / (n - 2)
