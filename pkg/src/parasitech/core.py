"""Domain types and the ordinal evolution scale.

A technology is observed through a Functional Measure of Technology (FMT): a
technical characteristic sampled over calendar years. A *host* is the master
complex system (e.g. the smartphone); a *parasite* is a subsystem that only
functions and evolves inside the host (e.g. the camera module).

The evolutionary coefficient B is the log-log slope of the parasite's FMT on
the host's FMT. Its position relative to 1 grades the evolution of the whole
complex system:

    grade 1 (Low)      B < 1   parasitism   -> underdevelopment  "/"
    grade 2 (Average)  B = 1   mutualism    -> growth            "+"
    grade 3 (High)     B > 1   symbiosis    -> development       "!"
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .errors import InsufficientDataError, InvalidInputError

ROLES = ("host", "parasite")

# grade -> (interaction mode, evolution label, symbol, forecast string)
EVOLUTION_SCALE = {
    1: (
        "parasitism",
        "underdevelopment",
        "/",
        "Complex system of technology evolves slowly over time",
    ),
    2: (
        "mutualism",
        "growth",
        "+",
        "Complex system of technology has a steady-state growth",
    ),
    3: (
        "symbiosis",
        "development",
        "!",
        "Complex system of technology is likely to evolve rapidly",
    ),
}

GRADE_NAMES = {1: "Low", 2: "Average", 3: "High"}

# Half-width of the exact-comparison band around B = 1. An estimated
# coefficient landing exactly on 1 is measure-zero, so grade 2 is only
# reachable in exact mode through this band (or through the t-test mode).
B_ONE_EPSILON = 1e-9


@dataclass(frozen=True)
class TechSeries:
    """A named, unit-annotated FMT time series.

    ``observations`` is a sequence of ``(t, value)`` pairs with strictly
    increasing real-valued times (calendar years CE, fractional allowed) and
    strictly positive values, so the natural log is always defined.
    """

    name: str
    role: str
    units: str
    observations: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if self.role not in ROLES:
            raise InvalidInputError(
                f"series {self.name!r}: role must be one of {ROLES}, got {self.role!r}"
            )
        obs = tuple((float(t), float(v)) for t, v in self.observations)
        if not obs:
            raise InvalidInputError(f"series {self.name!r}: no observations")
        times = [t for t, _ in obs]
        values = [v for _, v in obs]
        if not all(math.isfinite(t) for t in times):
            raise InvalidInputError(f"series {self.name!r}: non-finite time value")
        if any(t2 <= t1 for t1, t2 in zip(times, times[1:])):
            raise InvalidInputError(
                f"series {self.name!r}: observation times must be strictly increasing"
            )
        if not all(math.isfinite(v) and v > 0 for v in values):
            raise InvalidInputError(
                f"series {self.name!r}: every value must be a finite positive real"
            )
        object.__setattr__(self, "observations", obs)

    @classmethod
    def from_columns(
        cls,
        name: str,
        role: str,
        units: str,
        times: Iterable[float],
        values: Iterable[float],
    ) -> "TechSeries":
        return cls(name, role, units, tuple(zip(times, values)))

    @property
    def n(self) -> int:
        return len(self.observations)

    @property
    def times(self) -> np.ndarray:
        return np.array([t for t, _ in self.observations])

    @property
    def values(self) -> np.ndarray:
        return np.array([v for _, v in self.observations])

    def log_values(self) -> np.ndarray:
        return np.log(self.values)

    def scaled(self, factor: float) -> "TechSeries":
        """Return a copy with every value multiplied by ``factor`` (> 0)."""
        if not (math.isfinite(factor) and factor > 0):
            raise InvalidInputError("scale factor must be a positive finite real")
        return TechSeries.from_columns(
            self.name, self.role, self.units, self.times, self.values * factor
        )

    def restrict(self, t_max: float) -> "TechSeries":
        """Return the sub-series with observation times <= ``t_max``."""
        kept = tuple((t, v) for t, v in self.observations if t <= t_max)
        if not kept:
            raise InsufficientDataError(
                f"series {self.name!r}: no observations at or before t={t_max}"
            )
        return TechSeries(self.name, self.role, self.units, kept)


@dataclass(frozen=True)
class BTest:
    """Two-sided t-test of an estimated coefficient against 1."""

    t_stat: float
    p_value: float
    alpha: float
    df: int


@dataclass(frozen=True)
class EvolutionClass:
    """A point on the ordinal evolution scale, fully populated."""

    grade: int
    mode: str
    evolution_label: str
    symbol: str
    prediction: str
    b_estimate: float
    test: BTest | None = None
    warnings: tuple[str, ...] = field(default=())


def _make_class(
    grade: int, b: float, test: BTest | None, warnings: tuple[str, ...]
) -> EvolutionClass:
    mode, label, symbol, prediction = EVOLUTION_SCALE[grade]
    return EvolutionClass(
        grade=grade,
        mode=mode,
        evolution_label=label,
        symbol=symbol,
        prediction=prediction,
        b_estimate=float(b),
        test=test,
        warnings=warnings,
    )


def classify_point(b: float) -> EvolutionClass:
    """Classify an evolutionary coefficient by exact comparison against 1.

    Grade 1 if ``b < 1 - eps``, grade 2 if ``|b - 1| <= eps``, grade 3 if
    ``b > 1 + eps``, with a fixed ``eps`` of 1e-9. A negative coefficient is
    outside the model's assumptions (growth rates are positive); it still
    classifies as grade 1 but carries a warning.
    """
    b = float(b)
    if not math.isfinite(b):
        raise InvalidInputError(f"evolutionary coefficient must be finite, got {b!r}")
    warnings: tuple[str, ...] = ()
    if b < 0:
        warnings = (
            "negative evolutionary coefficient: the growth model assumes "
            "positive rates; grade 1 assigned by convention",
        )
    if b < 1.0 - B_ONE_EPSILON:
        grade = 1
    elif b > 1.0 + B_ONE_EPSILON:
        grade = 3
    else:
        grade = 2
    return _make_class(grade, b, None, warnings)


def classify_with_test(
    b: float, se_b: float, n: int, alpha: float = 0.05
) -> EvolutionClass:
    """Classify using a two-sided t-test of ``b`` against 1.

    ``t = (b - 1)/se_b`` with ``n - 2`` degrees of freedom. When the test
    fails to reject ``b = 1`` at level ``alpha`` the classification is
    grade 2 (mutualism); otherwise the sign of ``b - 1`` decides.
    """
    from . import statkit  # local import: statkit never imports core

    b = float(b)
    se_b = float(se_b)
    if not math.isfinite(b):
        raise InvalidInputError(f"evolutionary coefficient must be finite, got {b!r}")
    if n < 3:
        raise InsufficientDataError(f"need n >= 3 observations for the t-test, got {n}")
    if not (math.isfinite(se_b) and se_b > 0):
        raise InvalidInputError(f"standard error must be positive, got {se_b!r}")
    if not (0.0 < alpha < 1.0):
        raise InvalidInputError(f"alpha must lie in (0, 1), got {alpha!r}")

    df = int(n) - 2
    t_stat = (b - 1.0) / se_b
    p_value = statkit.student_t_sf(t_stat, df)
    test = BTest(t_stat=t_stat, p_value=p_value, alpha=alpha, df=df)

    warnings: tuple[str, ...] = ()
    if b < 0:
        warnings = (
            "negative evolutionary coefficient: the growth model assumes "
            "positive rates; grade 1 assigned by convention",
        )
    if p_value >= alpha:
        grade = 2
    elif b > 1.0:
        grade = 3
    else:
        grade = 1
    return _make_class(grade, b, test, warnings)


def prediction_label(grade: int) -> str:
    """The fixed forecast string for a grade on the evolution scale."""
    if grade not in EVOLUTION_SCALE:
        raise InvalidInputError(f"grade must be 1, 2 or 3, got {grade!r}")
    return EVOLUTION_SCALE[grade][3]
