"""Host-parasite analysis pipeline.

Aligns FMT series by observation year, estimates the log-log evolution
models (one parasite on one host, or one parasite on host plus sibling
parasites), classifies the evolutionary coefficient on the ordinal scale,
builds the correlation matrix, and assembles everything into a report.

All logs are natural logs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import statkit
from .core import EvolutionClass, TechSeries, classify_point, classify_with_test
from .errors import (
    CollinearityError,
    InsufficientDataError,
    InvalidInputError,
    NoOverlapError,
    UndefinedCorrelationError,
)
from .statkit import CorrelationEntry, DescriptiveStats, RegressionResult


@dataclass(frozen=True)
class AlignedTable:
    """Per-year rows of log-transformed values for a set of aligned series."""

    years: tuple[float, ...]
    names: tuple[str, ...]
    log_rows: tuple[tuple[float, ...], ...]

    @property
    def n(self) -> int:
        return len(self.years)

    def column(self, name: str) -> np.ndarray:
        j = self.names.index(name)
        return np.array([row[j] for row in self.log_rows])


@dataclass(frozen=True)
class EvolutionFit:
    """One estimated host-parasite evolution model with its classification.

    The aligned log columns ride along so the fit can be re-rendered (plot
    data, residual checks) without the original series.
    """

    host_name: str
    parasite_name: str
    regression: RegressionResult
    b: float
    log_a: float
    classification: EvolutionClass
    n_paired: int
    years_used: tuple[float, ...]
    log_host_values: tuple[float, ...]
    log_parasite_values: tuple[float, ...]


@dataclass(frozen=True)
class MultiEvolutionFit:
    """One parasite regressed on the host and its sibling parasites.

    ``dominant_predictors`` orders predictor names by |standardized
    coefficient|, largest first; ties keep input order.
    """

    target_parasite: str
    predictor_names: tuple[str, ...]
    regression: RegressionResult
    dominant_predictors: tuple[str, ...]
    n_listwise: int
    years_used: tuple[float, ...]


@dataclass(frozen=True)
class CorrelationMatrix:
    """Symmetric matrix of pairwise-deletion correlations over log values."""

    names: tuple[str, ...]
    entries: tuple[tuple[CorrelationEntry, ...], ...]

    def entry(self, i: int, j: int) -> CorrelationEntry:
        return self.entries[i][j]


@dataclass(frozen=True)
class Provenance:
    """Where a report came from: input names, options, optional timestamp."""

    inputs: tuple[str, ...]
    options: tuple[tuple[str, str], ...]
    timestamp: str | None


@dataclass(frozen=True)
class Trajectory:
    """A series' raw values standardized over its own observation years."""

    name: str
    years: tuple[float, ...]
    z: tuple[float, ...]


@dataclass(frozen=True)
class AnalysisReport:
    fits: tuple[EvolutionFit, ...]
    multi_fits: tuple[MultiEvolutionFit, ...]
    correlations: CorrelationMatrix | None
    descriptives: tuple[tuple[str, DescriptiveStats], ...]
    standardized_trajectories: tuple[Trajectory, ...]
    provenance: Provenance


def _common_years(series_list: Sequence[TechSeries]) -> list[float]:
    """Intersection of observation years, ascending. Errors name the pair
    whose intersection first becomes empty."""
    common = set(series_list[0].times.tolist())
    for s in series_list[1:]:
        common &= set(s.times.tolist())
        if not common:
            raise NoOverlapError(
                f"series {series_list[0].name!r} and {s.name!r} share no "
                "observation years"
            )
    return sorted(common)


def _table_for(series_list: Sequence[TechSeries]) -> AlignedTable:
    years = _common_years(series_list)
    lookup = [dict(s.observations) for s in series_list]
    rows = tuple(
        tuple(math.log(table[t]) for table in lookup) for t in years
    )
    return AlignedTable(
        years=tuple(years),
        names=tuple(s.name for s in series_list),
        log_rows=rows,
    )


def align_by_year(
    host: TechSeries,
    parasites: Sequence[TechSeries],
    mode: str = "pairwise",
) -> list[AlignedTable]:
    """Align series on shared observation years; values are log-transformed.

    ``pairwise`` returns one table per parasite (host paired with it alone);
    ``listwise`` returns a single table restricted to years present in every
    series.
    """
    if not parasites:
        raise InvalidInputError("at least one parasite series is required")
    if mode == "pairwise":
        return [_table_for([host, p]) for p in parasites]
    if mode == "listwise":
        return [_table_for([host, *parasites])]
    raise InvalidInputError(f"mode must be 'pairwise' or 'listwise', got {mode!r}")


def fit_evolution(
    host: TechSeries, parasite: TechSeries, alpha: float = 0.05
) -> EvolutionFit:
    """Estimate log P = log a + B log H on the years both series share.

    Classification uses the t-test of B against 1 at level ``alpha``; a
    perfect fit (zero residual variance, so zero standard error) falls back
    to exact comparison.
    """
    table = align_by_year(host, [parasite], mode="pairwise")[0]
    if table.n < 4:
        raise InsufficientDataError(
            f"{host.name!r} ~ {parasite.name!r}: need at least 4 aligned years, "
            f"got {table.n}"
        )
    log_h = table.column(host.name)
    log_p = table.column(parasite.name)
    reg = statkit.ols_simple(log_h, log_p)
    log_a, b = reg.coefficients
    se_b = reg.standard_errors[1]
    if se_b > 0:
        classification = classify_with_test(b, se_b, table.n, alpha)
    else:
        classification = classify_point(b)
    return EvolutionFit(
        host_name=host.name,
        parasite_name=parasite.name,
        regression=reg,
        b=float(b),
        log_a=float(log_a),
        classification=classification,
        n_paired=table.n,
        years_used=table.years,
        log_host_values=tuple(float(v) for v in log_h),
        log_parasite_values=tuple(float(v) for v in log_p),
    )


def fit_evolution_multi(
    target: TechSeries,
    host: TechSeries,
    others: Sequence[TechSeries],
    alpha: float = 0.05,
) -> MultiEvolutionFit:
    """Estimate log P1 on log H and the logs of sibling parasites, listwise.

    Predictor order is host first, then the others as given. Dominance is
    read off the standardized coefficients.
    """
    predictors = [host, *others]
    table = _table_for([target, *predictors])
    k = len(predictors)
    if table.n < k + 2:
        raise InsufficientDataError(
            f"{target.name!r}: need at least {k + 2} listwise-aligned years "
            f"for {k} predictors, got {table.n}"
        )
    y = table.column(target.name)
    columns = [table.column(p.name) for p in predictors]
    try:
        reg = statkit.ols_multi(columns, y)
    except CollinearityError as err:
        name = predictors[err.column_index].name if err.column_index is not None else "?"
        raise CollinearityError(
            f"series {name!r} is collinear with earlier predictors",
            column_index=err.column_index,
        ) from err
    names = tuple(p.name for p in predictors)
    std = reg.standardized_coefficients[1:]
    order = sorted(
        range(k),
        key=lambda j: (-(abs(std[j]) if math.isfinite(std[j]) else -math.inf), j),
    )
    dominant = tuple(names[j] for j in order)
    # alpha is accepted for interface symmetry with fit_evolution; the
    # multi-model reports coefficient significance but no scale grade.
    del alpha
    return MultiEvolutionFit(
        target_parasite=target.name,
        predictor_names=names,
        regression=reg,
        dominant_predictors=dominant,
        n_listwise=table.n,
        years_used=table.years,
    )


def correlation_matrix(series_list: Sequence[TechSeries]) -> CorrelationMatrix:
    """Pairwise-deletion Pearson correlations over log values.

    Each off-diagonal cell uses the years the two series share; cells with
    fewer than 3 shared years, or with a constant side, are NaN-flagged
    rather than failing the whole matrix. Diagonal r is 1 by definition.
    """
    if len(series_list) < 2:
        raise InvalidInputError("need at least 2 series for a correlation matrix")
    m = len(series_list)
    logs = [dict(zip(s.times.tolist(), np.log(s.values).tolist())) for s in series_list]
    cells: list[list[CorrelationEntry]] = [[None] * m for _ in range(m)]  # type: ignore[list-item]
    for i in range(m):
        n_i = series_list[i].n
        cells[i][i] = CorrelationEntry(
            r=1.0, p=0.0 if n_i >= 3 else math.nan, n=n_i
        )
        for j in range(i + 1, m):
            shared = sorted(set(logs[i]) & set(logs[j]))
            n_pair = len(shared)
            if n_pair < 3:
                entry = CorrelationEntry(r=math.nan, p=math.nan, n=n_pair)
            else:
                xi = [logs[i][t] for t in shared]
                xj = [logs[j][t] for t in shared]
                try:
                    entry = statkit.pearson(xi, xj)
                except UndefinedCorrelationError:
                    entry = CorrelationEntry(r=math.nan, p=math.nan, n=n_pair)
            cells[i][j] = entry
            cells[j][i] = entry
    return CorrelationMatrix(
        names=tuple(s.name for s in series_list),
        entries=tuple(tuple(row) for row in cells),
    )


def build_report(
    host: TechSeries,
    parasites: Sequence[TechSeries],
    *,
    multi: bool = False,
    alpha: float = 0.05,
    include_correlations: bool = True,
    source_files: Sequence[str] = (),
    options: Mapping[str, object] | None = None,
    timestamp: str | None = None,
) -> AnalysisReport:
    """Assemble the full analysis for one host and its parasites.

    ``multi=False`` fits each parasite on the host separately;
    ``multi=True`` fits the first parasite on host plus the remaining
    parasites. Descriptives are computed on log values; standardized
    trajectories z-score each series' raw values over its own years
    (constant series are skipped there since z-scores are undefined).

    The report is deterministic given inputs and options; ``timestamp`` is
    whatever the caller injects (None by default, so serialized output is
    reproducible).
    """
    if not parasites:
        raise InvalidInputError("at least one parasite series is required")
    if multi and len(parasites) < 2:
        raise InvalidInputError(
            "multidimensional fit needs a target parasite plus at least one sibling"
        )

    fits: tuple[EvolutionFit, ...] = ()
    multi_fits: tuple[MultiEvolutionFit, ...] = ()
    if multi:
        multi_fits = (
            fit_evolution_multi(parasites[0], host, parasites[1:], alpha=alpha),
        )
    else:
        fits = tuple(fit_evolution(host, p, alpha=alpha) for p in parasites)

    all_series = [host, *parasites]
    correlations = None
    if include_correlations and len(all_series) >= 2:
        correlations = correlation_matrix(all_series)

    descriptives = tuple(
        (s.name, statkit.descriptive(np.log(s.values))) for s in all_series
    )

    trajectories = []
    for s in all_series:
        if np.ptp(s.values) == 0.0:
            continue
        z = statkit.zscore(s.values)
        trajectories.append(
            Trajectory(
                name=s.name,
                years=tuple(s.times.tolist()),
                z=tuple(float(v) for v in z),
            )
        )

    opts = dict(options or {})
    opts.setdefault("alpha", alpha)
    opts.setdefault("mode", "multi" if multi else "pairwise")
    provenance = Provenance(
        inputs=tuple(source_files),
        options=tuple(sorted((k, repr(v)) for k, v in opts.items())),
        timestamp=timestamp,
    )
    return AnalysisReport(
        fits=fits,
        multi_fits=multi_fits,
        correlations=correlations,
        descriptives=descriptives,
        standardized_trajectories=tuple(trajectories),
        provenance=provenance,
    )
