"""Dataset ingestion, report serialization, and plot-data emission.

Series files are two-column UTF-8 CSVs with header ``t,value``; ``#`` lines
are comments. Reports render as human-readable text (regression-table
layout), JSON with a stable key set, or one-row-per-fit CSV. Numbers in
series/plot CSVs use shortest round-trip decimal text, which carries more
than 12 significant digits whenever they matter.
"""

from __future__ import annotations

import enum
import json
import math
import statistics
from dataclasses import dataclass
from pathlib import Path

from .core import TechSeries
from .errors import EmptySeriesError, InvalidInputError, SeriesFormatError
from .evolution import (
    AnalysisReport,
    CorrelationMatrix,
    EvolutionFit,
    MultiEvolutionFit,
)
from .statkit import significance_stars

AGGREGATORS = {
    "mean": statistics.fmean,
    "median": statistics.median,
    "max": max,
}


class ReportFormat(enum.Enum):
    TEXT = "text"
    JSON = "json"
    CSV = "csv"


@dataclass(frozen=True)
class SeriesFile:
    """A parsed series file plus any non-fatal warnings from parsing."""

    path: str
    parsed: TechSeries
    warnings: tuple[str, ...]


def parse_series_csv(
    path: str | Path,
    name: str | None = None,
    role: str = "parasite",
    units: str = "",
    aggregator: str = "mean",
) -> SeriesFile:
    """Read a ``t,value`` CSV into a TechSeries.

    Comment lines (``#``) and blank lines are skipped. Rows with a
    non-positive value are rejected with a warning naming the line; rows
    sharing the same t are collapsed by ``aggregator`` (mean, median or max)
    with a warning. Non-numeric cells and a missing header are fatal.
    """
    path = Path(path)
    if aggregator not in AGGREGATORS:
        raise InvalidInputError(
            f"aggregator must be one of {sorted(AGGREGATORS)}, got {aggregator!r}"
        )
    agg = AGGREGATORS[aggregator]
    text = path.read_text(encoding="utf-8")

    warnings: list[str] = []
    rows: list[tuple[float, float, int]] = []
    header_seen = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not header_seen:
            cells = [c.strip().lower() for c in line.split(",")]
            if cells != ["t", "value"]:
                raise SeriesFormatError(
                    f"{path}: line {lineno}: expected header 't,value', got {raw!r}"
                )
            header_seen = True
            continue
        cells = line.split(",")
        if len(cells) != 2:
            raise SeriesFormatError(
                f"{path}: line {lineno}: expected 2 columns, got {len(cells)}"
            )
        try:
            t = float(cells[0])
            v = float(cells[1])
        except ValueError:
            raise SeriesFormatError(
                f"{path}: line {lineno}: non-numeric cell in {raw!r}"
            ) from None
        if not (math.isfinite(t) and math.isfinite(v)):
            raise SeriesFormatError(
                f"{path}: line {lineno}: non-finite number in {raw!r}"
            )
        if v <= 0:
            warnings.append(
                f"line {lineno}: non-positive value {v!r} rejected "
                "(log scale requires positive values)"
            )
            continue
        rows.append((t, v, lineno))
    if not header_seen:
        raise SeriesFormatError(f"{path}: missing 't,value' header")
    if not rows:
        raise EmptySeriesError(f"{path}: no valid observations")

    by_t: dict[float, list[float]] = {}
    for t, v, _ in rows:
        by_t.setdefault(t, []).append(v)
    times = sorted(by_t)
    values = []
    for t in times:
        group = by_t[t]
        if len(group) > 1:
            warnings.append(
                f"{len(group)} rows share t={t!r}; aggregated by {aggregator}"
            )
        values.append(float(agg(group)))

    series = TechSeries.from_columns(
        name if name is not None else path.stem, role, units, times, values
    )
    return SeriesFile(path=str(path), parsed=series, warnings=tuple(warnings))


def _num(x: float) -> str:
    """Shortest decimal text that round-trips the float exactly."""
    return repr(float(x))


def write_series_csv(series: TechSeries, path: str | Path) -> Path:
    """Write a TechSeries in the same schema ``parse_series_csv`` reads."""
    path = Path(path)
    lines = ["t,value"]
    lines += [f"{_num(t)},{_num(v)}" for t, v in series.observations]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _clean(x):
    """JSON-safe float: non-finite becomes null."""
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _classification_dict(cls) -> dict:
    test = None
    if cls.test is not None:
        test = {
            "t_stat": _clean(cls.test.t_stat),
            "p_value": _clean(cls.test.p_value),
            "alpha": cls.test.alpha,
            "df": cls.test.df,
        }
    return {
        "grade": cls.grade,
        "mode": cls.mode,
        "evolution": cls.evolution_label,
        "symbol": cls.symbol,
        "prediction": cls.prediction,
        "b_estimate": _clean(cls.b_estimate),
        "test": test,
        "warnings": list(cls.warnings),
    }


def _fit_dict(fit: EvolutionFit) -> dict:
    reg = fit.regression
    return {
        "host": fit.host_name,
        "parasite": fit.parasite_name,
        "n": fit.n_paired,
        "years_used": list(fit.years_used),
        "log_a": _clean(fit.log_a),
        "log_a_se": _clean(reg.standard_errors[0]),
        "b": _clean(fit.b),
        "b_se": _clean(reg.standard_errors[1]),
        "b_stars": significance_stars(reg.p_values[1]),
        "b_p": _clean(reg.p_values[1]),
        "r2": _clean(reg.r2),
        "r2_adj": _clean(reg.r2_adj),
        "residual_se": _clean(reg.residual_se),
        "f_stat": _clean(reg.f_stat),
        "f_p": _clean(reg.f_p),
        "perfect_fit": reg.perfect_fit,
        "classification": _classification_dict(fit.classification),
    }


def _multi_fit_dict(fit: MultiEvolutionFit) -> dict:
    reg = fit.regression
    return {
        "target": fit.target_parasite,
        "predictors": list(fit.predictor_names),
        "n": fit.n_listwise,
        "years_used": list(fit.years_used),
        "coefficients": [_clean(c) for c in reg.coefficients],
        "standard_errors": [_clean(s) for s in reg.standard_errors],
        "t_stats": [_clean(t) for t in reg.t_stats],
        "p_values": [_clean(p) for p in reg.p_values],
        "stars": [significance_stars(p) for p in reg.p_values],
        "standardized_coefficients": [
            _clean(s) for s in reg.standardized_coefficients
        ],
        "r2": _clean(reg.r2),
        "r2_adj": _clean(reg.r2_adj),
        "residual_se": _clean(reg.residual_se),
        "f_stat": _clean(reg.f_stat),
        "f_p": _clean(reg.f_p),
        "perfect_fit": reg.perfect_fit,
        "dominant_predictors": list(fit.dominant_predictors),
    }


def _correlations_dict(corr: CorrelationMatrix | None) -> dict | None:
    if corr is None:
        return None
    return {
        "names": list(corr.names),
        "entries": [
            [
                {"r": _clean(e.r), "p": _clean(e.p), "n": e.n}
                for e in row
            ]
            for row in corr.entries
        ],
    }


def report_to_dict(report: AnalysisReport) -> dict:
    """Stable-keyed dictionary form of a report (the JSON schema)."""
    return {
        "meta": {
            "generator": "parasitech",
            "log_base": "e",
            "inputs": list(report.provenance.inputs),
            "options": {k: v for k, v in report.provenance.options},
            "timestamp": report.provenance.timestamp,
        },
        "fits": [_fit_dict(f) for f in report.fits],
        "multi_fits": [_multi_fit_dict(f) for f in report.multi_fits],
        "correlations": _correlations_dict(report.correlations),
        "descriptives": [
            {
                "name": name,
                "n": d.n,
                "mean": _clean(d.mean),
                "sd": _clean(d.sd),
                "skewness": _clean(d.skewness),
                "kurtosis": _clean(d.kurtosis),
            }
            for name, d in report.descriptives
        ],
        "standardized_trajectories": [
            {
                "name": tr.name,
                "years": list(tr.years),
                "z": [_clean(z) for z in tr.z],
            }
            for tr in report.standardized_trajectories
        ],
    }


def _fmt2(x: float) -> str:
    return "nan" if not math.isfinite(x) else f"{x:.2f}"


def _fmt3(x: float) -> str:
    return "nan" if not math.isfinite(x) else f"{x:.3f}"


def _text_fit_block(fit: EvolutionFit) -> list[str]:
    reg = fit.regression
    cls = fit.classification
    stars_a = significance_stars(reg.p_values[0])
    stars_b = significance_stars(reg.p_values[1])
    lines = [
        f"Fit: {fit.parasite_name} ~ {fit.host_name}  (n={fit.n_paired})",
        f"  Constant alpha (St. Err.):             "
        f"{_fmt2(fit.log_a)}{stars_a} ({_fmt2(reg.standard_errors[0])})",
        f"  Evolutionary coefficient B (St. Err.): "
        f"{_fmt2(fit.b)}{stars_b} ({_fmt2(reg.standard_errors[1])})",
        f"  R2 adj. (St. Err. of the Estimate):    "
        f"{_fmt2(reg.r2_adj)} ({_fmt2(reg.residual_se)})",
        f"  F (sign.):                             "
        f"{_fmt2(reg.f_stat)} ({_fmt3(reg.f_p)})",
        f"  Classification: grade {cls.grade} | {cls.mode} | "
        f"{cls.evolution_label} [{cls.symbol}]",
        f"  Prediction: {cls.prediction}",
    ]
    if cls.test is not None:
        lines.append(
            f"  Test of B=1: t={_fmt3(cls.test.t_stat)}, df={cls.test.df}, "
            f"p={_fmt3(cls.test.p_value)} (alpha={cls.test.alpha})"
        )
    for w in cls.warnings:
        lines.append(f"  Warning: {w}")
    return lines


def _text_multi_block(fit: MultiEvolutionFit) -> list[str]:
    reg = fit.regression
    lines = [
        f"Multidimensional fit: {fit.target_parasite} ~ "
        f"{' + '.join(fit.predictor_names)}  (n={fit.n_listwise})",
        f"  {'predictor':<28} {'coef':>10}    {'(SE)':>7} {'std coef':>10} {'t':>8}",
        f"  {'constant':<28} {_fmt2(reg.coefficients[0]):>10}"
        f"{significance_stars(reg.p_values[0]):<3}"
        f" {'(' + _fmt2(reg.standard_errors[0]) + ')':>7} {'':>10} "
        f"{_fmt2(reg.t_stats[0]):>8}",
    ]
    for j, name in enumerate(fit.predictor_names, start=1):
        std = reg.standardized_coefficients[j]
        lines.append(
            f"  {name:<28} {_fmt2(reg.coefficients[j]):>10}"
            f"{significance_stars(reg.p_values[j]):<3}"
            f" {'(' + _fmt2(reg.standard_errors[j]) + ')':>7} {_fmt2(std):>10} "
            f"{_fmt2(reg.t_stats[j]):>8}"
        )
    lines += [
        f"  R2 adj. (St. Err. of the Estimate):    "
        f"{_fmt2(reg.r2_adj)} ({_fmt2(reg.residual_se)})",
        f"  F (sign.):                             "
        f"{_fmt2(reg.f_stat)} ({_fmt3(reg.f_p)})",
        f"  Dominant predictors: {', '.join(fit.dominant_predictors)}",
    ]
    return lines


def _text_correlations(corr: CorrelationMatrix) -> list[str]:
    width = max(12, max(len(n) for n in corr.names) + 1)
    head = " " * width + "".join(f"{n:>{width}}" for n in corr.names)
    lines = ["Correlations (log scale, pairwise deletion):", head]
    for i, name in enumerate(corr.names):
        row_r = f"{name:>{width}}"
        row_n = f"{'n':>{width}}"
        for e in corr.entries[i]:
            r_txt = "undef" if not math.isfinite(e.r) else f"{e.r:.3f}"
            row_r += f"{r_txt:>{width}}"
            row_n += f"{e.n:>{width}}"
        lines.append(row_r)
        lines.append(row_n)
    return lines


def render_report(report: AnalysisReport, fmt: ReportFormat | str) -> bytes:
    """Serialize an AnalysisReport as text, JSON, or CSV bytes.

    Text mirrors the regression-table layout (constant and slope with
    standard errors and stars, adjusted R2, F) plus the classification line;
    it omits the timestamp so identical analyses render identically. JSON
    carries every field with a stable key order.
    """
    if isinstance(fmt, str):
        try:
            fmt = ReportFormat(fmt)
        except ValueError:
            raise InvalidInputError(
                f"format must be one of {[f.value for f in ReportFormat]}, got {fmt!r}"
            ) from None

    if fmt is ReportFormat.JSON:
        payload = json.dumps(report_to_dict(report), indent=2, allow_nan=False)
        return (payload + "\n").encode("utf-8")

    if fmt is ReportFormat.CSV:
        lines = [
            "kind,target,source,n,intercept,intercept_se,b,b_se,stars,"
            "r2,r2_adj,residual_se,f_stat,f_p,grade,mode,evolution,symbol"
        ]
        for fit in report.fits:
            reg = fit.regression
            cls = fit.classification
            lines.append(
                ",".join(
                    [
                        "simple",
                        fit.parasite_name,
                        fit.host_name,
                        str(fit.n_paired),
                        _num(fit.log_a),
                        _num(reg.standard_errors[0]),
                        _num(fit.b),
                        _num(reg.standard_errors[1]),
                        significance_stars(reg.p_values[1]),
                        _num(reg.r2),
                        _num(reg.r2_adj),
                        _num(reg.residual_se),
                        _num(reg.f_stat),
                        _num(reg.f_p),
                        str(cls.grade),
                        cls.mode,
                        cls.evolution_label,
                        cls.symbol,
                    ]
                )
            )
        for fit in report.multi_fits:
            reg = fit.regression
            host_idx = 1  # host is always the first predictor
            lines.append(
                ",".join(
                    [
                        "multi",
                        fit.target_parasite,
                        ";".join(fit.predictor_names),
                        str(fit.n_listwise),
                        _num(reg.coefficients[0]),
                        _num(reg.standard_errors[0]),
                        _num(reg.coefficients[host_idx]),
                        _num(reg.standard_errors[host_idx]),
                        significance_stars(reg.p_values[host_idx]),
                        _num(reg.r2),
                        _num(reg.r2_adj),
                        _num(reg.residual_se),
                        _num(reg.f_stat),
                        _num(reg.f_p),
                        "",
                        "",
                        "",
                        "",
                    ]
                )
            )
        return ("\n".join(lines) + "\n").encode("utf-8")

    # text
    lines = ["Technology evolution report (log base e)", "=" * 41, ""]
    for fit in report.fits:
        lines += _text_fit_block(fit)
        lines.append("")
    for fit in report.multi_fits:
        lines += _text_multi_block(fit)
        lines.append("")
    if report.correlations is not None and report.correlations.names:
        lines += _text_correlations(report.correlations)
        lines.append("")
    if report.descriptives:
        lines.append("Descriptive statistics (log scale):")
        lines.append(
            f"  {'series':<24} {'n':>5} {'mean':>10} {'sd':>10} "
            f"{'skew':>10} {'kurt':>10}"
        )
        for name, d in report.descriptives:
            skew = "undef" if d.skewness is None else f"{d.skewness:.3f}"
            kurt = "undef" if d.kurtosis is None else f"{d.kurtosis:.3f}"
            lines.append(
                f"  {name:<24} {d.n:>5} {d.mean:>10.3f} {d.sd:>10.3f} "
                f"{skew:>10} {kurt:>10}"
            )
        lines.append("")
    if report.provenance.inputs:
        lines.append("Inputs: " + ", ".join(report.provenance.inputs))
    stars_note = "Significance: *** p < .001, ** p < .01, * p < .05"
    lines.append(stars_note)
    return ("\n".join(lines) + "\n").encode("utf-8")


def _safe_name(name: str) -> str:
    return "".join(c if c.isalnum() or c in "-_" else "_" for c in name)


def emit_plot_data(report: AnalysisReport, path_prefix: str | Path) -> list[Path]:
    """Write per-fit observed/fitted CSVs plus a standardized-trajectory CSV.

    Each simple fit produces ``<prefix>_fit<i>_<parasite>.csv`` with columns
    log_host, log_parasite, log_parasite_fitted (fitted = log_a + b*log_host).
    Trajectories land in ``<prefix>_trajectories.csv`` with a t column and one
    z column per series (blank where a series has no observation).
    """
    if not (report.fits or report.multi_fits):
        raise InvalidInputError("report contains no fits; nothing to plot")
    prefix = Path(path_prefix)
    if str(prefix.parent) not in ("", ".") and not prefix.parent.exists():
        prefix.parent.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    for i, fit in enumerate(report.fits, start=1):
        path = prefix.with_name(
            f"{prefix.name}_fit{i}_{_safe_name(fit.parasite_name)}.csv"
        )
        lines = ["log_host,log_parasite,log_parasite_fitted"]
        for log_h, log_p in zip(fit.log_host_values, fit.log_parasite_values):
            fitted = fit.log_a + fit.b * log_h
            lines.append(f"{_num(log_h)},{_num(log_p)},{_num(fitted)}")
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(path)

    if report.standardized_trajectories:
        path = prefix.with_name(f"{prefix.name}_trajectories.csv")
        trajectories = report.standardized_trajectories
        all_years = sorted({t for tr in trajectories for t in tr.years})
        z_by_year = [dict(zip(tr.years, tr.z)) for tr in trajectories]
        header = "t," + ",".join(f"z_{_safe_name(tr.name)}" for tr in trajectories)
        lines = [header]
        for t in all_years:
            cells = [_num(t)]
            for zmap in z_by_year:
                cells.append(_num(zmap[t]) if t in zmap else "")
            lines.append(",".join(cells))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(path)
    return written
