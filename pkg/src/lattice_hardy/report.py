"""Rendering of results: JSON/CSV text with round-trip-safe numbers,
plot-data series for external tools, and optional figure files.

All floating-point numbers are written with 17 significant digits, which
is enough for binary64 values to re-parse bit-exactly.  Figures are
rendered with the Agg backend straight to files; nothing here opens a
display.
"""

from __future__ import annotations

import csv
import io
import math
import sys
from typing import Iterable, Mapping, Sequence

import numpy as np


def _native(value):
    """Collapse numpy scalars to the matching built-in type."""
    if isinstance(value, np.generic):
        return value.item()
    return value


def format_float(x: float) -> str:
    """17-significant-digit decimal form; round-trips binary64 exactly."""
    if math.isnan(x) or math.isinf(x):
        raise ValueError(f"cannot serialize non-finite value {x!r}")
    return format(float(x), ".17g")


def json_text(obj, indent: int = 0) -> str:
    """Deterministic JSON with 17-significant-digit floats.

    Handles None, bool, int, float, str, list/tuple, and dict (insertion
    order preserved; keys must be strings).
    """
    pad = " " * indent
    inner = " " * (indent + 2)
    obj = _native(obj)
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        text = format_float(obj)
        if "." not in text and "e" not in text:
            text += ".0"  # keep the value a float across a re-parse
        return text
    if isinstance(obj, str):
        out = io.StringIO()
        out.write('"')
        for ch in obj:
            if ch == '"':
                out.write('\\"')
            elif ch == "\\":
                out.write("\\\\")
            elif ch == "\n":
                out.write("\\n")
            elif ch == "\t":
                out.write("\\t")
            elif ch == "\r":
                out.write("\\r")
            elif ord(ch) < 0x20:
                out.write(f"\\u{ord(ch):04x}")
            else:
                out.write(ch)
        out.write('"')
        return out.getvalue()
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        parts = [json_text(item, indent + 2) for item in obj]
        return "[\n" + ",\n".join(inner + p for p in parts) + "\n" + pad + "]"
    if isinstance(obj, Mapping):
        if not obj:
            return "{}"
        parts = []
        for key, value in obj.items():
            if not isinstance(key, str):
                raise TypeError(f"JSON object keys must be strings, got {key!r}")
            parts.append(f"{inner}{json_text(key)}: "
                         f"{json_text(value, indent + 2)}")
        return "{\n" + ",\n".join(parts) + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__} to JSON")


def csv_text(fieldnames: Sequence[str], rows: Iterable[Mapping]) -> str:
    """CSV with a header row, '.' decimals, floats at 17 significant digits."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(fieldnames)
    for row in rows:
        rendered = []
        for name in fieldnames:
            value = _native(row.get(name, ""))
            if isinstance(value, bool):
                rendered.append("true" if value else "false")
            elif isinstance(value, float):
                rendered.append(format_float(value))
            else:
                rendered.append(value)
        writer.writerow(rendered)
    return out.getvalue()


def write_text(text: str, path: str | None) -> None:
    """To the file at path, or to standard output when path is None."""
    if path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


# -- plot data ---------------------------------------------------------------


def plot_data_payload(rows: Sequence[Mapping],
                      fit: tuple[float, float, float] | None) -> dict:
    """Per-curve (d, value) series from a sweep table, plus fit parameters.

    Curves: the estimate and, where present, the proven lower and upper
    brackets.  fit is (slope, intercept, r_squared) of log value against
    log d, or None when not requested or not feasible (< 3 points).
    """
    if not rows:
        raise ValueError("plot data needs a non-empty table")
    series: dict[str, list[list[float]]] = {"estimate": []}
    for row in rows:
        d = float(row["d"] if "d" in row else row["dim"])
        series["estimate"].append([d, float(row["value"])])
        for key in ("bracket_lower", "bracket_upper"):
            if key in row:
                series.setdefault(key, []).append([d, float(row[key])])
    payload: dict = {"series": series}
    if fit is not None:
        slope, intercept, r2 = fit
        payload["fit"] = {"slope": slope, "intercept": intercept,
                          "r_squared": r2}
        payload["fit_line"] = [
            [d, math.exp(intercept + slope * math.log(d))]
            for d, _ in series["estimate"]]
    else:
        payload["fit"] = None
    return payload


def plot_data_csv(payload: Mapping) -> str:
    """Long-form CSV of the payload: one (series, d, value) row per point;
    a fit, when present, appears as fit_line points plus three
    slope/intercept/r_squared rows with an empty d column."""
    rows = []
    for name, points in payload["series"].items():
        for d, value in points:
            rows.append({"series": name, "d": d, "value": value})
    if payload.get("fit") is not None:
        for d, value in payload["fit_line"]:
            rows.append({"series": "fit_line", "d": d, "value": value})
        for key in ("slope", "intercept", "r_squared"):
            rows.append({"series": f"fit_{key}", "d": "",
                         "value": payload["fit"][key]})
    return csv_text(["series", "d", "value"], rows)


def emit_plot_data(rows: Sequence[Mapping],
                   fit: tuple[float, float, float] | None,
                   fmt: str, path: str | None) -> dict:
    """Write the plot-data series for a sweep table; returns the payload."""
    payload = plot_data_payload(rows, fit)
    if fmt == "json":
        write_text(json_text(payload), path)
    elif fmt == "csv":
        write_text(plot_data_csv(payload), path)
    else:
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")
    return payload


# -- figures -----------------------------------------------------------------


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def render_series_figure(payload: Mapping, path: str,
                         xlabel: str = "d", ylabel: str = "value",
                         title: str | None = None) -> str:
    """Log-log figure of the plot-data payload, written to path."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    styles = {
        "estimate": dict(marker="o", linestyle="-", color="tab:blue"),
        "bracket_lower": dict(marker="v", linestyle="--", color="tab:green"),
        "bracket_upper": dict(marker="^", linestyle="--", color="tab:red"),
    }
    for name, points in payload["series"].items():
        xs = [p[0] for p in points]
        ys = [p[1] for p in points]
        ax.plot(xs, ys, label=name.replace("_", " "),
                **styles.get(name, dict(marker=".", linestyle="-")))
    if payload.get("fit") is not None:
        xs = [p[0] for p in payload["fit_line"]]
        ys = [p[1] for p in payload["fit_line"]]
        slope = payload["fit"]["slope"]
        ax.plot(xs, ys, linestyle=":", color="black",
                label=f"fit, slope {slope:.3f}")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_table_figure(dims: Sequence[float],
                        curves: Mapping[str, Sequence[float]],
                        path: str, xlabel: str = "d",
                        ylabel: str = "value",
                        title: str | None = None) -> str:
    """Log-log figure of one or more named curves over a dimension axis."""
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    for name, values in curves.items():
        ax.plot(list(dims), list(values), marker="o",
                label=name.replace("_", " "))
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
