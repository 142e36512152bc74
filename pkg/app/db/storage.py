"""
File persistence: sweep tables (CSV), curve plots (SVG), radial-cache tables
and flat ``key = value`` configuration files.
"""
import logging
import math
from typing import Dict, Iterable, Tuple

import numpy as np
import pandas as pd
from dotenv import dotenv_values

from ..exceptions import ConfigError
from ..schemas.schemas import SweepResult

logger = logging.getLogger(__name__)

RADIAL_TABLE_HEADER = "# radial-cache v1"
RADIAL_COLUMNS = ["n1", "l1", "n2", "l2", "power", "value"]

SVG_WIDTH = 720
SVG_HEIGHT = 440
SVG_MARGIN = 60


def _shortest_repr(value) -> str:
    # shortest decimal string that round-trips the double
    return repr(float(value))


def write_sweep_csv(result: SweepResult, path: str) -> pd.DataFrame:
    """Write the sweep table; identical results give byte-identical files."""
    frame = result.to_frame()
    frame.to_csv(path, index=False, float_format=_shortest_repr, lineterminator="\n")
    logger.info("wrote %d rows to %s", len(frame), path)
    return frame


def read_config_file(path: str) -> Dict[str, str]:
    """Parse a flat ``key = value`` file; '#' starts a comment."""
    try:
        with open(path, encoding="utf-8") as handle:
            values = dotenv_values(stream=handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return {key.strip().lower(): (value or "").strip() for key, value in values.items()}


def write_radial_table(items: Iterable[Tuple[Tuple[int, int, int, int, int], float]], path: str):
    rows = [list(key) + [value] for key, value in items]
    frame = pd.DataFrame(rows, columns=RADIAL_COLUMNS)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(RADIAL_TABLE_HEADER + "\n")
        frame.to_csv(handle, index=False, float_format=_shortest_repr, lineterminator="\n")


def read_radial_table(path: str) -> Dict[Tuple[int, int, int, int, int], float]:
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().strip()
        if header != RADIAL_TABLE_HEADER:
            raise ConfigError(f"{path} is not a radial cache table (header {header!r})")
        frame = pd.read_csv(
            handle, dtype={name: int for name in RADIAL_COLUMNS[:-1]}, float_precision="round_trip"
        )
    return {
        tuple(int(v) for v in row[:-1]): float(row[-1])
        for row in frame[RADIAL_COLUMNS].itertuples(index=False, name=None)
    }


# -- SVG ------------------------------------------------------------------

def _log_axis(values: np.ndarray) -> np.ndarray:
    positive = values[values > 0]
    floor = positive.min() if positive.size else 1.0
    return np.log10(np.where(values > 0, values, floor))


def _symlog_axis(values: np.ndarray) -> np.ndarray:
    peak = np.max(np.abs(values))
    threshold = peak * 1e-6 if peak > 0 else 1.0
    return np.sign(values) * np.log10(1.0 + np.abs(values) / threshold)


def _scale(values: np.ndarray, lower: float, upper: float) -> np.ndarray:
    span = values.max() - values.min()
    if span == 0:
        return np.full_like(values, (lower + upper) / 2.0)
    return lower + (values - values.min()) / span * (upper - lower)


def curve_svg(omega: np.ndarray, values: np.ndarray, quantity: str, title: str = "") -> str:
    """
    Minimal polyline plot.

    ``abs`` is drawn log-log; ``re`` and ``im`` use a log frequency axis and a
    symmetric-log ordinate.
    """
    x = _log_axis(omega) if np.all(omega > 0) else omega
    if quantity == "abs":
        y = _log_axis(np.abs(values))
        y_label = "log10 |chi12|"
    else:
        y = _symlog_axis(values.real if quantity == "re" else values.imag)
        y_label = f"symlog {quantity} chi12"
    px = _scale(np.asarray(x, dtype=float), SVG_MARGIN, SVG_WIDTH - SVG_MARGIN / 2)
    py = _scale(np.asarray(y, dtype=float), SVG_HEIGHT - SVG_MARGIN, SVG_MARGIN / 2)
    points = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
    x_range = f"{x.min():.3g} .. {x.max():.3g}"
    return "\n".join([
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SVG_WIDTH}" height="{SVG_HEIGHT}">',
        f'  <rect width="{SVG_WIDTH}" height="{SVG_HEIGHT}" fill="white"/>',
        f'  <line x1="{SVG_MARGIN}" y1="{SVG_HEIGHT - SVG_MARGIN}" x2="{SVG_WIDTH - SVG_MARGIN / 2}" '
        f'y2="{SVG_HEIGHT - SVG_MARGIN}" stroke="black"/>',
        f'  <line x1="{SVG_MARGIN}" y1="{SVG_MARGIN / 2}" x2="{SVG_MARGIN}" '
        f'y2="{SVG_HEIGHT - SVG_MARGIN}" stroke="black"/>',
        f'  <polyline fill="none" stroke="steelblue" stroke-width="1.5" points="{points}"/>',
        f'  <text x="{SVG_WIDTH / 2}" y="{SVG_HEIGHT - 15}" text-anchor="middle" font-size="12">'
        f'log10 omega ({x_range})</text>',
        f'  <text x="15" y="{SVG_HEIGHT / 2}" font-size="12" transform="rotate(-90 15 {SVG_HEIGHT / 2})" '
        f'text-anchor="middle">{y_label}</text>',
        f'  <text x="{SVG_WIDTH / 2}" y="20" text-anchor="middle" font-size="14">{title}</text>',
        "</svg>",
        "",
    ])


def write_sweep_svg(result: SweepResult, path: str, quantity: str = "re", title: str = ""):
    frame_omega = result.omega / (2.0 * math.pi) if result.axis == "hz" else result.omega
    svg = curve_svg(frame_omega, result.chi12_dimless, quantity, title)
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(svg)
    logger.info("wrote %s curve to %s", quantity, path)
