"""SVG line plots of sweep output.

Figures are 800 x 600 points with exactly five ticks per axis. The SVG
hash salt and date are pinned, so identical data gives identical files.
"""

import csv
import math

import matplotlib

matplotlib.use("Agg")

from matplotlib.backends.backend_svg import FigureCanvasSVG  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402
import numpy as np  # noqa: E402

WIDTH, HEIGHT = 800, 600
N_TICKS = 5
STYLE = {
    "svg.hashsalt": "qcorr",
    "svg.fonttype": "path",
    "font.size": 14,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 2.0,
}


def read_csv_columns(path):
    """Read a CSV file into ``{column: float array}``; empty or non-numeric cells become NaN."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        names = reader.fieldnames or []
        data = {name: [] for name in names}
        for row in reader:
            for name in names:
                try:
                    data[name].append(float(row[name]))
                except (TypeError, ValueError):
                    data[name].append(math.nan)
    return {k: np.array(v, dtype=float) for k, v in data.items()}


def _ticks(values):
    finite = values[np.isfinite(values)]
    if finite.size == 0:
        lo, hi = 0.0, 1.0
    else:
        lo, hi = float(finite.min()), float(finite.max())
    if hi - lo < 1e-12:
        lo, hi = lo - 0.5, hi + 0.5
    return np.linspace(lo, hi, N_TICKS)


def line_plot(x, series, path, xlabel="x", ylabel="", title=None):
    """Write an SVG with one line per entry of ``series`` (name -> y values).

    NaN cells are skipped per series. A series with one finite point is
    drawn as a marker.
    """
    x = np.asarray(x, dtype=float)
    with matplotlib.rc_context(STYLE):
        fig = Figure(figsize=(WIDTH / 72, HEIGHT / 72), dpi=72)
        FigureCanvasSVG(fig)
        ax = fig.add_subplot()
        all_y = []
        for name, y in series.items():
            y = np.asarray(y, dtype=float)
            keep = np.isfinite(x) & np.isfinite(y)
            if not keep.any():
                continue
            all_y.append(y[keep])
            marker = "o" if keep.sum() == 1 else None
            ax.plot(x[keep], y[keep], marker=marker, label=name, gid=f"series-{name}")
        xt = _ticks(x)
        yt = _ticks(np.concatenate(all_y) if all_y else np.array([]))
        ax.set_xticks(xt)
        ax.set_yticks(yt)
        ax.set_xlim(xt[0], xt[-1])
        ax.set_ylim(yt[0], yt[-1])
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        if all_y:
            ax.legend()
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None, "Creator": None})
    return path


def plot_csv(csv_path, x_column, y_columns, out_path, title=None):
    """Plot columns of an existing CSV file.

    Raises:
        KeyError: if a requested column is missing.
    """
    data = read_csv_columns(csv_path)
    for name in [x_column, *y_columns]:
        if name not in data:
            raise KeyError(f"column {name!r} not in {csv_path}")
    return line_plot(
        data[x_column], {k: data[k] for k in y_columns}, out_path, xlabel=x_column, title=title
    )
