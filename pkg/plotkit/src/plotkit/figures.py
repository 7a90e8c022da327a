"""The three figure kinds: learning curves, score bars, win-rate heatmap.

Every figure is file-in/image-out.  The input schemas are the documented
headers of the experiment CSV files; curve and bar files may carry an
optional leading ``mode`` column, which fans the figure out into one panel
per mode.  Plotters draw the emitted means and standard errors as they are;
the only transformation on offer is an explicit moving-average smoothing
window for curve display.
"""

import math
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .io import SchemaError, column_floats, read_table, require_columns

__all__ = [
    "PlotSpec",
    "render",
    "plot_learning_curves",
    "plot_score_bars",
    "plot_heatmap",
]

FIGURE_KINDS = ("curves", "bars", "heatmap")

# Column aliases: tournament/gambling files count steps of cumulative score,
# chase-task files count episodes of per-episode score.
X_COLUMNS = ("step", "episode")
MEAN_COLUMNS = ("mean_cum", "mean_score")
ERR_COLUMNS = ("stderr_cum", "stderr_score")


@dataclass(frozen=True)
class PlotSpec:
    """One figure request: input file(s), figure kind, image path, options."""

    inputs: tuple
    kind: str
    output: str
    smoothing: int = 1

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise ValueError(f"kind must be one of {', '.join(FIGURE_KINDS)}, got {self.kind!r}")
        if not self.inputs:
            raise ValueError("at least one input file is required")
        if self.smoothing < 1:
            raise ValueError(f"smoothing window must be >= 1, got {self.smoothing}")


def render(spec: PlotSpec):
    """Dispatch a PlotSpec to its figure kind (first input file)."""
    source = spec.inputs[0]
    if spec.kind == "curves":
        return plot_learning_curves(source, spec.output, smoothing=spec.smoothing)
    if spec.kind == "bars":
        return plot_score_bars(source, spec.output)
    return plot_heatmap(source, spec.output)


def _pick_column(columns: dict, aliases, path) -> str:
    for name in aliases:
        if name in columns:
            return name
    raise SchemaError(
        f"{path}: missing column {' or '.join(repr(a) for a in aliases)} (found: {', '.join(columns)})"
    )


def _ordered_unique(values):
    seen = {}
    for value in values:
        seen.setdefault(value, None)
    return list(seen)


def _smooth(values: np.ndarray, window: int) -> np.ndarray:
    """Centered moving average that keeps length and renormalises the edges."""
    if window <= 1:
        return values
    kernel = np.ones(window)
    weight = np.convolve(np.ones(len(values)), kernel, mode="same")
    return np.convolve(values, kernel, mode="same") / weight


def _panel_grid(n_panels: int):
    ncols = 1 if n_panels == 1 else 2
    nrows = math.ceil(n_panels / ncols)
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(6.0 * ncols, 3.8 * nrows), squeeze=False
    )
    flat = axes.ravel()
    for ax in flat[n_panels:]:
        ax.set_visible(False)
    return fig, flat[:n_panels]


def _save(fig, out_path) -> Path:
    out_path = Path(out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out_path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return out_path


def _curves_figure(columns: dict, path, smoothing: int = 1):
    require_columns(columns, ("agent",), path)
    x_col = _pick_column(columns, X_COLUMNS, path)
    mean_col = _pick_column(columns, MEAN_COLUMNS, path)
    err_col = _pick_column(columns, ERR_COLUMNS, path)
    agents = columns["agent"]
    x = np.asarray(column_floats(columns, x_col, path))
    mean = np.asarray(column_floats(columns, mean_col, path))
    err = np.asarray(column_floats(columns, err_col, path))
    modes = columns.get("mode")
    panels = _ordered_unique(modes) if modes else [None]
    fig, axes = _panel_grid(len(panels))
    for ax, panel in zip(axes, panels):
        in_panel = (
            np.ones(len(agents), dtype=bool)
            if panel is None
            else np.asarray([m == panel for m in modes])
        )
        for agent in _ordered_unique(a for a, keep in zip(agents, in_panel) if keep):
            rows = in_panel & np.asarray([a == agent for a in agents])
            order = np.argsort(x[rows], kind="stable")
            xs = x[rows][order]
            ms = _smooth(mean[rows][order], smoothing)
            es = _smooth(err[rows][order], smoothing)
            ax.plot(xs, ms, label=agent)
            ax.fill_between(xs, ms - es, ms + es, alpha=0.25)
        ax.set_xlabel(x_col)
        ax.set_ylabel(mean_col)
        if panel is not None:
            ax.set_title(panel)
        ax.legend()
    fig.tight_layout()
    return fig


def plot_learning_curves(curve_file, out_path, smoothing: int = 1) -> Path:
    """Mean score per step with a standard-error band, one curve per agent.

    Files with a ``mode`` column get one panel per mode.  ``smoothing`` is an
    optional centered moving-average window for display.
    """
    columns = read_table(curve_file)
    fig = _curves_figure(columns, curve_file, smoothing=smoothing)
    return _save(fig, out_path)


def _bars_figure(columns: dict, path):
    require_columns(columns, ("agent", "mean_final", "stderr_final"), path)
    agents = columns["agent"]
    mean = np.asarray(column_floats(columns, "mean_final", path))
    err = np.asarray(column_floats(columns, "stderr_final", path))
    modes = columns.get("mode")
    panels = _ordered_unique(modes) if modes else [None]
    fig, axes = _panel_grid(len(panels))
    for ax, panel in zip(axes, panels):
        in_panel = (
            np.ones(len(agents), dtype=bool)
            if panel is None
            else np.asarray([m == panel for m in modes])
        )
        labels = [a for a, keep in zip(agents, in_panel) if keep]
        ax.bar(labels, mean[in_panel], yerr=err[in_panel], capsize=3)
        ax.axhline(0.0, color="black", linewidth=0.8)
        ax.set_ylabel("mean_final")
        if panel is not None:
            ax.set_title(panel)
        ax.tick_params(axis="x", rotation=45)
    fig.tight_layout()
    return fig


def plot_score_bars(score_file, out_path) -> Path:
    """Final-score bars with standard-error whiskers, one panel per mode."""
    columns = read_table(score_file)
    fig = _bars_figure(columns, score_file)
    return _save(fig, out_path)


def win_rate_matrix(columns: dict, path):
    """Labels and the head-to-head win-percentage matrix of a matrix file.

    ``h[i][j]`` is the percentage of decided scenarios row agent i took from
    agent j; pairs with no decided scenario and the diagonal are NaN.
    """
    require_columns(columns, ("row_agent", "col_agent", "wins", "losses"), path)
    labels = _ordered_unique(columns["row_agent"])
    index = {label: i for i, label in enumerate(labels)}
    n = len(labels)
    matrix = np.full((n, n), np.nan)
    wins = column_floats(columns, "wins", path)
    losses = column_floats(columns, "losses", path)
    for row, col, won, lost in zip(columns["row_agent"], columns["col_agent"], wins, losses):
        if col not in index:
            raise SchemaError(f"{path}: column agent {col!r} never appears as a row agent")
        decided = won + lost
        if decided > 0:
            matrix[index[row], index[col]] = 100.0 * won / decided
    return labels, matrix


def _heatmap_figure(labels, matrix: np.ndarray):
    n = len(labels)
    side = max(4.0, 0.7 * n + 2.0)
    fig, ax = plt.subplots(figsize=(side, side))
    masked = np.ma.masked_invalid(matrix)
    image = ax.imshow(masked, cmap="RdYlGn", vmin=0.0, vmax=100.0)
    ax.set_xticks(range(n), labels, rotation=45, ha="right")
    ax.set_yticks(range(n), labels)
    for i in range(n):
        for j in range(n):
            if not np.isnan(matrix[i, j]):
                ax.text(j, i, f"{matrix[i, j]:.0f}", ha="center", va="center", fontsize=8)
    fig.colorbar(image, ax=ax, label="win % of decided scenarios")
    fig.tight_layout()
    return fig


def plot_heatmap(matrix_file, out_path):
    """Render the pairwise win-rate heatmap; returns (labels, matrix).

    The diagonal and undecided pairings are masked.  Off-diagonal decided
    cells are complementary by construction: h[i][j] + h[j][i] = 100.
    """
    columns = read_table(matrix_file)
    labels, matrix = win_rate_matrix(columns, matrix_file)
    fig = _heatmap_figure(labels, matrix)
    _save(fig, out_path)
    return labels, matrix
