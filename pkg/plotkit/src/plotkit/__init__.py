"""Figure scripts for splitq experiment output files.

Stateless file-in/image-out renderers for the three figure kinds the
experiment runner's CSV files support: learning curves with standard-error
bands, final-score bar panels, and pairwise win-rate heatmaps.  The scripts
re-render the emitted statistics exactly; they never recompute them.
"""

from .figures import (
    PlotSpec,
    plot_heatmap,
    plot_learning_curves,
    plot_score_bars,
    render,
    win_rate_matrix,
)
from .io import SchemaError, read_table

__all__ = [
    "PlotSpec",
    "SchemaError",
    "plot_heatmap",
    "plot_learning_curves",
    "plot_score_bars",
    "read_table",
    "render",
    "win_rate_matrix",
]

__version__ = "0.1.0"
