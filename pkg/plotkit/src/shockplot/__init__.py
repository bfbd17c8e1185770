"""shockplot: renders shocklab artifacts (field snapshots, Lyapunov traces,
residual histories) into figures, reading only the documented file formats."""

from .figures import plot_contours, plot_phase_portrait, plot_residuals
from .readers import (
    ContourLevels,
    FieldSnapshot,
    Trace,
    base_states_match,
    read_contour_sidecar,
    read_field,
    read_residual_history,
    read_trace,
)

__version__ = "0.1.0"
