from .sweep import SWEEP_COLUMNS, SweepRow, run_figure_sweep
