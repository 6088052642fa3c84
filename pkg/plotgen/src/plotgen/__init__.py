"""Static figure generation for rheakit experiment outputs."""

from .figures import ColumnError, FigureInfo, plot_pareto, plot_scaling, plot_violins

__version__ = "0.1.0"
