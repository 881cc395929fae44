"""Serialization and rendering: CSV, machine-profile files, SVG charts,
matplotlib figures, comparison summaries."""

from .chart import render_profile_chart
from .csvio import COLUMNS, CsvSchemaError, read_csv, write_csv
from .figures import render_profile_figure
from .machine import (REFERENCE_MACHINE_NAME, MachineFileError,
                      read_machine_profile, reference_machine,
                      write_machine_profile)
from .summary import summarize_comparison

__all__ = [
    "render_profile_chart", "render_profile_figure",
    "COLUMNS", "CsvSchemaError", "read_csv", "write_csv",
    "REFERENCE_MACHINE_NAME", "MachineFileError", "read_machine_profile",
    "reference_machine", "write_machine_profile",
    "summarize_comparison",
]
