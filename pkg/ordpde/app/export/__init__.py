from .csv_export import read_decay_csv, read_grid_csv, write_decay_csv, write_grid_csv, write_grid_function_csv
from .report_text import (
    append_text,
    render_oracle_section,
    render_report,
    summary_payload,
    write_summary_json,
    write_text,
)

__all__ = [
    "read_decay_csv",
    "read_grid_csv",
    "write_decay_csv",
    "write_grid_csv",
    "write_grid_function_csv",
    "append_text",
    "render_oracle_section",
    "render_report",
    "summary_payload",
    "write_summary_json",
    "write_text",
]
