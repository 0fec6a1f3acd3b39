# -*- coding: utf-8 -*-
"""Run catalogue in MongoDB."""
from .database import (
    generate_filename,
    get_next_number,
    insert_run,
    list_labels,
    select_runs,
)

__all__ = [
    "get_next_number",
    "insert_run",
    "generate_filename",
    "select_runs",
    "list_labels",
]
