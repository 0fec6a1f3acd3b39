# -*- coding: utf-8 -*-
"""Run reports: JSON on disk, an HDF5 sibling for the arrays, and a catalogue entry."""

from __future__ import annotations

import json
import logging
import os
import re
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional

import h5py
import numpy as np

from .config import get_data_folder, get_save_db
from .db import generate_filename, get_next_number, insert_run

__all__ = ["SCHEMA_VERSION", "Report", "load_report", "to_jsonable"]

logger = logging.getLogger(__name__)

#: Bumped whenever a report field changes meaning or layout.
SCHEMA_VERSION = 1

_LABEL_RE = re.compile(r"[^A-Za-z0-9_.]+")


def to_jsonable(value: Any) -> Any:
    """Convert numpy, complex and ``Fraction`` values into plain JSON types.

    Complex numbers become ``[re, im]``, fractions their ``"p/q"`` string, arrays nested lists.

    """
    if isinstance(value, Mapping):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, Fraction):
        return str(value)
    if value is None or isinstance(value, str):
        return value
    return str(value)


class Report:
    """Result of one CLI command.

    Checks are recorded with :meth:`check`, free-form results with :meth:`add_section`, dense
    arrays with :meth:`add_array` and stage failures with :meth:`fail_stage`. The JSON body
    holds no wall-clock data, so a rerun with the same configuration is byte-identical.

    """

    def __init__(self, command: str, config: Mapping[str, Any]) -> None:
        self.command = command
        self.config = dict(config)
        self.checks: Dict[str, Dict[str, Any]] = {}
        self.sections: Dict[str, Any] = {}
        self.arrays: Dict[str, np.ndarray] = {}
        self.errors: List[Dict[str, str]] = []

    def check(
        self,
        name: str,
        passed: bool,
        value: Any = None,
        tolerance: Optional[float] = None,
    ) -> bool:
        """Record a named pass/fail property; returns *passed*."""
        if name in self.checks:
            logger.warning("check %s recorded twice; keeping the later result", name)
        self.checks[name] = {"passed": bool(passed), "value": value, "tolerance": tolerance}
        if not passed:
            logger.warning("check %s failed (value %s, tolerance %s)", name, value, tolerance)
        return bool(passed)

    def add_section(self, name: str, data: Any) -> None:
        self.sections[name] = data

    def add_array(self, name: str, array: Any) -> None:
        self.arrays[name] = np.asarray(array)

    def fail_stage(self, stage: str, exc: BaseException) -> None:
        """Record that *stage* raised *exc*."""
        logger.error("stage %s failed: %s", stage, exc)
        self.errors.append({"stage": stage, "error": f"{type(exc).__name__}: {exc}"})

    @property
    def passed(self) -> bool:
        return not self.errors and all(c["passed"] for c in self.checks.values())

    def to_dict(self) -> Dict[str, Any]:
        body: Dict[str, Any] = dict(self.sections)
        body.update(
            {
                "schema_version": SCHEMA_VERSION,
                "command": self.command,
                "config": self.config,
                "checks": self.checks,
                "errors": self.errors,
                "arrays": self.arrays,
                "passed": self.passed,
            }
        )
        return to_jsonable(body)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def save(
        self,
        label: str,
        out: Optional[str] = None,
        *,
        h5: bool = True,
        save_db: Optional[bool] = None,
    ) -> str:
        """Write the report and return the JSON path.

        :param label: Short input name, used in the file name and the catalogue.
        :param out: Explicit JSON path; defaults to ``<number>-<label>-<command>.json`` in the
            configured data folder.
        :param h5: Also write ``<stem>.h5`` with scalars as attributes and arrays as datasets.
        :param save_db: Insert a catalogue document; defaults to ``THETAGRP_SAVE_DB``.

        """
        if save_db is None:
            save_db = get_save_db()
        label = _LABEL_RE.sub("_", label).strip("_") or self.command

        db_available = False
        number = None
        if save_db:
            try:
                number = get_next_number()
                db_available = True
            except Exception as exc:
                logger.warning("database unavailable (%s); using timestamp-based numbering", exc)
        if number is None:
            number = datetime.now(timezone.utc).strftime("%Y%m%d%H%M%S")

        if out is None:
            data_folder = get_data_folder()
            os.makedirs(data_folder, exist_ok=True)
            save_path = os.path.join(data_folder, generate_filename(number, label, self.command))
        else:
            save_path = os.path.realpath(out)
            folder = os.path.dirname(save_path)
            if folder:
                os.makedirs(folder, exist_ok=True)

        text = self.to_json()
        with open(save_path, "w", encoding="utf-8") as fh:
            fh.write(text)
        logger.info("report saved to %s", save_path)

        h5_path = None
        if h5:
            h5_path = os.path.splitext(save_path)[0] + ".h5"
            self._write_h5(h5_path, label, text)

        if not save_db:
            return save_path
        if db_available:
            try:
                document = self._build_document(number, label, save_path, h5_path)
                doc_id = insert_run(document)
                logger.info("report catalogued with id %s", doc_id)
            except Exception as exc:
                logger.warning("failed to insert into MongoDB (%s); report kept locally", exc)
        else:
            logger.info("report kept locally at %s; catalogue skipped", save_path)
        return save_path

    def _write_h5(self, path: str, label: str, text: str) -> None:
        with h5py.File(path, "w") as h5f:
            h5f.attrs["schema_version"] = SCHEMA_VERSION
            h5f.attrs["command"] = self.command
            h5f.attrs["label"] = label
            h5f.attrs["passed"] = self.passed
            dt = h5py.string_dtype(encoding="utf-8")
            h5f.create_dataset("report", data=text, dtype=dt)
            for key, value in self.config.items():
                if value is None:
                    continue
                try:
                    if np.isscalar(value):
                        h5f.attrs[f"config_{key}"] = value
                    else:
                        h5f.create_dataset(f"config/{key}", data=np.asarray(value))
                except (TypeError, ValueError) as err:
                    logger.warning("unable to save config %s: %s", key, err)
            for name, array in self.arrays.items():
                try:
                    h5f.create_dataset(f"arrays/{name}", data=array)
                except (TypeError, ValueError) as err:
                    logger.warning("unable to save array %s: %s", name, err)
        logger.info("arrays saved to %s", path)

    def _build_document(
        self, number: str, label: str, file_path: str, h5_path: Optional[str]
    ) -> Dict[str, Any]:
        """Catalogue document: identifiers, scalar config fields and check outcomes."""
        document: Dict[str, Any] = {
            "utc_time": datetime.now(timezone.utc).isoformat(),
            "number": number,
            "command": self.command,
            "label": label,
            "file": file_path,
            "h5_file": h5_path,
            "schema_version": SCHEMA_VERSION,
            "passed": self.passed,
            "checks": {name: c["passed"] for name, c in self.checks.items()},
            "failed_checks": sorted(n for n, c in self.checks.items() if not c["passed"]),
            "errors": list(self.errors),
        }
        for key, value in self.config.items():
            if key in document:
                continue
            converted = to_jsonable(value)
            if isinstance(converted, (list, dict)):
                continue
            document[key] = converted
        return document


def load_report(path: str) -> Dict[str, Any]:
    """Read a saved JSON report back."""
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
