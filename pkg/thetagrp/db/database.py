# -*- coding: utf-8 -*-
"""MongoDB catalogue of finished runs."""
from __future__ import annotations

from datetime import datetime, timezone
from typing import Any, Dict, Optional, Union

import pandas as pd
from pymongo.mongo_client import MongoClient

from ..config import (
    get_mongodb_collection_name,
    get_mongodb_db_name,
    get_mongodb_uri,
)


def _get_collection():
    """Get the MongoDB collection for run reports."""
    client = MongoClient(get_mongodb_uri())
    db = client[get_mongodb_db_name()]
    return db[get_mongodb_collection_name()]


def get_next_number() -> str:
    """Get the next available run number from the database.

    :returns: 8-digit zero-padded number string (e.g. ``"00000001"``).

    """
    collection = _get_collection()
    result = collection.find_one(sort=[("number", -1)], projection={"number": 1})
    if result and "number" in result:
        next_number = int(result["number"]) + 1
    else:
        next_number = 1
    return str(next_number).zfill(8)


def generate_filename(number: str, label: str, command: str) -> str:
    """Generate the file name of a run report.

    :param number: Run number, 8 digits from the database or a timestamp fallback.
    :param label: Short name of the input (curve or period matrix file stem, or the command).
    :param command: CLI command that produced the report, e.g. ``"curve-thomae"``.
    :returns: ``<number>-<label>-<command>.json``

    """
    return f"{number}-{label}-{command}.json"


def insert_run(document: Dict[str, Any]) -> str:
    """Insert a run document and return its id as a string.

    ``utc_time`` is added if the document lacks one.

    """
    collection = _get_collection()
    if "utc_time" not in document:
        document["utc_time"] = datetime.now(timezone.utc).isoformat()
    result = collection.insert_one(document)
    return str(result.inserted_id)


def _as_iso(value: Union[datetime, str]) -> str:
    if isinstance(value, str):
        value = datetime.fromisoformat(value.replace("Z", "+00:00"))
    return value.isoformat()


def select_runs(
    command: Optional[str] = None,
    label: Optional[str] = None,
    start_time: Optional[Union[datetime, str]] = None,
    end_time: Optional[Union[datetime, str]] = None,
    string_match: str = "exact",
    **kwargs,
) -> pd.DataFrame:
    """Query the catalogue for runs matching the given criteria.

    :param command: CLI command, e.g. ``"torus-moduli"``.
    :param label: Input label the run was saved under.
    :param start_time: Lower bound on ``utc_time`` (datetime or ISO string).
    :param end_time: Upper bound on ``utc_time`` (datetime or ISO string).
    :param string_match: ``"exact"`` or ``"regex"`` (case-insensitive) for string fields.
    :param kwargs: Further field filters, e.g. ``N=2`` or ``passed=True``.
    :returns: One row per matching document, ``_id`` stripped; empty if nothing matches.
    :raises ValueError: If *string_match* is not ``"exact"`` or ``"regex"``.

    """
    if string_match not in ("exact", "regex"):
        raise ValueError(f"string_match must be 'exact' or 'regex', got {string_match!r}")
    collection = _get_collection()
    query: Dict[str, Any] = {}

    def add_string_filter(field: str, value: Optional[str]) -> None:
        if value is None:
            return
        if string_match == "regex":
            query[field] = {"$regex": value, "$options": "i"}
        else:
            query[field] = value

    add_string_filter("command", command)
    add_string_filter("label", label)

    if start_time is not None or end_time is not None:
        time_query: Dict[str, Any] = {}
        if start_time is not None:
            time_query["$gte"] = _as_iso(start_time)
        if end_time is not None:
            time_query["$lte"] = _as_iso(end_time)
        query["utc_time"] = time_query

    for key, value in kwargs.items():
        if value is None:
            continue
        if isinstance(value, str):
            add_string_filter(key, value)
        else:
            query[key] = value

    results = list(collection.find(query))
    if not results:
        return pd.DataFrame()
    for doc in results:
        doc.pop("_id", None)
    return pd.DataFrame(results)


def list_labels() -> pd.DataFrame:
    """Count runs per label.

    :returns: DataFrame with columns ``['label', 'count']``, sorted by count, descending.

    """
    collection = _get_collection()
    pipeline = [
        {"$match": {"label": {"$exists": True, "$ne": None}}},
        {"$group": {"_id": "$label", "count": {"$sum": 1}}},
        {"$sort": {"count": -1}},
        {"$project": {"_id": 0, "label": "$_id", "count": 1}},
    ]
    results = list(collection.aggregate(pipeline))
    if not results:
        return pd.DataFrame(columns=["label", "count"])
    return pd.DataFrame(results)
