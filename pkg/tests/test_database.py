"""Offline checks of the run catalogue queries.

- ``select_runs`` builds exact, regex and time-window filters and passes extra fields through;
- matching documents come back as a ``pandas.DataFrame`` without ``_id``; no match is an empty
  frame;
- ``list_labels`` groups by label and an empty catalogue gives the two named columns;
- run numbers continue from the highest stored one and start at ``00000001``.

The collection is replaced by an in-memory fake, so nothing talks to MongoDB. Run from the
repository root::

    python tests/test_database.py
"""

import sys
from datetime import datetime, timezone

import pandas as pd

import thetagrp.db.database as database

results = []


def check(label, condition, detail=""):
    results.append((label, bool(condition)))
    print(f"{'PASS' if condition else 'FAIL'}  {label}" + (f"  [{detail}]" if detail else ""))


class FakeCollection:
    """Records the last query and hands back canned documents."""

    def __init__(self, documents, aggregated=None):
        self.documents = documents
        self.aggregated = aggregated or []
        self.queries = []
        self.pipelines = []

    def find(self, query):
        self.queries.append(query)
        return [dict(doc) for doc in self.documents]

    def find_one(self, sort=None, projection=None):
        if not self.documents:
            return None
        return max(self.documents, key=lambda doc: doc["number"])

    def aggregate(self, pipeline):
        self.pipelines.append(pipeline)
        return list(self.aggregated)


DOCUMENTS = [
    {"_id": "a1", "number": "00000007", "command": "curve-thomae", "label": "x6m1", "N": 2},
    {"_id": "a2", "number": "00000008", "command": "curve-thomae", "label": "x6m1", "N": 2},
]

# ---------------------------------------------------------------- select_runs

fake = FakeCollection(DOCUMENTS)
database._get_collection = lambda: fake

frame = database.select_runs(command="curve-thomae", label="x6m1", N=2, passed=None)
expected = {"command": "curve-thomae", "label": "x6m1", "N": 2}
check("exact filters are plain values", fake.queries[-1] == expected, fake.queries[-1])
check("None-valued extras are dropped", "passed" not in fake.queries[-1])
check("one row per document", isinstance(frame, pd.DataFrame) and len(frame) == 2)
check("_id is stripped", "_id" not in frame.columns, list(frame.columns))
check("fields become columns", list(frame["number"]) == ["00000007", "00000008"])

database.select_runs(label="x6", string_match="regex")
check(
    "regex filters are case-insensitive",
    fake.queries[-1] == {"label": {"$regex": "x6", "$options": "i"}},
    fake.queries[-1],
)

start = datetime(2026, 1, 1, tzinfo=timezone.utc)
database.select_runs(start_time=start, end_time="2026-02-01T00:00:00Z")
window = fake.queries[-1].get("utc_time", {})
check("start of the window is ISO", window.get("$gte") == "2026-01-01T00:00:00+00:00", window)
check("Z suffix is read as UTC", window.get("$lte") == "2026-02-01T00:00:00+00:00", window)

try:
    database.select_runs(string_match="fuzzy")
except ValueError as exc:
    check("unknown match modes are rejected", "string_match" in str(exc))
else:
    check("unknown match modes are rejected", False, "accepted")

database._get_collection = lambda: FakeCollection([])
check("no match is an empty frame", database.select_runs(command="cohomology").empty)

# ---------------------------------------------------------------- list_labels

fake = FakeCollection(DOCUMENTS, aggregated=[{"label": "x6m1", "count": 2}])
database._get_collection = lambda: fake
labels = database.list_labels()
check("labels are counted", labels.to_dict("records") == [{"label": "x6m1", "count": 2}])
stages = [next(iter(stage)) for stage in fake.pipelines[-1]]
order = ["$match", "$group", "$sort", "$project"]
check("pipeline matches, groups, sorts, projects", stages == order, stages)

database._get_collection = lambda: FakeCollection([])
empty = database.list_labels()
check("empty catalogue keeps the columns", list(empty.columns) == ["label", "count"])

# ---------------------------------------------------------------- numbering

database._get_collection = lambda: FakeCollection(DOCUMENTS)
check("numbers continue from the highest", database.get_next_number() == "00000009")
database._get_collection = lambda: FakeCollection([])
check("an empty catalogue starts at 1", database.get_next_number() == "00000001")

# ------------------------------------------------------------------------------ summary
failed = [label for label, ok in results if not ok]
print(f"\n{len(results) - len(failed)}/{len(results)} passed")
if failed:
    for label in failed:
        print("  FAILED:", label)
    sys.exit(1)
