"""Failure-record ingestion, validation, and per-component segmentation.

Records arrive as JSONL (one object per line) or CSV with a header row.
Document index = position in the RecordSet, fixed for the whole run.
"""
from __future__ import annotations

import csv
import datetime
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

from .errors import DataError

# The four component tags analyzed in the source study; extendable via the
# allowed_components argument (e.g. pipe rams, SPM valves).
DEFAULT_COMPONENTS = ("annular", "shear_ram", "regulator", "ccsv")

_FIELDS = ("record_id", "component", "description", "event_date", "downtime_hours")


class MalformedRow(DataError):
    def __init__(self, line_no: int, reason: str):
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"line {line_no}: {reason}")


class DuplicateId(DataError):
    def __init__(self, record_id: str):
        self.record_id = record_id
        super().__init__(f"duplicate record_id {record_id!r}")


class EmptyFile(DataError):
    pass


class EmptySegment(DataError):
    def __init__(self, tag: str):
        self.tag = tag
        super().__init__(f"no record has component {tag!r}")


@dataclass(frozen=True)
class FailureRecord:
    """One corrective-maintenance event."""

    record_id: str
    component: str
    description: str
    event_date: str | None = None
    downtime_hours: float | None = None

    def __post_init__(self):
        if not self.record_id:
            raise ValueError("record_id must be non-empty")
        if not self.description.strip():
            raise ValueError("description must be non-empty after trimming")
        if self.downtime_hours is not None and self.downtime_hours < 0:
            raise ValueError("downtime_hours must be >= 0")

    def to_dict(self) -> dict:
        d = {"record_id": self.record_id, "component": self.component,
             "description": self.description}
        if self.event_date is not None:
            d["event_date"] = self.event_date
        if self.downtime_hours is not None:
            d["downtime_hours"] = self.downtime_hours
        return d


@dataclass(frozen=True)
class RecordSet:
    """Ordered, id-unique collection of records. Order defines document index."""

    records: tuple[FailureRecord, ...]
    source_label: str = ""

    def __post_init__(self):
        seen: set[str] = set()
        for rec in self.records:
            if rec.record_id in seen:
                raise DuplicateId(rec.record_id)
            seen.add(rec.record_id)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def record_ids(self) -> tuple[str, ...]:
        return tuple(r.record_id for r in self.records)


@dataclass(frozen=True)
class CorpusStats:
    record_count: int
    per_component_counts: Mapping[str, int]
    mean_token_estimate: float
    total_downtime_hours: float


def _record_from_mapping(row: Mapping, line_no: int,
                         allowed_components: Sequence[str] | None) -> FailureRecord:
    for key in ("record_id", "component", "description"):
        value = row.get(key)
        if value is None or str(value) == "":
            raise MalformedRow(line_no, f"missing {key}")
    component = str(row["component"])
    if allowed_components is not None and component not in allowed_components:
        raise MalformedRow(
            line_no, f"component {component!r} not in allow-list {list(allowed_components)}")
    event_date = row.get("event_date")
    if event_date is not None and event_date != "":
        try:
            datetime.date.fromisoformat(str(event_date))
        except ValueError:
            raise MalformedRow(line_no, f"event_date {event_date!r} is not YYYY-MM-DD")
        event_date = str(event_date)
    else:
        event_date = None
    downtime = row.get("downtime_hours")
    if downtime is not None and downtime != "":
        try:
            downtime = float(downtime)
        except (TypeError, ValueError):
            raise MalformedRow(line_no, f"downtime_hours {downtime!r} is not a number")
    else:
        downtime = None
    try:
        return FailureRecord(
            record_id=str(row["record_id"]),
            component=component,
            description=str(row["description"]),
            event_date=event_date,
            downtime_hours=downtime,
        )
    except ValueError as exc:
        raise MalformedRow(line_no, str(exc))


def load_records(path: str | Path, format: str | None = None, *,
                 allowed_components: Sequence[str] | None = DEFAULT_COMPONENTS,
                 ) -> RecordSet:
    """Load a RecordSet from a JSONL or CSV file, preserving file order.

    ``format`` is ``"jsonl"`` or ``"csv"``; when omitted it is inferred from
    the file suffix (``.csv`` means CSV, anything else JSONL). Pass
    ``allowed_components=None`` to accept arbitrary component tags.
    """
    path = Path(path)
    if format is None:
        format = "csv" if path.suffix.lower() == ".csv" else "jsonl"
    if format not in ("jsonl", "csv"):
        raise ValueError(f"unknown format {format!r}")
    # utf-8-sig: spreadsheet exports often lead with a BOM
    data = path.read_text(encoding="utf-8-sig")

    records: list[FailureRecord] = []
    seen: set[str] = set()

    def add(rec: FailureRecord):
        if rec.record_id in seen:
            raise DuplicateId(rec.record_id)
        seen.add(rec.record_id)
        records.append(rec)

    if format == "jsonl":
        for line_no, line in enumerate(data.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRow(line_no, f"invalid JSON: {exc.msg}")
            if not isinstance(row, dict):
                raise MalformedRow(line_no, "row is not a JSON object")
            add(_record_from_mapping(row, line_no, allowed_components))
    else:
        reader = csv.DictReader(io.StringIO(data))
        if reader.fieldnames is None:
            raise EmptyFile(str(path))
        missing = {"record_id", "component", "description"} - set(reader.fieldnames)
        if missing:
            raise MalformedRow(1, f"header missing columns {sorted(missing)}")
        for line_no, row in enumerate(reader, start=2):
            add(_record_from_mapping(row, line_no, allowed_components))

    if not records:
        raise EmptyFile(str(path))
    return RecordSet(records=tuple(records), source_label=path.name)


def write_records(record_set: RecordSet, path: str | Path) -> None:
    """Serialize as JSONL; re-serializing a loaded set is byte-stable."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for rec in record_set:
            fh.write(json.dumps(rec.to_dict(), sort_keys=True) + "\n")


def segment_by_component(record_set: RecordSet, component: str) -> RecordSet:
    """Keep only records with the given component tag, order preserved."""
    if not component:
        raise ValueError("component tag must be non-empty")
    kept = tuple(r for r in record_set if r.component == component)
    if not kept:
        raise EmptySegment(component)
    label = record_set.source_label
    return RecordSet(records=kept, source_label=f"{label}:{component}" if label else component)


def corpus_stats(record_set: RecordSet) -> CorpusStats:
    """Exact counts plus a whitespace-token length estimate per record."""
    n = len(record_set)
    per_component: dict[str, int] = {}
    total_tokens = 0
    total_downtime = 0.0
    for rec in record_set:
        per_component[rec.component] = per_component.get(rec.component, 0) + 1
        total_tokens += len(rec.description.split())
        if rec.downtime_hours is not None:
            total_downtime += rec.downtime_hours
    return CorpusStats(
        record_count=n,
        per_component_counts=per_component,
        mean_token_estimate=(total_tokens / n) if n else 0.0,
        total_downtime_hours=total_downtime,
    )
