"""Campaign directories: ``metadata.json`` + ``runs.csv``.

Layout::

    <campaign>/metadata.json   experiment description, fixed key order
    <campaign>/runs.csv        offered_load_pps,run_index,duration_s,offered_count,delivered_count

Rows are sorted by (offered_load_pps, run_index); loads are integer packets
per second. Unknown metadata keys are kept and written back after the known
ones. Validation problems raise :class:`CampaignError` naming file, row and
the violated rule; soft problems (run-count mismatches) become warnings that
are also appended to the metadata ``notes`` so they survive a write.
"""

from __future__ import annotations

import csv
import datetime
import hashlib
import io
import json
import os
import re
from dataclasses import dataclass, field, replace
from itertools import groupby
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence

from pastrami.metrics import (
    DEFAULT_TX_TOLERANCE,
    InvalidInputError,
    LoadLevelStats,
    RunObservation,
    aggregate_level,
)

METADATA_FILE = "metadata.json"
RUNS_FILE = "runs.csv"
RUNS_HEADER = ("offered_load_pps", "run_index", "duration_s", "offered_count", "delivered_count")

EXPERIMENT_CLASSES = ("ipv6-routing", "ebpf-routing")
ENVIRONMENTS = ("bare-metal", "virtual-machine", "container")
CPU_PINNINGS = ("unpinned", "pin-1-cpu", "pin-2-cpu")
NIC_RING_BUFFERS = ("small-512", "large-4096")

METADATA_KEYS = (
    "experiment_class",
    "testbed",
    "environment",
    "kernel_version",
    "cpu_pinning",
    "nic_ring_buffer",
    "runs",
    "duration_s",
    "packet_size_bytes",
    "date",
    "version",
    "notes",
)

_OTHER_RE = re.compile(r"^other:.+$")
_CUSTOM_RE = re.compile(r"^custom:([1-9][0-9]*)$")


class CampaignError(InvalidInputError):
    """A campaign file broke a validation rule."""

    def __init__(self, file: str, rule: str, detail: str = "", row: Optional[int] = None):
        self.file = file
        self.row = row
        self.rule = rule
        self.detail = detail
        where = file if row is None else f"{file}:{row}"
        msg = f"{where}: violates rule '{rule}'"
        super().__init__(f"{msg}: {detail}" if detail else msg)


@dataclass(frozen=True)
class ExperimentMetadata:
    """Description of one measurement campaign.

    Enum escapes are spelled ``other:<text>`` for the experiment class and
    ``custom:<count>`` for the NIC ring size.
    """

    experiment_class: str
    testbed: str
    environment: str
    kernel_version: str
    cpu_pinning: str
    nic_ring_buffer: str
    runs: int
    duration_s: float
    packet_size_bytes: int
    date: str
    version: str
    notes: tuple[str, ...] = ()
    extra: tuple[tuple[str, Any], ...] = ()

    def __post_init__(self) -> None:
        problems = _metadata_problems(self)
        if problems:
            raise InvalidInputError("; ".join(problems))

    def to_dict(self) -> dict:
        d = {k: getattr(self, k) for k in METADATA_KEYS}
        d["notes"] = list(self.notes)
        d.update(self.extra)
        return d

    @classmethod
    def from_dict(cls, d: dict, file: str = METADATA_FILE) -> "ExperimentMetadata":
        missing = [k for k in METADATA_KEYS if k != "notes" and k not in d]
        if missing:
            raise CampaignError(file, "required metadata keys present", ", ".join(missing))
        notes = d.get("notes", [])
        if not isinstance(notes, list) or not all(isinstance(n, str) for n in notes):
            raise CampaignError(file, "notes is a list of strings")
        kwargs = {k: d[k] for k in METADATA_KEYS if k != "notes"}
        extra = tuple((k, v) for k, v in d.items() if k not in METADATA_KEYS)
        try:
            return cls(**kwargs, notes=tuple(notes), extra=extra)
        except InvalidInputError as exc:
            raise CampaignError(file, "metadata field constraints", str(exc)) from None


def _metadata_problems(m: ExperimentMetadata) -> list[str]:
    out = []
    if m.experiment_class not in EXPERIMENT_CLASSES and not _OTHER_RE.match(str(m.experiment_class)):
        out.append(f"experiment_class {m.experiment_class!r} not in {EXPERIMENT_CLASSES} or other:<text>")
    if m.environment not in ENVIRONMENTS:
        out.append(f"environment {m.environment!r} not in {ENVIRONMENTS}")
    if m.cpu_pinning not in CPU_PINNINGS:
        out.append(f"cpu_pinning {m.cpu_pinning!r} not in {CPU_PINNINGS}")
    if m.nic_ring_buffer not in NIC_RING_BUFFERS and not _CUSTOM_RE.match(str(m.nic_ring_buffer)):
        out.append(f"nic_ring_buffer {m.nic_ring_buffer!r} not in {NIC_RING_BUFFERS} or custom:<count>")
    for name in ("testbed", "kernel_version", "version", "date"):
        if not isinstance(getattr(m, name), str):
            out.append(f"{name} must be a string")
    if not _is_int(m.runs) or m.runs < 1:
        out.append("runs must be an integer >= 1")
    if isinstance(m.duration_s, bool) or not isinstance(m.duration_s, (int, float)) or not m.duration_s > 0:
        out.append("duration_s must be a number > 0")
    if not _is_int(m.packet_size_bytes) or m.packet_size_bytes < 1:
        out.append("packet_size_bytes must be an integer > 0")
    if isinstance(m.date, str):
        try:
            datetime.date.fromisoformat(m.date)
        except ValueError:
            out.append(f"date {m.date!r} is not an ISO-8601 date")
    return out


def _is_int(x: Any) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


@dataclass(frozen=True)
class LoadLossCurve:
    """Runs grouped by offered load, with per-level statistics."""

    metadata: ExperimentMetadata
    levels: tuple[tuple[int, tuple[RunObservation, ...]], ...]
    stats: tuple[LoadLevelStats, ...]
    warnings: tuple[str, ...] = field(default=(), compare=False)

    @classmethod
    def from_runs(cls, metadata: ExperimentMetadata, runs: Iterable[RunObservation]) -> "LoadLossCurve":
        runs = sorted(runs, key=lambda r: r.offered_load)
        if not runs:
            raise InvalidInputError("a campaign needs at least one run")
        levels = tuple(
            (int(load), tuple(group)) for load, group in groupby(runs, key=lambda r: r.offered_load)
        )
        warnings = []
        for load, group in levels:
            if len(group) != metadata.runs:
                warnings.append(
                    f"level {load} pps has {len(group)} runs, metadata runs={metadata.runs}"
                )
            if any(r.duration != metadata.duration_s for r in group):
                warnings.append(f"level {load} pps has a duration differing from metadata duration_s")
        stats = tuple(aggregate_level(group) for _, group in levels)
        notes = metadata.notes + tuple(w for w in warnings if w not in metadata.notes)
        return cls(replace(metadata, notes=notes), levels, stats, tuple(warnings))

    @property
    def runs(self) -> list[RunObservation]:
        return [r for _, group in self.levels for r in group]

    @property
    def loads(self) -> list[int]:
        return [load for load, _ in self.levels]

    def checksum(self) -> str:
        """sha256 of the canonical runs.csv text; links reports back to data."""
        return hashlib.sha256(runs_csv_text(self).encode()).hexdigest()


def _fmt_num(x: float) -> str:
    if isinstance(x, int):
        return str(x)
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def runs_csv_text(curve: LoadLossCurve) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RUNS_HEADER)
    for load, group in curve.levels:
        for i, r in enumerate(group):
            w.writerow((load, i, _fmt_num(r.duration), r.offered_count, r.delivered_count))
    return buf.getvalue()


def metadata_json_text(curve: LoadLossCurve) -> str:
    return json.dumps(curve.metadata.to_dict(), indent=2, ensure_ascii=False) + "\n"


def write_campaign(curve: LoadLossCurve, path: "os.PathLike[str] | str") -> None:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / METADATA_FILE, "w", encoding="utf-8", newline="") as f:
        f.write(metadata_json_text(curve))
    with open(out / RUNS_FILE, "w", encoding="utf-8", newline="") as f:
        f.write(runs_csv_text(curve))


def read_metadata(path: "os.PathLike[str] | str") -> ExperimentMetadata:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise CampaignError(str(p), "metadata.json exists") from None
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CampaignError(str(p), "metadata.json is valid JSON", str(exc), row=exc.lineno) from None
    if not isinstance(d, dict):
        raise CampaignError(str(p), "metadata.json is a JSON object")
    return ExperimentMetadata.from_dict(d, str(p))


def _parse_int(text: str, col: str, file: str, row: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise CampaignError(file, f"{col} is an integer", repr(text), row) from None


def read_runs(path: "os.PathLike[str] | str", tx_tolerance: float = DEFAULT_TX_TOLERANCE) -> list[RunObservation]:
    p = Path(path)
    file = str(p)
    try:
        f = open(p, encoding="utf-8", newline="")
    except FileNotFoundError:
        raise CampaignError(file, "runs.csv exists") from None
    with f:
        rows = list(csv.reader(f))
    if not rows or tuple(rows[0]) != RUNS_HEADER:
        raise CampaignError(file, "header is " + ",".join(RUNS_HEADER), row=1)

    runs = []
    prev_key = None
    for line_no, row in enumerate(rows[1:], start=2):
        if len(row) != len(RUNS_HEADER):
            raise CampaignError(file, f"row has {len(RUNS_HEADER)} fields", f"got {len(row)}", line_no)
        load = _parse_int(row[0], "offered_load_pps", file, line_no)
        idx = _parse_int(row[1], "run_index", file, line_no)
        try:
            duration = float(row[2])
        except ValueError:
            raise CampaignError(file, "duration_s is a number", repr(row[2]), line_no) from None
        sent = _parse_int(row[3], "offered_count", file, line_no)
        delivered = _parse_int(row[4], "delivered_count", file, line_no)

        if load <= 0:
            raise CampaignError(file, "offered_load_pps > 0", str(load), line_no)
        if not duration > 0:
            raise CampaignError(file, "duration_s > 0", row[2], line_no)
        if not (sent >= delivered >= 0 and sent > 0):
            raise CampaignError(
                file, "offered_count >= delivered_count >= 0 and > 0", f"{sent}/{delivered}", line_no
            )
        key = (load, idx)
        if prev_key is not None and key <= prev_key:
            rule = "unique (offered_load_pps, run_index)" if key == prev_key else \
                "rows sorted by (offered_load_pps, run_index)"
            raise CampaignError(file, rule, f"{key} after {prev_key}", line_no)
        prev_key = key

        run = RunObservation(load, duration, sent, delivered)
        try:
            run.check_tx(tx_tolerance)
        except InvalidInputError as exc:
            raise CampaignError(file, "offered_count within tx_tolerance of load*duration", str(exc), line_no) from None
        runs.append(run)
    if not runs:
        raise CampaignError(file, "at least one run row", row=2)
    return runs


def read_campaign(path: "os.PathLike[str] | str", tx_tolerance: float = DEFAULT_TX_TOLERANCE) -> LoadLossCurve:
    root = Path(path)
    if not root.is_dir():
        raise CampaignError(str(root), "campaign path is a directory")
    metadata = read_metadata(root / METADATA_FILE)
    runs = read_runs(root / RUNS_FILE, tx_tolerance)
    try:
        return LoadLossCurve.from_runs(metadata, runs)
    except InvalidInputError as exc:
        raise CampaignError(str(root / RUNS_FILE), "runs within a level are consistent", str(exc)) from None


def synthetic_metadata(
    runs: int,
    duration_s: float,
    packet_size_bytes: int = 64,
    date: str = "1970-01-01",
    version: str = "synthetic",
    notes: Sequence[str] = (),
    **extra: Any,
) -> ExperimentMetadata:
    """Metadata for generated campaigns; fixed defaults keep output reproducible."""
    return ExperimentMetadata(
        experiment_class="other:synthetic",
        testbed="synthetic",
        environment="bare-metal",
        kernel_version="n/a",
        cpu_pinning="unpinned",
        nic_ring_buffer="small-512",
        runs=runs,
        duration_s=duration_s,
        packet_size_bytes=packet_size_bytes,
        date=date,
        version=version,
        notes=tuple(notes),
        extra=tuple(extra.items()),
    )
