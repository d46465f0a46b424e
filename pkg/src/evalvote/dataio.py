"""File input and output: profile CSVs, ballot ingestion, canonical JSON.

Profile CSV format (shared by the writer and both readers): a header row
``voter,c1,...,cd`` followed by one row per voter. The continuous writer
emits ``repr`` floats so a write/read cycle is exact. Ballot files carry
integer grades on a 0..scale_max survey scale and are normalized onto
[0, 1] on ingestion.

JSON reports are canonical: sorted keys, floats at 17 significant
digits, no whitespace variation, so identical runs produce identical
bytes.
"""

from __future__ import annotations

import csv
import enum
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .analysis import HistogramData
from .errors import DataError, ParameterError
from .generators import SpatialScene
from .profiles import EvaluationProfile, GradeScale


# ---------------------------------------------------------------------------
# Profile CSV


def write_profile_csv(profile: EvaluationProfile, path) -> None:
    """Write a profile in the shared CSV format; values round-trip exactly."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["voter"] + [f"c{i + 1}" for i in range(profile.d)])
        for j in range(profile.n):
            writer.writerow([j + 1] + [repr(float(v)) for v in profile.values[j]])


def read_profile_csv(path, scale: GradeScale | None = None) -> EvaluationProfile:
    """Read a continuous-valued profile written by :func:`write_profile_csv`."""
    rows = _read_csv_rows(path)
    header, body = rows[0], rows[1:]
    if not header or header[0].strip().lower() != "voter":
        raise DataError(f"{path}: expected header starting with 'voter', got {header[:1]}")
    d = len(header) - 1
    if d < 1:
        raise DataError(f"{path}: header declares no candidate columns")
    if not body:
        raise DataError(f"{path}: no voter rows")
    values = np.empty((len(body), d))
    for r, row in enumerate(body):
        if len(row) != d + 1:
            raise DataError(
                f"{path}: row {r + 2} has {len(row)} cells, expected {d + 1}"
            )
        for c, cell in enumerate(row[1:]):
            try:
                values[r, c] = float(cell)
            except ValueError:
                raise DataError(
                    f"{path}: row {r + 2}, column {c + 2}: not a number: {cell!r}"
                ) from None
    return EvaluationProfile(values, scale or GradeScale())


def _read_csv_rows(path) -> list[list[str]]:
    try:
        with open(path, newline="") as handle:
            rows = [row for row in csv.reader(handle) if row]
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise DataError(f"{path}: file is empty")
    return rows


# ---------------------------------------------------------------------------
# Ballot ingestion


class MissingPolicy(enum.Enum):
    """What to do with blank ballot cells: refuse the file, or drop the voter."""

    REJECT = "reject"
    DROP_VOTER = "drop-voter"


@dataclass(frozen=True)
class BallotFileSpec:
    """Where to read integer ballots and how to interpret them."""

    path: str | Path
    scale_max: int
    missing_policy: MissingPolicy = MissingPolicy.REJECT

    def __post_init__(self):
        if self.scale_max < 1:
            raise ParameterError(f"scale_max must be at least 1, got {self.scale_max}")


@dataclass(frozen=True)
class LoadedBallots:
    """Ingested ballots plus the count of voters dropped by the missing policy."""

    profile: EvaluationProfile
    dropped_voters: int


def read_ballots_csv(spec: BallotFileSpec) -> LoadedBallots:
    """Read integer ballots on a 0..scale_max scale, normalized onto [0, 1].

    The result profile has scale Discrete(scale_max + 1). Every missing
    cell either rejects the whole file (listing the offending rows) or
    drops just its voter, per the spec's policy; dropped voters are
    counted, never silent.
    """
    rows = _read_csv_rows(spec.path)
    header, body = rows[0], rows[1:]
    d = len(header) - 1
    if d < 1:
        raise DataError(f"{spec.path}: header declares no candidate columns")
    if not body:
        raise DataError(f"{spec.path}: no voter rows")

    kept: list[list[float]] = []
    rows_with_missing: list[int] = []
    for r, row in enumerate(body):
        if len(row) != d + 1:
            raise DataError(
                f"{spec.path}: row {r + 2} has {len(row)} cells, expected {d + 1}"
            )
        parsed: list[float] = []
        missing = False
        for c, cell in enumerate(row[1:]):
            text = cell.strip()
            if text == "":
                missing = True
                continue
            try:
                grade = int(text)
            except ValueError:
                raise DataError(
                    f"{spec.path}: row {r + 2}, column {c + 2}: not an integer: {cell!r}"
                ) from None
            if not 0 <= grade <= spec.scale_max:
                raise DataError(
                    f"{spec.path}: row {r + 2}, column {c + 2}: grade {grade} "
                    f"outside [0, {spec.scale_max}]"
                )
            parsed.append(grade / spec.scale_max)
        if missing:
            rows_with_missing.append(r + 2)
        else:
            kept.append(parsed)

    if rows_with_missing and spec.missing_policy is MissingPolicy.REJECT:
        raise DataError(
            f"{spec.path}: missing cells in rows {rows_with_missing} "
            "(policy 'reject'; use 'drop-voter' to skip these voters)"
        )
    if not kept:
        raise DataError(f"{spec.path}: every voter row had missing cells")
    profile = EvaluationProfile(np.array(kept), GradeScale(spec.scale_max + 1))
    return LoadedBallots(profile, dropped_voters=len(rows_with_missing))


# ---------------------------------------------------------------------------
# Canonical JSON


def canonical_json(obj) -> str:
    """Serialize to canonical JSON: sorted keys, floats at 17 significant digits."""
    out: list[str] = []
    _write_canonical(obj, out)
    return "".join(out)


def _write_canonical(value, out: list[str]) -> None:
    if value is None:
        out.append("null")
    elif isinstance(value, (bool, np.bool_)):
        out.append("true" if value else "false")
    elif isinstance(value, str):
        out.append(json.dumps(value))
    elif isinstance(value, (int, np.integer)):
        out.append(str(int(value)))
    elif isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value) or math.isinf(value):
            raise ParameterError("canonical JSON cannot hold NaN or infinity")
        if value == int(value) and abs(value) < 1e16:
            out.append(f"{value:.1f}")
        else:
            out.append(format(value, ".17g"))
    elif isinstance(value, dict):
        out.append("{")
        for k, key in enumerate(sorted(value)):
            if not isinstance(key, str):
                raise ParameterError("canonical JSON keys must be strings")
            if k:
                out.append(",")
            out.append(json.dumps(key))
            out.append(":")
            _write_canonical(value[key], out)
        out.append("}")
    elif isinstance(value, (list, tuple)):
        out.append("[")
        for k, item in enumerate(value):
            if k:
                out.append(",")
            _write_canonical(item, out)
        out.append("]")
    elif isinstance(value, np.ndarray):
        _write_canonical(value.tolist(), out)
    else:
        raise ParameterError(f"cannot canonicalize type {type(value).__name__}")


def write_report_json(report, path) -> None:
    """Write a report object (or plain dict) as canonical JSON."""
    payload = report.to_json_dict() if hasattr(report, "to_json_dict") else report
    Path(path).write_text(canonical_json(payload) + "\n")


# ---------------------------------------------------------------------------
# Derived-data CSVs


def write_histogram_csv(hist: HistogramData, path) -> None:
    """Rows of bin_low,bin_high,count; endpoint atoms as degenerate bins."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["bin_low", "bin_high", "count"])
        writer.writerow([repr(0.0), repr(0.0), hist.zero_count])
        for k, count in enumerate(hist.bin_counts):
            writer.writerow([repr(hist.bin_edges[k]), repr(hist.bin_edges[k + 1]), count])
        writer.writerow([repr(1.0), repr(1.0), hist.one_count])


def write_scatter_csv(pairs: np.ndarray, path) -> None:
    """Rows of e_i,e_j in voter order."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["e_i", "e_j"])
        for a, b in pairs:
            writer.writerow([repr(float(a)), repr(float(b))])


def write_scene_csv(scene: SpatialScene, path) -> None:
    """Voter and candidate coordinates: point_type,index,x1..xk."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["point_type", "index"] + [f"x{k + 1}" for k in range(scene.dim)])
        for j, point in enumerate(scene.voters):
            writer.writerow(["voter", j + 1] + [repr(float(x)) for x in point])
        for i, point in enumerate(scene.candidates):
            writer.writerow(["candidate", i + 1] + [repr(float(x)) for x in point])
