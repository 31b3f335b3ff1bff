"""JSON schemas for loops, disks and spheres, plus CSV export.

Parsing validates shapes and invariants and reports the path to the
offending field; serialization uses plain repr floats so that a
parse/serialize round trip is byte-identical on canonical files.
"""

import csv
import json

import numpy as np

from .errors import GerbelabError, SchemaError
from .loopcore import LoopSU2, LoopU1, RealLift
from .su2geom import DiskMap, SphereMap


def _need(obj, key, path):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    if key not in obj:
        raise SchemaError(f"{path}.{key}", "missing field")
    return obj[key]


def _as_float_array(value, path, shape_hint):
    try:
        arr = np.asarray(value, dtype=float)
    except (TypeError, ValueError):
        raise SchemaError(path, "expected a numeric array")
    if arr.ndim != len(shape_hint):
        raise SchemaError(path, f"expected rank {len(shape_hint)} data")
    for ax, want in enumerate(shape_hint):
        if want is not None and arr.shape[ax] != want:
            raise SchemaError(path, f"axis {ax} must have size {want}")
    return arr


def loop_from_json(obj, path="$"):
    group = _need(obj, "group", path)
    if group == "U1":
        lift = _as_float_array(_need(obj, "lift", path), f"{path}.lift", (None,))
        try:
            return LoopU1(RealLift.from_values(lift))
        except GerbelabError as exc:
            raise SchemaError(f"{path}.lift", str(exc))
    if group == "SU2":
        samples = _as_float_array(
            _need(obj, "samples", path), f"{path}.samples", (None, 4)
        )
        try:
            return LoopSU2.from_samples(samples)
        except GerbelabError as exc:
            raise SchemaError(f"{path}.samples", str(exc))
    raise SchemaError(f"{path}.group", f"unknown group {group!r}")


def loop_to_json(loop):
    if isinstance(loop, LoopU1):
        return {"group": "U1", "lift": loop.lift.values.tolist()}
    return {"group": "SU2", "samples": loop.samples.tolist()}


def disk_from_json(obj, path="$"):
    grid = _as_float_array(_need(obj, "grid", path), f"{path}.grid", (None, None, 4))
    collar = _need(obj, "collar", path)
    if not isinstance(collar, (int, float)) or not 0.0 < float(collar) < 1.0:
        raise SchemaError(f"{path}.collar", "collar must be a fraction in (0, 1)")
    try:
        return DiskMap.from_grid(grid, float(collar))
    except GerbelabError as exc:
        raise SchemaError(f"{path}.grid", str(exc))


def disk_to_json(disk):
    return {"grid": disk.grid.tolist(), "collar": disk.collar}


def sphere_from_json(obj, path="$"):
    grid = _as_float_array(_need(obj, "grid", path), f"{path}.grid", (None, None, 4))
    provenance = obj.get("provenance", "raw")
    if provenance not in ("glued", "trisected", "cylinder", "raw"):
        raise SchemaError(f"{path}.provenance", f"unknown tag {provenance!r}")
    try:
        return SphereMap.from_grid(grid, provenance)
    except GerbelabError as exc:
        raise SchemaError(f"{path}.grid", str(exc))


def sphere_to_json(sphere):
    return {"grid": sphere.grid.tolist(), "provenance": sphere.provenance}


def load_json(path):
    with open(path, "r", encoding="utf-8") as f:
        try:
            return json.load(f)
        except json.JSONDecodeError as exc:
            raise SchemaError("$", f"malformed JSON: {exc}")


def dump_json(obj, path):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(obj, f, sort_keys=True)
        f.write("\n")


def export_csv(path, array, header=None):
    """Write a sample grid to CSV, one row per leading index."""
    array = np.asarray(array)
    flat = array.reshape(array.shape[0], -1)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f)
        if header:
            writer.writerow(header)
        for row in flat:
            writer.writerow([repr(float(x)) for x in row])
