"""File formats: JSON inputs/reports and trajectory CSV.

Every float is written with 17 significant digits so that files re-parse to
the identical binary value and reruns can be compared byte for byte.

Dual quaternion entries in input files may be written as
``a`` (real), ``[s, d]`` (dual number), ``[w, x, y, z]`` (quaternion) or
``[w, x, y, z, dw, dx, dy, dz]``.  Vertex indices are 0-based in files.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .dual import DualNumber
from .dualquat import DualQuaternion
from .errors import ValidationError
from .graph import PoseAssignment, VisibilityGraph
from .matrix import DQMatrix


def format_float(x: float) -> str:
    """17-significant-digit text that always reads back as a float."""
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    s = format(x, ".17g")
    if not any(ch in s for ch in ".en"):
        s += ".0"
    return s


def _render(obj: Any, indent: int, level: int) -> str:
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, DualNumber):
        return _render([obj.std, obj.dual], indent, level)
    if isinstance(obj, np.ndarray):
        return _render(obj.tolist(), indent, level)
    if isinstance(obj, Mapping):
        if not obj:
            return "{}"
        items = [f"{json.dumps(str(k))}: {_render(v, indent, level + 1)}" for k, v in obj.items()]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        # keep short numeric rows on one line
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_render(v, indent, level) for v in obj) + "]"
        return "[" + pad + ("," + pad).join(_render(v, indent, level + 1) for v in obj) + end + "]"
    raise TypeError(f"cannot render {type(obj).__name__}")


def dumps(obj: Any, indent: int = 2) -> str:
    return _render(obj, indent, 0) + "\n"


def write_text(path: str | Path | None, text: str) -> None:
    """Write to ``path``, or to standard output when ``path`` is ``None`` or ``-``."""
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def load_json(path: str | Path) -> dict:
    """Read a JSON object.  ``OSError`` propagates; malformed content is a ValidationError."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(obj, dict):
        raise ValidationError(f"{path}: top level must be an object")
    return obj


# ---------------------------------------------------------------------------
# parsing

def parse_entry(x: Any) -> np.ndarray:
    """One dual quaternion entry as an 8-array."""
    out = np.zeros(8)
    if isinstance(x, bool):
        raise ValidationError(f"invalid entry {x!r}")
    if isinstance(x, (int, float)):
        out[0] = float(x)
        return out
    if not isinstance(x, (list, tuple)) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in x
    ):
        raise ValidationError(f"invalid entry {x!r}")
    vals = [float(v) for v in x]
    if len(vals) == 2:
        out[0], out[4] = vals
    elif len(vals) == 4:
        out[:4] = vals
    elif len(vals) == 8:
        out[:] = vals
    else:
        raise ValidationError(f"entry must have 1, 2, 4 or 8 numbers, got {len(vals)}")
    if not np.all(np.isfinite(out)):
        raise ValidationError(f"non-finite entry {x!r}")
    return out


def parse_matrix(rows: Any) -> DQMatrix:
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ValidationError("matrix must be a non-empty list of rows")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValidationError("matrix rows have different lengths")
    return DQMatrix.from_array8(np.array([[parse_entry(e) for e in r] for r in rows]))


def parse_vector(items: Any, n: int, name: str) -> np.ndarray:
    if not isinstance(items, list) or len(items) != n:
        raise ValidationError(f"{name} must list {n} entries")
    return np.array([parse_entry(e) for e in items])


def _int(v: Any, name: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValidationError(f"{name} must be an integer")
    return v


def _pair_table(items: Any, name: str) -> dict[tuple[int, int], DualQuaternion]:
    """``[[i, j, entry], ...]`` into a dict keyed by ordered pairs."""
    if not isinstance(items, list):
        raise ValidationError(f"{name} must be a list of [i, j, entry]")
    out = {}
    for item in items:
        if not isinstance(item, list) or len(item) != 3:
            raise ValidationError(f"{name} items must be [i, j, entry]")
        key = (_int(item[0], name), _int(item[1], name))
        if key in out:
            raise ValidationError(f"{name}: duplicate pair {key}")
        out[key] = DualQuaternion.from_array(parse_entry(item[2]))
    return out


def parse_graph(obj: Mapping[str, Any]) -> VisibilityGraph:
    n = _int(obj.get("n"), "n")
    edges = obj.get("edges", [])
    if not isinstance(edges, list) or not all(isinstance(e, list) and len(e) == 2 for e in edges):
        raise ValidationError("edges must be a list of [i, j] pairs")
    return VisibilityGraph.from_edges(n, [(_int(i, "edge"), _int(j, "edge")) for i, j in edges])


def parse_poses(obj: Mapping[str, Any], n: int) -> PoseAssignment | None:
    if "poses" not in obj:
        return None
    poses = [DualQuaternion.from_array(p) for p in parse_vector(obj["poses"], n, "poses")]
    twists = None
    if obj.get("twists") is not None:
        twists = [DualQuaternion.from_array(t) for t in parse_vector(obj["twists"], n, "twists")]
    rel = _pair_table(obj["relative_twists"], "relative_twists") if "relative_twists" in obj else None
    return PoseAssignment(poses, twists, rel)


def parse_measurements(obj: Mapping[str, Any]) -> dict[tuple[int, int], DualQuaternion] | None:
    return _pair_table(obj["relative"], "relative") if "relative" in obj else None


# ---------------------------------------------------------------------------
# reports

def one_based(edges) -> list[list[int]]:
    return [[i + 1, j + 1] for i, j in edges]


def trajectory_csv(times: np.ndarray, states: np.ndarray, disagreement: np.ndarray | None = None) -> str:
    """``t``, 8 columns per agent, then optionally disagreement std and dual."""
    n = states.shape[1]
    parts = ["std_w", "std_x", "std_y", "std_z", "dual_w", "dual_x", "dual_y", "dual_z"]
    header = ["t"] + [f"z{i + 1}_{p}" for i in range(n) for p in parts]
    if disagreement is not None:
        header += ["disagreement_std", "disagreement_dual"]
    lines = [",".join(header)]
    for k, t in enumerate(times):
        row = [format_float(t)] + [format_float(v) for v in states[k].ravel()]
        if disagreement is not None:
            row += [format_float(v) for v in disagreement[k]]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def read_trajectory_csv(text: str) -> tuple[list[str], np.ndarray]:
    lines = [ln for ln in text.splitlines() if ln]
    header = lines[0].split(",")
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    return header, data
