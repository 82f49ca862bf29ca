"""File formats and deterministic serialization.

Reports are JSON with every floating-point value printed through a fixed
17-significant-digit format, so identical runs produce byte-identical files
(17 significant digits also round-trip IEEE doubles exactly).  Curve
definitions are JSON objects {"param", "y", "z", "s_min", "s_max"} with an
optional "samples"; sampled curves are CSV files with columns s, x, y, z and
optional appended frame columns t_y, t_z, n_y, n_z, b_y, b_z.
"""

import json
import math

import numpy as np

from .dsl import parse_expr
from .frenet import CurveDef, FrenetGrid, curve_from_exprs, curve_from_samples

__all__ = [
    "format_float", "dumps_json", "write_json",
    "load_curve_json", "load_curve_csv", "load_curve",
    "write_trajectory_csv", "write_frenet_csv", "write_series",
    "FRENET_COLUMNS",
]

FRENET_COLUMNS = ("s", "kappa", "tau", "eps", "t_y", "t_z",
                  "n_y", "n_z", "b_y", "b_z", "res_t", "res_n", "res_b")

FRAME_COLUMNS = ("t_y", "t_z", "n_y", "n_z", "b_y", "b_z")


def format_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return format(x, ".17g")


def _dump(obj, indent: int, out: list):
    pad = "  " * indent
    if obj is None:
        out.append("null")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(repr(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            out.append(f"{pad}  {json.dumps(str(key))}: ")
            _dump(value, indent + 1, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj)
        if not items:
            out.append("[]")
            return
        out.append("[\n")
        for i, value in enumerate(items):
            out.append(pad + "  ")
            _dump(value, indent + 1, out)
            out.append(",\n" if i < len(items) - 1 else "\n")
        out.append(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_json(obj) -> str:
    """Serialize a report deterministically (fixed float format, stable order)."""
    out: list[str] = []
    _dump(obj, 0, out)
    out.append("\n")
    return "".join(out)


def write_json(path, obj):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps_json(obj))


def load_curve_json(path) -> CurveDef:
    with open(path, "r", encoding="utf-8") as handle:
        payload = json.load(handle)
    if not isinstance(payload, dict):
        raise ValueError(f"{path}: curve definition must be a JSON object")
    missing = {"y", "z", "s_min", "s_max"} - payload.keys()
    if missing:
        raise ValueError(f"{path}: missing fields {sorted(missing)}")
    param = payload.get("param", "s")
    samples = int(payload.get("samples", 1001))
    return curve_from_exprs(
        parse_expr(payload["y"], param), parse_expr(payload["z"], param),
        float(payload["s_min"]), float(payload["s_max"]), samples=samples)


def load_curve_csv(path) -> CurveDef:
    with open(path, "r", encoding="utf-8") as handle:
        header = handle.readline().strip()
        names = [c.strip() for c in header.split(",")]
        if names[:4] != ["s", "x", "y", "z"]:
            raise ValueError(f"{path}: expected columns s,x,y,z, got {names[:4]}")
        data = np.loadtxt(handle, delimiter=",", ndmin=2)
    if data.shape[1] != len(names):
        raise ValueError(f"{path}: row width does not match the header")
    return curve_from_samples(data[:, 0], data[:, 2], data[:, 3], x=data[:, 1])


def load_curve(path) -> CurveDef:
    """Load a curve definition (.json, exact path) or samples (.csv)."""
    text = str(path)
    if text.endswith(".json"):
        return load_curve_json(path)
    if text.endswith(".csv"):
        return load_curve_csv(path)
    raise ValueError(f"{path}: expected a .json curve definition or .csv samples")


def _write_table(path, names, columns):
    columns = [np.asarray(col, dtype=float) for col in columns]
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(",".join(names) + "\n")
        for row in zip(*columns):
            handle.write(",".join(format_float(v) for v in row) + "\n")


def write_trajectory_csv(path, traj, frames: bool = False):
    """Write a synthesized trajectory as a sampled-curve CSV."""
    names = ["s", "x", "y", "z"]
    columns = [traj.s, traj.r[:, 0], traj.r[:, 1], traj.r[:, 2]]
    if frames:
        names += list(FRAME_COLUMNS)
        columns += [traj.t_y, traj.t_z, traj.n_y, traj.n_z, traj.b_y, traj.b_z]
    _write_table(path, names, columns)


def write_frenet_csv(path, grid: FrenetGrid):
    """Write the frame apparatus table (x components omitted: always 1, 0, 0)."""
    columns = [getattr(grid, name) for name in FRENET_COLUMNS]
    _write_table(path, list(FRENET_COLUMNS), columns)


def write_series(path, s, values):
    """Two-column whitespace-separated series for external plotting."""
    with open(path, "w", encoding="utf-8") as handle:
        for a, b in zip(np.asarray(s, float), np.asarray(values, float)):
            handle.write(f"{format_float(a)} {format_float(b)}\n")
