"""Scenario configuration: JSON schema, defaults and pre-flight validation.

Unknown keys are rejected at every level. ``resolve`` returns a fully explicit
config; running that config again reproduces the same report.
"""

from __future__ import annotations

import copy
import json
import math

import numpy as np

from .detect import Thresholds
from .distributions import Grid, parse_distribution
from .engine import LambdaSchedule, PhaseRegion, check_sampled_admissible
from .errors import ValidationError
from .windows import parse_window

PATHS = ("sampled", "quadrature", "auto")
CLASSES = ("REGULAR", "SINGULAR", "INCONCLUSIVE")

_TOP = {"name", "dim", "distribution", "windows", "grid", "points", "directions", "region",
        "schedule", "thresholds", "path", "oracle", "heatmap", "outputs", "expect"}
_GRID = {"L", "m"}
_REGION = {"x_half", "xi_half", "n_x", "n_xi"}
_SCHEDULE = {"lam0", "ratio", "count"}
_THRESH = {"n_reg", "r2_min", "singular_slope"}
_HEATMAP = {"direction", "center", "x_half", "n"}
_OUTPUTS = {"json", "csv", "pgm", "raw_volume"}
_EXPECT = {"window", "point", "direction", "classification", "s_star_range", "max_slope",
           "min_slope"}


def _check_keys(obj, allowed, where):
    if not isinstance(obj, dict):
        raise ValidationError(f"{where} must be an object")
    extra = set(obj) - allowed
    if extra:
        raise ValidationError(f"unknown key(s) in {where}: {', '.join(sorted(extra))}")


def _vec(v, dim, where):
    arr = np.atleast_1d(np.asarray(v, dtype=float))
    if arr.shape != (dim,) or not np.all(np.isfinite(arr)):
        raise ValidationError(f"{where} must be a finite {dim}-vector, got {v!r}")
    return [float(t) for t in arr]


def default_directions(dim, count=16):
    if dim == 1:
        return [[1.0], [-1.0]]
    th = 2 * math.pi * np.arange(count) / count
    return [[float(math.cos(t)), float(math.sin(t))] for t in th]


def resolve(cfg: dict) -> dict:
    """Validate ``cfg`` and return the fully explicit configuration."""
    _check_keys(cfg, _TOP, "config")
    if "distribution" not in cfg:
        raise ValidationError("config needs a 'distribution'")
    dim = int(cfg.get("dim", 1))
    if dim not in (1, 2):
        raise ValidationError(f"dim must be 1 or 2, got {dim}")
    out = {"name": str(cfg.get("name", "scenario")), "dim": dim,
           "distribution": str(cfg["distribution"])}
    windows = cfg.get("windows", ["gaussian"])
    if isinstance(windows, str):
        windows = [windows]
    if not windows:
        raise ValidationError("at least one window is required")
    out["windows"] = [str(w) for w in windows]

    grid = dict(cfg.get("grid", {}))
    _check_keys(grid, _GRID, "grid")
    out["grid"] = {"L": float(grid.get("L", math.pi)),
                   "m": int(grid.get("m", 18 if dim == 1 else 10))}

    pts = cfg.get("points", [[0.0] * dim])
    if not isinstance(pts, list) or not pts:
        raise ValidationError("points must be a nonempty list")
    out["points"] = [_vec(p, dim, "point") for p in pts]

    dirs = cfg.get("directions", None)
    if dirs is None:
        dirs = default_directions(dim)
    elif isinstance(dirs, int):
        if dim == 1:
            raise ValidationError("a direction count applies to 2D only")
        dirs = default_directions(dim, dirs)
    if not isinstance(dirs, list) or not dirs:
        raise ValidationError("directions must be a nonempty list or a count")
    unit = []
    for d in dirs:
        v = np.asarray(_vec(d, dim, "direction"))
        nrm = float(np.linalg.norm(v))
        if nrm == 0:
            raise ValidationError("direction must be nonzero")
        unit.append([float(t) for t in v / nrm])
    out["directions"] = unit

    region = dict(cfg.get("region", {}))
    _check_keys(region, _REGION, "region")
    out["region"] = {"x_half": float(region.get("x_half", 0.2)),
                     "xi_half": float(region.get("xi_half", 0.2)),
                     "n_x": region.get("n_x"), "n_xi": int(region.get("n_xi", 9))}

    sch = dict(cfg.get("schedule", {}))
    _check_keys(sch, _SCHEDULE, "schedule")
    default = LambdaSchedule.default(dim)
    out["schedule"] = {"lam0": float(sch.get("lam0", default.lam0)),
                       "ratio": float(sch.get("ratio", default.ratio)),
                       "count": int(sch.get("count", default.count))}

    th = dict(cfg.get("thresholds", {}))
    _check_keys(th, _THRESH, "thresholds")
    base = Thresholds()
    out["thresholds"] = {"n_reg": float(th.get("n_reg", base.n_reg)),
                         "r2_min": float(th.get("r2_min", base.r2_min)),
                         "singular_slope": float(th.get("singular_slope", base.singular_slope))}

    path = cfg.get("path", "auto")
    if path not in PATHS:
        raise ValidationError(f"path must be one of {PATHS}, got {path!r}")
    out["path"] = path
    out["oracle"] = bool(cfg.get("oracle", False))

    hm = cfg.get("heatmap")
    if hm is not None:
        hm = dict(hm)
        _check_keys(hm, _HEATMAP, "heatmap")
        if "direction" not in hm:
            raise ValidationError("heatmap needs a direction")
        out["heatmap"] = {"direction": _vec(hm["direction"], dim, "heatmap direction"),
                          "center": _vec(hm.get("center", [0.0] * dim), dim, "heatmap center"),
                          "x_half": float(hm.get("x_half", 1.0)), "n": int(hm.get("n", 33))}
        if out["heatmap"]["n"] < 2:
            raise ValidationError("heatmap needs at least 2 points per axis")
    else:
        out["heatmap"] = None

    outputs = dict(cfg.get("outputs", {}))
    _check_keys(outputs, _OUTPUTS, "outputs")
    out["outputs"] = {"json": bool(outputs.get("json", True)), "csv": bool(outputs.get("csv", True)),
                      "pgm": bool(outputs.get("pgm", dim == 2 and hm is not None)),
                      "raw_volume": bool(outputs.get("raw_volume", False))}

    expect = cfg.get("expect", [])
    if not isinstance(expect, list):
        raise ValidationError("expect must be a list")
    out["expect"] = []
    for e in expect:
        e = dict(e)
        _check_keys(e, _EXPECT, "expect entry")
        if "classification" in e and e["classification"] not in CLASSES:
            raise ValidationError(f"unknown classification {e['classification']!r}")
        out["expect"].append(copy.deepcopy(e))

    preflight(out)
    return out


def build(cfg: dict):
    """Objects for a resolved config: (dist, windows, grid, schedule, thresholds)."""
    dim = cfg["dim"]
    grid = Grid(cfg["grid"]["L"], cfg["grid"]["m"], dim)
    dist = parse_distribution(cfg["distribution"], dim=dim, L=grid.L)
    windows = [parse_window(w, dim) for w in cfg["windows"]]
    s = cfg["schedule"]
    schedule = LambdaSchedule(s["lam0"], s["ratio"], s["count"])
    return dist, windows, grid, schedule, Thresholds(**cfg["thresholds"])


def region_for(cfg, x0, direction, schedule):
    r = cfg["region"]
    return PhaseRegion.around(x0, direction, cfg["dim"], r["x_half"], r["xi_half"],
                              n_xi=r["n_xi"], lam_max=schedule.lam_max, n_x=r["n_x"])


def preflight(cfg):
    """Engine preconditions that can fail before any transform is evaluated."""
    dist, windows, grid, schedule, _ = build(cfg)
    if schedule.count < 8:
        raise ValidationError("schedule needs at least 8 scales for the decay fit")
    if not dist.cutoff.contains_with_margin(grid.L):
        raise ValidationError("distribution support does not fit the grid box with margin L/4")
    xi_max = 0.0
    for x0 in cfg["points"]:
        for d in cfg["directions"]:
            reg = region_for(cfg, x0, d, schedule)
            xi_max = max(xi_max, float(np.max(np.abs(reg.xi_points))))
    check_sampled_admissible(grid, schedule.lam_max, xi_max)


def load(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config {path} is not valid JSON: {exc}") from None
    return resolve(cfg)
