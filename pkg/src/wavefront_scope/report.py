"""Run a resolved scenario and write its report artifacts."""

from __future__ import annotations

import csv
import json
import math
import os
import platform
import time

import numpy as np
import scipy

from . import __version__
from .detect import (SINGULAR, _num, classify, conic_fourier_oracle, pointwise_slopes,
                     sobolev_from_volume)
from .distributions import ground_truth
from .engine import PhaseRegion, mirrored_volume, scaled_volume
from .errors import EmptyVolume, ValidationError
from .scenario import build, region_for


def _truth(dist, x0, direction):
    singular, s = ground_truth(dist).at(x0, direction)
    return {"singular": bool(singular), "s_star": _num(s)}


def run(cfg: dict, keep_volumes=False):
    """Evaluate every (window, point, direction) probe; returns (report, volumes, timings)."""
    dist, windows, grid, schedule, thresholds = build(cfg)
    results, volumes, timings = [], [], []
    symmetric = dist.real_valued and all(w.real_valued for w in windows)
    for w in windows:
        done = []
        for x0 in cfg["points"]:
            for d in cfg["directions"]:
                t0 = time.perf_counter()
                region = region_for(cfg, x0, d, schedule)
                twin = next((v for v in done if _mirrors(v.region, region)), None) if symmetric else None
                if twin is not None:
                    vol = mirrored_volume(twin)
                else:
                    vol = scaled_volume(dist, w, region, schedule, path=cfg["path"], grid=grid)
                    done.append(vol)
                fit = classify(vol, thresholds)
                est = sobolev_from_volume(vol)
                row = {"window": w.name, "point": x0, "direction": d, "path": vol.path,
                       "decay": fit.as_dict(), "sobolev": est.as_dict()}
                truth = row["truth"] = _truth(dist, x0, d)
                if truth["singular"] and math.isfinite(est.s_star):
                    truth["s_error"] = est.s_star - float(truth["s_star"])
                if cfg["oracle"]:
                    ver = conic_fourier_oracle(dist, x0, d, thresholds=thresholds)
                    agree = ver.conic_classification == fit.classification
                    gap = (abs(est.s_star - ver.conic_sobolev_s)
                           if fit.classification == SINGULAR == ver.conic_classification
                           else math.nan)
                    ver.agreement = {"classification": agree, "s_gap": _num(gap)}
                    row["oracle"] = ver.as_dict()
                results.append(row)
                timings.append({"window": w.name, "point": x0, "direction": d,
                                "seconds": time.perf_counter() - t0})
                if keep_volumes:
                    volumes.append(vol)
    report = {"config": cfg, "results": results,
              "meta": {"grid": {"L": grid.L, "m": grid.m, "dx": grid.dx},
                       "schedule": [float(v) for v in schedule.values],
                       "versions": {"wavefront_scope": __version__, "numpy": np.__version__,
                                    "scipy": scipy.__version__,
                                    "python": platform.python_version()}}}
    if cfg["heatmap"] is not None:
        t0 = time.perf_counter()
        report["heatmap"] = heatmap(cfg, dist, windows[0], schedule, grid)
        timings.append({"heatmap": True, "seconds": time.perf_counter() - t0})
    return report, volumes, timings


def _mirrors(a, b):
    return (a.x_center == b.x_center and a.n_x == b.n_x and a.n_xi == b.n_xi
            and a.x_half == b.x_half and a.xi_half == b.xi_half
            and np.allclose(a.xi_center, [-c for c in b.xi_center], rtol=0, atol=1e-12))


def heatmap(cfg, dist, window, schedule, grid):
    """Per-x decay slopes over a square (2D) or segment (1D) at a fixed direction."""
    hm = cfg["heatmap"]
    r = cfg["region"]
    region = PhaseRegion(tuple(hm["center"]), hm["x_half"], tuple(hm["direction"]),
                         r["xi_half"], hm["n"], r["n_xi"])
    vol = scaled_volume(dist, window, region, schedule, path=cfg["path"], grid=grid)
    slopes = pointwise_slopes(vol)
    shape = (hm["n"],) * cfg["dim"]
    return {"window": window.name, "direction": hm["direction"],
            "axes": [a.tolist() for a in region.x_axes],
            "slopes": [_num(v) for v in slopes.reshape(-1)], "shape": list(shape)}


def check_expectations(cfg, report):
    """List of failure messages for the ``expect`` entries (empty when all hold)."""
    failures = []
    for e in cfg["expect"]:
        rows = [r for r in report["results"]
                if ("window" not in e or r["window"] == e["window"])
                and ("point" not in e or np.allclose(r["point"], e["point"]))
                and ("direction" not in e or np.allclose(r["direction"], e["direction"]))]
        if not rows:
            failures.append(f"no probe matches expectation {e}")
            continue
        for r in rows:
            tag = f"{r['window']} x={r['point']} d={r['direction']}"
            slope = float(r["decay"]["slope"])
            s = float(r["sobolev"]["s_star"])
            if "classification" in e and r["decay"]["classification"] != e["classification"]:
                failures.append(f"{tag}: {r['decay']['classification']} != {e['classification']}")
            if "s_star_range" in e:
                lo, hi = e["s_star_range"]
                if not lo <= s <= hi:
                    failures.append(f"{tag}: s* = {s:.4g} outside [{lo}, {hi}]")
            if "max_slope" in e and not slope <= e["max_slope"]:
                failures.append(f"{tag}: slope {slope:.4g} > {e['max_slope']}")
            if "min_slope" in e and not slope >= e["min_slope"]:
                failures.append(f"{tag}: slope {slope:.4g} < {e['min_slope']}")
    return failures


# ---------------------------------------------------------------------------
# files


def write_json(report, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True, allow_nan=False)
        fh.write("\n")


def write_csv(report, path):
    """One row per probe: coordinates, direction, window, classification, slope, s*."""
    rows = report["results"]
    if not rows:
        raise EmptyVolume("empty report: nothing to write")
    dim = len(rows[0]["point"])
    xs = ["x"] if dim == 1 else ["x1", "x2"]
    ds = ["direction"] if dim == 1 else ["d1", "d2"]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(xs + ds + ["window", "classification", "slope", "s_star"])
        for r in rows:
            w.writerow([repr(float(v)) for v in r["point"]] + [repr(float(v)) for v in r["direction"]]
                       + [r["window"], r["decay"]["classification"],
                          r["decay"]["slope"], r["sobolev"]["s_star"]])


def strength(slopes, span=8.0):
    """Singularity strength in [0, 1]: 1 at the slowest decay, 0 once span orders faster."""
    s = np.asarray([float(v) for v in slopes], dtype=float)
    finite = s[np.isfinite(s)]
    if finite.size == 0:
        return np.zeros_like(s)
    top = float(finite.max())
    with np.errstate(invalid="ignore"):
        st = 1.0 - np.clip(top - s, 0.0, span) / span
    return np.where(np.isfinite(s), st, 0.0)


def write_pgm(hm, path):
    """P5 grayscale, maxval 255; rows run from the largest x2 (top) to the smallest."""
    if len(hm["shape"]) != 2 or not hm["slopes"]:
        raise ValidationError("PGM output needs a nonempty 2D heatmap")
    n1, n2 = hm["shape"]
    img = strength(hm["slopes"]).reshape(n1, n2)
    pix = np.rint(255 * img).astype(np.uint8).T[::-1]
    with open(path, "wb") as fh:
        fh.write(f"P5\n{n1} {n2}\n255\n".encode("ascii"))
        fh.write(pix.tobytes())


def read_pgm(path):
    with open(path, "rb") as fh:
        data = fh.read()
    parts = data.split(b"\n", 3)
    if parts[0] != b"P5":
        raise ValidationError("not a binary PGM")
    w, h = (int(v) for v in parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(h, w)


def write_heatmap_csv(hm, path):
    axes = hm["axes"]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh)
        if len(axes) == 1:
            w.writerow(["x", "slope"])
            for x, s in zip(axes[0], hm["slopes"]):
                w.writerow([repr(float(x)), s])
        else:
            w.writerow(["x1", "x2", "slope"])
            k = 0
            for a in axes[0]:
                for b in axes[1]:
                    w.writerow([repr(float(a)), repr(float(b)), hm["slopes"][k]])
                    k += 1


def write_outputs(cfg, report, volumes, timings, out_dir):
    """Write the artifacts selected in ``cfg['outputs']``; returns the list of paths."""
    os.makedirs(out_dir, exist_ok=True)
    name = cfg["name"]
    written = []
    out = cfg["outputs"]
    if out["json"]:
        p = os.path.join(out_dir, f"{name}.json")
        write_json(report, p)
        written.append(p)
    if out["csv"]:
        p = os.path.join(out_dir, f"{name}.csv")
        write_csv(report, p)
        written.append(p)
    hm = report.get("heatmap")
    if hm is not None:
        p = os.path.join(out_dir, f"{name}.heatmap.csv")
        write_heatmap_csv(hm, p)
        written.append(p)
        if out["pgm"] and len(hm["shape"]) == 2:
            p = os.path.join(out_dir, f"{name}.pgm")
            write_pgm(hm, p)
            written.append(p)
    if out["raw_volume"]:
        for k, vol in enumerate(volumes):
            p = os.path.join(out_dir, f"{name}.volume{k}.bin")
            vol.export_raw(p)
            written.append(p)
    p = os.path.join(out_dir, f"{name}.timings.json")
    with open(p, "w", encoding="utf-8") as fh:
        json.dump(timings, fh, indent=2)
    written.append(p)
    return written
