import json
import math
import shutil
import subprocess

import numpy as np
import pytest

from wavefront_scope import cli, report
from wavefront_scope.errors import EmptyVolume
from wavefront_scope.report import read_pgm
from wavefront_scope.scenario import resolve

DELTA = {"name": "delta", "distribution": "delta@0.0", "points": [[0.0], [0.7]],
         "expect": [{"point": [0.0], "classification": "SINGULAR", "s_star_range": [-0.65, -0.35]}]}


def _write(tmp_path, cfg, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(cfg))
    return str(p)


@pytest.fixture(scope="module")
def delta_run(tmp_path_factory):
    d = tmp_path_factory.mktemp("delta")
    cfg = _write(d, DELTA)
    code = cli.main(["run", cfg, "--out", str(d / "out"), "--assert"])
    return code, d / "out", cfg


def test_delta_run_succeeds(delta_run):
    code, out, _ = delta_run
    assert code == 0
    rep = json.loads((out / "delta.json").read_text())
    rows = [r for r in rep["results"] if r["point"] == [0.0]]
    assert rows and all(-0.65 <= r["sobolev"]["s_star"] <= -0.35 for r in rows)
    assert all(r["decay"]["classification"] == "SINGULAR" for r in rows)


def test_csv_has_one_row_per_probe(delta_run):
    _, out, _ = delta_run
    lines = (out / "delta.csv").read_text().splitlines()
    assert lines[0] == "x,direction,window,classification,slope,s_star"
    assert len(lines) - 1 == len(DELTA["points"]) * 2


def test_rerun_is_byte_identical_and_config_round_trips(delta_run, tmp_path):
    _, out, _ = delta_run
    first = (out / "delta.json").read_text()
    resolved = json.loads(first)["config"]
    assert resolve(resolved) == resolved
    cfg = _write(tmp_path, resolved)
    assert cli.main(["run", cfg, "--out", str(tmp_path / "again")]) == 0
    assert (tmp_path / "again" / "delta.json").read_text() == first
    assert (tmp_path / "again" / "delta.csv").read_bytes() == (out / "delta.csv").read_bytes()


def test_nyquist_violation_exits_1(tmp_path, capsys):
    cfg = _write(tmp_path, dict(DELTA, grid={"m": 10}))
    assert cli.main(["run", cfg, "--out", str(tmp_path)]) == 1
    assert "NYQUIST_EXCEEDED" in capsys.readouterr().err
    assert not list(tmp_path.glob("delta.*"))


@pytest.mark.parametrize("patch", [{"windows": ["wobbly"]}, {"colour": "red"},
                                   {"region": {"x_half": 0.2, "size": 3}},
                                   {"distribution": "delta@0,q=1"}, {"path": "magic"},
                                   {"schedule": {"count": 5}}])
def test_invalid_configs_exit_1(tmp_path, patch):
    cfg = _write(tmp_path, dict(DELTA, **patch))
    assert cli.main(["run", cfg, "--out", str(tmp_path)]) == 1


def test_unreadable_config_exits_1(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert cli.main(["run", str(p)]) == 1
    assert cli.main(["run", str(tmp_path / "missing.json")]) == 1


def test_failed_expectation_exits_3(tmp_path):
    cfg = dict(DELTA, points=[[0.0]],
               expect=[{"classification": "REGULAR"}])
    assert cli.main(["run", _write(tmp_path, cfg), "--out", str(tmp_path), "--assert"]) == 3


def test_engine_failure_exits_2(tmp_path, monkeypatch):
    def boom(cfg, keep_volumes=False):
        raise EmptyVolume("nothing to classify")
    monkeypatch.setattr(report, "run", boom)
    assert cli.main(["run", _write(tmp_path, DELTA), "--out", str(tmp_path)]) == 2


def test_empty_report_refused(tmp_path):
    with pytest.raises(EmptyVolume):
        report.write_csv({"results": []}, tmp_path / "x.csv")


def test_list_catalog(capsys):
    assert cli.main(["list-catalog"]) == 0
    out = capsys.readouterr().out
    assert "delta@x0" in out and "annulus(r1,r2)" in out


def test_console_script_installed():
    exe = shutil.which("wavefront-scope")
    if exe is None:
        pytest.skip("console script not on PATH")
    res = subprocess.run([exe, "list-catalog"], capture_output=True, text=True)
    assert res.returncode == 0 and "halfplane" in res.stdout


def test_halfplane_heatmap_bright_band(tmp_path):
    cfg = {"name": "hp", "dim": 2, "distribution": "halfplane,nu=(0.6,0.8),c=0.0",
           "points": [[0.0, 0.0]], "directions": [[0.6, 0.8]],
           "schedule": {"lam0": 8, "ratio": 1.5, "count": 8},
           "region": {"n_x": 5, "n_xi": 5},
           "heatmap": {"direction": [0.6, 0.8], "x_half": 0.6, "n": 7}}
    assert cli.main(["run", _write(tmp_path, cfg), "--out", str(tmp_path)]) == 0
    img = read_pgm(tmp_path / "hp.pgm").astype(float)
    assert img.shape == (7, 7)
    ax = np.linspace(-0.6, 0.6, 7)
    # row 0 is the top (largest x2)
    x1, x2 = np.meshgrid(ax, ax[::-1])
    dist = np.abs(0.6 * x1 + 0.8 * x2)
    on, off = img[dist < 0.1], img[dist > 0.4]
    assert on.min() > 200 and off.max() < 60
