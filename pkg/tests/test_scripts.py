import subprocess
import sys
from pathlib import Path

import pytest

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"


def run(name, *args):
    return subprocess.run([sys.executable, str(SCRIPTS / name), *args], capture_output=True, text=True, check=True)


def test_reproduce_figures(tmp_path):
    out = run("reproduce_figures.py", "--out-dir", str(tmp_path)).stdout
    assert out.split() == ["fig1:", "pass", "fig2:", "pass", "fig3:", "pass", "fig4:", "pass"]
    assert sorted(p.name for p in tmp_path.glob("*.csv")) == [f"fig{i}.csv" for i in (1, 2, 3, 4)]


def test_alpha_sweep_is_monotone():
    lines = run("alpha_sweep.py", "--alphas", "1.5", "1.8", "1.99").stdout.splitlines()
    assert lines[0] == "alpha,theta_deg,refine_delta_deg,steps,status"
    angles = [float(line.split(",")[1]) for line in lines[1:]]
    assert angles == sorted(angles, reverse=True)


@pytest.mark.parametrize("grid", ["1001"])
def test_angle_table(grid):
    lines = run("angle_table.py", "--grid-n", grid).stdout.splitlines()
    assert len(lines) == 4
