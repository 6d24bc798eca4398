import csv
import os
import subprocess
import sys

import numpy as np
import pytest

from esdg import cli
from esdg import experiments as ex
from esdg.diagnostics import cost_model
from esdg.operators_1d import ConfigurationError


def read_rows(path):
    with open(path) as fh:
        return list(csv.reader(fh))


# configuration ---------------------------------------------------------------

def test_presets_validate():
    for name in ex.PRESETS:
        cfg = ex.preset(name)
        assert len(cfg.mesh) == cfg.d


def test_tgv_full_preset():
    cfg = ex.preset("tgv-full")
    assert cfg.experiment == "tgv" and cfg.N == 7 and cfg.mesh == (8, 8, 8)


def test_shockvortex_preset_resolution():
    cfg = ex.preset("shockvortex")
    assert cfg.flux == "matrix" and cfg.N == 4
    assert 2.0 / cfg.mesh[0] == pytest.approx(1 / 50)


@pytest.mark.parametrize("bad", [
    dict(flux="roe"), dict(mesh=(4,)), dict(warp="wavy"), dict(cfl=0.0), dict(family="chebyshev"),
    dict(ngeo="superparametric"),
])
def test_invalid_configs(bad):
    with pytest.raises(ConfigurationError):
        ex.preset("vortex2d", **bad)


def test_matrix_flux_rejected_in_3d():
    with pytest.raises(ConfigurationError):
        ex.preset("vortex3d", flux="matrix")


def test_warp_names():
    assert ex.warp_alpha("heavy") == 0.125
    assert ex.warp_alpha("0.03") == 0.03
    assert ex.parse_mesh("16x8") == (16, 8)
    assert ex.geometry_degree(4, "subparametric") == 3


def test_config_mapping_types():
    cfg = ex.config_from_mapping({"N": "3", "cfl": "0.25", "mesh": "8x4", "fixed-dt": "yes", "family": "gll"},
                                 ex.preset("vortex2d"))
    assert (cfg.N, cfg.cfl, cfg.mesh, cfg.fixed_dt, cfg.family) == (3, 0.25, (8, 4), True, "gll")
    with pytest.raises(ConfigurationError):
        ex.config_from_mapping({"colour": "red"})


def test_int_lists():
    assert cli.parse_int_list("1..4") == [1, 2, 3, 4]
    assert cli.parse_int_list("1,3, 5") == [1, 3, 5]
    with pytest.raises(ConfigurationError):
        cli.parse_int_list("")


# operator-level experiments ---------------------------------------------------

def test_derivative_demo_decoupled_beats_gsbp():
    for N in (1, 5, 10):
        e_dec, e_gsbp = ex.derivative_demo(N)
        assert e_dec < e_gsbp


def test_operator_check_rows():
    rows = ex.operator_check([1, 2], ["gauss"], dims=(1, 2))
    assert all(r[3] <= 1e-13 for r in rows)
    assert {r[0] for r in rows} == {"gauss"}


def test_cost_table_matches_model():
    rows = ex.cost_table([1, 2])
    assert len(rows) == 6
    for N, scheme, fe, mo in rows:
        assert (fe, mo) == cost_model(N, scheme)


# short runs -----------------------------------------------------------------

def short_vortex(tmp_path, **kw):
    return ex.preset("vortex2d", mesh=(4, 2), N=2, t_final=0.2, output_interval=0.1,
                     output=str(tmp_path), **kw)


def test_run_collects_series(tmp_path):
    res = ex.run(short_vortex(tmp_path))
    assert res.t == 0.2
    assert [r["t"] for r in res.series] == pytest.approx([0.0, 0.1, 0.2])
    assert res.errors[1] > 0
    # five stages per step plus one refresh per recorded output; 8 elements of 2*3 lines
    assert res.flux_calls == (res.steps * 5 + len(res.series)) * 8 * 6 * (9 + 12)


def test_run_is_deterministic(tmp_path):
    a = ex.run(short_vortex(tmp_path))
    b = ex.run(short_vortex(tmp_path))
    assert np.array_equal(a.u, b.u)


def test_progress_callback(tmp_path):
    seen = []
    ex.run(short_vortex(tmp_path), progress=lambda rec: seen.append(rec["t"]))
    assert len(seen) == 3


# command line -----------------------------------------------------------------

def test_cli_cost_model(tmp_path, capsys):
    assert cli.main(["cost-model", "--N", "1..7", "--output", str(tmp_path)]) == 0
    rows = read_rows(tmp_path / "cost.csv")
    assert rows[0] == ["N", "scheme", "flux_evals", "matrix_ops"]
    assert len(rows) == 1 + 21
    assert ["7", "staggered", "19683", "47331"] in rows


def test_cli_vortex_run_writes_outputs(tmp_path):
    code = cli.main(["vortex2d", "--mesh", "4x2", "--tfinal", "0.1", "--output-interval", "0.05",
                     "--output", str(tmp_path)])
    assert code == 0
    err = read_rows(tmp_path / "errors.csv")
    ts = read_rows(tmp_path / "timeseries.csv")
    assert len(err) == 2 and len(ts) == 4
    h = err[1][err[0].index("h")]
    assert float(h) == 0.5
    # values carry 17 significant digits
    combined = err[1][err[0].index("err_combined_rss")]
    assert len(combined.replace(".", "").replace("-", "").split("e")[0].lstrip("0")) >= 16


def test_cli_runs_are_reproducible(tmp_path):
    outs = []
    for name in ("a", "b"):
        cli.main(["vortex2d", "--mesh", "4x2", "--tfinal", "0.1", "--output", str(tmp_path / name)])
        outs.append((tmp_path / name / "errors.csv").read_text())
    assert outs[0] == outs[1]


def test_cli_config_file_and_flag_precedence(tmp_path):
    cfgfile = tmp_path / "run.cfg"
    cfgfile.write_text("# small run\nN = 3\nmesh = 8x4\ncfl = 0.3\n")
    args = cli.build_parser().parse_args(["vortex2d", "--config", str(cfgfile), "--N", "2"])
    cfg = cli.resolve_run_config(args)
    assert (cfg.N, cfg.mesh, cfg.cfl) == (2, (8, 4), 0.3)


@pytest.mark.parametrize("argv", [
    ["vortex2d", "--flux", "roe"],
    ["vortex3d", "--flux", "matrix"],
    ["vortex2d", "--mesh", "4x"],
    ["tgv", "--preset", "nope"],
    ["vortex2d", "--preset", "tgv-full"],
    ["vortex2d", "--config", "/nonexistent/file.cfg"],
    ["explode"],
    ["vortex2d", "--N", "two"],
])
def test_cli_configuration_errors(argv, tmp_path, capsys):
    assert cli.main(argv + ["--output", str(tmp_path)] if argv != ["explode"] else argv) == 1
    assert "configuration error" in capsys.readouterr().err


def test_cli_runtime_failure_exit_code(tmp_path, capsys):
    code = cli.main(["vortex2d", "--mesh", "4x2", "--cfl", "40", "--tfinal", "5", "--output", str(tmp_path)])
    assert code == 2
    assert "run failed" in capsys.readouterr().err
    # rows written before the failure are kept
    assert len(read_rows(tmp_path / "timeseries.csv")) >= 2


def test_cli_operator_check(tmp_path):
    assert cli.main(["operator-check", "--N", "1..3", "--families", "both", "--output", str(tmp_path), "-v"]) == 0
    report = (tmp_path / "operator_report.txt").read_text()
    assert "FAIL" not in report and report.startswith("tolerance")


def test_cli_derivative_demo(tmp_path):
    assert cli.main(["derivative-demo", "--N", "1..3", "--output", str(tmp_path)]) == 0
    rows = read_rows(tmp_path / "derivative.csv")
    assert [r[0] for r in rows[1:]] == ["1", "2", "3"]


def test_module_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "esdg", "cost-model", "--N", "1", "--output", str(tmp_path)],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert "flux evals" in out.stdout


def test_thread_count_variable():
    env = dict(os.environ, ESDG_NUM_THREADS="1")
    env.pop("NUMBA_NUM_THREADS", None)
    out = subprocess.run([sys.executable, "-c", "import os, esdg; print(os.environ['NUMBA_NUM_THREADS'])"],
                         capture_output=True, text=True, env=env)
    assert out.stdout.strip() == "1"
