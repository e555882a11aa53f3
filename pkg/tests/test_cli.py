import io
import json

import pytest

from whasym.cli import cmd_selftest, cmd_sweep, dumps, main
from whasym.config import ConfigError, load_config


def _write(tmp_path, text, name="run.ini"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_missing_xray_key_exits_2(tmp_path, capsys):
    cfg = _write(tmp_path, "[model]\nname = xray\n[params]\nm = 1\ncoupling = 1\n")
    assert main(["predict", "--config", cfg]) == 2
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1 and err[0].startswith("error:") and "fermi_energy" in err[0]


def test_unknown_key_exits_2(tmp_path, capsys):
    cfg = _write(tmp_path, "[model]\nname = pure_fh\n[fh]\ngamma = 1\n")
    assert main(["predict", "--config", cfg]) == 2
    assert "gamma" in capsys.readouterr().err


def test_negative_tolerance_exits_2(tmp_path, capsys):
    cfg = _write(tmp_path, "[model]\nname = pure_fh\n[tolerance]\nbarnes = -1e-9\n")
    assert main(["selftest", "--config", cfg]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_bad_arguments_exit_2(capsys):
    assert main(["sweep", "--model", "nonsense"]) == 2
    assert main(["unknown"]) == 2
    assert main(["sweep", "--model", "pure_fh", "--T", "4,2"]) == 2
    errs = capsys.readouterr().err.strip().splitlines()
    assert all(line.startswith("error:") for line in errs)


def test_missing_config_file_exits_2(tmp_path):
    assert main(["predict", "--config", str(tmp_path / "absent.ini")]) == 2


def test_failed_checks_exit_3(tmp_path, capsys):
    cfg = _write(tmp_path, "[model]\nname = pure_fh\n"
                 "[tolerance]\ntrivial = 1e-300\nbarnes = 1e-300\ndet2 = 1e-300\nfactor = 1e-300\n")
    assert main(["selftest", "--config", cfg]) == 3
    out = capsys.readouterr().out
    assert "FAIL" in out


def test_selftest_passes_and_is_deterministic(capsys):
    assert main(["selftest"]) == 0
    first = capsys.readouterr().out
    assert main(["selftest"]) == 0
    assert capsys.readouterr().out == first
    assert first.count("PASS") == 4


def test_predict_pure_fh_zero_exponents(tmp_path, capsys):
    cfg = _write(tmp_path, "[model]\nname = pure_fh\n[fh]\nalpha = 0\nbeta = 0\n")
    assert main(["predict", "--config", cfg]) == 0
    out = json.loads(capsys.readouterr().out)
    assert all(v == {"re": 0, "im": 0} or v == 0 for v in out["prediction"].values())


def test_predict_xray_exponent(capsys):
    assert main(["predict", "--model", "xray"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert abs(out["prediction"]["exponent"]["re"] + 0.0625) < 1e-12


def test_kernel_trivial_columns(tmp_path, capsys):
    cfg = _write(tmp_path, "[model]\nname = pure_fh\n[fh]\nalpha = 0\nbeta = 0\n[kernel]\nt_max = 2\ncount = 5\n")
    assert main(["kernel", "--config", cfg]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "t,k_re,k_im,kneg_re,kneg_im"
    assert len(lines) == 6
    for line in lines[1:]:
        assert all(float(v) == 0 for v in line.split(",")[1:])


def test_sweep_zero_rows_for_trivial_fh(tmp_path):
    prefix = str(tmp_path / "z")
    cfg = _write(tmp_path, "[model]\nname = pure_fh\n[fh]\nalpha = 0\nbeta = 0\n[sweep]\nt = 2,4,6,8\n")
    assert main(["sweep", "--config", cfg, "--out", prefix, "--quiet"]) == 0
    lines = open(prefix + ".csv").read().strip().splitlines()
    assert lines[0] == "T,N,logdet2_re,logdet2_im,pred_re,pred_im,resid_re,resid_im"
    assert len(lines) == 5
    for line in lines[1:]:
        assert all(float(v) == 0 for v in line.split(",")[2:])
    summary = json.load(open(prefix + ".json"))
    assert set(summary["fit"]) == {"rate", "exponent", "constant", "stderr"}
    assert set(summary["prediction"]) == {"log_g2", "exponent", "log_e1", "log_e2", "log_e3"}


def test_sweep_output_is_byte_identical(tmp_path):
    outs = []
    for tag in ("a", "b"):
        cfg = load_config(None, model="pure_fh", T="4,6,8,10", out=str(tmp_path / tag))
        assert cmd_sweep(cfg) == 0
        outs.append((open(cfg.csv, "rb").read(), open(cfg.json, "rb").read()))
    assert outs[0] == outs[1]


def test_cli_override_order(tmp_path):
    cfg_file = _write(tmp_path, "[model]\nname = pure_fh\n[sweep]\nt = 1,2,3\nn_per_unit = 10\n")
    cfg = load_config(cfg_file, T="5,6", n_per_unit=30)
    assert tuple(cfg.T_list) == (5.0, 6.0) and cfg.n_per_unit == 30
    with pytest.raises(ConfigError):
        load_config(None, n_per_unit=-1)


def test_selftest_stream():
    buf = io.StringIO()
    assert cmd_selftest(load_config(None), buf) == 0
    assert len(buf.getvalue().splitlines()) == 4


def test_dumps_format():
    text = dumps({"b": 0.1, "a": complex(1, -2), "c": float("nan"), "d": [1, None]})
    assert json.loads(text) == {"a": {"re": 1, "im": -2}, "b": 0.1, "c": None, "d": [1, None]}
    assert "0.10000000000000001" in text
    assert text.index('"a"') < text.index('"b"')
