"""Command-line behavior: exit codes, table formats, overrides, and
byte-level determinism."""
import json
import shutil
import subprocess

import pytest

from sqherald import cli, detect, optics, sources
from sqherald.detect import DetectorModel
from sqherald.fockspace import default_truncation

ALL_FIGURES = (
    "fig2", "fig3a", "fig3b", "fig4a", "fig4b", "fig5a", "fig5b",
    "fig6a", "fig6b", "fig7a", "fig7b", "fig8", "fig9a", "fig9b",
)


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    meta = {}
    header = None
    rows = []
    for line in text.strip().splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition(" = ")
            meta[key] = value
        elif header is None:
            header = line.split(",")
        else:
            rows.append([float(item) for item in line.split(",")])
    return meta, header, rows


def test_figure_list_names_every_selector(capsys):
    code, out, err = run_cli(capsys, "figure", "--list")
    assert code == cli.EXIT_OK
    assert err == ""
    for name in ALL_FIGURES:
        assert name in out


def test_figure_table_matches_direct_computation(capsys):
    code, out, err = run_cli(capsys, "figure", "fig2")
    assert code == cli.EXIT_OK
    meta, header, rows = parse_csv(out)
    assert header == ["n", "p1n_squeezed", "p1n_cat_minus", "p1n_cat_plus"]
    assert len(rows) == 12
    assert meta["figure"] == '"fig2"'
    assert meta["version"] == '"0.1.0"'

    trunc = default_truncation(0.725)
    cat = sources.squeezed_cat(0.725, -1, trunc)
    expected = float(optics.joint_probability(optics.split(cat)).p[1, 1])
    row1 = next(row for row in rows if row[0] == 1.0)
    assert abs(row1[2] - expected) <= 1e-14
    assert abs(row1[2] - 0.453) <= 5e-4


def test_unknown_figure_exits_usage(capsys):
    code, out, err = run_cli(capsys, "figure", "fig99")
    assert code == cli.EXIT_USAGE
    assert "fig99" in err
    assert "fig3a" in err


def test_figure_requires_selector(capsys):
    code, out, err = run_cli(capsys, "figure")
    assert code == cli.EXIT_USAGE
    assert "selector" in err


def test_json_and_csv_carry_identical_tables(capsys):
    code, csv_text, _ = run_cli(capsys, "figure", "fig2")
    assert code == cli.EXIT_OK
    code, json_text, _ = run_cli(capsys, "figure", "fig2", "--format", "json")
    assert code == cli.EXIT_OK

    _, header, csv_rows = parse_csv(csv_text)
    payload = json.loads(json_text)
    assert payload["columns"] == header
    assert payload["rows"] == csv_rows
    assert payload["metadata"]["version"] == "0.1.0"
    assert payload["metadata"]["figure"] == "fig2"


def test_out_flag_writes_the_stdout_bytes(tmp_path, capsys):
    code, streamed, _ = run_cli(capsys, "figure", "fig2")
    assert code == cli.EXIT_OK
    target = tmp_path / "fig2.csv"
    code, out, _ = run_cli(capsys, "figure", "fig2", "--out", str(target))
    assert code == cli.EXIT_OK
    assert out == ""
    assert target.read_text(encoding="utf-8") == streamed


def test_dim_override_reaches_the_builder(capsys):
    code, out, _ = run_cli(capsys, "figure", "fig2", "--dim", "48",
                           "--format", "json")
    assert code == cli.EXIT_OK
    payload = json.loads(out)
    assert payload["metadata"]["dims"] == [48]
    row1 = next(row for row in payload["rows"] if row[0] == 1.0)
    assert abs(row1[2] - 0.453) <= 5e-4


def test_sweep_values_match_library_calls(capsys):
    code, out, err = run_cli(
        capsys, "sweep", "--quantity", "p11_cat_minus", "--var", "r",
        "--lo", "0.1", "--hi", "0.5", "--points", "5",
    )
    assert code == cli.EXIT_OK, err
    meta, header, rows = parse_csv(out)
    assert header == ["r", "p11_cat_minus"]
    assert len(rows) == 5
    assert meta["quantity"] == '"p11_cat_minus"'
    for r, value in rows:
        cat = sources.squeezed_cat(r, -1, default_truncation(r))
        direct = float(optics.joint_probability(optics.split(cat)).p[1, 1])
        assert abs(value - direct) <= 1e-14


def test_sweep_set_flag_fixes_parameters(capsys):
    code, out, err = run_cli(
        capsys, "sweep", "--quantity", "g2_cat_minus", "--var", "r",
        "--lo", "0.3", "--hi", "0.7", "--points", "3", "--set", "eta=0.8",
    )
    assert code == cli.EXIT_OK, err
    meta, header, rows = parse_csv(out)
    assert '"eta": 0.8' in meta["fixed"]
    det = DetectorModel(0.8)
    for r, value in rows:
        direct = detect.g2_heralded_cat(r, det, default_truncation(r))
        assert abs(value - direct) <= 1e-14


def test_sweep_list_shows_registered_quantities(capsys):
    code, out, err = run_cli(capsys, "sweep", "--list")
    assert code == cli.EXIT_OK
    assert "p11_cat_minus" in out
    assert "g2_tmss" in out
    assert "phase_ratio" in out


@pytest.mark.parametrize(
    "argv",
    [
        ("sweep", "--quantity", "p11_tmss", "--var", "r",
         "--lo", "0.1", "--hi", "0.5", "--points", "0"),
        ("sweep", "--quantity", "p11_tmss", "--var", "r",
         "--lo", "0.5", "--hi", "0.1", "--points", "5"),
    ],
)
def test_sweep_rejects_bad_ranges(capsys, argv):
    code, out, err = run_cli(capsys, *argv)
    assert code == cli.EXIT_USAGE
    assert "invalid sweep range" in err


def test_sweep_unknown_quantity_exits_usage(capsys):
    code, out, err = run_cli(
        capsys, "sweep", "--quantity", "nope", "--var", "r",
        "--lo", "0.1", "--hi", "0.5", "--points", "3",
    )
    assert code == cli.EXIT_USAGE
    assert "nope" in err and "p11_cat_minus" in err


def test_sweep_unknown_variable_exits_usage(capsys):
    code, out, err = run_cli(
        capsys, "sweep", "--quantity", "p11_tmss", "--var", "eta",
        "--lo", "0.7", "--hi", "1.0", "--points", "3",
    )
    assert code == cli.EXIT_USAGE
    assert "cannot be swept" in err


def test_sweep_bad_set_syntax_exits_usage(capsys):
    code, out, err = run_cli(
        capsys, "sweep", "--quantity", "g2_cat_minus", "--var", "r",
        "--lo", "0.3", "--hi", "0.7", "--points", "3", "--set", "eta",
    )
    assert code == cli.EXIT_USAGE
    assert "name=value" in err


def test_sweep_outside_supported_squeezing_exits_usage(capsys):
    code, out, err = run_cli(
        capsys, "sweep", "--quantity", "p11_cat_minus", "--var", "r",
        "--lo", "0.1", "--hi", "2.5", "--points", "3",
    )
    assert code == cli.EXIT_USAGE
    assert "invalid parameter" in err


def test_repeat_runs_are_byte_identical(capsys):
    argv = ("sweep", "--quantity", "pclickc_cat_minus", "--var", "r",
            "--lo", "0.2", "--hi", "1.0", "--points", "7")
    code, first, _ = run_cli(capsys, *argv)
    assert code == cli.EXIT_OK
    code, second, _ = run_cli(capsys, *argv)
    assert code == cli.EXIT_OK
    assert first == second


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["--version"])
    assert info.value.code == 0
    out = capsys.readouterr().out
    assert out.startswith("sqherald 0.1.0")


def test_unknown_subcommand_exits_usage(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["frobnicate"])
    assert info.value.code == cli.EXIT_USAGE


def test_no_subcommand_prints_help_and_exits_usage(capsys):
    code = cli.main([])
    out = capsys.readouterr().out
    assert code == cli.EXIT_USAGE
    assert "figure" in out and "sweep" in out and "verify" in out


def test_verify_with_inadequate_cutoff_reports_failures(capsys):
    code, out, err = run_cli(capsys, "verify", "--dim", "8")
    assert code == cli.EXIT_VERIFY
    assert "FAIL" in out
    for index in range(1, 13):
        assert f"[{index:2d}]" in out


def test_verify_reports_the_known_small_r_floor_failure(capsys):
    # criterion 12's lower bound sits marginally above the exact yield at
    # the left edge of its r-range, so a faithful evaluation must fail it
    # (and only it) while the other eleven pass
    code, out, err = run_cli(capsys, "verify")
    assert code == cli.EXIT_VERIFY
    lines = [line for line in out.splitlines() if line.startswith(("PASS", "FAIL"))]
    assert len(lines) == 12
    failing = [line for line in lines if line.startswith("FAIL")]
    assert len(failing) == 1
    assert "[12]" in failing[0]


def test_console_script_is_installed():
    exe = shutil.which("sqherald")
    assert exe is not None, "console script not on PATH"
    proc = subprocess.run([exe, "figure", "--list"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "fig9b" in proc.stdout
