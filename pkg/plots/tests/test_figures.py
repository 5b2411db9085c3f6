from pathlib import Path

import pytest

from cpsim.cli import main as cpsim_main
from sweepfig import FigureSpec, SchemaError, render
from sweepfig.cli import main as sweepfig_main


@pytest.fixture(scope="module")
def sweep_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "sweep.csv"
    assert cpsim_main(["sweep", "--family", "exp", "--param", "10",
                       "--n", "2..4", "--mechs", "sp,csp", "--profiles", "60",
                       "--output", str(path)]) == 0
    return path


@pytest.fixture(scope="module")
def compare_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "compare.csv"
    assert cpsim_main(["compare", "--family", "exp", "--param", "10",
                       "--n", "3", "--profiles", "60", "--a", "csp",
                       "--b", "sp", "--output", str(path)]) == 0
    return path


@pytest.fixture(scope="module")
def reserve_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("data") / "reserve.csv"
    assert cpsim_main(["reserve", "--family", "exponential", "--r", "0.05..0.5",
                       "--steps", "6", "--trials", "20000",
                       "--output", str(path)]) == 0
    return path


def _spec_for(kind, sweep_csv, compare_csv, reserve_csv, out):
    src = {"lines_vs_n": sweep_csv, "fractions_vs_n": sweep_csv,
           "scatter_pairwise": compare_csv, "reserve_curves": reserve_csv}[kind]
    return FigureSpec(str(src), kind, str(out))


@pytest.mark.parametrize("kind", ["lines_vs_n", "scatter_pairwise",
                                  "reserve_curves", "fractions_vs_n"])
def test_render_all_kinds_deterministically(kind, sweep_csv, compare_csv,
                                            reserve_csv, tmp_path):
    out1, out2 = tmp_path / "a.svg", tmp_path / "b.svg"
    render(_spec_for(kind, sweep_csv, compare_csv, reserve_csv, out1))
    render(_spec_for(kind, sweep_csv, compare_csv, reserve_csv, out2))
    data = out1.read_bytes()
    assert len(data) > 1000
    assert data == out2.read_bytes()


def test_render_png(sweep_csv, tmp_path):
    out = tmp_path / "a.png"
    render(FigureSpec(str(sweep_csv), "lines_vs_n", str(out)))
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_unknown_kind_rejected(sweep_csv):
    with pytest.raises(SchemaError):
        FigureSpec(str(sweep_csv), "pie", "x.svg")


def test_unsupported_output_format(sweep_csv, tmp_path):
    with pytest.raises(SchemaError):
        render(FigureSpec(str(sweep_csv), "lines_vs_n", str(tmp_path / "a.bmp")))


def test_empty_csv_rejected(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(SchemaError, match="empty"):
        render(FigureSpec(str(empty), "lines_vs_n", str(tmp_path / "a.svg")))


def test_header_only_csv_rejected(tmp_path):
    p = tmp_path / "h.csv"
    p.write_text("profile_id,seed,mechanism,param_name,param_value,"
                 "n_agents,n_resources,winner,utilization,revenue,runtime_ns\n")
    with pytest.raises(SchemaError, match="no data rows"):
        render(FigureSpec(str(p), "lines_vs_n", str(tmp_path / "a.svg")))


def test_schema_mismatch_rejected(compare_csv, tmp_path):
    # a compare CSV is not a sweep CSV
    with pytest.raises(SchemaError, match="header"):
        render(FigureSpec(str(compare_csv), "lines_vs_n", str(tmp_path / "a.svg")))


def test_missing_file_rejected(tmp_path):
    with pytest.raises(SchemaError):
        render(FigureSpec(str(tmp_path / "nope.csv"), "lines_vs_n",
                          str(tmp_path / "a.svg")))


def test_non_numeric_value_rejected(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("r,analytic_gain,mc_gain,mc_stderr\n0.1,oops,0.0,0.0\n")
    with pytest.raises(SchemaError, match="non-numeric"):
        render(FigureSpec(str(p), "reserve_curves", str(tmp_path / "a.svg")))


def test_fractions_requires_two_paired_mechanisms(tmp_path):
    header = ("profile_id,seed,mechanism,param_name,param_value,"
              "n_agents,n_resources,winner,utilization,revenue,runtime_ns\n")
    one = tmp_path / "one.csv"
    one.write_text(header + "0,1,csp,,,2,1,0,0.5,0.0,0\n")
    with pytest.raises(SchemaError, match="exactly two"):
        render(FigureSpec(str(one), "fractions_vs_n", str(tmp_path / "a.svg")))
    unpaired = tmp_path / "unpaired.csv"
    unpaired.write_text(header + "0,1,csp,,,2,1,0,0.5,0.0,0\n"
                                 "1,2,sp,,,2,1,0,0.4,0.0,0\n")
    with pytest.raises(SchemaError, match="paired"):
        render(FigureSpec(str(unpaired), "fractions_vs_n", str(tmp_path / "a.svg")))


def test_cli_success_and_errors(sweep_csv, tmp_path, capsys):
    out = tmp_path / "fig.svg"
    assert sweepfig_main(["--csv", str(sweep_csv), "--kind", "lines_vs_n",
                          "--output", str(out)]) == 0
    assert str(out) in capsys.readouterr().out
    assert out.exists()
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert sweepfig_main(["--csv", str(empty), "--kind", "lines_vs_n",
                          "--output", str(tmp_path / "x.svg")]) == 2
    assert "error:" in capsys.readouterr().err
