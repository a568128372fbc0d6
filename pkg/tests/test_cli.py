import csv
import io
import json
import subprocess
import sys

import pytest

from hardcore2d.cli import main

R_STAR = 1.0934246583376077


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def table(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_spectrum_rows(capsys):
    rc, out, _ = run(capsys, "spectrum", "--l-max", "1", "--orders", "2", "--r0-steps", "5")
    assert rc == 0
    rows = table(out)
    assert len(rows) == 5 * 4
    assert list(rows[0]) == ["r0", "l", "order", "m", "energy"]
    for row in rows:
        assert float(row["energy"]) == pytest.approx(int(row["l"]) + 1 + 2 * float(row["m"]), rel=1e-11)


def test_spectrum_json(capsys):
    rc, out, _ = run(capsys, "spectrum", "--labels", "0:1,2:1", "--r0-steps", "3", "--format", "json")
    assert rc == 0
    doc = json.loads(out)
    assert doc["meta"]["labels"] == [[0, 1], [2, 1]]
    assert doc["meta"]["subcommand"] == "spectrum"
    assert len(doc["data"]) == 6
    assert set(doc["data"][0]) == {"r0", "l", "order", "m", "energy"}


@pytest.mark.parametrize(
    "argv",
    [
        ["spectrum", "--r0-min", "0"],
        ["spectrum", "--r0-min", "-1"],
        ["spectrum", "--threads", "0"],
        ["spectrum", "--plot"],
        ["wavefunction", "--l", "0"],
        ["qfi", "--r0-steps", "2"],
        ["qfi", "--level-rank", "99"],
    ],
)
def test_config_errors_exit_2(capsys, argv):
    rc, out, err = run(capsys, *argv)
    assert rc == 2
    assert "config error" in err
    assert out == ""


def test_r0_min_message(capsys):
    _, _, err = run(capsys, "spectrum", "--r0-min", "0")
    assert "r0 > 0" in err


def test_bad_label_syntax():
    with pytest.raises(SystemExit) as exc:
        main(["spectrum", "--labels", "0-1"])
    assert exc.value.code == 2


def test_crossings_single_label_writes_header(capsys):
    rc, out, _ = run(capsys, "crossings", "--labels", "0:1")
    assert rc == 0
    assert out.strip() == "l_a,order_a,l_b,order_b,r0_star,energy_star"


def test_crossings_window(capsys):
    rc, out, _ = run(
        capsys, "crossings", "--labels", "0:2,4:1", "--r0-min", "1", "--r0-max", "4", "--r0-steps", "31"
    )
    assert rc == 0
    (row,) = table(out)
    assert (row["l_a"], row["order_a"], row["l_b"], row["order_b"]) == ("0", "2", "4", "1")
    assert float(row["r0_star"]) == pytest.approx(R_STAR, abs=1e-9)


def test_wavefunction_output(tmp_path, capsys):
    path = tmp_path / "wf.csv"
    rc, _, _ = run(
        capsys, "wavefunction", "--l", "0", "--order", "2", "--r0", "1.0823922",
        "--samples", "200", "--out", str(path), "--plot",
    )
    assert rc == 0
    rows = table(path.read_text())
    assert len(rows) == 201
    zero = [r for r in rows if float(r["R"]) == 0.0]
    # The wall sample and the one interior node.
    assert len(zero) == 2
    assert float(zero[1]["r"]) == pytest.approx(2.6131259, abs=1e-6)
    svg = path.with_suffix(".svg").read_text()
    assert svg.startswith("<svg") and "polyline" in svg


def test_wavefunction_sample_count_validated(capsys):
    rc, _, _ = run(capsys, "wavefunction", "--l", "0", "--order", "1", "--r0", "1.0", "--samples", "1")
    assert rc == 2


def test_observables(capsys):
    rc, out, _ = run(capsys, "observables", "--labels", "0:1", "--r0", "1.4142135623730951")
    assert rc == 0
    (row,) = table(out)
    assert float(row["energy"]) == pytest.approx(3.0, abs=1e-10)
    assert float(row["kinetic"]) + float(row["potential"]) == pytest.approx(3.0, abs=1e-8)
    assert float(row["fisher_r0"]) > 0


def test_explicit_r0_list_overrides_grid(capsys):
    rc, out, _ = run(capsys, "spectrum", "--labels", "0:1", "--r0", "2", "0.5", "2")
    assert rc == 0
    assert [float(r["r0"]) for r in table(out)] == [0.5, 2.0]


def test_qfi_rank_switch(capsys):
    rc, out, _ = run(
        capsys, "qfi", "--l-max", "4", "--orders", "2", "--level-rank", "5",
        "--r0-min", str(R_STAR - 1e-3), "--r0-max", str(R_STAR + 1e-3), "--r0-steps", "2",
    )
    assert rc == 0
    below, above = table(out)
    assert (below["l"], below["order"]) == ("0", "2")
    assert (above["l"], above["order"]) == ("4", "1")


def test_validate(capsys):
    rc, out, _ = run(capsys, "validate", "--l", "0", "--r0", "1.4142136", "0.05", "--orders", "2")
    assert rc == 0
    rows = table(out)
    assert len(rows) == 4
    assert max(float(r["abs_diff"]) for r in rows) < 1e-6


def test_validate_failure_exits_3(capsys):
    rc, _, err = run(capsys, "validate", "--l", "0", "--r0", "1.0", "--orders", "1", "--tol", "1e-14")
    assert rc == 3
    assert "l=0" in err


def test_output_is_deterministic_across_threads(tmp_path):
    paths = []
    for threads in ("1", "3", "3"):
        path = tmp_path / f"s{len(paths)}.csv"
        assert main(["spectrum", "--l-max", "3", "--orders", "2", "--r0-steps", "60",
                     "--threads", threads, "--out", str(path)]) == 0
        paths.append(path)
    data = [p.read_bytes() for p in paths]
    assert data[0] == data[1] == data[2]


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "hardcore2d", "spectrum", "--labels", "1:1", "--r0-steps", "1", "--r0-min", "1"],
        capture_output=True, text=True, check=True,
    )
    assert res.stdout.splitlines()[0] == "r0,l,order,m,energy"
    assert len(res.stdout.splitlines()) == 2
