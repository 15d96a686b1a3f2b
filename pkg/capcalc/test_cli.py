# capcalc/test_cli.py
import sys
import os
import json
import tempfile
from pathlib import Path

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from typer.testing import CliRunner

from capcalc import __version__
from capcalc.main import app

runner = CliRunner()


def _run(*args: str):
    return runner.invoke(app, list(args))


def _json(*args: str):
    result = _run(*args)
    assert result.exit_code == 0, (args, result.exit_code, result.stdout)
    return json.loads(result.stdout)


def test_version():
    result = _run("--version")
    assert result.exit_code == 0
    assert result.stdout.strip() == f"capcalc {__version__}"


def test_global_options():
    payload = _json("--threads", "2", "--log-level", "DEBUG", "fk", "--omega", "7;3,2,1,1", "--k", "1..3")
    sequential = _json("--threads", "1", "fk", "--omega", "7;3,2,1,1", "--k", "1..3")
    assert payload == sequential
    assert payload["results"][0]["value"] == "4"
    assert _run("--threads", "0", "fk", "--omega", "1;").exit_code != 0


def test_fk_values():
    payload = _json("fk", "--omega", "1;1/2", "--k", "1..8")
    assert payload["omega"] == "1;1/2"
    assert [r["value"] for r in payload["results"]] == ["1/2", "1", "3/2", "3/2", "2", "2", "5/2", "5/2"]
    assert [r["k"] for r in payload["results"]] == list(range(1, 9))

    ball = _json("fk", "--omega", "1;", "--k", "6")
    assert ball["results"][0]["value"] == "3"


def test_fk_formats():
    result = _run("fk", "--omega", "7;3,2,1,1", "--k", "1", "--format", "csv")
    assert result.exit_code == 0
    lines = result.stdout.strip().splitlines()
    assert lines[0] == "k,value,witnesses"
    assert lines[1].startswith("1,4,")

    result = _run("fk", "--omega", "7;3,2,1,1", "--format", "pretty")
    assert result.exit_code == 0
    assert result.stdout.startswith("f_1(7;3,2,1,1) = 4")


def test_fk_errors():
    assert _run("fk", "--omega", "0;1").exit_code == 2
    assert _run("fk", "--omega", "1;2").exit_code == 2
    assert _run("fk", "--omega", "1;a").exit_code == 1
    assert _run("fk", "--omega", "1;1/2", "--k", "3..1").exit_code == 1
    assert _run("fk", "--omega", "1;1/2", "--k", "x").exit_code == 1


def test_tropical():
    payload = _json("tropical", "--n", "1", "--k", "5")
    assert payload["certified"]
    assert payload["pretty"] == "(5⊙x⁻⁵)⊕(3⊙x⁻²)⊕2"
    assert set(payload["terms"]) == {"5;5", "3;2", "2;0"}
    assert payload["certificate"]["a_max"] == 60

    result = _run("tropical", "--n", "1", "--k", "2", "--format", "pretty")
    assert result.exit_code == 0
    assert "(2⊙x⁻²)⊕1" in result.stdout
    assert "certified" in result.stdout


def test_tropical_certify_strict():
    result = _run("tropical", "--n", "10", "--k", "1", "--budget", "6", "--certify-strict")
    assert result.exit_code == 3
    payload = json.loads(result.stdout)
    assert payload["certified"] is False
    assert payload["a_max"] == 6

    # without a budget the certificate alone is out of reach
    assert _run("tropical", "--n", "10", "--k", "1").exit_code == 3


def test_reduce():
    payload = _json("reduce", "--omega", "8;5,3,3")
    assert payload["input"] == "8;5,3,3"
    assert payload["reduced"] == "5;2,0,0"
    assert payload["boundary"] is True
    assert payload["reflections"] == 1
    assert {"op": "cremona", "ijk": [1, 2, 3]} in payload["trace"]

    result = _run("reduce", "--omega", "7;3,1,2,1", "--format", "pretty")
    assert result.exit_code == 0
    assert result.stdout.splitlines()[0] == "7;3,2,1,1"

    assert _run("reduce", "--omega", "1;1,1,1").exit_code == 2


def test_polygon():
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "simplex.json"
        path.write_text(json.dumps({"vertices": [["0", "0"], ["1", "0"], ["0", "1"]]}), encoding="utf-8")
        payload = _json("polygon", "--file", str(path), "--crosscheck")
        assert payload["delzant"] is True
        assert payload["weights"]["text"] == "1;;"
        assert [row["ech"] for row in payload["rows"]] == ["1", "1", "2", "2", "2", "3"]
        assert all(row["equal"] for row in payload["rows"])

        moved = Path(tmp) / "moved.json"
        moved.write_text(json.dumps({"vertices": [[1, 1], [2, 1], [1, 2]]}), encoding="utf-8")
        payload = _json("polygon", "--file", str(moved), "--normalize", "--k", "1..2")
        assert payload["polygon"] == {"vertices": [["0", "0"], ["1", "0"], ["0", "1"]]}
        assert "omega" not in payload

        bad = Path(tmp) / "bad.json"
        bad.write_text('{"vertices": [[0, 0], [2, 0], [0, 1]]}', encoding="utf-8")
        assert _run("polygon", "--file", str(bad), "--crosscheck").exit_code == 1
        assert _run("polygon", "--file", str(Path(tmp) / "missing.json")).exit_code == 1


def test_weights():
    payload = _json("weights", "8;5;3,3", "--k", "1")
    assert payload["weights"]["text"] == "8;5;3,3"
    assert payload["omega"] == "5;2,0,0"
    assert payload["boundary"] is True
    assert payload["capacities"] == [{"k": 1, "ech": "3"}]

    assert _run("weights", "2;3").exit_code == 1


def test_plot_csv():
    result = _run("plot")
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0] == "x,f1,f2,f3,f4,f5,f6,f7,f8"
    assert "1/2,1/2,1,3/2,3/2,2,2,5/2,5/2" in lines
    assert any(line.startswith("2/3,") for line in lines)
    assert all(line.count(",") == 8 for line in lines)
    assert len(lines) > 64


def test_plot_csv_marked_breakpoints():
    result = _run("plot", "--mark-breakpoints")
    assert result.exit_code == 0
    lines = result.stdout.splitlines()
    assert lines[0] == "x,f1,f2,f3,f4,f5,f6,f7,f8,breakpoint"
    assert "1/2,1/2,1,3/2,3/2,2,2,5/2,5/2,1" in lines
    assert any(line.startswith("2/3,") and line.endswith(",1") for line in lines)
    assert any(line.endswith(",0") for line in lines[1:])


def test_plot_svg_to_file():
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "plot.svg"
        result = _run("plot", "--k", "1..3", "--samples", "8", "--format", "svg", "--out", str(out))
        assert result.exit_code == 0
        text = out.read_text(encoding="utf-8")
        assert "<svg" in text and text.rstrip().endswith("</svg>")
        assert text.count("<polyline") >= 3


def test_plot_errors():
    assert _run("plot", "--n", "2").exit_code == 1
    assert _run("plot", "--samples", "1").exit_code == 1


def test_verify():
    payload = _json("verify", "--max-k", "4", "--polygon", "T(1)", "--polygon", "unit square")
    assert payload["ok"] is True
    assert payload["polygons"] == ["T(1)", "unit square"]
    assert payload["k_max"] == 4
    assert payload["failures"] == []

    assert _run("verify", "--max-k", "2", "--polygon", "no such polygon").exit_code == 1


def test_deterministic_output():
    first = _run("fk", "--omega", "7;3,2,1,1", "--k", "1..5")
    second = _run("fk", "--omega", "7;3,2,1,1", "--k", "1..5")
    assert first.stdout == second.stdout
    assert json.loads(first.stdout) == json.loads(second.stdout)


if __name__ == "__main__":
    tests = [value for name, value in list(globals().items()) if name.startswith("test_")]
    failed = 0
    for test in tests:
        try:
            test()
            print(f"✅ {test.__name__}")
        except Exception as e:
            failed += 1
            print(f"❌ {test.__name__}: {e}")
    print(f"\n{len(tests) - failed}/{len(tests)} tests passed")
    sys.exit(1 if failed else 0)
