import json
import subprocess
import sys
from pathlib import Path

import pytest

from semispace import cli
from semispace.errors import ResourceLimitError
from semispace.jsonio import (complex_from_json, complex_to_json, dumps, matroid_from_json, matroid_to_json,
                              parse_problem, poly_from_json, poly_to_json)
from semispace.matroid import matroid_from_matrix
from semispace.poly import Poly
from semispace.scomplex import external_activity_complex, semi_broken_complex

from conftest import EXAMPLE_ROWS

EXAMPLE = {"matrix": [[str(x) for x in r] for r in EXAMPLE_ROWS], "I": [1, 2, 3], "u": ["0", "0", "1", "2", "2"]}


def write(tmp_path, data, name="p.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_matroid_command(tmp_path, capsys):
    code, out, _ = run(capsys, "matroid", "--input", write(tmp_path, EXAMPLE))
    data = json.loads(out)
    assert code == 0 and data["circuits"] == [[1, 2, 4], [1, 3, 5], [2, 3, 4, 5]] and data["rank"] == 3


def test_complex_command(tmp_path, capsys):
    code, out, _ = run(capsys, "complex", "--input", write(tmp_path, EXAMPLE))
    data = json.loads(out)
    assert code == 0
    assert data["complex"]["facets"] == [[1, 2, 3], [1, 2, 5], [1, 3, 4], [1, 4, 5], [2, 3, 4], [2, 4, 5], [3, 4, 5]]
    assert data["broken_circuits"] == [[1, 2, 4], [1, 3, 5], [2, 3, 5]]
    assert [p["polynomial"]["pretty"] for p in data["circuit_polynomials"]][0] == "-x1*x2*x4 + x1 + x2"


def test_degree_with_empty_I(tmp_path, capsys):
    code, out, _ = run(capsys, "degree", "--input", write(tmp_path, dict(EXAMPLE, I=[])))
    assert code == 0 and json.loads(out)["degree"]["by_facets"] == 1


def test_supports_with_oracle(tmp_path, capsys):
    code, out, _ = run(capsys, "supports", "--input", write(tmp_path, EXAMPLE), "--oracle")
    data = json.loads(out)
    assert code == 0 and data["count"] == 8 and data["oracle_disagreements"] == []


def test_verify_ugb_command(tmp_path, capsys):
    code, out, _ = run(capsys, "verify-ugb", "--input", write(tmp_path, EXAMPLE), "--trials", "3", "--seed", "7")
    data = json.loads(out)
    assert code == 0 and data["counts"]["pass"] == 3 and data["seed"] == 7


def test_regions_and_svg(tmp_path, capsys):
    svg = tmp_path / "section.svg"
    code, out, _ = run(capsys, "regions", "--input", write(tmp_path, EXAMPLE), "--svg", str(svg))
    data = json.loads(out)
    assert code == 0 and data["total_regions"] == 7 and data["qualifying_regions"] == 7
    assert svg.read_text().lstrip().startswith("<?xml")


def test_realpoints_with_sampled_u(tmp_path, capsys):
    prob = {"matrix": EXAMPLE["matrix"], "I": [1, 2, 3, 4], "seed": 5}
    code, out, _ = run(capsys, "realpoints", "--input", write(tmp_path, prob))
    data = json.loads(out)
    assert code == 0 and data["qualifying_regions"] == data["points"] == data["degree"]["by_facets"] == 6


def test_report_bundle(tmp_path, capsys):
    outdir = tmp_path / "out"
    code, out, _ = run(capsys, "report", "--input", write(tmp_path, EXAMPLE), "--outdir", str(outdir))
    data = json.loads(out)
    assert code == 0
    s = data["summary"]
    assert (s["degree"], s["qualifying_regions"], s["points"], s["equal"]) == (7, 7, 7, True)
    assert json.loads((outdir / "report.json").read_text()) == data
    assert (outdir / "section.svg").exists()


def test_output_is_deterministic(tmp_path, capsys):
    path = write(tmp_path, dict(EXAMPLE, seed=3))
    outs = [run(capsys, "report", "--input", path)[1] for _ in range(2)]
    assert outs[0] == outs[1]


@pytest.mark.parametrize("data", [
    {"matrix": [[1, 2], [3]], "I": []},
    {"matrix": [], "I": []},
    {"matrix": [[1, 2]], "I": [3]},
    {"matrix": [[1, 2]], "I": [1, 1]},
    {"matrix": [["a", 2]], "I": []},
    {"matrix": [[1, 2]], "I": [], "u": [1]},
    [1, 2],
])
def test_malformed_input_exit_2(tmp_path, capsys, data):
    code, _, err = run(capsys, "degree", "--input", write(tmp_path, data))
    assert code == 2 and err


def test_unreadable_input_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "matroid", "--input", str(bad))[0] == 2
    assert run(capsys, "matroid", "--input", str(tmp_path / "missing.json"))[0] == 2


def test_precondition_exit_3(tmp_path, capsys):
    assert run(capsys, "complex", "--input", write(tmp_path, dict(EXAMPLE, w=[1, 1, 2, 3, 4])))[0] == 3
    loop = {"matrix": [[1, 0, 1], [0, 0, 1]], "I": [2], "u": [1, 2, 3]}
    assert run(capsys, "realpoints", "--input", write(tmp_path, loop))[0] == 3
    code, _, err = run(capsys, "regions", "--input", write(tmp_path, dict(EXAMPLE, I=[1, 2, 3, 4, 5], u=[0] * 5)))
    assert code == 3 and "unstable sign patterns" in err


def test_consistency_failure_exit_4(tmp_path, capsys, monkeypatch):
    real = cli.real_point_census

    def lossy(*a, **k):
        c = real(*a, **k)
        c.qualifying[0].real_point = None
        return c

    monkeypatch.setattr(cli, "real_point_census", lossy)
    assert run(capsys, "report", "--input", write(tmp_path, EXAMPLE))[0] == 4


def test_resource_cutoff_exit_5(tmp_path, capsys, monkeypatch):
    def boom(*a, **k):
        raise ResourceLimitError("Buchberger exceeded 1 S-pairs")

    monkeypatch.setattr(cli, "inv_ideal_oracle", boom)
    assert run(capsys, "supports", "--input", write(tmp_path, EXAMPLE), "--oracle")[0] == 5


def test_json_round_trips(example_matrix):
    M = matroid_from_matrix(example_matrix)
    assert matroid_from_json(json.loads(dumps(matroid_to_json(M)))) == M
    D = semi_broken_complex(M, {0, 1, 2}, (1, 2, 3, 4, 5))
    assert complex_from_json(json.loads(dumps(complex_to_json(D)))) == D
    B = external_activity_complex(M, (5, 4, 3, 2, 1))
    back = complex_from_json(json.loads(dumps(complex_to_json(B))))
    assert set(map(frozenset, back.facets)) == set(map(frozenset, B.facets))
    assert complex_to_json(B)["vertices"][:2] == ["x1", "x2"]
    f = Poly({(1, 0): "1/3", (0, 2): -2}, 2)
    assert poly_from_json(json.loads(dumps(poly_to_json(f))), 2) == f
    p = parse_problem(EXAMPLE)
    assert parse_problem(json.loads(dumps(p.to_json()))) == p


def test_every_command_output_reparses(tmp_path, capsys):
    path = write(tmp_path, EXAMPLE)
    for name in cli.COMMANDS:
        code, out, _ = run(capsys, name, "--input", path, "--trials", "2")
        assert code == 0
        assert dumps(json.loads(out)) == out


def test_console_script_entry_point(tmp_path):
    path = write(tmp_path, EXAMPLE)
    res = subprocess.run([sys.executable, "-m", "semispace.cli", "degree", "--input", path],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and json.loads(res.stdout)["degree"]["by_facets"] == 7


def test_sample_problem_file_runs(capsys):
    path = Path(__file__).resolve().parent.parent / "problems" / "three_by_five.json"
    code, out, _ = run(capsys, "report", "--input", str(path))
    assert code == 0 and json.loads(out)["summary"]["equal"]
