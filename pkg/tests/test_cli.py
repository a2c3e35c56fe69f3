import json

import pytest

from spindlehom.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return str(path)


DIHEDRAL3 = {"size": 3, "ops": [[[(2 * y - x) % 3 for y in range(3)] for x in range(3)]],
             "level": ["quandle"], "name": "R3"}


def test_validate_dihedral_file(capsys, tmp_path):
    code, out, _ = run(capsys, "validate", write(tmp_path, "r3.json", DIHEDRAL3))
    assert code == 0
    assert out.startswith("ok")


def test_validate_out_of_range_entry(capsys, tmp_path):
    bad = {"size": 2, "ops": [[[0, 5], [1, 1]]], "level": ["shelf"]}
    code, _, err = run(capsys, "validate", write(tmp_path, "bad.json", bad))
    assert code == 2
    assert "parse error" in err


def test_validate_malformed_json(capsys, tmp_path):
    code, _, _ = run(capsys, "validate", write(tmp_path, "junk.json", "{not json"))
    assert code == 2


def test_validate_right_projection_as_quandle(capsys, tmp_path):
    rp2 = {"size": 2, "ops": [[[0, 1], [0, 1]]], "level": ["quandle"]}
    code, out, _ = run(capsys, "validate", write(tmp_path, "rp2.json", rp2), "--format", "records")
    assert code == 1
    rec = json.loads(out.splitlines()[0])
    assert rec["ok"] is False and rec["witness"]


def test_validate_module(capsys, tmp_path):
    T2 = {"size": 2, "ops": [[[0, 0], [1, 1]]], "level": ["quandle"], "name": "T2"}
    s = write(tmp_path, "t2.json", T2)
    good = {"ring": "Z", "rank": 2, "structure_path": "t2.json",
            "action": [[[[1, 0], [0, 1]], [[0, 1], [1, 0]]]]}
    code, out, _ = run(capsys, "validate", s, "--module", write(tmp_path, "good.json", good))
    assert code == 0 and out.count("ok") == 2
    # non-commuting matrices break (m ⊳ y) ⊳ z = (m ⊳ z) ⊳ (y ⊳ z) on a trivial quandle
    bad = dict(good, action=[[[[1, 1], [0, 1]], [[1, 0], [1, 1]]]])
    code, out, _ = run(capsys, "validate", s, "--module", write(tmp_path, "bad.json", bad))
    assert code == 1 and "FAILED  module" in out


def test_validate_missing_file(capsys):
    code, _, err = run(capsys, "validate", "/nonexistent/structure.json")
    assert code == 2 and "no such file" in err


def test_homology_tables(capsys):
    assert run(capsys, "homology", "T1+triv", "--weights", "-1,1")[:2] == (0, "0:Z 1:Z 2:Z 3:Z\n")
    assert run(capsys, "homology", "T1")[:2] == (0, "0:Z 1:0 2:0 3:0\n")


def test_homology_records_and_determinism(capsys):
    args = ("homology", "R3+triv", "--weights", "-1,1", "--part", "normalized", "--format", "records")
    code, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert code == 0 and a == b
    lines = [json.loads(x) for x in a.splitlines()]
    assert lines[0]["kind"] == "config"
    assert [r["degree"] for r in lines[1:]] == [0, 1, 2, 3]


def test_homology_part_and_ring_flags(capsys):
    code, out, _ = run(capsys, "homology", "T2+triv", "--weights", "-1,1", "--ring", "Fp:2",
                       "--part", "filtration:0", "--max-degree", "2")
    assert code == 0 and out.startswith("0:")
    assert run(capsys, "homology", "T2", "--part", "bogus")[0] != 0
    assert run(capsys, "homology", "T2", "--ring", "Fp:4")[0] == 2
    assert run(capsys, "homology", "T2", "--weights", "1,1")[0] == 2


def test_memory_refusal(capsys):
    code, _, err = run(capsys, "homology", "R3+triv", "--max-degree", "8", "--memory-budget", "1000")
    assert code == 3
    assert "refused" in err


def test_spectral_table(capsys):
    code, out, _ = run(capsys, "spectral", "T2+triv", "--weights", "-1,1", "--ring", "Q",
                       "--max-degree", "2")
    assert code == 0
    assert out.splitlines()[0].startswith("E^1")
    assert out.splitlines()[-1].startswith("E^inf")
    assert run(capsys, "spectral", "T2")[0] == 2  # integers are not a field


def test_verify_examples(capsys):
    assert run(capsys, "verify", "one-term-iso", "--fixture", "T2", "--max-degree", "4")[0] == 0
    assert run(capsys, "verify", "kunneth", "--fixture", "R3", "--max-degree", "4")[0] == 0


def test_verify_splitting_all_fixtures(capsys):
    code, out, _ = run(capsys, "verify", "splitting", "--max-degree", "4")
    assert code == 0
    assert ", 0 failed," in out.splitlines()[-1]


def test_verify_unknown_selector(capsys):
    code, _, err = run(capsys, "verify", "nonsense")
    assert code == 2 and "unknown selector" in err


def test_verify_unknown_fixture(capsys):
    assert run(capsys, "verify", "axioms", "--fixture", "Q7")[0] == 2


def test_usage_errors_exit_2():
    with pytest.raises(SystemExit) as e:
        main([])
    assert e.value.code == 2
