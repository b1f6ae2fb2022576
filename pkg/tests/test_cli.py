import json

import numpy as np
import pytest

from factorizations.cli import main
from factorizations.matcore import matrix_to_json


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_generate_and_verify(tmp_path, capsys):
    inst = tmp_path / "i.json"
    assert main(["generate", "--sites", "2,3", "--seed", "1", "--unit", "random_multiplicative",
                 "--conjugate-seed", "4", "--out", str(inst)]) == 0
    rep = tmp_path / "r.json"
    code, _, err = run(["verify", str(inst), "--suite", "spectrum", "--out", str(rep)], capsys)
    assert code == 0, err
    data = json.loads(rep.read_text())
    [entry] = data["instances"]
    assert entry["instance"]["sites"] == [2, 3]
    assert all(c["pass"] for s in entry["suites"] for c in s["checks"])
    assert {"versions", "wall_time"} <= set(data)


def test_invalid_sites_exit_2(tmp_path, capsys):
    code, _, err = run(["generate", "--sites", "2,1"], capsys)
    assert code == 2 and "dimension" in err


def test_malformed_instance_exit_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run(["verify", str(p)], capsys)[0] == 2
    p.write_text(json.dumps({"sites": [2, 2], "unit_mode": "explicit"}))
    assert run(["verify", str(p)], capsys)[0] == 2


def test_bell_unit_exit_3_names_law(tmp_path, capsys):
    bell = np.array([[1], [0], [0], [1]]) / np.sqrt(2)
    p = tmp_path / "bell.json"
    p.write_text(json.dumps({"sites": [2, 2], "unit_mode": "explicit",
                             "unit": matrix_to_json(bell)}))
    code, _, err = run(["verify", str(p), "--suite", "unital"], capsys)
    assert code == 3 and "unit-certification" in err
    code, _, err = run(["classify", str(p)], capsys)
    assert code == 3 and "unit-certification" in err


def test_classify_withheld_unit(tmp_path, capsys):
    inst = tmp_path / "w.json"
    main(["generate", "--sites", "2,2,2", "--seed", "3", "--conjugate-seed", "9",
          "--withhold-unit", "--out", str(inst)])
    assert "unit" not in json.loads(inst.read_text())
    out = tmp_path / "c.json"
    assert main(["classify", str(inst), "--out", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["legs"] == [1, 1, 1] and rep["unit_discovered"]
    assert rep["unitary"]["rows"] == 8


def test_lemmas_without_instance(capsys):
    code, out, _ = run(["verify", "--suite", "lemmas"], capsys)
    assert code == 0
    assert json.loads(out)["instances"][0]["instance"] is None


def test_verify_deterministic(tmp_path, capsys):
    inst = tmp_path / "i.json"
    main(["generate", "--sites", "2,2", "--seed", "5", "--out", str(inst)])
    reps = []
    for k in range(2):
        p = tmp_path / f"r{k}.json"
        assert main(["verify", str(inst), "--out", str(p)]) == 0
        d = json.loads(p.read_text())
        d.pop("wall_time")
        reps.append(d)
    assert reps[0] == reps[1]
    names = [s["name"] for s in reps[0]["instances"][0]["suites"]]
    assert names == sorted(names)


def test_tolerance_must_be_positive(capsys):
    assert run(["verify", "--suite", "lemmas", "--tol", "0"], capsys)[0] == 2
