import json

import pytest

from higherforms.cli import EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_INVALID, EXIT_OK, RunConfig, main
from higherforms.construct_nf import NFConstructionParams, TargetSetNF, construct_excluding_nf
from higherforms.construct_z import construct_excluding_z
from higherforms.forms import Form
from higherforms.ring import make_field
from higherforms.serialize import dumps, form_from_json, form_to_json
from higherforms.waring import WaringParams


def test_form_round_trip_explicit():
    Q = construct_excluding_z({2, 3}, 4)
    doc = form_to_json(Q)
    R = form_from_json(json.loads(dumps(doc)))
    assert R.terms == Q.terms and R.n == Q.n
    assert dumps(form_to_json(R)) == dumps(doc)


def test_form_round_trip_structured():
    K = make_field(2)
    C = construct_excluding_nf(TargetSetNF(K, [K(2, 1)]), 4, NFConstructionParams(WaringParams(4, 4)))
    doc = form_to_json(C.form)
    R = form_from_json(json.loads(dumps(doc)))
    assert R.rank == C.rank
    assert dumps(form_to_json(R)) == dumps(doc)
    x = {0: K(1, 1), 7: K(2), C.rank - 1: K(1)}
    assert R.evaluate(x) == C.form.evaluate(x)


def test_form_json_rejects_garbage():
    with pytest.raises(ValueError):
        form_from_json({"kind": "mystery"})
    with pytest.raises(ValueError):
        form_from_json({"field": "Q", "m": 4, "n": 1, "terms": [{"exps": [4], "coef": 1}, {"exps": [4], "coef": 1}]})


def test_run_config_round_trip(tmp_path):
    cfg = RunConfig(D=5, A=[[2, 1]], waring={"m": 4, "G_hat": 7, "P_hat": 1}, bound=12, seed=3)
    assert RunConfig.from_json(json.loads(dumps(cfg.to_json()))) == cfg
    with pytest.raises(ValueError):
        RunConfig.from_json({"colour": "blue"})


def test_construct_and_verify_z(tmp_path, capsys):
    form = tmp_path / "f.json"
    assert main(["construct-z", "--A", "2,3", "--out", str(form)]) == EXIT_OK
    doc = json.loads(form.read_text())
    assert doc["provenance"]["rank"] == 77 and doc["provenance"]["B"] == 3
    report = tmp_path / "r.json"
    assert main(["verify-z", "--form", str(form), "--bound", "30", "--report", str(report)]) == EXIT_OK
    assert json.loads(report.read_text())["report"]["verdict"] == "pass"
    assert main(["verify-z", "--form", str(form), "--bound", "30", "--max-nodes", "1"]) == EXIT_INCONCLUSIVE


def test_verify_z_detects_wrong_target(tmp_path):
    form = tmp_path / "f.json"
    assert main(["construct-z", "--A", "2", "--out", str(form)]) == EXIT_OK
    doc = json.loads(form.read_text())
    doc["provenance"]["A"] = [5]
    form.write_text(dumps(doc))
    assert main(["verify-z", "--form", str(form), "--bound", "20"]) == EXIT_FAIL


def test_inadmissible_and_bad_input(tmp_path, capsys):
    assert main(["construct-z", "--A", "16", "--out", str(tmp_path / "x.json")]) == EXIT_INVALID
    out = json.loads(capsys.readouterr().out)
    assert out["witness"] == [1, 2]
    assert not (tmp_path / "x.json").exists()
    assert main(["verify-z", "--form", str(tmp_path / "missing.json")]) == EXIT_INVALID
    assert main(["field-info", "--D", "4"]) == EXIT_INVALID
    assert main(["construct-z", "--A", "2", "--m", "3", "--out", str(tmp_path / "y.json")]) == EXIT_INVALID


def test_construct_nf_determinism(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["construct-nf", "--D", "2", "--A", "2+1*w", "--verify-bound", "40", "--out", str(p)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    prov = doc["provenance"]
    assert prov["rank"] == prov["cover_scalars"] * prov["universal_rank"] + prov["small_orbits"]
    assert prov["universal_rank"] == 61154 + prov["G_hat"]
    assert doc["provenance"]["caveats"]
    assert main(["verify-nf", "--form", str(a), "--norm-bound", "15"]) == EXIT_OK


def test_construct_nf_universal_with_params(tmp_path):
    params = tmp_path / "p.json"
    params.write_text(dumps(NFConstructionParams(WaringParams(4, 7)).to_json()))
    out = tmp_path / "u.json"
    assert main(["construct-nf", "--D", "5", "--universal", "--params", str(params), "--out", str(out)]) == EXIT_OK
    doc = json.loads(out.read_text())
    assert doc["provenance"]["L"] == 439 and doc["provenance"]["G_hat"] == 7
    assert main(["verify-nf", "--form", str(out), "--norm-bound", "20"]) == EXIT_OK


def test_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    form = tmp_path / "f.json"
    cfg.write_text(dumps(RunConfig(A=[2], bound=25, form_path=str(form)).to_json()))
    assert main(["--config", str(cfg), "construct-z"]) == EXIT_OK
    assert main(["--config", str(cfg), "verify-z"]) == EXIT_OK


def test_field_info_waring_selftest(tmp_path, capsys):
    assert main(["field-info", "--D", "2"]) == EXIT_OK
    info = json.loads(capsys.readouterr().out)
    assert info["unit"] == [1, 1] and info["eta"] == [17, 12] and info["power_subring"]["r"] == 12
    assert main(["waring", "--t", "79,31"]) == EXIT_OK
    w = json.loads(capsys.readouterr().out)
    assert [len(d["bases"]) for d in w["decompositions"]] == [19, 16]
    assert main(["selftest"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["ok"]


def test_structured_round_trip_keeps_explicit_forms():
    Q = Form.diagonal([1, 2], 4)
    assert form_from_json(form_to_json(Q)).terms == Q.terms
