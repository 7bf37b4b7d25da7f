import json
from fractions import Fraction

import pytest

from paleykit.cli import main
from paleykit.crnorm import MatrixSequence
from paleykit.multiindex import Smoothness, saturate
from paleykit.operators import PaleySampler, estimate_paley_constant
from paleykit.property_o import find_witness
from paleykit.sequence import build_sequence
from paleykit.serialization import (
    canonical_dumps,
    matrixseq_to_json,
    plan_to_json,
    poly_to_json,
    witness_to_json,
)
from paleykit.trigpoly import random_trigpoly

REF = "0,0;1,0;0,1;2,0"
S = Smoothness.from_indices(saturate({(2, 0), (0, 1)}))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    payload = json.loads(out.out) if out.out.strip() else None
    return code, payload, out.err


@pytest.fixture(scope="module")
def plan_file(tmp_path_factory):
    plan = build_sequence(S, find_witness(S), 2, 100, 10)
    path = tmp_path_factory.mktemp("cli") / "plan.json"
    path.write_text(canonical_dumps(plan_to_json(plan)))
    return str(path)


def test_check_smoothness_ok(capsys):
    code, payload, err = run(capsys, "check-smoothness", "--indices", REF)
    assert code == 0
    assert payload["dim"] == 2 and payload["size"] == 4
    assert "smoothness" in err


def test_check_smoothness_rejects_gap(capsys):
    code, payload, _ = run(capsys, "check-smoothness", "--indices", "1,0;0,1")
    assert code == 3
    assert payload["failure"] == "not_smoothness"


def test_missing_input_is_validation_error(capsys):
    code, payload, _ = run(capsys, "check-smoothness")
    assert code == 2
    assert "error" in payload


def test_unknown_flag_exits_2(capsys):
    code = main(["check-property-o", "--bogus"])
    capsys.readouterr()
    assert code == 2


def test_check_property_o_matches_module(capsys):
    code, payload, _ = run(capsys, "check-property-o", "--indices", REF)
    assert code == 0
    assert payload == json.loads(canonical_dumps(witness_to_json(find_witness(S))))


def test_check_property_o_no_witness(capsys):
    code, payload, _ = run(capsys, "check-property-o",
                           "--indices", "0,0;1,0;0,1;1,1")
    assert code == 3
    assert payload == {"failure": "no_witness"}


def test_build_sequence_is_thin_wrapper(capsys):
    code, payload, _ = run(capsys, "build-sequence", "--indices", REF, "--K", "2")
    assert code == 0
    want = plan_to_json(build_sequence(S, find_witness(S), 2, 100, 10))
    assert payload == json.loads(canonical_dumps(want))


def test_build_sequence_validates_schedule(capsys):
    code, payload, _ = run(capsys, "build-sequence", "--indices", REF,
                           "--t0", "1")
    assert code == 2


def test_build_sequence_no_witness_is_stage_failure(capsys):
    code, payload, _ = run(capsys, "build-sequence", "--indices",
                           "0,0;1,0;0,1;1,1")
    assert code == 3
    assert payload["failure"] == "no_witness"
    assert payload["stage"] == "property_o"


def test_riesz_spectrum(capsys, plan_file):
    code, payload, _ = run(capsys, "riesz-spectrum", "--plan", plan_file)
    assert code == 0
    assert payload["size"] == 9
    assert payload["claims"] == {"a": True, "b": True}
    assert [0, 0] in payload["sample_frequencies"]


def test_riesz_spectrum_missing_file(capsys):
    code, payload, _ = run(capsys, "riesz-spectrum", "--plan", "/nonexistent")
    assert code == 2


def test_project(capsys, plan_file, tmp_path):
    f = random_trigpoly([(10, 100), (3, 4)], seed=1)
    poly = tmp_path / "poly.json"
    poly.write_text(canonical_dumps(poly_to_json(f)))
    code, payload, err = run(capsys, "project", "--plan", plan_file,
                             "--poly", str(poly))
    assert code == 0
    assert len(payload["coeffs"]) == 1
    assert payload["coeffs"][0]["n"] == [10, 100]
    assert "kept 1 of 2" in err


def test_project_rejects_bad_poly(capsys, plan_file, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{\"nope\": 1}")
    code, payload, _ = run(capsys, "project", "--plan", plan_file,
                           "--poly", str(bad))
    assert code == 2


def test_estimate_paley_is_thin_wrapper(capsys, plan_file):
    code, payload, _ = run(capsys, "estimate-paley", "--plan", plan_file,
                           "--count", "2", "--matrix-dim", "1",
                           "--grid-n", "21")
    assert code == 0
    plan = build_sequence(S, find_witness(S), 2, 100, 10)
    box = [(i, j) for i in range(1, 7) for j in range(1, 7)]
    sampler = PaleySampler(count=2, support=tuple(box),
                           always=(plan.sequence[0],), terms=8, mdim=(1,),
                           seed=0, grid_n=21)
    want = estimate_paley_constant(S, plan.sequence, sampler)
    assert payload["sup_ratio"] == pytest.approx(want["sup_ratio"], rel=1e-15)
    assert payload["m"] == [1]
    assert "plan_digest" in payload


def test_cr_norm_subcommand(capsys, tmp_path):
    ms = tmp_path / "ms.json"
    ms.write_text(canonical_dumps(matrixseq_to_json(MatrixSequence([3.0, 4.0]))))
    code, payload, _ = run(capsys, "cr-norm", "--input", str(ms))
    assert code == 0
    assert set(payload) == {"value", "converged", "restarts_used"}
    assert payload["value"] == pytest.approx(5.0, abs=1e-6)
    assert payload["converged"] is True


def test_cr_norm_rejects_wrong_schema(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{\"dim\": 2}")
    code, payload, _ = run(capsys, "cr-norm", "--input", str(bad))
    assert code == 2


def test_techprop_pair_quantities(capsys, tmp_path):
    pair = tmp_path / "pair.json"
    pair.write_text(json.dumps({"m": [101, 100], "n": [100, 100]}))
    code, payload, _ = run(capsys, "techprop", "--indices", "0,0;1,0;0,1",
                           "--pair", str(pair))
    assert code == 0
    assert payload["q1"] == pytest.approx(float(Fraction(67, 6734)), rel=1e-12)


def test_techprop_rho_search_replays(capsys):
    code1, p1, _ = run(capsys, "techprop", "--indices", "0,0;1,0;0,1",
                       "--D", "2", "--eps", "0.1")
    code2, p2, _ = run(capsys, "techprop", "--indices", "0,0;1,0;0,1",
                       "--D", "2", "--eps", "0.1")
    assert code1 == code2 == 0
    assert p1 == p2
    assert p1["rho"] == 32
    assert p1["note"] == "empirical, not a proof"


def test_techprop_validates_eps(capsys):
    code, payload, _ = run(capsys, "techprop", "--indices", "0,0;1,0",
                           "--eps", "1.5")
    assert code == 2


def test_run_all_tiny(capsys):
    code, payload, err = run(capsys, "run-all", "--indices", REF,
                             "--K", "2", "--count", "3", "--matrix-dim", "1",
                             "--grid-n", "21")
    assert code == 0
    assert payload["claim_a"] and payload["claim_b"]
    assert payload["composite_max_rel_error"] < 1e-9
    assert payload["digest"] == (
        "cdfcf1026294064dac65b3cdd3ab5339f0b6cfc531b5bd6a217a41bb4137f685")
    assert "construction verified" in err


def test_run_all_no_witness(capsys):
    code, payload, _ = run(capsys, "run-all", "--indices", "0,0;1,0;0,1;1,1",
                           "--K", "2")
    assert code == 3
    assert payload["stage"] == "property_o"


def test_stdout_is_canonical(capsys):
    code, _, _ = run(capsys, "check-property-o", "--indices", REF)
    assert code == 0
    code = main(["check-property-o", "--indices", REF])
    out = capsys.readouterr().out
    assert out == canonical_dumps(json.loads(out)) + "\n"
