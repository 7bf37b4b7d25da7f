import pytest

from paleykit.errors import StageFailure
from paleykit.multiindex import Smoothness, saturate
from paleykit.orchestrator import (
    OrchestratorConfig,
    ReplayResult,
    replay,
    report_to_json,
    run_construction,
)

S = Smoothness.from_indices(saturate({(2, 0), (0, 1)}))
TINY = OrchestratorConfig(K=2, matrix_dims=(1,), paley_count=3,
                          composite_count=3, paley_box=3, grid_n=21)


@pytest.fixture(scope="module")
def tiny_report():
    return run_construction(S, TINY)


def test_full_run_succeeds(tiny_report):
    rep = tiny_report
    assert rep.claim_a and rep.claim_b and rep.rho_bounds_ok
    assert rep.plan.report.cond_i
    assert rep.plan.report.bound_iii_met and rep.plan.report.bound_iv_met
    assert rep.composite_max_rel_error < 1e-9
    assert rep.paley["sup_ratio"] > 0.0
    assert rep.digest == (
        "cdfcf1026294064dac65b3cdd3ab5339f0b6cfc531b5bd6a217a41bb4137f685")


def test_retry_squares_the_schedule(tiny_report):
    # the first schedule fails the smallness conditions, the squared one
    # passes, so exactly one retry and t0 = 100^2
    assert tiny_report.retries_used == 1
    assert tiny_report.plan.t0 == 10000
    assert tiny_report.plan.q == 100


def test_determinism(tiny_report):
    again = run_construction(S, TINY)
    a = report_to_json(tiny_report)
    b = report_to_json(again)
    a.pop("timings"), b.pop("timings")
    assert a == b


def test_replay_accepts_immediate_rerun(tiny_report):
    r = replay(tiny_report, S, TINY)
    assert isinstance(r, ReplayResult)
    assert bool(r)
    assert r.mismatches == []


def test_replay_flags_altered_seed(tiny_report):
    other = OrchestratorConfig(K=2, matrix_dims=(1,), paley_count=3,
                               composite_count=3, paley_box=3, grid_n=21,
                               seed=42)
    r = replay(tiny_report, S, other)
    assert not bool(r)
    moved = {m.split(":")[0] for m in r.mismatches}
    # only the seed echo and the sampled Paley numbers move; the plan,
    # digest, and every boolean stay put
    assert all("paley" in m or "seed" in m for m in moved)
    assert not any("digest" in m or "claim" in m or ".plan." in m for m in moved)


def test_replay_flags_changed_k(tiny_report):
    other = OrchestratorConfig(K=3, matrix_dims=(1,), paley_count=3,
                               composite_count=3, paley_box=3, grid_n=21)
    r = replay(tiny_report, S, other)
    assert not bool(r)
    assert any("digest" in m for m in r.mismatches)


def test_replay_rejects_schema_mismatch(tiny_report):
    saved = tiny_report.schema_version
    try:
        tiny_report.schema_version = 99
        r = replay(tiny_report, S, TINY)
        assert not bool(r)
        assert "schema_version" in r.mismatches[0]
    finally:
        tiny_report.schema_version = saved


def test_stage_isolation(tiny_report):
    off = OrchestratorConfig(K=2, matrix_dims=(), paley_count=3,
                             composite_count=3, paley_box=3, grid_n=21)
    rep_off = run_construction(S, off)
    assert rep_off.paley == {}
    a = report_to_json(tiny_report)
    b = report_to_json(rep_off)
    for key in ("smoothness", "witness", "plan", "digest", "retries_used",
                "claim_a", "claim_b", "rho_bounds_ok",
                "composite_max_rel_error"):
        assert a[key] == b[key]


def test_no_witness_failures():
    for indices in [saturate({(1, 1)}), {(0, 0)}]:
        bad = Smoothness.from_indices(indices)
        with pytest.raises(StageFailure) as exc:
            run_construction(bad, TINY)
        assert exc.value.stage == "property_o"
        assert exc.value.reason == "no_witness"


def test_conditions_unmet_failure():
    cfg = OrchestratorConfig(K=4, retries=0, matrix_dims=())
    with pytest.raises(StageFailure) as exc:
        run_construction(S, cfg)
    assert exc.value.stage == "sequence"
    assert exc.value.reason == "conditions_unmet"
    assert exc.value.details["last_report"]["bound_iv_met"] is False


def test_report_json_shape(tiny_report):
    d = report_to_json(tiny_report)
    assert d["schema_version"] == 1
    assert d["paley"]["per_dim"]["1"]["sup_ratio"] > 0.0
    assert set(d["timings"]) == {"property_o", "sequence", "riesz",
                                 "composite", "paley"}
