"""The self-check suite: roster integrity, determinism, green margins."""

import json

import pytest

from riskspace.verify import roster, run_suite

REQUIRED_IDS = {
    "chebyshev-l1",
    "dual-grid-oracle",
    "embedding-inequality",
    "escape-risk-monotone",
    "hahn-banach-attains",
    "hoelder-lq",
    "kusuoka-mixture-risk",
    "kusuoka-roundtrip",
    "lipschitz-translation-tight",
    "norm-subadditive",
    "pairing-hoelder",
    "risk-monotone",
    "sandwich-avar",
    "step-approx-valid",
}


class TestRoster:
    def test_ids_unique_and_sorted(self):
        ids = [inv.ident for inv in roster()]
        assert ids == sorted(ids)
        assert len(ids) == len(set(ids))

    def test_core_invariants_registered(self):
        ids = {inv.ident for inv in roster()}
        missing = REQUIRED_IDS - ids
        assert not missing, f"missing invariants: {sorted(missing)}"

    def test_anchors_state_the_property(self):
        for inv in roster():
            assert inv.anchor.strip()
            assert len(inv.anchor) < 200


class TestRunSuite:
    def test_all_green_on_small_budget(self):
        report = run_suite(seed=0, cases=3)
        assert report["failures_total"] == 0
        for entry in report["invariants"]:
            assert entry["failures"] == 0
            assert entry["passes"] == 3
            assert entry["worst_margin"] >= 0.0

    def test_report_shape(self):
        report = run_suite(seed=1, cases=2)
        assert set(report) == {"seed", "cases", "invariants", "failures_total"}
        assert report["seed"] == 1 and report["cases"] == 2
        assert len(report["invariants"]) == len(roster())
        for entry in report["invariants"]:
            assert set(entry) == {"id", "anchor", "passes", "failures", "worst_margin"}

    def test_reports_are_byte_deterministic(self):
        a = json.dumps(run_suite(seed=3, cases=2), sort_keys=True)
        b = json.dumps(run_suite(seed=3, cases=2), sort_keys=True)
        assert a == b

    def test_parameter_domain(self):
        with pytest.raises(ValueError):
            run_suite(seed=0, cases=0)
        with pytest.raises(ValueError):
            run_suite(seed=-1, cases=1)
