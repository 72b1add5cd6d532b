"""Smoke tests for the Python module: import, round trip, frozen constants."""

import math

import ocms


def test_hash_range_anchors():
    assert ocms.hash_range(2.0, 100, 1.0, "mse") == 4
    assert ocms.hash_range(2.0, 10000, 1.0, "l") == 8


def test_worst_case_mse_anchor():
    got = ocms.worst_case_mse(2.0, 10000, 1.0)
    assert math.isclose(got, 9.206735942077924e-05, rel_tol=0, abs_tol=1e-18)


def test_encode_estimate_round_trip():
    # All clients hold item 3; with eps=5 the estimate lands near 1.
    values = [3] * 4000
    reports = ocms.encode_reports(values, 5.0, 50, mode="mse", seed=7)
    assert len(reports) == len(values)
    est = ocms.estimate([3, 4], reports, 5.0, 50, mode="mse")
    assert abs(est[0] - 1.0) < 0.15
    assert abs(est[1]) < 0.15


def test_predictors_consistent():
    # At m = 2 and f = 0 the general predictor matches the worst-case MSE
    # closed form for a binary alphabet.
    eps, n = 2.0, 10000
    a = math.exp(eps)
    he_mse = (a + 1) ** 2 / (n * (a - 1) ** 2)
    assert math.isclose(ocms.predict_variance(0.0, eps, 2.0, n), he_mse,
                        rel_tol=1e-12)


def test_tables_and_costs():
    row = ocms.theory_table("HE", 2 ** 20, 2.0, 10000)
    assert row["mse"] > 0 and not row["mse_is_lower_bound"]
    assert ocms.comm_cost("HE", 2 ** 20, 2.0) == 20.0
    stats = ocms.api_stats(10 ** 6, 4)
    assert abs(stats["m_prime"] - 4.0) < 1e-9
