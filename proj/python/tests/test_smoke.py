import math

import pytest

import wsr

INF = math.inf


def test_hand_values():
    assert wsr.crps(2.0, [1.0, 2.0, 3.0]) == pytest.approx(2 / 9, abs=1e-12)
    assert wsr.twcrps(2.0, [1.0, 2.0, 3.0], a=2.0) == pytest.approx(1 / 9, abs=1e-12)
    assert wsr.owcrps(2.5, [1.0, 2.0, 3.0], a=2.0) == pytest.approx(0.5, abs=1e-12)
    members = [[0.0, 0.0], [1.0, 1.0]]
    assert wsr.es([0.0, 0.0], members) == pytest.approx(math.sqrt(2) / 4, abs=1e-12)
    assert wsr.vs([0.0, 2.0], members) == pytest.approx(4.0, abs=1e-12)
    assert wsr.mmds([0.0, 0.0], members) == pytest.approx(-(1 + math.exp(-1)) / 4, abs=1e-12)


def test_log_scores():
    assert wsr.logs(0.0, [0.0], bw=1.0) == pytest.approx(0.5 * math.log(2 * math.pi))
    phi1 = 0.5 * (1 + math.erf(1 / math.sqrt(2)))
    assert wsr.clogs(0.0, [0.0], a=1.0, bw=1.0) == pytest.approx(-math.log(phi1))
    x = [-1.2, 0.3, 0.4, 2.0]
    assert wsr.clogs(0.1, x) == pytest.approx(wsr.logs(0.1, x), abs=1e-10)


def test_reductions_and_weights():
    x = [0.5, -1.0, 2.0, 0.1]
    w = [1.0, 2.0, 1.0, 4.0]
    assert wsr.twcrps(0.3, x, weights=w) == wsr.crps(0.3, x, weights=w)
    assert wsr.owcrps(0.3, x, family="gauss-cdf", mu=100.0, sigma=1.0) == pytest.approx(0.0)
    assert wsr.es([0.3], [[v] for v in x], weights=w) == pytest.approx(
        wsr.crps(0.3, x, weights=w), abs=1e-12
    )


def test_undefined_weight_mass_is_nan():
    assert math.isnan(wsr.owcrps(5.0, [0.0, 1.0], a=3.0))
    assert wsr.owcrps(0.0, [0.0, 1.0], a=3.0) == 0.0
    assert math.isnan(wsr.owes([1.0, 1.0], [[-1.0, -1.0]], a=[0.0], b=[INF]))


def test_threshold_weighted_multivariate():
    members = [[0.3, 1.2], [2.0, 0.1], [0.4, 0.7]]
    assert wsr.twes([0.8, 0.2], members, a=[-INF], b=[0.0]) == 0.0
    assert wsr.twvs([0.8, 0.2], members, a=[-INF], b=[0.0]) == 0.0


def test_errors_raise():
    with pytest.raises(wsr.WsrError, match="InvalidBounds"):
        wsr.twcrps(0.0, [1.0, 2.0], a=1.0, b=0.0)
    with pytest.raises(ValueError):
        wsr.crps(0.0, [])
    with pytest.raises(ValueError):
        wsr.es([0.0, 0.0, 0.0], [[0.0, 0.0]])


def test_threshold_curve():
    import random

    rng = random.Random(5)
    obs = [rng.gauss(0, 1) for _ in range(50)]
    members = [[rng.gauss(0, 1) for _ in range(20)] for _ in obs]
    grid = [-2.0 + 0.5 * k for k in range(9)]
    curve = wsr.threshold_curve(obs, members, grid)
    scores = curve["mean_score"]
    assert len(scores) == 9
    assert all(b <= a + 1e-12 for a, b in zip(scores, scores[1:]))
    assert curve["n_undefined"] == [0] * 9
