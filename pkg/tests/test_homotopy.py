import numpy as np
import pytest

from squarepeg.homotopy import (CompiledSystem, HomotopySettings, contraction_rate,
                                newton_polish, solve_system, total_degree_start, track_path)
from squarepeg.poly import MultiPoly

x1, x2 = MultiPoly.variable(0, 2), MultiPoly.variable(1, 2)


@pytest.mark.parametrize("degrees,count", [((3, 3, 3, 3), 81), ((1, 1, 1, 1), 1), ((4, 4, 4, 4), 256),
                                           ((2, 3), 6)])
def test_start_point_counts(degrees, count):
    system, points = total_degree_start(degrees)
    assert points.shape == (count, len(degrees))
    assert len({tuple(np.round(p, 9)) for p in points}) == count
    F = CompiledSystem(system)
    assert np.max(np.abs(F.evaluate(points))) < 1e-12


def test_start_overflow_guard():
    with pytest.raises(ValueError):
        total_degree_start((40, 40, 40, 40))
    with pytest.raises(ValueError):
        total_degree_start((0, 2))


def test_settings_validation():
    with pytest.raises(ValueError):
        HomotopySettings(min_step=0.5, initial_step=0.1)
    with pytest.raises(ValueError):
        HomotopySettings(endpoint_tol=0)
    g = HomotopySettings(seed=3).resolved_gamma()
    assert abs(abs(g) - 1) < 1e-12
    assert HomotopySettings(seed=3).resolved_gamma() == g


def test_identity_homotopy():
    system, points = total_degree_start((2, 3))
    for p in points:
        r = track_path(system, system, p, HomotopySettings())
        assert r.status == "regular"
        assert np.allclose(r.endpoint, p, atol=1e-10)


def test_univariate_like_system():
    # (x1 - 1)(x1 - 2) = 0, x2^2 - x1 = 0
    target = [(x1 - 1) * (x1 - 2), x2 ** 2 - x1]
    res = solve_system(target, HomotopySettings())
    assert len(res) == 4 and all(r.status == "regular" for r in res)
    found = sorted((round(r.endpoint[0].real, 8), round(r.endpoint[1].real, 8)) for r in res)
    s2 = round(2 ** 0.5, 8)
    assert found == [(1.0, -1.0), (1.0, 1.0), (2.0, -s2), (2.0, s2)]
    assert all(r.residual < 1e-8 for r in res)


def test_solutions_at_infinity_diverge():
    # two parallel lines meet only at infinity
    target = [x1 + x2 - 1, x1 + x2 - 2]
    res = solve_system(target, HomotopySettings())
    assert [r.status for r in res] == ["diverged"]


def test_double_root_is_singular():
    target = [(x1 - 1) ** 2, x2 - 3]
    res = solve_system(target, HomotopySettings())
    assert len(res) == 2
    for r in res:
        assert r.status == "singular"
        assert abs(r.endpoint[0] - 1) < 1e-4


def test_contraction_rate_separates_regular_from_singular():
    F = CompiledSystem([x1 ** 2 - 4, x2 - 1])
    assert contraction_rate(F, np.array([2.0 + 0j, 1.0 + 0j])) < 1e-5
    G = CompiledSystem([(x1 - 2) ** 2, x2 - 1])
    assert contraction_rate(G, np.array([2.0 + 0j, 1.0 + 0j])) > 0.4


def test_newton_polish_converges():
    F = CompiledSystem([x1 ** 2 + x2 ** 2 - 5, x1 - x2 - 1])
    x, rate, cond = newton_polish(F, np.array([2.1 + 0.01j, 0.9 + 0j]))
    assert np.allclose(x, [2, 1], atol=1e-13)
    assert rate < 1e-2 and cond < 100


def test_determinism():
    target = [x1 ** 3 - 2 * x2 + 1, x2 ** 2 - x1 * x2 + 3]
    a = solve_system(target, HomotopySettings(seed=5))
    b = solve_system(target, HomotopySettings(seed=5))
    assert [r.status for r in a] == [r.status for r in b]
    assert all(np.array_equal(p.endpoint, q.endpoint) for p, q in zip(a, b))


def test_seed_independence_of_solution_set():
    target = [x1 ** 3 - 2 * x2 + 1, x2 ** 2 - x1 * x2 + 3]
    sets = []
    for seed in (0, 1, 2):
        res = solve_system(target, HomotopySettings(seed=seed))
        assert all(r.status == "regular" for r in res)
        sets.append(sorted((round(r.endpoint[0].real, 7), round(r.endpoint[0].imag, 7)) for r in res))
    assert sets[0] == sets[1] == sets[2]
