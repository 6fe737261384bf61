import math

import numpy as np
import pytest

from conftest import random_curve
from squarepeg.homotopy import HomotopySettings
from squarepeg.poly import CurveF, MultiPoly
from squarepeg.polytope import inscribed_bound
from squarepeg.solver import (BudgetExceeded, SquareReport, count_inscribed_squares,
                              reality_and_render_data)
from squarepeg.squares import corners, orbit

X = MultiPoly.variable(0, 2)
Y = MultiPoly.variable(1, 2)
ELLIPSE = CurveF(X ** 2 + 4 * Y ** 2 - 1)
S5 = 1 / math.sqrt(5)


def corner_values(f: CurveF, sq) -> list[complex]:
    num = f.poly.to_numeric()
    return [num.evaluate(p) for p in corners(sq)]


def check_conservation(rep: SquareReport):
    assert rep.n_paths == rep.degree ** 4
    assert rep.n_finite + rep.n_diverged + rep.n_failed == rep.n_paths
    assert rep.n_finite == rep.n_regular + rep.n_singular
    assert rep.n_real_squares <= rep.n_orbits
    assert 4 * rep.n_orbits >= rep.n_nondegenerate


@pytest.mark.parametrize("rotate", [True, False])
def test_ellipse_has_one_real_square(rotate):  # [DERIVED]
    rep = count_inscribed_squares(ELLIPSE, rotate=rotate)
    check_conservation(rep)
    assert rep.n_nondegenerate == 4 and rep.n_orbits == 1 and rep.n_real_squares == 1
    (sq,) = rep.squares
    assert sq.real and sq.cluster == 4
    a, b, c, d = (complex(v) for v in sq.param)
    assert abs(a) < 1e-8 and abs(b) < 1e-8
    assert abs(c - S5) < 1e-8 and abs(d - S5) < 1e-8
    assert not rep.warnings


def test_ellipse_render_data():
    rep = count_inscribed_squares(ELLIPSE)
    ((pts, real),) = reality_and_render_data(rep)
    assert real
    want = [(S5, S5), (-S5, S5), (-S5, -S5), (S5, -S5)]
    assert np.allclose(pts, want, atol=1e-8)


def test_empty_report_render_data():
    assert reality_and_render_data(SquareReport(degree=2)) == []


def test_circle_reports_family():
    rep = count_inscribed_squares(CurveF(X ** 2 + Y ** 2 - 1))
    assert rep.n_orbits == 0 and rep.squares == []
    assert any("g1" in w and "positive-dimensional" in w for w in rep.warnings)


def test_parallel_lines_report_family():
    rep = count_inscribed_squares(CurveF(Y ** 2 - 1))
    assert any("positive-dimensional" in w for w in rep.warnings)


def test_line_has_no_squares():
    rep = count_inscribed_squares(CurveF(X + 2 * Y - 1))
    assert rep.n_orbits == 0


def test_parabola_has_no_finite_squares():
    rep = count_inscribed_squares(CurveF(Y - X ** 2))
    check_conservation(rep)
    assert rep.n_orbits == 0


@pytest.mark.parametrize("seed", range(4))
def test_generic_conic(seed):
    rep = count_inscribed_squares(random_curve(2, seed), HomotopySettings(seed=seed))
    check_conservation(rep)
    assert (rep.n_nondegenerate, rep.n_orbits) == (4, 1)


@pytest.mark.parametrize("seed", range(3))
def test_generic_cubic_properties(seed):
    f = random_curve(3, seed)
    rep = count_inscribed_squares(f, HomotopySettings(seed=seed))
    check_conservation(rep)
    assert (rep.n_nondegenerate, rep.n_orbits) == (48, 12)
    assert rep.n_orbits <= inscribed_bound(3)
    assert rep.max_residual < 1e-8
    scale = f.poly.coefficient_norm()
    for entry in rep.squares:
        assert entry.cluster == 4
        assert max(abs(v) for v in corner_values(f, entry.param)) < 1e-8 * scale
        if entry.real:
            assert all(abs(complex(v).imag) == 0 for v in entry.param)


def test_orbit_closure_without_rotation():
    """Every regular solution comes with its three relabelings."""
    f = random_curve(3, 4)
    rep = count_inscribed_squares(f, rotate=False)
    assert rep.n_nondegenerate == 4 * rep.n_orbits
    assert all(e.cluster == 4 for e in rep.squares)
    for e in rep.squares:
        assert len({tuple(np.round(np.array(m, dtype=complex), 6)) for m in orbit(e.param)}) == 4


def test_rotation_does_not_change_the_squares():  # [DERIVED]
    f = random_curve(3, 9)
    a = count_inscribed_squares(f, HomotopySettings(seed=1), rotate=True)
    b = count_inscribed_squares(f, HomotopySettings(seed=2), rotate=False)
    assert a.n_orbits == b.n_orbits == 12
    pa = sorted(tuple(np.round(np.array(e.param, dtype=complex), 6)) for e in a.squares)
    pb = sorted(tuple(np.round(np.array(e.param, dtype=complex), 6)) for e in b.squares)
    assert np.allclose(np.array(pa), np.array(pb), atol=1e-5)


def test_determinism():
    f = random_curve(3, 1)
    a = count_inscribed_squares(f, HomotopySettings(seed=7))
    b = count_inscribed_squares(f, HomotopySettings(seed=7))
    assert a.to_dict() == b.to_dict()


def test_budget():
    with pytest.raises(BudgetExceeded):
        count_inscribed_squares(random_curve(4, 0), budget=100)


def test_report_dict_round_trip():
    rep = count_inscribed_squares(ELLIPSE)
    back = SquareReport.from_dict(rep.to_dict())
    assert back.to_dict() == rep.to_dict()
    assert reality_and_render_data(back) == reality_and_render_data(rep)


def test_complex_squares_are_filtered_from_render_data():
    f = random_curve(3, 0)  # no real squares for this seed
    rep = count_inscribed_squares(f)
    assert rep.n_real_squares == 0 and rep.n_orbits == 12
    assert reality_and_render_data(rep) == []
    assert len(reality_and_render_data(rep, include_complex=True)) == 12
