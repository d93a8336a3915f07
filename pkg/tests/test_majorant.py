import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wmetric import DegenerateMajorantError, InvalidInputError, Majorant, check_condition_A, check_majorant_axioms

LOG_GRID = np.geomspace(1e-3, 1e3, 50)


def square():
    return Majorant.user(lambda t: np.asarray(t, float) ** 2, lambda t: 2 * np.asarray(t, float))


def test_sqrt_on_perfect_squares():
    phi = Majorant.power(0.5)
    np.testing.assert_allclose(phi(np.array([0.25, 1.0, 4.0])), [0.5, 1.0, 2.0])
    assert check_majorant_axioms(phi, [0.25, 1, 4]).passed


def test_identity_has_zero_violation():
    rep = check_majorant_axioms(Majorant.power(1.0), LOG_GRID)
    assert rep.passed
    assert all(c.worst_violation == 0.0 for k, c in rep.checks.items() if k != "derivative")


def test_square_fails_concavity_and_ratio():
    rep = check_majorant_axioms(square(), [0.5, 1, 2])
    assert not rep.checks["3"].passed
    assert not rep.checks["b"].passed
    assert rep.checks["1"].passed and rep.checks["2"].passed
    # phi(t)/t = t goes 0.5 -> 1 -> 2, so the relative excess is (2 - 1) / 2
    assert rep.checks["b"].worst_violation == pytest.approx(0.5)


@pytest.mark.parametrize("grid", [[], [0.0, 1.0], [-1.0, 2.0], [1.0, 1.0], [2.0, 1.0], [1.0, np.inf]])
def test_bad_grid_rejected(grid):
    with pytest.raises(InvalidInputError):
        check_majorant_axioms(Majorant.power(0.5), grid)


def test_wrong_derivative_is_caught():
    phi = Majorant.user(lambda t: np.sqrt(t), lambda t: 0.6 / np.sqrt(t))
    rep = check_majorant_axioms(phi, LOG_GRID)
    assert "derivative" in rep.failed()


def test_report_serializes():
    d = check_majorant_axioms(Majorant.power(0.25), [0.1, 1.0]).to_dict()
    assert d["passed"] and set(d["checks"]) == {"1", "2", "3", "a", "b", "c", "d", "derivative"}


def test_power_alpha_range():
    for bad in (0.0, -0.5, 1.5):
        with pytest.raises(InvalidInputError):
            Majorant.power(bad)


def test_condition_A_examples():
    assert check_condition_A(Majorant.power(0.5), 4.0, LOG_GRID).worst_ratio == 2.0
    assert check_condition_A(Majorant.power(0.5), 4.0, LOG_GRID)
    assert check_condition_A(Majorant.power(1.0), 2.0, LOG_GRID)
    assert not check_condition_A(Majorant.power(0.5), 2.0, LOG_GRID)


def test_condition_A_degenerate():
    flat = Majorant.user(lambda t: np.minimum(t, 1.0), lambda t: np.where(np.asarray(t) < 1, 1.0, 0.0))
    with pytest.raises(DegenerateMajorantError):
        check_condition_A(flat, 2.0, [0.5, 2.0])


@given(
    alpha=st.floats(0.05, 1.0),
    A=st.floats(0.1, 30.0),
    grid=st.lists(st.floats(1e-6, 1e6), min_size=1, max_size=20),
)
def test_condition_A_for_powers_is_grid_independent(alpha, A, grid):
    res = check_condition_A(Majorant.power(alpha), A, grid)
    assert res.holds == (A > 1 / alpha)


@given(st.lists(st.floats(0.01, 100.0), min_size=2, max_size=12, unique=True), st.floats(0.01, 100.0))
def test_failures_persist_under_refinement(points, extra):
    grid = np.sort(points)
    coarse = check_majorant_axioms(square(), grid)
    fine = check_majorant_axioms(square(), np.unique(np.append(grid, extra)))
    for name in coarse.failed():
        if name in ("1", "2", "3", "a", "b", "c", "d"):
            assert name in fine.failed()


@given(st.floats(0.05, 1.0))
def test_powers_pass_everything(alpha):
    assert check_majorant_axioms(Majorant.power(alpha), LOG_GRID).passed
