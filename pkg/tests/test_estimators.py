import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wmetric import (
    Domain,
    InvalidInputError,
    Majorant,
    PreconditionError,
    Weight,
    affine,
    bloch_norm_estimate,
    constant,
    dstar_estimate,
    dstar_values,
    holder_norm_estimate,
    identity,
    log_branch,
    monomial,
    power_alpha,
    ro_constant_estimate,
)
from wmetric.mappings import Mapping
from wmetric.sampling import pairs_in_domain, points_in_domain


def test_dstar_examples(disk):
    assert dstar_estimate(monomial(2), [0.5, 0.0]).value == pytest.approx(1.0, rel=1e-3)
    assert dstar_estimate(power_alpha(0.5), [0.0, 0.0]).value == pytest.approx(0.5, rel=1e-3)
    est = dstar_estimate(affine(2 * np.eye(2), [1.0, -1.0]), [0.3, 0.2])
    assert est.value == pytest.approx(2.0, rel=1e-8)
    assert est.oracle == 2.0 and est.deviation < 1e-8


def test_dstar_3d_slice():
    f = power_alpha(0.5, Domain.unit_ball(3))
    x = np.array([0.2, -0.1, 0.5])
    assert dstar_estimate(f, x).value == pytest.approx(float(f.oracle(x[None])[0]), rel=1e-4)


def test_dstar_non_conformal_affine():
    A = np.array([[3.0, 1.0], [0.0, 0.5]])
    f = affine(A, [0.0, 0.0])
    # 64 directions resolve the top singular direction up to O(1/64^2)
    assert dstar_estimate(f, [0.0, 0.0]).value == pytest.approx(np.linalg.norm(A, 2), rel=2e-3)


def test_dstar_preconditions(disk):
    f = monomial(2)
    with pytest.raises(PreconditionError):
        dstar_estimate(f, [0.5, 0.0], radii=[0.6, 0.1])
    with pytest.raises(PreconditionError):
        dstar_estimate(f, [0.5, 0.0], radii=[1e-8, 1e-9])
    with pytest.raises(InvalidInputError):
        dstar_estimate(f, [[0.1, 0.0], [0.2, 0.0]])


def test_dstar_oracle_consistency(disk):
    X = points_in_domain(disk, 100, seed=11)
    for f in (monomial(2), monomial(3), power_alpha(0.25), power_alpha(0.75), log_branch()):
        dev = np.abs(dstar_values(f, X) / f.oracle(X) - 1)
        assert dev.max() <= 1e-3, f.kind


def test_dstar_explicit_radii_use_two_smallest(disk):
    f = monomial(2)
    x = np.array([[0.5, 0.0]])
    a = dstar_values(f, x, radii=[1e-2, 1e-5, 1e-6])
    b = dstar_values(f, x, radii=[1e-5, 1e-6])
    assert a[0] == b[0]


def test_bloch_examples(disk, sqrt_weight):
    X = points_in_domain(disk, 500, seed=2)
    assert bloch_norm_estimate(identity(disk), Weight.one(disk), X).value == pytest.approx(1.0, rel=1e-6)
    assert bloch_norm_estimate(constant(disk), Weight.one(disk), X).value == 0.0
    seg = np.stack([np.linspace(0, 0.999, 400), np.zeros(400)], axis=1)
    est = bloch_norm_estimate(power_alpha(0.5), sqrt_weight, seg)
    assert est.value == pytest.approx(0.5, rel=0.02)
    assert bloch_norm_estimate(power_alpha(0.5), sqrt_weight, seg, use_oracle=True).value == pytest.approx(0.5, rel=1e-9)


def test_holder_examples(disk):
    A, B = pairs_in_domain(disk, 2000, seed=5)
    assert holder_norm_estimate(identity(disk), Majorant.power(1.0), (A, B)).value == pytest.approx(1.0, rel=1e-12)
    assert holder_norm_estimate(constant(disk), Majorant.power(0.3), (A, B)).value == 0.0


def test_holder_skips_coincident(disk):
    est = holder_norm_estimate(identity(disk), Majorant.power(1.0), [((0.1, 0.1), (0.1, 0.1)), ((0.0, 0.0), (0.3, 0.4))])
    assert est.parameters["skipped"] == [0] and est.samples_used == 1
    assert est.value == pytest.approx(1.0)


def test_holder_stable_under_doubling(disk):
    f, phi = power_alpha(0.5), Majorant.power(0.5)
    A, B = pairs_in_domain(disk, 20000, seed=6)
    a = holder_norm_estimate(f, phi, (A[:10000], B[:10000])).value
    b = holder_norm_estimate(f, phi, (A, B)).value
    assert a <= b <= 1.02 * a
    # both square roots lie in the right half-plane, so |su - sv|^2 <= |su - sv| |su + sv| = |u - v|
    assert b <= 1.0


def test_ro_examples(disk):
    X = points_in_domain(disk, 400, seed=8)
    w = Weight.dist(disk)
    assert ro_constant_estimate(identity(disk), w, X).value == pytest.approx(1.0, rel=0.02)
    assert ro_constant_estimate(monomial(2), w, X).value <= 1.02
    assert ro_constant_estimate(constant(disk), w, X).value == 0.0


def test_ro_ball_must_fit(disk):
    with pytest.raises(PreconditionError):
        ro_constant_estimate(identity(disk), Weight.one(disk), [[0.5, 0.0]], radius_fractions=[0.75])
    with pytest.raises(InvalidInputError):
        ro_constant_estimate(identity(disk), Weight.dist(disk), [[0.5, 0.0]], radius_fractions=[1.0])


def test_ro_flags_zero_oscillation(disk):
    def spike(X):
        r = np.linalg.norm(X, axis=-1, keepdims=True)
        return np.where(r < 1e-4, X, 0.0)

    f = Mapping(disk, spike, 2, "spike")
    est = ro_constant_estimate(f, Weight.dist(disk), [[0.0, 0.0]])
    assert est.parameters["unbounded_K"] and est.parameters["unbounded"] == 3


@given(c=st.floats(0.1, 10.0))
def test_scale_equivariance(c):
    disk = Domain.unit_disk()
    f = power_alpha(0.5)
    g = f.scaled(c)
    X = points_in_domain(disk, 40, seed=1)
    A, B = pairs_in_domain(disk, 40, seed=2)
    w, phi = Weight.dist_power(disk, -0.5), Majorant.power(0.5)
    np.testing.assert_allclose(dstar_values(g, X), c * dstar_values(f, X), rtol=1e-6)
    assert bloch_norm_estimate(g, w, X).value == pytest.approx(c * bloch_norm_estimate(f, w, X).value, rel=1e-6)
    assert holder_norm_estimate(g, phi, (A, B)).value == pytest.approx(c * holder_norm_estimate(f, phi, (A, B)).value, rel=1e-12)
    k_f = ro_constant_estimate(f, Weight.dist(disk), X[:10]).value
    k_g = ro_constant_estimate(g, Weight.dist(disk), X[:10]).value
    assert k_g == pytest.approx(k_f, rel=1e-6)


@given(n=st.integers(2, 60), extra=st.integers(1, 60))
def test_more_samples_never_lower(n, extra):
    disk = Domain.unit_disk()
    f, phi, w = log_branch(), Majorant.power(0.5), Weight.dist(disk)
    X = points_in_domain(disk, n + extra, seed=4)
    A, B = pairs_in_domain(disk, n + extra, seed=4)
    assert bloch_norm_estimate(f, w, X[:n]).value <= bloch_norm_estimate(f, w, X).value
    assert holder_norm_estimate(f, phi, (A[:n], B[:n])).value <= holder_norm_estimate(f, phi, (A, B)).value


def test_modulus_shrinks_with_separation(disk):
    f, phi = power_alpha(0.5), Majorant.power(0.5)
    A, B = pairs_in_domain(disk, 20000, seed=9)
    sep = np.linalg.norm(A - B, axis=1)
    mod = np.linalg.norm(f(A) - f(B), axis=1)
    bands = [mod[(sep > s / 2) & (sep <= s)].max() for s in (0.4, 0.1, 0.025)]
    assert bands[0] > bands[1] > bands[2]


def test_mapping_validation():
    with pytest.raises(InvalidInputError):
        power_alpha(1.5)
    with pytest.raises(InvalidInputError):
        affine(np.eye(2), [0.0, 0.0, 1.0])
    with pytest.raises(InvalidInputError):
        monomial(2, Domain.half_plane(1))
    with pytest.raises(InvalidInputError):
        Mapping(Domain.unit_disk(), lambda X: X).oracle([[0.0, 0.0]])
