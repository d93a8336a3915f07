import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wmetric import Domain, DomainViolationError, InvalidInputError, Majorant, Weight

coord = st.floats(-1.5, 1.5)
point2 = st.tuples(coord, coord)


def test_disk_examples(disk):
    assert disk.boundary_distance([0.0, 0.0]) == 1.0
    assert disk.boundary_distance([0.6, 0.0]) == pytest.approx(0.4)


def test_half_plane_example(half_plane):
    assert half_plane.boundary_distance([7.0, 0.25]) == 0.25


def test_rectangle_and_annulus():
    r = Domain.rectangle([0, 0], [2, 1])
    assert r.boundary_distance([1.5, 0.5]) == pytest.approx(0.5)
    assert r.boundary_distance([0.1, 0.5]) == pytest.approx(0.1)
    a = Domain.annulus(0.5, 2.0)
    assert a.boundary_distance([0.75, 0.0]) == pytest.approx(0.25)
    assert a.boundary_distance([0.0, -1.75]) == pytest.approx(0.25)
    assert not a.contains([0.1, 0.1])


def test_l_shape_geometry():
    L = Domain.l_shape()
    assert not L.contains([0.5, -0.5])
    assert not L.contains([0.0, 0.0])
    assert L.boundary_distance([-0.5, 0.5]) == pytest.approx(0.5)
    # nearest boundary point is the inner corner
    assert L.boundary_distance([0.1, 0.1]) == pytest.approx(0.1)
    assert L.boundary_distance([-0.1, -0.2]) == pytest.approx(0.1)
    assert L.boundary_distance([0.3, 0.05]) == pytest.approx(0.05)


def test_ball_3d_and_space():
    B = Domain.unit_ball(3)
    assert B.kind == "unit_ball"
    assert B.boundary_distance([0.0, 0.6, 0.0]) == pytest.approx(0.4)
    assert Domain.space(3).boundary_distance([5.0, 1.0, -2.0]) == np.inf


def test_outside_raises(disk, half_plane):
    with pytest.raises(DomainViolationError):
        disk.boundary_distance([1.0, 0.0])
    with pytest.raises(DomainViolationError):
        half_plane.boundary_distance([0.0, -1.0])
    with pytest.raises(InvalidInputError):
        disk.depth([0.1, 0.2, 0.3])


def test_bad_constructors():
    with pytest.raises(InvalidInputError):
        Domain.rectangle([0, 0], [0, 1])
    with pytest.raises(InvalidInputError):
        Domain.annulus(1.0, 0.5)
    with pytest.raises(InvalidInputError):
        Weight.constant(Domain.unit_disk(), 0.0)


@pytest.mark.parametrize(
    "domain",
    [Domain.unit_disk(), Domain.half_plane(), Domain.rectangle([-1, -1], [1, 0.5]), Domain.l_shape(), Domain.annulus(0.3, 1.2)],
    ids=lambda d: d.kind,
)
@given(x=point2, y=point2)
def test_depth_is_1_lipschitz(domain, x, y):
    dx, dy = domain.depth(np.array([x, y]))
    assert abs(dx - dy) <= np.linalg.norm(np.subtract(x, y)) + 1e-12


@given(x=point2)
def test_positive_depth_iff_contains(x):
    for d in (Domain.unit_disk(), Domain.l_shape(), Domain.annulus(0.3, 1.2)):
        assert (d.depth(np.array(x)) > 0) == bool(d.contains(np.array(x)))


@given(alpha=st.floats(0.05, 0.95), r=st.floats(0.0, 0.99), t=st.floats(0, 2 * np.pi))
def test_weight_identities(alpha, r, t):
    D = Domain.unit_disk()
    x = np.array([r * np.cos(t), r * np.sin(t)])
    d = D.boundary_distance(x)
    assert Weight.dist_power(D, alpha - 1)(x) == pytest.approx(d ** (alpha - 1), rel=1e-12)
    assert Weight.reciprocal_dist(D)(x) * Weight.dist(D)(x) == pytest.approx(1.0, rel=1e-12)
    assert Weight.from_majorant(D, Majorant.power(alpha))(x) == pytest.approx(d ** (alpha - 1), rel=1e-12)


def test_weight_checks_domain(disk):
    with pytest.raises(DomainViolationError):
        Weight.dist(disk)([2.0, 0.0])


def test_user_majorant_weight(disk):
    phi = Majorant.user(lambda t: np.log1p(t), lambda t: 1 / (1 + t))
    w = Weight.from_majorant(disk, phi)
    assert w.kind == "majorant"
    assert w([0.5, 0.0]) == pytest.approx(np.log1p(0.5) / 0.5)


def test_user_domain():
    strip = Domain.user(2, lambda X: np.minimum(X[..., 1], 1 - X[..., 1]), bounds=((-1, 0), (1, 1)), convex=True)
    assert strip.boundary_distance([3.0, 0.25]) == pytest.approx(0.25)
    assert strip.describe() == {"kind": "user", "dim": 2}
