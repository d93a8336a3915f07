"""Acceptance criteria, one test per criterion.

Each test records a ``criterion N: PASS|FAIL ...`` line that is printed in the
terminal summary. Run directly with ``python tests/test_acceptance.py``.
"""

import sys
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from wmetric import (
    Curve,
    Domain,
    Majorant,
    Weight,
    check_extension_condition,
    check_majorant_axioms,
    curve_length,
    dstar_estimate,
    q_profile,
    refine_sequence,
    ro_constant_estimate,
    topology_equivalence_ratio,
    verify_image_curve_lemma,
    verify_unit_ball_corollary,
)
from wmetric.cli import main
from wmetric.harness import boundary_q_points, lipschitz_growth
from wmetric.mappings import affine, log_branch, monomial, power_alpha
from wmetric.sampling import pairs_in_domain, points_in_domain

CONFIG = Path(__file__).resolve().parents[1] / "configs" / "hardy_littlewood.ini"
DISK = Domain.unit_disk()


def record(n, ok, detail):
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_01_majorant_axioms():
    grid = np.geomspace(1e-3, 1e3, 50)
    verdicts = {a: check_majorant_axioms(Majorant.power(a), grid).passed for a in (0.25, 0.5, 0.75, 1.0)}
    square = check_majorant_axioms(Majorant.user(lambda t: t**2, lambda t: 2 * t), grid)
    ok = all(verdicts.values()) and {"3", "b"} <= set(square.failed())
    record(1, ok, f"powers pass {verdicts}; t^2 fails {square.failed()}")


def test_criterion_02_convex_geodesics():
    w = Weight.one(DISK)
    A, B = pairs_in_domain(DISK, 100, seed=0, margin=0.02)
    rep = check_extension_condition(w, Majorant.power(1.0), list(zip(A, B)), h=0.01)
    r = np.asarray(rep.ratios)
    ok = rep.pairs_tested == 100 and not rep.errors and np.all(np.abs(r - 1) <= 0.01)
    record(2, ok, f"{rep.pairs_tested} pairs, d/|x-y| in [{r.min():.8f}, {r.max():.8f}]")


def test_criterion_03_half_plane_benchmark():
    w = Weight.reciprocal_dist(Domain.half_plane())
    runs = refine_sequence(w, [0.0, 1.0], [0.0, np.e], [0.02, 0.01, 0.005])
    v = [r.value for r in runs]
    ok = abs(v[0] - 1) <= 0.02 and all(b <= a for a, b in zip(v, v[1:]))
    record(3, ok, "values over h = 0.02, 0.01, 0.005: " + ", ".join(f"{x:.8f}" for x in v))


def test_criterion_04_extension_condition():
    w = Weight.dist_power(DISK, -0.5)
    A, B = pairs_in_domain(DISK, 200, seed=1, margin=0.02)
    t0 = time.perf_counter()
    rep = check_extension_condition(w, Majorant.power(0.5), list(zip(A, B)), h=0.01)
    dt = time.perf_counter() - t0
    ok = rep.pairs_tested == 200 and rep.M_observed <= 8.0 and dt <= 60
    record(4, ok, f"M_observed = {rep.M_observed:.4f} <= 8 on {rep.pairs_tested} pairs in {dt:.1f} s")


def test_criterion_05_dstar_oracle():
    rng = np.random.default_rng(5)
    maps = {
        "monomial(2)": (monomial(2), points_in_domain(DISK, 100, seed=5, margin=0.01)),
        "power_alpha(1/2)": (power_alpha(0.5), points_in_domain(DISK, 100, seed=6, margin=0.01)),
        "affine(2I, b)": (affine(2 * np.eye(2), [0.3, -1.0]), rng.uniform(-2, 2, (100, 2))),
    }
    worst = {}
    for name, (f, X) in maps.items():
        worst[name] = max(dstar_estimate(f, x).deviation for x in X)
    ok = all(v <= 1e-3 for v in worst.values())
    record(5, ok, "max relative deviation " + ", ".join(f"{k} {v:.2e}" for k, v in worst.items()))


@pytest.fixture(scope="module")
def corollary_samples():
    return points_in_domain(DISK, 10_000, seed=11), pairs_in_domain(DISK, 10_000, seed=12)


@pytest.fixture(scope="module")
def corollary_reports(corollary_samples):
    X, P = corollary_samples
    return {a: verify_unit_ball_corollary(power_alpha(a), a, P, X) for a in (0.25, 0.5, 0.75)}


def test_criterion_06_forward(corollary_reports):
    fwd = {a: r[0] for a, r in corollary_reports.items()}
    ok = all(r.slack >= 1 - 0.02 for r in fwd.values())
    record(6, ok, "slack " + ", ".join(f"alpha={a}: {r.slack:.3f}" for a, r in fwd.items()))


def test_criterion_07_converse(corollary_reports, corollary_samples):
    conv = {a: r[1] for a, r in corollary_reports.items()}
    X, _ = corollary_samples
    K = ro_constant_estimate(monomial(2), Weight.dist(DISK), X).value
    ok = all(r.slack >= 1 - 0.02 for r in conv.values()) and K <= 1.02
    record(7, ok, "slack " + ", ".join(f"alpha={a}: {r.slack:.3f}" for a, r in conv.items()) + f"; RO K = {K:.5f}")


def test_criterion_08_image_curve():
    f = monomial(2)
    seg = Curve.segment([0.0, 0.0], [0.5, 0.0])
    image = curve_length(Curve(f(seg.refined(256).vertices)))
    rng = np.random.default_rng(8)
    reports = []
    for _ in range(20):
        n = rng.integers(2, 8)
        r = 0.9 * np.sqrt(rng.uniform(0, 1, n))
        t = rng.uniform(0, 2 * np.pi, n)
        reports.append(verify_image_curve_lemma(f, Curve(np.c_[r * np.cos(t), r * np.sin(t)])))
    ok = abs(image - 0.25) <= 0.01 * 0.25 and all(rep.passed for rep in reports)
    slack = min(rep.slack for rep in reports)
    record(8, ok, f"image length {image:.8f}; 20 polylines, min slack {slack:.4f}")


def test_criterion_09_topology():
    rows = topology_equivalence_ratio(Weight.dist(DISK), [0.0, 0.0], [0.2, 0.1, 0.05])
    inside = all(r["lower_bracket"] <= 1.0 <= r["upper_bracket"] for r in rows)
    width = [r["upper_bracket"] - r["lower_bracket"] for r in rows]
    shrink = [a / b for a, b in zip(width, width[1:])]
    ok = inside and all(s >= 1.5 for s in shrink)
    record(9, ok, "bracket widths " + ", ".join(f"{x:.4f}" for x in width) + f"; shrink {shrink}")


def test_criterion_10_negative_control():
    f, phi = log_branch(), Majorant.power(0.5)
    growth = lipschitz_growth(f, phi, (1e-2, 1e-4))["growth"]
    w = Weight.dist(DISK)
    q = [q_profile(f, w, phi, boundary_q_points(smallest=s)).max for s in (1e-2, 1e-4)]
    ok = growth >= 2 and q[1] / q[0] >= 5
    record(10, ok, f"Lipschitz-type growth {growth:.2f}; Q max {q[0]:.2f} -> {q[1]:.2f} ({q[1] / q[0]:.2f}x)")


def test_criterion_11_determinism(tmp_path, capsys):
    codes = [main(["verify", str(CONFIG), "--out", str(tmp_path / run)]) for run in ("a", "b")]
    capsys.readouterr()
    files = sorted(p.name for p in (tmp_path / "a").iterdir())
    same = all((tmp_path / "a" / n).read_bytes() == (tmp_path / "b" / n).read_bytes() for n in files)
    ok = codes == [0, 0] and same and len(files) >= 2
    record(11, ok, f"exit codes {codes}; {len(files)} files byte-identical: {same}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider", *sys.argv[1:]]))
