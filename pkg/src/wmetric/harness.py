"""Checks of the Hardy-Littlewood type inequalities on concrete instances.

Each check produces a :class:`TheoremReport`. The left side is always an
estimate that can only be too small (a sampled supremum); the right side
uses closed-form derivatives when available, so a failure is meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .curves import Curve, curve_length
from .domains import Weight
from .errors import DegenerateMajorantError, InvalidInputError, PreconditionError
from .estimators import (
    bloch_norm_estimate,
    dstar_values,
    holder_norm_estimate,
    holder_ratios,
    pair_arrays,
    ro_constant_estimate,
)
from .geodesics import check_extension_condition
from .majorant import Majorant, check_condition_A, check_majorant_axioms
from .sampling import boundary_approach_pairs, boundary_approach_points

TOL = 0.02
GEODESIC_PAIRS = 200
WITNESS_PAIRS = 10
# Lipschitz-type estimates growing by more than this factor between the two
# probe depths count as evidence that the map is not in the class
GROWTH_LIMIT = 1.5
PROBE_DEPTHS = (1e-2, 1e-4)


def _finite(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def to_jsonable(obj):
    """Replace non-finite floats by ``None`` and numpy scalars by Python ones."""
    if isinstance(obj, dict):
        return {k: to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return to_jsonable(obj.item())
    return _finite(obj)


@dataclass
class TheoremReport:
    """One inequality ``left <= right`` checked at relative tolerance ``tol``.

    ``status`` is ``pass``, ``fail`` or ``hypothesis_unmet``; in the last
    case ``passed`` is still computed but carries no weight.
    """

    theorem_id: str
    left: float
    right: float
    constant: float
    tol: float = TOL
    instance: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)
    hypothesis_met: bool = True

    @property
    def slack(self) -> float:
        if self.left == 0:
            return math.inf
        return self.right / self.left

    @property
    def passed(self) -> bool:
        return bool(self.left <= self.right * (1 + self.tol))

    @property
    def status(self) -> str:
        if not self.hypothesis_met:
            return "hypothesis_unmet"
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        return to_jsonable(
            {
                "theorem_id": self.theorem_id,
                "left": float(self.left),
                "right": float(self.right),
                "constant": float(self.constant),
                "slack": float(self.slack),
                "tol": self.tol,
                "pass": self.passed,
                "status": self.status,
                "instance": self.instance,
                "metadata": self.metadata,
            }
        )


def _instance(f, w=None, phi=None) -> dict:
    out = {"domain": f.source.describe(), "mapping": f.describe()}
    if w is not None:
        out["weight"] = w.describe()
    if phi is not None:
        out["majorant"] = phi.describe()
    return out


def lipschitz_growth(f, phi, depths=PROBE_DEPTHS, directions: int = 16) -> dict:
    """Lipschitz-type estimates on ball pairs pushed to each boundary depth.

    Returns the estimates, their ratio (last over first) and whether the
    ratio exceeds ``GROWTH_LIMIT``. Needs a unit disk or ball source.
    """
    if f.source.kind not in ("unit_disk", "unit_ball"):
        raise PreconditionError("boundary probing is implemented for the unit disk and ball")
    values = []
    for delta in depths:
        A, B = boundary_approach_pairs(f.source.dim, delta, directions)
        values.append(holder_norm_estimate(f, phi, (A, B)).value)
    growth = values[-1] / values[0] if values[0] > 0 else (math.inf if values[-1] > 0 else 1.0)
    return {"depths": list(depths), "values": values, "growth": growth, "diverging": bool(growth > GROWTH_LIMIT)}


def verify_forward(
    f,
    w: Weight,
    phi: Majorant,
    pairs,
    points,
    h: float | None = None,
    *,
    geodesic_pairs: int = GEODESIC_PAIRS,
    witnesses: int = WITNESS_PAIRS,
    tol: float = TOL,
) -> TheoremReport:
    """Check ``|f|_Lip_phi <= M |f|_Bloch_w`` on one common set of pairs.

    Weighted distances are too costly for every pair, so the geodesic pairs
    are the first ``geodesic_pairs`` of ``pairs`` plus the ``witnesses``
    pairs with the largest Lipschitz-type ratio (among those far enough from
    the boundary for spacing ``h``). Both ``M`` and the left side are taken
    over the pairs whose geodesic succeeded. The Bloch side uses the
    derivative oracle when ``f`` has one.
    """
    A, B = pair_arrays(pairs)
    h = 0.01 if h is None else float(h)
    dense = holder_ratios(f, phi, A, B)
    depth = np.minimum(w.domain.depth(A), w.domain.depth(B))
    ok = np.flatnonzero((depth > 2 * h) & np.isfinite(dense))
    first = ok[: min(geodesic_pairs, ok.size)]
    rest = np.setdiff1d(ok, first)
    top = rest[np.argsort(-dense[rest], kind="stable")[:witnesses]]
    idx = np.concatenate([first, np.sort(top)])
    condition = check_extension_condition(w, phi, list(zip(A[idx], B[idx])), h)
    used = idx[condition.tested]
    M = condition.M_observed
    holder = holder_norm_estimate(f, phi, (A[used], B[used]))
    bloch = bloch_norm_estimate(f, w, points, use_oracle=f.has_oracle)
    j = int(np.nanargmax(dense))
    return TheoremReport(
        "forward",
        holder.value,
        M * bloch.value,
        M,
        tol,
        _instance(f, w, phi),
        {
            "M_observed": M,
            "M_worst_pair": condition.worst_pair,
            "geodesic_pairs": condition.pairs_tested,
            "witness_pairs": int(top.size),
            "resolution": condition.resolution,
            "condition_errors": len(condition.errors),
            "lipschitz": holder.to_dict(),
            "lipschitz_all_pairs": {"value": float(dense[j]), "pairs": int(np.isfinite(dense).sum())},
            "bloch": bloch.to_dict(),
            "oracle_backed": f.has_oracle,
        },
        hypothesis_met=bool(np.isfinite(M)) and not condition.diverging,
    )


def verify_converse_strong(
    f,
    w: Weight,
    phi: Majorant,
    A: float,
    points,
    pairs,
    radius_fractions=(0.25, 0.5, 0.75),
    *,
    K: float | None = None,
    tol: float = TOL,
    probe: bool = True,
) -> TheoremReport:
    """Check ``sup D*f / phi'(w) <= A K |f|_Lip_phi``.

    ``K`` defaults to 1 for bounded analytic maps and otherwise to the
    sampled RO estimate. The instance is marked ``hypothesis_unmet`` when
    condition A fails on the sampled weight values or, on the unit ball, when
    the Lipschitz-type estimate keeps growing toward the boundary.
    """
    X = np.atleast_2d(np.asarray(points, dtype=float))
    wv = w(X)
    grid = np.unique(wv)
    cond = check_condition_A(phi, A, grid)
    dphi = np.asarray(phi.deriv(wv), dtype=float)
    if np.any(~(dphi > 0)):
        raise DegenerateMajorantError("phi'(w(x)) vanishes at a sample point")
    ds = dstar_values(f, X)
    q = ds / dphi
    i = int(np.argmax(q))
    ro = None
    if K is None:
        if f.bounded_analytic:
            K = 1.0
        else:
            ro = ro_constant_estimate(f, w, X, radius_fractions)
            K = ro.value
    holder = holder_norm_estimate(f, phi, pairs)
    meta = {
        "condition_A": {"holds": cond.holds, "worst_ratio": cond.worst_ratio, "A": A},
        "K": K,
        "K_source": "ro_estimate" if ro is not None else ("bounded_analytic" if f.bounded_analytic else "given"),
        "left_witness": X[i].tolist(),
        "lipschitz": holder.to_dict(),
    }
    if ro is not None:
        meta["ro"] = ro.to_dict()
    met = cond.holds
    if probe and f.source.kind in ("unit_disk", "unit_ball"):
        growth = lipschitz_growth(f, phi)
        meta["lipschitz_probe"] = growth
        met = met and not growth["diverging"]
    return TheoremReport(
        "converse", float(q[i]), A * K * holder.value, A * K, tol, _instance(f, w, phi), meta, hypothesis_met=met
    )


def verify_unit_ball_corollary(f, alpha: float, pairs, points, h=None, *, tol: float = TOL):
    """Both unit-ball inequalities with constants ``4/alpha`` and ``2/alpha``.

    ``C = sup (1 - |z|)**(1 - alpha) |Df(z)|`` from the oracle on ``points``,
    ``C' = `` the Lipschitz-type estimate for ``t**alpha`` on ``pairs``.
    Returns ``(forward, converse)``. ``h`` is unused and accepted for a
    uniform call signature.
    """
    if not 0 < alpha < 1:
        raise InvalidInputError("alpha must lie in (0, 1)")
    if not f.has_oracle:
        raise PreconditionError("the unit-ball check needs a derivative oracle")
    if f.source.kind not in ("unit_disk", "unit_ball"):
        raise PreconditionError("the mapping must live on the unit disk or ball")
    phi = Majorant.power(alpha)
    X = np.atleast_2d(np.asarray(points, dtype=float))
    d = f.source.boundary_distance(X)
    c = d ** (1 - alpha) * f.oracle(X)
    i = int(np.argmax(c))
    C = float(c[i])
    A, B = pair_arrays(pairs)
    holder = holder_norm_estimate(f, phi, (A, B))
    half = holder_norm_estimate(f, phi, (A[: len(A) // 2], B[: len(B) // 2])) if len(A) > 1 else holder
    stability = holder.value / half.value if half.value > 0 else 1.0
    inst = _instance(f, phi=phi)
    inst["alpha"] = alpha
    meta = {
        "C": C,
        "C_witness": X[i].tolist(),
        "C_prime": holder.value,
        "C_prime_half_sample": half.value,
        "doubling_growth": stability,
        "points": len(X),
        "pairs": holder.samples_used,
    }
    fwd = TheoremReport("ball_forward", holder.value, 4 / alpha * C, 4 / alpha, tol, inst, dict(meta))
    conv = TheoremReport("ball_converse", C, 2 / alpha * holder.value, 2 / alpha, tol, inst, dict(meta))
    return fwd, conv


@dataclass
class QProfile:
    max: float
    witness: list | None
    quantiles: dict
    by_depth: list
    samples: int

    def to_dict(self) -> dict:
        return to_jsonable(
            {
                "max": self.max,
                "witness": self.witness,
                "quantiles": self.quantiles,
                "by_depth": self.by_depth,
                "samples": self.samples,
            }
        )


def q_profile(f, w: Weight, phi: Majorant, points) -> QProfile:
    """Distribution of ``Q(z) = D*f(z) / phi'(w(z))`` over ``points``.

    ``by_depth`` groups the points by boundary distance (rounded to 3 digits)
    and records the maximum of ``Q`` in each group. There is no pass/fail
    threshold: only boundedness of the profile is informative.
    """
    X = np.atleast_2d(np.asarray(points, dtype=float))
    wv = w(X)
    axioms = check_majorant_axioms(phi, np.unique(wv))
    if not axioms.checks["3"].passed:
        raise PreconditionError("phi' is not nonincreasing on the sampled weight values")
    dphi = np.asarray(phi.deriv(wv), dtype=float)
    if np.any(~(dphi > 0)):
        raise DegenerateMajorantError("phi'(w(x)) vanishes at a sample point")
    Q = dstar_values(f, X) / dphi
    i = int(np.argmax(Q))
    d = np.atleast_1d(f.source.boundary_distance(X))
    key = np.array([float(f"{v:.3g}") for v in d])
    by_depth = [{"depth": float(k), "max": float(Q[key == k].max())} for k in sorted(set(key.tolist()), reverse=True)]
    qs = {str(p): float(np.quantile(Q, p)) for p in (0.5, 0.9, 0.99, 1.0)}
    return QProfile(float(Q[i]), X[i].tolist(), qs, by_depth, len(X))


def boundary_q_points(dim: int = 2, smallest: float = 1e-4, directions: int = 16) -> np.ndarray:
    """Sample points for :func:`q_profile` approaching the unit sphere."""
    return boundary_approach_points(dim, smallest, directions)


def verify_image_curve_lemma(f, gamma: Curve, pieces: int = 64, *, tol: float = TOL) -> TheoremReport:
    """Check ``length(f o gamma) <= max D*f * length(gamma)``.

    The image is the polyline through ``f`` of each vertex of ``gamma``
    refined ``pieces`` times; D*f is sampled on the same vertices.
    """
    V = gamma.refined(pieces).vertices
    f.source.boundary_distance(V)
    image = Curve(f(V))
    left = curve_length(image)
    ds = dstar_values(f, V)
    i = int(np.argmax(ds))
    right = float(ds[i]) * curve_length(gamma)
    return TheoremReport(
        "image_curve",
        left,
        right,
        float(ds[i]),
        tol,
        _instance(f),
        {"curve_length": curve_length(gamma), "vertices": len(V), "dstar_witness": V[i].tolist()},
    )

