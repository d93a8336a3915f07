"""Sampled estimates of D*f, Bloch-type and Lipschitz-type norms and the RO constant.

Every norm estimate is a maximum of ratios actually computed, hence a lower
bound for the supremum it approximates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.stats import norm as _normal

from .errors import InvalidInputError, PreconditionError
from .sampling import ball_directions, halton

MIN_RADIUS = 1e-7
RADIUS_SCALES = (1e-5, 1e-6)
RADIUS_FRACTIONS = (0.25, 0.5, 0.75)
SHELLS = (0.25, 0.5, 0.75, 1.0)
# number of evaluation points per numpy batch
_BATCH = 1 << 20


def directions(dim: int) -> np.ndarray:
    """Probe directions: 64 in the plane, 256 in higher dimensions."""
    if dim <= 3:
        return ball_directions(dim, 64 if dim == 2 else 256)
    g = _normal.ppf(halton(256, dim, seed=0))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


@dataclass
class NormEstimate:
    value: float
    witness: object
    samples_used: int
    parameters: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "witness": self.witness,
            "samples_used": self.samples_used,
            "parameters": self.parameters,
        }


@dataclass
class DStarEstimate:
    value: float
    radii: list[float]
    directions: int
    oracle: float | None = None
    deviation: float | None = None

    def __float__(self):
        return self.value


def _points(f, X) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[-1] != f.source.dim:
        raise InvalidInputError(f"points must have dimension {f.source.dim}")
    return X


def default_radii(d) -> np.ndarray:
    """Two probe radii per point, ``1e-5 d`` and ``1e-6 d`` floored at ``MIN_RADIUS``.

    ``d`` is the boundary distance (``inf`` in the whole space counts as 1).
    """
    d = np.where(np.isfinite(d), d, 1.0)
    return np.maximum(np.outer(d, RADIUS_SCALES), MIN_RADIUS)


def _check_radii(R, d):
    if np.any(R < MIN_RADIUS):
        raise PreconditionError(f"probe radius below {MIN_RADIUS}")
    bad = ~(R < d[:, None])
    if np.any(bad):
        i = int(np.argmax(bad.any(axis=1)))
        raise PreconditionError(f"probe radius {R[i].max()} not below the boundary distance {d[i]}")


def dstar_values(f, X, radii=None, U=None) -> np.ndarray:
    """D*f at each row of ``X`` (vectorized form of :func:`dstar_estimate`).

    ``radii`` is either a list shared by all points or a ``(N, R)`` array.
    Only the two smallest radii of each point are used.
    """
    X = _points(f, X)
    d = f.source.boundary_distance(X)
    d = np.atleast_1d(d)
    if radii is None:
        R = default_radii(d)
    else:
        R = np.asarray(radii, dtype=float)
        R = np.broadcast_to(R if R.ndim == 2 else R[None, :], (X.shape[0], R.shape[-1]))
        R = np.sort(R, axis=1)[:, :2]
    _check_radii(R, d)
    U = directions(X.shape[1]) if U is None else U
    per_point = R.shape[1] * U.shape[0]
    step = max(1, _BATCH // per_point)
    out = np.empty(X.shape[0])
    for i0 in range(0, X.shape[0], step):
        x = X[i0 : i0 + step]
        Y = x[:, None, None, :] + R[i0 : i0 + step, :, None, None] * U[None, None, :, :]
        fx = f(x)
        diff = f(Y) - fx[:, None, None, :]
        dist = np.linalg.norm(Y - x[:, None, None, :], axis=-1)
        out[i0 : i0 + step] = (np.linalg.norm(diff, axis=-1) / dist).reshape(len(x), -1).max(axis=1)
    return out


def dstar_estimate(f, x, radii=None) -> DStarEstimate:
    """Estimate ``D*f(x)``, the upper limit of ``|f(y) - f(x)| / |y - x|``.

    The limit is replaced by a maximum over probe directions on the two
    smallest ``radii``. With a derivative oracle the relative deviation
    from it is reported too.
    """
    x = _points(f, x)
    if x.shape[0] != 1:
        raise InvalidInputError("dstar_estimate takes a single point; use dstar_values for many")
    d = np.atleast_1d(f.source.boundary_distance(x))
    R = default_radii(d) if radii is None else np.sort(np.asarray(radii, dtype=float))[None, :2]
    U = directions(x.shape[1])
    value = float(dstar_values(f, x, R, U)[0])
    est = DStarEstimate(value, R[0].tolist(), len(U))
    if f.has_oracle:
        o = float(f.oracle(x)[0])
        est.oracle = o
        est.deviation = abs(value - o) / o if o > 0 else abs(value)
    return est


def _witness(X, i):
    return np.asarray(X[i]).tolist()


def bloch_norm_estimate(f, w, points, *, use_oracle: bool = False, radii=None) -> NormEstimate:
    """``max D*f / w`` over ``points``; a lower bound of the Bloch-type norm.

    With ``use_oracle`` the closed-form derivative norm replaces the sampled D*.
    """
    X = _points(f, points)
    ds = f.oracle(X) if use_oracle else dstar_values(f, X, radii)
    wv = w(X)
    ratios = ds / wv
    i = int(np.argmax(ratios))
    return NormEstimate(
        float(ratios[i]),
        _witness(X, i),
        len(X),
        {"derivative": "oracle" if use_oracle else "sampled", "radii": "default" if radii is None else list(radii)},
    )


def pair_arrays(pairs):
    """Accept ``(A, B)`` arrays or a sequence of ``(a, b)`` and return two arrays."""
    if isinstance(pairs, tuple) and len(pairs) == 2 and np.ndim(pairs[0]) == 2:
        A, B = pairs
    else:
        pairs = list(pairs)
        if not pairs:
            raise InvalidInputError("no pairs given")
        A = [p[0] for p in pairs]
        B = [p[1] for p in pairs]
    return np.atleast_2d(np.asarray(A, dtype=float)), np.atleast_2d(np.asarray(B, dtype=float))


def holder_ratios(f, phi, A, B) -> np.ndarray:
    """Per-pair ``|f(a) - f(b)| / phi(|a - b|)``; coincident pairs give ``nan``."""
    sep = np.linalg.norm(A - B, axis=1)
    num = np.linalg.norm(f(A) - f(B), axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(sep > 0, num / np.asarray(phi(sep), dtype=float), np.nan)


def holder_norm_estimate(f, phi, pairs) -> NormEstimate:
    """``max |f(a) - f(b)| / phi(|a - b|)`` over distinct pairs.

    Coincident pairs are skipped and listed under ``parameters["skipped"]``.
    """
    A, B = pair_arrays(pairs)
    f.source.boundary_distance(A)
    f.source.boundary_distance(B)
    keep = np.linalg.norm(A - B, axis=1) > 0
    skipped = np.flatnonzero(~keep).tolist()
    if not keep.any():
        return NormEstimate(0.0, None, 0, {"skipped": skipped})
    ratios = holder_ratios(f, phi, A[keep], B[keep])
    i = int(np.argmax(ratios))
    j = int(np.flatnonzero(keep)[i])
    return NormEstimate(float(ratios[i]), [A[j].tolist(), B[j].tolist()], int(keep.sum()), {"skipped": skipped})


def ro_constant_estimate(f, w, points, radius_fractions=RADIUS_FRACTIONS, shells=SHELLS) -> NormEstimate:
    """Lower bound for the regular-oscillation constant ``K``.

    For each point ``x`` and fraction ``q`` set ``r = q w(x)`` and compute
    ``r D*f(x) / max |f(y) - f(x)|`` with ``y`` on the sampled shells of
    ``B(x, r)``. Balls where the sampled oscillation vanishes but ``D*f(x) > 0``
    are left out of the maximum and flagged in ``parameters["unbounded"]``.
    """
    X = _points(f, points)
    d = np.atleast_1d(f.source.boundary_distance(X))
    q = np.asarray(radius_fractions, dtype=float)
    if np.any((q <= 0) | (q >= 1)):
        raise InvalidInputError("radius fractions must lie in (0, 1)")
    r = np.outer(w(X), q)
    if np.any(~(r < d[:, None])):
        i = int(np.argmax(np.any(~(r < d[:, None]), axis=1)))
        raise PreconditionError(f"ball B(x, r) leaves the domain at x={X[i].tolist()}")
    ds = dstar_values(f, X)
    U = directions(X.shape[1])
    s = np.asarray(shells, dtype=float)
    fx = f(X)
    osc = np.zeros(r.shape)
    for k in range(len(q)):
        Y = X[:, None, None, :] + (r[:, k, None, None, None] * s[None, :, None, None]) * U[None, None, :, :]
        osc[:, k] = np.linalg.norm(f(Y) - fx[:, None, None, :], axis=-1).reshape(len(X), -1).max(axis=1)
    num = r * ds[:, None]
    unbounded = (osc == 0) & (num > 0)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(osc > 0, num / osc, 0.0)
    ratio[unbounded] = 0.0
    i, k = np.unravel_index(int(np.argmax(ratio)), ratio.shape)
    return NormEstimate(
        float(ratio[i, k]),
        {"x": X[i].tolist(), "r": float(r[i, k])},
        int(ratio.size),
        {
            "radius_fractions": q.tolist(),
            "shells": s.tolist(),
            "directions": len(U),
            "unbounded": int(unbounded.sum()),
            "unbounded_K": bool(unbounded.any()),
        },
    )
