"""Deterministic low-discrepancy point and pair generators."""

from __future__ import annotations

import numpy as np
from scipy.stats import qmc

from .errors import InvalidInputError


def halton(n: int, dim: int, seed: int = 0) -> np.ndarray:
    """``n`` scrambled Halton points in ``[0, 1)^dim``; fixed by ``seed``."""
    return qmc.Halton(d=dim, scramble=True, seed=seed).random(n)


def points_in_domain(domain, n: int, seed: int = 0, margin: float = 0.0) -> np.ndarray:
    """Halton points of the bounding box kept when their depth exceeds ``margin``.

    The accepted points are the first ``n`` of one Halton stream, so a
    larger ``n`` extends (never reshuffles) a smaller sample.
    """
    if domain.bounds is None:
        raise InvalidInputError("points_in_domain needs a bounded domain")
    lo, hi = (np.asarray(b, dtype=float) for b in domain.bounds)
    engine = qmc.Halton(d=domain.dim, scramble=True, seed=seed)
    out = []
    got = 0
    while got < n:
        X = lo + engine.random(max(64, 2 * (n - got))) * (hi - lo)
        X = X[domain.depth(X) > margin]
        out.append(X)
        got += len(X)
    return np.vstack(out)[:n]


def pairs_in_domain(domain, n: int, seed: int = 0, margin: float = 0.0):
    """``n`` pairs from one ``2 * dim`` Halton stream (first half, second half)."""
    if domain.bounds is None:
        raise InvalidInputError("pairs_in_domain needs a bounded domain")
    dim = domain.dim
    lo, hi = (np.tile(np.asarray(b, dtype=float), 2) for b in domain.bounds)
    engine = qmc.Halton(d=2 * dim, scramble=True, seed=seed)
    A, B = [], []
    got = 0
    while got < n:
        Z = lo + engine.random(max(64, 4 * (n - got))) * (hi - lo)
        a, b = Z[:, :dim], Z[:, dim:]
        ok = (domain.depth(a) > margin) & (domain.depth(b) > margin) & np.any(a != b, axis=1)
        A.append(a[ok])
        B.append(b[ok])
        got += int(ok.sum())
    return np.vstack(A)[:n], np.vstack(B)[:n]


def geometric_depths(largest: float, smallest: float, per_decade: int = 4) -> np.ndarray:
    if not 0 < smallest <= largest:
        raise InvalidInputError("need 0 < smallest <= largest")
    k = max(1, int(round(per_decade * np.log10(largest / smallest))))
    return np.geomspace(largest, smallest, k + 1)


def ball_directions(dim: int, count: int) -> np.ndarray:
    """Evenly spread unit vectors; the first is always ``e_1``."""
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        t = 2 * np.pi * np.arange(count) / count
        return np.stack([np.cos(t), np.sin(t)], axis=1)
    v = np.zeros((count, dim))
    i = np.arange(count)
    z = 1 - 2 * i / max(count - 1, 1)
    ang = np.pi * (1 + 5**0.5) * i
    s = np.sqrt(np.clip(1 - z**2, 0, None))
    # first point lands on e_1
    v[:, 0], v[:, 1], v[:, 2] = z, s * np.cos(ang), s * np.sin(ang)
    return v


def boundary_approach_points(dim: int, smallest: float, directions: int = 16, largest: float = 0.5):
    """Points of the unit ball at depths ``largest ... smallest`` along fixed rays."""
    depths = geometric_depths(largest, smallest)
    U = ball_directions(dim, directions)
    return ((1 - depths)[None, :, None] * U[:, None, :]).reshape(-1, dim)


def boundary_approach_pairs(dim: int, smallest: float, directions: int = 16, largest: float = 0.5):
    """Pairs of the unit ball pushed toward the boundary down to depth ``smallest``.

    Along each ray: consecutive radial points, plus for every depth ``e`` a
    pair of points at depth ``e`` a distance ``e`` apart. Returns ``(A, B)``.
    """
    depths = geometric_depths(largest, smallest)
    U = ball_directions(dim, directions)
    A, B = [], []
    for u in U:
        pts = (1 - depths)[:, None] * u
        A.append(pts[:-1])
        B.append(pts[1:])
        # tangent direction: any unit vector orthogonal to u
        t = np.zeros(dim)
        t[1 if abs(u[0]) > 0.5 else 0] = 1.0
        t -= (t @ u) * u
        t /= np.linalg.norm(t)
        for e in depths:
            c = (1 - e) * u
            q = c + e * t
            q *= (1 - e) / np.linalg.norm(q)
            A.append(c[None])
            B.append(q[None])
    return np.vstack(A), np.vstack(B)
