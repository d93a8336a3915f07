"""Domains with closed-form boundary distance, and weight fields on them.

Every built-in domain exposes ``depth(X)``: the exact distance to the boundary
for interior points and a nonpositive number otherwise. All point arguments
are arrays whose last axis is the spatial dimension.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainViolationError, InvalidInputError

Array = np.ndarray


def _segment_distance(X: Array, a, b) -> Array:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    ab = b - a
    t = np.clip(((X - a) @ ab) / (ab @ ab), 0.0, 1.0)
    return np.linalg.norm(X - (a + t[..., None] * ab), axis=-1)


@dataclass(frozen=True)
class Domain:
    """A connected open subset of R^n.

    Use the factory classmethods for built-in kinds. A user domain passes its
    own ``depth_fn`` (exact boundary distance inside, <= 0 outside).
    """

    kind: str
    dim: int
    params: tuple = ()
    bounds: tuple | None = None  # (lower, upper) corner arrays as tuples
    depth_fn: Callable[[Array], Array] | None = field(default=None, compare=False, repr=False)
    convex: bool = False

    # -- factories ---------------------------------------------------------
    @classmethod
    def unit_ball(cls, dim: int = 2) -> "Domain":
        dim = int(dim)
        if dim < 1:
            raise InvalidInputError("dimension must be >= 1")
        kind = "unit_disk" if dim == 2 else "unit_ball"
        return cls(kind, dim, (dim,), ((-1.0,) * dim, (1.0,) * dim), convex=True)

    @classmethod
    def unit_disk(cls) -> "Domain":
        return cls.unit_ball(2)

    @classmethod
    def space(cls, dim: int = 2) -> "Domain":
        """All of R^n; the boundary distance is +inf."""
        return cls("space", int(dim), (int(dim),), None, convex=True)

    @classmethod
    def half_plane(cls, dim: int = 2) -> "Domain":
        """``{x : x[-1] > 0}``."""
        return cls("half_plane", int(dim), (int(dim),), None, convex=True)

    @classmethod
    def rectangle(cls, lower, upper) -> "Domain":
        lo = tuple(float(v) for v in lower)
        hi = tuple(float(v) for v in upper)
        if len(lo) != len(hi) or any(a >= b for a, b in zip(lo, hi)):
            raise InvalidInputError("rectangle needs lower < upper componentwise")
        return cls("rectangle", len(lo), lo + hi, (lo, hi), convex=True)

    @classmethod
    def l_shape(cls) -> "Domain":
        """``[-1, 1]^2`` minus the closed quadrant ``[0, 1] x [-1, 0]``."""
        return cls("l_shape", 2, (), ((-1.0, -1.0), (1.0, 1.0)))

    @classmethod
    def annulus(cls, r: float, R: float, dim: int = 2) -> "Domain":
        r, R = float(r), float(R)
        if not 0 <= r < R:
            raise InvalidInputError("annulus needs 0 <= r < R")
        return cls("annulus", int(dim), (r, R), ((-R,) * dim, (R,) * dim))

    @classmethod
    def user(cls, dim, depth_fn, bounds=None, convex=False) -> "Domain":
        return cls("user", int(dim), (), bounds, depth_fn, convex)

    # -- geometry ----------------------------------------------------------
    def depth(self, X) -> Array:
        X = np.asarray(X, dtype=float)
        if X.shape[-1] != self.dim:
            raise InvalidInputError(f"expected points of dimension {self.dim}, got {X.shape[-1]}")
        k = self.kind
        if k in ("unit_disk", "unit_ball"):
            return 1.0 - np.linalg.norm(X, axis=-1)
        if k == "half_plane":
            return X[..., -1].copy()
        if k == "space":
            return np.full(X.shape[:-1], np.inf)
        if k == "rectangle":
            lo = np.asarray(self.params[: self.dim])
            hi = np.asarray(self.params[self.dim :])
            return np.minimum(X - lo, hi - X).min(axis=-1)
        if k == "annulus":
            r, R = self.params
            rho = np.linalg.norm(X, axis=-1)
            return np.minimum(rho - r, R - rho)
        if k == "l_shape":
            return _l_shape_depth(X)
        if self.depth_fn is not None:
            return np.asarray(self.depth_fn(X), dtype=float)
        raise InvalidInputError(f"unknown domain kind {k!r}")

    def contains(self, X) -> Array:
        return self.depth(X) > 0

    def boundary_distance(self, x) -> float | Array:
        """Exact distance to the boundary; raises for points outside."""
        d = self.depth(x)
        if np.any(~(d > 0)):
            raise DomainViolationError(f"point(s) outside {self.kind}: {np.asarray(x)[~(d > 0)].tolist()}")
        return float(d) if np.ndim(d) == 0 else d

    def describe(self) -> dict:
        out = {"kind": self.kind, "dim": self.dim}
        if self.kind == "rectangle":
            out["lower"] = list(self.params[: self.dim])
            out["upper"] = list(self.params[self.dim :])
        elif self.kind == "annulus":
            out["r"], out["R"] = self.params
        return out


_L_EDGES = (
    ((-1.0, -1.0), (0.0, -1.0)),
    ((0.0, -1.0), (0.0, 0.0)),
    ((0.0, 0.0), (1.0, 0.0)),
    ((1.0, 0.0), (1.0, 1.0)),
    ((1.0, 1.0), (-1.0, 1.0)),
    ((-1.0, 1.0), (-1.0, -1.0)),
)


def _l_shape_depth(X: Array) -> Array:
    x, y = X[..., 0], X[..., 1]
    inside = (np.abs(x) < 1) & (np.abs(y) < 1) & ~((x >= 0) & (y <= 0))
    d = np.min(np.stack([_segment_distance(X, a, b) for a, b in _L_EDGES]), axis=0)
    return np.where(inside, d, -d)


# -- weights ----------------------------------------------------------------


@dataclass(frozen=True)
class Weight:
    """A positive continuous function on a domain.

    ``kind`` is one of ``constant``, ``dist``, ``dist_power``,
    ``reciprocal_dist``, ``majorant`` (``phi(d)/d``) or ``user``.
    """

    domain: Domain
    kind: str
    value: float = 1.0  # constant value, or exponent for dist_power
    fn: Callable[[Array], Array] | None = field(default=None, compare=False, repr=False)

    @classmethod
    def constant(cls, domain, c: float = 1.0) -> "Weight":
        if not c > 0:
            raise InvalidInputError("constant weight must be positive")
        return cls(domain, "constant", float(c))

    @classmethod
    def one(cls, domain) -> "Weight":
        return cls.constant(domain, 1.0)

    @classmethod
    def dist(cls, domain) -> "Weight":
        return cls(domain, "dist")

    @classmethod
    def dist_power(cls, domain, exponent: float) -> "Weight":
        """``d(x)**exponent``; ``exponent = alpha - 1`` gives the Hölder weight."""
        return cls(domain, "dist_power", float(exponent))

    @classmethod
    def reciprocal_dist(cls, domain) -> "Weight":
        """``1/d``: the weight of the quasi-hyperbolic distance."""
        return cls(domain, "reciprocal_dist")

    @classmethod
    def from_majorant(cls, domain, phi) -> "Weight":
        """``phi(d)/d``, the weight of the Lip_phi extension condition."""

        def fn(X):
            d = domain.depth(X)
            return np.asarray(phi.eval(d), dtype=float) / d

        if phi.kind == "power":
            return cls.dist_power(domain, phi.alpha - 1.0)
        return cls(domain, "majorant", 1.0, fn)

    @classmethod
    def user(cls, domain, fn) -> "Weight":
        return cls(domain, "user", 1.0, fn)

    @property
    def is_constant(self) -> bool:
        return self.kind == "constant"

    def values(self, X, d=None) -> Array:
        """Evaluate without the domain check. ``d`` may pass precomputed depths."""
        X = np.asarray(X, dtype=float)
        k = self.kind
        if k == "constant":
            return np.full(X.shape[:-1], self.value)
        if d is None and k in ("dist", "dist_power", "reciprocal_dist"):
            d = self.domain.depth(X)
        if k == "dist":
            return d
        if k == "dist_power":
            return np.power(d, self.value)
        if k == "reciprocal_dist":
            return 1.0 / d
        return np.asarray(self.fn(X), dtype=float)

    def __call__(self, X):
        self.domain.boundary_distance(X)
        return self.values(X)

    def describe(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "constant":
            out["c"] = self.value
        elif self.kind == "dist_power":
            out["exponent"] = self.value
        return out
