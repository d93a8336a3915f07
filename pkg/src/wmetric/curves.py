"""Polyline curves, their length, and weighted line integrals along them."""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

from .errors import ConvergenceError, DomainViolationError, InvalidInputError

DEFAULT_TOL = 1e-8
MAX_DEPTH = 24
# points evaluated per numpy batch when refining many segments at once
_CHUNK = 1 << 20


class Curve:
    """A finite polyline in R^n, stored as a ``(k, n)`` vertex array."""

    __slots__ = ("_v",)

    def __init__(self, vertices):
        v = np.array(vertices, dtype=float)
        if v.ndim == 1:
            v = v[None, :]
        if v.ndim != 2 or v.shape[0] < 1 or v.shape[1] < 1:
            raise InvalidInputError("a curve needs at least one vertex of dimension >= 1")
        if not np.all(np.isfinite(v)):
            raise InvalidInputError("curve vertices must be finite")
        v.setflags(write=False)
        self._v = v

    @classmethod
    def segment(cls, a, b) -> "Curve":
        return cls([a, b])

    @property
    def vertices(self) -> np.ndarray:
        return self._v

    @property
    def dim(self) -> int:
        return self._v.shape[1]

    def __len__(self):
        return self._v.shape[0]

    def __repr__(self):
        return f"Curve({len(self)} vertices, dim={self.dim})"

    @property
    def endpoints(self):
        return self._v[0], self._v[-1]

    @property
    def edge_lengths(self) -> np.ndarray:
        return np.linalg.norm(np.diff(self._v, axis=0), axis=1)

    def length(self) -> float:
        return curve_length(self)

    def reversed(self) -> "Curve":
        return Curve(self._v[::-1])

    def concat(self, other: "Curve") -> "Curve":
        """Join at a shared vertex (the last of ``self``, first of ``other``)."""
        if not np.array_equal(self._v[-1], other._v[0]):
            raise InvalidInputError("curves do not share the junction vertex")
        return Curve(np.vstack([self._v, other._v[1:]]))

    def refined(self, pieces: int) -> "Curve":
        """Split every edge into ``pieces`` equal parts."""
        pieces = int(pieces)
        if pieces < 1:
            raise InvalidInputError("pieces must be >= 1")
        if len(self) == 1 or pieces == 1:
            return self
        s = np.arange(pieces)[:, None] / pieces
        a, b = self._v[:-1], self._v[1:]
        pts = a[:, None, :] + s[None, :, :] * (b - a)[:, None, :]
        return Curve(np.vstack([pts.reshape(-1, self.dim), self._v[-1:]]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in self._v:
            writer.writerow([repr(float(c)) for c in row])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text_or_path) -> "Curve":
        if isinstance(text_or_path, Path) or (
            isinstance(text_or_path, str) and "\n" not in text_or_path and Path(text_or_path).exists()
        ):
            text = Path(text_or_path).read_text()
        else:
            text = text_or_path
        rows = [r for r in csv.reader(io.StringIO(text)) if r and not r[0].lstrip().startswith("#")]
        try:
            return cls([[float(c) for c in r] for r in rows])
        except ValueError as exc:
            raise InvalidInputError(f"bad curve CSV: {exc}") from None


def curve_length(curve: Curve) -> float:
    if len(curve) == 1:
        return 0.0
    return float(np.sum(curve.edge_lengths))


def _midpoint_sums(weight, A, B, L, level):
    """Midpoint Riemann sums with 2**level cells on each segment A[i] -> B[i]."""
    n = 1 << level
    E = A.shape[0]
    out = np.zeros(E)
    seg_chunk = max(1, _CHUNK // n)
    pt_chunk = min(n, _CHUNK)
    D = B - A
    for i0 in range(0, E, seg_chunk):
        a, d = A[i0 : i0 + seg_chunk], D[i0 : i0 + seg_chunk]
        acc = np.zeros(a.shape[0])
        for j0 in range(0, n, pt_chunk):
            s = (np.arange(j0, min(n, j0 + pt_chunk)) + 0.5) / n
            X = a[:, None, :] + s[None, :, None] * d[:, None, :]
            depth = weight.domain.depth(X)
            if np.any(~(depth > 0)):
                bad = X[~(depth > 0)][0]
                raise DomainViolationError(f"curve leaves the domain near {bad.tolist()}")
            acc += weight.values(X, depth).sum(axis=1)
        out[i0 : i0 + seg_chunk] = acc
    return out * L / n


def segment_integrals(weight, A, B, tol=DEFAULT_TOL, max_depth=MAX_DEPTH, strict=True):
    """Integrate ``weight`` over each straight segment ``A[i] -> B[i]``.

    Each segment is refined by halving until two successive midpoint sums
    agree to ``tol`` relatively. Unconverged segments raise
    :class:`ConvergenceError` when ``strict`` and otherwise keep the last sum.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    L = np.linalg.norm(B - A, axis=1)
    if weight.is_constant:
        return weight.value * L
    result = _midpoint_sums(weight, A, B, L, 0)
    before = result.copy()
    active = np.flatnonzero(L > 0)
    level = 0
    while active.size and level < max_depth:
        level += 1
        cur = _midpoint_sums(weight, A[active], B[active], L[active], level)
        done = np.abs(cur - result[active]) <= tol * np.abs(cur)
        before[active] = result[active]
        result[active] = cur
        active = active[~done]
    if active.size and strict:
        i = active[0]
        raise ConvergenceError(
            f"segment {i} did not converge after {max_depth} halvings", float(before[i]), float(result[i])
        )
    return result


_GL_X, _GL_W = np.polynomial.legendre.leggauss(4)


def segment_integrals_fixed(weight, A, B, panel: float, max_panels: int = 256) -> np.ndarray:
    """Composite 4-point Gauss-Legendre estimate of each segment integral.

    Panels are at most ``panel`` long (capped at ``max_panels`` per segment).
    Cheap and smooth in the endpoints, but without error control: use it to
    compare candidate curves, not to report values.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    L = np.linalg.norm(B - A, axis=1)
    if weight.is_constant:
        return weight.value * L
    k = np.clip(np.ceil(L / panel), 1, max_panels).astype(np.int64)
    seg = np.repeat(np.arange(A.shape[0]), k)
    start = np.cumsum(k) - k
    local = np.arange(seg.size) - start[seg]
    s = (local[:, None] + 0.5 * (_GL_X[None, :] + 1)) / k[seg][:, None]
    X = A[seg, None, :] + s[:, :, None] * (B - A)[seg, None, :]
    depth = weight.domain.depth(X)
    with np.errstate(invalid="ignore", divide="ignore"):
        vals = np.where(depth > 0, weight.values(X, depth), np.inf)
    return np.bincount(seg, vals @ _GL_W, minlength=A.shape[0]) * L / (2 * k)


def curve_integral(weight, curve: Curve, tol: float = DEFAULT_TOL, max_depth: int = MAX_DEPTH) -> float:
    """Line integral of ``weight`` along a polyline.

    Raises
    ------
    DomainViolationError
        A vertex, or a sample point of an edge, is outside the weight's domain.
    ConvergenceError
        Some edge needs more than ``max_depth`` halvings.
    """
    v = curve.vertices
    weight.domain.boundary_distance(v)
    if len(curve) == 1:
        return 0.0
    if weight.is_constant:
        # no quadrature points to check, so certify the edges directly
        if not segments_inside(weight.domain, v[:-1], v[1:]).all():
            raise DomainViolationError("curve leaves the domain")
        return weight.value * curve_length(curve)
    return float(np.sum(segment_integrals(weight, v[:-1], v[1:], tol, max_depth)))


def segments_inside(domain, A, B, max_level: int = 20) -> np.ndarray:
    """Certify that each closed segment ``A[i] -> B[i]`` lies in ``domain``.

    Uses that the boundary distance is 1-Lipschitz: if samples spaced ``s``
    apart all have depth ``> s/2`` the whole segment is inside. Segments that
    cannot be certified by ``max_level`` halvings count as outside.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    L = np.linalg.norm(B - A, axis=1)
    ok = np.zeros(A.shape[0], dtype=bool)
    ends = np.minimum(domain.depth(A), domain.depth(B))
    if domain.convex:
        return ends > 0
    active = np.flatnonzero(ends > 0)
    # short segments: endpoint depth alone certifies
    short = L[active] < 2 * ends[active]
    ok[active[short]] = True
    active = active[~short]
    n = 2
    level = 1
    while active.size and level <= max_level:
        s = np.linspace(0.0, 1.0, n + 1)
        X = A[active, None, :] + s[None, :, None] * (B - A)[active, None, :]
        depth = domain.depth(X).min(axis=1)
        outside = depth <= 0
        certified = ~outside & (depth > 0.5 * L[active] / n)
        ok[active[certified]] = True
        active = active[~outside & ~certified]
        n *= 2
        level += 1
    return ok
