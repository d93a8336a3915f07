"""Upper bounds on weighted distances by grid search plus curve smoothing.

``d_w(x, y)`` is the infimum of ``int_gamma w`` over curves joining x and y.
Any admissible curve gives an upper bound; this module finds a good one:

1. shortest path on the lattice ``h * Z^n`` (king moves, edge cost = the
   line integral of ``w`` along the edge), restricted to points at depth
   greater than ``h/2``;
2. shortcutting: replace sub-paths by straight chords that stay inside the
   domain and cost no more;
3. coarse-to-fine smoothing: sweeps of local vertex moves, each vertex
   confined to a cell the size of the current edges; edges are then halved
   and the cells shrink with them, down to spacing ``h``.

The reported value is the integral along the final polyline, so it is an
upper bound on ``d_w`` regardless of how well the search went.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import dijkstra

from .curves import (
    DEFAULT_TOL,
    Curve,
    curve_integral,
    segment_integrals,
    segment_integrals_fixed,
    segments_inside,
)
from .sampling import ball_directions
from .errors import InvalidInputError, PreconditionError, ResolutionError, WMetricError

logger = logging.getLogger(__name__)

GRAPH_TOL = 1e-6
SMOOTHING_SWEEPS = 3
MAX_VERTICES = 128
WINDOW = 1.0


@dataclass
class GeodesicResult:
    value: float
    curve: Curve
    resolution: float
    refined: bool
    grid_value: float = float("nan")

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "grid_value": self.grid_value,
            "resolution": self.resolution,
            "refined": self.refined,
            "endpoints": [self.curve.vertices[0].tolist(), self.curve.vertices[-1].tolist()],
            "vertices": len(self.curve),
        }


def _king_offsets(dim: int) -> np.ndarray:
    """Half of the 3**n - 1 king moves (one of each +/- pair)."""
    offs = [o for o in itertools.product((-1, 0, 1), repeat=dim) if any(o)]
    offs = [o for o in offs if o[next(i for i, c in enumerate(o) if c)] > 0]
    return np.array(offs, dtype=np.int64)


class GridGraph:
    """Lattice graph of spacing ``h`` over a box, with weighted edge costs.

    Build once and reuse it for many queries on the same weight; the
    extension-condition check does exactly that.
    """

    def __init__(self, weight, h: float, lower, upper, tol: float = GRAPH_TOL):
        self.weight = weight
        self.domain = weight.domain
        self.h = h = float(h)
        self.tol = tol
        dim = self.domain.dim
        k_lo = np.ceil(np.asarray(lower, dtype=float) / h).astype(np.int64)
        k_hi = np.floor(np.asarray(upper, dtype=float) / h).astype(np.int64)
        self.k_lo = k_lo
        self.shape = tuple(int(v) for v in np.maximum(k_hi - k_lo + 1, 0))
        n_lattice = int(np.prod(self.shape)) if self.shape else 0
        if n_lattice == 0:
            raise ResolutionError("empty grid window")
        if n_lattice > 20_000_000:
            raise ResolutionError(f"grid of {n_lattice} points is too large; raise h or shrink the window")

        idx = np.indices(self.shape).reshape(dim, -1).T
        coords = (idx + k_lo) * h
        depth = self.domain.depth(coords)
        keep = depth > 0.5 * h
        self.node_of = np.full(n_lattice, -1, dtype=np.int64)
        self.node_of[np.flatnonzero(keep)] = np.arange(int(keep.sum()))
        self.coords = coords[keep]
        self.n_nodes = self.coords.shape[0]

        rows, cols, costs = [], [], []
        lattice_idx = idx[keep]
        shape = np.array(self.shape)
        for off in _king_offsets(dim):
            nb = lattice_idx + off
            valid = np.all((nb >= 0) & (nb < shape), axis=1)
            src = np.flatnonzero(valid)
            dst = self.node_of[np.ravel_multi_index(nb[valid].T, self.shape)]
            present = dst >= 0
            src, dst = src[present], dst[present]
            if src.size == 0:
                continue
            inside = segments_inside(self.domain, self.coords[src], self.coords[dst])
            src, dst = src[inside], dst[inside]
            c = segment_integrals(weight, self.coords[src], self.coords[dst], tol, strict=False)
            rows.append(src)
            cols.append(dst)
            costs.append(c)
        self.rows = np.concatenate(rows) if rows else np.zeros(0, np.int64)
        self.cols = np.concatenate(cols) if cols else np.zeros(0, np.int64)
        self.costs = np.concatenate(costs) if costs else np.zeros(0)

    @classmethod
    def for_domain(cls, weight, h, tol=GRAPH_TOL):
        b = weight.domain.bounds
        if b is None:
            raise InvalidInputError("unbounded domain: give an explicit window")
        return cls(weight, h, b[0], b[1], tol)

    def covers(self, x) -> bool:
        k = np.asarray(x) / self.h - self.k_lo
        return bool(np.all(k >= 1) and np.all(k <= np.array(self.shape) - 2))

    def _attach(self, x):
        """Edges (node ids, costs) from an off-grid point to nearby nodes."""
        dim = self.domain.dim
        base = np.floor(np.asarray(x) / self.h).astype(np.int64) - self.k_lo
        cand = base + np.array(list(itertools.product((-1, 0, 1, 2), repeat=dim)))
        ok = np.all((cand >= 0) & (cand < np.array(self.shape)), axis=1)
        cand = cand[ok]
        nodes = self.node_of[np.ravel_multi_index(cand.T, self.shape)]
        nodes = nodes[nodes >= 0]
        if nodes.size == 0:
            return nodes, np.zeros(0)
        X = np.broadcast_to(np.asarray(x, dtype=float), (nodes.size, dim))
        inside = segments_inside(self.domain, X, self.coords[nodes])
        nodes = nodes[inside]
        costs = segment_integrals(self.weight, X[inside], self.coords[nodes], self.tol, strict=False)
        return nodes, costs

    def shortest_path(self, x, y):
        """Polyline x -> grid -> y minimising the summed edge costs."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        N = self.n_nodes
        nx_, cx = self._attach(x)
        ny_, cy = self._attach(y)
        if nx_.size == 0 or ny_.size == 0:
            raise ResolutionError("an endpoint has no admissible grid neighbour at this resolution")
        # zero costs would read as missing edges in the sparse matrix
        tiny = np.finfo(float).tiny
        rows = np.concatenate([self.rows, np.full(nx_.size, N), np.full(ny_.size, N + 1)])
        cols = np.concatenate([self.cols, nx_, ny_])
        data = np.concatenate([self.costs, np.maximum(cx, tiny), np.maximum(cy, tiny)])
        if segments_inside(self.domain, x[None], y[None])[0] and np.linalg.norm(x - y) < 2 * self.h:
            rows = np.append(rows, N)
            cols = np.append(cols, N + 1)
            data = np.append(data, max(float(segment_integrals(self.weight, x[None], y[None], self.tol)[0]), tiny))
        G = sparse.csr_matrix((data, (rows, cols)), shape=(N + 2, N + 2))
        dist, pred = dijkstra(G, directed=False, indices=N, return_predecessors=True)
        if not np.isfinite(dist[N + 1]):
            raise ResolutionError(f"no grid path at h={self.h}")
        path = [N + 1]
        while path[-1] != N:
            path.append(int(pred[path[-1]]))
        path.reverse()
        pts = np.vstack([x, self.coords[path[1:-1]], y]) if len(path) > 2 else np.vstack([x, y])
        return pts, float(dist[N + 1])


# -- curve improvement ------------------------------------------------------


def _edge_costs(cost, P):
    return cost(P[:-1], P[1:])


def _shortcut(weight, cost, P):
    """Greedy chord replacement, bisecting on the vertex index."""
    domain = weight.domain
    cum = np.concatenate([[0.0], np.cumsum(_edge_costs(cost, P))])
    keep = {0, len(P) - 1}
    todo = [(0, len(P) - 1)]
    while todo:
        todo = [(i, j) for i, j in todo if j - i > 1]
        if not todo:
            break
        I = np.array([t[0] for t in todo])
        J = np.array([t[1] for t in todo])
        inside = segments_inside(domain, P[I], P[J])
        accept = np.zeros(len(todo), dtype=bool)
        if inside.any():
            c = cost(P[I[inside]], P[J[inside]])
            accept[inside] = c <= cum[J[inside]] - cum[I[inside]]
        nxt = []
        for (i, j), ok in zip(todo, accept):
            if not ok:
                m = (i + j) // 2
                keep.add(m)
                nxt += [(i, m), (m, j)]
        todo = nxt
    return P[sorted(keep)]


def _drop_vertices(weight, cost, P, passes=8):
    """Remove interior vertices whose neighbours see each other more cheaply."""
    domain = weight.domain
    for _ in range(passes):
        removed = False
        for parity in (1, 2):
            if len(P) < 3:
                return P
            costs = _edge_costs(cost, P)
            i = np.arange(parity, len(P) - 1, 2)
            if i.size == 0:
                continue
            inside = segments_inside(domain, P[i - 1], P[i + 1])
            drop = np.zeros(i.size, dtype=bool)
            if inside.any():
                c = cost(P[i[inside] - 1], P[i[inside] + 1])
                drop[inside] = c <= costs[i[inside] - 1] + costs[i[inside]]
            if drop.any():
                P = np.delete(P, i[drop], axis=0)
                removed = True
        if not removed:
            break
    return P


def _split_long(P, limit):
    """Insert the midpoint of every edge longer than ``limit``."""
    L = np.linalg.norm(np.diff(P, axis=0), axis=1)
    long_ = np.flatnonzero(L > limit)
    if long_.size == 0:
        return P
    mids = 0.5 * (P[long_] + P[long_ + 1])
    return np.insert(P, long_ + 1, mids, axis=0)


def _smooth(weight, cost, P, cell, sweeps):
    """Red-black pattern search; a sweep keeps each vertex in the cell of side
    ``cell`` centred where the sweep found it."""
    domain = weight.domain
    dim = P.shape[1]
    if len(P) < 3 or sweeps <= 0:
        return P
    P = P.copy()
    dirs = np.array([o for o in itertools.product((-1, 0, 1), repeat=dim) if any(o)], dtype=float)
    steps = cell / 4 * 0.5 ** np.arange(4)
    for _ in range(sweeps):
        centre = P.copy()
        for parity in (1, 2):
            idx = np.arange(parity, len(P) - 1, 2)
            if idx.size == 0:
                continue
            prev, nxt = P[idx - 1], P[idx + 1]
            cur = cost(prev, P[idx]) + cost(P[idx], nxt)
            for step in steps:
                cand = P[idx][:, None, :] + step * dirs[None, :, :]
                in_cell = np.all(np.abs(cand - centre[idx][:, None, :]) <= 0.5 * cell, axis=2)
                k, d = np.nonzero(in_cell)
                if k.size == 0:
                    continue
                C = cand[k, d]
                ok = segments_inside(domain, prev[k], C) & segments_inside(domain, C, nxt[k])
                k, C = k[ok], C[ok]
                if k.size == 0:
                    continue
                val = cost(prev[k], C) + cost(C, nxt[k])
                best = np.full(idx.size, np.inf)
                np.minimum.at(best, k, val)
                better = best < cur
                if not better.any():
                    continue
                for j in np.flatnonzero(better):
                    m = np.flatnonzero((k == j) & (val == best[j]))[0]
                    P[idx[j]] = C[m]
                cur = np.where(better, best, cur)
    return P


def improve_curve(weight, P, h, sweeps=SMOOTHING_SWEEPS, max_vertices=MAX_VERTICES):
    """Shortcut the grid path, then smooth it coarse to fine.

    At each level the vertices move within cells as large as the longest
    edge; then long edges are halved. Levels stop once edges are no longer
    than ``max(h, length / max_vertices)``.
    """
    P = np.asarray(P, dtype=float)
    if len(P) < 3:
        return P

    def cost(A, B):
        return segment_integrals_fixed(weight, A, B, 0.5 * h)

    P = _drop_vertices(weight, cost, _shortcut(weight, cost, P))
    if sweeps <= 0:
        return P
    total = float(np.linalg.norm(np.diff(P, axis=0), axis=1).sum())
    finest = max(h, total / max_vertices)
    cell = float(np.linalg.norm(np.diff(P, axis=0), axis=1).max())
    while True:
        P = _smooth(weight, cost, P, cell, sweeps)
        if cell <= finest:
            break
        cell *= 0.5
        P = _split_long(P, cell)
    return _drop_vertices(weight, cost, P)


# -- public operations -------------------------------------------------------


def default_resolution(domain, x, y) -> float:
    sep = float(np.linalg.norm(np.asarray(x, float) - np.asarray(y, float)))
    near = float(min(domain.boundary_distance(x), domain.boundary_distance(y)))
    h = min(0.01, sep / 20 if sep > 0 else 0.01)
    return min(h, 0.5 * near)


def _window(domain, x, y, h, window):
    sep = float(np.linalg.norm(x - y))
    pad = window * sep + 3 * h
    lo = np.minimum(x, y) - pad
    hi = np.maximum(x, y) + pad
    if domain.bounds is not None:
        lo = np.maximum(lo, domain.bounds[0])
        hi = np.minimum(hi, domain.bounds[1])
    return lo, hi


def weighted_distance_upper(
    weight,
    x,
    y,
    h: float | None = None,
    *,
    tol: float = DEFAULT_TOL,
    graph: GridGraph | None = None,
    window: float = WINDOW,
    sweeps: int = SMOOTHING_SWEEPS,
    initial: Curve | None = None,
) -> GeodesicResult:
    """Upper bound on the weighted distance between ``x`` and ``y``.

    Parameters
    ----------
    weight : Weight
    x, y : array_like
        Interior points of ``weight.domain``.
    h : float, optional
        Grid spacing; must be below both boundary distances. Defaults to
        ``min(0.01, |x - y|/20)`` (capped at half the smaller boundary distance).
    tol : float
        Relative tolerance of the final curve integral.
    graph : GridGraph, optional
        A prebuilt graph for ``weight`` at spacing ``h``; reused across calls.
    window : float
        Without ``graph``, the search box is the pair's bounding box padded by
        ``window * |x - y|``.
    sweeps : int
        Smoothing sweeps; 0 keeps the shortcut grid path.
    initial : Curve, optional
        An extra candidate curve (e.g. the result at a coarser h). The result
        is never worse than it.
    """
    domain = weight.domain
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    dx = domain.boundary_distance(x)
    dy = domain.boundary_distance(y)
    if h is None:
        h = graph.h if graph is not None else default_resolution(domain, x, y)
    h = float(h)
    if not h > 0:
        raise InvalidInputError("h must be positive")
    if not h < min(dx, dy):
        raise PreconditionError(f"h={h} is not below the endpoint boundary distances ({dx}, {dy})")

    if np.array_equal(x, y):
        return GeodesicResult(0.0, Curve([x, y]), h, False, 0.0)

    # solve in a canonical orientation so that d(x, y) and d(y, x) agree exactly
    flip = tuple(y) < tuple(x)
    if flip:
        x, y = y, x
    if graph is None or graph.h != h or not (graph.covers(x) and graph.covers(y)):
        lo, hi = _window(domain, x, y, h, window)
        graph = GridGraph(weight, h, lo, hi)
    P, grid_cost = graph.shortest_path(x, y)

    candidates = [P, improve_curve(weight, P, h, sweeps)]
    if initial is not None:
        iv = initial.vertices[::-1] if flip else initial.vertices
        if not (np.allclose(iv[0], x) and np.allclose(iv[-1], y)):
            raise InvalidInputError("initial curve must join x and y")
        iv = np.vstack([x, iv[1:-1], y])
        candidates += [iv, improve_curve(weight, iv, h, sweeps)]

    values = []
    for i, c in enumerate(candidates):
        v = np.inf
        if segments_inside(domain, c[:-1], c[1:]).all():
            try:
                v = curve_integral(weight, Curve(c), tol)
            except WMetricError as exc:
                logger.debug("candidate %d rejected: %s", i, exc)
        values.append(v)
    i = int(np.argmin(values))
    if not np.isfinite(values[i]):
        raise ResolutionError("no admissible curve could be integrated")
    best = candidates[i][::-1] if flip else candidates[i]
    return GeodesicResult(float(values[i]), Curve(best), h, values[i] < values[0], float(grid_cost))


def refine_sequence(weight, x, y, resolutions, **kwargs) -> list[GeodesicResult]:
    """Run :func:`weighted_distance_upper` over ``resolutions`` (coarse to fine).

    Each run receives the previous curve as ``initial``, so the values are
    nonincreasing by construction.
    """
    out = []
    prev = None
    for h in resolutions:
        res = weighted_distance_upper(weight, x, y, h, initial=prev, **kwargs)
        out.append(res)
        prev = res.curve
    return out


@dataclass
class ConditionReport:
    M_observed: float
    worst_pair: tuple | None
    pairs_tested: int
    ratios: list[float]
    skipped: list[int] = field(default_factory=list)
    errors: dict[int, str] = field(default_factory=dict)
    values: list[float] = field(default_factory=list)
    diverging: bool = False
    resolution: float | None = None
    tested: list[int] = field(default_factory=list)

    @property
    def summary(self) -> str:
        if self.diverging:
            return f"ratios grow monotonically over the {self.pairs_tested} ordered pairs; condition fails"
        return f"no violation of M <= {self.M_observed:.6g} found on {self.pairs_tested} pairs"

    def to_dict(self) -> dict:
        return {
            "M_observed": self.M_observed,
            "worst_pair": [list(map(float, p)) for p in self.worst_pair] if self.worst_pair else None,
            "pairs_tested": self.pairs_tested,
            "ratios": self.ratios,
            "values": self.values,
            "skipped": self.skipped,
            "errors": {str(k): v for k, v in self.errors.items()},
            "diverging": self.diverging,
            "resolution": self.resolution,
            "tested": self.tested,
            "summary": self.summary,
        }


def check_extension_condition(weight, phi, pairs, h: float | None = None, **kwargs) -> ConditionReport:
    """Sample the integral condition ``int_gamma w <= M phi(|x - y|)``.

    For each pair the numerator is :func:`weighted_distance_upper`, an upper
    bound on the infimum, so ``M_observed`` bounds the best constant from
    above on the sampled pairs. Coincident pairs are skipped; per-pair
    resolution failures are recorded in ``errors``.

    ``diverging`` is set when, with pairs given in order (e.g. approaching
    the boundary), the ratios increase strictly and the last exceeds twice
    the first.
    """
    pairs = [(np.asarray(a, dtype=float), np.asarray(b, dtype=float)) for a, b in pairs]
    domain = weight.domain
    graph = None
    if h is None:
        seps = [np.linalg.norm(a - b) for a, b in pairs if not np.array_equal(a, b)]
        h = min(0.01, min(seps) / 20) if seps else 0.01
    if domain.bounds is not None and "window" not in kwargs:
        graph = GridGraph.for_domain(weight, h)

    ratios, values, tested, skipped, errors = [], [], [], [], {}
    for i, (a, b) in enumerate(pairs):
        if np.array_equal(a, b):
            skipped.append(i)
            continue
        try:
            res = weighted_distance_upper(weight, a, b, h, graph=graph, **kwargs)
        except (ResolutionError, PreconditionError) as exc:
            errors[i] = str(exc)
            continue
        ratio = res.value / float(phi.eval(np.linalg.norm(a - b)))
        ratios.append(float(ratio))
        values.append(res.value)
        tested.append(i)
    if ratios:
        k = int(np.argmax(ratios))
        worst = pairs[tested[k]]
        M = ratios[k]
    else:
        worst, M = None, float("nan")
    r = np.asarray(ratios)
    diverging = bool(r.size >= 3 and np.all(np.diff(r) > 0) and r[-1] > 2 * r[0])
    return ConditionReport(
        float(M),
        (worst[0].tolist(), worst[1].tolist()) if worst is not None else None,
        len(ratios),
        ratios,
        skipped,
        errors,
        values,
        diverging,
        h,
        tested,
    )


def topology_equivalence_ratio(weight, x, radii, samples_per_radius: int = 8, **kwargs) -> list[dict]:
    """Ratios ``d_w(x, y) / |x - y|`` over spheres of decreasing radius about x.

    Each row also carries the bracket ``[w(x) - osc, w(x) + osc]`` where ``osc``
    is the sampled oscillation of ``w`` on the ball; balls inside the domain
    are convex, so straight segments are admissible and the length constant is 1.
    """
    domain = weight.domain
    x = np.asarray(x, dtype=float)
    radii = [float(r) for r in radii]
    if any(r <= 0 for r in radii) or any(b >= a for a, b in zip(radii, radii[1:])):
        raise InvalidInputError("radii must be positive and strictly decreasing")
    dx = domain.boundary_distance(x)
    if radii[0] >= dx:
        raise PreconditionError(f"sphere of radius {radii[0]} leaves the domain (boundary distance {dx})")
    wx = float(weight.values(x[None])[0])
    dirs = ball_directions(domain.dim, samples_per_radius)
    rows = []
    for r in radii:
        ys = x + r * dirs
        ratios = [weighted_distance_upper(weight, x, y, **kwargs).value / r for y in ys]
        shells = np.concatenate([x + s * r * dirs for s in (0.25, 0.5, 0.75, 1.0)])
        osc = float(np.max(np.abs(weight.values(shells) - wx)))
        rows.append(
            {
                "r": r,
                "min_ratio": float(min(ratios)),
                "max_ratio": float(max(ratios)),
                "lower_bracket": wx - osc,
                "upper_bracket": wx + osc,
                "weight_at_x": wx,
            }
        )
    return rows
