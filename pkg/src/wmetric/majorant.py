"""Majorant functions and grid-based checks of their defining properties.

A majorant is a continuous function ``phi`` on ``[0, inf)`` with ``phi(0) = 0``,
positive and nondecreasing on ``(0, inf)``, with a nonincreasing derivative.
The standard family is ``phi_alpha(t) = t**alpha`` with ``alpha`` in ``(0, 1]``.

All checks here are grid based: they can refute a property, never prove it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Callable

import numpy as np

from .errors import DegenerateMajorantError, InvalidInputError

RTOL = 1e-9
SCALE_FACTORS = (1.5, 2.0, 10.0)
FD_STEP = 1e-6
FD_RTOL = 1e-4

PROPERTY_NAMES = {
    "1": "phi(0) = 0 and phi(t) > 0 for t > 0",
    "2": "phi nondecreasing",
    "3": "phi' nonincreasing",
    "a": "phi'(t) <= phi(t)/t",
    "b": "phi(t)/t nonincreasing",
    "c": "phi(ct) <= c phi(t), c > 1",
    "d": "phi(t + s) <= phi(t) + phi(s)",
    "derivative": "phi' agrees with central differences",
}


@dataclass(frozen=True)
class Majorant:
    """A majorant given by its values and its derivative.

    Both callables must accept numpy arrays. ``deriv`` is never evaluated at 0.
    """

    eval: Callable[[np.ndarray], np.ndarray]
    deriv: Callable[[np.ndarray], np.ndarray]
    kind: str = "user"
    alpha: float | None = None

    @classmethod
    def power(cls, alpha: float) -> "Majorant":
        alpha = float(alpha)
        if not 0.0 < alpha <= 1.0:
            raise InvalidInputError(f"power majorant needs alpha in (0, 1], got {alpha}")

        def phi(t):
            return np.power(np.asarray(t, dtype=float), alpha)

        def dphi(t):
            return alpha * np.power(np.asarray(t, dtype=float), alpha - 1.0)

        return cls(phi, dphi, kind="power", alpha=alpha)

    @classmethod
    def user(cls, phi, dphi) -> "Majorant":
        return cls(phi, dphi, kind="user")

    def __call__(self, t):
        return self.eval(t)

    def describe(self) -> dict:
        if self.kind == "power":
            return {"kind": "power", "alpha": self.alpha}
        return {"kind": self.kind}


@dataclass
class PropertyCheck:
    passed: bool
    worst_violation: float
    where: float | None = None


@dataclass
class AxiomReport:
    grid: list[float]
    checks: dict[str, PropertyCheck] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def failed(self) -> list[str]:
        return [k for k, c in self.checks.items() if not c.passed]

    def to_dict(self) -> dict:
        return {
            "grid": list(self.grid),
            "passed": self.passed,
            "checks": {
                k: {
                    "property": PROPERTY_NAMES[k],
                    "passed": c.passed,
                    "worst_violation": c.worst_violation,
                    "where": c.where,
                }
                for k, c in self.checks.items()
            },
        }


def _validate_grid(grid) -> np.ndarray:
    t = np.asarray(grid, dtype=float).ravel()
    if t.size == 0:
        raise InvalidInputError("grid must be nonempty")
    if not np.all(np.isfinite(t)) or np.any(t <= 0):
        raise InvalidInputError("grid entries must be finite and positive")
    if np.any(np.diff(t) <= 0):
        raise InvalidInputError("grid must be strictly increasing")
    return t


def _check_leq(lhs, rhs, where) -> PropertyCheck:
    """Check ``lhs <= rhs`` elementwise with relative slack RTOL.

    The violation is measured relative to ``max(|lhs|, |rhs|)``.
    """
    lhs = np.atleast_1d(np.asarray(lhs, dtype=float))
    rhs = np.atleast_1d(np.asarray(rhs, dtype=float))
    where = np.atleast_1d(np.asarray(where, dtype=float))
    if lhs.size == 0:
        return PropertyCheck(True, 0.0, None)
    scale = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), np.finfo(float).tiny)
    excess = (lhs - rhs) / scale
    excess = np.where(np.isnan(excess), np.inf, excess)
    i = int(np.argmax(excess))
    worst = max(float(excess[i]), 0.0)
    return PropertyCheck(worst <= RTOL, worst, float(where[i]) if worst > 0 else None)


def check_majorant_axioms(phi: Majorant, grid) -> AxiomReport:
    """Evaluate properties (1)-(3) and the derived (a)-(d) on ``grid``.

    Parameters
    ----------
    phi : Majorant
    grid : sequence of float
        Strictly increasing positive points.

    Returns
    -------
    AxiomReport
        One :class:`PropertyCheck` per property plus a consistency check of
        ``phi.deriv`` against central differences.
    """
    t = _validate_grid(grid)
    f = np.asarray(phi.eval(t), dtype=float)
    df = np.asarray(phi.deriv(t), dtype=float)
    report = AxiomReport(grid=t.tolist())

    f0 = float(phi.eval(np.array([0.0]))[0])
    pos_viol = np.where(f > 0, 0.0, 1.0 + np.abs(f))
    worst = max(abs(f0), float(pos_viol.max()))
    where = 0.0 if abs(f0) >= pos_viol.max() else float(t[int(np.argmax(pos_viol))])
    report.checks["1"] = PropertyCheck(worst == 0.0, worst, where if worst else None)

    report.checks["2"] = _check_leq(f[:-1], f[1:], t[:-1])
    report.checks["3"] = _check_leq(df[1:], df[:-1], t[1:])
    report.checks["a"] = _check_leq(df, f / t, t)
    ratio = f / t
    report.checks["b"] = _check_leq(ratio[1:], ratio[:-1], t[1:])

    cs = np.array(SCALE_FACTORS)
    ct = np.outer(cs, t)
    lhs = np.asarray(phi.eval(ct.ravel()), dtype=float).reshape(ct.shape)
    report.checks["c"] = _check_leq(lhs.ravel(), (cs[:, None] * f[None, :]).ravel(), np.tile(t, len(cs)))

    idx = np.array(list(combinations_with_replacement(range(t.size), 2)))
    ts, ss = t[idx[:, 0]], t[idx[:, 1]]
    lhs = np.asarray(phi.eval(ts + ss), dtype=float)
    report.checks["d"] = _check_leq(lhs, f[idx[:, 0]] + f[idx[:, 1]], ts)

    step = FD_STEP * t
    fd = (np.asarray(phi.eval(t + step)) - np.asarray(phi.eval(t - step))) / (2 * step)
    scale = np.maximum(np.abs(df), np.finfo(float).tiny)
    err = np.abs(fd - df) / scale
    i = int(np.argmax(err))
    report.checks["derivative"] = PropertyCheck(
        bool(err[i] <= FD_RTOL), float(err[i]), float(t[i]) if err[i] > FD_RTOL else None
    )
    return report


@dataclass
class ConditionAResult:
    holds: bool
    worst_ratio: float
    worst_t: float
    A: float

    def __bool__(self):
        return self.holds


def check_condition_A(phi: Majorant, A: float, grid) -> ConditionAResult:
    """Test ``phi(t)/t < A * phi'(t)`` strictly at every grid point.

    ``worst_ratio`` is ``max_t (phi(t)/t) / phi'(t)``; the condition holds
    exactly when it is below ``A``.
    """
    if not A > 0:
        raise InvalidInputError("A must be positive")
    t = np.asarray(grid, dtype=float).ravel()
    if t.size == 0 or np.any(t <= 0) or not np.all(np.isfinite(t)):
        raise InvalidInputError("grid entries must be finite and positive")
    df = np.asarray(phi.deriv(t), dtype=float)
    if np.any(~(df > 0)):
        bad = float(t[np.argmax(~(df > 0))])
        raise DegenerateMajorantError(f"phi'(t) <= 0 at t={bad}")
    if phi.kind == "power":
        # closed form; avoids rounding either side of 1/alpha
        ratio = np.full(t.shape, 1.0 / phi.alpha)
    else:
        ratio = np.asarray(phi.eval(t), dtype=float) / t / df
    i = int(np.argmax(ratio))
    holds = bool(np.all(ratio < A))
    return ConditionAResult(holds, float(ratio[i]), float(t[i]), float(A))
