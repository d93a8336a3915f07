"""Concrete mappings with optional closed-form derivative norms.

Complex maps act on real 2-vectors ``(Re z, Im z)``. On a ball of dimension
3 or more they act on ``z = x_1 + i x_2`` and ignore the other coordinates,
which is the restriction of ``(z_1, z_2, ...) -> g(z_1)`` to a real slice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .domains import Domain
from .errors import InvalidInputError

Array = np.ndarray

_REGISTRY: dict[str, Callable[..., "Mapping"]] = {}


def _as_complex(X: Array) -> Array:
    return X[..., 0] + 1j * X[..., 1]


def _as_real(Z: Array) -> Array:
    return np.stack([Z.real, Z.imag], axis=-1)


@dataclass(frozen=True)
class Mapping:
    """An evaluable map ``f`` from ``source`` into R^m.

    Parameters
    ----------
    source : Domain
    evaluate : callable
        Maps ``(..., n)`` arrays to ``(..., m)`` arrays.
    target_dim : int
    kind : str
    params : tuple
        Numeric parameters echoed in reports.
    derivative_norm : callable, optional
        Operator norm of the differential, ``(..., n) -> (...)``.
    bounded_analytic : bool
        Bounded and holomorphic on the source; such maps oscillate regularly
        with constant 1 by the Schwarz lemma.
    """

    source: Domain
    evaluate: Callable[[Array], Array] = field(compare=False, repr=False)
    target_dim: int = 2
    kind: str = "user"
    params: tuple = ()
    derivative_norm: Callable[[Array], Array] | None = field(default=None, compare=False, repr=False)
    bounded_analytic: bool = False

    def __call__(self, X) -> Array:
        return self.evaluate(np.asarray(X, dtype=float))

    @property
    def has_oracle(self) -> bool:
        return self.derivative_norm is not None

    def oracle(self, X) -> Array:
        if self.derivative_norm is None:
            raise InvalidInputError(f"mapping {self.kind!r} has no derivative oracle")
        return np.asarray(self.derivative_norm(np.asarray(X, dtype=float)), dtype=float)

    def scaled(self, c: float) -> "Mapping":
        """``c * f``; the derivative norm scales by ``|c|``."""
        c = float(c)
        ev = self.evaluate
        dn = self.derivative_norm
        return Mapping(
            self.source,
            lambda X: c * ev(X),
            self.target_dim,
            self.kind,
            self.params + (("scale", c),),
            None if dn is None else (lambda X: abs(c) * dn(X)),
            self.bounded_analytic,
        )

    def describe(self) -> dict:
        return {"kind": self.kind, "params": [list(p) if isinstance(p, tuple) else p for p in self.params]}


def _complex_map(source, kind, params, g, dg_abs, bounded):
    if source.dim < 2:
        raise InvalidInputError("complex mappings need a source of dimension >= 2")

    def ev(X):
        return _as_real(g(_as_complex(X)))

    def dn(X):
        return dg_abs(_as_complex(X))

    return Mapping(source, ev, 2, kind, params, dn, bounded)


def power_alpha(alpha: float, source: Domain | None = None) -> Mapping:
    """``z -> (1 - z)**alpha`` on the principal branch; the cut ``[1, inf)`` misses the disk."""
    alpha = float(alpha)
    if not 0 < alpha <= 1:
        raise InvalidInputError("power_alpha needs alpha in (0, 1]")
    source = source or Domain.unit_disk()
    return _complex_map(
        source,
        "power_alpha",
        (alpha,),
        lambda z: np.power(1 - z, alpha),
        lambda z: alpha * np.abs(1 - z) ** (alpha - 1),
        source.kind in ("unit_disk", "unit_ball"),
    )


def monomial(k: int, source: Domain | None = None) -> Mapping:
    k = int(k)
    if k < 0:
        raise InvalidInputError("monomial degree must be >= 0")
    source = source or Domain.unit_disk()
    if k == 0:
        return constant(source, (1.0, 0.0))
    return _complex_map(
        source,
        "monomial",
        (k,),
        lambda z: z**k,
        lambda z: k * np.abs(z) ** (k - 1),
        source.kind in ("unit_disk", "unit_ball"),
    )


def log_branch(source: Domain | None = None) -> Mapping:
    """``z -> log(1 - z)``; unbounded near ``z = 1``."""
    source = source or Domain.unit_disk()
    return _complex_map(source, "log_branch", (), lambda z: np.log(1 - z), lambda z: 1 / np.abs(1 - z), False)


def affine(A, b, source: Domain | None = None) -> Mapping:
    """``x -> A x + b``; the derivative norm is the spectral norm of ``A``."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).ravel()
    m, n = A.shape
    if b.shape != (m,):
        raise InvalidInputError("affine: b must have one entry per row of A")
    source = source or Domain.space(n)
    if source.dim != n:
        raise InvalidInputError("affine: A does not match the source dimension")
    norm = float(np.linalg.norm(A, 2))

    def ev(X):
        return X @ A.T + b

    def dn(X):
        return np.full(np.shape(X)[:-1], norm)

    return Mapping(source, ev, m, "affine", tuple(A.ravel()) + tuple(b), dn, False)


def identity(source: Domain) -> Mapping:
    n = source.dim
    return Mapping(
        source,
        lambda X: np.array(X, dtype=float),
        n,
        "identity",
        (),
        lambda X: np.ones(np.shape(X)[:-1]),
        source.kind in ("unit_disk", "unit_ball"),
    )


def constant(source: Domain, value=(0.0, 0.0)) -> Mapping:
    v = np.asarray(value, dtype=float).ravel()
    return Mapping(
        source,
        lambda X: np.broadcast_to(v, np.shape(X)[:-1] + v.shape).copy(),
        v.size,
        "constant",
        tuple(v),
        lambda X: np.zeros(np.shape(X)[:-1]),
        True,
    )


def register_mapping(name: str, factory: Callable[..., Mapping]) -> None:
    """Make ``factory(source, *numbers)`` selectable as ``user <name>`` in configs."""
    _REGISTRY[name] = factory


def registered(name: str) -> Callable[..., Mapping]:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise InvalidInputError(f"no registered mapping named {name!r}") from None
