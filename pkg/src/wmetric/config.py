"""Parsing of the ``verify`` config file and of the short descriptor strings it uses.

The file is INI style. ``[DEFAULT]`` holds shared keys and every
``[instance:NAME]`` section is one verification instance::

    [DEFAULT]
    seed = 7
    samples = 2000
    h = 0.01
    tol = 0.02

    [instance:sqrt]
    domain = unit_disk
    weight = dist_power -0.5
    majorant = power 0.5
    mapping = power_alpha 0.5
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import mappings
from .domains import Domain, Weight
from .errors import ConfigError, WMetricError
from .majorant import Majorant

MAX_DIM = 4
KNOWN_CHECKS = ("forward", "converse", "ball", "image", "q_profile")
INSTANCE_KEYS = {
    "domain",
    "weight",
    "majorant",
    "mapping",
    "samples",
    "seed",
    "h",
    "tol",
    "checks",
    "geodesic_pairs",
    "a",
    "ro_weight",
    "curve",
}


def _numbers(parts, what, count=None):
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise ConfigError(f"{what}: expected numbers, got {' '.join(parts)!r}") from None
    if count is not None and len(vals) not in (count if isinstance(count, tuple) else (count,)):
        raise ConfigError(f"{what}: expected {count} numbers, got {len(vals)}")
    return vals


def parse_domain(text: str) -> Domain:
    """``unit_disk``, ``unit_ball N``, ``half_plane [N]``, ``space [N]``,
    ``rectangle x0 .. xn y0 .. yn``, ``l_shape`` or ``annulus r R [N]``."""
    kind, *rest = text.split()
    try:
        if kind == "unit_disk":
            _numbers(rest, "unit_disk", 0)
            dom = Domain.unit_disk()
        elif kind == "unit_ball":
            dom = Domain.unit_ball(int(_numbers(rest, "unit_ball", 1)[0]))
        elif kind == "half_plane":
            dom = Domain.half_plane(int(_numbers(rest, "half_plane", (0, 1))[0]) if rest else 2)
        elif kind == "space":
            dom = Domain.space(int(_numbers(rest, "space", (0, 1))[0]) if rest else 2)
        elif kind == "rectangle":
            v = _numbers(rest, "rectangle")
            if len(v) < 2 or len(v) % 2:
                raise ConfigError("rectangle: give the lower corner then the upper corner")
            dom = Domain.rectangle(v[: len(v) // 2], v[len(v) // 2 :])
        elif kind == "l_shape":
            _numbers(rest, "l_shape", 0)
            dom = Domain.l_shape()
        elif kind == "annulus":
            v = _numbers(rest, "annulus", (2, 3))
            dom = Domain.annulus(v[0], v[1], int(v[2]) if len(v) == 3 else 2)
        else:
            raise ConfigError(f"unknown domain kind {kind!r}")
    except WMetricError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"domain: {exc}") from None
    if not 1 <= dom.dim <= MAX_DIM:
        raise ConfigError(f"domain dimension must be between 1 and {MAX_DIM}, got {dom.dim}")
    return dom


def parse_majorant(text: str) -> Majorant:
    """``power ALPHA``."""
    kind, *rest = text.split()
    if kind != "power":
        raise ConfigError(f"unknown majorant kind {kind!r} (only 'power ALPHA' is configurable)")
    try:
        return Majorant.power(_numbers(rest, "majorant", 1)[0])
    except WMetricError as exc:
        raise ConfigError(f"majorant: {exc}") from None


def parse_weight(text: str, domain: Domain, phi: Majorant | None = None) -> Weight:
    """``one``, ``constant C``, ``dist``, ``dist_power E``, ``reciprocal_dist`` or ``majorant``."""
    kind, *rest = text.split()
    try:
        if kind == "one":
            return Weight.one(domain)
        if kind == "constant":
            return Weight.constant(domain, _numbers(rest, "constant", 1)[0])
        if kind == "dist":
            return Weight.dist(domain)
        if kind == "dist_power":
            return Weight.dist_power(domain, _numbers(rest, "dist_power", 1)[0])
        if kind == "reciprocal_dist":
            return Weight.reciprocal_dist(domain)
        if kind == "majorant":
            if phi is None:
                raise ConfigError("weight 'majorant' needs a majorant")
            return Weight.from_majorant(domain, phi)
    except WMetricError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"weight: {exc}") from None
    raise ConfigError(f"unknown weight kind {kind!r}")


def parse_mapping(text: str, domain: Domain) -> mappings.Mapping:
    """``power_alpha A``, ``monomial K``, ``log_branch``, ``identity``,
    ``constant v1 .. vm``, ``affine a11 .. amn b1 .. bm`` (square ``A``) or
    ``user NAME [numbers]`` for a registered mapping."""
    kind, *rest = text.split()
    try:
        if kind == "power_alpha":
            return mappings.power_alpha(_numbers(rest, "power_alpha", 1)[0], domain)
        if kind == "monomial":
            k = _numbers(rest, "monomial", 1)[0]
            if k != int(k):
                raise ConfigError("monomial degree must be an integer")
            return mappings.monomial(int(k), domain)
        if kind == "log_branch":
            return mappings.log_branch(domain)
        if kind == "identity":
            return mappings.identity(domain)
        if kind == "constant":
            return mappings.constant(domain, _numbers(rest, "constant") or [0.0, 0.0])
        if kind == "affine":
            n = domain.dim
            v = _numbers(rest, "affine", n * n + n)
            return mappings.affine(np.reshape(v[: n * n], (n, n)), v[n * n :], domain)
        if kind == "user":
            if not rest:
                raise ConfigError("user mapping needs a registered name")
            return mappings.registered(rest[0])(domain, *_numbers(rest[1:], "user"))
    except WMetricError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"mapping: {exc}") from None
    raise ConfigError(f"unknown mapping kind {kind!r}")


@dataclass
class Instance:
    name: str
    domain: Domain
    weight: Weight
    majorant: Majorant
    mapping: mappings.Mapping
    samples: int
    seed: int
    h: float | None
    tol: float
    checks: tuple
    geodesic_pairs: int
    A: float
    ro_weight: Weight
    curve: list | None = None
    raw: dict = field(default_factory=dict)


def _get(section, key, conv, default=None):
    if key not in section or section[key].strip() == "":
        if default is None:
            raise ConfigError(f"[{section.name}] missing key {key!r}")
        return default
    try:
        return conv(section[key])
    except (ValueError, TypeError):
        raise ConfigError(f"[{section.name}] bad value for {key!r}: {section[key]!r}") from None


def _instance(section) -> Instance:
    unknown = set(section.keys()) - INSTANCE_KEYS
    if unknown:
        raise ConfigError(f"[{section.name}] unknown keys: {', '.join(sorted(unknown))}")
    domain = parse_domain(_get(section, "domain", str))
    if domain.bounds is None:
        raise ConfigError(f"[{section.name}] verify samples points, so the domain must be bounded")
    phi = parse_majorant(_get(section, "majorant", str))
    weight = parse_weight(_get(section, "weight", str), domain, phi)
    mapping = parse_mapping(_get(section, "mapping", str), domain)
    samples = _get(section, "samples", int, 2000)
    seed = _get(section, "seed", int, 0)
    h = _get(section, "h", float, -1.0)
    tol = _get(section, "tol", float, 0.02)
    gp = _get(section, "geodesic_pairs", int, 50)
    if samples < 2 or gp < 1 or not 0 <= tol < 1:
        raise ConfigError(f"[{section.name}] need samples >= 2, geodesic_pairs >= 1 and 0 <= tol < 1")
    default_checks = ("forward", "converse", "image")
    checks = tuple(c.strip() for c in _get(section, "checks", str, ",".join(default_checks)).split(",") if c.strip())
    bad = [c for c in checks if c not in KNOWN_CHECKS]
    if bad:
        raise ConfigError(f"[{section.name}] unknown checks: {', '.join(bad)}")
    default_A = 2.0 / phi.alpha if phi.kind == "power" else 0.0
    A = _get(section, "a", float, default_A)
    if not A > 0:
        raise ConfigError(f"[{section.name}] A must be positive")
    ro_weight = parse_weight(_get(section, "ro_weight", str, "dist"), domain, phi)
    curve = None
    if "curve" in section:
        v = _numbers(section["curve"].replace(";", " ").split(), "curve")
        if len(v) < 2 * domain.dim or len(v) % domain.dim:
            raise ConfigError(f"[{section.name}] curve needs at least two vertices of dimension {domain.dim}")
        curve = np.reshape(v, (-1, domain.dim)).tolist()
    return Instance(
        section.name.split(":", 1)[1],
        domain,
        weight,
        phi,
        mapping,
        samples,
        seed,
        h if h > 0 else None,
        tol,
        checks,
        gp,
        A,
        ro_weight,
        curve,
        {k: section[k] for k in sorted(section.keys())},
    )


def load_config(path_or_text) -> list[Instance]:
    """Parse a config file (path or literal text) into instances, in file order."""
    parser = configparser.ConfigParser(interpolation=None)
    try:
        if isinstance(path_or_text, Path) or ("\n" not in str(path_or_text) and Path(path_or_text).exists()):
            text = Path(path_or_text).read_text()
        else:
            text = str(path_or_text)
        parser.read_string(text)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    names = [s for s in parser.sections() if s.startswith("instance:")]
    other = [s for s in parser.sections() if not s.startswith("instance:")]
    if other:
        raise ConfigError(f"unexpected sections: {', '.join(other)}")
    if not names:
        raise ConfigError("config defines no [instance:NAME] sections")
    return [_instance(parser[s]) for s in names]
