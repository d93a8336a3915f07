"""Command line entry point: ``geodesic``, ``condition`` and ``verify``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .config import load_config, parse_domain, parse_majorant, parse_weight
from .curves import Curve, segments_inside
from .errors import ConfigError, WMetricError
from .geodesics import check_extension_condition, weighted_distance_upper
from .harness import (
    boundary_q_points,
    q_profile,
    to_jsonable,
    verify_converse_strong,
    verify_forward,
    verify_image_curve_lemma,
    verify_unit_ball_corollary,
)
from .sampling import pairs_in_domain, points_in_domain

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
SUMMARY_COLUMNS = ("instance", "theorem_id", "left", "right", "slack", "pass", "status")


def dumps(obj) -> str:
    """Deterministic JSON: fixed key order, shortest float repr, no NaN/inf."""
    return json.dumps(to_jsonable(obj), indent=2, allow_nan=False) + "\n"


def _weight_from_args(args):
    domain = parse_domain(args.domain)
    phi = parse_majorant(args.majorant) if args.majorant else None
    return parse_weight(args.weight, domain, phi), phi


def _point(values, dim, name):
    if len(values) != dim:
        raise ConfigError(f"--{name} needs {dim} coordinates")
    return np.asarray(values, dtype=float)


def cmd_geodesic(args) -> int:
    weight, _ = _weight_from_args(args)
    dim = weight.domain.dim
    x = _point(args.x, dim, "x")
    y = _point(args.y, dim, "y")
    res = weighted_distance_upper(weight, x, y, args.h, tol=args.tol)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    payload = {"domain": weight.domain.describe(), "weight": weight.describe(), **res.to_dict()}
    text = dumps(payload)
    (out / "geodesic.json").write_text(text)
    (out / "curve.csv").write_text(res.curve.to_csv())
    sys.stdout.write(text)
    return EXIT_OK


def _read_pairs(path, dim):
    rows = [r for r in csv.reader(io.StringIO(Path(path).read_text())) if r and not r[0].startswith("#")]
    try:
        Z = np.array([[float(c) for c in r] for r in rows])
    except ValueError as exc:
        raise ConfigError(f"bad pairs file: {exc}") from None
    if Z.ndim != 2 or Z.shape[1] != 2 * dim:
        raise ConfigError(f"pairs file needs {2 * dim} columns per row")
    return Z[:, :dim], Z[:, dim:]


def cmd_condition(args) -> int:
    weight, phi = _weight_from_args(args)
    if phi is None:
        raise ConfigError("condition needs --majorant")
    domain = weight.domain
    if args.pairs_file:
        A, B = _read_pairs(args.pairs_file, domain.dim)
    else:
        if domain.bounds is None:
            raise ConfigError("random pairs need a bounded domain; pass --pairs-file")
        A, B = pairs_in_domain(domain, args.pairs, args.seed, args.margin)
    rep = check_extension_condition(weight, phi, list(zip(A, B)), args.h)
    payload = {
        "domain": domain.describe(),
        "weight": weight.describe(),
        "majorant": phi.describe(),
        "seed": args.seed,
        **rep.to_dict(),
    }
    text = dumps(payload)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return EXIT_OK


def run_instance(inst) -> dict:
    """Run every configured check of one instance; returns the JSON payload."""
    dom, f, phi = inst.domain, inst.mapping, inst.majorant
    points = points_in_domain(dom, inst.samples, inst.seed)
    pairs = pairs_in_domain(dom, inst.samples, inst.seed + 1)
    reports, notes = [], {}
    extra = {}

    def attempt(name, fn):
        try:
            fn()
        except WMetricError as exc:
            notes[name] = f"error: {exc}"
            reports.append({"theorem_id": name, "status": "error", "pass": False, "error": str(exc)})

    if "forward" in inst.checks:

        def forward():
            rep = verify_forward(
                f, inst.weight, phi, pairs, points, inst.h, geodesic_pairs=inst.geodesic_pairs, tol=inst.tol
            )
            reports.append(rep.to_dict())

        attempt("forward", forward)
    if "converse" in inst.checks:
        attempt(
            "converse",
            lambda: reports.append(
                verify_converse_strong(f, inst.ro_weight, phi, inst.A, points, pairs, tol=inst.tol).to_dict()
            ),
        )
    if "ball" in inst.checks:
        usable = (
            dom.kind in ("unit_disk", "unit_ball") and f.has_oracle and phi.kind == "power" and phi.alpha < 1
        )
        if usable:

            def ball():
                for rep in verify_unit_ball_corollary(f, phi.alpha, pairs, points, tol=inst.tol):
                    reports.append(rep.to_dict())

            attempt("ball", ball)
        else:
            notes["ball"] = "skipped: needs the unit disk or ball, an oracle and a power majorant with alpha < 1"
    if "image" in inst.checks:
        V = np.asarray(inst.curve if inst.curve is not None else points[:2], dtype=float)
        if segments_inside(dom, V[:-1], V[1:]).all():
            attempt("image", lambda: reports.append(verify_image_curve_lemma(f, Curve(V), tol=inst.tol).to_dict()))
        else:
            notes["image"] = "skipped: curve leaves the domain"
    if "q_profile" in inst.checks:

        def qp():
            P = boundary_q_points(dom.dim) if dom.kind in ("unit_disk", "unit_ball") else points
            extra["q_profile"] = q_profile(f, inst.ro_weight, phi, P).to_dict()

        attempt("q_profile", qp)
    return {
        "instance": inst.name,
        "seed": inst.seed,
        "config": inst.raw,
        "reports": reports,
        **extra,
        "notes": notes,
    }


def _summary_rows(payload):
    for r in payload["reports"]:
        if r["status"] == "error":
            nums = ["", "", ""]
        else:
            # non-finite values were stored as null
            nums = ["inf" if r[k] is None else repr(float(r[k])) for k in ("left", "right", "slack")]
        yield [payload["instance"], r["theorem_id"], *nums, str(r["pass"]).lower(), r["status"]]


def cmd_verify(args) -> int:
    if args.jobs < 1:
        raise ConfigError("--jobs must be at least 1")
    instances = load_config(args.config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SUMMARY_COLUMNS)
    failed = False
    # instances are independent; map keeps config order for the outputs
    with ThreadPoolExecutor(max_workers=min(len(instances), args.jobs)) as pool:
        payloads = list(pool.map(run_instance, instances))
    for inst, payload in zip(instances, payloads):
        (out / f"{inst.name}.json").write_text(dumps(payload))
        for row in _summary_rows(payload):
            writer.writerow(row)
            failed |= row[-1] not in ("pass", "hypothesis_unmet")
            print(f"{row[0]:<20} {row[1]:<14} {row[-1]}")
    (out / "summary.csv").write_text(buf.getvalue())
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wmetric", description="Weighted distances and Hölder/Bloch norm checks.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def weight_args(q):
        q.add_argument("--domain", required=True, help="e.g. 'unit_disk', 'half_plane', 'annulus 0.5 1'")
        q.add_argument("--weight", required=True, help="e.g. 'one', 'dist_power -0.5', 'reciprocal_dist'")
        q.add_argument("--majorant", help="e.g. 'power 0.5'")
        q.add_argument("--h", type=float, default=None, help="grid spacing (default: automatic)")

    g = sub.add_parser("geodesic", help="upper bound on the weighted distance between two points")
    weight_args(g)
    g.add_argument("--x", type=float, nargs="+", required=True)
    g.add_argument("--y", type=float, nargs="+", required=True)
    g.add_argument("--tol", type=float, default=1e-8)
    g.add_argument("--out", default=".", help="directory for geodesic.json and curve.csv")
    g.set_defaults(func=cmd_geodesic)

    c = sub.add_parser("condition", help="sample the integral condition over pairs")
    weight_args(c)
    c.add_argument("--pairs", type=int, default=50, help="number of quasi-random pairs")
    c.add_argument("--pairs-file", help="CSV with x coordinates then y coordinates per row")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--margin", type=float, default=0.02, help="minimum boundary distance of random pairs")
    c.add_argument("--out", default="-", help="JSON output file ('-' for stdout)")
    c.set_defaults(func=cmd_condition)

    v = sub.add_parser("verify", help="run the inequality checks listed in a config file")
    v.add_argument("config")
    v.add_argument("--out", default="reports", help="directory for per-instance JSON and summary.csv")
    v.add_argument("--jobs", type=int, default=4, help="instances run concurrently (default 4)")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except WMetricError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
