"""Command line front end.

Subcommands ``diagram``, ``potential``, ``verify``, ``oracle-compare`` and
``render`` all read a JSON config::

    {"rays": [[1, 0], [0, 1], [-1, -1]],
     "points": [["0", "0"], ["-1", "2"]],
     "queries": [["-3/2", "-5/2"]],
     "pairs": [[["-2", "1"], ["3", "1"]]],
     "seed": 1,
     "perturb_seed": 5,
     "output": {"json": "diagram.json", "svg": "diagram.svg"}}

Only ``rays`` is required.  Coordinates are exact: integers or ``"num/den"``
strings.  Exit codes: 0 ok, 1 usage error, 2 non-generic input, 3 a
verification check failed.
"""
from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import svg
from .families import (
    FamilySet,
    NonGenericQuery,
    brute_force_potential,
    enumerate_families,
    perturb,
    potential_at,
)
from .geom2d import GeometryError, NonGenericPath, Point, format_scalar, parse_point, scalar
from .ringalg import Fan, FanError, PotentialElement, format_monomial
from .scattering import Diagram, build_diagram, check_joint_consistency, transport

log = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_NONGENERIC, EXIT_FAILED = 0, 1, 2, 3
PAIR_COUNT = 20
ORACLE_COUNT = 10
DENOMINATOR = 997
RETRIES = 100


class UsageError(Exception):
    pass


@dataclass
class Config:
    fan: Fan
    points: Tuple[Point, ...] = ()
    queries: Tuple[Point, ...] = ()
    pairs: Tuple[Tuple[Point, Point], ...] = ()
    seed: int = 0
    output: dict = field(default_factory=dict)


def _exact(value, what: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise UsageError(f"{what}: expected an integer or a \"num/den\" string, got {value!r}")
    try:
        return scalar(value)
    except (ValueError, ZeroDivisionError) as err:
        raise UsageError(f"{what}: {err}") from None


def _point(value, what: str) -> Point:
    if isinstance(value, str):
        try:
            return parse_point(value)
        except (ValueError, ZeroDivisionError) as err:
            raise UsageError(f"{what}: {err}") from None
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise UsageError(f"{what}: expected a coordinate pair, got {value!r}")
    return (_exact(value[0], what), _exact(value[1], what))


def parse_config(doc: dict) -> Config:
    if not isinstance(doc, dict) or "rays" not in doc:
        raise UsageError("config must be a JSON object with a \"rays\" entry")
    unknown = set(doc) - {"rays", "points", "queries", "pairs", "seed", "perturb_seed", "output"}
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    rays = []
    for r in doc["rays"]:
        if not isinstance(r, (list, tuple)) or len(r) != 2:
            raise UsageError(f"ray {r!r} is not an integer pair")
        try:
            rays.append((int(str(r[0])), int(str(r[1]))))
        except ValueError:
            raise UsageError(f"ray {r!r} is not an integer pair") from None
    try:
        fan = Fan(tuple(rays))
    except FanError as err:
        raise UsageError(f"bad fan: {err}") from None
    points = tuple(_point(p, f"points[{i}]") for i, p in enumerate(doc.get("points", [])))
    if doc.get("perturb_seed") is not None:
        points = perturb(points, int(doc["perturb_seed"]))
    queries = tuple(_point(q, f"queries[{i}]") for i, q in enumerate(doc.get("queries", [])))
    pairs = []
    for i, pr in enumerate(doc.get("pairs", [])):
        if not isinstance(pr, (list, tuple)) or len(pr) != 2:
            raise UsageError(f"pairs[{i}]: expected two points")
        pairs.append((_point(pr[0], f"pairs[{i}][0]"), _point(pr[1], f"pairs[{i}][1]")))
    return Config(fan, points, queries, tuple(pairs), int(doc.get("seed", 0)), dict(doc.get("output", {})))


def load_config(path: str) -> Config:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as err:
        raise UsageError(f"cannot read config: {err}") from None
    except json.JSONDecodeError as err:
        raise UsageError(f"config is not valid JSON: {err}") from None
    return parse_config(doc)


def _pt(p: Point) -> List[str]:
    return [format_scalar(p[0]), format_scalar(p[1])]


def potential_doc(fan: Fan, q: Point, pot: PotentialElement) -> dict:
    terms = [
        {"m": list(m), "monomial": format_monomial(m, marks, fan), "marks": sorted(marks),
         "coeff": format_scalar(c)}
        for m, marks, c in pot
    ]
    return {"q": _pt(q), "terms": terms}


def _dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def _write(path: Optional[str], text: str) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# random generic queries


def _random_point(rng: random.Random, box) -> Point:
    xmin, ymin, xmax, ymax = box

    def coord(lo, hi):
        a = int(lo * DENOMINATOR) + 1
        b = int(hi * DENOMINATOR) - 1
        return Fraction(rng.randint(a, b), DENOMINATOR)

    return (coord(xmin, xmax), coord(ymin, ymax))


def random_queries(fs: FamilySet, d: Diagram, rng: random.Random, count: int) -> List[Point]:
    box = svg.diagram_box(d)
    out = []
    for _ in range(count):
        for _ in range(RETRIES):
            q = _random_point(rng, box)
            try:
                potential_at(fs, q)
            except NonGenericQuery:
                continue
            if q not in fs.points:
                out.append(q)
                break
        else:
            raise NonGenericQuery(f"no generic query point after {RETRIES} draws")
    return out


def random_pairs(fs: FamilySet, d: Diagram, rng: random.Random, count: int) -> List[Tuple[Point, Point]]:
    box = svg.diagram_box(d)
    out = []
    for _ in range(count):
        for _ in range(RETRIES):
            q, q2 = _random_point(rng, box), _random_point(rng, box)
            try:
                potential_at(fs, q)
                potential_at(fs, q2)
                transport(d, q, q2, PotentialElement())
            except (NonGenericQuery, NonGenericPath):
                continue
            out.append((q, q2))
            break
        else:
            raise NonGenericQuery(f"no generic query pair after {RETRIES} draws")
    return out


# ---------------------------------------------------------------------------
# commands


def _diagram(cfg: Config, drop_wall: Optional[int] = None) -> Tuple[FamilySet, Diagram]:
    fs = enumerate_families(cfg.fan, cfg.points)
    d = build_diagram(fs)
    if drop_wall is not None:
        if not 0 <= drop_wall < len(d.walls):
            raise UsageError(f"--drop-wall {drop_wall}: the diagram has {len(d.walls)} walls")
        d = d.without_wall(drop_wall)
    return fs, d


def cmd_diagram(cfg: Config, args) -> int:
    _, d = _diagram(cfg, args.drop_wall)
    text = d.dumps() + "\n"
    _write(args.json or cfg.output.get("json"), text)
    _write(args.svg or cfg.output.get("svg"), svg.render_diagram(d))
    sys.stdout.write(text)
    return EXIT_OK


def _queries(cfg: Config, args) -> List[Point]:
    if args.q:
        try:
            return [parse_point(q) for q in args.q]
        except (ValueError, ZeroDivisionError) as err:
            raise UsageError(f"--q: {err}") from None
    return list(cfg.queries)


def cmd_potential(cfg: Config, args) -> int:
    qs = _queries(cfg, args)
    if not qs:
        raise UsageError("potential needs --q or \"queries\" in the config")
    fs = enumerate_families(cfg.fan, cfg.points)
    doc = {"n": len(cfg.points), "potentials": [potential_doc(cfg.fan, q, potential_at(fs, q)) for q in qs]}
    text = _dump(doc)
    _write(args.json or cfg.output.get("json"), text)
    sys.stdout.write(text)
    return EXIT_OK


def _oracle_checks(cfg: Config, fs: FamilySet, qs: Sequence[Point]) -> List[dict]:
    checks = []
    for q in qs:
        got = potential_at(fs, q)
        want = brute_force_potential(cfg.fan, cfg.points, q)
        row = {"kind": "oracle", "q": _pt(q), "pass": got == want}
        if got != want:
            row["enumerated"] = got.to_json()
            row["oracle"] = want.to_json()
        checks.append(row)
    return checks


def _seed(cfg: Config, args) -> int:
    return cfg.seed if args.seed is None else args.seed


def cmd_verify(cfg: Config, args) -> int:
    fs, d = _diagram(cfg, args.drop_wall)
    rng = random.Random(_seed(cfg, args))
    checks = []
    for j, joint in enumerate(d.joints):
        ok = check_joint_consistency(d, j)
        row = {"kind": "joint", "index": j, "point": _pt(joint.point), "walls": list(joint.walls), "pass": ok}
        checks.append(row)
    pairs = list(cfg.pairs) or random_pairs(fs, d, rng, PAIR_COUNT)
    for q, q2 in pairs:
        here, there = potential_at(fs, q), potential_at(fs, q2)
        moved = transport(d, q, q2, here)
        row = {"kind": "wall-crossing", "q": _pt(q), "q2": _pt(q2), "pass": moved == there}
        if moved != there:
            row["transported"] = moved.to_json()
            row["expected"] = there.to_json()
        checks.append(row)
    if len(cfg.points) <= 2:
        qs = list(cfg.queries) or sorted({q for pr in pairs for q in pr})[:ORACLE_COUNT]
        checks += _oracle_checks(cfg, fs, qs)
    ok = all(c["pass"] for c in checks)
    doc = {"n": len(cfg.points), "joints": len(d.joints), "walls": len(d.walls), "checks": checks, "pass": ok}
    text = _dump(doc)
    _write(args.json or cfg.output.get("json"), text)
    sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_oracle_compare(cfg: Config, args) -> int:
    fs, d = _diagram(cfg)
    qs = _queries(cfg, args) or random_queries(fs, d, random.Random(_seed(cfg, args)), ORACLE_COUNT)
    checks = _oracle_checks(cfg, fs, qs)
    ok = all(c["pass"] for c in checks)
    text = _dump({"n": len(cfg.points), "checks": checks, "pass": ok})
    _write(args.json or cfg.output.get("json"), text)
    sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAILED


def cmd_render(cfg: Config, args) -> int:
    path = args.svg or cfg.output.get("svg")
    if not path:
        raise UsageError("render needs --svg or \"output.svg\" in the config")
    fs, d = _diagram(cfg, args.drop_wall)
    qs = _queries(cfg, args) or random_queries(fs, d, random.Random(_seed(cfg, args)), ORACLE_COUNT)
    labelled = [(q, potential_at(fs, q)) for q in qs]
    _write(path, svg.render_chambers(fs, d, labelled))
    return EXIT_OK


COMMANDS = {
    "diagram": cmd_diagram,
    "potential": cmd_potential,
    "verify": cmd_verify,
    "oracle-compare": cmd_oracle_compare,
    "render": cmd_render,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tropdisks", description="Tropical disk counts and scattering diagrams.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, metavar="PATH")
        p.add_argument("--json", metavar="PATH", help="also write the JSON document here")
        if name in ("potential", "oracle-compare", "render"):
            p.add_argument("--q", action="append", metavar="X,Y", help="query point, repeatable")
        if name in ("verify", "oracle-compare", "render"):
            p.add_argument("--seed", type=int)
        if name in ("diagram", "render"):
            p.add_argument("--svg", metavar="PATH")
        if name in ("diagram", "verify", "render"):
            p.add_argument("--drop-wall", type=int, metavar="K", help="delete wall K (test hook)")
    return parser


def _fail(code: int, err: Exception) -> int:
    sys.stderr.write(json.dumps({"error": type(err).__name__, "message": str(err)}, sort_keys=True) + "\n")
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    for attr in ("q", "seed", "svg", "drop_wall"):
        if not hasattr(args, attr):
            setattr(args, attr, None)
    try:
        cfg = load_config(args.config)
        return COMMANDS[args.command](cfg, args)
    except UsageError as err:
        return _fail(EXIT_USAGE, err)
    except GeometryError as err:
        # non-generic configuration, query or path
        return _fail(EXIT_NONGENERIC, err)


if __name__ == "__main__":
    sys.exit(main())
