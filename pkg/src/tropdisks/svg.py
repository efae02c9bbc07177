"""Deterministic SVG drawings of scattering diagrams and chamber structure.

Geometry stays exact until the final pixel mapping, so the same input always
produces the same bytes.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

from .families import FamilySet
from .geom2d import Point
from .ringalg import Fan, PotentialElement, format_monomial
from .scattering import Diagram

Box = Tuple[Fraction, Fraction, Fraction, Fraction]  # xmin, ymin, xmax, ymax

SIZE = 640
MARGIN = 24
PALETTE = ("#1b6ca8", "#c0392b", "#2e8b57", "#8e44ad", "#d35400", "#16a085", "#7f8c8d")


def clip_box(points: Iterable[Point], factor: int = 3, minimum: int = 10) -> Box:
    """Bounding box of ``points`` padded by ``factor`` times its diameter, at least ``minimum``."""
    pts = list(points) or [(Fraction(0), Fraction(0))]
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    diam = max(max(xs) - min(xs), max(ys) - min(ys))
    pad = max(factor * diam, Fraction(minimum))
    return (min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad)


def diagram_box(d: Diagram) -> Box:
    return clip_box(list(d.marked_points) + [j.point for j in d.joints])


def clip_line(x0: Point, u: Sequence[int], box: Box, lo: Optional[Fraction] = None,
              halfplanes: Sequence = ()) -> Optional[Tuple[Point, Point]]:
    """Portion of ``x0 + s*u`` (``s >= lo``) inside the box and the half-planes ``a.x >= b``."""
    xmin, ymin, xmax, ymax = box
    s_lo, s_hi = lo, None
    rows = [((1, 0), xmin), ((-1, 0), -xmax), ((0, 1), ymin), ((0, -1), -ymax)]
    rows += list(halfplanes)
    for a, b in rows:
        # a.(x0 + s u) >= b
        au = a[0] * u[0] + a[1] * u[1]
        slack = a[0] * x0[0] + a[1] * x0[1] - b
        if au == 0:
            if slack < 0:
                return None
            continue
        s = Fraction(-slack) / au
        if au > 0:
            s_lo = s if s_lo is None else max(s_lo, s)
        else:
            s_hi = s if s_hi is None else min(s_hi, s)
    if s_lo is None or s_hi is None or s_lo >= s_hi:
        return None
    return ((x0[0] + s_lo * u[0], x0[1] + s_lo * u[1]),
            (x0[0] + s_hi * u[0], x0[1] + s_hi * u[1]))


class _Canvas:
    def __init__(self, box: Box):
        self.box = box
        xmin, ymin, xmax, ymax = box
        self.scale = Fraction(SIZE - 2 * MARGIN) / max(xmax - xmin, ymax - ymin)
        self.items: List[str] = []

    def xy(self, p: Point) -> Tuple[str, str]:
        xmin, _, _, ymax = self.box
        x = MARGIN + (p[0] - xmin) * self.scale
        y = MARGIN + (ymax - p[1]) * self.scale
        return f"{float(x):.3f}", f"{float(y):.3f}"

    def line(self, a: Point, b: Point, color: str, width: float = 1.5, dash: str = "") -> None:
        (x1, y1), (x2, y2) = self.xy(a), self.xy(b)
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        self.items.append(
            f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{color}" stroke-width="{width}"{extra}/>'
        )

    def dot(self, p: Point, color: str = "black", r: int = 4) -> None:
        x, y = self.xy(p)
        self.items.append(f'<circle cx="{x}" cy="{y}" r="{r}" fill="{color}"/>')

    def cross(self, p: Point, color: str = "black", r: int = 5) -> None:
        x, y = (float(c) for c in self.xy(p))
        self.items.append(
            f'<path d="M{x - r:.3f},{y - r:.3f} L{x + r:.3f},{y + r:.3f} '
            f'M{x - r:.3f},{y + r:.3f} L{x + r:.3f},{y - r:.3f}" stroke="{color}" stroke-width="2"/>'
        )

    def text(self, p: Point, label: str, color: str = "black", size: int = 11, dx: int = 4, dy: int = -4) -> None:
        x, y = (float(c) for c in self.xy(p))
        self.items.append(
            f'<text x="{x + dx:.3f}" y="{y + dy:.3f}" font-family="monospace" font-size="{size}" '
            f'fill="{color}">{escape(label)}</text>'
        )

    def raw(self, item: str) -> None:
        self.items.append(item)

    def render(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
                f'viewBox="0 0 {SIZE} {SIZE}">')
        frame = f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>'
        return "\n".join([head, frame] + self.items + ["</svg>"]) + "\n"


def _legend(c: _Canvas, fan: Fan) -> None:
    cx, cy, r = SIZE - 60, 60, 34
    c.raw(f'<g id="fan-legend"><circle cx="{cx}" cy="{cy}" r="{r + 14}" fill="#f4f4f4" stroke="#bbb"/>')
    for i, (a, b) in enumerate(fan.rays):
        norm = (a * a + b * b) ** 0.5
        x, y = cx + r * a / norm, cy - r * b / norm
        c.raw(f'<line x1="{cx}" y1="{cy}" x2="{x:.3f}" y2="{y:.3f}" stroke="#444" stroke-width="1.5"/>')
        lx, ly = cx + (r + 8) * a / norm, cy - (r + 8) * b / norm
        c.raw(f'<text x="{lx - 3:.3f}" y="{ly + 4:.3f}" font-family="monospace" font-size="11">'
              f'{fan.label(i)}</text>')
    c.raw("</g>")


def _wall_label(d: Diagram, k: int) -> str:
    w = d.walls[k]
    mono = format_monomial(w.m, w.marks, d.fan)
    return mono if w.coeff == 1 else f"{w.coeff}*{mono}"


def _draw_walls(c: _Canvas, d: Diagram) -> None:
    for k, w in enumerate(d.walls):
        seg = clip_line(w.base, w.t, c.box, lo=Fraction(0))
        if seg is None:
            continue
        color = PALETTE[k % len(PALETTE)]
        c.line(seg[0], seg[1], color)
        tip = (seg[0][0] * 1 / 4 + seg[1][0] * 3 / 4, seg[0][1] * 1 / 4 + seg[1][1] * 3 / 4)
        c.text(tip, f"w{k}: {_wall_label(d, k)}", color)


def _draw_points(c: _Canvas, d: Diagram) -> None:
    for i, p in enumerate(d.marked_points, start=1):
        c.dot(p)
        c.text(p, f"P{i}", dx=6, dy=14)
    for j in d.joints:
        c.cross(j.point)


def render_diagram(d: Diagram) -> str:
    c = _Canvas(diagram_box(d))
    _draw_walls(c, d)
    _draw_points(c, d)
    _legend(c, d.fan)
    return c.render()


def render_chambers(fs: FamilySet, d: Diagram,
                    queries: Sequence[Tuple[Point, PotentialElement]] = ()) -> str:
    """The diagram over dashed boundaries of the index-2 loci, with potentials at ``queries``."""
    c = _Canvas(diagram_box(d))
    seen = set()
    for f in fs.disks:
        ineqs = f.locus.ineq
        for i, (a, b) in enumerate(ineqs):
            if (a, b) in seen:
                continue
            seen.add((a, b))
            nn = a[0] * a[0] + a[1] * a[1]
            x0 = (Fraction(b * a[0], nn), Fraction(b * a[1], nn))
            seg = clip_line(x0, (-a[1], a[0]), c.box, halfplanes=ineqs[:i] + ineqs[i + 1:])
            if seg is not None:
                c.line(seg[0], seg[1], "#999", width=1, dash="4 3")
    _draw_walls(c, d)
    _draw_points(c, d)
    for q, pot in queries:
        c.dot(q, color="#555", r=2)
        c.text(q, pot.format(d.fan) or "0", color="#333", size=9)
    _legend(c, d.fan)
    return c.render()
