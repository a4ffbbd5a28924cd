"""Static SVG drawing of a slice of the movable cone.

The slice is normalised to a unit segment between the two boundary rays;
walls become ticks and chambers become labelled intervals.  Translates of
an infinite fundamental domain are drawn in grey.
"""

from __future__ import annotations

from xml.sax.saxutils import escape

from .chambers import INFINITE, MovableCone
from .exact import QuadExt
from .invariants import DivClass

WIDTH, HEIGHT, MARGIN = 900, 220, 60
TRANSLATES = 2


def _f(x) -> float:
    return x.approx() if isinstance(x, QuadExt) else float(x)


def _position(v: DivClass, left: DivClass, right: DivClass) -> float:
    """Affine parameter of ``v`` on the chord from ``left`` to ``right``."""
    (lx, ly), (rx, ry), (vx, vy) = ([_f(c) for c in d.vec] for d in (left, right, v))
    base = lx * ry - ly * rx
    s = (vx * ry - vy * rx) / base
    t = (lx * vy - ly * vx) / base
    return t / (s + t)


def _x(pos: float) -> float:
    return MARGIN + pos * (WIDTH - 2 * MARGIN)


def cone_svg(mc: MovableCone) -> str:
    left, right = mc.boundary
    y = HEIGHT / 2
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
        f'<text x="{WIDTH / 2}" y="20" text-anchor="middle" font-size="14">{escape(mc.case_id)}</text>',
        f'<line x1="{_x(0)}" y1="{y}" x2="{_x(1)}" y2="{y}" stroke="black" stroke-width="2"/>',
    ]

    def tick(d: DivClass, colour: str, label: bool, below: bool = False):
        x = _x(_position(d, left, right))
        parts.append(f'<line x1="{x:.2f}" y1="{y - 12}" x2="{x:.2f}" y2="{y + 12}" stroke="{colour}"/>')
        if label:
            ty = y + 30 if below else y - 20
            parts.append(f'<text x="{x:.2f}" y="{ty}" text-anchor="middle" fill="{colour}">{escape(str(d))}</text>')

    if mc.finiteness == INFINITE:
        g = mc.generator.pullback
        for k in range(-TRANSLATES, TRANSLATES + 1):
            if k == 0:
                continue
            for w in mc.walls:
                tick(w.divisor.pushforward(g**k), "grey", False)
        for ray in (left, right):
            tick(ray, "darkred", True, below=True)
    elif mc.mirror is not None:
        for w in mc.walls[1:]:
            tick(mc.mirror(w.divisor), "grey", False)
        tick(mc.mirror_wall.divisor, "black", True)
    for i, w in enumerate(mc.walls):
        tick(w.divisor, "black", True, below=bool(i % 2))
    for c in mc.chambers:
        mid = (_position(c.left.divisor, left, right) + _position(c.right.divisor, left, right)) / 2
        parts.append(f'<text x="{_x(mid):.2f}" y="{y + 55}" text-anchor="middle" fill="navy">'
                     f'{escape(c.model.id)}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
