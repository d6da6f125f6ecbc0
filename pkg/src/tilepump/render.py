"""SVG rendering of instances with analysis overlays.

One unit square per tile (seed gray, path cream), glue ticks on strength ≥ 1
sides, and optional overlays: visibility rays as horizontal lines, dominating
rays, the stake path, ghosted pumping iterations, and conflict markers.
The y axis points north, so rows are flipped for SVG's screen coordinates.
"""

from __future__ import annotations

from typing import Optional

from .geometry import Point, add, scale
from .model import PathAssembly, TileAssemblySystem
from .pumping import materialize_pumping
from .visibility import EAST_SIDE, WEST_SIDE, dominating_tiles, visibility_report

CELL = 28
PAD = 2


def _esc(text: str) -> str:
    return (text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
            .replace('"', "&quot;"))


class _Canvas:
    def __init__(self, x0, y0, x1, y1):
        # cell space, inclusive bounds, y northward
        self.x0, self.y0, self.x1, self.y1 = x0, y0, x1, y1
        self.width = (x1 - x0 + 1) * CELL + 2 * PAD * CELL
        self.height = (y1 - y0 + 1) * CELL + 2 * PAD * CELL
        self.body: list[str] = []

    def cell_origin(self, p: Point) -> tuple[int, int]:
        # top-left pixel of the unit square for cell p
        sx = (p[0] - self.x0 + PAD) * CELL
        sy = (self.y1 - p[1] + PAD) * CELL
        return sx, sy

    def boundary_y(self, level: int) -> int:
        # pixel y of the boundary between rows level and level+1
        return (self.y1 - level + PAD) * CELL

    def rect(self, p: Point, fill: str, cls: str, opacity: float = 1.0, title: str = ""):
        sx, sy = self.cell_origin(p)
        t = f"<title>{_esc(title)}</title>" if title else ""
        op = f' opacity="{opacity}"' if opacity != 1.0 else ""
        self.body.append(
            f'<rect class="{cls}" x="{sx}" y="{sy}" width="{CELL}" height="{CELL}" '
            f'fill="{fill}" stroke="#555" stroke-width="1"{op}>{t}</rect>')

    def line(self, x1, y1, x2, y2, stroke: str, cls: str, width: int = 2, dash: str = ""):
        d = f' stroke-dasharray="{dash}"' if dash else ""
        self.body.append(
            f'<line class="{cls}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" '
            f'stroke="{stroke}" stroke-width="{width}"{d}/>')

    def text(self, p: Point, s: str, cls: str = "label"):
        sx, sy = self.cell_origin(p)
        self.body.append(
            f'<text class="{cls}" x="{sx + CELL // 2}" y="{sy + CELL // 2 + 4}" '
            f'font-size="9" text-anchor="middle" fill="#333">{_esc(s)}</text>')

    def to_svg(self) -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width}" '
                f'height="{self.height}" viewBox="0 0 {self.width} {self.height}">')
        return head + "\n" + "\n".join(self.body) + "\n</svg>\n"


def _glue_ticks(canvas: _Canvas, tas: TileAssemblySystem, p: Point, name: str):
    t = tas.tile_map[name]
    sx, sy = canvas.cell_origin(p)
    mid = CELL // 2
    ticks = {
        "N": (sx + mid, sy, sx + mid, sy + 5),
        "S": (sx + mid, sy + CELL - 5, sx + mid, sy + CELL),
        "E": (sx + CELL - 5, sy + mid, sx + CELL, sy + mid),
        "W": (sx, sy + mid, sx + 5, sy + mid),
    }
    for side, coords in ticks.items():
        if t.glue(side).strength >= 1:
            canvas.line(*coords, stroke="#c03", cls="glue-tick", width=2)


def render_svg(tas: TileAssemblySystem, path: PathAssembly,
               overlays: Optional[dict] = None) -> str:
    """Render the instance; `overlays` may request any of:

    - "visibility": "east" | "west" | "both"
    - "dominating": [vx, vy]
    - "stake": [[x, y], ...] (polyline through cell centers)
    - "pumping": {"i": i, "j": j, "iterations": n} (ghost tiles)
    - "conflict": [x, y]
    """
    overlays = overlays or {}
    cells = dict(tas.seed.tiles)
    cells.update(path.induced_tiles())

    ghost_tiles: list[tuple[Point, str]] = []
    if "pumping" in overlays:
        spec = overlays["pumping"]
        order, _ = materialize_pumping(tas, path, int(spec["i"]), int(spec["j"]),
                                       int(spec.get("iterations", 3)), stop_at_conflict=False)
        ghost_tiles = order

    pts = list(cells) + [q for q, _ in ghost_tiles]
    if "conflict" in overlays:
        pts.append(tuple(overlays["conflict"]))
    x0 = min(q[0] for q in pts) - 1
    x1 = max(q[0] for q in pts) + 1
    y0 = min(q[1] for q in pts) - 1
    y1 = max(q[1] for q in pts) + 1
    canvas = _Canvas(x0, y0, x1, y1)

    for q in sorted(tas.seed.tiles):
        canvas.rect(q, "#b5b5b5", "seed-tile", title=f"seed {tas.seed.tiles[q]} @ {q}")
        _glue_ticks(canvas, tas, q, tas.seed.tiles[q])
    for k in range(1, len(path) + 1):
        q = path.pos(k)
        canvas.rect(q, "#fdf6dd", "path-tile", title=f"P_{k} {path.name(k)} @ {q}")
        _glue_ticks(canvas, tas, q, path.name(k))
        canvas.text(q, str(k))
    for q, name in ghost_tiles:
        if q not in cells:
            canvas.rect(q, "#9dc7f0", "pump-ghost", opacity=0.4, title=f"pump {name} @ {q}")

    vis = overlays.get("visibility")
    if vis in (EAST_SIDE, WEST_SIDE, "both"):
        report = visibility_report(path, tas.seed, include_seed_junction=True)
        sides = [EAST_SIDE, WEST_SIDE] if vis == "both" else [vis]
        for side in sides:
            color = "#0a0" if side == EAST_SIDE else "#d22"
            for (s, level), ray in sorted(report.rays.items()):
                if s != side:
                    continue
                py = canvas.boundary_y(level)
                sx, _ = canvas.cell_origin((ray.x_start, level))
                if ray.direction > 0:
                    canvas.line(sx, py, canvas.width, py, color, "visibility-ray", dash="5,3")
                else:
                    canvas.line(0, py, sx + CELL, py, color, "visibility-ray", dash="5,3")

    if "dominating" in overlays:
        v = tuple(overlays["dominating"])
        report = dominating_tiles(path, v)
        for idx in report.dominating_indices:
            a = path.pos(idx)
            b = add(a, scale(v, 3))
            ax, ay = canvas.cell_origin(a)
            bx, by = canvas.cell_origin(b)
            half = CELL // 2
            canvas.line(ax + half, ay + half, bx + half, by + half,
                        "#7b3fb3", "dominating-ray", width=1, dash="2,3")

    if "stake" in overlays:
        pts_px = []
        for q in overlays["stake"]:
            sx, sy = canvas.cell_origin(tuple(q))
            pts_px.append(f"{sx + CELL // 2},{sy + CELL // 2}")
        if pts_px:
            canvas.body.append(
                f'<polyline class="stake-path" points="{" ".join(pts_px)}" fill="none" '
                f'stroke="#e07a00" stroke-width="3" opacity="0.8"/>')

    if "conflict" in overlays:
        q = tuple(overlays["conflict"])
        sx, sy = canvas.cell_origin(q)
        canvas.line(sx + 4, sy + 4, sx + CELL - 4, sy + CELL - 4, "#e00", "conflict-marker", width=3)
        canvas.line(sx + 4, sy + CELL - 4, sx + CELL - 4, sy + 4, "#e00", "conflict-marker", width=3)

    return canvas.to_svg()
