#!/usr/bin/env python3
"""Writes the bundled sample dataset (manifest without indices plus SVG assets).

Run `infogen build-index --dataset DIR` afterwards to fill the cluster model,
VG-VIF and C-VIF indices.
"""

import argparse
import json
import math
import random
from pathlib import Path


def evenly_along(path, n):
    """n points spaced uniformly by arc length along a polyline."""
    segs = [math.dist(a, b) for a, b in zip(path, path[1:])]
    total = sum(segs)
    out = []
    for i in range(n):
        target = total * i / (n - 1)
        acc = 0.0
        for (a, b), length in zip(zip(path, path[1:]), segs):
            if acc + length >= target - 1e-12 or (a, b) == (path[-2], path[-1]):
                t = 0.0 if length == 0 else min(1.0, max(0.0, (target - acc) / length))
                out.append((a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])))
                break
            acc += length
    return out


def arc(n, cx, cy, r, start, sweep):
    return [
        (cx + r * math.cos(math.radians(start + sweep * i / (n - 1))),
         cy + r * math.sin(math.radians(start + sweep * i / (n - 1))))
        for i in range(n)
    ]


def ring(n):
    # Open ring: gap of one step between the last and first point.
    return [
        (0.5 + 0.38 * math.cos(math.radians(-90 + 360 * i / n)),
         0.5 + 0.38 * math.sin(math.radians(-90 + 360 * i / n)))
        for i in range(n)
    ]


def zigzag(n):
    xs = [0.1 + 0.8 * i / (n - 1) for i in range(n)]
    return [(x, 0.35 if i % 2 == 0 else 0.65) for i, x in enumerate(xs)]


def snake(n, rows):
    per = math.ceil(n / rows)
    pts = []
    for r in range(rows):
        y = 0.15 + 0.7 * r / (rows - 1)
        xs = [0.1 + 0.8 * c / (per - 1) for c in range(per)]
        if r % 2:
            xs.reverse()
        pts.extend((x, y) for x in xs)
    return pts[:n]


def layouts():
    out = []

    def add(name, pts, source):
        # Shapes are drawn in [0.1, 0.9]^2 then fitted below the heading band
        # with margins that keep most VGs on the canvas.
        fit = [(0.15 + 0.7 * (x - 0.1) / 0.8, 0.25 + 0.6 * (y - 0.1) / 0.8) for x, y in pts]
        out.append({"id": name, "points": [[round(x, 6), round(y, 6)] for x, y in fit], "source": source})

    for n in range(2, 9):
        add(f"row-{n}", evenly_along([(0.1, 0.5), (0.9, 0.5)], n), "synthetic:row")
        add(f"column-{n}", evenly_along([(0.5, 0.1), (0.5, 0.9)], n), "synthetic:column")
    for n in range(2, 9):
        add(f"stair-{n}", evenly_along([(0.1, 0.1), (0.9, 0.9)], n), "synthetic:stair")
    for n in range(3, 9):
        add(f"arc-{n}", arc(n, 0.5, 0.85, 0.4, 180, 180), "synthetic:arc")
        add(f"zigzag-{n}", zigzag(n), "synthetic:zigzag")
        add(f"vee-{n}", evenly_along([(0.1, 0.15), (0.5, 0.85), (0.9, 0.15)], n), "synthetic:vee")
    for n in range(4, 13):
        add(f"ring-{n}", ring(n), "synthetic:ring")
    for n in (4, 6, 8, 9, 10, 12):
        rows = 2 if n <= 8 else 3
        add(f"snake-{n}", snake(n, rows), "synthetic:snake")
    for n in (5, 7, 11):
        add(f"hook-{n}", evenly_along([(0.1, 0.15), (0.9, 0.15), (0.9, 0.85), (0.3, 0.85)], n), "synthetic:hook")
    return out


def rect(x, y, w, h, extra=""):
    return f'<rect x="{x}" y="{y}" width="{w}" height="{h}"{extra}/>'


def slot(kind, x, y, w, h):
    return rect(x, y, w, h, f' data-slot="{kind}" fill="none"')


def svg(w, h, body):
    return (f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}" width="{w}" height="{h}">'
            + "".join(body) + "</svg>\n")


VG_TEMPLATES = {
    "card": svg(160, 90, [
        rect(0, 0, 160, 90, ' rx="8" data-theme-color="1" data-anchor="1"'),
        slot("title", 10, 8, 140, 22), slot("text", 10, 36, 140, 46)]),
    "icon-label": svg(100, 100, [
        '<circle cx="50" cy="38" r="34" data-theme-color="2"/>',
        slot("image", 26, 14, 48, 48), slot("label", 5, 78, 90, 20)]),
    "badge": svg(140, 60, [
        rect(0, 0, 50, 60, ' rx="6" data-theme-color="1"'),
        rect(50, 0, 90, 60, ' fill="none" stroke="#888" data-theme-color="3"'),
        slot("label", 5, 15, 40, 30), slot("title", 56, 15, 80, 30)]),
    "full": svg(180, 120, [
        rect(0, 0, 180, 120, ' rx="10" data-theme-color="4"'),
        slot("image", 8, 8, 50, 50), slot("label", 8, 64, 50, 20),
        slot("title", 66, 8, 106, 24), slot("text", 66, 38, 106, 74)]),
    "bubble": svg(110, 110, [
        '<circle cx="55" cy="55" r="54" data-theme-color="2"/>',
        slot("label", 25, 12, 60, 26), slot("text", 15, 44, 80, 50)]),
    "banner": svg(200, 70, [
        rect(0, 0, 200, 70, ' data-theme-color="3"'),
        slot("image", 6, 6, 58, 58), slot("title", 72, 6, 122, 22), slot("text", 72, 32, 122, 32)]),
    "pill": svg(120, 40, [
        rect(0, 0, 120, 40, ' rx="20" data-theme-color="1"'), slot("title", 12, 8, 96, 24)]),
    "note": svg(130, 80, [
        '<path d="M0 0 H110 L130 20 V80 H0 Z" data-theme-color="4"/>', slot("text", 8, 8, 112, 64)]),
    "step": svg(150, 100, [
        '<circle cx="24" cy="24" r="22" data-theme-color="1"/>',
        slot("label", 8, 12, 32, 24), slot("title", 52, 6, 92, 30), slot("text", 8, 50, 136, 44)]),
    "tile": svg(100, 120, [
        rect(0, 0, 100, 120, ' rx="4" data-theme-color="2"'),
        slot("image", 10, 10, 80, 70), slot("title", 6, 88, 88, 26)]),
}

CONNECTION_SHAPES = {
    "arrow": ('<path d="M0 8 H80 V0 L100 10 L80 20 V12 H0 Z" fill="#777"/>', 100, 20, ["regular", "flow_shape"]),
    "bar": ('<rect x="0" y="8" width="100" height="4" fill="#999"/>', 100, 20, ["regular", "alternating", "pivot"]),
    "dots": ('<circle cx="10" cy="10" r="6" fill="#aaa"/><circle cx="50" cy="10" r="6" fill="#aaa"/>'
             '<circle cx="90" cy="10" r="6" fill="#aaa"/>', 100, 20, ["alternating", "pivot"]),
    "chevron": ('<path d="M0 0 L80 0 L100 10 L80 20 L0 20 L20 10 Z" fill="#bbb"/>', 100, 20, ["flow_shape"]),
}

PIVOT_GRAPHICS = {
    "globe": svg(100, 100, [
        '<circle cx="50" cy="50" r="48" fill="#dde8f0" stroke="#5a7d9a" stroke-width="2"/>',
        '<ellipse cx="50" cy="50" rx="20" ry="48" fill="none" stroke="#5a7d9a"/>',
        '<line x1="2" y1="50" x2="98" y2="50" stroke="#5a7d9a"/>']),
    "bulb": svg(80, 110, [
        '<circle cx="40" cy="40" r="38" fill="#fff3c4" stroke="#c9a227" stroke-width="2"/>',
        rect(25, 80, 30, 28, ' fill="#999"')]),
}

PALETTES = [
    {"name": "ocean", "colors": ["#1f6f8b", "#99a8b2", "#e6d5b8", "#dbe9f4"], "background": "#ffffff"},
    {"name": "sunset", "colors": ["#e76f51", "#f4a261", "#e9c46a", "#fdf0d5"], "background": "#fffaf3"},
    {"name": "forest", "colors": ["#2a9d8f", "#8ab17d", "#e9c46a", "#eef5ea"], "background": "#fbfdf9"},
]

STYLE_BY_FAMILY = {
    "row": ["flow_shape", "regular"], "column": ["regular", "flow_shape"], "stair": ["regular", "flow_shape"],
    "arc": ["pivot", "none"], "zigzag": ["alternating", "regular"], "vee": ["regular", "none"],
    "ring": ["pivot", "none"], "snake": ["regular", "flow_shape"], "hook": ["flow_shape", "regular"],
}
VG_BY_FAMILY = {
    "row": ["card", "step", "pill"], "column": ["banner", "badge", "note"], "stair": ["step", "card"],
    "arc": ["icon-label", "bubble"], "zigzag": ["note", "card", "bubble"], "vee": ["tile", "badge"],
    "ring": ["icon-label", "bubble", "tile"], "snake": ["full", "step", "card"], "hook": ["banner", "full"],
}


def usages(layout_list, seed):
    rng = random.Random(seed)
    out = []
    for i in range(60):
        layout = layout_list[rng.randrange(len(layout_list))]
        family = layout["source"].split(":")[1]
        vgs = VG_BY_FAMILY[family]
        styles = STYLE_BY_FAMILY[family]
        infographic = f"ig-{i:03d}"
        # Most infographics reuse one VG design; some pair two.
        for vg in vgs[: 1 + (rng.random() < 0.3)]:
            out.append({"infographic": infographic, "layout_id": layout["id"], "vg_id": vg,
                        "connection_style": styles[0] if rng.random() < 0.7 else styles[1]})
    # Every design is used at least once.
    for j, vg in enumerate(sorted(VG_TEMPLATES)):
        family = next(f for f, v in VG_BY_FAMILY.items() if vg in v)
        layout = next(l for l in layout_list if l["source"] == f"synthetic:{family}")
        out.append({"infographic": f"ig-extra-{j:02d}", "layout_id": layout["id"], "vg_id": vg,
                    "connection_style": STYLE_BY_FAMILY[family][0]})
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("out", type=Path)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    for sub in ("vgs", "connections", "pivots"):
        (args.out / sub).mkdir(parents=True, exist_ok=True)
    for name, text in VG_TEMPLATES.items():
        (args.out / "vgs" / f"{name}.svg").write_text(text)
    for name, (body, w, h, _) in CONNECTION_SHAPES.items():
        (args.out / "connections" / f"{name}.svg").write_text(svg(w, h, [body]))
    for name, text in PIVOT_GRAPHICS.items():
        (args.out / "pivots" / f"{name}.svg").write_text(text)

    layout_list = layouts()
    manifest = {
        "version": "1.0.0",
        "layouts": layout_list,
        "vg_templates": [{"id": n, "file": f"vgs/{n}.svg", "source": "sample"} for n in VG_TEMPLATES],
        "connection_shapes": [{"id": n, "file": f"connections/{n}.svg", "styles": s[3]}
                              for n, s in CONNECTION_SHAPES.items()],
        "pivot_graphics": [{"id": n, "file": f"pivots/{n}.svg"} for n in PIVOT_GRAPHICS],
        "palettes": PALETTES,
        "usages": usages(layout_list, args.seed),
    }
    (args.out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    print(f"wrote {len(layout_list)} layouts, {len(VG_TEMPLATES)} VG templates to {args.out}")


if __name__ == "__main__":
    main()
