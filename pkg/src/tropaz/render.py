"""Deterministic SVG 1.1 pictures.

Coordinates are written with four decimals and elements are emitted in a
fixed order, so identical inputs give identical bytes.
"""

from __future__ import annotations

from fractions import Fraction

TYPE_COLORS = {"W": "#1f77b4", "S": "#d62728", "E": "#2ca02c", "N": "#ff7f0e"}
PHASE_COLORS = {"F": "#c6dbef", "Q": "#fdd0a2", "S": "#c7e9c0"}


def _f(x) -> str:
    return f"{float(x):.4f}"


class _Canvas:
    """Maps a world box onto a pixel box with the y axis pointing up."""

    def __init__(self, xmin, xmax, ymin, ymax, size=480, pad=20):
        self.xmin, self.ymin = float(xmin), float(ymin)
        span = max(float(xmax) - self.xmin, float(ymax) - self.ymin, 1e-9)
        self.scale = (size - 2 * pad) / span
        self.pad = pad
        self.w = 2 * pad + (float(xmax) - self.xmin) * self.scale
        self.h = 2 * pad + (float(ymax) - self.ymin) * self.scale
        self.items = []

    def xy(self, p):
        x = self.pad + (float(p[0]) - self.xmin) * self.scale
        y = self.h - self.pad - (float(p[1]) - self.ymin) * self.scale
        return _f(x), _f(y)

    def line(self, a, b, cls, color="#000000", width=1.5):
        (x1, y1), (x2, y2) = self.xy(a), self.xy(b)
        self.items.append(
            f'<line class="{cls}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{color}" stroke-width="{width}"/>'
        )

    def dot(self, p, cls, r=3.0, color="#000000", title=None):
        x, y = self.xy(p)
        body = f"<title>{title}</title>" if title is not None else ""
        self.items.append(f'<circle class="{cls}" cx="{x}" cy="{y}" r="{r}" fill="{color}">{body}</circle>')

    def polygon(self, pts, cls, fill, stroke="none"):
        coords = " ".join(",".join(self.xy(p)) for p in pts)
        self.items.append(f'<polygon class="{cls}" points="{coords}" fill="{fill}" stroke="{stroke}"/>')

    def rect(self, a, b, cls, fill, stroke="none"):
        (x1, y1), (x2, y2) = self.xy(a), self.xy(b)
        x, y = min(float(x1), float(x2)), min(float(y1), float(y2))
        w, h = abs(float(x2) - float(x1)), abs(float(y2) - float(y1))
        self.items.append(
            f'<rect class="{cls}" x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(h)}" fill="{fill}" stroke="{stroke}"/>'
        )

    def text(self, p, s, cls="label", size=10):
        x, y = self.xy(p)
        self.items.append(f'<text class="{cls}" x="{x}" y="{y}" font-size="{size}">{s}</text>')

    def document(self, title: str) -> str:
        head = (
            '<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_f(self.w)}" height="{_f(self.h)}" '
            f'viewBox="0 0 {_f(self.w)} {_f(self.h)}">\n<title>{title}</title>\n'
        )
        return head + "\n".join(self.items) + "\n</svg>\n"


def render_subdivision(sub) -> str:
    c = _Canvas(-sub.ell, 0, 0, sub.k)
    for e in sub.edges:
        c.line(e.a, e.b, "subedge")
    for mu in sorted(sub.vertices, key=lambda m: (m[1], m[0])):
        c.dot(mu, "subvertex", title=f"E*{mu} = {sub.estar[mu]}")
    return c.document("subdivision")


def _curve_box(curve):
    xs = [v.position[0] for v in curve.vertices]
    ys = [v.position[1] for v in curve.vertices]
    margin = max(Fraction(1), (max(xs) - min(xs)) / 4, (max(ys) - min(ys)) / 4)
    return min(xs) - margin, max(xs) + margin, min(ys) - margin, max(ys) + margin


def _clip_ray(p, d, box):
    """Point where the ray p + t d (t > 0) leaves the box."""
    xmin, xmax, ymin, ymax = box
    ts = []
    if d[0] > 0:
        ts.append((xmax - p[0]) / d[0])
    if d[0] < 0:
        ts.append((xmin - p[0]) / d[0])
    if d[1] > 0:
        ts.append((ymax - p[1]) / d[1])
    if d[1] < 0:
        ts.append((ymin - p[1]) / d[1])
    t = min(ts)
    return (p[0] + t * d[0], p[1] + t * d[1])


def render_curve(curve) -> str:
    box = _curve_box(curve)
    c = _Canvas(*box)
    for e in curve.bounded_edges:
        c.line(curve.vertices[e.v_from].position, curve.vertices[e.v_to].position, "edge")
    for lf in curve.leaves:
        p = curve.vertices[lf.vertex].position
        d = (-lf.eta_in[0], -lf.eta_in[1])
        c.line(p, _clip_ray(p, d, box), "leaf", color="#555555", width=1.0)
    for v in curve.vertices:
        c.dot(v.position, "vertex")
    return c.document("tropical curve")


def _phase_class(mu, k, ell):
    corners = {(0, 0), (-ell, 0), (0, k), (-ell, k)}
    if tuple(mu) in corners:
        return "F"
    if mu[0] in (0, -ell) or mu[1] in (0, k):
        return "Q"
    return "S"


def render_arctic(geom, k: int, ell: int) -> str:
    c = _Canvas(Fraction(-1, ell), 0, Fraction(-1, k), 0)
    c.rect((Fraction(-1, ell), Fraction(-1, k)), (0, 0), "domain", "none", stroke="#000000")
    for mu, reg in sorted(geom.regions.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        if reg["empty"]:
            continue
        cls = _phase_class(mu, k, ell)
        c.polygon(reg["polygon"], f"region region-{cls}", PHASE_COLORS[cls])
    for s in geom.segments:
        if s["a"] != s["b"]:
            c.line(s["a"], s["b"], "segment", color="#000000", width=2.0)
    return c.document("arctic curve")


def render_limitshape(grid: dict) -> str:
    """Cells coloured by height; `grid` holds u, v node lists and a values matrix (None off-domain)."""
    us, vs, vals = grid["u"], grid["v"], grid["values"]
    flat = [float(x) for row in vals for x in row if x is not None]
    lo, hi = (min(flat), max(flat)) if flat else (0.0, 1.0)
    span = hi - lo or 1.0
    du = (us[-1] - us[0]) / max(1, len(us) - 1) if len(us) > 1 else Fraction(1)
    dv = (vs[-1] - vs[0]) / max(1, len(vs) - 1) if len(vs) > 1 else Fraction(1)
    c = _Canvas(us[0] - du / 2, us[-1] + du / 2, vs[0] - dv / 2, vs[-1] + dv / 2)
    for r, v in enumerate(vs):
        for s, u in enumerate(us):
            x = vals[r][s]
            if x is None:
                continue
            g = int(round(255 * (float(x) - lo) / span))
            c.rect((u - du / 2, v - dv / 2), (u + du / 2, v + dv / 2), "cell", f"#{g:02x}{g:02x}{255 - g:02x}")
    return c.document("limit shape")


def render_sample(graph, cover, segments=()) -> str:
    """Dimers of an Aztec cover coloured by type; arctic segments in face coordinates."""
    n = graph.n
    k, ell = graph.domain.k, graph.domain.ell
    c = _Canvas(-1, 2 * n + 1, -1, 2 * n + 1, size=max(480, 12 * n))
    for t in sorted(cover):
        e = graph.edges[t]
        c.line(e.black_pos(), e.white_pos(), f"dimer dimer-{e.type}", color=TYPE_COLORS[e.type], width=3.0)
    for a, b in segments:
        pa = (-2 * ell * n * a[0], -2 * k * n * a[1])
        pb = (-2 * ell * n * b[0], -2 * k * n * b[1])
        c.line(pa, pb, "segment", color="#000000", width=1.5)
    return c.document("aztec sample")
