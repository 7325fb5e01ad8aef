"""Planar diagrams of lattice links.

Projecting along an axis ``a`` uses the right-handed frame ``(u, v, h)``
obtained by cyclically rotating the coordinates so that ``h`` is ``a``.  A
point maps to ``(S*u + h, S*v + h)`` with ``S = 4 * (h-extent + 1)``:
u-sticks become horizontal segments, v-sticks vertical segments and h-sticks
short slope-1 diagonals.  All arithmetic is on integers.

For a valid link the only crossings are between a horizontal and a vertical
segment; a diagonal can meet another segment only at a shared corner.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .core import Axis, LatticeLink, _require_valid

__all__ = [
    "Crossing",
    "Diagram",
    "GenericityError",
    "PDCode",
    "Segment",
    "crossings",
    "diagram_to_svg",
    "pd_code",
    "pd_from_text",
    "pd_signs",
    "pd_to_text",
    "pd_writhe",
    "projection_frame",
    "sheared_projection",
    "simplify_r1_r2",
    "writhe",
]


class GenericityError(AssertionError):
    """The projected diagram is not generic; indicates a defect, not bad input."""


def projection_frame(axis) -> tuple:
    """Coordinate indices ``(u, v, h)`` for projecting along ``axis``."""
    a = int(Axis(axis))
    return ((a + 1) % 3, (a + 2) % 3, a)


@dataclass(frozen=True)
class Segment:
    component: int
    index: int  # stick index within the component
    start: tuple  # projected integer point
    end: tuple
    kind: str  # "h" horizontal, "v" vertical, "d" diagonal
    height: int  # height of a horizontal/vertical segment (constant)

    def direction(self) -> tuple:
        dx = self.end[0] - self.start[0]
        dy = self.end[1] - self.start[1]
        return ((dx > 0) - (dx < 0), (dy > 0) - (dy < 0))


@dataclass(frozen=True)
class Crossing:
    over: tuple  # (component, segment index)
    under: tuple
    sign: int
    position: tuple

    @property
    def components(self) -> tuple:
        return (self.over[0], self.under[0])


@dataclass(frozen=True)
class Diagram:
    axis: Axis
    scale: int
    strands: tuple  # per component: tuple of Segment
    crossings: tuple = field(default=())

    @property
    def n_components(self) -> int:
        return len(self.strands)


def sheared_projection(link: LatticeLink, axis=Axis.Z, *, check: bool = True) -> Diagram:
    _require_valid(link)
    iu, iv, ih = projection_frame(axis)
    heights = [v[ih] for v in link.points()]
    scale = 4 * (max(heights) - min(heights) + 1)

    def proj(p):
        return (scale * p[iu] + p[ih], scale * p[iv] + p[ih])

    strands = []
    for ci, comp in enumerate(link.components):
        segs = []
        for si, ((a, b), ax) in enumerate(zip(comp.edges(), comp.axes())):
            kind = "h" if ax == iu else ("v" if ax == iv else "d")
            segs.append(Segment(ci, si, proj(a), proj(b), kind, a[ih]))
        strands.append(tuple(segs))
    strands = tuple(strands)
    found = _find_crossings(strands)
    diagram = Diagram(Axis(axis), scale, strands, found)
    if check:
        assert_generic(diagram)
    return diagram


def _cross(a, b) -> int:
    return a[0] * b[1] - a[1] * b[0]


def _find_crossings(strands) -> tuple:
    horiz = [s for st in strands for s in st if s.kind == "h"]
    vert = [s for st in strands for s in st if s.kind == "v"]
    out = []
    for h in horiz:
        y = h.start[1]
        x0, x1 = sorted((h.start[0], h.end[0]))
        for v in vert:
            x = v.start[0]
            if not x0 < x < x1:
                continue
            y0, y1 = sorted((v.start[1], v.end[1]))
            if not y0 < y < y1:
                continue
            if h.height == v.height:
                raise GenericityError(f"segments of equal height cross at {(x, y)}")
            over, under = (h, v) if h.height > v.height else (v, h)
            sign = 1 if _cross(over.direction(), under.direction()) > 0 else -1
            out.append(Crossing((over.component, over.index), (under.component, under.index), sign, (x, y)))
    out.sort(key=lambda c: c.position)
    return tuple(out)


def crossings(diagram: Diagram) -> list:
    return list(diagram.crossings)


def writhe(diagram: Diagram) -> int:
    return sum(c.sign for c in diagram.crossings)


def _segments_meet(s, t):
    """Intersection of two closed segments with integer endpoints.

    Returns ``None``, ``("point", p)`` with ``p`` a pair of Fractions, or
    ``("overlap", None)`` for collinear overlap.
    """
    from fractions import Fraction

    p, r = s.start, (s.end[0] - s.start[0], s.end[1] - s.start[1])
    q, u = t.start, (t.end[0] - t.start[0], t.end[1] - t.start[1])
    qp = (q[0] - p[0], q[1] - p[1])
    denom = _cross(r, u)
    if denom == 0:
        if _cross(qp, r) != 0:
            return None
        rr = r[0] * r[0] + r[1] * r[1]
        t0 = Fraction(qp[0] * r[0] + qp[1] * r[1], rr)
        t1 = t0 + Fraction(u[0] * r[0] + u[1] * r[1], rr)
        lo, hi = min(t0, t1), max(t0, t1)
        if hi < 0 or lo > 1:
            return None
        if hi == 0 or lo == 1:
            pt = p if hi == 0 else s.end
            return ("point", (Fraction(pt[0]), Fraction(pt[1])))
        return ("overlap", None)
    tt = Fraction(_cross(qp, u), denom)
    ss = Fraction(_cross(qp, r), denom)
    if 0 <= tt <= 1 and 0 <= ss <= 1:
        return ("point", (p[0] + tt * r[0], p[1] + tt * r[1]))
    return None


def assert_generic(diagram: Diagram) -> None:
    """Brute-force check over all segment pairs, in exact arithmetic.

    Allowed contacts: the shared corner of consecutive segments of one
    component, and transversal interior crossings of a horizontal with a
    vertical segment at distinct heights.  No point may lie on three segments.
    """
    segs = [s for st in diagram.strands for s in st]
    hits = {}
    ncross = 0
    for i in range(len(segs)):
        s = segs[i]
        for j in range(i + 1, len(segs)):
            t = segs[j]
            meet = _segments_meet(s, t)
            if meet is None:
                continue
            kind, pt = meet
            if kind == "overlap":
                raise GenericityError(f"overlapping segments {s} {t}")
            consecutive = s.component == t.component and (
                (t.index - s.index) % len(diagram.strands[s.component]) in (1, len(diagram.strands[s.component]) - 1)
            )
            s_ends = pt in (s.start, s.end)
            t_ends = pt in (t.start, t.end)
            if consecutive and s_ends and t_ends:
                shared = s.end if (t.index - s.index) % len(diagram.strands[s.component]) == 1 else s.start
                if pt == shared:
                    continue
            if s_ends or t_ends:
                raise GenericityError(f"segment endpoint touches another segment at {pt}")
            if {s.kind, t.kind} != {"h", "v"}:
                raise GenericityError(f"non-transversal crossing at {pt}")
            ncross += 1
            hits[pt] = hits.get(pt, 0) + 1
    if any(k > 1 for k in hits.values()):
        raise GenericityError("triple point in diagram")
    if ncross != len(diagram.crossings):
        raise GenericityError("crossing list disagrees with brute-force intersection count")


# --------------------------------------------------------------------------
# PD codes


@dataclass(frozen=True)
class PDCode:
    """Planar diagram code.

    Each crossing lists four edge labels counterclockwise starting from the
    incoming under-edge.  ``signs`` holds the crossing signs for the stored
    orientation and ``loops`` counts crossing-free closed components.
    """

    crossings: tuple
    signs: tuple
    loops: int = 0

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(tuple(x) for x in self.crossings))
        object.__setattr__(self, "signs", tuple(self.signs))
        if len(self.signs) != len(self.crossings):
            raise ValueError("one sign per crossing required")

    def __len__(self) -> int:
        return len(self.crossings)

    def labels(self) -> set:
        return {lab for x in self.crossings for lab in x}


def pd_writhe(pd: PDCode) -> int:
    return sum(pd.signs)


def pd_code(diagram: Diagram) -> PDCode:
    """Edges are labelled 1, 2, ... in traversal order of each component."""
    passes = {ci: [] for ci in range(diagram.n_components)}
    for k, c in enumerate(diagram.crossings):
        for role, (ci, si) in (("over", c.over), ("under", c.under)):
            seg = diagram.strands[ci][si]
            # distance of the crossing from the segment start along the segment
            t = abs(c.position[0] - seg.start[0]) + abs(c.position[1] - seg.start[1])
            passes[ci].append(((si, t), k, role))
    inc = {}
    out = {}
    label = 1
    loops = 0
    for ci in range(diagram.n_components):
        seq = sorted(passes[ci])
        if not seq:
            loops += 1
            continue
        n = len(seq)
        for i, (_, k, role) in enumerate(seq):
            inc[(k, role)] = label + i
            out[(k, role)] = label + (i + 1) % n
        label += n
    xs = []
    signs = []
    for k, c in enumerate(diagram.crossings):
        ui, uo = inc[(k, "under")], out[(k, "under")]
        oi, oo = inc[(k, "over")], out[(k, "over")]
        xs.append((ui, oo, uo, oi) if c.sign > 0 else (ui, oi, uo, oo))
        signs.append(c.sign)
    return PDCode(tuple(xs), tuple(signs), loops)


def _occurrences(crossings) -> dict:
    occ = {}
    for k, x in enumerate(crossings):
        for p, lab in enumerate(x):
            occ.setdefault(lab, []).append((k, p))
    for lab, places in occ.items():
        if len(places) != 2:
            raise ValueError(f"label {lab} appears {len(places)} times")
    return occ


def pd_signs(crossings) -> tuple:
    """Crossing signs for an orientation consistent with the under-strands.

    Under-strands run from position 0 to position 2.  Components that pass
    only over are oriented to enter at the smaller of their two labels.
    """
    crossings = [tuple(x) for x in crossings]
    occ = _occurrences(crossings)
    over_dir = {}
    visited = set()

    def walk(k, p):
        while (k, p) not in visited:
            visited.add((k, p))
            if p % 2:
                over_dir[k] = 1 if p == 1 else -1
            elif p != 0:
                raise ValueError("under-strand does not run from position 0 to 2")
            leave = (k, (p + 2) % 4)
            a, b = occ[crossings[k][leave[1]]]
            k, p = b if a == leave else a

    for k in range(len(crossings)):
        if (k, 0) not in visited:
            walk(k, 0)
    for k, x in enumerate(crossings):
        if k not in over_dir:
            walk(k, 1 if x[1] <= x[3] else 3)
    # an over-strand running 3 -> 1 is a positive crossing
    return tuple(1 if over_dir[k] == -1 else -1 for k in range(len(crossings)))


def pd_to_text(pd: PDCode) -> str:
    terms = [f"X({a},{b},{c},{d})" for a, b, c, d in pd.crossings] + ["O"] * pd.loops
    return " ".join(terms)


def pd_from_text(text: str) -> PDCode:
    import re

    xs = [tuple(int(v) for v in m.group(1).split(",")) for m in re.finditer(r"X\(([-\d,\s]+)\)", text)]
    loops = len(re.findall(r"\bO\b", text))
    return PDCode(tuple(xs), pd_signs(xs) if xs else (), loops)


def _faces(crossings) -> list:
    """Faces as lists of (crossing, position) departures."""
    occ = _occurrences(crossings)
    seen = set()
    faces = []
    for k in range(len(crossings)):
        for p in range(4):
            if (k, p) in seen:
                continue
            face = []
            cur = (k, p)
            while cur not in seen:
                seen.add(cur)
                face.append(cur)
                lab = crossings[cur[0]][cur[1]]
                a, b = occ[lab]
                arrive = b if a == cur else a
                cur = (arrive[0], (arrive[1] - 1) % 4)
            faces.append(face)
    return faces


def _remove(pd: PDCode, drop: set) -> PDCode:
    """Delete crossings ``drop`` and splice the strands through them."""
    xs = pd.crossings
    occ = _occurrences(xs)
    external = {lab for lab, places in occ.items() if any(k not in drop for k, _ in places)}
    merge = {}
    visited = set()
    loops = pd.loops
    for k in drop:
        for p in range(4):
            if (k, p) in visited:
                continue
            lab = xs[k][p]
            if lab not in external:
                continue
            # walk inward from this occurrence to the next external occurrence
            cur = (k, p)
            while True:
                visited.add(cur)
                nxt = (cur[0], (cur[1] + 2) % 4)
                visited.add(nxt)
                lab2 = xs[nxt[0]][nxt[1]]
                if lab2 in external:
                    break
                a, b = occ[lab2]
                cur = b if a == nxt else a
            merge[lab2] = lab
    # closed chains made only of internal edges
    for k in drop:
        for p in range(4):
            if (k, p) in visited:
                continue
            cur = (k, p)
            while cur not in visited:
                visited.add(cur)
                nxt = (cur[0], (cur[1] + 2) % 4)
                visited.add(nxt)
                a, b = occ[xs[nxt[0]][nxt[1]]]
                cur = b if a == nxt else a
            loops += 1

    def find(lab):
        while lab in merge:
            lab = merge[lab]
        return lab

    kept = [k for k in range(len(xs)) if k not in drop]
    new = tuple(tuple(find(lab) for lab in xs[k]) for k in kept)
    return PDCode(new, tuple(pd.signs[k] for k in kept), loops)


def _relabel(pd: PDCode) -> PDCode:
    order = {}
    for x in pd.crossings:
        for lab in x:
            order.setdefault(lab, len(order) + 1)
    return PDCode(tuple(tuple(order[l] for l in x) for x in pd.crossings), pd.signs, pd.loops)


def _find_r1(xs) -> Optional[int]:
    for k, x in enumerate(xs):
        for p in range(4):
            if x[p] == x[(p + 1) % 4]:
                return k
    return None


def _find_r2(xs) -> Optional[tuple]:
    for face in _faces(xs):
        if len(face) != 2:
            continue
        (k1, p1), (k2, p2) = face
        if k1 == k2:
            continue
        e1, e2 = xs[k1][p1], xs[k2][p2]
        # each bigon edge must be over at both of its ends or under at both
        ok = True
        for e in (e1, e2):
            roles = {p % 2 for k in (k1, k2) for p in range(4) if xs[k][p] == e}
            if len(roles) != 1:
                ok = False
        if ok:
            return (k1, k2)
    return None


def simplify_r1_r2(pd: PDCode) -> PDCode:
    """Remove Reidemeister I kinks and Reidemeister II bigons until none remain.

    A diagram with no such pattern is returned unchanged; otherwise the
    labels of the result are renumbered from 1.
    """
    start = pd
    while True:
        k = _find_r1(pd.crossings)
        if k is not None:
            pd = _remove(pd, {k})
            continue
        pair = _find_r2(pd.crossings)
        if pair is not None:
            pd = _remove(pd, set(pair))
            continue
        return start if pd is start else _relabel(pd)


# --------------------------------------------------------------------------
# SVG


def diagram_to_svg(diagram: Diagram, stroke: float = 1.0) -> str:
    pts = [p for st in diagram.strands for s in st for p in (s.start, s.end)]
    lo_x = min(p[0] for p in pts) - 2
    lo_y = min(p[1] for p in pts) - 2
    w = max(p[0] for p in pts) - lo_x + 2
    h = max(p[1] for p in pts) - lo_y + 2
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"]
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}" width="{w * 4}" height="{h * 4}">',
    ]
    gap = diagram.scale / 8
    under_at = {}
    for c in diagram.crossings:
        under_at.setdefault(c.under, []).append(c.position)
    for ci, st in enumerate(diagram.strands):
        col = colors[ci % len(colors)]
        for s in st:
            x1, y1 = s.start[0] - lo_x, h - (s.start[1] - lo_y)
            x2, y2 = s.end[0] - lo_x, h - (s.end[1] - lo_y)
            lines.append(
                f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{col}" stroke-width="{stroke}"/>'
            )
            for pos in under_at.get((ci, s.index), ()):
                px, py = pos[0] - lo_x, h - (pos[1] - lo_y)
                lines.append(f'<circle cx="{px}" cy="{py}" r="{gap}" fill="white"/>')
    # redraw over-strands through the gaps
    for c in diagram.crossings:
        s = diagram.strands[c.over[0]][c.over[1]]
        col = colors[c.over[0] % len(colors)]
        px, py = c.position[0] - lo_x, h - (c.position[1] - lo_y)
        dx, dy = s.direction()
        lines.append(
            f'<line x1="{px - dx * gap}" y1="{py + dy * gap}" x2="{px + dx * gap}" y2="{py - dy * gap}" '
            f'stroke="{col}" stroke-width="{stroke}"/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
