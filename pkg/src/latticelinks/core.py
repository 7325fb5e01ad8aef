"""Lattice links: representation, validation, symmetry and the link file format.

A link is stored as corner vertices only.  Sticks are the maximal
axis-parallel segments between consecutive corners, so a valid component
never has two consecutive collinear edges.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, NamedTuple, Sequence

__all__ = [
    "Axis",
    "AxisCounts",
    "Component",
    "InvalidLinkError",
    "LatticeLink",
    "LatticePoint",
    "LatticeSymmetry",
    "LinkFormatError",
    "Stick",
    "ValidationReport",
    "Violation",
    "apply_symmetry",
    "canonicalize",
    "component_counts",
    "component_profile_check",
    "linear_symmetries",
    "parse_link",
    "profile_rule",
    "serialize_link",
    "stick_counts",
    "stick_decomposition",
    "total_curvature",
    "validate",
]

HEADER = "latticelink v1"

LatticePoint = tuple  # (x, y, z) of ints


class Axis(IntEnum):
    X = 0
    Y = 1
    Z = 2


class LinkFormatError(ValueError):
    """Raised when link text is not a well-formed ``latticelink v1`` document."""


class InvalidLinkError(ValueError):
    """Raised when an operation requires a valid lattice link."""

    def __init__(self, report: "ValidationReport"):
        super().__init__("invalid lattice link: " + "; ".join(str(v) for v in report.violations))
        self.report = report


class AxisCounts(NamedTuple):
    x_count: int
    y_count: int
    z_count: int

    @property
    def total(self) -> int:
        return self.x_count + self.y_count + self.z_count

    def permuted(self, perm: Sequence[int]) -> "AxisCounts":
        return AxisCounts(*(self[p] for p in perm))


@dataclass(frozen=True)
class Stick:
    axis: Axis
    start: LatticePoint
    end: LatticePoint

    def __post_init__(self):
        diff = [i for i in range(3) if self.start[i] != self.end[i]]
        if diff != [int(self.axis)]:
            raise ValueError(f"stick {self.start}->{self.end} is not parallel to {self.axis.name}")

    @property
    def length(self) -> int:
        return abs(self.end[self.axis] - self.start[self.axis])


@dataclass(frozen=True)
class Component:
    """A closed lattice polygon given by its corners in traversal order."""

    vertices: tuple

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(tuple(int(c) for c in v) for v in self.vertices))

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self):
        vs = self.vertices
        return [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def axes(self) -> list:
        """Axis index of each edge, or ``None`` for edges that are not axis-parallel."""
        out = []
        for a, b in self.edges():
            diff = [i for i in range(3) if a[i] != b[i]]
            out.append(diff[0] if len(diff) == 1 else None)
        return out

    def reversed(self) -> "Component":
        return Component(self.vertices[::-1])


@dataclass(frozen=True)
class LatticeLink:
    components: tuple

    def __post_init__(self):
        comps = tuple(c if isinstance(c, Component) else Component(c) for c in self.components)
        object.__setattr__(self, "components", comps)

    @classmethod
    def from_vertices(cls, *components: Iterable) -> "LatticeLink":
        return cls(tuple(Component(tuple(c)) for c in components))

    def __len__(self) -> int:
        return len(self.components)

    @property
    def stick_number(self) -> int:
        return sum(len(c) for c in self.components)

    def points(self):
        return [v for c in self.components for v in c.vertices]


# --------------------------------------------------------------------------
# file format


def parse_link(text: str) -> LatticeLink:
    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines or lines[0] != HEADER:
        raise LinkFormatError(f"missing header line {HEADER!r}")
    comps = []
    for lineno, line in enumerate(lines[1:], start=2):
        verts = []
        for tok in line.split():
            parts = tok.split(",")
            if len(parts) != 3:
                raise LinkFormatError(f"line {lineno}: malformed vertex {tok!r}")
            try:
                verts.append(tuple(int(p) for p in parts))
            except ValueError:
                raise LinkFormatError(f"line {lineno}: non-integer coordinate in {tok!r}") from None
        if len(verts) < 4:
            raise LinkFormatError(f"line {lineno}: component has {len(verts)} vertices, need at least 4")
        comps.append(Component(tuple(verts)))
    if not comps:
        raise LinkFormatError("link has no components")
    return LatticeLink(tuple(comps))


def _vertex_str(v) -> str:
    return f"{v[0]},{v[1]},{v[2]}"


def serialize_link(link: LatticeLink) -> str:
    """Text form of ``link``; components are written in stored order."""
    body = "\n".join(" ".join(_vertex_str(v) for v in c.vertices) for c in link.components)
    return f"{HEADER}\n{body}\n"


# --------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    kind: str
    component: int
    detail: str

    def __str__(self) -> str:
        return f"{self.kind} (component {self.component}): {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def kinds(self) -> set:
        return {v.kind for v in self.violations}


def _segment_points(a, b):
    axis = next(i for i in range(3) if a[i] != b[i])
    step = 1 if b[axis] > a[axis] else -1
    p = list(a)
    out = []
    for t in range(a[axis], b[axis] + step, step):
        p[axis] = t
        out.append(tuple(p))
    return out


def validate(link: LatticeLink) -> ValidationReport:
    violations = []
    if not link.components:
        violations.append(Violation("empty-link", -1, "no components"))
    geometric = True
    for ci, comp in enumerate(link.components):
        n = len(comp)
        if n < 4:
            violations.append(Violation("too-few-vertices", ci, f"{n} vertices"))
        axes = comp.axes()
        for i, ax in enumerate(axes):
            if ax is None:
                a, b = comp.edges()[i]
                kind = "zero-length-edge" if a == b else "non-axis-edge"
                violations.append(Violation(kind, ci, f"edge {a}->{b}"))
                geometric = False
        if not geometric:
            continue
        for i in range(n):
            if axes[i] == axes[(i + 1) % n]:
                v = comp.vertices[(i + 1) % n]
                violations.append(Violation("collinear-adjacent-edges", ci, f"at vertex {v}"))
    if not geometric:
        return ValidationReport(tuple(violations))

    # every lattice point on a stick, with the sticks covering it
    cover = {}
    for ci, comp in enumerate(link.components):
        for si, (a, b) in enumerate(comp.edges()):
            for p in _segment_points(a, b):
                cover.setdefault(p, []).append((ci, si))
    for p, owners in cover.items():
        if len(owners) == 1:
            continue
        comps = {c for c, _ in owners}
        if len(comps) > 1:
            violations.append(Violation("inter-component-intersection", min(comps), f"at point {p}"))
            continue
        ci = owners[0][0]
        comp = link.components[ci]
        n = len(comp)
        legal = False
        if len(owners) == 2:
            (_, s1), (_, s2) = owners
            # adjacent sticks meeting at their shared corner
            if (s2 - s1) % n == 1 and comp.vertices[s2] == p:
                legal = True
            elif (s1 - s2) % n == 1 and comp.vertices[s1] == p:
                legal = True
        if not legal:
            violations.append(Violation("self-intersection", ci, f"at point {p}"))
    return ValidationReport(tuple(violations))


@functools.lru_cache(maxsize=256)
def _is_valid(link: LatticeLink) -> bool:
    # projections and invariants re-check the same link several times
    return validate(link).ok


def _require_valid(link: LatticeLink) -> None:
    if not _is_valid(link):
        raise InvalidLinkError(validate(link))


# --------------------------------------------------------------------------
# sticks and counts


def stick_decomposition(component: Component) -> list:
    report = validate(LatticeLink((component,)))
    if not report.ok:
        raise InvalidLinkError(report)
    return [Stick(Axis(ax), a, b) for ax, (a, b) in zip(component.axes(), component.edges())]


def component_counts(component: Component) -> AxisCounts:
    counts = [0, 0, 0]
    for ax in component.axes():
        if ax is None:
            raise InvalidLinkError(validate(LatticeLink((component,))))
        counts[ax] += 1
    return AxisCounts(*counts)


def stick_counts(link: LatticeLink) -> AxisCounts:
    _require_valid(link)
    totals = [0, 0, 0]
    for comp in link.components:
        for i, c in enumerate(component_counts(comp)):
            totals[i] += c
    return AxisCounts(*totals)


def profile_rule(counts: Sequence[int]) -> bool:
    """Necessary per-component stick profile: each axis count is not 1 and at
    most half the total, and the total is 4 or at least 6."""
    total = sum(counts)
    if total != 4 and total < 6:
        return False
    return all(c != 1 and 2 * c <= total for c in counts)


def component_profile_check(link: LatticeLink) -> bool:
    _require_valid(link)
    return all(profile_rule(component_counts(c)) for c in link.components)


def total_curvature(link: LatticeLink) -> int:
    """Total curvature in quarter-turns: every corner turns by pi/2."""
    _require_valid(link)
    return link.stick_number


# --------------------------------------------------------------------------
# symmetry


@dataclass(frozen=True)
class LatticeSymmetry:
    """p -> q with q[i] = signs[i] * p[perm[i]] + translation[i]."""

    perm: tuple = (0, 1, 2)
    signs: tuple = (1, 1, 1)
    translation: tuple = (0, 0, 0)

    def __post_init__(self):
        if sorted(self.perm) != [0, 1, 2] or any(s not in (1, -1) for s in self.signs):
            raise ValueError(f"not a signed axis permutation: {self.perm}, {self.signs}")

    @property
    def determinant(self) -> int:
        inversions = sum(1 for i, j in itertools.combinations(range(3), 2) if self.perm[i] > self.perm[j])
        d = -1 if inversions % 2 else 1
        for s in self.signs:
            d *= s
        return d

    def __call__(self, p) -> LatticePoint:
        pm, sg, t = self.perm, self.signs, self.translation
        return (sg[0] * p[pm[0]] + t[0], sg[1] * p[pm[1]] + t[1], sg[2] * p[pm[2]] + t[2])

    def compose(self, other: "LatticeSymmetry") -> "LatticeSymmetry":
        """``self ∘ other``: apply ``other`` first."""
        pg, sg, tg = other.perm, other.signs, other.translation
        ph, sh, th = self.perm, self.signs, self.translation
        return LatticeSymmetry(
            tuple(pg[ph[j]] for j in range(3)),
            tuple(sh[j] * sg[ph[j]] for j in range(3)),
            tuple(sh[j] * tg[ph[j]] + th[j] for j in range(3)),
        )

    def with_translation(self, t) -> "LatticeSymmetry":
        return LatticeSymmetry(self.perm, self.signs, tuple(t))


_LINEAR = tuple(
    LatticeSymmetry(perm, signs)
    for perm in itertools.permutations(range(3))
    for signs in itertools.product((1, -1), repeat=3)
)


def linear_symmetries() -> tuple:
    """The 48 signed axis permutations (the identity first)."""
    return _LINEAR


def apply_symmetry(link: LatticeLink, g: LatticeSymmetry) -> LatticeLink:
    return LatticeLink(tuple(Component(tuple(g(v) for v in c.vertices)) for c in link.components))


def _min_rotation(seq, key):
    n = len(seq)
    i = min(range(n), key=lambda j: key(seq[j]))
    fwd = [seq[(i + k) % n] for k in range(n)]
    bwd = [seq[(i - k) % n] for k in range(n)]
    return tuple(fwd) if [key(v) for v in fwd] <= [key(v) for v in bwd] else tuple(bwd)


def _canonical_comps(comps, maps):
    """Minimal normalized image of ``comps`` (tuples of vertex tuples) over ``maps``."""
    best = None
    best_key = None
    for g in maps:
        pm, sg = g.perm, g.signs
        imgs = [
            [(sg[0] * v[pm[0]], sg[1] * v[pm[1]], sg[2] * v[pm[2]]) for v in c]
            for c in comps
        ]
        lo = [min(v[i] for c in imgs for v in c) for i in range(3)]
        imgs = [[(v[0] - lo[0], v[1] - lo[1], v[2] - lo[2]) for v in c] for c in imgs]
        hi = max(max(v) for c in imgs for v in c)
        if hi <= 9:
            # single-digit coordinates: tuple order equals byte order of the text form
            rot = sorted(_min_rotation(c, _identity) for c in imgs)
            key = rot
        else:
            rot = [_min_rotation(c, _vertex_str) for c in imgs]
            lines = sorted((" ".join(_vertex_str(v) for v in c), c) for c in rot)
            rot = [c for _, c in lines]
            key = "\n".join(s for s, _ in lines)
            key = key.encode()
        if best is None or _key_less(key, best_key):
            best, best_key = rot, key
    return tuple(tuple(c) for c in best)


def _identity(v):
    return v


def _key_less(a, b) -> bool:
    if type(a) is type(b):
        return a < b
    # mixed fast/slow keys: fall back to comparing the text form
    return _as_bytes(a) < _as_bytes(b)


def _as_bytes(key) -> bytes:
    if isinstance(key, bytes):
        return key
    return "\n".join(" ".join(_vertex_str(v) for v in c) for c in key).encode()


def symmetries_preserving(counts: Sequence[int]) -> tuple:
    """Linear symmetries whose axis permutation leaves ``counts`` unchanged."""
    return tuple(g for g in _LINEAR if all(counts[g.perm[i]] == counts[i] for i in range(3)))


def canonicalize(link: LatticeLink, *, preserve_counts: bool = False) -> LatticeLink:
    """Distinguished representative of the orbit of ``link`` under lattice
    symmetries, translations, cyclic shifts and reversals of components and
    reordering of components.

    With ``preserve_counts`` the orbit is restricted to images with the same
    per-axis stick counts as ``link``.
    """
    comps = [c.vertices for c in link.components]
    if preserve_counts:
        maps = symmetries_preserving(stick_counts(link))
    else:
        maps = _LINEAR
    return LatticeLink(tuple(Component(c) for c in _canonical_comps(comps, maps)))
