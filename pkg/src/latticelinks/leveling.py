"""Proper and extended proper levelness, and the leveling transform.

A level of an axis is a plane on which that axis' coordinate is constant.
Sticks along the other two axes lie inside a single level; the part of the
link inside a level splits into *portions*, each either an arc whose ends are
endpoints of sticks along the axis, or a whole component.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .core import Axis, Component, LatticeLink, _require_valid, _vertex_str

__all__ = [
    "LevelMap",
    "LevelingError",
    "is_extended_properly_leveled",
    "is_properly_leveled",
    "level_all",
    "level_axis",
    "level_map",
    "portions",
]

log = logging.getLogger(__name__)


class LevelingError(RuntimeError):
    pass


@dataclass(frozen=True)
class LevelMap:
    axis: Axis
    endpoint_counts: dict  # level -> number of axis-stick endpoints
    whole_components: dict  # level -> tuple of component indices

    @property
    def levels(self) -> list:
        return sorted(set(self.endpoint_counts) | set(self.whole_components))

    def endpoints(self, level: int) -> int:
        return self.endpoint_counts.get(level, 0)

    def whole(self, level: int) -> tuple:
        return self.whole_components.get(level, ())


def level_map(link: LatticeLink, axis) -> LevelMap:
    _require_valid(link)
    axis = Axis(axis)
    counts = {}
    whole = {}
    for ci, comp in enumerate(link.components):
        vs = comp.vertices
        axes = comp.axes()
        if axis not in axes:
            lvl = vs[0][axis]
            whole.setdefault(lvl, []).append(ci)
            continue
        n = len(vs)
        for i in range(n):
            lvl = vs[i][axis]
            counts.setdefault(lvl, 0)
            # a vertex is an endpoint of an axis-stick if either incident edge is one
            if axes[i] == axis or axes[i - 1] == axis:
                counts[lvl] += 1
    return LevelMap(axis, counts, {k: tuple(v) for k, v in whole.items()})


def is_properly_leveled(link: LatticeLink, axis) -> bool:
    lm = level_map(link, axis)
    return all(lm.endpoints(k) == 2 and not lm.whole(k) for k in lm.levels)


def is_extended_properly_leveled(link: LatticeLink, axis) -> bool:
    lm = level_map(link, axis)
    for k in lm.levels:
        e, w = lm.endpoints(k), len(lm.whole(k))
        if not ((e == 2 and w == 0) or (e == 0 and w == 1)):
            return False
    return True


def portions(link: LatticeLink, axis) -> list:
    """All portions as ``(level, component index, vertex indices)``.

    Vertex indices of an arc run in traversal order between its two ends.
    """
    axis = Axis(axis)
    out = []
    for ci, comp in enumerate(link.components):
        vs = comp.vertices
        n = len(vs)
        axes = comp.axes()
        if axis not in axes:
            out.append((vs[0][axis], ci, tuple(range(n))))
            continue
        # edge i joins vertex i to i+1; start right after an axis edge
        start = next(i for i in range(n) if axes[i] == axis) + 1
        run = []
        for k in range(n):
            i = (start + k) % n
            run.append(i)
            if axes[i] == axis:
                out.append((vs[run[0]][axis], ci, tuple(run)))
                run = []
    return out


def _portion_key(link: LatticeLink, ci: int, idx: tuple) -> str:
    vs = link.components[ci].vertices
    fwd = " ".join(_vertex_str(vs[i]) for i in idx)
    bwd = " ".join(_vertex_str(vs[i]) for i in reversed(idx))
    return min(fwd, bwd)


def level_axis(link: LatticeLink, axis) -> LatticeLink:
    """Spread the portions of every level onto consecutive fresh levels.

    Portions sharing a level are stacked in increasing order of their text
    form; every axis-stick is stretched to stay attached.  Levels are
    renumbered ``1..N`` along ``axis``; the other coordinates do not move.
    """
    _require_valid(link)
    axis = Axis(axis)
    parts = portions(link, axis)
    parts.sort(key=lambda p: (p[0], _portion_key(link, p[1], p[2])))
    new_coord = {}
    for new_level, (_, ci, idx) in enumerate(parts, start=1):
        for i in idx:
            new_coord[(ci, i)] = new_level
    comps = []
    for ci, comp in enumerate(link.components):
        verts = []
        for i, v in enumerate(comp.vertices):
            v = list(v)
            v[axis] = new_coord[(ci, i)]
            verts.append(tuple(v))
        comps.append(Component(tuple(verts)))
    return LatticeLink(tuple(comps))


_PASS_ORDER = (Axis.Z, Axis.X, Axis.Y)


def level_all(link: LatticeLink, max_passes: int = 3) -> LatticeLink:
    """Extended properly leveled representative with respect to all axes.

    Runs z, x, y passes until all three predicates hold, at most
    ``max_passes`` rounds.
    """
    current = link
    for rnd in range(1, max_passes + 1):
        for axis in _PASS_ORDER:
            current = level_axis(current, axis)
        if all(is_extended_properly_leveled(current, a) for a in Axis):
            if rnd > 1:
                log.info("level_all needed %d rounds", rnd)
            return current
        log.warning("round %d left a level unbalanced, repeating", rnd)
    raise LevelingError(f"not extended properly leveled after {max_passes} rounds")
