"""Exhaustive generation of extended properly leveled lattice links.

A leveled link is described by one cyclic axis word per component plus, for
every axis, a bijection from *slots* to levels.  Along axis ``a`` a component
with ``c >= 2`` sticks on ``a`` has ``c`` runs (maximal paths between
consecutive ``a``-sticks), each lying in one ``a``-level; a component with no
``a``-stick is one slot on its own.  Proper levelness says exactly that every
level holds exactly one slot, so the levels ``0 .. n_a + w_a - 1`` are a
permutation of the slots (``w_a`` being the number of components lying in a
single ``a``-level).  Every stick then has nonzero length by construction and
only self-avoidance has to be checked.

Duplicates are removed without a global seen-set: among the inputs that
realize the same embedding (word automorphisms) only the lexicographically
least one is kept, and an embedding is emitted only if it equals its
canonical form under the lattice symmetries preserving the profile.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional, Sequence

from .core import (
    Component,
    LatticeLink,
    _LINEAR,
    _canonical_comps,
    component_counts,
    profile_rule,
    symmetries_preserving,
)

__all__ = [
    "PartialEmbedding",
    "PlanarComponentInfo",
    "Profile",
    "WorkUnit",
    "enumerate_leveled",
    "minimal_witness",
    "necklaces",
    "planar_info",
    "profiles_for",
    "prune_planar",
    "prune_profile",
    "run_shard",
    "shards",
]

log = logging.getLogger(__name__)

MODES = ("unconstrained", "constrained")


@dataclass(frozen=True)
class Profile:
    counts: tuple  # sticks along x, y, z
    components: int
    partition: Optional[tuple] = None  # per-component stick totals, if fixed

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if self.partition is not None:
            object.__setattr__(self, "partition", tuple(sorted(self.partition)))
            if sum(self.partition) != sum(self.counts) or len(self.partition) != self.components:
                raise ValueError("partition does not match the profile")

    @property
    def total(self) -> int:
        return sum(self.counts)

    def __str__(self) -> str:
        s = "(%d,%d,%d) m=%d" % (self.counts + (self.components,))
        if self.partition:
            s += " partition=" + "+".join(map(str, self.partition))
        return s


def _feasible_counts(counts: Sequence[int], m: int) -> bool:
    """Can ``counts`` be split into ``m`` per-component counts obeying the rule?"""
    return bool(_component_splits(tuple(counts), m, True))


def profiles_for(n: int, components: int, *, ordered: bool = False, constrained: bool = False) -> list:
    """Admissible profiles with ``n`` sticks.

    Unordered profiles are listed once in non-increasing order, which is one
    representative per class under axis permutation.  Constrained profiles
    need at least four sticks along every axis.
    """
    out = []
    for c in itertools.product(range(n + 1), repeat=3):
        if sum(c) != n:
            continue
        if not ordered and list(c) != sorted(c, reverse=True):
            continue
        if constrained and min(c) < 4:
            continue
        if _feasible_counts(c, components):
            out.append(Profile(c, components))
    return out


# --------------------------------------------------------------------------
# pruning predicates


@dataclass
class PartialEmbedding:
    """A search state: finished component words, the open word, budgets, tallies.

    Words are sequences of axes (0, 1, 2), one entry per stick.  Tallies count
    endpoints of axis-sticks per level; ``reserved`` marks levels holding a
    whole component.
    """

    counts: tuple
    components: int
    closed: list = field(default_factory=list)
    open_word: list = field(default_factory=list)
    tallies: list = field(default_factory=lambda: [{}, {}, {}])
    reserved: list = field(default_factory=lambda: [set(), set(), set()])

    @property
    def remaining(self) -> list:
        rem = list(self.counts)
        for w in list(self.closed) + [self.open_word]:
            for a in w:
                rem[a] -= 1
        return rem


def _word_counts(word) -> list:
    c = [0, 0, 0]
    for a in word:
        c[a] += 1
    return c


def prune_profile(partial: PartialEmbedding) -> bool:
    """False when the state can no longer grow into an admissible leveled link."""
    for axis in range(3):
        for level, t in partial.tallies[axis].items():
            if t > 2 or (t and level in partial.reserved[axis]):
                return False
    rem = partial.remaining
    if min(rem) < 0:
        return False
    for w in partial.closed:
        if not profile_rule(_word_counts(w)):
            return False
    left = partial.components - len(partial.closed)
    if partial.open_word:
        used = _word_counts(partial.open_word)
        left -= 1
        if left == 0:
            return profile_rule([used[i] + rem[i] for i in range(3)])
        # an exhausted axis fixes that count of the open component
        if any(rem[i] == 0 and used[i] == 1 for i in range(3)):
            return False
        return sum(rem) >= 4 * left
    if left == 0:
        return not any(rem)
    if sum(rem) < 4 * left or any(r == 1 for r in rem):
        return False
    if left == 1:
        return profile_rule(rem)
    return True


@dataclass(frozen=True)
class PlanarComponentInfo:
    component: int
    normal: int  # axis perpendicular to the plane
    level: int
    polygon: tuple  # 2D vertices in the in-plane coordinates
    bounded: int  # perpendicular sticks through the bounded face
    unbounded: int  # perpendicular sticks through the unbounded face
    perpendicular: int  # all sticks of the link along the normal


def _inside(pt, poly) -> bool:
    """Even-odd test for a point off the boundary of an axis-parallel polygon."""
    x, y = pt
    inside = False
    n = len(poly)
    for i in range(n):
        (x1, y1), (x2, y2) = poly[i], poly[(i + 1) % n]
        if x1 == x2 and x1 > x and min(y1, y2) <= y < max(y1, y2):
            inside = not inside
    return inside


def _on_boundary(pt, poly) -> bool:
    x, y = pt
    n = len(poly)
    for i in range(n):
        (x1, y1), (x2, y2) = poly[i], poly[(i + 1) % n]
        if min(x1, x2) <= x <= max(x1, x2) and min(y1, y2) <= y <= max(y1, y2):
            return True
    return False


def planar_info(link: LatticeLink, ci: int) -> Optional[PlanarComponentInfo]:
    """Piercing data of component ``ci``, or None if it is not planar."""
    comp = link.components[ci]
    counts = component_counts(comp)
    zero = [a for a in range(3) if counts[a] == 0]
    if not zero:
        return None
    normal = zero[0]
    u, v = [a for a in range(3) if a != normal]
    level = comp.vertices[0][normal]
    poly = tuple((p[u], p[v]) for p in comp.vertices)
    bounded = unbounded = perp = 0
    for other in link.components:
        for (a, b), ax in zip(other.edges(), other.axes()):
            if ax != normal:
                continue
            perp += 1
            lo, hi = sorted((a[normal], b[normal]))
            if not lo < level < hi:
                continue
            if _inside((a[u], a[v]), poly):
                bounded += 1
            else:
                unbounded += 1
    return PlanarComponentInfo(ci, normal, level, poly, bounded, unbounded, perp)


def prune_planar(link: LatticeLink, info: PlanarComponentInfo) -> bool:
    """Four perpendicular sticks, two through each face of the planar component.

    Necessary only for non-split links with at most 14 sticks other than the
    Hopf link and the three-component chain; constrained mode only.
    """
    return info.perpendicular == 4 and info.bounded == 2 and info.unbounded == 2


# --------------------------------------------------------------------------
# words


def _is_min_necklace(word: tuple) -> bool:
    k = len(word)
    rev = word[::-1]
    for r in range(k):
        if word[r:] + word[:r] < word or rev[r:] + rev[:r] < word:
            return False
    return True


@lru_cache(maxsize=None)
def necklaces(counts: tuple) -> tuple:
    """Cyclic axis words with these counts and no two cyclically adjacent
    letters equal, one (lexicographically least) per rotation/reversal class."""
    k = sum(counts)
    out = []
    left = list(counts)
    word = []

    def rec():
        if len(word) == k:
            if word[-1] != word[0] and _is_min_necklace(tuple(word)):
                out.append(tuple(word))
            return
        for a in range(3):
            if left[a] and (not word or word[-1] != a):
                left[a] -= 1
                word.append(a)
                rec()
                word.pop()
                left[a] += 1

    if k >= 2:
        rec()
    return tuple(out)


@lru_cache(maxsize=None)
def _component_splits(counts: tuple, m: int, prune: bool) -> tuple:
    """Non-decreasing tuples of per-component count vectors summing to ``counts``."""
    cands = itertools.product(*(range(n + 1) for n in counts))
    if prune:
        ok = [c for c in cands if profile_rule(c)]
    else:
        # a lone stick along an axis can never close up
        ok = [c for c in cands if 1 not in c and sum(c) >= 2 and necklaces(c)]
    out = []

    def rec(start, rem, acc):
        if len(acc) == m:
            if not any(rem):
                out.append(tuple(acc))
            return
        for i in range(start, len(ok)):
            c = ok[i]
            if all(c[a] <= rem[a] for a in range(3)):
                rec(i, [rem[a] - c[a] for a in range(3)], acc + [c])

    rec(0, list(counts), [])
    return tuple(out)


def _word_tuples(profile: Profile, mode: str, prune: bool):
    """Sorted tuples of component words realizing the profile."""
    m = profile.components
    for split in _component_splits(profile.counts, m, prune):
        if profile.partition is not None and tuple(sorted(sum(c) for c in split)) != profile.partition:
            continue
        if mode == "constrained":
            # a planar component needs exactly four sticks of the link along its normal
            if any(c[a] == 0 and profile.counts[a] != 4 for c in split for a in range(3)):
                continue
        options = [necklaces(c) for c in split]
        acc = []

        def rec(i):
            if i == m:
                yield tuple(acc)
                return
            for w in options[i]:
                # components with equal counts are taken in word order
                if i and split[i] == split[i - 1] and w < acc[-1]:
                    continue
                acc.append(w)
                if not prune or prune_profile(PartialEmbedding(profile.counts, m, closed=list(acc))):
                    yield from rec(i + 1)
                acc.pop()

        yield from rec(0)


# --------------------------------------------------------------------------
# realization


_B = 32  # point code base; coordinates stay below this


class _Layout:
    """Slot structure and automorphisms of one word tuple."""

    def __init__(self, words: tuple):
        self.words = words
        self.m = len(words)
        self.dims = [0, 0, 0]
        # slot[q][i][j]: slot along axis q of vertex j of component i
        self.slot = [[None] * self.m for _ in range(3)]
        for q in range(3):
            off = 0
            for i, w in enumerate(words):
                c = w.count(q)
                if c == 0:
                    self.slot[q][i] = [off] * len(w)
                    off += 1
                    continue
                s, run = [], 0
                for j in range(len(w)):
                    s.append(off + run % c)
                    if w[j] == q:
                        run += 1
                self.slot[q][i] = s
                off += c
            self.dims[q] = off
        self.autos = self._automorphisms()

    def _automorphisms(self) -> list:
        """Slot permutations (per axis) induced by non-trivial word automorphisms."""
        per_comp = []
        for w in self.words:
            k = len(w)
            maps = []
            for a, b in itertools.product((1, -1), range(k)):
                # vertex j -> a*j + b; stick j joins vertices j and j+1
                if a == 1:
                    ok = all(w[(j + b) % k] == w[j] for j in range(k))
                else:
                    ok = all(w[(b - j - 1) % k] == w[j] for j in range(k))
                if ok:
                    maps.append(tuple((a * j + b) % k for j in range(k)))
            per_comp.append(maps)
        groups = {}
        for i, w in enumerate(self.words):
            groups.setdefault(w, []).append(i)
        classes = list(groups.values())
        out = []
        for choice in itertools.product(*(itertools.permutations(cl) for cl in classes)):
            pi = list(range(self.m))
            for cl, img in zip(classes, choice):
                for src, dst in zip(cl, img):
                    pi[src] = dst
            for vmaps in itertools.product(*per_comp):
                smaps = []
                for q in range(3):
                    sm = [None] * self.dims[q]
                    for i in range(self.m):
                        for j, jj in enumerate(vmaps[i]):
                            sm[self.slot[q][i][j]] = self.slot[q][pi[i]][jj]
                    smaps.append(tuple(sm))
                if any(sm != tuple(range(len(sm))) for sm in smaps):
                    out.append(smaps)
        return out

    def least_input(self, perms) -> bool:
        """Is ``perms`` the least input (per-axis level tuples) for its embedding?"""
        for smaps in self.autos:
            img = []
            for q in range(3):
                p = perms[q]
                new = [0] * len(p)
                for s, t in enumerate(smaps[q]):
                    new[t] = p[s]
                img.append(tuple(new))
            if tuple(img) < tuple(perms):
                return False
        return True


def _least_rotation(c):
    n = len(c)
    i = c.index(min(c))
    fwd = tuple(c[(i + k) % n] for k in range(n))
    bwd = tuple(c[(i - k) % n] for k in range(n))
    return fwd if fwd <= bwd else bwd


def _is_canonical(comps, maps, hi) -> bool:
    """Does normalized ``comps`` (corner at the origin, single-digit
    coordinates) equal its least image under ``maps``?

    Images are first compared by their least vertex, which is the first
    vertex of the image's normal form; only ties need the full form.
    """
    first = comps[0][0]
    for g in maps:
        pm, sg = g.perm, g.signs
        if pm == (0, 1, 2) and sg == (1, 1, 1):
            continue
        imgs = [
            [
                tuple(v[pm[a]] if sg[a] > 0 else hi[pm[a]] - v[pm[a]] for a in range(3))
                for v in c
            ]
            for c in comps
        ]
        low = min(min(c) for c in imgs)
        if low > first:
            continue
        if low < first:
            return False
        if tuple(sorted(_least_rotation(c) for c in imgs)) < comps:
            return False
    return True


class _Realizer:
    def __init__(self, profile: Profile, words: tuple, mode: str):
        self.profile = profile
        self.layout = _Layout(words)
        self.mode = mode
        self.maps = symmetries_preserving(profile.counts)

    def _planar_plan(self):
        """(component, normal axis) of the first planar component, in constrained mode."""
        if self.mode != "constrained":
            return None
        for ci, w in enumerate(self.layout.words):
            for q in range(3):
                if q not in w:
                    return ci, q
        return None

    def run(self, fixed=()) -> list:
        """Canonical embeddings as vertex-tuple components.

        ``fixed`` pins the level permutations of the first axes.
        """
        lay = self.layout
        words = lay.words
        dims = lay.dims
        if max(dims) >= _B:
            raise ValueError("profile too large for the point encoding")
        choices = []
        for q in range(3):
            if q < len(fixed):
                choices.append([tuple(fixed[q])])
            else:
                choices.append(list(itertools.permutations(range(dims[q]))))
        sl = lay.slot
        sx, sy, sz = sl
        m = lay.m
        ks = [len(w) for w in words]
        strides = [[(_B * _B, _B, 1)[a] for a in w] for w in words]
        ident = (_LINEAR[0],)
        hi = [d - 1 for d in dims]
        fast = max(dims) <= 10
        mul = (_B * _B, _B, 1)

        # with a planar component, its normal axis goes innermost so the
        # in-plane permutations can already decide which sticks pierce it
        plan = self._planar_plan()
        if plan is None:
            order = (0, 1, 2)
        else:
            ci, nq = plan
            order = tuple(a for a in range(3) if a != nq) + (nq,)
            normal_sticks = [
                (i, j) for i in range(m) if i != ci for j in range(ks[i]) if words[i][j] == nq
            ]
        o0, o1, o2 = order
        m0, m1, m2 = mul[o0], mul[o1], mul[o2]
        out = []
        for p0 in choices[o0]:
            c0 = [[p0[s] * m0 for s in sl[o0][i]] for i in range(m)]
            for p1 in choices[o1]:
                if plan is not None and not self._splits_faces(plan, normal_sticks, o0, p0, o1, p1):
                    continue
                c01 = [[c0[i][j] + p1[sl[o1][i][j]] * m1 for j in range(ks[i])] for i in range(m)]
                for p2 in choices[o2]:
                    if plan is not None:
                        level = p2[sl[o2][ci][0]]
                        if not all(
                            min(p2[sl[o2][i][j]], p2[sl[o2][i][(j + 1) % ks[i]]])
                            < level
                            < max(p2[sl[o2][i][j]], p2[sl[o2][i][(j + 1) % ks[i]]])
                            for i, j in normal_sticks
                        ):
                            continue
                    pts = set()
                    total = 0
                    for i in range(m):
                        k = ks[i]
                        s2 = sl[o2][i]
                        ci01 = c01[i]
                        sti = strides[i]
                        codes = [ci01[j] + p2[s2[j]] * m2 for j in range(k)]
                        codes.append(codes[0])
                        for j in range(k):
                            a, b = codes[j], codes[j + 1]
                            st = sti[j] if b > a else -sti[j]
                            pts.update(range(a + st, b + st, st))
                            total += (b - a) // st
                        if len(pts) != total:
                            break
                    if len(pts) != total:
                        continue
                    perms = [None, None, None]
                    perms[o0], perms[o1], perms[o2] = p0, p1, p2
                    px, py, pz = perms
                    perms = tuple(perms)
                    if lay.autos and not lay.least_input(perms):
                        continue
                    comps = tuple(
                        tuple((px[sx[i][j]], py[sy[i][j]], pz[sz[i][j]]) for j in range(ks[i]))
                        for i in range(m)
                    )
                    comps = _canonical_comps(comps, ident)
                    if fast:
                        if not _is_canonical(comps, self.maps, hi):
                            continue
                    elif _canonical_comps(comps, self.maps) != comps:
                        continue
                    if self.mode == "constrained" and not self._planar_ok(comps):
                        continue
                    out.append(comps)
        return out

    def _splits_faces(self, plan, normal_sticks, u, pu, v, pv) -> bool:
        """Do the normal sticks project two inside and two outside the planar
        component, none on its boundary?"""
        ci, _ = plan
        sl = self.layout.slot
        poly = [(pu[a], pv[b]) for a, b in zip(sl[u][ci], sl[v][ci])]
        inside = outside = 0
        for i, j in normal_sticks:
            pt = (pu[sl[u][i][j]], pv[sl[v][i][j]])
            if _on_boundary(pt, poly):
                return False
            if _inside(pt, poly):
                inside += 1
            else:
                outside += 1
        return inside == 2 and outside == 2

    def _planar_ok(self, comps) -> bool:
        link = LatticeLink(tuple(Component(c) for c in comps))
        for ci in range(len(comps)):
            info = planar_info(link, ci)
            if info is not None and not prune_planar(link, info):
                return False
        return True


# --------------------------------------------------------------------------
# work units


def _word_text(words) -> str:
    return "|".join("".join("xyz"[a] for a in w) for w in words)


def _parse_words(text: str) -> tuple:
    return tuple(tuple("xyz".index(ch) for ch in part) for part in text.split("|"))


@dataclass(frozen=True)
class WorkUnit:
    """One independent piece of a profile's search: a word tuple, optionally
    with the level permutations of the first axes pinned."""

    profile: Profile
    words: tuple
    fixed: tuple = ()
    mode: str = "unconstrained"

    def describe(self) -> str:
        parts = [
            "profile=%d,%d,%d" % self.profile.counts,
            f"m={self.profile.components}",
            f"mode={self.mode}",
            f"words={_word_text(self.words)}",
        ]
        for q, p in enumerate(self.fixed):
            parts.append(f"{'xyz'[q]}=" + ",".join(map(str, p)))
        return " ".join(parts)

    @classmethod
    def parse(cls, text: str) -> "WorkUnit":
        fields = dict(tok.split("=", 1) for tok in text.split())
        counts = tuple(int(v) for v in fields["profile"].split(","))
        fixed = []
        for q in "xyz":
            if q not in fields:
                break
            fixed.append(tuple(int(v) for v in fields[q].split(",")))
        return cls(Profile(counts, int(fields["m"])), _parse_words(fields["words"]), tuple(fixed), fields["mode"])


def shards(profile: Profile, depth: int = 1, mode: str = "unconstrained", prune: bool = True) -> list:
    """Independent work units covering the search for ``profile``.

    Depth 1 gives one unit per word tuple; depths 2 and 3 additionally pin the
    x- and then the y-level permutation.
    """
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    units = []
    for words in _word_tuples(profile, mode, prune):
        lay = _Layout(words)
        pins = [itertools.permutations(range(lay.dims[q])) for q in range(min(depth - 1, 2))]
        for fixed in itertools.product(*pins):
            units.append(WorkUnit(profile, words, tuple(fixed), mode))
    return units


def run_shard(unit: WorkUnit) -> list:
    """Canonical embeddings (vertex-tuple components) of one work unit."""
    return _Realizer(unit.profile, unit.words, unit.mode).run(unit.fixed)


def enumerate_leveled(profile: Profile, mode: str = "unconstrained", prune: bool = True) -> Iterator[LatticeLink]:
    """Every extended properly leveled link with exactly ``profile``'s counts
    and gap-free levels, once per symmetry class, in canonical form.

    Constrained mode drops embeddings whose planar components fail the
    four-piercing test.
    """
    for unit in shards(profile, 1, mode, prune):
        for comps in run_shard(unit):
            yield LatticeLink(tuple(Component(c) for c in comps))


def minimal_witness(target, max_sticks: int, mode: str = "unconstrained", start: int = 4):
    """Smallest ``n <= max_sticks`` with an embedding classified as ``target``.

    ``target`` is a link-type name or label; returns ``(link, n)`` or None.
    """
    from .invariants import classify, reference_table

    name = getattr(target, "name", target)
    entry = reference_table().get(name)
    if entry is None:
        raise KeyError(f"{name!r} is not in the reference table")
    for n in range(start, max_sticks + 1):
        for profile in profiles_for(n, entry.components, constrained=(mode == "constrained")):
            for link in enumerate_leveled(profile, mode):
                if classify(link).name == name:
                    log.info("witness for %s at %d sticks, profile %s", name, n, profile)
                    return link, n
    return None
