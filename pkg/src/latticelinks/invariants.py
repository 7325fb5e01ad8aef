"""Exact link invariants and classification against a table of small links.

Conventions: ``<O> = 1``, ``<L u O> = d <L>`` with ``d = -A^2 - A^-2``; at a
crossing ``(a, b, c, d)`` the A-smoothing joins ``a-b`` and ``c-d`` and the
B-smoothing joins ``a-d`` and ``b-c``.  The normalized invariant
``(-A)^(-3w) <D>`` becomes the Jones polynomial under ``t = A^-4``.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Optional

from .core import Axis, LatticeLink, _require_valid
from .diagram import (
    Diagram,
    PDCode,
    _occurrences,
    pd_code,
    pd_signs,
    pd_writhe,
    sheared_projection,
    simplify_r1_r2,
)
from .polynomial import BracketPoly

__all__ = [
    "CrossingBudgetExceeded",
    "LinkTypeLabel",
    "LinkInvariants",
    "TableCollisionError",
    "UNRECOGNIZED",
    "bracket_state_sum",
    "classify",
    "invariants_of",
    "jones_A",
    "jones_key",
    "kauffman_bracket",
    "linking_matrix",
    "pd_linking_matrix",
    "reference_table",
]

CROSSING_BUDGET = 24
UNRECOGNIZED = "UNRECOGNIZED"


class CrossingBudgetExceeded(ValueError):
    pass


class TableCollisionError(RuntimeError):
    pass


# --------------------------------------------------------------------------
# linking numbers


def linking_matrix(diagram: Diagram) -> tuple:
    m = diagram.n_components
    acc = [[0] * m for _ in range(m)]
    for c in diagram.crossings:
        i, j = c.components
        if i != j:
            acc[i][j] += c.sign
            acc[j][i] += c.sign
    for i in range(m):
        for j in range(m):
            if acc[i][j] % 2:
                raise AssertionError("odd signed crossing count between two components")
            acc[i][j] //= 2
    return tuple(tuple(r) for r in acc)


def pd_components(pd: PDCode) -> dict:
    """Map each edge label to a component index (traversal order)."""
    occ = _occurrences(pd.crossings)
    comp = {}
    n = 0
    for lab in sorted(occ):
        if lab in comp:
            continue
        stack = [lab]
        comp[lab] = n
        while stack:
            cur = stack.pop()
            for k, p in occ[cur]:
                nxt = pd.crossings[k][(p + 2) % 4]
                if nxt not in comp:
                    comp[nxt] = n
                    stack.append(nxt)
        n += 1
    return comp


def pd_linking_matrix(pd: PDCode) -> tuple:
    comp = pd_components(pd)
    m = (max(comp.values()) + 1 if comp else 0) + pd.loops
    acc = [[0] * m for _ in range(m)]
    for x, s in zip(pd.crossings, pd.signs):
        i, j = comp[x[0]], comp[x[1]]
        if i != j:
            acc[i][j] += s
            acc[j][i] += s
    return tuple(tuple(v // 2 for v in r) for r in acc)


# --------------------------------------------------------------------------
# bracket


def _check_budget(pd: PDCode, budget: int) -> None:
    if len(pd.crossings) > budget:
        raise CrossingBudgetExceeded(f"{len(pd.crossings)} crossings exceed budget {budget}")


def bracket_state_sum(pd: PDCode, budget: int = CROSSING_BUDGET) -> BracketPoly:
    """Bracket by brute force over all 2^c smoothings (union-find loop count)."""
    _check_budget(pd, budget)
    xs = pd.crossings
    labels = sorted({lab for x in xs for lab in x})
    index = {lab: i for i, lab in enumerate(labels)}
    tally = {}
    for state in itertools.product((0, 1), repeat=len(xs)):
        parent = list(range(len(labels)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        def union(a, b):
            ra, rb = find(index[a]), find(index[b])
            if ra != rb:
                parent[ra] = rb

        for (a, b, c, d), s in zip(xs, state):
            if s == 0:
                union(a, b)
                union(c, d)
            else:
                union(a, d)
                union(b, c)
        loops = len({find(i) for i in range(len(labels))}) + pd.loops
        exp = state.count(0) - state.count(1)
        tally[(exp, loops)] = tally.get((exp, loops), 0) + 1
    total = BracketPoly()
    d = BracketPoly.loop()
    for (exp, loops), n in tally.items():
        total = total + (d ** (loops - 1)).shift(exp) * n
    return total


def _add_arc(match: dict, p, q) -> int:
    """Add an arc between label occurrences ``p`` and ``q``; return loops closed."""
    if p == q:
        return 1
    if p in match:
        o = match.pop(p)
        del match[o]
        if o == q:
            return 1
        p = o
    if q in match:
        o = match.pop(q)
        del match[o]
        if o == p:
            return 1
        q = o
    match[p] = q
    match[q] = p
    return 0


def _crossing_order(xs) -> list:
    remaining = set(range(len(xs)))
    order = []
    open_labels = set()
    while remaining:
        k = max(remaining, key=lambda i: (sum(1 for lab in xs[i] if lab in open_labels), -i))
        remaining.discard(k)
        order.append(k)
        for lab in xs[k]:
            open_labels ^= {lab}
    return order


def kauffman_bracket(pd: PDCode, budget: int = CROSSING_BUDGET) -> BracketPoly:
    """Bracket polynomial, summing smoothings crossing by crossing.

    Partial states are keyed by how the open edge ends are paired, so equal
    partial pairings are merged instead of enumerated separately.
    """
    _check_budget(pd, budget)
    xs = pd.crossings
    if not xs:
        return BracketPoly.loop() ** (pd.loops - 1)
    states = {(): {0: 1}}
    for k in _crossing_order(xs):
        a, b, c, d = xs[k]
        nxt = {}
        for key, poly in states.items():
            for shift, arcs in ((1, ((a, b), (c, d))), (-1, ((a, d), (b, c)))):
                match = {}
                for u, v in key:
                    match[u] = v
                    match[v] = u
                loops = 0
                for u, v in arcs:
                    loops += _add_arc(match, u, v)
                nkey = tuple(sorted((u, v) for u, v in match.items() if u < v))
                target = nxt.setdefault(nkey, {})
                for e, coef in _times_loops(poly, shift, loops).items():
                    target[e] = target.get(e, 0) + coef
        states = {k2: {e: c for e, c in p.items() if c} for k2, p in nxt.items()}
    (key, poly), = states.items()
    assert key == ()
    total = BracketPoly(poly)
    # every state closed at least one loop; the first loop is not weighted
    return total.divexact(BracketPoly.loop()) * (BracketPoly.loop() ** pd.loops)


@functools.lru_cache(maxsize=64)
def _loop_power(n: int) -> tuple:
    return (BracketPoly.loop() ** n).terms


def _times_loops(poly: dict, shift: int, loops: int) -> dict:
    if loops == 0:
        return {e + shift: c for e, c in poly.items()}
    out = {}
    for le, lc in _loop_power(loops):
        for e, c in poly.items():
            k = e + le + shift
            out[k] = out.get(k, 0) + c * lc
    return out


def jones_A(pd: PDCode, w: Optional[int] = None) -> BracketPoly:
    """``(-A)^(-3w) <D>``; ``w`` defaults to the writhe stored in ``pd``."""
    if w is None:
        w = pd_writhe(pd)
    sign = -1 if w % 2 else 1
    return kauffman_bracket(pd).shift(-3 * w) * sign


def jones_key(jones: BracketPoly, lk: tuple) -> frozenset:
    """All values over component orientations, together with mirror images.

    Reversing a set ``S`` of components multiplies the normalized bracket by
    ``A^(12 * lk(S, complement))``.
    """
    m = len(lk)
    out = set()
    for r in range(m):
        for subset in itertools.combinations(range(1, m), r):
            s = set(subset)
            lam = sum(lk[i][j] for i in s for j in range(m) if j not in s)
            v = jones.shift(12 * lam)
            out.add(v)
            out.add(v.mirror())
    return frozenset(out)


def _orientation_variants(jones: BracketPoly, lk: tuple) -> frozenset:
    m = len(lk)
    out = set()
    for r in range(m):
        for subset in itertools.combinations(range(1, m), r):
            s = set(subset)
            lam = sum(lk[i][j] for i in s for j in range(m) if j not in s)
            out.add(jones.shift(12 * lam))
    return frozenset(out)


def _lk_multiset(lk: tuple) -> tuple:
    m = len(lk)
    return tuple(sorted(abs(lk[i][j]) for i in range(m) for j in range(i + 1, m)))


# --------------------------------------------------------------------------
# reference table

# Standard diagrams: Rolfsen/Thistlethwaite table PD codes (0-based labels).
_FIXTURES = {
    "3_1": [(5, 2, 0, 3), (3, 0, 4, 1), (1, 4, 2, 5)],
    "4_1": [(7, 4, 0, 5), (3, 0, 4, 1), (1, 7, 2, 6), (5, 3, 6, 2)],
    "2_1^2": [(2, 1, 3, 0), (0, 3, 1, 2)],
    "4_1^2": [(4, 3, 5, 0), (0, 5, 1, 6), (6, 1, 7, 2), (2, 7, 3, 4)],
    "5_1^2": [(4, 0, 5, 3), (0, 4, 1, 9), (6, 1, 7, 2), (2, 7, 3, 8), (8, 5, 9, 6)],
    "6_2^3": [(4, 3, 5, 0), (0, 11, 1, 8), (6, 2, 7, 1), (2, 10, 3, 9), (8, 7, 9, 4), (10, 6, 11, 5)],
    "6_3^3": [(4, 3, 5, 0), (0, 5, 1, 6), (1, 9, 2, 8), (9, 3, 10, 2), (7, 10, 4, 11), (11, 6, 8, 7)],
    "2_1^2#2_1^2": [(1, 6, 2, 7), (7, 2, 6, 3), (3, 4, 0, 5), (5, 0, 4, 1)],
}

# Types with more than one component that cannot be pulled apart.
NON_SPLIT = ("2_1^2", "2_1^2#2_1^2", "4_1^2", "5_1^2", "6_2^3", "6_3^3")

MAX_TABLE_COMPONENTS = 3


def fixture_pd(name: str) -> PDCode:
    """PD code of a table entry; ``0_1`` and unlinks are crossing-free loops."""
    if name == "0_1":
        return PDCode((), (), 1)
    if name.startswith("0_1^"):
        return PDCode((), (), int(name.split("^")[1]))
    xs = _FIXTURES[name]
    return PDCode(tuple(xs), pd_signs(xs), 0)


def disjoint_union(p: PDCode, q: PDCode) -> PDCode:
    off = max((lab for x in p.crossings for lab in x), default=0) + 1 - min(
        (lab for x in q.crossings for lab in x), default=0
    )
    shifted = tuple(tuple(lab + off for lab in x) for x in q.crossings)
    return PDCode(p.crossings + shifted, p.signs + q.signs, p.loops + q.loops)


@dataclass(frozen=True)
class TableEntry:
    name: str
    components: int
    lk_multiset: tuple
    jones: BracketPoly  # for the fixture orientation
    variants: frozenset  # over orientations, fixture chirality
    key: tuple

    @property
    def amphichiral(self) -> bool:
        return self.variants == frozenset(v.mirror() for v in self.variants)


def _entry(name: str, pd: PDCode) -> TableEntry:
    lk = pd_linking_matrix(pd)
    jones = jones_A(pd)
    m = len(lk)
    key = (m, _lk_multiset(lk), jones_key(jones, lk))
    return TableEntry(name, m, _lk_multiset(lk), jones, _orientation_variants(jones, lk), key)


@functools.lru_cache(maxsize=1)
def reference_table() -> dict:
    """Name -> TableEntry, computed from the fixture diagrams.

    Raises ``TableCollisionError`` if two entries share an invariant key.
    """
    bases = ["0_1", "3_1", "4_1"] + list(NON_SPLIT)
    pds = {name: fixture_pd(name) for name in bases}
    pds["0_1^2"] = fixture_pd("0_1^2")
    pds["0_1^3"] = fixture_pd("0_1^3")
    unknot = fixture_pd("0_1")
    for name in bases:
        if name == "0_1":
            continue
        base = pds[name]
        m = len(pd_linking_matrix(base))
        pd = base
        for extra in range(1, MAX_TABLE_COMPONENTS - m + 1):
            pd = disjoint_union(pd, unknot)
            pds[f"{name}" + " U 0_1" * extra] = pd
    table = {name: _entry(name, pd) for name, pd in pds.items()}
    seen = {}
    for name, entry in table.items():
        if entry.key in seen:
            raise TableCollisionError(f"{name} and {seen[entry.key]} have equal invariants")
        seen[entry.key] = name
    return table


@functools.lru_cache(maxsize=1)
def _table_index() -> dict:
    return {e.key: e for e in reference_table().values()}


# --------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class LinkTypeLabel:
    name: str
    chirality: Optional[str] = None  # "+", "-", "achiral" or None
    invariants: Optional[tuple] = None  # filled for UNRECOGNIZED

    @property
    def recognized(self) -> bool:
        return self.name != UNRECOGNIZED

    @property
    def is_split(self) -> bool:
        return " U " in self.name or self.name.startswith("0_1^")

    @property
    def is_non_split_link(self) -> bool:
        """Non-split with at least two components, or unrecognized."""
        return self.name in NON_SPLIT or not self.recognized

    def __str__(self) -> str:
        if self.chirality in ("+", "-"):
            return f"{self.name}{self.chirality}"
        return self.name


@dataclass(frozen=True)
class LinkInvariants:
    components: int
    axis: Axis
    crossings: int  # of the sheared diagram used
    linking: tuple
    bracket: BracketPoly
    writhe: int
    jones: BracketPoly


def invariants_of(link: LatticeLink, axis: Optional[Axis] = None, budget: int = CROSSING_BUDGET) -> LinkInvariants:
    """Invariants from one sheared diagram; by default the axis with fewest crossings."""
    _require_valid(link)
    if axis is None:
        diagrams = [sheared_projection(link, a, check=False) for a in (Axis.Z, Axis.X, Axis.Y)]
        diagram = min(diagrams, key=lambda dg: len(dg.crossings))
    else:
        diagram = sheared_projection(link, axis, check=False)
    lk = linking_matrix(diagram)
    pd = simplify_r1_r2(pd_code(diagram))
    bracket = kauffman_bracket(pd, budget)
    w = pd_writhe(pd)
    sign = -1 if w % 2 else 1
    jones = bracket.shift(-3 * w) * sign
    return LinkInvariants(len(link.components), diagram.axis, len(diagram.crossings), lk, bracket, w, jones)


def label_from_invariants(inv: LinkInvariants) -> LinkTypeLabel:
    key = (inv.components, _lk_multiset(inv.linking), jones_key(inv.jones, inv.linking))
    entry = _table_index().get(key)
    if entry is None:
        lo, coeffs = inv.jones.coefficients()
        return LinkTypeLabel(UNRECOGNIZED, None, (inv.components, _lk_multiset(inv.linking), lo, tuple(coeffs)))
    if entry.amphichiral:
        chir = "achiral"
    else:
        chir = "+" if _orientation_variants(inv.jones, inv.linking) == entry.variants else "-"
    return LinkTypeLabel(entry.name, chir)


def classify(link: LatticeLink, budget: int = CROSSING_BUDGET) -> LinkTypeLabel:
    return label_from_invariants(invariants_of(link, budget=budget))
