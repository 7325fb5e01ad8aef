"""Integer Laurent polynomials in one variable A."""

from __future__ import annotations

__all__ = ["BracketPoly"]


class BracketPoly:
    """Immutable Laurent polynomial ``sum c_k A^k`` with integer coefficients.

    Stored as a sorted tuple of ``(exponent, coefficient)`` pairs with no zero
    coefficients.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms=()):
        if isinstance(terms, dict):
            items = terms.items()
        else:
            items = terms
        acc = {}
        for e, c in items:
            acc[int(e)] = acc.get(int(e), 0) + int(c)
        self._terms = tuple(sorted((e, c) for e, c in acc.items() if c))
        self._hash = None

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "BracketPoly":
        return cls(((exp, coeff),))

    @classmethod
    def loop(cls) -> "BracketPoly":
        """The loop value -A^2 - A^-2."""
        return cls(((2, -1), (-2, -1)))

    @property
    def terms(self) -> tuple:
        return self._terms

    def as_dict(self) -> dict:
        return dict(self._terms)

    def coefficients(self) -> tuple:
        """``(lowest exponent, [coefficients...])`` for dense output."""
        if not self._terms:
            return 0, []
        lo, hi = self._terms[0][0], self._terms[-1][0]
        d = dict(self._terms)
        return lo, [d.get(k, 0) for k in range(lo, hi + 1)]

    def is_zero(self) -> bool:
        return not self._terms

    def __eq__(self, other):
        if isinstance(other, int):
            other = BracketPoly.monomial(0, other)
        if not isinstance(other, BracketPoly):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._terms)
        return self._hash

    def __lt__(self, other):
        return self._terms < other._terms

    def __add__(self, other):
        if isinstance(other, int):
            other = BracketPoly.monomial(0, other)
        return BracketPoly(self._terms + other._terms)

    __radd__ = __add__

    def __neg__(self):
        return BracketPoly((e, -c) for e, c in self._terms)

    def __sub__(self, other):
        if isinstance(other, int):
            other = BracketPoly.monomial(0, other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return BracketPoly((e, c * other) for e, c in self._terms)
        acc = {}
        for e1, c1 in self._terms:
            for e2, c2 in other._terms:
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return BracketPoly(acc)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials have negative powers")
            (e, c), = self._terms
            if c not in (1, -1):
                raise ValueError("monomial is not a unit")
            return BracketPoly.monomial(-e * (-n), c ** (-n))
        out = BracketPoly.monomial(0)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k: int) -> "BracketPoly":
        """Multiply by A^k."""
        return BracketPoly((e + k, c) for e, c in self._terms)

    def mirror(self) -> "BracketPoly":
        """Substitute A -> A^-1."""
        return BracketPoly((-e, c) for e, c in self._terms)

    def divexact(self, other: "BracketPoly") -> "BracketPoly":
        """Exact division; raises ``ValueError`` on a nonzero remainder."""
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        rem = dict(self._terms)
        (dlo, _), (dhi, dlead) = other._terms[0], other._terms[-1]
        floor = (self._terms[0][0] - dlo) if self._terms else 0
        quot = {}
        while rem:
            hi = max(rem)
            k = hi - dhi
            c = rem[hi]
            if k < floor or c % dlead:
                raise ValueError("inexact division")
            q = c // dlead
            quot[k] = q
            for e, dc in other._terms:
                v = rem.get(e + k, 0) - q * dc
                if v:
                    rem[e + k] = v
                else:
                    rem.pop(e + k, None)
        return BracketPoly(quot)

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in reversed(self._terms):
            mono = "" if e == 0 else ("A" if e == 1 else f"A^{e}")
            if mono and abs(c) == 1:
                coef = "-" if c < 0 else "+"
                parts.append(f"{coef}{mono}")
            else:
                parts.append(f"{c:+d}{mono}")
        s = " ".join(parts)
        return s[1:] if s.startswith("+") else s
