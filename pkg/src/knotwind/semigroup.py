"""Numerical semigroups of torus knots and the V-sequences they count.

For coprime p, q >= 2 the semigroup Gamma(p,q) = {hp + kq : h, k >= 0} has
conductor (p-1)(q-1): everything from the conductor on is a member, and the
number of gaps below it equals the genus g = (p-1)(q-1)/2 of T(p,q).  The
non-increasing invariants V_i of T(p,q) are plain counts:

    V_i(T(p,q)) = card(Gamma(p,q) intersect [0, g - i))

This module keeps the membership table (one code path); per-residue ceiling
sums are used only as an independent oracle in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .errors import ValidationError
from .knots import KnotExpression, TorusKnot


class NumericalSemigroup:
    """Membership table for Gamma(p,q) on [0, conductor)."""

    def __init__(self, p: int, q: int) -> None:
        if not isinstance(p, int) or not isinstance(q, int):
            raise ValidationError(f"semigroup generators must be integers, got ({p!r},{q!r})")
        if p > q:
            p, q = q, p
        if p < 2:
            raise ValidationError(f"semigroup generators must both be >= 2, got ({p},{q})")
        if gcd(p, q) != 1:
            raise ValidationError(f"semigroup generators ({p},{q}) are not coprime")
        self.p = p
        self.q = q
        conductor = (p - 1) * (q - 1)
        member = bytearray(conductor)
        if conductor > 0:
            member[0] = 1
        for m in range(1, conductor):
            member[m] = (m >= p and member[m - p]) or (m >= q and member[m - q])
        prefix = [0] * (conductor + 1)
        for m in range(conductor):
            prefix[m + 1] = prefix[m] + member[m]
        self.conductor = conductor
        self.membership = bytes(member)
        self._prefix = tuple(prefix)

    def contains(self, m: int) -> bool:
        if m < 0:
            return False
        if m >= self.conductor:
            return True
        return bool(self.membership[m])

    def count_below(self, t: int) -> int:
        """card(Gamma intersect [0, t))."""
        if not isinstance(t, int) or t < 0:
            raise ValidationError(f"count_below needs a non-negative integer, got {t!r}")
        if t >= self.conductor:
            return self._prefix[self.conductor] + (t - self.conductor)
        return self._prefix[t]

    @property
    def gap_count(self) -> int:
        return self.conductor - self._prefix[self.conductor]

    def __repr__(self) -> str:
        return f"NumericalSemigroup({self.p},{self.q})"


@lru_cache(maxsize=None)
def semigroup_from_pair(p: int, q: int) -> NumericalSemigroup:
    """The semigroup generated by p and q (validated, cached by pair)."""
    return NumericalSemigroup(p, q)


def count_below(semigroup: NumericalSemigroup, t: int) -> int:
    return semigroup.count_below(t)


@dataclass(frozen=True)
class VSequence:
    """Non-increasing non-negative integers; entries beyond the list are 0."""

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        vals = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        prev = None
        for i, v in enumerate(vals):
            if v < 0:
                raise ValidationError(f"V_{i} = {v} is negative")
            if prev is not None and not 0 <= prev - v <= 1:
                raise ValidationError(f"V_{i - 1} = {prev}, V_{i} = {v}: step outside {{0,1}}")
            prev = v
        if vals and vals[-1] > 1:
            raise ValidationError(f"last stored entry {vals[-1]} cannot step down to the implicit 0")

    def at(self, i: int) -> int:
        if not isinstance(i, int) or i < 0:
            raise ValidationError(f"V-sequence index must be a non-negative integer, got {i!r}")
        return self.values[i] if i < len(self.values) else 0

    def __getitem__(self, i: int) -> int:
        return self.at(i)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


@dataclass(frozen=True)
class MultiplicitySequence:
    """Non-increasing positive integers recording successive blowup orders."""

    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        ents = tuple(int(e) for e in self.entries)
        object.__setattr__(self, "entries", ents)
        for i, e in enumerate(ents):
            if e < 1:
                raise ValidationError(f"multiplicity {e} at position {i} is not positive")
            if i and ents[i - 1] < e:
                raise ValidationError("multiplicity sequence must be non-increasing")


def multiplicity_sequence(knot: TorusKnot) -> MultiplicitySequence:
    """Multiplicity sequence of T(p,q) via the Euclidean algorithm.

    Trailing 1-entries (smooth points) are dropped, so T(n, kn+1) yields
    exactly k copies of n.
    """
    a, b = knot.q, knot.p
    entries: list[int] = []
    while b > 1:
        cnt, r = divmod(a, b)
        entries.extend([b] * cnt)
        a, b = b, r
    return MultiplicitySequence(tuple(entries))


def v_sequence_torus(knot: TorusKnot) -> VSequence:
    """V_i(T(p,q)) for i = 0..g, read off the semigroup membership table."""
    semigroup = semigroup_from_pair(knot.p, knot.q)
    g = knot.genus
    return VSequence(tuple(semigroup.count_below(g - i) for i in range(g + 1)))


_V0_CLOSED_FORMS = {
    "I": (lambda n: n * (n + 1) // 2, lambda n: TorusKnot(2 * n, 2 * n + 1)),
    "II": (lambda n: 2 * n * n, lambda n: TorusKnot(2 * n, 8 * n + 1)),
    "III": (lambda n: 2 * n * (n + 1), lambda n: TorusKnot(2 * n + 1, 8 * n + 5)),
}


def _family(tag: object) -> str:
    key = str(tag).strip().upper()
    if key not in _V0_CLOSED_FORMS:
        raise ValidationError(f"unknown V_0 family {tag!r}; expected one of I, II, III")
    return key


def v0_closed_form(family: str, n: int) -> int:
    """Closed forms n(n+1)/2, 2n^2, 2n(n+1) for the three knot families.

    Family I is T(2n,2n+1), II is T(2n,8n+1), III is T(2n+1,8n+5); these are
    independent oracles against `v_sequence_torus`.
    """
    key = _family(family)
    if not isinstance(n, int) or n < 1:
        raise ValidationError(f"family parameter must be a positive integer, got {n!r}")
    return _V0_CLOSED_FORMS[key][0](n)


def v0_family_knot(family: str, n: int) -> TorusKnot:
    """The torus knot whose V_0 the matching closed form computes."""
    key = _family(family)
    if not isinstance(n, int) or n < 1:
        raise ValidationError(f"family parameter must be a positive integer, got {n!r}")
    return _V0_CLOSED_FORMS[key][1](n)


def diamond_reduce(expr: KnotExpression) -> TorusKnot | None:
    """Reduce a sum of knots T(n, a_j*n + 1) to the single knot T(n, (sum a_j)*n + 1).

    The reduction concatenates multiplicity sequences: it applies exactly when
    every summand is positively oriented and all multiplicities agree on one
    common n.  A single positive summand reduces to itself.  Returns None
    ("no reduction") in every other case, including mirrored summands; the
    caller may then fall back to the chain-complex route.

    The returned knot has the same V-sequence as the input; that identity is
    cross-checked against the chain-complex module in the test suite rather
    than assumed at all scales.
    """
    if not isinstance(expr, KnotExpression):
        raise ValidationError(f"diamond_reduce expects a KnotExpression, got {expr!r}")
    if any(sign < 0 for _, sign in expr.summands):
        return None
    if not expr.summands:
        return None
    if len(expr.summands) == 1:
        return expr.summands[0][0]
    entries: list[int] = []
    for knot, _ in expr.summands:
        entries.extend(multiplicity_sequence(knot).entries)
    n = entries[0]
    if any(e != n for e in entries):
        return None
    return TorusKnot(n, len(entries) * n + 1)
