"""Staircase-type bifiltered chain complexes over F_2[U].

A complex here is a finite generating set with integer (maslov, alexander)
bigradings and a differential stored sparsely: entry (k, l) -> n means that
U^n * g_l appears in the boundary of g_k.  Three laws are enforced at
construction time:

    square zero:   the F_2[U]-linear composite of the differential with
                   itself vanishes,
    grading law:   M(g_l) - 2n = M(g_k) - 1 on every entry,
    filtration:    A(g_l) - n <= A(g_k) on every entry.

The homological normalisation (the U-non-torsion tower of the full complex
tops out at Maslov grading 0) is available as `tower_top` and is arranged by
construction in `staircase` and `dualize`.

V-invariants are read off sublevel subcomplexes: for s >= 0, A_s^- is
spanned by U^a * g with a >= max(0, A(g) - s).  After truncating U-powers
at an order N, homology splits by Maslov grading into small F_2 systems
(each generator contributes at most one basis element per grading), and the
tower top is the maximal grading carrying a class that survives a fixed
number of U-multiplications.  V_s is minus half that grading.  Every value
is recomputed at truncation N+1; disagreement raises, never returns.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import MutableMapping

from .errors import InternalCheckError, TruncationInstabilityError, ValidationError
from .gf2 import BitSpace, kernel_basis
from .knots import KnotExpression, TorusKnot, as_expression
from .semigroup import VSequence, semigroup_from_pair, v_sequence_torus


@dataclass(frozen=True)
class BifilteredComplex:
    """Finitely generated free complex over F_2[U] with (M, A) bigradings."""

    generators: tuple[tuple[int, int], ...]
    differential: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        gens = tuple((int(m), int(a)) for m, a in self.generators)
        object.__setattr__(self, "generators", gens)
        if not gens:
            raise ValidationError("a complex needs at least one generator")
        count = len(gens)
        diff: dict[tuple[int, int], int] = {}
        for (k, l), n in self.differential.items():
            if not (0 <= k < count and 0 <= l < count):
                raise ValidationError(f"differential entry ({k},{l}) is out of range")
            n = int(n)
            if n < 0:
                raise ValidationError(f"U-exponent on arrow {k}->{l} is negative")
            diff[(k, l)] = n
        object.__setattr__(self, "differential", diff)
        for (k, l), n in diff.items():
            mk, ak = gens[k]
            ml, al = gens[l]
            if ml - 2 * n != mk - 1:
                raise ValidationError(
                    f"grading law broken on arrow {k}->{l}: M_l - 2n = {ml - 2 * n}, M_k - 1 = {mk - 1}"
                )
            if al - n > ak:
                raise ValidationError(
                    f"filtration law broken on arrow {k}->{l}: A_l - n = {al - n} > A_k = {ak}"
                )
        self._check_square_zero()

    def _check_square_zero(self) -> None:
        out = self.arrows_out()
        acc: dict[tuple[int, int, int], int] = {}
        for k, arrows in enumerate(out):
            for l, n1 in arrows:
                for m, n2 in out[l]:
                    key = (k, m, n1 + n2)
                    acc[key] = acc.get(key, 0) ^ 1
        if any(acc.values()):
            raise ValidationError("differential does not square to zero over F_2[U]")

    def arrows_out(self) -> list[list[tuple[int, int]]]:
        """Adjacency view of the differential: arrows_out()[k] = [(l, n), ...]."""
        out: list[list[tuple[int, int]]] = [[] for _ in self.generators]
        for (k, l), n in self.differential.items():
            out[k].append((l, n))
        return out

    @property
    def n_generators(self) -> int:
        return len(self.generators)

    @property
    def alexander_radius(self) -> int:
        """max |A(g)|; the total genus for complexes built from knots."""
        return max(abs(a) for _, a in self.generators)

    def tower_top(self) -> int:
        """Top Maslov grading of the U-non-torsion tower of the full complex."""
        return _stable_tower_top(self, (0,) * self.n_generators)

    def validate(self) -> None:
        """Re-run all construction checks plus the tower normalisation."""
        BifilteredComplex(self.generators, dict(self.differential))
        top = self.tower_top()
        if top != 0:
            raise ValidationError(f"tower normalisation broken: top grading {top} != 0")


@dataclass(frozen=True)
class TruncatedComplex:
    """Finite-dimensional F_2 model: basis U^a * g with floors[g] <= a < order."""

    base: BifilteredComplex
    order: int
    floors: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.order, int) or self.order < 1:
            raise ValidationError(f"truncation order must be a positive integer, got {self.order!r}")
        floors = self.floors or (0,) * self.base.n_generators
        floors = tuple(int(f) for f in floors)
        if len(floors) != self.base.n_generators:
            raise ValidationError("floors must give one lower U-bound per generator")
        if any(f < 0 for f in floors):
            raise ValidationError("floors must be non-negative")
        object.__setattr__(self, "floors", floors)

    @property
    def dimension(self) -> int:
        return sum(max(0, self.order - f) for f in self.floors)

    def graded_basis(self) -> dict[int, list[tuple[int, int]]]:
        """Basis elements (generator, U-power) bucketed by Maslov grading."""
        buckets: dict[int, list[tuple[int, int]]] = {}
        for g, (m, _) in enumerate(self.base.generators):
            for a in range(self.floors[g], self.order):
                buckets.setdefault(m - 2 * a, []).append((g, a))
        return buckets

    def boundary_of(self, g: int, a: int) -> list[tuple[int, int]]:
        """Image of U^a * g under the induced differential, as basis elements."""
        image = []
        for (k, l), n in self.base.differential.items():
            if k == g and a + n < self.order:
                image.append((l, a + n))
        return image


def _truncated_tower_top(trunc: TruncatedComplex, window: int) -> int | None:
    """Maximal grading with a class surviving U^window, or None if none found."""
    base = trunc.base
    order = trunc.order
    out = base.arrows_out()
    buckets = trunc.graded_basis()
    index = {m: {e: i for i, e in enumerate(lst)} for m, lst in buckets.items()}
    kernels: dict[int, list[int]] = {}
    images: dict[int, BitSpace] = {}
    for m, lst in buckets.items():
        target = index.get(m - 1, {})
        rows = []
        for g, a in lst:
            v = 0
            for l, n in out[g]:
                aa = a + n
                if aa < order:
                    v |= 1 << target[(l, aa)]
            rows.append(v)
        kernels[m] = kernel_basis(rows)
        if any(rows):
            space = images.setdefault(m - 1, BitSpace())
            for r in rows:
                space.add(r)
    for m in sorted(buckets, reverse=True):
        ker = kernels.get(m)
        if not ker:
            continue
        source = buckets[m]
        shifted = index.get(m - 2 * window, {})
        boundaries = images.get(m - 2 * window)
        for combo in ker:
            v = 0
            c = combo
            while c:
                i = (c & -c).bit_length() - 1
                c &= c - 1
                g, a = source[i]
                if a + window < order:
                    v |= 1 << shifted[(g, a + window)]
            if v and (boundaries is None or not boundaries.contains(v)):
                return m
    return None


def _truncation_order(complex_: BifilteredComplex) -> int:
    gmax = complex_.alexander_radius
    mmax = max(m for m, _ in complex_.generators)
    return max(0, mmax) // 2 + 2 * gmax + 2


def _stable_tower_top(complex_: BifilteredComplex, floors: tuple[int, ...]) -> int:
    """Tower top computed at orders N and N+1; instability raises, never returns."""
    order = _truncation_order(complex_)
    window = complex_.alexander_radius + 1
    first = _truncated_tower_top(TruncatedComplex(complex_, order, floors), window)
    second = _truncated_tower_top(TruncatedComplex(complex_, order + 1, floors), window)
    if first != second:
        raise TruncationInstabilityError(
            f"tower top changed between truncation orders {order} and {order + 1} "
            f"({first} vs {second}); a larger truncation is required"
        )
    if first is None:
        raise InternalCheckError(
            f"no U-surviving class found within truncation order {order}; "
            "a larger truncation is required"
        )
    return first


def staircase(knot: TorusKnot) -> BifilteredComplex:
    """Staircase complex of a positive torus knot.

    The symmetrised Alexander exponents of T(p,q) are the points where the
    membership indicator of Gamma(p,q) switches on or off, shifted by the
    genus.  Generators sit at those Alexander gradings in descending order;
    every odd-indexed generator maps onto its two neighbours, the higher one
    with the U-exponent that preserves the Alexander filtration sharply.
    """
    if not isinstance(knot, TorusKnot):
        raise ValidationError(f"staircase expects a TorusKnot, got {knot!r}")
    semigroup = semigroup_from_pair(knot.p, knot.q)
    g = knot.genus
    exponents: list[int] = []
    prev = False
    for m in range(semigroup.conductor + 1):
        cur = semigroup.contains(m)
        if cur != prev:
            exponents.append(m - g)
        prev = cur
    exponents.reverse()
    count = len(exponents)
    if count % 2 == 0 or exponents[0] != g or any(
        exponents[j] + exponents[count - 1 - j] != 0 for j in range(count)
    ):
        raise InternalCheckError(f"Alexander exponent set of {knot} is not symmetric")
    gens: list[tuple[int, int]] = []
    maslov = 0
    for j, alex in enumerate(exponents):
        if j == 0:
            maslov = 0
        elif j % 2 == 1:
            maslov = maslov + 1 - 2 * (exponents[j - 1] - alex)
        else:
            maslov -= 1
        gens.append((maslov, alex))
    diff: dict[tuple[int, int], int] = {}
    for j in range(1, count, 2):
        diff[(j, j - 1)] = exponents[j - 1] - exponents[j]
        diff[(j, j + 1)] = 0
    return BifilteredComplex(tuple(gens), diff)


def dualize(complex_: BifilteredComplex) -> BifilteredComplex:
    """Graded dual: (M, A) -> (-M, -A), transposed differential, tower re-topped at 0."""
    gens = tuple((-m, -a) for m, a in complex_.generators)
    diff = {(l, k): n for (k, l), n in complex_.differential.items()}
    dual = BifilteredComplex(gens, diff)
    shift = _stable_tower_top(dual, (0,) * dual.n_generators)
    if shift != 0:
        gens = tuple((m - shift, a) for m, a in gens)
        dual = BifilteredComplex(gens, diff)
    return dual


def tensor(left: BifilteredComplex, right: BifilteredComplex) -> BifilteredComplex:
    """Tensor product over F_2[U]: gradings add, differential by the Leibniz rule."""
    nright = right.n_generators
    gens = tuple(
        (m1 + m2, a1 + a2) for m1, a1 in left.generators for m2, a2 in right.generators
    )
    diff: dict[tuple[int, int], int] = {}
    for (k, l), n in left.differential.items():
        for j in range(nright):
            diff[(k * nright + j, l * nright + j)] = n
    for (k, l), n in right.differential.items():
        for i in range(left.n_generators):
            diff[(i * nright + k, i * nright + l)] = n
    return BifilteredComplex(gens, diff)


def complex_of(expr: KnotExpression | TorusKnot) -> BifilteredComplex:
    """Complex of a knot expression: staircases, duals for mirrors, tensor over #."""
    expr = as_expression(expr)
    if not expr.summands:
        return BifilteredComplex(((0, 0),), {})
    parts = [
        staircase(knot) if sign > 0 else dualize(staircase(knot))
        for knot, sign in expr.summands
    ]
    return reduce(tensor, parts)


def v_invariant(complex_: BifilteredComplex, s: int) -> int:
    """V_s: minus half the tower-top grading of the sublevel subcomplex A_s^-."""
    if not isinstance(s, int) or s < 0:
        raise ValidationError(f"V-invariant level must be a non-negative integer, got {s!r}")
    floors = tuple(max(0, a - s) for _, a in complex_.generators)
    top = _stable_tower_top(complex_, floors)
    if top > 0 or top % 2 != 0:
        raise InternalCheckError(
            f"sublevel tower top {top} at level {s} is not an even non-positive grading"
        )
    return -top // 2


# Optional memo used by the CLI cache; maps canonical expression strings to
# V-sequence value lists.  None disables memoisation (the library default).
_v_memo: MutableMapping[str, list[int]] | None = None


def set_v_memo(memo: MutableMapping[str, list[int]] | None):
    """Install a V-sequence memo (or None to disable); returns the previous one."""
    global _v_memo
    previous = _v_memo
    _v_memo = memo
    return previous


def v_sequence(expr: KnotExpression | TorusKnot) -> VSequence:
    """V-sequence of an expression.

    Single positive torus knots take the semigroup fast path; everything else
    goes through the chain complex, one sublevel homology per index.  Where
    both paths apply they are compared (debug builds, small genus).
    """
    expr = as_expression(expr)
    key = str(expr)
    if _v_memo is not None and key in _v_memo:
        try:
            return VSequence(tuple(int(x) for x in _v_memo[key]))
        except (ValidationError, TypeError, ValueError):
            pass  # stale or corrupt memo entry: recompute and overwrite
    knot = expr.single_positive_torus_knot()
    if knot is not None:
        seq = v_sequence_torus(knot)
        if __debug__ and knot.genus <= 12:
            chain = complex_of(expr)
            for s in range(knot.genus + 1):
                hom = v_invariant(chain, s)
                if hom != seq.at(s):
                    raise InternalCheckError(
                        f"path disagreement on {knot} at level {s}: "
                        f"semigroup {seq.at(s)}, homology {hom}"
                    )
    elif expr.is_unknot:
        seq = VSequence(())
    else:
        chain = complex_of(expr)
        values = tuple(v_invariant(chain, s) for s in range(expr.genus + 1))
        try:
            seq = VSequence(values)
        except ValidationError as exc:
            raise InternalCheckError(f"computed V-values violate monotonicity: {exc}") from exc
    if _v_memo is not None:
        _v_memo[key] = list(seq.values)
    return seq


def v_at(expr: KnotExpression | TorusKnot, s: int) -> int:
    """V_s of an expression without computing the whole sequence."""
    expr = as_expression(expr)
    if not isinstance(s, int) or s < 0:
        raise ValidationError(f"V-sequence index must be a non-negative integer, got {s!r}")
    if expr.is_unknot:
        return 0
    key = str(expr)
    if _v_memo is not None and key in _v_memo:
        try:
            return VSequence(tuple(int(x) for x in _v_memo[key])).at(s)
        except (ValidationError, TypeError, ValueError):
            pass
    knot = expr.single_positive_torus_knot()
    if knot is not None:
        return v_sequence_torus(knot).at(s)
    return v_invariant(complex_of(expr), s)
