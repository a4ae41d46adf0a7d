"""Correction terms of integer surgeries and circle-bundle/Seifert arithmetic.

All values are exact `fractions.Fraction`s; no floating point appears
anywhere.  Positive surgery coefficients only: a negative surgery on K is
handled by the caller as the positive surgery on the mirror -K.

The d-invariant of n-surgery in the spin^c sector labelled i (chern number
n - 2i) is

    d(S^3_n(K), t_i) = -2 max{V_i(K), V_{n-i}(K)} + (n-2i)^2/(4n) - 1/4,

and the twisted correction term of the 0-surgery is

    dtw(S^3_0(K)) = -1/2 + 2 V_0(-K).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .complexes import v_at, v_sequence
from .errors import InternalCheckError, ValidationError
from .knots import KnotExpression, TorusKnot, as_expression
from .semigroup import VSequence


@dataclass(frozen=True)
class SpincLabel:
    """Spin^c label i on n-surgery, with chern number n - 2i."""

    n: int
    i: int

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ValidationError(f"surgery coefficient must be a positive integer, got {self.n!r}")
        if not isinstance(self.i, int) or not 0 <= self.i < self.n:
            raise ValidationError(f"spin^c index must satisfy 0 <= i < n, got i={self.i!r}, n={self.n}")

    @property
    def chern(self) -> int:
        return self.n - 2 * self.i

    def conjugate(self) -> "SpincLabel":
        return SpincLabel(self.n, (self.n - self.i) % self.n)


@dataclass(frozen=True)
class CorrectionTable:
    """d-invariants of one n-surgery, fully populated over i = 0..n-1."""

    n: int
    entries: dict[int, Fraction]

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ValidationError(f"surgery coefficient must be a positive integer, got {self.n!r}")
        entries = {int(i): Fraction(v) for i, v in self.entries.items()}
        object.__setattr__(self, "entries", entries)
        if set(entries) != set(range(self.n)):
            raise ValidationError(
                f"correction table must cover exactly i = 0..{self.n - 1}, got {sorted(entries)}"
            )
        for i in range(1, self.n):
            if entries[i] != entries[self.n - i]:
                raise ValidationError(
                    f"conjugation symmetry broken: d[{i}] = {entries[i]} != d[{self.n - i}] = {entries[self.n - i]}"
                )

    def __getitem__(self, i: int) -> Fraction:
        return self.entries[i]


def d_positive_surgery(
    knot: KnotExpression | TorusKnot,
    n: int,
    i: int,
    vseq: VSequence | None = None,
) -> Fraction:
    """d(S^3_n(K), t_i) for positive n via the surgery formula above."""
    label = SpincLabel(n, i)  # validates n >= 1 and 0 <= i < n
    if vseq is None:
        expr = as_expression(knot)
        vi = v_at(expr, label.i)
        vni = v_at(expr, n - label.i)
    else:
        vi = vseq.at(label.i)
        vni = vseq.at(n - label.i)
    return -2 * max(vi, vni) + Fraction(label.chern * label.chern, 4 * n) - Fraction(1, 4)


def correction_table(knot: KnotExpression | TorusKnot, n: int) -> CorrectionTable:
    """All d-invariants of the n-surgery, built eagerly (symmetry fail-fast)."""
    if not isinstance(n, int) or n < 1:
        raise ValidationError(f"surgery coefficient must be a positive integer, got {n!r}")
    expr = as_expression(knot)
    seq = v_sequence(expr)
    return CorrectionTable(n, {i: d_positive_surgery(expr, n, i, vseq=seq) for i in range(n)})


def d_zero_twisted(knot: KnotExpression | TorusKnot) -> Fraction:
    """Twisted correction term of the 0-surgery: -1/2 + 2 V_0(-K)."""
    expr = as_expression(knot)
    return Fraction(-1, 2) + 2 * v_at(expr.mirror(), 0)


def d_circle_bundle_twisted(g: int) -> Fraction:
    """Twisted correction term of (genus-g surface) x S^1: (-1)^(g+1) / 2."""
    if not isinstance(g, int) or g < 0:
        raise ValidationError(f"genus must be a non-negative integer, got {g!r}")
    return Fraction((-1) ** (g + 1), 2)


def combined_invariant(g: int) -> int:
    """4 dtw + 2 b_1 of the circle bundle, equal to 8 ceil(g/2)."""
    value = 4 * d_circle_bundle_twisted(g) + 2 * (2 * g + 1)
    expected = 8 * ((g + 1) // 2)
    if value != expected:
        raise InternalCheckError(f"ceiling identity failed at g={g}: {value} != {expected}")
    return int(value)


def ncf_eval(coeffs: list[int]) -> Fraction:
    """Negative continued fraction [a_1,...,a_k]^- = a_1 - 1/(a_2 - 1/(...))."""
    if not coeffs:
        raise ValidationError("negative continued fraction needs at least one coefficient")
    for a in coeffs:
        if not isinstance(a, int) or a < 2:
            raise ValidationError(f"coefficients must be integers >= 2, got {a!r}")
    value = Fraction(coeffs[-1])
    for a in reversed(coeffs[:-1]):
        value = a - 1 / value
    return value


def ncf_expand(value: Fraction | int) -> list[int]:
    """Inverse of `ncf_eval` on rationals > 1 (round-trip identity)."""
    r = Fraction(value)
    if r <= 1:
        raise ValidationError(f"negative continued fractions expand only rationals > 1, got {r}")
    coeffs: list[int] = []
    while True:
        a = -((-r.numerator) // r.denominator)  # ceil
        coeffs.append(a)
        if a == r:
            return coeffs
        r = 1 / (a - r)


@dataclass(frozen=True)
class SeifertPresentation:
    """Seifert fibred space M(e0; r_1,...,r_k) over S^2; fibres in (0,1)."""

    e0: int
    fibers: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not isinstance(self.e0, int):
            raise ValidationError(f"e0 must be an integer, got {self.e0!r}")
        fibers = tuple(Fraction(r) for r in self.fibers)
        object.__setattr__(self, "fibers", fibers)
        for r in fibers:
            if not 0 < r < 1:
                raise ValidationError(f"fibre invariant {r} is not in (0,1)")

    @property
    def euler_number(self) -> Fraction:
        return self.e0 + sum(self.fibers, Fraction(0))


def euler_number(presentation: SeifertPresentation) -> Fraction:
    """e0 + sum of fibre invariants, exactly."""
    return presentation.euler_number


def kn_seifert(n: int) -> SeifertPresentation:
    """The four-fibre presentation M(-2; 2n/(2n+1), 2n/(2n+1), 2/(4n+3), 2/(4n+3)).

    This is the (4n+2)(4n+3)-surgery on T(2n+1,4n+3) # T(2n+1,4n+3); its
    fibre invariants come from the expansions [2,...,2]^- = (2n+1)/(2n) and
    [2n+2,2]^- = (4n+3)/2, and its Euler number 2(2/(4n+3) - 1/(2n+1)) is
    negative for every n >= 1.
    """
    if not isinstance(n, int) or n < 1:
        raise ValidationError(f"family index must be a positive integer, got {n!r}")
    body = Fraction(2 * n, 2 * n + 1)
    cusp = Fraction(2, 4 * n + 3)
    return SeifertPresentation(-2, (body, body, cusp, cusp))
