"""Dense GF(2) linear algebra on Python-int bit rows."""

from __future__ import annotations


class BitSpace:
    """A subspace of F_2^n held as echelonised rows keyed by pivot bit."""

    __slots__ = ("rows",)

    def __init__(self) -> None:
        self.rows: dict[int, int] = {}

    def reduce(self, v: int) -> int:
        """Reduce v against the stored rows; a nonzero result has a new pivot."""
        rows = self.rows
        while v:
            row = rows.get(v.bit_length() - 1)
            if row is None:
                return v
            v ^= row
        return 0

    def add(self, v: int) -> bool:
        """Insert v; True when it enlarged the space."""
        v = self.reduce(v)
        if not v:
            return False
        self.rows[v.bit_length() - 1] = v
        return True

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    @property
    def rank(self) -> int:
        return len(self.rows)


def kernel_basis(rows: list[int]) -> list[int]:
    """Basis of the left kernel: bitmasks c with XOR of rows[i] over i in c zero."""
    pivots: dict[int, tuple[int, int]] = {}
    kernel: list[int] = []
    for idx, row in enumerate(rows):
        tag = 1 << idx
        while row:
            hit = pivots.get(row.bit_length() - 1)
            if hit is None:
                break
            row ^= hit[0]
            tag ^= hit[1]
        if row:
            pivots[row.bit_length() - 1] = (row, tag)
        else:
            kernel.append(tag)
    return kernel
