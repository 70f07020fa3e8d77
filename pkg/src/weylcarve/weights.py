"""Dominant weights (a_1, ..., a_g; c) of the split similitude groups."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import InvalidWeight, NotEffective


class Case(str, Enum):
    UNITARY = "unitary"
    SIEGEL = "siegel"


@dataclass(frozen=True)
class Weight:
    entries: tuple[int, ...]
    c: int
    case: Case = Case.UNITARY

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(int(a) for a in self.entries))
        object.__setattr__(self, "case", Case(self.case))
        es = self.entries
        if any(es[i] < es[i + 1] for i in range(len(es) - 1)):
            raise InvalidWeight(f"{self} is not dominant (need a1 >= ... >= ag)")
        if self.case is Case.UNITARY and (sum(es) - self.c) % 2:
            raise InvalidWeight(f"{self} violates sum(a_i) = c (mod 2)")
        if self.case is Case.SIEGEL and es and es[-1] < 0:
            raise InvalidWeight(f"{self} is not dominant for the symplectic group")

    @classmethod
    def raw(cls, entries, c, case=Case.UNITARY) -> Weight:
        """A torus weight without the dominance and parity checks."""
        w = object.__new__(cls)
        object.__setattr__(w, "entries", tuple(int(a) for a in entries))
        object.__setattr__(w, "c", int(c))
        object.__setattr__(w, "case", Case(case))
        return w

    @property
    def g(self) -> int:
        return len(self.entries)

    def __str__(self):
        return ",".join(str(a) for a in self.entries) + f";{self.c}"

    @classmethod
    def parse(cls, text: str, case=Case.UNITARY) -> Weight:
        """Parse the text form ``"a1,a2,...,ag;c"``."""
        try:
            head, c = text.split(";")
            entries = tuple(int(a) for a in head.split(",")) if head.strip() else ()
            return cls(entries, int(c), case)
        except ValueError as exc:
            raise InvalidWeight(f"cannot parse weight {text!r}: expected 'a1,...,ag;c'") from exc


def dual_weight(a: Weight) -> Weight:
    return Weight(tuple(-x for x in reversed(a.entries)), a.c, a.case)


def rho_pairings(a: Weight) -> list[int]:
    """<a + rho, beta^vee> over the positive roots beta."""
    es, g = a.entries, a.g
    if a.case is Case.UNITARY:
        return [es[i] - es[j] + j - i for i in range(g) for j in range(i + 1, g)]
    shifted = [es[i] + g - i for i in range(g)]
    out = [shifted[i] - shifted[j] for i in range(g) for j in range(i + 1, g)]
    out += [shifted[i] + shifted[j] for i in range(g) for j in range(i + 1, g)]
    out += shifted
    return out


def is_p_small(a: Weight, p: int) -> bool:
    return all(x <= p for x in rho_pairings(a))


def is_p_small_boundary(a: Weight, p: int) -> bool:
    """True when some pairing equals p exactly; the inequality's boundary is not pinned down."""
    return p in rho_pairings(a)


def weyl_dim(a: Weight) -> int:
    es, g = a.entries, a.g
    num = Fraction(1)
    for i in range(g):
        for j in range(i + 1, g):
            num *= Fraction(es[i] - es[j] + j - i, j - i)
    assert num.denominator == 1
    return int(num)


def partition_of(a: Weight) -> tuple[tuple[int, ...], int]:
    """The partition lambda = (a_1, ..., a_g) (zeros dropped) and s = sum(a_i)."""
    if a.case is not Case.UNITARY:
        raise NotEffective("only unitary weights are carveable")
    if a.entries and a.entries[-1] < 0:
        raise NotEffective(f"{a} has a_g < 0")
    s = sum(a.entries)
    if a.c != s:
        raise NotEffective(f"{a} has c != sum(a_i)")
    return tuple(x for x in a.entries if x > 0), s


def effective_weights(g: int, s: int):
    """All dominant effective unitary weights with g entries summing to s."""
    def parts(n, k, cap):
        if k == 0:
            if n == 0:
                yield ()
            return
        for first in range(min(n, cap), -1, -1):
            for rest in parts(n - first, k - 1, first):
                yield (first,) + rest
    for lam in parts(s, g, s):
        yield Weight(lam, s)
