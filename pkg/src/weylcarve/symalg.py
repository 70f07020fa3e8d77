"""The group algebra Q[S_s]: Young symmetrizers and the place-permutation
action on the pure tensor part of the exterior module.

Permutations are tuples of 0-based images, composed as functions:
(sigma * tau)(i) = sigma(tau(i)).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product
from math import factorial

from .errors import NotQuasiIdempotent, WrongDegree
from .repspace import GradedSpace, LinMap, Subspace, coordinate_subspace


def compose(sigma, tau):
    return tuple(sigma[t] for t in tau)


def inverse(sigma):
    out = [0] * len(sigma)
    for i, x in enumerate(sigma):
        out[x] = i
    return tuple(out)


def sign(sigma) -> int:
    seen = [False] * len(sigma)
    parity = 0
    for i in range(len(sigma)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = sigma[j]
                length += 1
            parity += length - 1
    return -1 if parity % 2 else 1


class GroupAlgElem:
    """Finite Q-linear combination of permutations of {0..s-1}."""

    __slots__ = ("s", "coeffs")

    def __init__(self, s: int, coeffs=None):
        self.s = s
        self.coeffs = {p: Fraction(c) for p, c in (coeffs or {}).items() if c}

    @classmethod
    def identity(cls, s):
        return cls(s, {tuple(range(s)): 1})

    @classmethod
    def perm(cls, sigma):
        return cls(len(sigma), {tuple(sigma): 1})

    def __add__(self, other):
        out = dict(self.coeffs)
        for p, c in other.coeffs.items():
            out[p] = out.get(p, 0) + c
        return GroupAlgElem(self.s, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return GroupAlgElem(self.s, {p: c * x for p, x in self.coeffs.items()})

    def __mul__(self, other):
        if not isinstance(other, GroupAlgElem):
            return self.scale(other)
        out: dict = {}
        for p, x in self.coeffs.items():
            for q, y in other.coeffs.items():
                r = compose(p, q)
                out[r] = out.get(r, 0) + x * y
        return GroupAlgElem(self.s, out)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, GroupAlgElem):
            return NotImplemented
        return self.s == other.s and self.coeffs == other.coeffs

    __hash__ = None

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs.values())

    def support(self):
        return sorted(self.coeffs)

    def __repr__(self):
        terms = ", ".join(f"{p}: {c}" for p, c in sorted(self.coeffs.items()))
        return f"GroupAlgElem(s={self.s}, {{{terms}}})"


def is_partition(lam) -> bool:
    return all(x > 0 for x in lam) and all(lam[i] >= lam[i + 1] for i in range(len(lam) - 1))


def canonical_tableau(lam) -> list[list[int]]:
    """Row-major filling of the Young diagram with 0..s-1."""
    rows, k = [], 0
    for length in lam:
        rows.append(list(range(k, k + length)))
        k += length
    return rows


def _stabilizer(blocks, s):
    """All permutations preserving each block setwise."""
    for choice in product(*(permutations(b) for b in blocks)):
        sigma = list(range(s))
        for block, img in zip(blocks, choice):
            for src, dst in zip(block, img):
                sigma[src] = dst
        yield tuple(sigma)


def young_symmetrizer(lam) -> GroupAlgElem:
    """c_lambda = a_lambda * b_lambda for the canonical tableau."""
    lam = tuple(lam)
    if not is_partition(lam):
        raise ValueError(f"{lam} is not a partition")
    s = sum(lam)
    rows = canonical_tableau(lam)
    cols = [[r[i] for r in rows if i < len(r)] for i in range(lam[0])] if lam else []
    a = GroupAlgElem(s, {p: 1 for p in _stabilizer(rows, s)})
    b = GroupAlgElem(s, {p: sign(p) for p in _stabilizer(cols, s)})
    if s == 0:
        return GroupAlgElem.identity(0)
    return a * b


def idempotent_scale(c: GroupAlgElem) -> tuple[GroupAlgElem, int]:
    """(c/n, n) where c^2 = n c."""
    sq = c * c
    if not c.coeffs:
        raise NotQuasiIdempotent("zero element")
    p0 = min(c.coeffs)
    n = sq.coeffs.get(p0, Fraction(0)) / c.coeffs[p0]
    if n == 0 or sq != c.scale(n) or n.denominator != 1 or n < 0:
        raise NotQuasiIdempotent("c^2 is not a positive integer multiple of c")
    n = int(n)
    return c.scale(Fraction(1, n)), n


def young_idempotent(lam) -> tuple[GroupAlgElem, int]:
    return idempotent_scale(young_symmetrizer(lam))


def permutation_matrix(sigma) -> list[list[int]]:
    """The integer matrix whose act_matrix moves slot j to slot sigma(j)."""
    s = len(sigma)
    return [[int(i == sigma[j]) for i in range(s)] for j in range(s)]


def pure_tensor_subspace(sp: GradedSpace) -> Subspace:
    return coordinate_subspace(sp, sp.pure_tensor_masks())


def act_on_tensor(x: GroupAlgElem, sub: Subspace) -> LinMap:
    """Place permutation sigma(v_1 (x) ... (x) v_s) = v_{sigma^-1(1)} (x) ... .

    The tensor v_1 (x) ... (x) v_s is identified with the slot-ordered wedge
    v_1[1] ^ ... ^ v_s[s].  The map is zero off the pure tensor part.
    """
    sp = sub.space
    if x.s != sp.s:
        raise WrongDegree(f"group algebra on {x.s} letters, module has s={sp.s}")
    if sub != pure_tensor_subspace(sp):
        raise WrongDegree("act_on_tensor needs the pure tensor subspace")
    one = sp.one()
    cols = {}
    for mask in sp.pure_tensor_masks():
        ks = sp.tensor_indices(mask)
        col: dict = {}
        for sigma, c in x.coeffs.items():
            moved = [0] * sp.s
            for j, k in enumerate(ks):
                moved[sigma[j]] = k
            tgt = sp.tensor_mask(moved)
            col[tgt] = col.get(tgt, 0) + c * one
        cols[mask] = col
    return LinMap(sp, cols)


def n_divides_factorial(lam) -> bool:
    _, n = young_idempotent(lam)
    return factorial(sum(lam)) % n == 0
