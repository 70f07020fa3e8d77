"""Exact scalars: rationals, imaginary quadratic fields, p-adic valuations,
and integer polynomials with Bezout identities.

Rationals are :class:`fractions.Fraction`; everything here is immutable.
"""

from __future__ import annotations

import math
from enum import Enum
from fractions import Fraction
from functools import reduce

from .errors import NotCoprime, PreconditionError, RamifiedPrime

Rat = Fraction

INF = math.inf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def require_prime(p: int) -> None:
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime", hypothesis="requires p prime")


def is_squarefree(d: int) -> bool:
    if d < 1:
        return False
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


def _int_val(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def padic_val(r, p: int):
    """v_p(r) for a rational r; ``math.inf`` for zero."""
    r = Fraction(r)
    if r == 0:
        return INF
    return _int_val(r.numerator, p) - _int_val(r.denominator, p)


class QuadElem:
    """x + y*sqrt(-d) in Q(sqrt(-d)), d positive and square-free."""

    __slots__ = ("x", "y", "d")

    def __init__(self, x=0, y=0, d: int = 1):
        self.x = x if type(x) is Fraction else Fraction(x)
        self.y = y if type(y) is Fraction else Fraction(y)
        self.d = d

    @classmethod
    def check_disc(cls, d: int) -> int:
        if not is_squarefree(d):
            raise PreconditionError(f"disc {d} is not a positive square-free integer",
                                    hypothesis="requires d positive square-free")
        return d

    def _lift(self, other):
        if isinstance(other, QuadElem):
            if other.d != self.d:
                raise ValueError(f"mixing Q(sqrt(-{self.d})) and Q(sqrt(-{other.d}))")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElem(other, 0, self.d)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.x + o.x, self.y + o.y, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(-self.x, -self.y, self.d)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return QuadElem(self.x - o.x, self.y - o.y, self.d)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadElem(self.x * other, self.y * other, self.d)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if not o.y:
            return QuadElem(self.x * o.x, self.y * o.x, self.d)
        if not self.y:
            return QuadElem(self.x * o.x, self.x * o.y, self.d)
        return QuadElem(self.x * o.x - self.d * self.y * o.y,
                        self.x * o.y + self.y * o.x, self.d)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.x * self.x + self.d * self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x

    def conj(self) -> QuadElem:
        return QuadElem(self.x, -self.y, self.d)

    def inverse(self) -> QuadElem:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("QuadElem division by zero")
        return QuadElem(self.x / n, -self.y / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadElem(self.x / other, self.y / other, self.d)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = QuadElem(1, 0, self.d)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.x == o.x and self.y == o.y

    def __hash__(self):
        return hash((self.x, self.y, self.d))

    def __bool__(self):
        return bool(self.x) or bool(self.y)

    def __repr__(self):
        return f"QuadElem({self.x}, {self.y}, d={self.d})"

    def __str__(self):
        if not self.y:
            return str(self.x)
        return f"{self.x}{'+' if self.y > 0 else '-'}{abs(self.y)}*sqrt(-{self.d})"

    # the two embeddings E -> E
    def embed_i(self) -> QuadElem:
        return self

    def embed_j(self) -> QuadElem:
        return self.conj()

    def integral_coords(self) -> tuple[Fraction, Fraction]:
        """Coordinates on the basis (1, w) of the maximal order.

        w = sqrt(-d) for d = 1, 2 mod 4 and w = (1 + sqrt(-d))/2 for d = 3 mod 4.
        """
        if self.d % 4 == 3:
            return self.x - self.y, 2 * self.y
        return self.x, self.y

    def is_algebraic_integer(self) -> bool:
        return all(c.denominator == 1 for c in self.integral_coords())


def ring_generator(d: int) -> QuadElem:
    if d % 4 == 3:
        return QuadElem(Fraction(1, 2), Fraction(1, 2), d)
    return QuadElem(0, 1, d)


def from_integral_coords(alpha: int, beta: int, d: int) -> QuadElem:
    return alpha + beta * ring_generator(d)


def field_discriminant(d: int) -> int:
    return -d if d % 4 == 3 else -4 * d


def _check_unramified(d: int, p: int) -> None:
    if field_discriminant(d) % p == 0:
        raise RamifiedPrime(f"p={p} ramifies in Q(sqrt(-{d}))")


def quad_val(e, p: int):
    """Minimum p-adic valuation of the integral-basis coordinates of e."""
    if isinstance(e, QuadElem):
        return min(padic_val(c, p) for c in e.integral_coords())
    return padic_val(e, p)


def is_p_integral(e, p: int) -> bool:
    require_prime(p)
    if isinstance(e, QuadElem):
        _check_unramified(e.d, p)
    return quad_val(e, p) >= 0


class Splitting(str, Enum):
    INERT = "Inert"
    SPLIT = "Split"
    RAMIFIED = "Ramified"


def splitting_type(d: int, p: int) -> Splitting:
    """Decomposition type of p in the ring of integers of Q(sqrt(-d))."""
    require_prime(p)
    disc = field_discriminant(d)
    if disc % p == 0:
        return Splitting.RAMIFIED
    if p == 2:
        # disc = -d = 1 mod 4 here; Kronecker symbol (disc/2)
        return Splitting.SPLIT if disc % 8 == 1 else Splitting.INERT
    return Splitting.SPLIT if pow(disc % p, (p - 1) // 2, p) == 1 else Splitting.INERT


def min_poly_generator(d: int) -> tuple[int, int, int]:
    """Coefficients (c0, c1, c2) of the monic minimal polynomial of ring_generator(d)."""
    if d % 4 == 3:
        return ((1 + d) // 4, -1, 1)
    return (d, 0, 1)


class IntPoly:
    """Polynomial with integer coefficients, constant term first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = [int(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if isinstance(other, IntPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"

    def __add__(self, other):
        return IntPoly(_padd(self.coeffs, other.coeffs))

    def __sub__(self, other):
        return IntPoly(_padd(self.coeffs, [-c for c in other.coeffs]))

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly([c * other for c in self.coeffs])
        return IntPoly(_pmul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def content(self) -> int:
        return reduce(math.gcd, self.coeffs, 0)


def _padd(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _pmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pdivmod(a, b):
    """Division with remainder over Q; coefficient lists of Fractions."""
    a = _trim(Fraction(c) for c in a)
    b = _trim(Fraction(c) for c in b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b):
        k = len(a) - len(b)
        f = a[-1] / lead
        q[k] = f
        for i, c in enumerate(b):
            a[i + k] -= f * c
        a = _trim(a)
    return q, a


def poly_xgcd(a, b):
    """Extended Euclid over Q: returns (g, u, v) with u*a + v*b = g, g monic."""
    r0, r1 = _trim(Fraction(c) for c in a), _trim(Fraction(c) for c in b)
    u0, u1 = [Fraction(1)], []
    v0, v1 = [], [Fraction(1)]
    while r1:
        q, r = _pdivmod(r0, r1)
        r0, r1 = r1, r
        u0, u1 = u1, _trim(_padd(u0, [-c for c in _pmul(q, u1)]))
        v0, v1 = v1, _trim(_padd(v0, [-c for c in _pmul(q, v1)]))
    lead = r0[-1]
    return ([c / lead for c in r0], [c / lead for c in u0], [c / lead for c in v0])


def poly_bezout(Q: IntPoly, T: IntPoly) -> tuple[IntPoly, IntPoly, int]:
    """Integer Bezout identity U*Q + V*T = c with the minimal positive c.

    deg U < deg T and deg V < deg Q (when those degrees are positive).
    """
    if Q.is_zero() or T.is_zero():
        raise NotCoprime("zero polynomial in Bezout identity")
    g, u, v = poly_xgcd(Q.coeffs, T.coeffs)
    if len(g) > 1:
        raise NotCoprime(f"gcd of {Q} and {T} has degree {len(g) - 1}",
                         hypothesis="requires pairwise distinct eigenvalues (coprime Q, T)")
    # normalize to the unique solution with deg u < deg T
    if T.degree > 0:
        _, u = _pdivmod(u, T.coeffs)
        num = _padd([1], [-c for c in _pmul(u, Q.coeffs)])
        v, rem = _pdivmod(num, T.coeffs)
        assert not rem
    else:
        u = []
        v = [Fraction(1, T.coeffs[0])]
    u, v = _trim(u), _trim(v)
    denom = 1
    for c in u + v:
        denom = denom * c.denominator // math.gcd(denom, c.denominator)
    U = [int(c * denom) for c in u]
    V = [int(c * denom) for c in v]
    common = reduce(math.gcd, U + V + [denom], 0)
    return (IntPoly([x // common for x in U]), IntPoly([x // common for x in V]),
            denom // common)


def poly_from_roots(roots, d: int | None = None) -> IntPoly:
    """Product of (X - r) over roots; raises if the result is not in Z[X]."""
    coeffs = [1 if d is None else QuadElem(1, 0, d)]
    for r in roots:
        shifted = [0] + coeffs
        for i, c in enumerate(coeffs):
            shifted[i] = shifted[i] - r * c
        coeffs = shifted
    out = []
    for c in coeffs:
        if isinstance(c, QuadElem):
            if c.y != 0 or c.x.denominator != 1:
                raise ValueError("polynomial does not have integer coefficients")
            out.append(int(c.x))
        else:
            c = Fraction(c)
            if c.denominator != 1:
                raise ValueError("polynomial does not have integer coefficients")
            out.append(int(c))
    return IntPoly(out)
