from fractions import Fraction
from math import gcd, inf

import pytest
from hypothesis import given
from hypothesis import strategies as st

from weylcarve.errors import NotCoprime, PreconditionError, RamifiedPrime
from weylcarve.exactnum import (
    IntPoly,
    QuadElem,
    Splitting,
    field_discriminant,
    from_integral_coords,
    is_p_integral,
    min_poly_generator,
    padic_val,
    poly_bezout,
    poly_from_roots,
    quad_val,
    ring_generator,
    splitting_type,
)

PRIMES_100 = [p for p in range(2, 100) if all(p % k for k in range(2, p))]

nonzero_rats = st.fractions(max_denominator=10**6).filter(lambda r: r != 0)
small_rats = st.fractions(min_value=-50, max_value=50, max_denominator=30)
discs = st.sampled_from([1, 2, 3, 5, 7, 11])


@st.composite
def quads(draw, d=None):
    d = draw(discs) if d is None else d
    return QuadElem(draw(small_rats), draw(small_rats), d)


# --- valuations ----------------------------------------------------------------

@pytest.mark.parametrize("r,p,v", [(Fraction(1, 2), 2, -1), (0, 5, inf), (Fraction(50, 3), 5, 2),
                                   (Fraction(-12, 5), 3, 1), (7, 7, 1), (1, 11, 0)])
def test_padic_val_examples(r, p, v):
    assert padic_val(r, p) == v


@given(nonzero_rats, nonzero_rats, st.sampled_from(PRIMES_100[:8]))
def test_padic_val_is_multiplicative(r, s, p):
    assert padic_val(r * s, p) == padic_val(r, p) + padic_val(s, p)


@given(nonzero_rats, nonzero_rats, st.sampled_from([2, 3, 5]))
def test_padic_val_ultrametric(r, s, p):
    if r + s != 0:
        assert padic_val(r + s, p) >= min(padic_val(r, p), padic_val(s, p))


# --- the quadratic field -----------------------------------------------------------

@given(st.data())
def test_field_axioms(data):
    d = data.draw(discs)
    x, y, z = (data.draw(quads(d)) for _ in range(3))
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x and x * y == y * x
    assert x - x == 0
    if x:
        assert x * x.inverse() == 1
        assert (y / x) * x == y


@given(st.data())
def test_conjugation(data):
    d = data.draw(discs)
    x, y = data.draw(quads(d)), data.draw(quads(d))
    assert x.conj().conj() == x
    assert (x * y).conj() == x.conj() * y.conj()
    assert (x * y).norm() == x.norm() * y.norm()
    assert x * x.conj() == x.norm()
    assert x.embed_j() == x.embed_i().conj()


def test_mixed_discriminants_rejected():
    with pytest.raises(ValueError):
        QuadElem(1, 1, 1) + QuadElem(1, 1, 2)


def test_powers():
    i = QuadElem(0, 1, 1)
    assert i ** 2 == -1 and i ** 4 == 1 and i ** -1 == -i


def test_integral_coordinates():
    w = QuadElem(Fraction(1, 2), Fraction(1, 2), 3)
    assert w.integral_coords() == (0, 1)
    assert w.is_algebraic_integer()
    assert not QuadElem(Fraction(1, 2), Fraction(1, 2), 1).is_algebraic_integer()
    for d in (1, 2, 3, 7, 11):
        for a in range(-3, 4):
            for b in range(-3, 4):
                assert from_integral_coords(a, b, d).integral_coords() == (a, b)


def test_is_p_integral_examples():
    assert is_p_integral(QuadElem(Fraction(1, 3), Fraction(2, 3), 1), 5)
    assert not is_p_integral(QuadElem(Fraction(1, 5), 0, 1), 5)
    with pytest.raises(RamifiedPrime):
        is_p_integral(QuadElem(7, 1, 1), 2)


def test_quad_val_uses_the_maximal_order():
    # (1 + sqrt(-3))/2 is integral although its rational coordinates have denominator 2
    assert quad_val(QuadElem(Fraction(1, 2), Fraction(1, 2), 3), 2) == 0
    assert quad_val(QuadElem(Fraction(1, 2), Fraction(1, 2), 1), 2) == -1
    assert quad_val(QuadElem(0, 0, 1), 3) == inf


def test_disc_must_be_squarefree():
    for bad in (0, 4, 12, -1):
        with pytest.raises(PreconditionError):
            QuadElem.check_disc(bad)


# --- splitting ---------------------------------------------------------------------

@pytest.mark.parametrize("d,p,kind", [(1, 5, Splitting.SPLIT), (1, 7, Splitting.INERT),
                                      (1, 2, Splitting.RAMIFIED), (3, 3, Splitting.RAMIFIED),
                                      (7, 2, Splitting.SPLIT), (3, 2, Splitting.INERT)])
def test_splitting_examples(d, p, kind):
    assert splitting_type(d, p) is kind


def brute_force_splitting(d, p):
    """Factor the minimal polynomial of the ring generator mod p."""
    c0, c1, _ = min_poly_generator(d)
    roots = [x for x in range(p) if (x * x + c1 * x + c0) % p == 0]
    if len(roots) == 2:
        return Splitting.SPLIT
    if len(roots) == 1:
        return Splitting.RAMIFIED
    return Splitting.INERT


@pytest.mark.parametrize("d", [1, 2, 3, 7, 11])
def test_splitting_agrees_with_factor_search(d):
    for p in PRIMES_100:
        assert splitting_type(d, p) is brute_force_splitting(d, p), (d, p)


@pytest.mark.parametrize("d", [1, 2, 3, 7, 11, 15])
def test_min_poly_generator_annihilates(d):
    c0, c1, c2 = min_poly_generator(d)
    w = ring_generator(d)
    assert c2 * w * w + c1 * w + c0 == 0
    assert c1 * c1 - 4 * c0 * c2 == field_discriminant(d)


# --- polynomials -----------------------------------------------------------------

def sylvester_resultant(f, g):
    """Res(f, g) as the determinant of the Sylvester matrix."""
    a = list(reversed(f.coeffs))
    b = list(reversed(g.coeffs))
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    if size == 0:
        return Fraction(1)
    rows = [[0] * i + a + [0] * (size - m - 1 - i) for i in range(n)]
    rows += [[0] * i + b + [0] * (size - n - 1 - i) for i in range(m)]
    mat = [[Fraction(x) for x in r] for r in rows]
    det = Fraction(1)
    for c in range(size):
        piv = next((r for r in range(c, size) if mat[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            mat[c], mat[piv] = mat[piv], mat[c]
            det = -det
        det *= mat[c][c]
        for r in range(c + 1, size):
            f_ = mat[r][c] / mat[c][c]
            for k in range(c, size):
                mat[r][k] -= f_ * mat[c][k]
    return det


def check_bezout(Q, T, U, V, c):
    assert U * Q + V * T == IntPoly([c])
    assert c > 0
    assert U.degree < T.degree or T.degree == 0
    assert V.degree < Q.degree or V.is_zero()
    coeffs = list(U.coeffs) + list(V.coeffs) + [c]
    content = 0
    for x in coeffs:
        content = gcd(content, x)
    assert content == 1


def test_bezout_examples():
    assert poly_bezout(IntPoly([-1, 1]), IntPoly([1, 1])) == (IntPoly([-1]), IntPoly([1]), 2)
    U, V, c = poly_bezout(IntPoly([1]), IntPoly([3, 0, 1]))
    assert (U, V, c) == (IntPoly([1]), IntPoly([]), 1)
    Q, T = IntPoly([1, 0, 1]), IntPoly([-2, 1])
    U, V, c = poly_bezout(Q, T)
    assert c == 5 == sylvester_resultant(Q, T)
    check_bezout(Q, T, U, V, c)


def test_bezout_rejects_common_factor():
    with pytest.raises(NotCoprime):
        poly_bezout(IntPoly([-1, 0, 1]), IntPoly([1, 1]))


@given(st.lists(st.integers(-6, 6), min_size=1, max_size=4),
       st.lists(st.integers(-6, 6), min_size=2, max_size=4))
def test_bezout_identity_and_resultant(qc, tc):
    Q, T = IntPoly(qc), IntPoly(tc + [1])
    if Q.is_zero():
        return
    res = sylvester_resultant(Q, T)
    if res == 0:
        with pytest.raises(NotCoprime):
            poly_bezout(Q, T)
        return
    U, V, c = poly_bezout(Q, T)
    check_bezout(Q, T, U, V, c)
    # c generates (Q, T) meet Z, which contains the resultant
    assert res % c == 0


def test_poly_arithmetic():
    f, g = IntPoly([1, 2]), IntPoly([-1, 0, 3])
    assert f * g == IntPoly([-1, -2, 3, 6])
    assert (f + g)(2) == f(2) + g(2)
    assert (f - f).is_zero()
    assert IntPoly([4, 6, 8]).content() == 2


def test_poly_from_conjugate_roots_is_integral():
    z = QuadElem(1, 2, 1)
    P = poly_from_roots([z, z.conj()], 1)
    assert P == IntPoly([5, -2, 1])
    assert poly_from_roots([], 1) == IntPoly([1])
