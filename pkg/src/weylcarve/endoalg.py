"""Elements of E(A)_s and E(C)_s as explicit endomorphisms of the exterior
module: the projectors q and q', the Young action, and the symplectic
operators phi, psi, theta of the Siegel case.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import inf

from .errors import (
    DegenerateEigenvalues,
    PreconditionError,
    PTooSmall,
    RamifiedPrime,
    WrongCase,
)
from .exactnum import (
    IntPoly,
    QuadElem,
    Splitting,
    min_poly_generator,
    padic_val,
    poly_bezout,
    poly_from_roots,
    quad_val,
    from_integral_coords,
    require_prime,
    splitting_type,
)
from .repspace import (
    GradedSpace,
    LinMap,
    act_group_generator,
    act_matrix,
    act_scalar_OB,
    image_basis,
    poly_of_map,
    wedge,
)
from .symalg import GroupAlgElem, permutation_matrix, sign
from .weights import Case


@dataclass
class EndoElem:
    map: LinMap
    word: str
    algebra: str   # "EA" or "EC"

    def __matmul__(self, other: EndoElem) -> EndoElem:
        return EndoElem(self.map @ other.map, f"{self.word}*{other.word}", self.algebra)


@dataclass
class ProjectorCert:
    idempotent: bool
    homogeneous_degree: int | None
    image_dim: int
    p_report: float | int | None = None
    coefficient_valuation: float | int | None = None
    params: dict = field(default_factory=dict)


def _algebra(sp: GradedSpace) -> str:
    return "EA" if sp.model.case is Case.UNITARY else "EC"


def is_homogeneous(e) -> int | None:
    """Degree t when the image lies in a single graded piece; 0 for the zero map."""
    m = e.map if isinstance(e, EndoElem) else e
    degrees = {i.bit_count() for col in m.cols.values() for i in col}
    if not degrees:
        return 0
    if len(degrees) == 1:
        return degrees.pop()
    return None


def p_integrality_report(e, p: int):
    """Minimum p-adic valuation over all matrix entries (inf for the zero map)."""
    m = e.map if isinstance(e, EndoElem) else e
    return min((quad_val(x, p) for col in m.cols.values() for x in col.values()), default=inf)


def _min_val(values, p):
    return min((padic_val(v, p) for v in values if v), default=inf)


# --- q: projection onto V_0^{(x)s} -------------------------------------------

def _is_generator_mod(m: int, p: int) -> bool:
    if m % p == 0:
        return False
    order = p - 1
    factors, n, k = set(), order, 2
    while k * k <= n:
        while n % k == 0:
            factors.add(k)
            n //= k
        k += 1
    if n > 1:
        factors.add(n)
    return all(pow(m, order // f, p) != 1 for f in factors)


def choose_m(p: int, g: int) -> int:
    """Smallest positive m generating (Z/pZ)^*."""
    require_prime(p)
    if p <= 2 * g:
        raise PTooSmall(f"p={p} <= 2g={2 * g}", hypothesis="requires p > 2g")
    return next(m for m in range(1, p) if _is_generator_mod(m, p))


def lagrange_selector(m: int, g: int) -> list[Fraction]:
    """Coefficients of the polynomial equal to 1 at m and 0 at m^i, i in 0..2g, i != 1."""
    nodes = [m ** i for i in range(2 * g + 1)]
    if len(set(nodes)) != len(nodes):
        raise DegenerateEigenvalues(f"powers of m={m} are not pairwise distinct")
    coeffs = [Fraction(1)]
    for i, r in enumerate(nodes):
        if i == 1:
            continue
        den = Fraction(1, m - r)
        shifted = [Fraction(0)] + coeffs
        for k, c in enumerate(coeffs):
            shifted[k] -= r * c
        coeffs = [c * den for c in shifted]
    return coeffs


def slot_scaling(j: int, m: int, s: int) -> list[list[int]]:
    """diag(1, ..., m, ..., 1) with m in position j."""
    return [[(m if r == j else 1) if r == c else 0 for c in range(s)] for r in range(s)]


def projector_q(m: int, sp: GradedSpace, p: int | None = None) -> tuple[EndoElem, ProjectorCert]:
    g, s = sp.model.g, sp.s
    coeffs = lagrange_selector(m, g)
    if sp.model.disc is not None:
        coeffs = [sp.model.scalar(c) for c in coeffs]
    q = None
    for j in range(s):
        pj = poly_of_map(coeffs, act_matrix(slot_scaling(j, m, s), sp))
        q = pj if q is None else q @ pj
    cert = ProjectorCert(
        idempotent=(q @ q == q),
        homogeneous_degree=is_homogeneous(q),
        image_dim=image_basis(q).dim,
        params={"m": m},
    )
    if p is not None:
        cert.p_report = p_integrality_report(q, p)
        cert.coefficient_valuation = _min_val(lagrange_selector(m, g), p)
    return EndoElem(q, "*".join(f"L_m(v{j + 1})" for j in range(s)), _algebra(sp)), cert


# --- q': projection onto V_1^{(x)s} + V_2^{(x)s} ----------------------------

@dataclass
class ZChoice:
    z: QuadElem
    a: QuadElem
    b: QuadElem
    s: int
    Q: IntPoly
    T: IntPoly
    c_value: int          # Q(a^s) Q(b^s)
    strategy: str
    residue: tuple = ()


def eigen_products(a, b, s):
    return [a ** r * b ** (s - r) for r in range(s, -1, -1)]


def qt_polys(a, b, s, d) -> tuple[IntPoly, IntPoly]:
    mixed = [a ** r * b ** (s - r) for r in range(1, s)]
    return poly_from_roots(mixed, d), poly_from_roots([a ** s, b ** s], d)


def _z_data(z: QuadElem, s: int, strategy: str, residue=()) -> ZChoice | None:
    a, b = z.embed_i(), z.embed_j()
    prods = eigen_products(a, b, s)
    if len(set(prods)) != len(prods):
        return None
    Q, T = qt_polys(a, b, s, z.d)
    cv = Q(a ** s) * Q(b ** s)
    assert cv.y == 0 and cv.x.denominator == 1
    return ZChoice(z, a, b, s, Q, T, int(cv.x), strategy, residue)


def _fp2_mul(u, v, c0, c1, p):
    # (u0 + u1 w)(v0 + v1 w) with w^2 = -c1 w - c0
    a0 = u[0] * v[0]
    a1 = u[0] * v[1] + u[1] * v[0]
    a2 = u[1] * v[1]
    return ((a0 - a2 * c0) % p, (a1 - a2 * c1) % p)


def _fp2_pow(u, k, c0, c1, p):
    out, base = (1, 0), u
    while k:
        if k & 1:
            out = _fp2_mul(out, base, c0, c1, p)
        base = _fp2_mul(base, base, c0, c1, p)
        k >>= 1
    return out


def _prime_factors(n):
    out, k = [], 2
    while k * k <= n:
        if n % k == 0:
            out.append(k)
            while n % k == 0:
                n //= k
        k += 1
    if n > 1:
        out.append(n)
    return out


def _choose_z_inert(d, p, s):
    c0, c1, _ = min_poly_generator(d)
    order = p * p - 1
    fs = _prime_factors(order)
    for alpha, beta in itertools.product(range(p), repeat=2):
        if beta == 0:
            continue
        u = (alpha, beta)
        if all(_fp2_pow(u, order // f, c0, c1, p) != (1, 0) for f in fs):
            yield from_integral_coords(alpha, beta, d), (alpha, beta)


def _choose_z_split(d, p, s):
    c0, c1, _ = min_poly_generator(d)
    r1, r2 = [r for r in range(p) if (r * r + c1 * r + c0) % p == 0]
    for x in range(2, p):
        if all(pow(x, i, p) != 1 for i in range(1, s + 1)):
            u, v = x, 1
            beta = (u - v) * pow(r1 - r2, -1, p) % p
            alpha = (u - beta * r1) % p
            yield from_integral_coords(alpha, beta, d), (u, v)


def choose_z(d: int, p: int, s: int) -> ZChoice:
    """A z in the maximal order whose eigenvalue data is p-adically separated.

    Inert p: a lift of a generator of F_{p^2}^*.  Split p: a lift of (u, v)
    with u/v of multiplicative order > s.  Falls back to an exhaustive search
    over a growing box of integral coordinates, in a fixed order; this is
    needed for split p = s + 1, where no residue of order > s exists.
    """
    require_prime(p)
    QuadElem.check_disc(d)
    if p == 2:
        raise PTooSmall("p = 2 is excluded", hypothesis="requires p > 2g")
    if p <= s:
        raise PTooSmall(f"p={p} <= s={s}", hypothesis="requires p > s")
    kind = splitting_type(d, p)
    if kind is Splitting.RAMIFIED:
        raise RamifiedPrime(f"p={p} ramifies in Q(sqrt(-{d}))",
                            hypothesis="requires B unramified at p")
    candidates = (_choose_z_inert(d, p, s) if kind is Splitting.INERT
                  else _choose_z_split(d, p, s))
    for z, res in candidates:
        data = _z_data(z, s, kind.value.lower(), res)
        if data is not None and padic_val(data.c_value, p) == 0:
            return data
    # residue lifts in [0, p) can collide exactly (e.g. b = -a); widen the box
    for alpha, beta in _box_points(4 * p + 4):
        data = _z_data(from_integral_coords(alpha, beta, d), s, "exhaustive", (alpha, beta))
        if data is not None and padic_val(data.c_value, p) == 0:
            return data
    raise PreconditionError(f"no admissible z for d={d}, p={p}, s={s}")


def _box_points(bound):
    """(alpha, beta) with beta != 0, by growing max(|alpha|, |beta|), in a fixed order."""
    for r in range(1, bound + 1):
        for alpha in range(-r, r + 1):
            for beta in range(-r, r + 1):
                if beta and max(abs(alpha), abs(beta)) == r:
                    yield alpha, beta


def choose_z_rational(d: int, s: int) -> ZChoice:
    """First z (in a fixed order) with pairwise distinct a^r b^t; no prime involved."""
    QuadElem.check_disc(d)
    for total in itertools.count(1):
        for beta in range(1, total + 1):
            alpha = total - beta
            data = _z_data(from_integral_coords(alpha, beta, d), s, "rational", (alpha, beta))
            if data is not None:
                return data


def projector_qprime(z: QuadElem, sp: GradedSpace, p: int | None = None,
                     bezout=None) -> tuple[EndoElem, ProjectorCert]:
    """(1/c) U(w) Q(w) with w the action of z, from U Q + V T = c.

    The returned map is the central element on the whole module; the
    certificate is about its restriction to the pure tensor part.
    """
    model = sp.model
    if model.case is not Case.UNITARY or model.disc is None:
        raise WrongCase("q' lives in the unitary case")
    s = sp.s
    data = _z_data(z, s, "given")
    if data is None:
        raise DegenerateEigenvalues(f"the products a^r b^t collide for z={z}")
    U, V, c = bezout if bezout is not None else poly_bezout(data.Q, data.T)
    UQ = U * data.Q
    coeffs = [Fraction(k, c) for k in UQ.coeffs] or [Fraction(0)]
    w = act_scalar_OB(z, sp)
    qp = poly_of_map([model.scalar(k) for k in coeffs], w)
    restricted = qp.restrict(sp.pure_tensor_masks())
    cert = ProjectorCert(
        idempotent=(restricted @ restricted == restricted),
        homogeneous_degree=is_homogeneous(restricted),
        image_dim=image_basis(restricted).dim,
        params={"z": z, "U": U, "V": V, "c": c, "Q": data.Q, "T": data.T,
                "c_value": data.c_value},
    )
    if p is not None:
        cert.p_report = p_integrality_report(qp, p)
        cert.coefficient_valuation = _min_val(coeffs, p)
    return EndoElem(qp, f"(UQ/{c})(z={z})", "EA"), cert


# --- Young action inside E(A)_s -----------------------------------------------

def young_action(x: GroupAlgElem, sp: GradedSpace) -> EndoElem:
    """sum_sigma x_sigma sign(sigma) act_matrix(P_sigma).

    Permutation matrices act on the slot-ordered wedges with an extra
    sign(sigma); the twist by the sign character makes this restrict to the
    place-permutation action of x on V_0^{(x)s}.
    """
    total = LinMap.zero(sp)
    for sigma, c in sorted(x.coeffs.items()):
        total = total + act_matrix(permutation_matrix(sigma), sp).scale(sign(sigma) * c)
    return EndoElem(total, "C", _algebra(sp))


# --- Siegel operators -----------------------------------------------------------

def _require_siegel(sp: GradedSpace):
    if sp.model.case is not Case.SIEGEL:
        raise WrongCase("operation is defined in the Siegel case only")


def _check_pair(i, j, sp):
    if not 1 <= i < j <= sp.s:
        raise PreconditionError(f"need 1 <= i < j <= s, got i={i}, j={j}",
                                hypothesis="requires 1 <= i < j <= s")


def omega(sp: GradedSpace, b1: int, b2: int) -> int:
    """The symplectic form on W = V_0^s (orthogonal sum of s copies of J)."""
    blk = sp.block
    if b1 // blk != b2 // blk:
        return 0
    return sp.model.gram()[b1 % blk][b2 % blk]


def gen_u(i: int, j: int, sp: GradedSpace) -> dict:
    """sum_{k,l} (J^-1)_{kl} b_k[i] ^ b_l[j], scaled so the lowest mask has coefficient +1."""
    _require_siegel(sp)
    _check_pair(i, j, sp)
    J = sp.model.gram()
    n, blk = len(J), sp.block
    Jinv = [[-J[r][c] for c in range(n)] for r in range(n)]   # J^-1 = -J
    u: dict = {}
    for k in range(n):
        for l in range(n):
            if Jinv[k][l]:
                term = wedge({1 << ((i - 1) * blk + k): Fraction(1)},
                             {1 << ((j - 1) * blk + l): Fraction(Jinv[k][l])})
                for mk, x in term.items():
                    u[mk] = u.get(mk, 0) + x
    u = {mk: Fraction(x) for mk, x in u.items() if x}
    lead = u[min(u)]
    return {mk: x / lead for mk, x in u.items()}


def cup_phi(i: int, j: int, sp: GradedSpace) -> EndoElem:
    u = gen_u(i, j, sp)
    cols = {mask: wedge(u, {mask: Fraction(1)}) for mask in sp.masks()}
    return EndoElem(LinMap(sp, cols, twist=1), f"phi[{i},{j}]", "EC")


def interior(sp: GradedSpace, bit: int) -> LinMap:
    """Contraction with omega(b_bit, -)."""
    cols = {}
    for mask in sp.masks():
        col = {}
        pos = 0
        m = mask
        while m:
            low = m & -m
            b = low.bit_length() - 1
            m ^= low
            w = omega(sp, bit, b)
            if w:
                col[mask ^ low] = Fraction(-w if pos % 2 else w)
            pos += 1
        if col:
            cols[mask] = col
    return LinMap(sp, cols)


def contract_psi(i: int, j: int, sp: GradedSpace) -> EndoElem:
    """Adjoint of cup_phi for the pairing det(omega(x_a, y_b)) on wedges."""
    u = gen_u(i, j, sp)
    cache: dict = {}

    def iota(b):
        if b not in cache:
            cache[b] = interior(sp, b)
        return cache[b]

    total = LinMap.zero(sp)
    for mask, c in sorted(u.items()):
        k = (mask & -mask).bit_length() - 1
        l = mask.bit_length() - 1
        # (eps_k eps_l)^dagger = iota_l iota_k
        total = total + (iota(l) @ iota(k)).scale(c)
    total.twist = -1
    return EndoElem(total, f"psi[{i},{j}]", "EC")


def theta(i: int, j: int, sp: GradedSpace) -> EndoElem:
    return cup_phi(i, j, sp) @ contract_psi(i, j, sp)


def pairing_matrix(sp: GradedSpace) -> LinMap:
    """G[S, T] = det(omega(b_s, b_t)) for s in S, t in T."""
    _require_siegel(sp)
    blk, g = sp.block, sp.model.g
    cols = {}
    for T in sp.masks():
        tb = [b for b in range(sp.n) if T >> b & 1]
        # omega pairs each basis vector with exactly one partner in its slot
        partner = [b + g if b % blk < g else b - g for b in tb]
        S = sum(1 << b for b in partner)
        if S.bit_count() != len(tb):
            continue
        sb = sorted(partner)
        mat = [[omega(sp, x, y) for y in tb] for x in sb]
        det = _det(mat)
        if det:
            cols[T] = {S: det}
    return LinMap(sp, cols)


def _det(mat) -> Fraction:
    n = len(mat)
    a = [[Fraction(x) for x in row] for row in mat]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            if f:
                for k in range(col, n):
                    a[r][k] -= f * a[col][k]
    return det


def pair(sp: GradedSpace, G: LinMap, x: dict, y: dict):
    Gy = G.apply(y)
    return sum((x.get(k, 0) * v for k, v in Gy.items()), Fraction(0))


def equivariance_defect(F: LinMap, generator, sp: GradedSpace) -> LinMap:
    """act(g) F - mu(g)^twist F act(g); zero iff F is equivariant with its twist."""
    A = act_group_generator(generator, sp)
    mu = generator.similitude(sp.model)
    return A @ F - (F @ A).scale(mu ** F.twist)


def is_degree_preserving(m: LinMap) -> bool:
    return all(i.bit_count() == j.bit_count() for j, col in m.cols.items() for i in col)


def graded_scalars(m: LinMap, sp: GradedSpace) -> dict:
    """For each degree k: the scalar by which m acts on that piece, or None."""
    out = {}
    for k in range(sp.n + 1):
        masks = [mk for mk in sp.masks() if mk.bit_count() == k]
        scalar, ok = None, True
        for mk in masks:
            col = m.cols.get(mk, {})
            if any(r != mk for r in col):
                ok = False
                break
            val = col.get(mk, Fraction(0))
            if scalar is None:
                scalar = val
            elif val != scalar:
                ok = False
                break
        out[k] = scalar if ok else None
    return out
