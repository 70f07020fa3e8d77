"""The graded exterior module of V_0^s with its group, matrix and Lie algebra
actions, and the exact linear algebra used to read off images and weights.

Basis elements of the exterior algebra of W = V_0^s are subsets of the
2gs basis vectors of W, encoded as bitmasks.  Bit ``j*2g + k`` is basis
vector k of V_0 placed in slot j (both 0-based), and a mask stands for the
wedge of its vectors in increasing bit order.  Masks are ordered as integers.
"""

from __future__ import annotations

import os
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .errors import (
    InvalidGenerator,
    NotStable,
    NotTorusStable,
    SizeLimit,
    WrongCase,
)
from .exactnum import QuadElem
from .weights import Case, Weight

DEFAULT_CAP = 2 ** 20


def default_cap() -> int:
    env = os.environ.get("WEYL_CARVE_CAP")
    return int(env) if env else DEFAULT_CAP


def _scalar(x):
    return Fraction(x) if isinstance(x, int) else x


def _inv(x):
    if isinstance(x, QuadElem):
        return x.inverse()
    return 1 / Fraction(x)


# --- the model of V_0 -------------------------------------------------------

@dataclass(frozen=True)
class ModelV0:
    """V_0 of dimension 2g.

    Unitary: basis e_1..e_g (spanning V_1) then f_1..f_g (spanning V_2), over
    Q(sqrt(-disc)).  Siegel: basis x_1..x_g, y_1..y_g over Q with Gram matrix
    J = [[0, I], [-I, 0]].
    """

    case: Case
    g: int
    disc: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "case", Case(self.case))
        if self.g < 1:
            raise ValueError("g must be positive")
        if self.case is Case.UNITARY and self.disc is not None:
            QuadElem.check_disc(self.disc)
        if self.case is Case.SIEGEL and self.disc is not None:
            raise WrongCase("the Siegel model is defined over Q")

    @property
    def dim(self) -> int:
        return 2 * self.g

    @property
    def twist(self) -> int:
        return -1 if self.case is Case.SIEGEL else 0

    def scalar(self, x):
        if self.disc is None:
            return Fraction(x)
        return QuadElem(x, 0, self.disc)

    def label(self, k: int) -> str:
        g = self.g
        if self.case is Case.UNITARY:
            return f"e{k + 1}" if k < g else f"f{k - g + 1}"
        return f"x{k + 1}" if k < g else f"y{k - g + 1}"

    def gram(self) -> list[list[int]]:
        """The symplectic Gram matrix J (Siegel)."""
        if self.case is not Case.SIEGEL:
            raise WrongCase("no symplectic form in the unitary model")
        g, n = self.g, self.dim
        J = [[0] * n for _ in range(n)]
        for k in range(g):
            J[k][g + k] = 1
            J[g + k][k] = -1
        return J

    def basis_weight(self, k: int) -> tuple[tuple[int, ...], int]:
        """Torus weight of basis vector k as (GL_g part, multiplier exponent)."""
        g = self.g
        vec = [0] * g
        if k < g:
            vec[k] = 1
            return tuple(vec), (1 if self.case is Case.UNITARY else 0)
        vec[k - g] = -1
        return tuple(vec), 1


@dataclass(frozen=True)
class GradedSpace:
    """The exterior algebra of V_0^s."""

    model: ModelV0
    s: int

    @property
    def n(self) -> int:
        return 2 * self.model.g * self.s

    @property
    def dim(self) -> int:
        return 1 << self.n

    @property
    def block(self) -> int:
        return 2 * self.model.g

    def degree(self, mask: int) -> int:
        return mask.bit_count()

    def slot_part(self, mask: int, j: int) -> int:
        return (mask >> (j * self.block)) & ((1 << self.block) - 1)

    def slot_degrees(self, mask: int) -> tuple[int, ...]:
        return tuple(self.slot_part(mask, j).bit_count() for j in range(self.s))

    def graded_dims(self) -> list[int]:
        return [comb(self.n, k) for k in range(self.n + 1)]

    def masks(self):
        return range(self.dim)

    def pure_tensor_masks(self) -> list[int]:
        """Masks with exactly one vector in every slot: the copy of V_0^{(x)s}."""
        out = [0]
        for j in range(self.s):
            out = [m | (1 << (j * self.block + k)) for m in out for k in range(self.block)]
        return sorted(out)

    def is_pure_tensor(self, mask: int) -> bool:
        return all(d == 1 for d in self.slot_degrees(mask))

    def tensor_indices(self, mask: int) -> tuple[int, ...]:
        """(k_1, ..., k_s) for a pure tensor mask."""
        return tuple(self.slot_part(mask, j).bit_length() - 1 for j in range(self.s))

    def tensor_mask(self, ks) -> int:
        return sum(1 << (j * self.block + k) for j, k in enumerate(ks))

    def weight_of(self, mask: int) -> tuple[tuple[int, ...], int]:
        g = self.model.g
        acc = [0] * g
        c = 0
        m = mask
        while m:
            b = (m & -m).bit_length() - 1
            m &= m - 1
            vec, cc = self.model.basis_weight(b % self.block)
            for i in range(g):
                acc[i] += vec[i]
            c += cc
        return tuple(acc), c

    def label(self, mask: int) -> str:
        if mask == 0:
            return "1"
        parts = []
        for b in range(self.n):
            if mask >> b & 1:
                parts.append(f"{self.model.label(b % self.block)}[{b // self.block + 1}]")
        return "^".join(parts)

    def one(self):
        return self.model.scalar(1)


def exterior_module(model: ModelV0, s: int, cap: int | None = None) -> GradedSpace:
    if s < 1:
        raise ValueError("s must be at least 1")
    cap = default_cap() if cap is None else cap
    n = 2 * model.g * s
    if n >= 63 or (1 << n) > cap:
        raise SizeLimit(f"exterior module of dimension 2^{n} exceeds the cap {cap}")
    return GradedSpace(model, s)


# --- wedge sign helpers -----------------------------------------------------

def wedge_sign(a: int, b: int) -> int:
    """Sign of e_a ^ e_b = sign * e_{a|b}; 0 when they overlap."""
    if a & b:
        return 0
    inv = 0
    m = b
    while m:
        low = m & -m
        inv += (a & ~((low << 1) - 1)).bit_count()
        m ^= low
    return -1 if inv & 1 else 1


def wedge(u: dict, v: dict) -> dict:
    out: dict = {}
    for a, x in u.items():
        for b, y in v.items():
            sg = wedge_sign(a, b)
            if sg:
                key = a | b
                out[key] = out.get(key, 0) + (x * y if sg > 0 else -(x * y))
    return {k: _scalar(c) for k, c in out.items() if c}


def _vec_add(u: dict, v: dict, coef=1) -> dict:
    out = dict(u)
    for k, x in v.items():
        val = out.get(k, 0) + coef * x
        if val:
            out[k] = val
        else:
            out.pop(k, None)
    return out


# --- sparse linear maps -----------------------------------------------------

class LinMap:
    """Sparse exact endomorphism of a GradedSpace, stored by columns.

    ``twist`` counts powers of the multiplier character, so composition adds
    twists.
    """

    __slots__ = ("space", "cols", "twist")

    def __init__(self, space: GradedSpace, cols: dict, twist: int = 0):
        clean = {}
        for j, col in cols.items():
            c = {i: _scalar(x) for i, x in col.items() if x}
            if c:
                clean[j] = c
        self.space = space
        self.cols = clean
        self.twist = twist

    @classmethod
    def identity(cls, space, masks=None):
        one = space.one()
        masks = space.masks() if masks is None else masks
        return cls(space, {m: {m: one} for m in masks})

    @classmethod
    def zero(cls, space, twist=0):
        return cls(space, {}, twist)

    @classmethod
    def diagonal(cls, space, diag: dict, twist=0):
        return cls(space, {m: {m: x} for m, x in diag.items()}, twist)

    def apply(self, v: dict) -> dict:
        out: dict = {}
        for j, x in v.items():
            col = self.cols.get(j)
            if col:
                for i, y in col.items():
                    out[i] = out.get(i, 0) + y * x
        return {k: c for k, c in out.items() if c}

    def __matmul__(self, other: LinMap) -> LinMap:
        cols = {j: self.apply(col) for j, col in other.cols.items()}
        return LinMap(self.space, cols, self.twist + other.twist)

    def _combine(self, other, coef):
        if self.twist != other.twist:
            raise ValueError("cannot add maps with different twists")
        cols = {j: dict(c) for j, c in self.cols.items()}
        for j, col in other.cols.items():
            cols[j] = _vec_add(cols.get(j, {}), col, coef)
        return LinMap(self.space, cols, self.twist)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> LinMap:
        return LinMap(self.space, {j: {i: c * x for i, x in col.items()}
                                   for j, col in self.cols.items()}, self.twist)

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LinMap):
            return NotImplemented
        return self.cols == other.cols

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.cols

    def commutator(self, other: LinMap) -> LinMap:
        return self @ other - other @ self

    def entries(self):
        """(row, col, value) triples sorted by (row, col)."""
        return sorted((i, j, x) for j, col in self.cols.items() for i, x in col.items())

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols.values())

    def transpose(self) -> LinMap:
        cols: dict = {}
        for j, col in self.cols.items():
            for i, x in col.items():
                cols.setdefault(i, {})[j] = x
        return LinMap(self.space, cols, self.twist)

    def column(self, j: int) -> dict:
        return dict(self.cols.get(j, {}))

    def restrict(self, masks) -> LinMap:
        """Keep only the columns in ``masks`` (precompose with a coordinate projector)."""
        keep = set(masks)
        return LinMap(self.space, {j: c for j, c in self.cols.items() if j in keep}, self.twist)

    def __repr__(self):
        return f"LinMap(dim={self.space.dim}, nnz={self.nnz()}, twist={self.twist})"


def is_diagonal(m: LinMap) -> bool:
    return all(len(col) == 1 and j in col for j, col in m.cols.items())


def poly_of_map(coeffs, m: LinMap, masks=None) -> LinMap:
    """sum_k coeffs[k] * m^k (constant term first).

    Diagonal maps are evaluated eigenvalue by eigenvalue; otherwise Horner.
    """
    coeffs = list(coeffs)
    if masks is None and is_diagonal(m):
        cache: dict = {}

        def value(x):
            if x not in cache:
                acc = 0
                for c in reversed(coeffs):
                    acc = acc * x + c
                cache[x] = acc
            return cache[x]
        zero = m.space.model.scalar(0)
        return LinMap.diagonal(m.space, {j: value(m.cols.get(j, {}).get(j, zero))
                                         for j in m.space.masks()})
    ident = LinMap.identity(m.space, masks)
    acc = LinMap.zero(m.space)
    for c in reversed(list(coeffs)):
        acc = (m @ acc) + ident.scale(c)
    return acc


def exterior_power_map(space: GradedSpace, images: dict, twist: int = 0) -> LinMap:
    """Functorial extension to the exterior algebra of a linear map of W.

    ``images[b]`` is the image of basis vector b of W as a dict bit -> scalar.
    """
    one = space.one()
    vec_images = {b: {1 << k: x for k, x in images.get(b, {}).items() if x}
                  for b in range(space.n)}
    cols = {0: {0: one}}
    for mask in range(1, space.dim):
        top = mask.bit_length() - 1
        prev = cols.get(mask ^ (1 << top))
        if prev is None:
            continue
        img = wedge(prev, vec_images[top])
        if img:
            cols[mask] = img
    return LinMap(space, cols, twist)


def derivation_map(space: GradedSpace, local: dict, twist: int = 0) -> LinMap:
    """Leibniz extension of an endomorphism of V_0 applied in every slot.

    ``local[k]`` is the image of basis vector k of V_0 as a dict k' -> scalar.
    """
    blk = space.block
    cols = {}
    for mask in range(space.dim):
        out: dict = {}
        m = mask
        while m:
            low = m & -m
            b = low.bit_length() - 1
            m ^= low
            rest = mask ^ low
            sign_out = -1 if (mask >> (b + 1)).bit_count() & 1 else 1
            slot, k = divmod(b, blk)
            for k2, x in local.get(k, {}).items():
                b2 = slot * blk + k2
                sg = wedge_sign(rest, 1 << b2)
                if sg:
                    key = rest | (1 << b2)
                    out[key] = out.get(key, 0) + sign_out * sg * x
        out = {k: v for k, v in out.items() if v}
        if out:
            cols[mask] = out
    return LinMap(space, cols, twist)


# --- actions ------------------------------------------------------------------

def act_matrix(M, sp: GradedSpace) -> LinMap:
    """Action of an s x s integer matrix on the exterior algebra of V_0^s.

    Basis vector k in slot j goes to sum_i M[j][i] (vector k in slot i), i.e.
    M acts through its transpose as on a dual, so that
    act_matrix(M1) @ act_matrix(M2) == act_matrix(M2 M1).
    """
    s, blk = sp.s, sp.block
    if len(M) != s or any(len(r) != s for r in M):
        raise ValueError(f"expected a {s}x{s} matrix")
    images = {}
    for j in range(s):
        for k in range(blk):
            images[j * blk + k] = {i * blk + k: Fraction(M[j][i]) for i in range(s) if M[j][i]}
    return exterior_power_map(sp, images)


def act_linear(A, sp: GradedSpace, twist: int = 0) -> LinMap:
    """Action of a 2g x 2g matrix on V_0 (columns = images), diagonally on all slots."""
    blk = sp.block
    images = {}
    for j in range(sp.s):
        for k in range(blk):
            images[j * blk + k] = {j * blk + l: A[l][k] for l in range(blk) if A[l][k]}
    return exterior_power_map(sp, images, twist)


def act_scalar_OB(z, sp: GradedSpace) -> LinMap:
    """z acts by i(z) on every e and by j(z) = conj(z) on every f."""
    model = sp.model
    if model.case is not Case.UNITARY or model.disc is None:
        raise WrongCase("O_B scalars act only in the unitary model over Q(sqrt(-d))")
    if not isinstance(z, QuadElem):
        z = QuadElem(z, 0, model.disc)
    a, b = z.embed_i(), z.embed_j()
    g, blk = model.g, sp.block
    e_bits = 0
    for j in range(sp.s):
        e_bits |= ((1 << g) - 1) << (j * blk)
    pa = [a ** k for k in range(sp.n + 1)]
    pb = [b ** k for k in range(sp.n + 1)]
    diag = {}
    for mask in sp.masks():
        ne = (mask & e_bits).bit_count()
        nf = mask.bit_count() - ne
        diag[mask] = pa[ne] * pb[nf]
    return LinMap.diagonal(sp, diag)


@dataclass(frozen=True)
class Generator:
    """A group element, described by kind and parameters.

    kinds: ``torus`` (t=(t_1..t_g), mu), ``multiplier`` (x), ``unipotent``
    (i, j, k: the GL_g element I + k E_ij), ``siegel_upper``/``siegel_lower``
    (i, j, k: [[I, kS], [0, I]] with S = E_ij + E_ji), ``matrix`` (A, mu).
    """

    kind: str
    params: tuple = field(default_factory=tuple)

    def matrix(self, model: ModelV0) -> list[list[Fraction]]:
        g, n = model.g, model.dim
        A = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
        kind, prm = self.kind, dict(self.params)
        if kind == "torus":
            t = [Fraction(x) for x in prm["t"]]
            mu = Fraction(prm.get("mu", 1))
            for k in range(g):
                A[k][k] = t[k]
                A[g + k][g + k] = (mu / t[k]) if model.case is Case.SIEGEL else 1 / t[k]
        elif kind == "multiplier":
            x = Fraction(prm["x"])
            if model.case is Case.UNITARY:
                for k in range(n):
                    A[k][k] = x
            else:
                for k in range(g):
                    A[g + k][g + k] = x
        elif kind == "unipotent":
            i, j, k = prm["i"], prm["j"], Fraction(prm.get("k", 1))
            if i == j:
                raise InvalidGenerator("unipotent needs i != j")
            A[i][j] += k
            A[g + j][g + i] -= k     # inverse transpose on the second block
        elif kind in ("siegel_upper", "siegel_lower"):
            if model.case is not Case.SIEGEL:
                raise WrongCase(f"{kind} is a Siegel generator")
            i, j, k = prm["i"], prm["j"], Fraction(prm.get("k", 1))
            for (r, c) in {(i, j), (j, i)}:
                if kind == "siegel_upper":
                    A[r][g + c] += k
                else:
                    A[g + r][c] += k
        elif kind == "matrix":
            A = [[Fraction(x) for x in row] for row in prm["A"]]
        else:
            raise InvalidGenerator(f"unknown generator kind {kind!r}")
        return A

    def similitude(self, model: ModelV0):
        """The multiplier mu with g^T J g = mu J (Siegel), or the G_m coordinate (unitary)."""
        A = self.matrix(model)
        if model.case is Case.UNITARY:
            return Fraction(dict(self.params).get("x", 1)) if self.kind == "multiplier" else Fraction(1)
        J = model.gram()
        n = model.dim
        AtJA = [[sum(A[k][r] * J[k][l] * A[l][c] for k in range(n) for l in range(n))
                 for c in range(n)] for r in range(n)]
        mu = AtJA[0][model.g]
        if mu == 0 or any(AtJA[r][c] != mu * J[r][c] for r in range(n) for c in range(n)):
            raise InvalidGenerator(f"{self} does not preserve J up to a scalar")
        return mu


def gen(kind: str, **params) -> Generator:
    return Generator(kind, tuple(sorted(params.items())))


def act_group_generator(generator: Generator, sp: GradedSpace) -> LinMap:
    model = sp.model
    if model.case is Case.SIEGEL:
        generator.similitude(model)
    return act_linear(generator.matrix(model), sp)


def group_generators(model: ModelV0) -> list[Generator]:
    """A generating set used for equivariance checks."""
    g = model.g
    primes = [2, 3, 5, 7, 11, 13]
    gens = []
    for k in range(g):
        t = [1] * g
        t[k] = primes[k]
        gens.append(gen("torus", t=tuple(t)))
    if model.case is Case.UNITARY:
        gens.append(gen("multiplier", x=3))
    else:
        gens.append(gen("torus", t=(1,) * g, mu=3))
    for i in range(g):
        for j in range(g):
            if i != j:
                gens.append(gen("unipotent", i=i, j=j))
    if model.case is Case.SIEGEL:
        for i in range(g):
            for j in range(i, g):
                gens.append(gen("siegel_upper", i=i, j=j))
                gens.append(gen("siegel_lower", i=i, j=j))
    return gens


def raising_local(model: ModelV0, i: int) -> dict:
    """Simple raising operator i (1-based) as a local map on V_0."""
    g = model.g
    if model.case is Case.UNITARY:
        if not 1 <= i <= g - 1:
            raise ValueError(f"raising index must be in 1..{g - 1}")
        k = i - 1
        # E_{k,k+1} on V_1; its negative transpose on the dual V_2
        return {k + 1: {k: 1}, g + k: {g + k + 1: -1}}
    if not 1 <= i <= g:
        raise ValueError(f"raising index must be in 1..{g}")
    if i == g:
        return {2 * g - 1: {g - 1: 1}}
    k = i - 1
    return {k + 1: {k: 1}, g + k: {g + k + 1: -1}}


def raising_indices(model: ModelV0) -> list[int]:
    top = model.g - 1 if model.case is Case.UNITARY else model.g
    return list(range(1, top + 1))


def lie_raising_action(i: int, sp: GradedSpace) -> LinMap:
    local = raising_local(sp.model, i)
    local = {k: {k2: Fraction(x) for k2, x in v.items()} for k, v in local.items()}
    return derivation_map(sp, local)


# --- exact linear algebra ------------------------------------------------------

class Subspace:
    """A subspace of a GradedSpace held in reduced echelon form.

    Each basis vector has coefficient 1 at its pivot (its lowest mask) and 0
    at every other pivot, so two subspaces are equal iff their bases are.
    """

    def __init__(self, space: GradedSpace, basis=None):
        self.space = space
        self.basis: list[dict] = []
        self.pivots: list[int] = []
        for v in basis or ():
            self.add(v)

    def reduce(self, v: dict) -> dict:
        v = {k: x for k, x in v.items() if x}
        for piv, b in zip(self.pivots, self.basis):
            c = v.get(piv)
            if c:
                v = _vec_add(v, b, -c)
        return v

    def add(self, v: dict) -> bool:
        r = self.reduce(v)
        if not r:
            return False
        piv = min(r)
        inv = _inv(r[piv])
        r = {k: x * inv for k, x in r.items()}
        for idx, b in enumerate(self.basis):
            c = b.get(piv)
            if c:
                self.basis[idx] = _vec_add(b, r, -c)
        # keep pivots sorted
        pos = 0
        while pos < len(self.pivots) and self.pivots[pos] < piv:
            pos += 1
        self.pivots.insert(pos, piv)
        self.basis.insert(pos, r)
        return True

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, v: dict) -> bool:
        return not self.reduce(v)

    def coords(self, v: dict) -> list:
        if not self.contains(v):
            raise NotStable("vector not in subspace")
        return [v.get(p, 0) for p in self.pivots]

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.pivots == other.pivots and self.basis == other.basis

    __hash__ = None

    def __add__(self, other: Subspace) -> Subspace:
        return Subspace(self.space, self.basis + other.basis)

    def is_stable(self, m: LinMap) -> bool:
        return all(self.contains(m.apply(b)) for b in self.basis)

    def __repr__(self):
        return f"Subspace(dim={self.dim})"


def span(space: GradedSpace, vectors) -> Subspace:
    return Subspace(space, vectors)


def coordinate_subspace(space: GradedSpace, masks) -> Subspace:
    one = space.one()
    return Subspace(space, [{m: one} for m in sorted(masks)])


def image_basis(m: LinMap) -> Subspace:
    """Image of m, columns reduced in increasing mask order."""
    sub = Subspace(m.space)
    for j in sorted(m.cols):
        sub.add(m.cols[j])
    return sub


def rank(m: LinMap) -> int:
    """Rank by elimination on the rows; independent of the column reduction above."""
    rows: dict = {}
    for j, col in m.cols.items():
        for i, x in col.items():
            rows.setdefault(i, {})[j] = x
    pivot_rows: dict = {}   # pivot column -> normalized row
    for i in sorted(rows):
        row = dict(rows[i])
        while row:
            lead = min(row)
            if lead not in pivot_rows:
                inv = _inv(row[lead])
                pivot_rows[lead] = {k: x * inv for k, x in row.items()}
                break
            row = _vec_add(row, pivot_rows[lead], -row[lead])
    return len(pivot_rows)


def nullspace(columns: list[dict]) -> list[list]:
    """Basis of {x : sum_k x_k columns[k] = 0}, as coefficient lists."""
    basis: list[tuple[int, dict, dict]] = []   # (pivot, reduced vector, combination)
    kernel = []
    n = len(columns)
    for k, col in enumerate(columns):
        v = {i: x for i, x in col.items() if x}
        combo = {k: Fraction(1)}
        for piv, b, bc in basis:
            c = v.get(piv)
            if c:
                v = _vec_add(v, b, -c)
                combo = _vec_add(combo, bc, -c)
        if not v:
            kernel.append([combo.get(t, 0) for t in range(n)])
            continue
        piv = min(v)
        inv = _inv(v[piv])
        v = {i: x * inv for i, x in v.items()}
        combo = {i: x * inv for i, x in combo.items()}
        new = []
        for p2, b, bc in basis:
            c = b.get(piv)
            if c:
                b = _vec_add(b, v, -c)
                bc = _vec_add(bc, combo, -c)
            new.append((p2, b, bc))
        new.append((piv, v, combo))
        basis = new
    return kernel


def combine(vectors: list[dict], coeffs: list) -> dict:
    out: dict = {}
    for v, c in zip(vectors, coeffs):
        if c:
            out = _vec_add(out, v, c)
    return out


def eigenspace(m: LinMap, value, within: Subspace) -> Subspace:
    """{v in within : m v = value v}, by a nullspace computation."""
    cols = []
    for b in within.basis:
        cols.append(_vec_add(m.apply(b), b, -value))
    ker = nullspace(cols)
    return Subspace(within.space, [combine(within.basis, x) for x in ker])


def joint_kernel(maps: list[LinMap], within: Subspace) -> Subspace:
    space = within.space
    shift = space.n + 1
    cols = []
    for b in within.basis:
        col = {}
        for idx, m in enumerate(maps):
            for i, x in m.apply(b).items():
                col[(idx << shift) | i] = x
        cols.append(col)
    ker = nullspace(cols)
    return Subspace(space, [combine(within.basis, x) for x in ker])


# --- weights -----------------------------------------------------------------

def _weight_from(space: GradedSpace, wt) -> Weight:
    vec, c = wt
    return Weight.raw(vec, c, space.model.case)


def _weight_pieces(sub: Subspace) -> dict:
    space = sub.space
    pieces: dict = {}
    for b in sub.basis:
        split: dict = {}
        for mask, x in b.items():
            split.setdefault(space.weight_of(mask), {})[mask] = x
        for wt, v in split.items():
            pieces.setdefault(wt, []).append(v)
    out = {wt: Subspace(space, vs) for wt, vs in pieces.items()}
    if sum(s.dim for s in out.values()) != sub.dim:
        raise NotTorusStable("subspace is not a sum of torus weight spaces")
    return out


def weight_decomposition(sub: Subspace) -> Counter:
    """Multiset of torus weights (with the multiplier exponent as c)."""
    return Counter({_weight_from(sub.space, wt): s.dim
                    for wt, s in sorted(_weight_pieces(sub).items())})


def highest_weight_vectors(sub: Subspace) -> list[tuple[dict, Weight]]:
    """Joint kernel of the raising operators inside sub, weight by weight."""
    space = sub.space
    raisers = [lie_raising_action(i, space) for i in raising_indices(space.model)]
    for r in raisers:
        if not sub.is_stable(r):
            raise NotStable("subspace is not stable under the raising operators")
    out = []
    for wt, piece in sorted(_weight_pieces(sub).items()):
        ker = joint_kernel(raisers, piece)
        for v in ker.basis:
            out.append((v, _weight_from(space, wt)))
    return out


# --- sparse dump format ------------------------------------------------------

def dump_linmap(m: LinMap) -> str:
    """Text dump: a header line, then "row col num den [ynum yden]" per entry."""
    disc = m.space.model.disc
    field_name = "Q" if disc is None else f"Q(sqrt(-{disc}))"
    entries = m.entries()
    lines = [f"# weylcarve-sparse dim={m.space.dim} nnz={len(entries)} "
             f"twist={m.twist} field={field_name}"]
    for i, j, x in entries:
        if disc is None:
            x = Fraction(x)
            lines.append(f"{i} {j} {x.numerator} {x.denominator}")
        else:
            if not isinstance(x, QuadElem):
                x = QuadElem(x, 0, disc)
            lines.append(f"{i} {j} {x.x.numerator} {x.x.denominator} "
                         f"{x.y.numerator} {x.y.denominator}")
    return "\n".join(lines) + "\n"


def load_linmap(text: str, space: GradedSpace) -> LinMap:
    lines = text.splitlines()
    if not lines or not lines[0].startswith("# weylcarve-sparse"):
        raise ValueError("missing weylcarve-sparse header")
    header = dict(tok.split("=", 1) for tok in lines[0].split()[2:])
    if int(header["dim"]) != space.dim:
        raise ValueError("dimension in header does not match the space")
    disc = space.model.disc
    cols: dict = {}
    for line in lines[1:]:
        if not line.strip():
            continue
        parts = [int(t) for t in line.split()]
        i, j = parts[0], parts[1]
        x = Fraction(parts[2], parts[3])
        if len(parts) == 6:
            x = QuadElem(x, Fraction(parts[4], parts[5]), disc)
        elif disc is not None:
            x = QuadElem(x, 0, disc)
        cols.setdefault(j, {})[i] = x
    return LinMap(space, cols, int(header["twist"]))
