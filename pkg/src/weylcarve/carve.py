"""End-to-end carving of V(a) + V(a*) out of the exterior module, its
rational form under Galois descent, and the Siegel operator check-suite.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import inf

from .endoalg import (
    choose_m,
    choose_z,
    choose_z_rational,
    contract_psi,
    cup_phi,
    equivariance_defect,
    gen_u,
    graded_scalars,
    is_degree_preserving,
    is_homogeneous,
    p_integrality_report,
    pairing_matrix,
    projector_q,
    projector_qprime,
    young_action,
)
from .errors import (
    NotEffective,
    NotStable,
    OracleMismatch,
    PreconditionError,
    PTooSmall,
    RamifiedPrime,
    SizeLimit,
)
from .exactnum import QuadElem, Splitting, padic_val, require_prime, splitting_type
from .repspace import (
    GradedSpace,
    ModelV0,
    Subspace,
    act_group_generator,
    act_matrix,
    combine,
    default_cap,
    exterior_module,
    group_generators,
    highest_weight_vectors,
    image_basis,
    nullspace,
    rank,
)
from .symalg import permutation_matrix, young_idempotent
from .weights import Case, Weight, dual_weight, is_p_small, is_p_small_boundary, partition_of, weyl_dim

log = logging.getLogger(__name__)


# --- Galois descent ------------------------------------------------------------

def galois_image(sp: GradedSpace, v: dict) -> dict:
    """The semilinear involution e_k <-> f_k with conjugated coefficients."""
    g, blk = sp.model.g, sp.block
    out: dict = {}
    for mask, c in v.items():
        bits = [b for b in range(sp.n) if mask >> b & 1]
        moved = [b + g if b % blk < g else b - g for b in bits]
        inversions = sum(1 for x, y in itertools.combinations(moved, 2) if x > y)
        target = sum(1 << b for b in moved)
        cc = c.conj() if isinstance(c, QuadElem) else c
        out[target] = out.get(target, 0) + (-cc if inversions % 2 else cc)
    return {k: x for k, x in out.items() if x}


@dataclass
class QForm:
    q_dim: int
    basis: list
    spans_image: bool


def galois_q_form(image: Subspace) -> QForm:
    sp = image.space
    d = sp.model.disc
    r = image.dim
    if r == 0:
        return QForm(0, [], True)
    images = [galois_image(sp, b) for b in image.basis]
    if not all(image.contains(v) for v in images):
        raise NotStable("image is not stable under the Galois involution")
    S = [image.coords(v) for v in images]      # S[k][l]: coefficient of basis l in sigma(B_k)
    root = QuadElem(0, 1, d)
    cols = []
    # unknowns alpha_k (rational part) then beta_k (coefficient of sqrt(-d))
    for k in range(r):
        cols.append({l: S[k][l] - (1 if l == k else 0) for l in range(r)})
    for k in range(r):
        cols.append({l: -root * S[k][l] - (root if l == k else 0) for l in range(r)})
    split_cols = []
    for col in cols:
        sc = {}
        for l, x in col.items():
            x = x if isinstance(x, QuadElem) else QuadElem(x, 0, d)
            if x.x:
                sc[2 * l] = x.x
            if x.y:
                sc[2 * l + 1] = x.y
        split_cols.append(sc)
    kernel = nullspace(split_cols)
    fixed = []
    for vec in kernel:
        coeffs = [QuadElem(vec[k], vec[r + k], d) for k in range(r)]
        fixed.append(combine(image.basis, coeffs))
    return QForm(len(fixed), fixed, Subspace(sp, fixed) == image)


# --- unitary carve ------------------------------------------------------------

@dataclass
class CarveReport:
    weight: Weight
    dual: Weight
    s: int
    p: int | None
    disc: int
    mode: str
    flags: dict
    m: int
    z: QuadElem
    bezout: tuple
    c_value: int
    z_strategy: str
    dim_image: int
    expected_dim: int
    highest_weights: Counter
    valuations: dict
    galois_fixed_dim: int
    t: int | None
    checks: dict
    n_young: int
    P: object = field(default=None, repr=False)
    image: object = field(default=None, repr=False)

    @property
    def min_p_valuation(self):
        return self.valuations.get("P")

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        U, V, c = self.bezout
        return {
            "weight": str(self.weight),
            "dual_weight": str(self.dual),
            "s": self.s,
            "p": self.p,
            "disc": self.disc,
            "mode": self.mode,
            "flags": self.flags,
            "chosen": {
                "m": self.m,
                "z": [str(self.z.x), str(self.z.y)],
                "z_strategy": self.z_strategy,
                "bezout": {"U": list(U.coeffs), "V": list(V.coeffs), "c": c},
                "c_value": self.c_value,
                "young_n": self.n_young,
            },
            "dims": {"image": self.dim_image, "expected": self.expected_dim},
            "highest_weights": [{"weight": str(w), "multiplicity": k}
                                for w, k in sorted(self.highest_weights.items(),
                                                   key=lambda kv: (kv[0].entries, kv[0].c))],
            "min_p_valuation": _val_json(self.min_p_valuation),
            "valuations": {k: _val_json(v) for k, v in self.valuations.items()},
            "galois_fixed_dim": self.galois_fixed_dim,
            "t": self.t,
            "checks": self.checks,
            "pass": self.passed,
        }


def _val_json(v):
    if v is None:
        return None
    return "inf" if v == inf else int(v)


def check_unitary_preconditions(a: Weight, p: int | None, d: int, mode: str):
    """Validate inputs; returns (partition, s)."""
    if a.case is not Case.UNITARY:
        raise NotEffective("carve_unitary needs a unitary weight")
    QuadElem.check_disc(d)
    lam, s = partition_of(a)
    if s == 0:
        raise NotEffective("the zero weight has s = 0; nothing to carve",
                           hypothesis="requires c = sum(a_i) = s >= 1")
    g = a.g
    if mode == "integral":
        if p is None:
            raise PreconditionError("integral mode needs a prime p", hypothesis="requires a prime p")
        require_prime(p)
        if p <= 2 * g:
            raise PTooSmall(f"p={p} <= 2g={2 * g}", hypothesis="requires p > 2g")
        if p <= s:
            raise PTooSmall(f"p={p} <= s={s}", hypothesis="requires p > s")
        if splitting_type(d, p) is Splitting.RAMIFIED:
            raise RamifiedPrime(f"p={p} ramifies in Q(sqrt(-{d}))",
                                hypothesis="requires B unramified at p")
    elif mode == "rational":
        if p is not None:
            require_prime(p)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return lam, s


def carve_unitary(a: Weight, p: int | None, d: int = 1, mode: str = "integral",
                  cap: int | None = None, bezout=None) -> CarveReport:
    """Carve V(a) + V(a*) as the image of P = C_a q' q and certify it.

    ``bezout`` overrides the Bezout triple (U, V, c) used for q'; it exists so
    that a corrupted triple can be shown to fail the certificate.
    """
    lam, s = check_unitary_preconditions(a, p, d, mode)
    g = a.g
    dual = dual_weight(a)
    sp = exterior_module(ModelV0(Case.UNITARY, g, d), s, cap)

    if mode == "integral":
        m = choose_m(p, g)
        zc = choose_z(d, p, s)
    else:
        m = 2
        zc = choose_z_rational(d, s)

    q, qcert = projector_q(m, sp, p)
    qp, qpcert = projector_qprime(zc.z, sp, p, bezout)
    C, n = young_idempotent(lam)
    Ca = young_action(C, sp)
    P = Ca.map @ qp.map @ q.map

    image = image_basis(P)
    expected = weyl_dim(a) + weyl_dim(dual)
    hw = Counter(w for _, w in highest_weight_vectors(image))
    qform = galois_q_form(image)

    gens = group_generators(sp.model)
    checks = {
        "dim_matches_weyl": image.dim == expected,
        "rank_matches_image": rank(P) == image.dim,
        "highest_weights": hw == Counter({a: 1, dual: 1}),
        "idempotent": P @ P == P,
        "q_idempotent": qcert.idempotent,
        "qprime_idempotent_on_tensors": qpcert.idempotent,
        "commute_C_q": Ca.map.commutator(q.map).is_zero(),
        "commute_C_qprime": Ca.map.commutator(qp.map).is_zero(),
        "commute_q_qprime": q.map.commutator(qp.map).is_zero(),
        "image_group_stable": all(image.is_stable(act_group_generator(x, sp)) for x in gens),
        "homogeneous_degree_s": is_homogeneous(P) == s,
        "galois_q_form": qform.q_dim == image.dim and qform.spans_image,
    }
    valuations = {}
    if p is not None:
        valuations = {
            "P": p_integrality_report(P, p),
            "q": qcert.p_report,
            "qprime": qpcert.p_report,
            "C": p_integrality_report(Ca, p),
            "young_coefficients": min(padic_val(x, p) for x in C.coeffs.values()),
            "q_coefficients": qcert.coefficient_valuation,
            "qprime_coefficients": qpcert.coefficient_valuation,
            "bezout_c": padic_val(qpcert.params["c"], p),
        }
        if mode == "integral":
            checks["p_integral"] = all(v >= 0 for v in valuations.values())

    flags = {}
    if p is not None:
        flags = {
            "p_gt_2g": p > 2 * g,
            "s_lt_p": s < p,
            "p_small": is_p_small(a, p),
            "p_small_dual": is_p_small(dual, p),
            "p_small_boundary": is_p_small_boundary(a, p) or is_p_small_boundary(dual, p),
        }
    U, V, c = qpcert.params["U"], qpcert.params["V"], qpcert.params["c"]
    report = CarveReport(
        weight=a, dual=dual, s=s, p=p, disc=d, mode=mode, flags=flags, m=m,
        z=zc.z, bezout=(U, V, c), c_value=zc.c_value, z_strategy=zc.strategy,
        dim_image=image.dim, expected_dim=expected, highest_weights=hw,
        valuations=valuations, galois_fixed_dim=qform.q_dim, t=is_homogeneous(P),
        checks=checks, n_young=n, P=P, image=image,
    )
    log.info("carve %s p=%s d=%s: dim %d (expected %d), pass=%s",
             a, p, d, image.dim, expected, report.passed)
    if image.dim != expected:
        raise OracleMismatch(f"image dimension {image.dim} != Weyl dimension {expected}",
                             report=report)
    return report


def t_of(reports) -> int:
    """Largest homogeneous degree over the summands (a report or an iterable of them)."""
    if isinstance(reports, CarveReport):
        return reports.t
    return max(r.t for r in reports)


# --- Siegel checks ------------------------------------------------------------

@dataclass
class SiegelReport:
    g: int
    s: int
    p: int
    dim: int
    checks: dict
    details: dict

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {"g": self.g, "s": self.s, "p": self.p, "dim": self.dim,
                "checks": self.checks, "details": self.details, "pass": self.passed}


def _frac_json(x):
    x = Fraction(x)
    return str(x)


def carve_siegel_checks(g: int, s: int, p: int, cap: int | None = None) -> SiegelReport:
    if s < 2:
        raise PreconditionError("theta needs two slots", hypothesis="requires s >= 2")
    sp = exterior_module(ModelV0(Case.SIEGEL, g), s, cap)
    # the pairing matrix and operator identities live in End, so the cost is quadratic
    cap = default_cap() if cap is None else cap
    if sp.dim * sp.dim > cap:
        raise SizeLimit(f"Siegel suite needs (2^{sp.n})^2 operator entries, over the cap {cap}")
    require_prime(p)
    if p <= 2 * g:
        raise PTooSmall(f"p={p} <= 2g={2 * g}", hypothesis="requires p > 2g")
    gens = group_generators(sp.model)
    G = pairing_matrix(sp)
    checks = {k: True for k in (
        "u_semi_invariance", "phi_equivariance", "psi_equivariance", "phi_psi_adjoint",
        "theta_equivariance", "theta_p_integral", "theta_degree_preserving",
        "theta_commutes_with_pair_permutations")}
    details = {}
    for i, j in itertools.combinations(range(1, s + 1), 2):
        u = gen_u(i, j, sp)
        phi, psi = cup_phi(i, j, sp), contract_psi(i, j, sp)
        th = phi @ psi
        semi = all(act_group_generator(x, sp).apply(u)
                   == {k: x.similitude(sp.model) * v for k, v in u.items()} for x in gens)
        fixing = [sig for sig in itertools.permutations(range(s))
                  if {sig[i - 1], sig[j - 1]} == {i - 1, j - 1}]
        val = p_integrality_report(th, p)
        pair_checks = {
            "u_semi_invariance": semi,
            "phi_equivariance": all(equivariance_defect(phi.map, x, sp).is_zero() for x in gens),
            "psi_equivariance": all(equivariance_defect(psi.map, x, sp).is_zero() for x in gens),
            "phi_psi_adjoint": phi.map.transpose() @ G == G @ psi.map,
            "theta_equivariance": all(equivariance_defect(th.map, x, sp).is_zero() for x in gens),
            "theta_p_integral": val >= 0,
            "theta_degree_preserving": is_degree_preserving(th.map),
            "theta_commutes_with_pair_permutations": all(
                th.map.commutator(act_matrix(permutation_matrix(sig), sp)).is_zero()
                for sig in fixing),
        }
        for k, ok in pair_checks.items():
            checks[k] = checks[k] and ok
        lefschetz = graded_scalars(psi.map @ phi.map - phi.map @ psi.map, sp)
        psi_u = psi.map.apply(u)
        details[f"{i},{j}"] = {
            "u": {str(k): _frac_json(v) for k, v in sorted(u.items())},
            "psi_of_u": _frac_json(psi_u.get(0, 0)) if set(psi_u) <= {0} else None,
            "theta_min_valuation": _val_json(val),
            "commutator_scalars": {str(k): (None if v is None else _frac_json(v))
                                   for k, v in lefschetz.items()},
            "checks": pair_checks,
        }
    return SiegelReport(g, s, p, sp.dim, checks, details)
