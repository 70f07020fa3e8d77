"""Acceptance criteria 1-9. Each test carries a ``criterion`` mark; the
terminal summary prints one PASS/FAIL line per criterion.
"""

import itertools
import subprocess
import sys
import time
from functools import lru_cache
from math import factorial

import pytest

from weylcarve.carve import carve_siegel_checks, carve_unitary, galois_image, galois_q_form
from weylcarve.endoalg import (
    choose_m,
    choose_z,
    p_integrality_report,
    projector_q,
    projector_qprime,
    young_action,
)
from weylcarve.exactnum import padic_val, poly_bezout
from weylcarve.repspace import (
    ModelV0,
    act_matrix,
    act_scalar_OB,
    coordinate_subspace,
    eigenspace,
    exterior_module,
    image_basis,
    span,
)
from weylcarve.symalg import permutation_matrix, young_idempotent
from weylcarve.weights import Case, Weight, dual_weight, effective_weights, is_p_small, weyl_dim

RUNS = [(a, d, p)
        for g in (1, 2) for s in (1, 2, 3) for a in effective_weights(g, s)
        for d in (1, 3) for p in (7, 11)]


def run_id(run):
    a, d, p = run
    return f"a={a}-d={d}-p={p}"


_timings: dict = {}


@lru_cache(maxsize=None)
def carved(a, d, p):
    t0 = time.perf_counter()
    report = carve_unitary(a, p, d)
    _timings[(a, d, p)] = time.perf_counter() - t0
    return report


@lru_cache(maxsize=None)
def unitary_space(g, s, d):
    return exterior_module(ModelV0(Case.UNITARY, g, d), s)


@lru_cache(maxsize=None)
def projectors(g, s, d, p):
    sp = unitary_space(g, s, d)
    q, qcert = projector_q(choose_m(p, g), sp, p)
    zc = choose_z(d, p, s)
    qp, qpcert = projector_qprime(zc.z, sp, p)
    return sp, q, qcert, qp, qpcert, zc


# --- 1 ----------------------------------------------------------------------------

@pytest.mark.criterion(1)
@pytest.mark.parametrize("run", RUNS, ids=run_id)
def test_carve_dimension(run):
    a, d, p = run
    report = carved(a, d, p)
    assert report.dim_image == weyl_dim(a) + weyl_dim(dual_weight(a))
    assert report.expected_dim == report.dim_image
    assert report.passed, {k: v for k, v in report.checks.items() if not v}
    assert _timings[run] < 30.0


def test_run_grid_covers_all_effective_weights():
    weights = {a for a, _, _ in RUNS}
    assert len(weights) == 8
    assert len(RUNS) == 32


# --- 2 ----------------------------------------------------------------------------

@pytest.mark.criterion(2)
@pytest.mark.parametrize("run", RUNS, ids=run_id)
def test_highest_weights(run):
    a, d, p = run
    report = carved(a, d, p)
    assert dict(report.highest_weights) == {a: 1, dual_weight(a): 1}


# --- 3 ----------------------------------------------------------------------------

@pytest.mark.criterion(3)
@pytest.mark.parametrize("run", RUNS, ids=run_id)
def test_p_integrality(run):
    a, d, p = run
    if not (is_p_small(a, p) and is_p_small(dual_weight(a), p)):
        pytest.fail(f"{a} is not p-small at p={p}; every run in the grid should be")
    report = carved(a, d, p)
    for key in ("P", "q", "qprime", "C"):
        assert report.valuations[key] >= 0, key
    # independent recomputation from the maps themselves
    sp, q, _, qp, _, _ = projectors(a.g, report.s, d, p)
    lam = tuple(x for x in a.entries if x)
    C = young_action(young_idempotent(lam)[0], sp)
    assert p_integrality_report(q, p) >= 0
    assert p_integrality_report(qp, p) >= 0
    assert p_integrality_report(C, p) >= 0
    assert p_integrality_report(report.P, p) >= 0


def partitions(s, cap=None):
    cap = s if cap is None else cap
    if s == 0:
        yield ()
        return
    for first in range(min(s, cap), 0, -1):
        for rest in partitions(s - first, first):
            yield (first,) + rest


@pytest.mark.criterion(3)
@pytest.mark.parametrize("s", [1, 2, 3, 4, 5])
def test_young_normalization_divides_factorial(s):
    for lam in partitions(s):
        C, n = young_idempotent(lam)
        assert factorial(s) % n == 0, (lam, n)
        assert C * C == C


# --- 4 ----------------------------------------------------------------------------

SMALL = [(g, s, d, p) for g in (1, 2) for s in (1, 2) for d in (1, 3) for p in (7, 11)]


@pytest.mark.criterion(4)
@pytest.mark.parametrize("g,s,d,p", SMALL)
def test_q_image_is_eigenvalue_pattern_space(g, s, d, p):
    sp, q, _, _, _, _ = projectors(g, s, d, p)
    m = choose_m(p, g)
    within = coordinate_subspace(sp, sp.masks())
    for j in range(s):
        v_j = [[(m if r == j else 1) if r == c else 0 for c in range(s)] for r in range(s)]
        within = eigenspace(act_matrix(v_j, sp), sp.model.scalar(m), within)
    assert image_basis(q.map) == within
    assert within.dim == (2 * g) ** s


@pytest.mark.criterion(4)
@pytest.mark.parametrize("g,s,d,p", SMALL)
def test_qprime_image_is_pure_eigenspace_sum(g, s, d, p):
    sp, _, _, qp, _, zc = projectors(g, s, d, p)
    pure = coordinate_subspace(sp, sp.pure_tensor_masks())
    w = act_scalar_OB(zc.z, sp)
    oracle = eigenspace(w, zc.a ** s, pure) + eigenspace(w, zc.b ** s, pure)
    restricted = qp.map.restrict(sp.pure_tensor_masks())
    assert image_basis(restricted) == oracle
    assert oracle.dim == 2 * g ** s


# --- 5 ----------------------------------------------------------------------------

def integer_monoid_generators(s):
    """Transposition, s-cycle, a transvection, and diag(k, 1, ..., 1) for k in {0, -1, 2, 3}."""
    ident = [[int(r == c) for c in range(s)] for r in range(s)]
    gens = []
    if s > 1:
        gens.append(permutation_matrix((1, 0) + tuple(range(2, s))))
        gens.append(permutation_matrix(tuple((i + 1) % s for i in range(s))))
        t = [row[:] for row in ident]
        t[0][1] = 1
        gens.append(t)
    for k in (0, -1, 2, 3):
        dmat = [row[:] for row in ident]
        dmat[0][0] = k
        gens.append(dmat)
    return gens


COMMUTE = [(a, 1, 7) for g in (1, 2) for s in (1, 2, 3) for a in effective_weights(g, s)]


@pytest.mark.criterion(5)
@pytest.mark.parametrize("a,d,p", COMMUTE, ids=lambda x: str(x))
def test_commutators_vanish(a, d, p):
    s = sum(a.entries)
    sp, q, _, qp, _, _ = projectors(a.g, s, d, p)
    lam = tuple(x for x in a.entries if x)
    C = young_action(young_idempotent(lam)[0], sp).map
    assert C.commutator(q.map).is_zero()
    assert C.commutator(qp.map).is_zero()
    assert q.map.commutator(qp.map).is_zero()


@pytest.mark.criterion(5)
@pytest.mark.parametrize("g,s", [(g, s) for g in (1, 2) for s in (1, 2, 3)])
def test_q_commutes_with_slot_permutations(g, s):
    sp, q, _, _, _, _ = projectors(g, s, 1, 7)
    for sigma in itertools.permutations(range(s)):
        assert q.map.commutator(act_matrix(permutation_matrix(sigma), sp)).is_zero(), sigma


@pytest.mark.criterion(5)
@pytest.mark.parametrize("g,s", [(g, s) for g in (1, 2) for s in (1, 2, 3)])
def test_qprime_commutes_with_integer_matrices(g, s):
    sp, _, _, qp, _, _ = projectors(g, s, 1, 7)
    for M in integer_monoid_generators(s):
        assert qp.map.commutator(act_matrix(M, sp)).is_zero(), M


# --- 6 ----------------------------------------------------------------------------

@pytest.mark.criterion(6)
@pytest.mark.parametrize("run", RUNS, ids=run_id)
def test_galois_q_form(run):
    a, d, p = run
    report = carved(a, d, p)
    image = report.image
    qform = galois_q_form(image)
    assert qform.q_dim == image.dim
    assert span(image.space, qform.basis) == image
    for v in qform.basis:
        assert galois_image(image.space, v) == v
    assert report.galois_fixed_dim == image.dim


# --- 7 ----------------------------------------------------------------------------

@pytest.mark.criterion(7)
@pytest.mark.parametrize("g,p", [(1, 5), (1, 7), (2, 5), (2, 7)])
def test_siegel_operator_suite(g, p):
    t0 = time.perf_counter()
    report = carve_siegel_checks(g, 2, p)
    elapsed = time.perf_counter() - t0
    for name in ("u_semi_invariance", "phi_psi_adjoint", "theta_equivariance", "theta_p_integral"):
        assert report.checks[name], name
    assert report.passed, report.checks
    assert elapsed < 60.0


# --- 8 ----------------------------------------------------------------------------

CLI_COMMANDS = [
    ["unitary", "--g", "2", "--weight", "2,1;3", "--p", "7", "--disc", "3"],
    ["unitary", "--weight", "1,0;1", "--weight", "1,1;2", "--p", "11", "--jobs", "2"],
    ["unitary", "--g", "1", "--weight", "2;2", "--mode", "rational"],
    ["siegel-check", "--g", "1", "--s", "2", "--p", "5"],
    ["dump-projector", "--kind", "q", "--g", "2", "--s", "2", "--p", "7"],
    ["dump-projector", "--kind", "qprime", "--g", "1", "--s", "2", "--p", "7"],
    ["dump-projector", "--kind", "P", "--weight", "2,0;2", "--p", "7"],
    ["dump-projector", "--kind", "theta", "--g", "1", "--s", "2"],
]


def run_cli(args, **kw):
    return subprocess.run([sys.executable, "-m", "weylcarve", *args],
                          capture_output=True, **kw)


@pytest.mark.criterion(8)
@pytest.mark.parametrize("args", CLI_COMMANDS, ids=lambda a: " ".join(a))
def test_cli_is_deterministic(args, tmp_path):
    first = run_cli(args)
    second = run_cli(args)
    assert first.returncode == 0, first.stderr.decode()
    assert first.stdout == second.stdout
    assert first.stdout
    out1, out2 = tmp_path / "a", tmp_path / "b"
    run_cli(args + ["--out", str(out1)])
    run_cli(args + ["--out", str(out2)])
    assert out1.read_bytes() == out2.read_bytes() == first.stdout


# --- 9 ----------------------------------------------------------------------------

NEGATIVE = [
    (["unitary", "--g", "2", "--weight", "1,0;1", "--p", "3"], "requires p > 2g"),
    (["unitary", "--g", "1", "--weight", "1;1", "--p", "2"], "requires p > 2g"),
    (["unitary", "--g", "1", "--weight", "3;3", "--p", "3"], "requires p > s"),
    (["unitary", "--g", "2", "--weight", "1,0;1", "--p", "7", "--disc", "7"],
     "requires B unramified at p"),
    (["unitary", "--g", "1", "--weight", "1;1", "--p", "5", "--disc", "5"],
     "requires B unramified at p"),
    (["unitary", "--g", "2", "--weight", "1,-1;0", "--p", "7"], "requires a_g >= 0"),
    (["unitary", "--g", "2", "--weight", "2,1;1", "--p", "7"], "c = sum(a_i)"),
    (["siegel-check", "--g", "1", "--s", "2", "--p", "2"], "requires p > 2g"),
]


@pytest.mark.criterion(9)
@pytest.mark.parametrize("args,hypothesis", NEGATIVE, ids=lambda x: str(x))
def test_precondition_violations_exit_2(args, hypothesis):
    res = run_cli(args)
    assert res.returncode == 2
    assert hypothesis in res.stderr.decode()


@pytest.mark.criterion(9)
@pytest.mark.parametrize("a,p", [(Weight((2, 1), 3), 7), (Weight((1,), 1), 5),
                                 (Weight((1, 1), 2), 11)])
def test_corrupted_bezout_is_reported(a, p):
    s = sum(a.entries)
    zc = choose_z(1, p, s)
    U, V, c = poly_bezout(zc.Q, zc.T)
    report = carve_unitary(a, p, 1, bezout=(U, V, c + 1))
    assert not report.checks["qprime_idempotent_on_tensors"]
    assert not report.checks["idempotent"]
    assert not report.passed
    assert report.to_dict()["pass"] is False
    # the honest triple passes
    assert carve_unitary(a, p, 1).passed


@pytest.mark.criterion(9)
def test_corrupted_bezout_changes_p_valuation_bookkeeping():
    a, p = Weight((2, 1), 3), 7
    zc = choose_z(1, p, 3)
    U, V, c = poly_bezout(zc.Q, zc.T)
    report = carve_unitary(a, p, 1, bezout=(U, V, c + 1))
    assert report.to_dict()["chosen"]["bezout"]["c"] == c + 1
    assert report.valuations["bezout_c"] == padic_val(c + 1, p)
