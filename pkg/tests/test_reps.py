"""Algebra backends and the Pauli / regular representations."""

from __future__ import annotations

import random

import numpy as np
import pytest

from lcsq.f2core import BinMatrix, LinearSystem
from lcsq.fpgroups import Presentation, regular_perm_rep, solution_presentation, todd_coxeter
from lcsq.reps import (DenseElement, GroupAlgebraContext, GroupAlgebraElement,
                       Representation, group_algebra_rep, pauli_magic_square_rep,
                       representation_to_json_dict, verify_representation)


# ---------------------------------------------------------------------------
# Pauli representation


def test_pauli_images_are_involutions(pauli_rep):
    assert len(pauli_rep.images) == 9
    for x in pauli_rep.images:
        assert x.dim == 4
        assert np.allclose(x.mat @ x.mat, np.eye(4))
        assert np.allclose(x.mat, x.mat.conj().T)


def test_pauli_distinguished_product_is_minus_identity(pauli_rep):
    sys = pauli_rep.system
    prod = np.eye(4, dtype=complex)
    for i in sys.support(0):
        prod = prod @ pauli_rep.images[i].mat
    assert np.allclose(prod, -np.eye(4))
    for k in range(1, 6):
        prod = np.eye(4, dtype=complex)
        for i in sys.support(k):
            prod = prod @ pauli_rep.images[i].mat
        assert np.allclose(prod, np.eye(4))


def test_pauli_block_commutators_vanish(pauli_rep):
    sys = pauli_rep.system
    for k in range(6):
        support = sys.support(k)
        for a in range(len(support)):
            for b in range(a + 1, len(support)):
                X, Y = pauli_rep.images[support[a]].mat, pauli_rep.images[support[b]].mat
                assert np.linalg.norm(X @ Y - Y @ X) < 1e-12


def test_pauli_verification_tight(pauli_rep):
    report = verify_representation(pauli_rep, pauli_rep.system, "iso", tol=1e-12)
    assert report.passed
    assert report.max_residual < 1e-12


@pytest.mark.parametrize("distinguished", range(6))
def test_pauli_all_distinguished_positions(distinguished):
    rep = pauli_magic_square_rep(distinguished)
    report = verify_representation(rep, rep.system, "iso", tol=1e-12)
    assert report.passed
    prod = np.eye(4, dtype=complex)
    for i in rep.system.support(distinguished):
        prod = prod @ rep.images[i].mat
    assert np.allclose(prod, -np.eye(4))


def test_pauli_rejects_bad_flag():
    with pytest.raises(ValueError):
        pauli_magic_square_rep(6)


def test_swapped_images_fail_with_named_product(pauli_rep):
    # swap two images from different rows/columns: some constraint product breaks
    images = list(pauli_rep.images)
    images[0], images[4] = images[4], images[0]
    broken = Representation(images, "dense", pauli_rep.system)
    report = verify_representation(broken, pauli_rep.system, "iso")
    assert not report.passed
    assert any(name.startswith("product:") and r > 1.0
               for name, r in report.entries)


# ---------------------------------------------------------------------------
# group-algebra backend


def test_group_algebra_z2():
    P = Presentation(("x",), ((0, 0),))
    T = todd_coxeter(P)
    R = group_algebra_rep(P, T)
    x = R.images[0]
    assert x * x == R.identity()
    assert x.adjoint() == x


def test_group_algebra_k33_all_commute(table33, k33_sys0):
    P = solution_presentation(k33_sys0, homogeneous=True)
    R = group_algebra_rep(P, table33)
    for i in range(9):
        for j in range(i + 1, 9):
            a, b = R.images[i], R.images[j]
            assert a * b == b * a


def test_group_algebra_k34_noncommuting_disjoint_pair(table34, k34_sys0):
    P = solution_presentation(k34_sys0, homogeneous=True)
    R = group_algebra_rep(P, table34)
    sharing = set()
    for k in range(k34_sys0.num_constraints):
        s = k34_sys0.support(k)
        sharing.update((s[a], s[b]) for a in range(len(s)) for b in range(len(s)))
    found = None
    for i in range(12):
        for j in range(i + 1, 12):
            if (i, j) in sharing:
                continue
            a, b = R.images[i], R.images[j]
            if a * b != b * a:
                found = (i, j)
                break
        if found:
            break
    assert found is not None


def test_group_algebra_verifies_exactly(table34, k34_sys0):
    P = solution_presentation(k34_sys0, homogeneous=True)
    R = group_algebra_rep(P, table34)
    report = verify_representation(R, k34_sys0, "qut")
    assert report.passed
    assert report.max_residual == 0.0


def test_group_algebra_requires_complete_table(k34_sys0):
    P = solution_presentation(k34_sys0, homogeneous=True)
    partial = todd_coxeter(P, [], cap=10)
    with pytest.raises(ValueError, match="complete"):
        group_algebra_rep(P, partial)


def test_dyadic_normalization(table33):
    ctx = GroupAlgebraContext(table33)
    e = GroupAlgebraElement(ctx, {0: 4, 1: 8}, 3)
    assert e.coeffs == {0: 1, 1: 2} and e.exp == 1
    zero = e - e
    assert zero.is_zero() and zero.exp == 0 and zero.residual_norm() == 0.0
    assert e.support() == [[0, 1, 1], [1, 2, 1]]


def test_group_algebra_inverse_map(table34):
    ctx = GroupAlgebraContext(table34)
    for g in range(ctx.size):
        assert ctx.column(ctx.inverse[g])[g] == 0  # g * g^{-1} = identity
        assert ctx.inverse[ctx.inverse[g]] == g


def test_adjoint_is_involutive_antiautomorphism(table34):
    ctx = GroupAlgebraContext(table34)
    rng = random.Random(17)

    def rand_elem():
        coeffs = {rng.randrange(ctx.size): rng.randint(-5, 5) for _ in range(6)}
        return GroupAlgebraElement(ctx, coeffs, rng.randint(0, 4))

    for _ in range(25):
        a, b = rand_elem(), rand_elem()
        assert (a * b).adjoint() == b.adjoint() * a.adjoint()
        assert a.adjoint().adjoint() == a
        assert (a + b).adjoint() == a.adjoint() + b.adjoint()


# ---------------------------------------------------------------------------
# projections and backend agreement


def dense_regular_rep(table, sys) -> Representation:
    perms = regular_perm_rep(table)
    n = table.num_cosets
    images = []
    for g in range(sys.num_vars):
        mat = np.zeros((n, n))
        for c in range(n):
            mat[perms[g][c], c] = 1.0
        images.append(DenseElement(mat))
    return Representation(images, "dense", sys)


def test_projections_both_backends(table33, k33_sys0, pauli_rep):
    P = solution_presentation(k33_sys0, homogeneous=True)
    for R in (group_algebra_rep(P, table33), pauli_rep,
              dense_regular_rep(table33, k33_sys0)):
        one = R.identity()
        for i in range(3):
            plus, minus = R.projection(i, 1), R.projection(i, -1)
            for p in (plus, minus):
                assert (p * p - p).residual_norm() < 1e-12
                assert (p - p.adjoint()).residual_norm() < 1e-12
            assert (plus + minus - one).residual_norm() < 1e-12
            assert (plus * minus).residual_norm() < 1e-12


def test_backends_agree_on_verdicts(table33, k33_sys0):
    P = solution_presentation(k33_sys0, homogeneous=True)
    exact = group_algebra_rep(P, table33)
    dense = dense_regular_rep(table33, k33_sys0)
    assert verify_representation(exact, k33_sys0, "qut").passed
    assert verify_representation(dense, k33_sys0, "qut").passed

    def corrupt(R):
        images = list(R.images)
        images[0], images[3] = images[3], images[0]
        return Representation(images, R.backend, R.system)

    bad_exact = verify_representation(corrupt(exact), k33_sys0, "qut")
    bad_dense = verify_representation(corrupt(dense), k33_sys0, "qut")
    assert not bad_exact.passed and not bad_dense.passed
    exact_failures = {n for n, r in bad_exact.entries if r > 0.0}
    dense_failures = {n for n, r in bad_dense.entries if r > 1e-10}
    assert exact_failures == dense_failures


# ---------------------------------------------------------------------------
# verification plumbing


def test_generator_count_mismatch(pauli_rep):
    small = LinearSystem(BinMatrix.from_rows([[1, 1]]), (0,))
    with pytest.raises(ValueError, match="images"):
        verify_representation(pauli_rep, small, "qut")


def test_mixed_dimensions_rejected():
    sys = LinearSystem(BinMatrix.from_rows([[1, 1]]), (0,))
    images = [DenseElement(np.eye(2)), DenseElement(np.eye(3))]
    with pytest.raises(ValueError, match="dimensions"):
        verify_representation(Representation(images, "dense", sys), sys, "qut")


def test_bad_mode(pauli_rep):
    with pytest.raises(ValueError, match="mode"):
        verify_representation(pauli_rep, pauli_rep.system, "nope")


def test_report_json_shape(pauli_rep):
    report = verify_representation(pauli_rep, pauli_rep.system, "iso")
    data = report.to_json_dict()
    assert data["passed"] is True
    assert {e["name"] for e in data["relations"]} >= {"product:k1", "involution:x1"}


def test_representation_json(pauli_rep, table33, k33_sys0):
    data = representation_to_json_dict(pauli_rep)
    assert data["backend"] == "dense"
    mat = data["generators"]["x1"]
    assert len(mat) == 4 and len(mat[0]) == 4 and len(mat[0][0]) == 2
    P = solution_presentation(k33_sys0, homogeneous=True)
    exact = representation_to_json_dict(group_algebra_rep(P, table33))
    assert exact["backend"] == "group_algebra"
    (coset, num, log2den), = exact["generators"]["x1"]
    assert num == 1 and log2den == 0
