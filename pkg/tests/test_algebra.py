import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import pencil_matrix
from projpencil.algebra import (AlgebraBasis, StructureReport, commutant, generated_algebra,
                                predict_dims, structure_check)
from projpencil.errors import DimensionMismatch, NotAPencilPair, PredictionMismatch
from projpencil.feasibility import is_pencil_at
from projpencil.linalg_core import haar_unitary


def _brute_commutant_dim(gens):
    # independent oracle: dense real-coordinate null space via numpy.linalg.matrix_rank
    n = gens[0].shape[0]
    rows = []
    for G in list(gens) + [G.conj().T for G in gens]:
        for i in range(n * n):
            E = np.zeros(n * n, complex)
            E[i] = 1
            X = E.reshape(n, n)
            rows.append((G @ X - X @ G).reshape(-1))
    M = np.array(rows).T
    return n * n - np.linalg.matrix_rank(M, tol=1e-8 * max(1, np.abs(M).max()))


def test_commutant_of_identity_is_everything():
    assert commutant([np.eye(3)]).dim == 9


def test_commutant_of_zero_is_everything():
    assert commutant([np.zeros((2, 2))]).dim == 4


def test_commutant_of_generic_2x2_pair_is_scalars():
    r = np.sqrt(3) / 4
    P = np.array([[0.75, r], [r, 0.25]])
    Q = np.array([[0.75, -r], [-r, 0.25]])
    A = commutant([P, Q])
    assert A.dim == 1
    assert A.contains(np.eye(2))


def test_generated_algebra_of_diagonal():
    assert generated_algebra([np.diag([1.0, 2.0])]).dim == 2


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        commutant([np.eye(2), np.eye(3)])
    with pytest.raises(DimensionMismatch):
        commutant([])


def test_basis_check(rng):
    A = generated_algebra([np.diag([0.0, 1.0, 1.0]), haar_unitary(3, rng)])
    chk = A.check()
    assert chk["ok"] and A.dim == 9


def test_block_algebra_duality(rng):
    # A = M_2 (x) I_3 (+) M_1 (x) I_2 in M_8: dim A = 5, dim A' = 9 + 4
    blocks = []
    for _ in range(3):
        X = rng.standard_normal((2, 2))
        M = np.zeros((8, 8))
        M[:6, :6] = np.kron(X, np.eye(3))
        M[6:, 6:] = rng.standard_normal() * np.eye(2)
        blocks.append(M)
    V = haar_unitary(8, rng)
    gens = [V @ M @ V.conj().T for M in blocks]
    assert generated_algebra(gens).dim == 5
    assert commutant(gens).dim == 13


@given(st.integers(1, 4), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_commutant_matches_brute_force(n, m, seed):
    r = np.random.default_rng(seed)
    gens = [np.diag(r.integers(0, 2, n)).astype(complex) for _ in range(m)]
    V = haar_unitary(n, r)
    gens = [V @ G @ V.conj().T for G in gens]
    assert commutant(gens).dim == _brute_commutant_dim(gens)


@given(st.integers(2, 5), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_double_commutant_is_stable(n, m, seed):
    r = np.random.default_rng(seed)
    gens = []
    for _ in range(m):
        d = np.diag(r.integers(0, 3, n).astype(float))
        gens.append(d)
    V = haar_unitary(n, r)
    gens = [V @ G @ V.conj().T for G in gens]
    A = generated_algebra(gens)
    AA = generated_algebra(list(A.basis))
    assert A.dim == AA.dim
    assert A.check()["ok"]


@pytest.mark.parametrize("B, comm", [([1.0], 1), ([0.6, 1.2], 2), ([0.6, 0.6, 1.2], 2)])
def test_structure_check_pure_generic(B, comm):
    rep = structure_check(pencil_matrix(B, 2.0), 2.0, strict=True)
    assert rep.predicted_commutant == comm == rep.measured_commutant


def test_structure_check_kernel_only():
    rep = structure_check(np.diag([0.0, 1.0, 3.0]), 2.0, strict=True)
    assert rep.predicted_commutant == 3 and rep.match


def test_structure_check_lambda_one():
    T = pencil_matrix([0.5], 1.0, (1, 3, 0, 1))
    rep = structure_check(T, 1.0, strict=True)
    assert rep.predicted_commutant == 1 + 1 + 1 + 1
    assert rep.measured_algebra == 1 + 9 + 1 + 4


def test_structure_check_mixed(rng):
    V = haar_unitary(9, rng)
    T = V @ pencil_matrix([0.7, 0.7, 1.1], -2.0, (0, 2, 1, 0)) @ V.conj().T
    assert structure_check(T, -2.0, strict=True).match


def test_structure_check_strict_raises(monkeypatch):
    import projpencil.algebra as alg
    monkeypatch.setattr(alg, "predict_dims", lambda *a: (99, 99))
    with pytest.raises(PredictionMismatch):
        alg.structure_check(pencil_matrix([1.0], 2.0), 2.0, strict=True)


def test_structure_check_requires_pencil():
    with pytest.raises(NotAPencilPair):
        structure_check(np.diag([2.5, 0.6]), 2.0)


def test_sampling_monotone_and_stable():
    T = pencil_matrix([0.6, 0.6, 1.2], 2.0, (1, 1, 0, 1))
    dims = [structure_check(T, 2.0, n_samples=k, seed=3).measured_commutant
            for k in range(1, 9)]
    assert all(a >= b for a, b in zip(dims, dims[1:]))
    assert len(set(dims[3:])) == 1


def test_predict_dims_formulas():
    assert predict_dims((1, 1, 0, 1), (), False) == (3, 3)
    assert predict_dims((0, 0, 0, 0), (1, 2), False) == (2, 20)
    assert predict_dims((2, 3, 0, 0), (1,), True) == (4 + 1 + 1, 1 + 9 + 4)


def test_report_round_trip():
    rep = structure_check(pencil_matrix([1.0], 2.0), 2.0)
    assert StructureReport.from_dict(rep.to_dict()) == rep
    assert isinstance(AlgebraBasis(2, np.zeros((0, 2, 2))).to_dict(), dict)


@given(st.sampled_from([2.0, -3.0, 0.5, 1.0]), st.lists(st.integers(0, 3), min_size=4, max_size=4),
       st.lists(st.sampled_from([0.0, 0.3, 0.6]), max_size=3), st.integers(0, 2**32 - 1))
def test_four_samples_suffice(lam, kernel, offsets, seed):
    lo, hi = abs(1 - abs(lam)) / 2, (1 + abs(lam)) / 2
    B = [lo + (hi - lo) * (0.2 + t) for t in offsets]
    if lam == 1.0:
        kernel[2] = 0
    T = pencil_matrix(B, lam, tuple(kernel))
    assume(0 < T.shape[0] <= 12 and is_pencil_at(T, lam).feasible)
    V = haar_unitary(T.shape[0], np.random.default_rng(seed))
    rep = structure_check(V @ T @ V.conj().T, lam, n_samples=4, seed=seed)
    assert rep.match, rep
