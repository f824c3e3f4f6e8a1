import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import pencil_matrix
from projpencil.canonical import canonical_split, generic_form
from projpencil.construction import (PairPath, ProjectionPair, build_from_T, build_pair,
                                     canonicalize_pair, component_label, connect_pairs,
                                     equivalence_witness, generic_blocks, spectral_mismatch,
                                     verify_pair)
from projpencil.errors import (CommutationViolation, DifferentComponents, LambdaExcluded,
                               MissingE, NotAPencilPair)
from projpencil.linalg_core import frob, haar_unitary, random_unitary_in_commutant
from projpencil.synth import random_halmos_pair, random_projection

LAMS = [3.0, -3.0, 2.0, -2.0, 0.5, -0.5, 1.0, 0.25]


def _params(T, lam, rng):
    s = canonical_split(T, lam)
    gf = generic_form(s)
    return s, gf, random_unitary_in_commutant(gf.B, rng)


def test_single_angle_pair_lambda_two():
    pair = build_from_T(np.diag([2.5, 0.5]), 2.0)
    s15 = np.sqrt(15)
    assert np.allclose(pair.P, [[15 / 16, s15 / 16], [s15 / 16, 1 / 16]], atol=1e-14)
    assert np.allclose(pair.Q, [[5 / 8, -s15 / 8], [-s15 / 8, 3 / 8]], atol=1e-14)


def test_lambda_one_pair():
    pair = build_from_T(np.diag([1.5, 0.5]), 1.0)
    r = np.sqrt(3) / 4
    assert np.allclose(pair.P, [[0.75, r], [r, 0.25]], atol=1e-14)
    assert np.allclose(pair.Q, [[0.75, -r], [-r, 0.25]], atol=1e-14)


def test_kernel_only_pair_is_exact():
    pair = build_from_T(np.diag([0.0, 1.0, 3.0]), 3.0)
    assert np.array_equal(pair.P, np.diag([0, 0, 1.0]))
    assert np.array_equal(pair.Q, np.diag([0, 1.0, 0]))


@pytest.mark.parametrize("lam", [3.0, -2.0, 0.5, -0.5, 0.25])
def test_generic_blocks_are_projections(lam):
    lo, hi = abs(1 - abs(lam)) / 2, (1 + abs(lam)) / 2
    b = np.linspace(lo, hi, 9)[1:-1]
    p11, p22, p12, q11, q22, q12 = generic_blocks(b, lam)
    c = (1 + lam) / 2
    # each 2x2 slice is a rank-one projection and lam p + q = diag(c + b, c - b)
    assert np.allclose(p11 + p22, 1) and np.allclose(p11 * p22, p12 ** 2)
    assert np.allclose(q11 + q22, 1) and np.allclose(q11 * q22, q12 ** 2)
    assert np.allclose(lam * p11 + q11, c + b)
    assert np.allclose(lam * p22 + q22, c - b)
    assert np.allclose(lam * p12 + q12, 0)


def test_build_rejects_bad_parameters(rng):
    T = pencil_matrix([0.6, 1.2], 2.0)
    s = canonical_split(T, 2.0)
    gf = generic_form(s)
    with pytest.raises(CommutationViolation):
        build_pair(gf, s, haar_unitary(2, rng))
    with pytest.raises(CommutationViolation):
        build_pair(gf, s, 2 * np.eye(2))
    with pytest.raises(CommutationViolation):
        build_pair(gf, s, np.eye(3))
    with pytest.raises(MissingE):
        build_pair(gf, s, None, np.eye(1))
    with pytest.raises(LambdaExcluded):
        build_from_T(T, 0.0)


def test_lambda_one_E_handling(rng):
    T = np.diag([1.0, 1.0])
    s = canonical_split(T, 1.0)
    with pytest.raises(MissingE):
        build_pair(None, s)
    with pytest.raises(MissingE):
        build_pair(None, s, E=np.diag([1.0, 0.5]))
    pair = build_pair(None, s, E=np.diag([1.0, 0.0]))
    assert verify_pair(T, pair).passed
    # E = 0 is a valid default as long as P stays nonzero
    pair = build_from_T(np.diag([1.0, 1.0, 2.0]), 1.0)
    assert verify_pair(np.diag([1.0, 1.0, 2.0]), pair).passed


def test_verify_flags_bad_pair():
    T = np.diag([2.5, 0.5])
    good = build_from_T(T, 2.0)
    assert verify_pair(T, good).passed
    bad = ProjectionPair(2.0, good.P, good.Q + 1e-6)
    assert not verify_pair(T, bad).passed
    zero = ProjectionPair(2.0, np.zeros((2, 2)), np.diag([1.0, 1.0]))
    rep = verify_pair(np.diag([1.0, 1.0]), zero)
    assert not rep.nonzero and not rep.passed


@given(st.integers(0, 2**32 - 1), st.sampled_from(LAMS))
def test_canonicalize_then_build_round_trip(seed, lam):
    r = np.random.default_rng(seed)
    hp = random_halmos_pair(r, 10)
    T = hp.pencil(lam)
    pair = ProjectionPair(lam, hp.P, hp.Q)
    U, E = canonicalize_pair(T, pair)
    s = canonical_split(T, lam)
    back = build_pair(generic_form(s), s, U if U.size else None, E)
    assert frob(back.P - hp.P) < 1e-8
    assert frob(back.Q - hp.Q) < 1e-8


@given(st.integers(0, 2**32 - 1), st.sampled_from(LAMS))
def test_anticommutation_holds_for_constructed_pairs(seed, lam):
    r = np.random.default_rng(seed)
    T = random_halmos_pair(r, 10).pencil(lam)
    s, gf, U = _params(T, lam, r)
    E = None
    if lam == 1.0 and s.dims[1]:
        E = random_projection(s.dims[1], int(r.integers(1, s.dims[1] + 1)), r)
    pair = build_pair(gf, s, U, E)
    rep = verify_pair(T, pair)
    assert rep.passed
    assert rep.anticommutation < 1e-9 * frob(T)


def test_anticommutation_for_arbitrary_projections(rng):
    P = random_projection(6, 2, rng)
    Q = random_projection(6, 3, rng)
    lam = -1.7
    T = lam * P + Q
    assert verify_pair(T, ProjectionPair(lam, P, Q)).anticommutation < 1e-12


def test_canonicalize_rejects_non_pair():
    T = np.diag([2.5, 0.5])
    with pytest.raises(NotAPencilPair):
        canonicalize_pair(T, ProjectionPair(2.0, np.eye(2), np.zeros((2, 2))))


def test_witness_identity_and_parameters(rng):
    T = pencil_matrix([0.6, 0.6, 1.2], 2.0, (1, 0, 1, 0))
    s, gf, U0 = _params(T, 2.0, rng)
    a = build_pair(gf, s, U0)
    b = build_pair(gf, s, random_unitary_in_commutant(gf.B, rng))
    for x, y in ((a, a), (a, b)):
        V = equivalence_witness(2.0, x, y)
        assert frob(V.conj().T @ V - np.eye(V.shape[0])) < 1e-10
        assert frob(V @ x.P @ V.conj().T - y.P) < 1e-8
        assert frob(V @ x.Q @ V.conj().T - y.Q) < 1e-8


def test_witness_across_bases(rng):
    hp = random_halmos_pair(rng, 8)
    W = haar_unitary(hp.dim, rng)
    a = ProjectionPair(-3.0, hp.P, hp.Q)
    b = ProjectionPair(-3.0, W @ hp.P @ W.conj().T, W @ hp.Q @ W.conj().T)
    V = equivalence_witness(-3.0, a, b)
    assert frob(V @ a.P @ V.conj().T - b.P) < 1e-8
    assert frob(V @ a.Q @ V.conj().T - b.Q) < 1e-8


def test_witness_spectral_mismatch():
    a = build_from_T(np.diag([2.5, 0.5]), 2.0)
    b = build_from_T(np.diag([2.6, 0.4]), 2.0)
    assert equivalence_witness(2.0, a, b) is None
    assert spectral_mismatch(a.T, b.T)
    with pytest.raises(LambdaExcluded):
        equivalence_witness(1.0, a, a)


def test_connect_path_is_continuous(rng):
    T = pencil_matrix([0.6, 1.2], 2.0, (1, 1, 0, 0))
    s, gf, _ = _params(T, 2.0, rng)
    a = build_pair(gf, s, random_unitary_in_commutant(gf.B, rng))
    b = build_pair(gf, s, random_unitary_in_commutant(gf.B, rng))
    path = connect_pairs(T, 2.0, a, b, steps=16)
    assert path.all_passed and len(path.samples) == 17
    assert frob(path.samples[0].P - a.P) < 1e-12
    assert frob(path.samples[-1].P - b.P) < 1e-12
    jumps = [frob(x.P - y.P) for x, y in zip(path.samples, path.samples[1:])]
    assert max(jumps) < 4 * np.pi / 16
    back = PairPath.from_dict(path.to_dict())
    assert back.steps == 16 and back.all_passed


def test_connect_lambda_one_components(rng):
    T = np.diag([1.0, 1.0, 1.5, 0.5])
    a = build_from_T(T, 1.0, E=np.zeros((2, 2)))
    b = build_from_T(T, 1.0, E=np.diag([1.0, 0.0]))
    c = build_from_T(T, 1.0, E=random_projection(2, 1, rng))
    with pytest.raises(DifferentComponents) as ei:
        connect_pairs(T, 1.0, a, b)
    assert ei.value.label_a == (0, 2) and ei.value.label_b == (1, 1)
    assert component_label(b) == (1, 1)
    path = connect_pairs(T, 1.0, b, c, steps=8)
    assert path.all_passed
    assert frob(path.samples[-1].P - c.P) < 1e-12


def test_connect_rejects_excluded_lambda():
    T = np.diag([2.5, 0.5])
    a = build_from_T(T, 2.0)
    with pytest.raises(LambdaExcluded):
        connect_pairs(T, 0.0, a, a)
    with pytest.raises(ValueError):
        connect_pairs(T, 2.0, a, a, steps=0)


def test_pair_json_round_trip():
    T = np.diag([1.0, 1.0, 1.5, 0.5])
    pair = build_from_T(T, 1.0, E=np.diag([0.0, 1.0]))
    back = ProjectionPair.from_dict(pair.to_dict())
    assert np.array_equal(back.P, pair.P) and np.array_equal(back.E, pair.E)
    assert np.array_equal(back.U, pair.U)
