import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import pencil_matrix
from projpencil.canonical import (CanonicalSplit, GenericForm, Reason, band, canonical_split,
                                  frame, generic_form)
from projpencil.errors import Infeasible, LambdaExcluded
from projpencil.linalg_core import frob, haar_unitary
from projpencil.synth import random_halmos_pair


def test_band():
    assert band(2.0) == (0.5, 1.5)
    assert band(-0.5) == (0.25, 0.75)


def test_split_kernel_only():
    T = np.diag([0.0, 1.0, 3.0])
    assert canonical_split(T, 3.0).dims == (1, 1, 1, 0, 0)
    assert canonical_split(T, 2.0).dims == (1, 1, 0, 1, 0)


def test_split_lambda_one_merges_into_one_space():
    s = canonical_split(np.diag([1.0, 1.0, 2.0, 1.5]), 1.0)
    assert s.dims == (0, 2, 0, 1, 1)


def test_split_reassembles(rng):
    V = haar_unitary(6, rng)
    T = V @ np.diag([0, 1, 2, 3, 2.2, 0.8]) @ V.conj().T
    s = canonical_split(T, 2.0)
    assert s.dims == (1, 1, 1, 1, 2)
    U = s.unitary()
    assert frob(U.conj().T @ U - np.eye(6)) < 1e-12
    assert frob(s.reassemble() - T) < 1e-12


def test_generic_form_single_angle():
    gf = generic_form(canonical_split(np.diag([2.5, 0.5]), 2.0))
    assert gf.k == 1 and gf.center == 1.5
    assert gf.b == pytest.approx([1.0])


def test_generic_form_descending_and_clusters():
    T = pencil_matrix([0.6, 1.2, 0.6], 2.0)
    gf = generic_form(canonical_split(T, 2.0))
    assert gf.b == pytest.approx([1.2, 0.6, 0.6])
    assert [c.tolist() for c in gf.clusters()] == [[0], [1, 2]]
    assert gf.n_distinct() == 2


@pytest.mark.parametrize("diag, lam, reason", [
    ([3.2, -0.2], 2.0, Reason.BandViolation),
    ([2.5, 0.5], 4.0, Reason.BandViolation),
    ([2.5, 0.6, 0.4], 2.0, Reason.OddGenericDimension),
    ([2.5, 0.6], 2.0, Reason.AsymmetricSpectrum),
    ([2.5, 2.5, 0.5, 2.4], 2.0, Reason.AsymmetricSpectrum),
])
def test_generic_form_infeasible(diag, lam, reason):
    with pytest.raises(Infeasible) as ei:
        generic_form(canonical_split(np.diag(diag), lam))
    assert ei.value.reason == reason


def test_band_checked_before_parity():
    # odd dimension and an out-of-band point: band wins
    with pytest.raises(Infeasible) as ei:
        generic_form(canonical_split(np.diag([3.2, 0.6, 0.4]), 2.0))
    assert ei.value.reason == Reason.BandViolation


@pytest.mark.parametrize("lam", [0.0, -1.0, 1e-12])
def test_generic_form_excluded_lambda(lam):
    with pytest.raises(LambdaExcluded):
        generic_form(canonical_split(np.diag([2.5, 0.5]), lam))


def test_frame_block_model(rng):
    V = haar_unitary(6, rng)
    T = V @ pencil_matrix([0.7, 1.1], 2.0, (1, 1, 0, 0)) @ V.conj().T
    s = canonical_split(T, 2.0)
    gf = generic_form(s)
    F = frame(s, gf)
    M = F.conj().T @ T @ F
    want = np.diag([0.0, 1.0, 1.5 + 1.1, 1.5 + 0.7, 1.5 - 1.1, 1.5 - 0.7])
    assert frob(M - want) < 1e-12


def test_json_round_trip(rng):
    V = haar_unitary(4, rng)
    T = V @ pencil_matrix([0.8], 2.0, (1, 0, 0, 1)) @ V.conj().T
    s = canonical_split(T, 2.0)
    gf = generic_form(s)
    s2 = CanonicalSplit.from_dict(s.to_dict())
    gf2 = GenericForm.from_dict(gf.to_dict())
    assert s2.dims == s.dims and frob(s2.reassemble() - T) < 1e-12
    assert np.array_equal(gf2.B, gf.B) and np.array_equal(gf2.W, gf.W)


@given(st.integers(0, 2**32 - 1), st.sampled_from([3.0, -3.0, 2.0, -2.0, 0.5, -0.5, 0.25, 1.0]))
def test_pencil_of_halmos_pair_splits_cleanly(seed, lam):
    hp = random_halmos_pair(np.random.default_rng(seed), 10)
    T = hp.pencil(lam)
    s = canonical_split(T, lam)
    gf = generic_form(s)
    assert gf.k == len(hp.thetas)
    lo, hi = band(lam)
    assert np.all((gf.b > lo) & (gf.b < hi))
    F = frame(s, gf)
    M = F.conj().T @ T @ F
    d0, d1, dl, d1l, _ = s.dims
    kern = [0.0] * d0 + [1.0] * d1 + [lam] * dl + [1.0 + lam] * d1l
    want = np.diag(np.concatenate([kern, gf.center + gf.b, gf.center - gf.b]))
    assert frob(M - want) < 1e-9 * max(1.0, frob(T))
