import numpy as np
import pytest

from projpencil.linalg_core import frob, is_projection
from projpencil.synth import (conjugate_diag, gue, halmos_pair, random_halmos_pair,
                              random_template, template_spectrum)


def test_halmos_pair_blocks():
    hp = halmos_pair((1, 1, 1, 1), [np.pi / 4])
    assert hp.dim == 6
    assert is_projection(hp.P)[0] and is_projection(hp.Q)[0]
    assert np.allclose(np.diag(hp.P)[:4], [0, 0, 1, 1])
    assert np.allclose(np.diag(hp.Q)[:4], [0, 1, 0, 1])


def test_random_pairs_are_nonzero_projections(rng):
    for _ in range(50):
        hp = random_halmos_pair(rng, 9)
        assert 1 <= hp.dim <= 9
        assert is_projection(hp.P)[0] and is_projection(hp.Q)[0]
        assert np.trace(hp.P).real > 0.5 and np.trace(hp.Q).real > 0.5


def test_templates():
    assert sorted(template_spectrum("Prop34", 2.0, 1)) == [0.5, 2.5, 3.0]
    assert sorted(template_spectrum("Prop34", -2.0, 1)) == [-2.0, -1.5, 0.5]
    assert sorted(template_spectrum("Prop33", 0.5, 2, n0=1)) == [0, 0.5, 0.5, 1.5, 1.5]
    with pytest.raises(ValueError):
        template_spectrum("nope", 1.0)


def test_random_template_dims(rng):
    for _ in range(40):
        kind, z, T = random_template(rng, 8)
        assert T.shape[0] <= 8


def test_gue_and_conjugate(rng):
    H = gue(5, rng)
    assert frob(H - H.conj().T) == 0
    T = conjugate_diag([1.0, 2.0], rng)
    assert np.allclose(np.linalg.eigvalsh(T), [1.0, 2.0])
