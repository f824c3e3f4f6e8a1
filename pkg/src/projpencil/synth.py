"""Random test material built independently of the solver.

Pairs come from the two-subspace (Halmos) picture: four trivial blocks
where ``P`` and ``Q`` are each 0 or I, plus 2x2 angle blocks::

    p = [[1, 0], [0, 0]]        q = [[cos^2 t, cos t sin t], [cos t sin t, sin^2 t]]

conjugated by a Haar unitary.  Nothing here calls the decomposition code.
"""

from dataclasses import dataclass

import numpy as np

from .linalg_core import haar_unitary

__all__ = [
    "ANGLE_MARGIN",
    "HalmosPair",
    "halmos_pair",
    "random_halmos_pair",
    "random_projection",
    "gue",
    "template_spectrum",
    "random_template",
    "conjugate_diag",
]

ANGLE_MARGIN = 0.05


@dataclass(frozen=True, eq=False)
class HalmosPair:
    """A pair of projections with its block data.

    ``trivial`` counts the blocks ``(P, Q) = (0,0), (0,I), (I,0), (I,I)``.
    """

    P: np.ndarray
    Q: np.ndarray
    trivial: tuple
    thetas: tuple

    @property
    def dim(self):
        return self.P.shape[0]

    def pencil(self, lam):
        return lam * self.P + self.Q


def halmos_pair(trivial, thetas, V=None):
    """Assemble ``(P, Q)`` from trivial block sizes and angles, then rotate."""
    n00, n01, n10, n11 = trivial
    pd = [0.0] * n00 + [0.0] * n01 + [1.0] * n10 + [1.0] * n11
    qd = [0.0] * n00 + [1.0] * n01 + [0.0] * n10 + [1.0] * n11
    m = len(pd)
    n = m + 2 * len(thetas)
    P = np.zeros((n, n), dtype=complex)
    Q = np.zeros((n, n), dtype=complex)
    P[:m, :m] = np.diag(pd)
    Q[:m, :m] = np.diag(qd)
    for i, t in enumerate(thetas):
        j = m + 2 * i
        c, s = np.cos(t), np.sin(t)
        P[j, j] = 1.0
        Q[j:j + 2, j:j + 2] = [[c * c, c * s], [c * s, s * s]]
    if V is not None:
        P = V @ P @ V.conj().T
        Q = V @ Q @ V.conj().T
    return HalmosPair(P, Q, tuple(trivial), tuple(thetas))


def random_halmos_pair(rng, max_dim=12, repeat_prob=0.3):
    """Random pair with both projections nonzero, dimension in ``[1, max_dim]``.

    Angles avoid the ends of ``(0, pi/2)`` by ``ANGLE_MARGIN``; with
    probability ``repeat_prob`` an angle repeats the previous one so that
    ``B`` gets multiple eigenvalues.
    """
    while True:
        n = int(rng.integers(1, max_dim + 1))
        n_ang = int(rng.integers(0, n // 2 + 1))
        rest = n - 2 * n_ang
        cuts = np.sort(rng.integers(0, rest + 1, size=3))
        trivial = tuple(int(x) for x in np.diff(np.concatenate([[0], cuts, [rest]])))
        thetas = []
        for _ in range(n_ang):
            if thetas and rng.random() < repeat_prob:
                thetas.append(thetas[-1])
            else:
                thetas.append(float(rng.uniform(ANGLE_MARGIN, np.pi / 2 - ANGLE_MARGIN)))
        p_rank = trivial[2] + trivial[3] + n_ang
        q_rank = trivial[1] + trivial[3] + n_ang
        if p_rank and q_rank:
            return halmos_pair(trivial, thetas, haar_unitary(n, rng))


def random_projection(n, rank, rng):
    if rank == 0:
        return np.zeros((n, n), dtype=complex)
    V = haar_unitary(n, rng)[:, :rank]
    return V @ V.conj().T


def gue(n, rng, scale=1.0):
    """Hermitian matrix with i.i.d. complex Gaussian entries."""
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (Z + Z.conj().T) / 2


def conjugate_diag(values, rng):
    """``V diag(values) V*`` for a Haar unitary ``V``."""
    values = np.asarray(values, dtype=float)
    V = haar_unitary(values.size, rng)
    return (V * values) @ V.conj().T


def template_spectrum(kind, z, mult=1, n0=0, n1=0):
    """Eigenvalue list of one of the two-lambda spectral templates.

    ``kind`` is ``"Prop31"`` (a nonzero projection; ``z`` unused),
    ``"Prop32"`` ({1, z} plus optional 0/1), ``"Prop33"`` (z, 1+z with equal
    multiplicity) or ``"Prop34"`` (the three-point families, ``z > 1/2`` or
    ``z < -1/2``).  ``n0``/``n1`` add eigenvalues 0 and 1.
    """
    extra = [0.0] * n0 + [1.0] * n1
    if kind == "Prop31":
        return extra + [1.0] * mult
    if kind == "Prop32":
        return extra + [1.0] + [z] * mult
    if kind == "Prop33":
        return extra + [z] * mult + [1.0 + z] * mult
    if kind == "Prop34":
        pts = (0.5, 0.5 + z, 1.0 + z) if z > 0 else (0.5, z, 0.5 + z)
        return extra + [p for p in pts for _ in range(mult)]
    raise ValueError(f"unknown template {kind!r}")


_AVOID = (-2.0, -1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0)


def _draw_z(rng, lo, hi):
    while True:
        z = float(rng.uniform(lo, hi))
        if min(abs(z - a) for a in _AVOID) > 0.05:
            return z


def random_template(rng, max_dim=8):
    """Random ``(kind, z, T)`` whose spectrum follows one template."""
    kind = ("Prop31", "Prop32", "Prop33", "Prop34")[int(rng.integers(0, 4))]
    if kind == "Prop31":
        z, per = None, 1
    elif kind == "Prop32":
        z, per = _draw_z(rng, -4.0, 4.0), 1
    elif kind == "Prop33":
        z, per = _draw_z(rng, -1.0, 1.0), 2
    else:
        z = _draw_z(rng, 0.5, 4.0) if rng.random() < 0.5 else _draw_z(rng, -4.0, -0.5)
        per = 3
    base = 1 if kind == "Prop32" else 0
    mult = int(rng.integers(1, max(1, (max_dim - base) // per) + 1))
    room = max_dim - base - per * mult
    n0 = int(rng.integers(0, room + 1))
    n1 = int(rng.integers(0, room - n0 + 1))
    vals = template_spectrum(kind, z, mult, n0, n1)
    return kind, z, conjugate_diag(vals, rng)
