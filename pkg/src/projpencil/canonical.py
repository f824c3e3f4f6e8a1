"""Five-space decomposition of ``T`` at a given lambda and the ``B (+) -B``
normal form of its generic part.

For ``T`` Hermitian and real ``lam`` the ambient space splits as::

    N(T) (+) N(T - I) (+) N(T - lam I) (+) N(T - (1+lam) I) (+) H0

and ``T`` acts as ``0 (+) I (+) lam I (+) (1+lam) I (+) T0``.  A pencil at
``lam`` exists only if ``T0 - c I`` (``c = (1+lam)/2``) is unitarily
equivalent to ``B (+) -B`` with ``B`` inside the open band
``(|1-|lam||/2, (1+|lam|)/2)``.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import Infeasible, LambdaExcluded
from .linalg_core import (DEFAULT_TOL, SpectralData, cluster_sorted, eig_hermitian,
                          frob, hermitian, matrix_from_dict, matrix_to_dict, readonly)

__all__ = [
    "Reason",
    "BLOCK_NAMES",
    "CanonicalSplit",
    "GenericForm",
    "canonical_split",
    "generic_form",
    "band",
    "lambda_excluded",
    "is_lambda_one",
    "frame",
]

BLOCK_NAMES = ("zero", "one", "lam", "one_plus_lam", "generic")


class Reason(str, Enum):
    OK = "OK"
    BandViolation = "BandViolation"
    AsymmetricSpectrum = "AsymmetricSpectrum"
    ForcedZeroP = "ForcedZeroP"
    ForcedZeroQ = "ForcedZeroQ"
    LambdaExcluded = "LambdaExcluded"
    OddGenericDimension = "OddGenericDimension"


def band(lam):
    """Open interval that the eigenvalues of ``B`` must lie in."""
    a = abs(lam)
    return abs(1.0 - a) / 2.0, (1.0 + a) / 2.0


def lambda_excluded(lam, atol, include_one=False):
    bad = (-1.0, 0.0, 1.0) if include_one else (-1.0, 0.0)
    return any(abs(lam - b) <= atol for b in bad)


def is_lambda_one(lam, atol):
    return abs(lam - 1.0) <= atol


@dataclass(frozen=True, eq=False)
class CanonicalSplit:
    """Orthonormal bases of the five reducing subspaces of ``T``.

    ``bases[i]`` is ``n x d_i``; together they form a unitary.  ``T0`` is
    ``T`` compressed to the last (generic) block; ``atol`` is the absolute
    clustering tolerance the split was computed with.
    """

    lam: float
    bases: tuple
    T0: np.ndarray
    atol: float

    def __post_init__(self):
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "bases", tuple(readonly(b) for b in self.bases))
        object.__setattr__(self, "T0", readonly(self.T0))
        if len(self.bases) != 5:
            raise ValueError("CanonicalSplit needs exactly five bases")

    @property
    def dim(self):
        return self.bases[0].shape[0]

    @property
    def dims(self):
        return tuple(b.shape[1] for b in self.bases)

    @property
    def kernel_dims(self):
        return self.dims[:4]

    def unitary(self):
        """Concatenated bases (an ``n x n`` unitary)."""
        return np.hstack(self.bases)

    def block_model(self):
        """``0 (+) I (+) lam I (+) (1+lam) I (+) T0`` in split coordinates."""
        d0, d1, dl, d1l, g = self.dims
        diag = [0.0] * d0 + [1.0] * d1 + [self.lam] * dl + [1.0 + self.lam] * d1l
        M = np.zeros((self.dim, self.dim), dtype=complex)
        m = len(diag)
        M[:m, :m] = np.diag(diag)
        M[m:, m:] = self.T0
        return M

    def reassemble(self):
        Uf = self.unitary()
        return Uf @ self.block_model() @ Uf.conj().T

    def to_dict(self):
        return {
            "lambda": self.lam,
            "atol": self.atol,
            "dims": dict(zip(BLOCK_NAMES, self.dims)),
            "bases": {name: _rect_to_dict(b) for name, b in zip(BLOCK_NAMES, self.bases)},
            "T0": matrix_to_dict(self.T0),
        }

    @classmethod
    def from_dict(cls, d):
        bases = tuple(_rect_from_dict(d["bases"][name]) for name in BLOCK_NAMES)
        return cls(d["lambda"], bases, matrix_from_dict(d["T0"]), d["atol"])


@dataclass(frozen=True, eq=False)
class GenericForm:
    """Normal form of the generic part.

    ``W`` is a unitary on ``H0`` coordinates with
    ``W* (T0 - center I) W = B (+) -B``; ``B`` is diagonal with descending
    eigenvalues, each eigencluster snapped to its mean.
    """

    lam: float
    center: float
    B: np.ndarray
    W: np.ndarray
    atol: float

    def __post_init__(self):
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "center", float(self.center))
        object.__setattr__(self, "B", readonly(self.B))
        object.__setattr__(self, "W", readonly(self.W))

    @property
    def k(self):
        return self.B.shape[0]

    @property
    def b(self):
        """Diagonal of ``B`` (descending)."""
        return np.real(np.diagonal(self.B)).copy()

    def clusters(self):
        """Index arrays of the eigenclusters of ``B``."""
        # b is descending; cluster on the reversed (ascending) sequence
        b = self.b[::-1]
        k = self.k
        return [np.sort(k - 1 - idx) for idx in cluster_sorted(b, self.atol)][::-1]

    def n_distinct(self):
        return len(self.clusters())

    @classmethod
    def empty(cls, lam, atol):
        z = np.zeros((0, 0), dtype=complex)
        return cls(lam, (1.0 + lam) / 2.0, z, z, atol)

    def to_dict(self):
        return {
            "lambda": self.lam,
            "center": self.center,
            "atol": self.atol,
            "B_eigenvalues": [float(x) for x in self.b],
            "B": matrix_to_dict(self.B),
            "W": matrix_to_dict(self.W),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(d["lambda"], d["center"], matrix_from_dict(d["B"]),
                   matrix_from_dict(d["W"]), d["atol"])


def _rect_to_dict(M):
    M = np.asarray(M, dtype=complex)
    return {"rows": int(M.shape[0]), "cols": int(M.shape[1]),
            "entries": [[float(z.real), float(z.imag)] for z in M.reshape(-1)]}


def _rect_from_dict(d):
    r, c = d["rows"], d["cols"]
    e = np.array(d["entries"], dtype=float).reshape(-1, 2) if r * c else np.zeros((0, 2))
    return (e[:, 0] + 1j * e[:, 1]).reshape(r, c)


def canonical_split(T, lam, tol=DEFAULT_TOL, spectral=None):
    """Split ``T`` into the four kernels and the generic part at ``lam``.

    An eigenvalue is absorbed into the earliest of ``0, 1, lam, 1+lam`` that
    it lies within the scaled ``cluster_tol`` of; whatever is left spans
    ``H0``.

    Parameters
    ----------
    T : (n, n) array_like
        Hermitian matrix.
    lam : float
    tol : Tolerances
    spectral : SpectralData, optional
        Precomputed eigendecomposition of ``T`` (reused across many lambdas).
    """
    lam = float(lam)
    if not np.isfinite(lam):
        raise ValueError(f"lambda must be finite, got {lam!r}")
    T = hermitian(T, tol)
    sd = spectral if spectral is not None else eig_hermitian(T, tol)
    atol = tol.cluster_abs(sd.norm2)
    w, V = sd.eigenvalues, sd.eigenvectors
    targets = (0.0, 1.0, lam, 1.0 + lam)
    owner = np.full(w.shape, 4)
    for i, x in enumerate(w):
        for j, t in enumerate(targets):
            if abs(x - t) <= atol:
                owner[i] = j
                break
    bases = tuple(V[:, owner == j] for j in range(5))
    b5 = bases[4]
    T0 = b5.conj().T @ T @ b5
    T0 = (T0 + T0.conj().T) / 2
    return CanonicalSplit(lam, bases, T0, atol)


def generic_form(split, tol=DEFAULT_TOL):
    """Normal form ``T0 - cI ~ B (+) -B`` of the generic part.

    The ``+mu`` and ``-mu`` eigenvectors of ``A = T0 - cI`` are paired cluster
    by cluster (eigensolver order inside a cluster).

    Raises
    ------
    LambdaExcluded
        If ``lam`` is within tolerance of -1 or 0.
    Infeasible
        With reason ``BandViolation``, ``OddGenericDimension`` or
        ``AsymmetricSpectrum`` (checked in that order).
    """
    lam, atol = split.lam, split.atol
    if lambda_excluded(lam, atol):
        raise LambdaExcluded(lam)
    c = (1.0 + lam) / 2.0
    g = split.T0.shape[0]
    if g == 0:
        return GenericForm.empty(lam, atol)

    A = split.T0 - c * np.eye(g)
    sd = eig_hermitian(A, tol)
    mu, V = sd.eigenvalues, sd.eigenvectors
    lo, hi = band(lam)
    bad = (np.abs(mu) < lo + atol) | (np.abs(mu) > hi - atol)
    if np.any(bad):
        raise Infeasible(Reason.BandViolation,
                         f"|mu|={np.abs(mu[bad]).tolist()} outside open band ({lo}, {hi})")
    if g % 2:
        raise Infeasible(Reason.OddGenericDimension, f"dim H0 = {g}")

    # cluster |mu| jointly, then demand as many +mu as -mu in every cluster
    order = np.argsort(np.abs(mu), kind="stable")
    absmu = np.abs(mu)[order]
    plus, minus, values = [], [], []
    for idx in cluster_sorted(absmu, atol):
        members = order[idx]
        pos = [i for i in members if mu[i] > 0]
        neg = [i for i in members if mu[i] < 0]
        if len(pos) != len(neg):
            raise Infeasible(
                Reason.AsymmetricSpectrum,
                f"|mu|~{absmu[idx].mean():.12g}: {len(pos)} positive vs {len(neg)} negative")
        plus.append(sorted(pos))
        minus.append(sorted(neg))
        values.append(float(absmu[idx].mean()))

    # descending B
    plus, minus, values = plus[::-1], minus[::-1], values[::-1]
    b = np.concatenate([[v] * len(p) for v, p in zip(values, plus)])
    cols_p = [i for p in plus for i in p]
    cols_m = [i for m in minus for i in m]
    W = np.hstack([V[:, cols_p], V[:, cols_m]])
    return GenericForm(lam, c, np.diag(b).astype(complex), W, atol)


def frame(split, gform=None):
    """Unitary whose columns are the kernel bases followed by ``b5 @ W``.

    In these coordinates ``T`` is
    ``diag(0.., 1.., lam.., 1+lam..) (+) (c + B) (+) (c - B)``.
    """
    b5 = split.bases[4]
    tail = b5 if gform is None or gform.k == 0 else b5 @ gform.W
    return np.hstack(list(split.bases[:4]) + [tail])
