"""Dense Hermitian kernels shared by every other module.

Matrices are plain complex ``numpy`` arrays; :func:`hermitian` is the
gatekeeper that validates and symmetrizes them.  Values handed out by the
dataclasses here are read-only copies.
"""

from dataclasses import dataclass

import numpy as np

from .errors import EigenSolverError, MatrixFormatError, NotHermitianError

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "DEFAULT_MAX_DIM",
    "SpectralData",
    "hermitian",
    "eig_hermitian",
    "is_projection",
    "cluster_sorted",
    "haar_unitary",
    "random_unitary_in_commutant",
    "unitary_log",
    "unitary_power",
    "frob",
    "readonly",
    "matrix_to_dict",
    "matrix_from_dict",
]

DEFAULT_MAX_DIM = 512


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds.

    ``cluster_tol`` is relative: the absolute gap used for eigenvalue
    clustering is ``cluster_tol * max(1, ||M||_2)``, see :meth:`cluster_abs`.
    """

    herm_tol: float = 1e-10
    eig_tol: float = 1e-10
    ortho_tol: float = 1e-10
    cluster_tol: float = 1e-8
    residual_tol: float = 1e-9

    def __post_init__(self):
        for name in ("herm_tol", "eig_tol", "ortho_tol", "cluster_tol", "residual_tol"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {v!r}")
        if self.cluster_tol <= 0:
            raise ValueError("cluster_tol must be > 0")

    def cluster_abs(self, scale):
        return self.cluster_tol * max(1.0, float(scale))

    def to_dict(self):
        return {k: getattr(self, k) for k in
                ("herm_tol", "eig_tol", "ortho_tol", "cluster_tol", "residual_tol")}


DEFAULT_TOL = Tolerances()


def readonly(a, dtype=complex):
    a = np.array(a, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a


def frob(a):
    return float(np.linalg.norm(a)) if np.size(a) else 0.0


def hermitian(M, tol=DEFAULT_TOL, max_dim=DEFAULT_MAX_DIM):
    """Validate ``M`` as a Hermitian matrix and return ``(M + M*) / 2``.

    Raises
    ------
    MatrixFormatError
        If ``M`` is not a non-empty finite square 2-D array within ``max_dim``.
    NotHermitianError
        If ``||M - M*||_F > herm_tol * max(1, ||M||_F)``.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise MatrixFormatError(f"expected a non-empty square matrix, got shape {M.shape}")
    if M.shape[0] > max_dim:
        raise MatrixFormatError(f"dimension {M.shape[0]} exceeds cap {max_dim}")
    if not np.all(np.isfinite(M)):
        raise MatrixFormatError("matrix has non-finite entries")
    skew = frob(M - M.conj().T)
    if skew > tol.herm_tol * max(1.0, frob(M)):
        raise NotHermitianError(f"||M - M*||_F = {skew:.3e} exceeds tolerance")
    return (M + M.conj().T) / 2


@dataclass(frozen=True, eq=False)
class SpectralData:
    """Ascending eigenvalues with orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "eigenvalues", readonly(self.eigenvalues, float))
        object.__setattr__(self, "eigenvectors", readonly(self.eigenvectors))

    @property
    def dim(self):
        return self.eigenvalues.shape[0]

    @property
    def norm2(self):
        return float(np.max(np.abs(self.eigenvalues))) if self.dim else 0.0

    def reconstruct(self):
        V = self.eigenvectors
        return (V * self.eigenvalues) @ V.conj().T


def eig_hermitian(M, tol=DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix.

    The result is checked against the :class:`SpectralData` contract
    (orthonormality within ``ortho_tol``, residual within ``eig_tol``).
    """
    M = hermitian(M, tol)
    try:
        w, V = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        cond = np.linalg.cond(M) if np.all(np.isfinite(M)) else np.inf
        raise EigenSolverError(
            f"eigh failed on {M.shape[0]}x{M.shape[0]} matrix "
            f"(||M||_F={frob(M):.3e}, cond={cond:.3e}): {exc}") from exc
    n = M.shape[0]
    ortho = frob(V.conj().T @ V - np.eye(n))
    resid = frob(M @ V - V * w)
    scale = max(1.0, frob(M))
    # eigh is backward stable; the bound only grows with n through eps
    if ortho > max(tol.ortho_tol, 64 * n * np.finfo(float).eps) or \
            resid > max(tol.eig_tol, 64 * n * np.finfo(float).eps) * scale:
        raise EigenSolverError(
            f"eigensolver accuracy check failed: ortho={ortho:.3e}, resid={resid:.3e}")
    return SpectralData(w, V)


def is_projection(M, tol=DEFAULT_TOL):
    """Return ``(ok, residual)`` with ``residual = ||M^2 - M||_F``."""
    M = hermitian(M, tol)
    residual = frob(M @ M - M)
    return residual <= tol.residual_tol * max(1.0, frob(M)), residual


def cluster_sorted(values, gap):
    """Single-linkage clusters of an ascending sequence.

    Returns a list of index arrays; a new cluster starts wherever two
    consecutive values differ by more than ``gap``.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return []
    breaks = np.flatnonzero(np.diff(values) > gap) + 1
    return np.split(np.arange(values.size), breaks)


def haar_unitary(n, rng):
    """Haar-distributed ``n x n`` unitary (QR of a Ginibre matrix, phase-fixed)."""
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def random_unitary_in_commutant(B, seed=0, tol=DEFAULT_TOL):
    """Random unitary commuting with the Hermitian matrix ``B``.

    Eigenvalues of ``B`` are clustered with the scaled ``cluster_tol`` and an
    independent Haar unitary is drawn on each eigencluster.

    Parameters
    ----------
    B : (k, k) array_like
        Hermitian matrix (``k`` may be 0).
    seed : int or numpy.random.Generator
    """
    B = np.asarray(B, dtype=complex)
    k = B.shape[0]
    if k == 0:
        return np.zeros((0, 0), dtype=complex)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    sd = eig_hermitian(B, tol)
    V = sd.eigenvectors
    D = np.zeros((k, k), dtype=complex)
    for idx in cluster_sorted(sd.eigenvalues, tol.cluster_abs(sd.norm2)):
        D[np.ix_(idx, idx)] = haar_unitary(idx.size, rng)
    return V @ D @ V.conj().T


def _unitary_schur(G):
    from scipy.linalg import schur

    Tm, Z = schur(np.asarray(G, dtype=complex), output="complex")
    return np.diagonal(Tm).copy(), Z


def unitary_log(G, tol=DEFAULT_TOL):
    """Hermitian ``H`` with ``G = exp(iH)`` on the principal branch.

    Eigenphases lie in ``(-pi, pi]``; a phase within ``cluster_tol`` of
    ``-pi`` is moved to ``+pi``.
    """
    if np.shape(G)[0] == 0:
        return np.zeros((0, 0), dtype=complex)
    ev, Z = _unitary_schur(G)
    theta = np.angle(ev)
    theta[theta <= -np.pi + tol.cluster_tol] = np.pi
    H = (Z * theta) @ Z.conj().T
    return (H + H.conj().T) / 2


def unitary_power(G, t, tol=DEFAULT_TOL):
    """``G**t`` along the principal-branch one-parameter group."""
    if np.shape(G)[0] == 0:
        return np.zeros((0, 0), dtype=complex)
    ev, Z = _unitary_schur(G)
    theta = np.angle(ev)
    theta[theta <= -np.pi + tol.cluster_tol] = np.pi
    return (Z * np.exp(1j * t * theta)) @ Z.conj().T


def matrix_to_dict(M):
    """Row-major ``{"dim": n, "entries": [[re, im], ...]}`` encoding."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise MatrixFormatError(f"expected a square matrix, got shape {M.shape}")
    flat = M.reshape(-1)
    return {"dim": int(M.shape[0]),
            "entries": [[float(z.real), float(z.imag)] for z in flat]}


def matrix_from_dict(d):
    if not isinstance(d, dict) or "dim" not in d or "entries" not in d:
        raise MatrixFormatError("matrix JSON needs 'dim' and 'entries'")
    n = d["dim"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise MatrixFormatError(f"'dim' must be a non-negative integer, got {n!r}")
    entries = d["entries"]
    if not isinstance(entries, list) or len(entries) != n * n:
        raise MatrixFormatError(f"'entries' must be a list of length dim^2 = {n * n}")
    out = np.empty(n * n, dtype=complex)
    for i, e in enumerate(entries):
        if (not isinstance(e, (list, tuple)) or len(e) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in e)):
            raise MatrixFormatError(f"entry {i} must be a [re, im] pair of numbers")
        if not (np.isfinite(e[0]) and np.isfinite(e[1])):
            raise MatrixFormatError(f"entry {i} is not finite")
        out[i] = complex(e[0], e[1])
    return out.reshape(n, n)
