"""Commutants and generated *-algebras of finite matrix families.

The commutant of ``{G_i}`` is the null space of the stacked maps
``X -> G_i X - X G_i``; with column-major ``vec`` each map is
``I (x) G - G^T (x) I``.  The generated unital *-algebra is the double
commutant.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import qr

from .canonical import is_lambda_one, lambda_excluded
from .construction import build_pair
from .errors import DimensionMismatch, LambdaExcluded, NotAPencilPair, PredictionMismatch
from .feasibility import is_pencil_at
from .linalg_core import DEFAULT_TOL, frob, haar_unitary, random_unitary_in_commutant

__all__ = [
    "RANK_TOL",
    "AlgebraBasis",
    "StructureReport",
    "commutant",
    "generated_algebra",
    "structure_check",
    "predict_dims",
]

RANK_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class AlgebraBasis:
    """Orthonormal (Frobenius) basis of a matrix subspace.

    ``basis`` has shape ``(dim, n, n)``.
    """

    ambient_dim: int
    basis: np.ndarray

    @property
    def dim(self):
        return self.basis.shape[0]

    def contains(self, X, tol=1e-8):
        """Is ``X`` in the span (relative Frobenius residual below ``tol``)?"""
        X = np.asarray(X, dtype=complex)
        flat = self.basis.reshape(self.dim, -1)
        coef = flat.conj() @ X.reshape(-1)
        res = X.reshape(-1) - coef @ flat
        return frob(res) <= tol * max(1.0, frob(X))

    def check(self, n_products=16, seed=0, tol=1e-8):
        """Verify unital, adjoint-closed, sampled-product-closed, independent.

        Returns a dict of booleans plus the smallest singular value of the
        stacked basis.
        """
        n = self.ambient_dim
        flat = self.basis.reshape(self.dim, -1)
        sv = np.linalg.svd(flat, compute_uv=False) if self.dim else np.zeros(0)
        rng = np.random.default_rng(seed)
        products = True
        for _ in range(n_products if self.dim else 0):
            a = rng.standard_normal(self.dim) + 1j * rng.standard_normal(self.dim)
            b = rng.standard_normal(self.dim) + 1j * rng.standard_normal(self.dim)
            X = np.tensordot(a, self.basis, 1)
            Y = np.tensordot(b, self.basis, 1)
            products &= self.contains(X @ Y, tol)
        out = {
            "unital": self.contains(np.eye(n), tol),
            "adjoint_closed": all(self.contains(M.conj().T, tol) for M in self.basis),
            "product_closed": bool(products),
            "independent": bool(sv.size == 0 or sv.min() > RANK_TOL),
            "min_singular_value": float(sv.min()) if sv.size else 0.0,
        }
        out["ok"] = all(out[k] for k in ("unital", "adjoint_closed", "product_closed",
                                         "independent"))
        return out

    def to_dict(self):
        return {"ambient_dim": self.ambient_dim, "dim": self.dim}


def _as_generators(generators):
    gens = [np.asarray(G, dtype=complex) for G in generators]
    if not gens:
        raise DimensionMismatch("need at least one generator")
    n = gens[0].shape[0]
    for G in gens:
        if G.ndim != 2 or G.shape != (n, n):
            raise DimensionMismatch(f"generator of shape {G.shape}, expected {(n, n)}")
    return n, gens


def commutant(generators, rank_tol=RANK_TOL):
    """Basis of ``{X : XG = GX}`` for every generator ``G`` and its adjoint.

    Generators are scaled to unit Frobenius norm; singular values below
    ``rank_tol * max(1, sigma_max)`` count as zero, so generators that are
    multiples of the identity up to roundoff give the full matrix algebra.

    Raises
    ------
    DimensionMismatch
    """
    n, gens = _as_generators(generators)
    gens = [G / frob(G) for G in gens if frob(G) > 0]
    gens = gens + [G.conj().T for G in gens]
    I = np.eye(n)
    R = np.zeros((1, n * n), dtype=complex)
    for G in gens:
        L = np.kron(I, G) - np.kron(G.T, I)
        # keep only the triangular factor so memory stays at n^2 x n^2
        R = qr(np.vstack([R, L]), mode="r")[0][: n * n]
    _, s, Vh = np.linalg.svd(R)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > rank_tol * max(1.0, smax)))
    null = Vh[rank:].conj()
    basis = null.reshape(-1, n, n).transpose(0, 2, 1)
    return AlgebraBasis(n, np.ascontiguousarray(basis))


def generated_algebra(generators, rank_tol=RANK_TOL):
    """Unital *-algebra generated by ``generators`` (the double commutant)."""
    n, gens = _as_generators(generators)
    first = commutant(gens, rank_tol)
    return commutant(list(first.basis), rank_tol)


@dataclass(frozen=True)
class StructureReport:
    lam: float
    kernel_dims: tuple
    b_multiplicities: tuple
    n_pairs: int
    predicted_commutant: int
    measured_commutant: int
    predicted_algebra: int
    measured_algebra: int

    @property
    def match(self):
        return (self.predicted_commutant == self.measured_commutant
                and self.predicted_algebra == self.measured_algebra)

    def to_dict(self):
        d = dict(self.__dict__)
        d["kernel_dims"] = list(self.kernel_dims)
        d["b_multiplicities"] = list(self.b_multiplicities)
        d["match"] = self.match
        return d

    @classmethod
    def from_dict(cls, d):
        d = {k: v for k, v in d.items() if k != "match"}
        d["kernel_dims"] = tuple(d["kernel_dims"])
        d["b_multiplicities"] = tuple(d["b_multiplicities"])
        return cls(**d)


def predict_dims(kernel_dims, b_multiplicities, lam_is_one):
    """Closed-form ``(dim commutant, dim algebra)`` of the solution family.

    Off ``lam = 1`` the commutant is ``B(N(T)) + B(N(T-I)) + B(N(T-lam I))
    + B(N(T-(1+lam)I)) + W*(B) (x) I_2``; at ``lam = 1`` the ``N(T-I)``
    summand shrinks to scalars (``E`` ranges over all projections).
    """
    mults = list(b_multiplicities)
    m = len(mults)
    gen_alg = 4 * sum(x * x for x in mults)
    if lam_is_one:
        d0, d1, _, d2 = kernel_dims
        comm = d0 * d0 + int(d1 > 0) + d2 * d2 + m
        alg = int(d0 > 0) + d1 * d1 + int(d2 > 0) + gen_alg
        return comm, alg
    comm = sum(d * d for d in kernel_dims) + m
    alg = sum(int(d > 0) for d in kernel_dims) + gen_alg
    return comm, alg


def _random_projection(n, r, rng):
    if r == 0:
        return np.zeros((n, n), dtype=complex)
    V = haar_unitary(n, rng)[:, :r]
    return V @ V.conj().T


def structure_check(T, lam, n_samples=8, seed=0, tol=DEFAULT_TOL, strict=False):
    """Compare measured commutant and algebra dimensions with the prediction.

    ``n_samples`` pairs are drawn with random ``U`` in ``{B}'``.  At
    ``lam = 1`` the rank of ``E`` cycles through ``1..d1-1``, middle ranks
    first, and the pairs with ``E = 0`` and ``E = I`` are added whenever they
    keep ``P`` and ``Q`` nonzero, so every admissible rank is represented.
    Sample sets are nested in ``n_samples``.

    Raises
    ------
    LambdaExcluded, NotAPencilPair
        If ``lam`` is excluded or ``T`` is not a pencil at ``lam``.
    PredictionMismatch
        Only with ``strict=True``.
    """
    rep = is_pencil_at(T, lam, tol)
    if lambda_excluded(rep.lam, rep.split.atol):
        raise LambdaExcluded(lam)
    if not rep.feasible:
        raise NotAPencilPair(f"T is not a pencil at lam={lam}: {rep.reason.value}")
    split, gf = rep.split, rep.generic_form
    one = is_lambda_one(split.lam, split.atol)
    d1 = split.dims[1]
    k = 0 if gf is None else gf.k
    ranks, extra = [None], []
    if one and d1:
        ranks = sorted(range(1, d1), key=lambda r: (abs(2 * r - d1), r)) or [None]
        # E = 0 or E = I zeroes P or Q when nothing else carries them
        if split.dims[3] + k:
            extra = [0, d1]
    rng = np.random.default_rng(seed)

    gens = []
    for r in extra:
        U = None if gf is None else random_unitary_in_commutant(gf.B, rng, tol)
        pair = build_pair(gf, split, U, _random_projection(d1, r, rng), tol)
        gens += [pair.P, pair.Q]
    for i in range(max(1, int(n_samples))):
        U = None if gf is None else random_unitary_in_commutant(gf.B, rng, tol)
        r = ranks[i % len(ranks)]
        E = None if r is None else _random_projection(d1, r, rng)
        if r is None and one and d1:
            E = _random_projection(d1, int(rng.integers(0, 2)) * d1, rng)
        pair = build_pair(gf, split, U, E, tol)
        gens += [pair.P, pair.Q]

    mults = () if gf is None else tuple(len(c) for c in gf.clusters())
    pc, pa = predict_dims(split.kernel_dims, mults, one)
    mc = commutant(gens).dim
    ma = generated_algebra(gens).dim
    out = StructureReport(split.lam, split.kernel_dims, mults, len(gens) // 2, pc, mc, pa, ma)
    if strict:
        if pc != mc:
            raise PredictionMismatch("commutant dimension", pc, mc)
        if pa != ma:
            raise PredictionMismatch("algebra dimension", pa, ma)
    return out
