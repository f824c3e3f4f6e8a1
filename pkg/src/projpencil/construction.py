"""Build, check, parametrize, connect and compare pairs with ``T = lam P + Q``.

Every pair at a fixed lambda is determined by a unitary ``U`` commuting with
``B`` and, for ``lam = 1``, a projection ``E`` on ``N(T - I)``.  In the frame
returned by :func:`projpencil.canonical.frame` the generic block of ``P`` is::

    [[ p11(B),      p12(B) U ],
     [ U* p12(B),   p22(B)   ]]

with scalar functions of ``B`` evaluated on its diagonal.
"""

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np
from scipy.linalg import polar

from .canonical import (GenericForm, canonical_split, frame, generic_form, is_lambda_one,
                        lambda_excluded)
from .errors import (CommutationViolation, DifferentComponents, Infeasible, LambdaExcluded,
                     MissingE, NotAPencilPair, ZeroProjection)
from .linalg_core import (DEFAULT_TOL, eig_hermitian, frob, hermitian, matrix_from_dict,
                          matrix_to_dict, readonly, unitary_power)

__all__ = [
    "ProjectionPair",
    "PairParams",
    "ResidualReport",
    "PairPath",
    "generic_blocks",
    "build_pair",
    "build_from_T",
    "verify_pair",
    "canonicalize_pair",
    "equivalence_witness",
    "spectral_mismatch",
    "connect_pairs",
    "component_label",
]


@dataclass(frozen=True, eq=False)
class ProjectionPair:
    lam: float
    P: np.ndarray
    Q: np.ndarray
    U: Optional[np.ndarray] = None
    E: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "P", readonly(self.P))
        object.__setattr__(self, "Q", readonly(self.Q))
        if self.U is not None:
            object.__setattr__(self, "U", readonly(self.U))
        if self.E is not None:
            object.__setattr__(self, "E", readonly(self.E))

    @property
    def T(self):
        return self.lam * self.P + self.Q

    def to_dict(self):
        params = {}
        if self.U is not None:
            params["U"] = matrix_to_dict(self.U)
        if self.E is not None:
            params["E"] = matrix_to_dict(self.E)
        return {"lambda": self.lam, "P": matrix_to_dict(self.P),
                "Q": matrix_to_dict(self.Q), "params": params}

    @classmethod
    def from_dict(cls, d):
        params = d.get("params") or {}
        U = params.get("U")
        E = params.get("E")
        return cls(d["lambda"], matrix_from_dict(d["P"]), matrix_from_dict(d["Q"]),
                   None if U is None else matrix_from_dict(U),
                   None if E is None else matrix_from_dict(E))


class PairParams(NamedTuple):
    U: np.ndarray
    E: Optional[np.ndarray]


@dataclass(frozen=True)
class ResidualReport:
    idempotent_P: float
    idempotent_Q: float
    pencil: float
    anticommutation: float
    nonzero: bool
    passed: bool

    def to_dict(self):
        return dict(self.__dict__)


@dataclass(frozen=True, eq=False)
class PairPath:
    lam: float
    ts: tuple
    samples: tuple
    reports: tuple

    @property
    def steps(self):
        return len(self.ts) - 1

    @property
    def max_residual(self):
        return max(max(r.idempotent_P, r.idempotent_Q, r.pencil) for r in self.reports)

    @property
    def all_passed(self):
        return all(r.passed for r in self.reports)

    def to_dict(self):
        return {"lambda": self.lam, "steps": self.steps, "ts": list(self.ts),
                "max_residual": self.max_residual, "all_passed": self.all_passed,
                "samples": [s.to_dict() for s in self.samples],
                "reports": [r.to_dict() for r in self.reports]}

    @classmethod
    def from_dict(cls, d):
        return cls(d["lambda"], tuple(d["ts"]),
                   tuple(ProjectionPair.from_dict(s) for s in d["samples"]),
                   tuple(ResidualReport(**r) for r in d["reports"]))


def generic_blocks(b, lam, atol=0.0):
    """Scalar block functions ``(p11, p22, p12, q11, q22, q12)`` on ``b``.

    ``P = [[p11, p12 U], [U* p12, p22]]`` and likewise for ``Q``; all six are
    arrays over the eigenvalues ``b`` of ``B``.
    """
    b = np.asarray(b, dtype=float)
    if is_lambda_one(lam, atol):
        p11 = (1.0 + b) / 2.0
        p22 = (1.0 - b) / 2.0
        p12 = np.sqrt(np.clip(1.0 - b * b, 0.0, None)) / 2.0
        return p11, p22, p12, p11.copy(), p22.copy(), -p12
    c = (1.0 + lam) / 2.0
    d = (1.0 - lam) / 2.0
    p11 = (b + c) * (b - d) / (2.0 * lam * b)
    p22 = -(b - c) * (b + d) / (2.0 * lam * b)
    radicand = -(b * b - c * c) * (b * b - d * d)
    p12 = np.sqrt(np.clip(radicand, 0.0, None)) / (2.0 * lam * b)
    q11 = (b + c) * (b + d) / (2.0 * b)
    q22 = -(b - c) * (b - d) / (2.0 * b)
    return p11, p22, p12, q11, q22, -lam * p12


def _generic_PQ(gform, U):
    k = gform.k
    p11, p22, p12, q11, q22, q12 = generic_blocks(gform.b, gform.lam, gform.atol)
    P = np.zeros((2 * k, 2 * k), dtype=complex)
    Q = np.zeros((2 * k, 2 * k), dtype=complex)
    P[:k, :k] = np.diag(p11)
    P[k:, k:] = np.diag(p22)
    P[:k, k:] = p12[:, None] * U
    P[k:, :k] = P[:k, k:].conj().T
    Q[:k, :k] = np.diag(q11)
    Q[k:, k:] = np.diag(q22)
    Q[:k, k:] = q12[:, None] * U
    Q[k:, :k] = Q[:k, k:].conj().T
    return P, Q


def _check_commutant(gform, U, tol):
    k = gform.k
    U = np.asarray(U, dtype=complex)
    if U.shape != (k, k):
        raise CommutationViolation(f"U has shape {U.shape}, expected {(k, k)}")
    if k == 0:
        return U
    unit = frob(U.conj().T @ U - np.eye(k))
    comm = frob(U @ gform.B - gform.B @ U)
    if unit > max(tol.ortho_tol, tol.residual_tol) * max(1.0, np.sqrt(k)):
        raise CommutationViolation(f"U is not unitary (||U*U - I||_F = {unit:.3e})")
    if comm > tol.residual_tol * max(1.0, frob(gform.B)):
        raise CommutationViolation(f"||UB - BU||_F = {comm:.3e} exceeds tolerance")
    return U


def build_pair(gform, split, U=None, E=None, tol=DEFAULT_TOL):
    """Assemble the pair with parameters ``U`` (and ``E`` when ``lam = 1``).

    Parameters
    ----------
    gform : GenericForm or None
        ``None`` (or an empty form) when the generic part is trivial.
    split : CanonicalSplit
    U : (k, k) array_like, optional
        Unitary commuting with ``gform.B``; identity by default.
    E : (d1, d1) array_like, optional
        Projection on ``N(T - I)`` in ``split.bases[1]`` coordinates; only for
        ``lam = 1``.  Defaults to 0 when that leaves both ``P`` and ``Q``
        nonzero.

    Raises
    ------
    LambdaExcluded, CommutationViolation, MissingE, ZeroProjection
    """
    lam, atol = split.lam, split.atol
    if lambda_excluded(lam, atol):
        raise LambdaExcluded(lam)
    if gform is None:
        if split.dims[4]:
            raise ValueError("split has a generic part; pass its GenericForm")
        gform = GenericForm.empty(lam, atol)
    k = gform.k
    U = np.eye(k, dtype=complex) if U is None else _check_commutant(gform, U, tol)
    d0, d1, dl, d1l, _ = split.dims
    one = is_lambda_one(lam, atol)

    if one and d1 > 0:
        if E is None:
            if d1l + k == 0:
                raise MissingE("lam = 1 with no (1+lam)-space or generic part: "
                               "E must be a proper nonzero projection")
            E = np.zeros((d1, d1), dtype=complex)
        E = hermitian(E, tol) if d1 else np.asarray(E, dtype=complex)
        if E.shape != (d1, d1):
            raise MissingE(f"E has shape {E.shape}, expected {(d1, d1)}")
        ok = frob(E @ E - E) <= tol.residual_tol * max(1.0, frob(E))
        if not ok:
            raise MissingE("E is not a projection")
    elif E is not None and np.size(E):
        raise MissingE("E is only meaningful for lam = 1 with N(T - I) nonzero")
    else:
        E = None

    n = split.dim
    Pf = np.zeros((n, n), dtype=complex)
    Qf = np.zeros((n, n), dtype=complex)
    o1, ol, o1l, og = d0, d0 + d1, d0 + d1 + dl, d0 + d1 + dl + d1l
    if one:
        if d1:
            Pf[o1:ol, o1:ol] = E
            Qf[o1:ol, o1:ol] = np.eye(d1) - E
    else:
        Qf[o1:ol, o1:ol] = np.eye(d1)
        Pf[ol:o1l, ol:o1l] = np.eye(dl)
    Pf[o1l:og, o1l:og] = np.eye(d1l)
    Qf[o1l:og, o1l:og] = np.eye(d1l)
    if k:
        Pg, Qg = _generic_PQ(gform, U)
        Pf[og:, og:] = Pg
        Qf[og:, og:] = Qg

    F = frame(split, gform)
    P = F @ Pf @ F.conj().T
    Q = F @ Qf @ F.conj().T
    P = (P + P.conj().T) / 2
    Q = (Q + Q.conj().T) / 2
    if np.real(np.trace(P)) < 0.5:
        raise ZeroProjection("assembled P vanishes")
    if np.real(np.trace(Q)) < 0.5:
        raise ZeroProjection("assembled Q vanishes")
    return ProjectionPair(lam, P, Q, U if k else None, E)


def _analyse(T, lam, tol):
    split = canonical_split(T, lam, tol)
    try:
        gf = generic_form(split, tol)
    except Infeasible as exc:
        raise NotAPencilPair(f"T is not a pencil at lam={lam}: {exc}") from exc
    return split, gf


def build_from_T(T, lam, U=None, E=None, tol=DEFAULT_TOL):
    """Convenience wrapper: split ``T`` at ``lam`` and call :func:`build_pair`."""
    split = canonical_split(T, lam, tol)
    if lambda_excluded(split.lam, split.atol):
        raise LambdaExcluded(lam)
    gf = generic_form(split, tol)
    return build_pair(gf, split, U, E, tol)


def verify_pair(T, pair, tol=DEFAULT_TOL):
    """Residuals of a candidate pair against ``T``.

    ``passed`` requires both projections idempotent and nonzero and the
    pencil identity within ``residual_tol`` (scaled by ``max(1, ||.||_F)``).
    The anticommutation residual ``||(T - cI)S + S(T - cI)||_F`` with
    ``S = PQ - QP`` is reported but not part of the verdict.
    """
    T = np.asarray(T, dtype=complex)
    P, Q, lam = pair.P, pair.Q, pair.lam
    if T.shape != P.shape or P.shape != Q.shape:
        raise ValueError(f"shape mismatch: T{T.shape}, P{P.shape}, Q{Q.shape}")
    n = T.shape[0]
    rP = frob(P @ P - P)
    rQ = frob(Q @ Q - Q)
    rT = frob(lam * P + Q - T)
    S = P @ Q - Q @ P
    A = T - (1.0 + lam) / 2.0 * np.eye(n)
    rS = frob(A @ S + S @ A)
    nonzero = bool(np.real(np.trace(P)) > 0.5 and np.real(np.trace(Q)) > 0.5)
    rt = tol.residual_tol
    passed = (rP <= rt * max(1.0, frob(P)) and rQ <= rt * max(1.0, frob(Q))
              and rT <= rt * max(1.0, frob(T)) and nonzero)
    return ResidualReport(rP, rQ, rT, rS, nonzero, bool(passed))


def _project_to_commutant(gform, X):
    """Zero the off-cluster blocks of ``X`` (orthogonal projection onto {B}')."""
    out = np.zeros_like(X)
    for idx in gform.clusters():
        out[np.ix_(idx, idx)] = X[np.ix_(idx, idx)]
    return out


def canonicalize_pair(T, pair, tol=DEFAULT_TOL):
    """Recover ``(U, E)`` such that :func:`build_pair` reproduces ``pair``.

    ``U`` is read off the polar factor of the off-diagonal generic block of
    ``P``; ``E`` is ``P`` compressed to ``N(T - I)`` (``lam = 1`` only).

    Raises
    ------
    NotAPencilPair
        If the pair does not verify against ``T``.
    """
    rep = verify_pair(T, pair, tol)
    if not rep.passed:
        raise NotAPencilPair(f"pair does not verify against T: {rep}")
    split, gf = _analyse(T, pair.lam, tol)
    F = frame(split, gf)
    Pf = F.conj().T @ pair.P @ F
    d0, d1, dl, d1l, _ = split.dims
    og = d0 + d1 + dl + d1l
    k = gf.k
    if k:
        P12 = Pf[og:og + k, og + k:]
        u, _ = polar(P12, side="right")
        sign = 1.0 if is_lambda_one(split.lam, split.atol) else np.sign(split.lam)
        U = _project_to_commutant(gf, sign * u)
        U, _ = polar(U, side="right")
    else:
        U = np.zeros((0, 0), dtype=complex)
    E = None
    if is_lambda_one(split.lam, split.atol) and d1:
        E = Pf[d0:d0 + d1, d0:d0 + d1]
        E = (E + E.conj().T) / 2
    return PairParams(U, E)


def spectral_mismatch(TA, TB, tol=DEFAULT_TOL):
    """Eigenvalue clusters whose multiplicities differ between ``TA`` and ``TB``.

    Returns a list of ``(value, mult_A, mult_B)``; empty iff the spectra agree
    with multiplicity within the clustering tolerance.
    """
    from .linalg_core import cluster_sorted

    wa = eig_hermitian(TA, tol).eigenvalues
    wb = eig_hermitian(TB, tol).eigenvalues
    atol = tol.cluster_abs(max(np.max(np.abs(wa)), np.max(np.abs(wb))))
    allv = np.concatenate([wa, wb])
    src = np.concatenate([np.zeros(wa.size, int), np.ones(wb.size, int)])
    order = np.argsort(allv, kind="stable")
    out = []
    for idx in cluster_sorted(allv[order], atol):
        members = order[idx]
        ma = int(np.sum(src[members] == 0))
        mb = int(np.sum(src[members] == 1))
        if ma != mb:
            out.append((float(allv[members].mean()), ma, mb))
    if not out and wa.size == wb.size and np.max(np.abs(wa - wb)) > atol:
        out.append((float(wa[np.argmax(np.abs(wa - wb))]), 1, 0))
    return out


def equivalence_witness(lam, pair_a, pair_b, tol=DEFAULT_TOL):
    """Unitary ``V`` with ``V P_a V* = P_b`` and ``V Q_a V* = Q_b``, or None.

    Such ``V`` exists exactly when ``lam P_a + Q_a`` and ``lam P_b + Q_b``
    have the same spectrum with multiplicity (``lam`` outside {-1, 0, 1}).
    """
    lam = float(lam)
    if lambda_excluded(lam, tol.cluster_tol, include_one=True):
        raise LambdaExcluded(lam, (-1.0, 0.0, 1.0))
    TA = lam * pair_a.P + pair_a.Q
    TB = lam * pair_b.P + pair_b.Q
    if TA.shape != TB.shape or spectral_mismatch(TA, TB, tol):
        return None
    pa = ProjectionPair(lam, pair_a.P, pair_a.Q)
    pb = ProjectionPair(lam, pair_b.P, pair_b.Q)
    split_a, gf_a = _analyse(TA, lam, tol)
    split_b, gf_b = _analyse(TB, lam, tol)
    if split_a.dims != split_b.dims:
        return None
    Ua = canonicalize_pair(TA, pa, tol).U
    Ub = canonicalize_pair(TB, pb, tol).U
    Fa = frame(split_a, gf_a)
    Fb = frame(split_b, gf_b)
    n = Fa.shape[0]
    k = gf_a.k
    D = np.eye(n, dtype=complex)
    if k:
        D[n - k:, n - k:] = Ub.conj().T @ Ua
    return Fb @ D @ Fa.conj().T


def component_label(pair):
    """``(rank E, rank(I - E))`` for a canonicalized ``lam = 1`` pair."""
    if pair.E is None or pair.E.shape[0] == 0:
        return (0, 0)
    r = int(round(float(np.real(np.trace(pair.E)))))
    return (r, pair.E.shape[0] - r)


def _rotation_between(Ea, Eb, tol):
    """Unitary ``W`` with ``W Ea W* = Eb`` for projections of equal rank."""
    Xa = eig_hermitian(Ea, tol).eigenvectors[:, ::-1]
    Xb = eig_hermitian(Eb, tol).eigenvectors[:, ::-1]
    return Xb @ Xa.conj().T


def connect_pairs(T, lam, pair_a, pair_b, steps=8, tol=DEFAULT_TOL):
    """Continuous path of pairs from ``pair_a`` to ``pair_b`` inside the
    solution set of ``T = lam P + Q``.

    ``U(t) = (U_b U_a*)^t U_a`` on the principal branch, taken cluster by
    cluster of ``B`` so every ``U(t)`` stays in ``{B}'``.  For ``lam = 1``
    the projection ``E`` is rotated by ``W^t`` with ``W E_a W* = E_b``, which
    needs ``rank E_a = rank E_b``.

    Raises
    ------
    LambdaExcluded, DifferentComponents, NotAPencilPair
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    split = canonical_split(T, lam, tol)
    if lambda_excluded(split.lam, split.atol):
        raise LambdaExcluded(lam)
    split, gf = _analyse(T, lam, tol)
    pa = canonicalize_pair(T, ProjectionPair(lam, pair_a.P, pair_a.Q), tol)
    pb = canonicalize_pair(T, ProjectionPair(lam, pair_b.P, pair_b.Q), tol)

    W_E = None
    if pa.E is not None:
        la = component_label(ProjectionPair(lam, pair_a.P, pair_a.Q, E=pa.E))
        lb = component_label(ProjectionPair(lam, pair_b.P, pair_b.Q, E=pb.E))
        if la != lb:
            raise DifferentComponents(la, lb)
        W_E = _rotation_between(pa.E, pb.E, tol)

    G = pb.U @ pa.U.conj().T
    clusters = gf.clusters()
    ts, samples, reports = [], [], []
    for j in range(steps + 1):
        t = j / steps
        Ut = np.zeros_like(pa.U)
        for idx in clusters:
            blk = np.ix_(idx, idx)
            Ut[blk] = unitary_power(G[blk], t, tol) @ pa.U[blk]
        Et = None
        if W_E is not None:
            Wt = unitary_power(W_E, t, tol)
            Et = Wt @ pa.E @ Wt.conj().T
        if j == steps:
            Ut, Et = pb.U, pb.E
        pair = build_pair(gf, split, Ut, Et, tol)
        ts.append(t)
        samples.append(pair)
        reports.append(verify_pair(T, pair, tol))
    return PairPath(split.lam, tuple(ts), tuple(samples), tuple(reports))
