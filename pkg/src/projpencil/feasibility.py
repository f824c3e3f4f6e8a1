"""Decide at which lambdas a Hermitian ``T`` equals ``lam P + Q``.

``is_pencil_at`` answers the question for one lambda; ``admissible_lambdas``
enumerates a finite candidate set that provably contains every admissible
lambda and classifies the result against the two-value spectral templates.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .canonical import (CanonicalSplit, GenericForm, Reason, canonical_split, generic_form,
                        is_lambda_one, lambda_excluded)
from .errors import Infeasible, InternalContradiction
from .linalg_core import DEFAULT_TOL, cluster_sorted, eig_hermitian, frob, hermitian, is_projection

__all__ = [
    "Reason",
    "Classification",
    "FeasibilityReport",
    "LambdaReport",
    "is_pencil_at",
    "candidate_lambdas",
    "admissible_lambdas",
    "classify_spectrum",
]


class Classification(str, Enum):
    Empty = "Empty"
    Unique = "Unique"
    Prop31 = "Prop31"
    Prop32 = "Prop32"
    Prop33 = "Prop33"
    Prop34 = "Prop34"


@dataclass(frozen=True, eq=False)
class FeasibilityReport:
    lam: float
    feasible: bool
    reason: Reason
    split: CanonicalSplit
    generic_form: GenericForm = None
    detail: str = ""

    def __post_init__(self):
        if self.feasible != (self.reason == Reason.OK):
            raise ValueError("feasible must hold exactly when reason is OK")

    def to_dict(self):
        d0, d1, dl, d1l, g = self.split.dims
        gf = self.generic_form
        return {
            "lambda": self.lam,
            "feasible": self.feasible,
            "reason": self.reason.value,
            "detail": self.detail,
            "kernel_dims": [d0, d1, dl, d1l],
            "generic_dim": g,
            "B_eigenvalues": [] if gf is None else [float(x) for x in gf.b],
            "split": self.split.to_dict(),
            "generic_form": None if gf is None else gf.to_dict(),
        }

    @classmethod
    def from_dict(cls, d):
        gf = d.get("generic_form")
        return cls(
            lam=d["lambda"],
            feasible=d["feasible"],
            reason=Reason(d["reason"]),
            split=CanonicalSplit.from_dict(d["split"]),
            generic_form=None if gf is None else GenericForm.from_dict(gf),
            detail=d.get("detail", ""),
        )


def _forced_zero(split, k):
    """Reason why every pair at this lambda has ``P = 0`` or ``Q = 0``, or None."""
    d0, d1, dl, d1l = split.kernel_dims
    if is_lambda_one(split.lam, split.atol):
        # P = 0 (+) E (+) I (+) P_U, Q = 0 (+) (I-E) (+) I (+) Q_U
        if d1l + k > 0:
            return None
        if d1 >= 2:
            return None
        # only E = 0 or E = I remain; one of P, Q vanishes
        return Reason.ForcedZeroP
    if dl + d1l + k == 0:
        return Reason.ForcedZeroP
    if d1 + d1l + k == 0:
        return Reason.ForcedZeroQ
    return None


def is_pencil_at(T, lam, tol=DEFAULT_TOL, spectral=None):
    """Is ``T = lam P + Q`` for some pair of nonzero projections?

    Excluded lambdas (-1, 0) are not raised but reported with reason
    ``LambdaExcluded``.
    """
    split = canonical_split(T, lam, tol, spectral=spectral)
    lam = split.lam
    if lambda_excluded(lam, split.atol):
        return FeasibilityReport(lam, False, Reason.LambdaExcluded, split,
                                 detail="lambda in {-1, 0}")
    try:
        gf = generic_form(split, tol)
    except Infeasible as exc:
        return FeasibilityReport(lam, False, exc.reason, split, detail=exc.detail)
    why = _forced_zero(split, gf.k)
    if why is not None:
        return FeasibilityReport(lam, False, why, split,
                                 detail=f"kernel dims {split.kernel_dims}, k={gf.k}")
    return FeasibilityReport(lam, True, Reason.OK, split, gf if gf.k else None)


@dataclass(frozen=True, eq=False)
class LambdaReport:
    """All lambdas outside {-1, 0} at which ``T`` is a pencil.

    ``evidence`` holds the feasibility report of each admissible lambda;
    ``rejected`` lists ``(lambda, reason)`` for the other candidates.
    """

    admissible: tuple
    zero_flag: bool
    classification: Classification
    z: float = None
    evidence: tuple = ()
    rejected: tuple = ()
    notes: tuple = field(default_factory=tuple)

    def to_dict(self):
        return {
            "admissible": [float(x) for x in self.admissible],
            "zero_flag": self.zero_flag,
            "classification": self.classification.value,
            "z": self.z,
            "notes": list(self.notes),
            "evidence": [r.to_dict() for r in self.evidence],
            "rejected": [[float(l), r.value] for l, r in self.rejected],
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            admissible=tuple(d["admissible"]),
            zero_flag=d["zero_flag"],
            classification=Classification(d["classification"]),
            z=d["z"],
            evidence=tuple(FeasibilityReport.from_dict(e) for e in d["evidence"]),
            rejected=tuple((l, Reason(r)) for l, r in d["rejected"]),
            notes=tuple(d.get("notes", ())),
        )


def _distinct(values, atol):
    """Cluster an ascending array and return one representative per cluster."""
    out = []
    for idx in cluster_sorted(values, atol):
        v = values[idx]
        out.append(float(v[0]) if v.min() == v.max() else float(v.mean()))
    return out


def candidate_lambdas(eigenvalues, atol):
    """Finite set containing every admissible lambda.

    A nonempty generic part is symmetric about ``(1+lam)/2``, so
    ``1 + lam = a + b`` for spectral points ``a, b``; an empty generic part
    puts ``lam`` or ``1 + lam`` in the spectrum.

    Returns ``(candidates, notes)``; -1 and 0 are removed.
    """
    s = _distinct(np.sort(np.asarray(eigenvalues, dtype=float)), atol)
    cands = [a + b - 1.0 for i, a in enumerate(s) for b in s[i:]]
    cands += s + [x - 1.0 for x in s]
    cands = _distinct(np.sort(np.array(cands)), atol)
    notes = []
    kept = []
    for lam in cands:
        if abs(lam + 1.0) <= atol:
            notes.append("candidate -1 dropped: differences of projections are not analysed")
        elif abs(lam) <= atol:
            continue
        else:
            kept.append(lam)
    return kept, tuple(notes)


def admissible_lambdas(T, tol=DEFAULT_TOL):
    """Enumerate and test every candidate lambda.

    Raises
    ------
    InternalContradiction
        If more than two lambdas are admissible, or two are admissible but
        the spectrum matches none of the two-value templates.
    """
    T = hermitian(T, tol)
    sd = eig_hermitian(T, tol)
    atol = tol.cluster_abs(sd.norm2)
    cands, notes = candidate_lambdas(sd.eigenvalues, atol)
    evidence, rejected = [], []
    for lam in cands:
        rep = is_pencil_at(T, lam, tol, spectral=sd)
        if rep.feasible:
            evidence.append(rep)
        else:
            rejected.append((lam, rep.reason))
    admissible = tuple(r.lam for r in evidence)
    ok, _ = is_projection(T, tol)
    zero_flag = bool(ok and frob(T) > 0.5)
    if len(admissible) > 2:
        raise InternalContradiction(
            f"{len(admissible)} admissible lambdas {admissible}", T=T, admissible=admissible)
    cls, z = classify_spectrum(T, admissible, tol, zero_flag=zero_flag, spectral=sd)
    return LambdaReport(admissible, zero_flag, cls, z, tuple(evidence), tuple(rejected), notes)


def _clusters(w, atol):
    return [(float(w[idx].mean()), idx.size) for idx in cluster_sorted(w, atol)]


def _match(clusters, required, allowed, atol, equal=()):
    """Spectral template check.

    ``required`` must all occur, every cluster must be near an ``allowed``
    value, and the values in ``equal`` must share one multiplicity.
    """
    def mult(x):
        return sum(m for v, m in clusters if abs(v - x) <= atol)

    if any(mult(x) == 0 for x in required):
        return False
    if any(all(abs(v - a) > atol for a in allowed) for v, _ in clusters):
        return False
    if equal and len({mult(x) for x in equal}) != 1:
        return False
    return True


def classify_spectrum(T, admissible, tol=DEFAULT_TOL, zero_flag=None, spectral=None):
    """Match the spectrum of ``T`` against the two-lambda templates.

    Templates are tried in the order Prop31, Prop32, Prop33, Prop34.
    Prop31 is the "pencil at 0 and at 1" case; the other three need exactly
    two admissible values and return the template parameter ``z``.  Without
    a match the result is ``Unique`` (one value, counting lambda = 0 when
    ``T`` is itself a projection) or ``Empty``.

    Raises
    ------
    InternalContradiction
        Two admissible values but no template matches.
    """
    T = hermitian(T, tol)
    sd = spectral if spectral is not None else eig_hermitian(T, tol)
    atol = tol.cluster_abs(sd.norm2)
    if zero_flag is None:
        ok, _ = is_projection(T, tol)
        zero_flag = bool(ok and frob(T) > 0.5)
    adm = sorted(float(x) for x in admissible)
    cl = _clusters(sd.eigenvalues, atol)
    close = lambda x, y: abs(x - y) <= atol  # noqa: E731

    if len(adm) > 2:
        raise InternalContradiction(f"{len(adm)} admissible lambdas", T=T, admissible=adm)
    if zero_flag and adm and all(close(x, 1.0) for x in adm):
        return Classification.Prop31, None

    if len(adm) == 2:
        a, b = adm
        if close(b - a, 1.0):
            z = b
            if not (close(z, 0.0) or close(z, 1.0)) and \
                    _match(cl, (1.0, z), (0.0, 1.0, z), atol):
                return Classification.Prop32, z
        for z, other in ((a, b), (b, a)):
            if close(other, 2 * z) and (0 < abs(z) < 1) and not close(abs(z), 1.0):
                if _match(cl, (1.0 + z, z), (0.0, 1.0, 1.0 + z, z), atol, equal=(1.0 + z, z)):
                    return Classification.Prop33, z
        if close(b - a, 0.5):
            z = a
            if z > 0.5 + atol:
                req = (0.5, 0.5 + z, 1.0 + z)
                if _match(cl, req, req + (0.0, 1.0), atol, equal=req):
                    return Classification.Prop34, z
            z = b
            if z < -0.5 - atol:
                req = (0.5, z, 0.5 + z)
                if _match(cl, req, req + (0.0, 1.0), atol, equal=req):
                    return Classification.Prop34, z
        raise InternalContradiction(
            f"two admissible lambdas {tuple(adm)} but spectrum "
            f"{[v for v, _ in cl]} matches no template", T=T, admissible=adm)

    if len(adm) == 1 or zero_flag:
        return Classification.Unique, None
    return Classification.Empty, None
