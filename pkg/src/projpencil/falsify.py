"""Randomized harness for the at-most-two-lambdas property.

Each trial draws one Hermitian matrix from a mix of sources, runs
:func:`admissible_lambdas` and checks:

* at most two admissible lambdas, and any pair matches a spectral template;
* a synthesized pencil ``lam P + Q`` reports its own ``lam``;
* a template spectrum is classified as that template;
* every admissible lambda rebuilds a verifying pair (soundness) that also
  satisfies the anticommutation identity.

Trials are seeded by ``(seed, index)`` so results do not depend on order or
on the number of worker processes.
"""

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .canonical import is_lambda_one
from .construction import build_pair, verify_pair
from .errors import InternalContradiction, PencilError
from .feasibility import admissible_lambdas
from .linalg_core import DEFAULT_TOL, frob, matrix_to_dict, random_unitary_in_commutant
from .synth import conjugate_diag, gue, random_halmos_pair, random_projection, random_template

__all__ = ["SOURCES", "PENCIL_LAMBDAS", "FalsifyConfig", "FalsifyReport", "sample_pair",
           "run_trial", "run_falsify"]

SOURCES = ("pencil", "template", "gue", "lattice", "scalar")
PENCIL_LAMBDAS = (3.0, -3.0, 2.0, -2.0, 0.5, -0.5, 1.0, 0.25)


@dataclass(frozen=True)
class FalsifyConfig:
    trials: int = 1000
    max_dim: int = 8
    seed: int = 0
    workers: int = 1
    weights: tuple = (0.35, 0.2, 0.2, 0.2, 0.05)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.max_dim < 1:
            raise ValueError("max_dim must be >= 1")
        if len(self.weights) != len(SOURCES):
            raise ValueError(f"weights must have {len(SOURCES)} entries")


@dataclass
class FalsifyReport:
    config: FalsifyConfig
    sources: Counter = field(default_factory=Counter)
    classifications: Counter = field(default_factory=Counter)
    admissible_sizes: Counter = field(default_factory=Counter)
    worst_residual: float = 0.0
    worst_anticommutation: float = 0.0
    violations: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.violations

    def to_dict(self):
        return {
            "trials": self.config.trials,
            "max_dim": self.config.max_dim,
            "seed": self.config.seed,
            "passed": self.passed,
            "n_violations": len(self.violations),
            "sources": dict(sorted(self.sources.items())),
            "classifications": dict(sorted(self.classifications.items())),
            "admissible_sizes": {str(k): v for k, v in sorted(self.admissible_sizes.items())},
            "worst_residual": self.worst_residual,
            "worst_anticommutation": self.worst_anticommutation,
            "violations": self.violations,
        }

    @classmethod
    def from_dict(cls, d):
        cfg = FalsifyConfig(trials=d["trials"], max_dim=d["max_dim"], seed=d["seed"])
        return cls(cfg, Counter(d["sources"]), Counter(d["classifications"]),
                   Counter({int(k): v for k, v in d["admissible_sizes"].items()}),
                   d["worst_residual"], d["worst_anticommutation"], list(d["violations"]))


def sample_pair(report, rng, tol=DEFAULT_TOL):
    """A random pair realizing a feasible :class:`FeasibilityReport`.

    At ``lam = 1`` the rank of ``E`` is drawn so that neither projection
    vanishes.
    """
    split, gf = report.split, report.generic_form
    U = None if gf is None else random_unitary_in_commutant(gf.B, rng, tol)
    E = None
    d1 = split.dims[1]
    if is_lambda_one(split.lam, split.atol) and d1:
        k = 0 if gf is None else gf.k
        if split.dims[3] + k == 0:
            r = int(rng.integers(1, d1))
        else:
            r = int(rng.integers(0, d1 + 1))
        E = random_projection(d1, r, rng)
    return build_pair(gf, split, U, E, tol)


def _draw(source, rng, max_dim):
    """Return ``(T, meta)`` for one trial."""
    if source == "pencil":
        if rng.random() < 0.75:
            lam = float(PENCIL_LAMBDAS[int(rng.integers(0, len(PENCIL_LAMBDAS)))])
        else:
            lam = float(rng.choice([-1, 1]) * rng.uniform(0.1, 4.0))
        hp = random_halmos_pair(rng, max_dim)
        return hp.pencil(lam), {"lambda": lam}
    if source == "template":
        kind, z, T = random_template(rng, max_dim)
        return T, {"template": kind, "z": z}
    n = int(rng.integers(1, max_dim + 1))
    if source == "gue":
        return gue(n, rng, float(rng.uniform(0.2, 3.0))), {}
    if source == "lattice":
        vals = rng.integers(-4, 9, size=n) / 2.0
        return conjugate_diag(vals, rng), {}
    t = float(rng.choice([rng.uniform(-4, 4), rng.integers(-4, 9) / 2.0]))
    return np.array([[t]], dtype=complex), {}


def run_trial(index, config, tol=DEFAULT_TOL):
    """Run one trial; returns a plain dict (picklable for worker processes)."""
    rng = np.random.default_rng([config.seed, index])
    w = np.asarray(config.weights, float)
    source = SOURCES[int(rng.choice(len(SOURCES), p=w / w.sum()))]
    T, meta = _draw(source, rng, config.max_dim)
    out = {"index": index, "source": source, "classification": None, "n_admissible": None,
           "residual": 0.0, "anticommutation": 0.0, "violations": []}

    def fail(kind, msg):
        out["violations"].append({"trial": index, "source": source, "kind": kind,
                                  "message": msg, "meta": meta, "T": matrix_to_dict(T)})

    try:
        rep = admissible_lambdas(T, tol)
    except InternalContradiction as exc:
        fail("InternalContradiction", str(exc))
        return out
    out["classification"] = rep.classification.value
    out["n_admissible"] = len(rep.admissible)
    atol = 1e-6 * max(1.0, frob(T))

    if source == "pencil" and not any(abs(l - meta["lambda"]) <= atol for l in rep.admissible):
        fail("MissedLambda", f"lambda {meta['lambda']} not in {list(rep.admissible)}")
    if source == "template" and meta["template"] != "Prop31" \
            and rep.classification.value != meta["template"]:
        fail("TemplateMismatch", f"{meta['template']} classified as {rep.classification.value}")

    tn = max(1.0, frob(T))
    for ev in rep.evidence:
        try:
            pair = sample_pair(ev, rng, tol)
        except PencilError as exc:
            fail("Unsound", f"lambda {ev.lam}: {type(exc).__name__}: {exc}")
            continue
        res = verify_pair(T, pair, tol)
        worst = max(res.idempotent_P, res.idempotent_Q, res.pencil)
        out["residual"] = max(out["residual"], worst)
        out["anticommutation"] = max(out["anticommutation"], res.anticommutation / tn)
        if not res.passed:
            fail("Unsound", f"lambda {ev.lam}: rebuilt pair fails verification {res}")
        if res.anticommutation > 1e-9 * tn:
            fail("Anticommutation", f"lambda {ev.lam}: residual {res.anticommutation:.3e}")
    return out


def _run_chunk(args):
    indices, config = args
    return [run_trial(i, config) for i in indices]


def run_falsify(config, tol=DEFAULT_TOL):
    """Run all trials and aggregate in trial order."""
    idx = list(range(config.trials))
    if config.workers > 1:
        chunks = [idx[i::config.workers] for i in range(config.workers)]
        with ProcessPoolExecutor(config.workers) as ex:
            results = [r for part in ex.map(_run_chunk, [(c, config) for c in chunks])
                       for r in part]
        results.sort(key=lambda r: r["index"])
    else:
        results = [run_trial(i, config, tol) for i in idx]
    report = FalsifyReport(config)
    for r in results:
        report.sources[r["source"]] += 1
        if r["classification"] is not None:
            report.classifications[r["classification"]] += 1
            report.admissible_sizes[r["n_admissible"]] += 1
        report.worst_residual = max(report.worst_residual, r["residual"])
        report.worst_anticommutation = max(report.worst_anticommutation, r["anticommutation"])
        report.violations.extend(r["violations"])
    return report
