"""Command-line front end.

Every subcommand reads matrices from JSON files (``{"dim": n, "entries":
[[re, im], ...]}``, row-major) and writes one JSON document to stdout or
``--output``.  Exit codes: 0 success, 1 property violation or infeasible
construction, 2 input error.
"""

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import structure_check
from .construction import (ProjectionPair, build_pair, connect_pairs, equivalence_witness,
                           spectral_mismatch, verify_pair)
from .errors import (DifferentComponents, Infeasible, LambdaExcluded, MatrixFormatError,
                     NotAPencilPair, NotHermitianError, PencilError, ZeroProjection)
from .falsify import FalsifyConfig, run_falsify, sample_pair
from .feasibility import admissible_lambdas, is_pencil_at
from .linalg_core import (DEFAULT_MAX_DIM, DEFAULT_TOL, Tolerances, frob, hermitian,
                          matrix_from_dict, matrix_to_dict, random_unitary_in_commutant)
from .synth import random_projection

COMMANDS = ("analyze", "construct", "verify", "lambdas", "connect", "witness", "algebra",
            "falsify")
EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: tuple = ()
    lam: float = None
    steps: int = 8
    seed: int = 0
    trials: int = 1000
    max_dim: int = None
    samples: int = 8
    e_rank: int = None
    workers: int = 1
    tol: Tolerances = DEFAULT_TOL
    output: str = None

    @classmethod
    def from_args(cls, args):
        overrides = {}
        if args.tol_cluster is not None:
            overrides["cluster_tol"] = args.tol_cluster
        if args.tol_residual is not None:
            overrides["residual_tol"] = args.tol_residual
        try:
            tol = Tolerances(**{**DEFAULT_TOL.to_dict(), **overrides})
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        return cls(args.command, tuple(args.input or ()), args.lam, args.steps, args.seed,
                   args.trials, args.max_dim, args.samples, args.e_rank, args.workers, tol,
                   args.output)


@dataclass(frozen=True, eq=False)
class WitnessReport:
    lam: float
    equivalent: bool
    V: np.ndarray = None
    residual_P: float = None
    residual_Q: float = None
    mismatch: tuple = ()

    def to_dict(self):
        return {"lambda": self.lam, "equivalent": self.equivalent,
                "V": None if self.V is None else matrix_to_dict(self.V),
                "residual_P": self.residual_P, "residual_Q": self.residual_Q,
                "mismatch": [{"value": v, "mult_a": a, "mult_b": b}
                             for v, a, b in self.mismatch]}

    @classmethod
    def from_dict(cls, d):
        V = d.get("V")
        return cls(d["lambda"], d["equivalent"], None if V is None else matrix_from_dict(V),
                   d.get("residual_P"), d.get("residual_Q"),
                   tuple((m["value"], m["mult_a"], m["mult_b"]) for m in d.get("mismatch", ())))


def dumps(obj):
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False)


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON: {exc}") from exc


def load_matrix(path, cfg):
    try:
        M = matrix_from_dict(_read_json(path))
        return hermitian(M, cfg.tol, cfg.max_dim or DEFAULT_MAX_DIM)
    except (MatrixFormatError, NotHermitianError) as exc:
        raise InputError(f"{path}: {exc}") from exc


def load_pair(path, cfg):
    d = _read_json(path)
    try:
        pair = ProjectionPair.from_dict(d)
        hermitian(pair.P, cfg.tol, cfg.max_dim or DEFAULT_MAX_DIM)
        hermitian(pair.Q, cfg.tol, cfg.max_dim or DEFAULT_MAX_DIM)
    except (KeyError, TypeError) as exc:
        raise InputError(f"{path}: not a pair document ({exc})") from exc
    except (MatrixFormatError, NotHermitianError) as exc:
        raise InputError(f"{path}: {exc}") from exc
    return pair


def _need(cfg, n_inputs, lam=True):
    if len(cfg.inputs) != n_inputs:
        raise InputError(f"{cfg.command} needs exactly {n_inputs} --input file(s)")
    if lam and cfg.lam is None:
        raise InputError(f"{cfg.command} needs --lambda")


def _pair_lambda(cfg, pairs):
    lam = cfg.lam if cfg.lam is not None else pairs[0].lam
    return float(lam)


def cmd_analyze(cfg):
    _need(cfg, 1)
    T = load_matrix(cfg.inputs[0], cfg)
    rep = is_pencil_at(T, cfg.lam, cfg.tol)
    if rep.reason.value == "LambdaExcluded":
        raise LambdaExcluded(cfg.lam)
    return rep.to_dict(), EXIT_OK


def cmd_lambdas(cfg):
    _need(cfg, 1, lam=False)
    T = load_matrix(cfg.inputs[0], cfg)
    return admissible_lambdas(T, cfg.tol).to_dict(), EXIT_OK


def cmd_construct(cfg):
    _need(cfg, 1)
    T = load_matrix(cfg.inputs[0], cfg)
    rep = is_pencil_at(T, cfg.lam, cfg.tol)
    if rep.reason.value == "LambdaExcluded":
        raise LambdaExcluded(cfg.lam)
    if not rep.feasible:
        return {"error": "Infeasible", "reason": rep.reason.value,
                "message": rep.detail}, EXIT_VIOLATION
    rng = np.random.default_rng(cfg.seed)
    if cfg.e_rank is None:
        pair = sample_pair(rep, rng, cfg.tol)
    else:
        d1 = rep.split.dims[1]
        if not 0 <= cfg.e_rank <= d1:
            raise InputError(f"--e-rank must lie in [0, {d1}]")
        gf = rep.generic_form
        U = None if gf is None else random_unitary_in_commutant(gf.B, rng, cfg.tol)
        E = random_projection(d1, cfg.e_rank, rng) if d1 else None
        try:
            pair = build_pair(gf, rep.split, U, E, cfg.tol)
        except ZeroProjection as exc:
            return {"error": "ZeroProjection", "message": str(exc)}, EXIT_VIOLATION
    return pair.to_dict(), EXIT_OK


def cmd_verify(cfg):
    _need(cfg, 2, lam=False)
    T = load_matrix(cfg.inputs[0], cfg)
    pair = load_pair(cfg.inputs[1], cfg)
    if pair.P.shape != T.shape:
        raise InputError(f"pair dimension {pair.P.shape[0]} != T dimension {T.shape[0]}")
    rep = verify_pair(T, pair, cfg.tol)
    return rep.to_dict(), EXIT_OK if rep.passed else EXIT_VIOLATION


def cmd_connect(cfg):
    _need(cfg, 3, lam=False)
    T = load_matrix(cfg.inputs[0], cfg)
    a, b = load_pair(cfg.inputs[1], cfg), load_pair(cfg.inputs[2], cfg)
    if cfg.steps < 1:
        raise InputError("--steps must be >= 1")
    try:
        path = connect_pairs(T, _pair_lambda(cfg, [a]), a, b, cfg.steps, cfg.tol)
    except DifferentComponents as exc:
        return {"error": "DifferentComponents", "message": str(exc),
                "label_a": list(exc.label_a), "label_b": list(exc.label_b)}, EXIT_VIOLATION
    except NotAPencilPair as exc:
        return {"error": "NotAPencilPair", "message": str(exc)}, EXIT_VIOLATION
    return path.to_dict(), EXIT_OK if path.all_passed else EXIT_VIOLATION


def cmd_witness(cfg):
    _need(cfg, 2, lam=False)
    a, b = load_pair(cfg.inputs[0], cfg), load_pair(cfg.inputs[1], cfg)
    lam = _pair_lambda(cfg, [a])
    if a.P.shape != b.P.shape:
        raise InputError("pairs have different dimensions")
    V = equivalence_witness(lam, a, b, cfg.tol)
    if V is None:
        mm = spectral_mismatch(lam * a.P + a.Q, lam * b.P + b.Q, cfg.tol)
        return WitnessReport(lam, False, mismatch=tuple(mm)).to_dict(), EXIT_OK
    rP = frob(V @ a.P @ V.conj().T - b.P)
    rQ = frob(V @ a.Q @ V.conj().T - b.Q)
    return WitnessReport(lam, True, V, rP, rQ).to_dict(), EXIT_OK


def cmd_algebra(cfg):
    _need(cfg, 1)
    T = load_matrix(cfg.inputs[0], cfg)
    try:
        rep = structure_check(T, cfg.lam, cfg.samples, cfg.seed, cfg.tol)
    except NotAPencilPair as exc:
        return {"error": "NotAPencilPair", "message": str(exc)}, EXIT_VIOLATION
    return rep.to_dict(), EXIT_OK if rep.match else EXIT_VIOLATION


def cmd_falsify(cfg):
    if cfg.trials < 1:
        raise InputError("--trials must be >= 1")
    fc = FalsifyConfig(trials=cfg.trials, max_dim=cfg.max_dim or 8, seed=cfg.seed,
                       workers=max(1, cfg.workers))
    rep = run_falsify(fc, cfg.tol)
    return rep.to_dict(), EXIT_OK if rep.passed else EXIT_VIOLATION


HANDLERS = {name: globals()[f"cmd_{name}"] for name in COMMANDS}


def build_parser():
    p = argparse.ArgumentParser(
        prog="projpencil",
        description="Decide, construct and check representations T = lam*P + Q "
                    "by orthogonal projections P, Q.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", "-i", action="append", metavar="PATH",
                   help="input JSON (repeat for commands that take several)")
    p.add_argument("--lambda", dest="lam", type=float, metavar="X")
    p.add_argument("--steps", type=int, default=8, help="path steps for connect")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1000, help="falsify trial count")
    p.add_argument("--max-dim", type=int, default=None,
                   help="input size cap (default %d); falsify: largest sampled dimension "
                        "(default 8)" % DEFAULT_MAX_DIM)
    p.add_argument("--samples", type=int, default=8, help="sampled pairs for algebra")
    p.add_argument("--e-rank", type=int, default=None,
                   help="rank of E for construct at lambda = 1")
    p.add_argument("--workers", type=int, default=1, help="falsify worker processes")
    p.add_argument("--tol-cluster", type=float, default=None)
    p.add_argument("--tol-residual", type=float, default=None)
    p.add_argument("--output", "-o", metavar="PATH", help="write JSON here instead of stdout")
    return p


def _emit(doc, cfg_output):
    text = dumps(doc) + "\n"
    if cfg_output:
        Path(cfg_output).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    output = args.output
    try:
        cfg = RunConfig.from_args(args)
        doc, code = HANDLERS[cfg.command](cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        _emit({"error": "InputError", "message": str(exc)}, output)
        return EXIT_INPUT
    except LambdaExcluded as exc:
        print(f"error: {exc}", file=sys.stderr)
        _emit({"error": "LambdaExcluded", "lambda": exc.lam, "message": str(exc)}, output)
        return EXIT_INPUT
    except (Infeasible, PencilError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        _emit({"error": type(exc).__name__, "message": str(exc)}, output)
        return EXIT_VIOLATION
    _emit(doc, output)
    return code


if __name__ == "__main__":
    sys.exit(main())
