"""Command-line front end.

    modp-companion space --k 12 --N 1 --p 13 --prec 20
    modp-companion eigen --k 5 --N 23 --p 5 --character -23 --primes 2,3,5
    modp-companion synthetic --n 2 --p 7 --trials 100 --norm-bound 5000 --seed 42
    modp-companion companion --target eta23 --p 5 > run.json
    modp-companion companion --family family.json --norm-bound 2000
    modp-companion verify run.json

Every document starts with a header recording the tool version and the fully
resolved configuration; ``verify`` re-runs that configuration and checks the
recomputed certificates against the recorded ones.  Exit status: 0 on a full
pass, 1 when a check fails (a counterexample or an incomplete computation),
2 on usage or environment errors.  Set MODP_COMPANION_THREADS to run
synthetic campaigns in several worker processes; output does not depend on it.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

import numpy as np
import sympy

from . import __version__
from .characters import kronecker_character
from .companion import (
    CompanionCertificate,
    build_f_g,
    classical_companion,
    distinguished_primes,
    verify_lemma,
    verify_v_identity,
)
from .eigensystems import CompanionFamily, synthetic_family
from .errors import ModpError, NotDiagonalizable, SpanningIncomplete
from .qseries import sturm_bound
from .spaces import eigen_decomposition, space_basis

SCHEMA = 1
THREADS_ENV = "MODP_COMPANION_THREADS"
TARGETS = ("eta23",)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    def __init__(self, flag: str, message: str):
        super().__init__(f"{flag}: {message}")
        self.flag = flag


# ---------------------------------------------------------------------------
# validation helpers
# ---------------------------------------------------------------------------

def _prime(flag: str, value: int, minimum: int = 2) -> int:
    if value < minimum or not sympy.isprime(value):
        raise UsageError(flag, f"expected a prime >= {minimum}, got {value}")
    return value


def _positive(flag: str, value: int | None) -> int | None:
    if value is not None and value < 1:
        raise UsageError(flag, f"expected a positive integer, got {value}")
    return value


def _primes_list(flag: str, text: str) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(flag, f"expected a comma-separated list of primes, got {text!r}") from None
    for v in vals:
        _prime(flag, v)
    if not vals:
        raise UsageError(flag, "empty list")
    return vals


def _character(flag: str, D: int | None, N: int):
    if D is None:
        return None
    try:
        chi = kronecker_character(D)
    except ValueError as exc:
        raise UsageError(flag, str(exc)) from None
    if N % chi.modulus:
        raise UsageError(flag, f"conductor {chi.modulus} does not divide N = {N}")
    return chi


def _header(command: str, config: dict) -> dict:
    return {"tool": "modp-companion", "version": __version__, "command": command, "config": config}


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(THREADS_ENV, f"expected an integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(THREADS_ENV, f"expected a positive integer, got {n}")
    return n


# ---------------------------------------------------------------------------
# commands: each returns (document, exit status)
# ---------------------------------------------------------------------------

def cmd_space(cfg: dict):
    k, N, p = cfg["k"], cfg["N"], cfg["p"]
    chi = _character("--character", cfg.get("character"), N)
    basis = space_basis(k, N, p, prec=cfg.get("prec"), character=chi)
    doc = {"schema": SCHEMA, "header": _header("space", cfg), "basis": basis.to_json()}
    return doc, EXIT_FAIL if basis.spanning_incomplete else EXIT_OK


def cmd_eigen(cfg: dict):
    k, N, p = cfg["k"], cfg["N"], cfg["p"]
    chi = _character("--character", cfg.get("character"), N)
    if cfg.get("prec") is None:
        # T_l needs l * sturm + 1 coefficients of the basis
        cfg = dict(cfg, prec=max(cfg["primes"]) * sturm_bound(k, N) + 10)
    basis = space_basis(k, N, p, prec=cfg["prec"], character=chi)
    doc = {"schema": SCHEMA, "header": _header("eigen", cfg),
           "dimension": basis.dimension, "spanning_incomplete": basis.spanning_incomplete}
    if basis.spanning_incomplete:
        doc["error"] = f"SpanningIncomplete: rank {basis.dimension} of {basis.expected_dimension}"
        return doc, EXIT_FAIL
    dec = eigen_decomposition(basis, cfg["primes"], strict=False,
                              allow_unnormalized=cfg.get("allow_unnormalized", False))
    doc["eigenforms"] = [f.to_json() for f in dec.forms]
    doc["skipped"] = [{"reason": s.reason, "dimension": s.dimension,
                       "eigenvalues": {str(k_): str(v) for k_, v in s.eigenvalues.items()}}
                      for s in dec.skipped]
    return doc, EXIT_OK


def _synthetic_trial(args: tuple) -> dict:
    n, p, seed, trial, bound, degree, twist = args
    rng = np.random.default_rng(np.random.SeedSequence([seed, trial]))
    family = synthetic_family(n, p, rng, field_degree=degree)
    f, g = build_f_g(family)
    cert = verify_lemma(f, g, bound)
    cert.merge(verify_v_identity(f, g, p, frobenius_twist=twist, norm_bound=bound))
    return {"trial": trial, "certificate": cert.to_json()}


def cmd_synthetic(cfg: dict):
    n, p, trials = cfg["n"], cfg["p"], cfg["trials"]
    jobs = [(n, p, cfg["seed"], t, cfg["norm_bound"], cfg["field_degree"], cfg["frobenius_twist"])
            for t in range(trials)]
    workers = _threads()
    if workers > 1 and trials > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_synthetic_trial, jobs))
    else:
        results = [_synthetic_trial(j) for j in jobs]
    passed = sum(r["certificate"]["fully_passing"] for r in results)
    doc = {"schema": SCHEMA, "header": _header("synthetic", cfg),
           "summary": {"trials": trials, "passed": passed}, "results": results}
    return doc, EXIT_OK if passed == trials else EXIT_FAIL


def _companion_family(cfg: dict, family_json: dict):
    family = CompanionFamily.from_json(family_json)
    f, g = build_f_g(family)
    bound = cfg["norm_bound"]
    cert = verify_lemma(f, g, bound)
    cert.merge(verify_v_identity(f, g, family.monoid.p, frobenius_twist=cfg["frobenius_twist"],
                                 norm_bound=bound))
    doc = {"schema": SCHEMA, "header": _header("companion", cfg), "input": {"family": family_json},
           "certificate": cert.to_json(), "candidate": None}
    return doc, EXIT_OK if cert.fully_passing else EXIT_FAIL


def _companion_target(cfg: dict):
    from .data import eta23

    target = eta23()
    p = cfg["p"]
    if p is None:
        p = distinguished_primes(target)[0]
        cfg = dict(cfg, p=p)
    doc = {"schema": SCHEMA, "header": _header("companion", cfg)}
    try:
        run = classical_companion(target, p, hecke_primes=cfg["primes"], prec=cfg.get("prec"),
                                  full_space=cfg["full_space"])
    except (SpanningIncomplete, NotDiagonalizable) as exc:
        doc["error"] = f"{type(exc).__name__}: {exc}"
        doc["certificate"] = None
        return doc, EXIT_FAIL
    doc.update({
        "alpha": str(run.alpha), "beta": str(run.beta), "dimension": run.dimension,
        "hecke_primes": run.hecke_primes,
        "certificate": run.certificate.to_json(),
        "candidate": run.weight_one.expansion.to_text(),
    })
    return doc, EXIT_OK if run.certificate.fully_passing else EXIT_FAIL


def cmd_companion(cfg: dict, family_json: dict | None = None):
    if cfg.get("family") is not None or family_json is not None:
        if family_json is None:
            try:
                with open(cfg["family"]) as fh:
                    family_json = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise UsageError("--family", str(exc)) from None
        return _companion_family(cfg, family_json)
    return _companion_target(cfg)


def _certificates(doc: dict) -> list:
    if "results" in doc:
        return [r["certificate"] for r in doc["results"]]
    return [doc.get("certificate")]


def cmd_verify(cfg: dict):
    path = cfg["input"]
    try:
        with open(path) as fh:
            recorded = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError("input", str(exc)) from None
    if recorded.get("schema") != SCHEMA:
        raise UsageError("input", f"unsupported schema {recorded.get('schema')!r}")
    header = recorded.get("header", {})
    command, rcfg = header.get("command"), header.get("config")
    if command not in ("synthetic", "companion") or rcfg is None:
        raise UsageError("input", "not a synthetic or companion document")
    certs = _certificates(recorded)
    for c in certs:
        if c is not None:
            CompanionCertificate.from_json(c)          # schema check
    if command == "synthetic":
        fresh, _ = cmd_synthetic(rcfg)
    else:
        fam = recorded.get("input", {}).get("family")
        fresh, _ = cmd_companion(rcfg, fam)
    fresh_certs = _certificates(fresh)
    agree = fresh_certs == certs
    passing = all(c is not None and c["fully_passing"] for c in fresh_certs)
    doc = {"schema": SCHEMA, "header": _header("verify", cfg),
           "verified_command": command, "certificates": len(certs),
           "reproduced": agree, "fully_passing": passing}
    return doc, EXIT_OK if agree and passing else EXIT_FAIL


# ---------------------------------------------------------------------------
# argument parsing and output
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modp-companion", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--output", "-o", help="write to this file instead of standard output")
    sub = parser.add_subparsers(dest="command", required=True)

    def space_args(sp):
        sp.add_argument("--k", type=int, required=True, help="weight")
        sp.add_argument("--N", type=int, required=True, help="level")
        sp.add_argument("--p", type=int, required=True, help="characteristic")
        sp.add_argument("--prec", type=int, help="number of coefficients")
        sp.add_argument("--character", type=int, metavar="D",
                        help="restrict to the nebentypus (D/.) for a fundamental discriminant D")

    sp = sub.add_parser("space", parents=[common], help="basis of M_k(Gamma_1(N)) mod p")
    space_args(sp)
    sp = sub.add_parser("eigen", parents=[common], help="normalized eigenforms mod p")
    space_args(sp)
    sp.add_argument("--primes", default="2,3", help="Hecke primes, comma separated")
    sp.add_argument("--allow-unnormalized", action="store_true")

    sp = sub.add_parser("synthetic", parents=[common], help="seeded lemma/V-identity campaign")
    sp.add_argument("--n", type=int, required=True, help="|S|, the number of primes above p")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--norm-bound", type=int, default=5000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--field-degree", type=int, default=1)
    sp.add_argument("--frobenius-twist", action="store_true",
                    help="compare a_{pn}(g) with a_n(f)^p instead of a_n(f)")

    sp = sub.add_parser("companion", parents=[common], help="run and certify the construction")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--family", help="companion family as JSON")
    src.add_argument("--target", choices=TARGETS, help="bundled weight-one target")
    sp.add_argument("--p", type=int, help="prime (default: smallest distinguished prime >= 5)")
    sp.add_argument("--primes", default="2,3", help="Hecke primes used to match the target")
    sp.add_argument("--prec", type=int)
    sp.add_argument("--full-space", action="store_true",
                    help="decompose all of M_p(Gamma_1(N)) rather than the nebentypus part")
    sp.add_argument("--norm-bound", type=int, default=2000)
    sp.add_argument("--frobenius-twist", action="store_true")

    sp = sub.add_parser("verify", parents=[common], help="re-check a recorded document")
    sp.add_argument("input", help="document written by `synthetic` or `companion`")
    return parser


def resolve(args: argparse.Namespace) -> dict:
    """Validate the parsed flags into a plain configuration dictionary."""
    c = args.command
    if c in ("space", "eigen"):
        if args.N < 1:
            raise UsageError("--N", f"level must be positive, got {args.N}")
        if args.k < 1:
            raise UsageError("--k", f"weight must be positive, got {args.k}")
        _prime("--p", args.p, 5)
        if (6 * args.N) % args.p == 0:
            raise UsageError("--p", f"p must not divide 6N = {6 * args.N}")
        cfg = {"k": args.k, "N": args.N, "p": args.p, "prec": _positive("--prec", args.prec),
               "character": args.character}
        if c == "eigen":
            cfg["primes"] = _primes_list("--primes", args.primes)
            cfg["allow_unnormalized"] = args.allow_unnormalized
        return cfg
    if c == "synthetic":
        if not 1 <= args.n <= 3:
            raise UsageError("--n", f"expected 1, 2 or 3, got {args.n}")
        if args.field_degree not in (1, 2, 3, 4):
            raise UsageError("--field-degree", f"expected 1..4, got {args.field_degree}")
        return {"n": args.n, "p": _prime("--p", args.p, 3), "trials": _positive("--trials", args.trials),
                "norm_bound": _positive("--norm-bound", args.norm_bound), "seed": args.seed,
                "field_degree": args.field_degree, "frobenius_twist": args.frobenius_twist}
    if c == "companion":
        cfg = {"family": args.family, "target": args.target,
               "norm_bound": _positive("--norm-bound", args.norm_bound),
               "frobenius_twist": args.frobenius_twist}
        if args.target:
            cfg.update({"p": None if args.p is None else _prime("--p", args.p, 5),
                        "primes": _primes_list("--primes", args.primes),
                        "prec": _positive("--prec", args.prec), "full_space": args.full_space})
        return cfg
    return {"input": args.input}


def render_text(doc: dict) -> str:
    """A short human-readable summary of a document."""
    h = doc["header"]
    lines = [f"# {h['tool']} {h['version']} {h['command']} "
             + " ".join(f"{k}={v}" for k, v in h["config"].items() if v is not None)]
    if "basis" in doc:
        b = doc["basis"]
        lines.append(f"dimension {b['dimension']} (expected {b['expected_dimension']}), prec {b['prec']}")
        if b["spanning_incomplete"]:
            lines.append("SPANNING INCOMPLETE")
    if "eigenforms" in doc:
        lines.append(f"{len(doc['eigenforms'])} eigenforms, {len(doc['skipped'])} skipped eigenspaces")
        for f in doc["eigenforms"]:
            ev = ", ".join(f"a_{l}={v}" for l, v in f.get("eigenvalues", {}).items())
            lines.append(f"  {ev}")
        for s in doc["skipped"]:
            lines.append(f"  skipped (dim {s['dimension']}): {s['reason']}")
    if "summary" in doc:
        s = doc["summary"]
        lines.append(f"{s['passed']}/{s['trials']} certificates fully passing")
        for r in doc["results"]:
            if not r["certificate"]["fully_passing"]:
                lines.append(f"  trial {r['trial']}: FAIL {_failure(r['certificate'])}")
    if "certificate" in doc:
        cert = doc["certificate"]
        if cert is None:
            lines.append(doc.get("error", "no certificate"))
        else:
            lines.append("certificate: " + ("PASS" if cert["fully_passing"] else "FAIL " + _failure(cert)))
        if doc.get("candidate"):
            lines.append(f"candidate: {doc['candidate']}")
    if "reproduced" in doc:
        lines.append(f"reproduced: {doc['reproduced']}, fully passing: {doc['fully_passing']}")
    if "error" in doc and "certificate" not in doc:
        lines.append(doc["error"])
    return "\n".join(lines) + "\n"


def _failure(cert: dict) -> str:
    for name in ("lemma_part1", "lemma_part2", "v_identity"):
        sec = cert.get(name)
        if sec and not sec["passed"]:
            return f"{name} at {sec['counterexample']}"
    if cert.get("zero_candidate"):
        return "zero candidate"
    tm = cert.get("target_match")
    if tm and not tm["passed"]:
        return f"target mismatch at index {tm['first_mismatch']}"
    return "incomplete"


COMMANDS = {"space": cmd_space, "eigen": cmd_eigen, "synthetic": cmd_synthetic,
            "companion": cmd_companion, "verify": cmd_verify}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)          # exits with status 2 on malformed flags
    try:
        cfg = resolve(args)
        doc, status = COMMANDS[args.command](cfg)
    except UsageError as exc:
        print(f"modp-companion {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ModpError as exc:
        print(f"modp-companion {args.command}: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render_text(doc) if args.format == "text" else json.dumps(doc, indent=1, sort_keys=True) + "\n"
    if args.output:
        try:
            with open(args.output, "w") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"modp-companion: error: --output: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
