"""Command-line interface.

Exit codes: 0 success, 1 a verification failed, 2 bad input or usage.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from pathlib import Path

from . import catalog
from .duality import (BadField, MeasuringInstance, NotAMeasuring, NotFiniteDimensionalCertificate, TooLarge,
                      dual_theorem_check, finite_dual_bialgebra, grouplikes, meas_to_comeas, nonexistence_witness,
                      terminal_factorization, verify_action, verify_measuring, witness_csv)
from .exact import DimensionMismatch, ExactError, FieldMismatch, FieldSpec
from .maps import ActionShapeMap, CoactionShapeMap, OperatorSubspace, compare, cosupp, supp
from .ncpoly import DegreeBoundExceeded
from .omega import DELTA, EPS, MU, UNIT, BadParams, OmegaAlgebra, SignatureMismatch
from .report import Report
from .universal import (ComeasuringInstance, MissingAlgebraOnQ, NotAComeasuring, NotASubalgebra, NotInV,
                        antipode_defects, build_universal_bialgebra, build_universal_comeasuring,
                        degree_one_report, hopf_envelope_presentation, universal_hom, verify_coaction,
                        verify_comeasuring, verify_universal_map)


class UsageError(ValueError):
    pass


INPUT_ERRORS = (UsageError, json.JSONDecodeError, BadParams, DimensionMismatch, FieldMismatch, SignatureMismatch,
                MissingAlgebraOnQ, BadField, TooLarge, catalog.UnknownEntry, KeyError, OSError)
CHECK_ERRORS = (NotAComeasuring, NotAMeasuring, NotInV, NotASubalgebra, NotFiniteDimensionalCertificate,
                DegreeBoundExceeded)


class Run:
    """Collects the inputs digest, results and the exit status of one command."""

    def __init__(self, command: str, field_override: FieldSpec | None):
        self.command = command
        self.field_override = field_override
        self.digest = hashlib.sha256()
        self.results: dict = {}
        self.text: list[str] = []
        self.ok = True
        self.certified_degree = None

    def load(self, path: str | None) -> dict | None:
        if path is None:
            return None
        raw = Path(path).read_bytes()
        self.digest.update(raw)
        return json.loads(raw)

    def algebra(self, path: str) -> OmegaAlgebra:
        d = self.load(path)
        if d is None:
            raise UsageError("an algebra file is required")
        return OmegaAlgebra.from_json(d)

    def field_for(self, d: dict, fallback: FieldSpec) -> FieldSpec:
        if "field" in d:
            return FieldSpec.from_json(d["field"])
        return self.field_override or fallback

    def check(self, key: str, rep: Report) -> None:
        self.results[key] = rep.to_json()
        self.ok = self.ok and rep.ok
        self.text.append(f"{key}: {'ok' if rep.ok else 'FAILED'}")
        for k, msg in sorted(rep.failures.items()):
            self.text.append(f"  {k}: {msg}")

    def to_json(self) -> dict:
        out = {"command": self.command, "inputs_sha256": self.digest.hexdigest(), "results": self.results}
        if self.certified_degree is not None:
            out["certified_degree"] = self.certified_degree
        return out


def _subspace(run: Run, path: str | None, a_dim: int, b_dim: int, f: FieldSpec) -> OperatorSubspace | None:
    d = run.load(path)
    if d is None:
        return None
    v = OperatorSubspace.from_json(d, run.field_for(d, f))
    if (v.a_dim, v.b_dim) != (a_dim, b_dim):
        raise UsageError("V has the wrong shape")
    return v


def _comeasuring(run: Run, args) -> ComeasuringInstance:
    a = run.algebra(args.a)
    b = run.algebra(args.b) if args.b else a
    q = run.algebra(args.q)
    d = run.load(args.rho)
    rho = CoactionShapeMap.from_json(d, run.field_for(d, a.field))
    return ComeasuringInstance(a, b, q, rho)


def _measuring(run: Run, args) -> MeasuringInstance:
    a = run.algebra(args.a)
    b = run.algebra(args.b) if args.b else a
    p = run.algebra(args.p)
    d = run.load(args.psi)
    psi = ActionShapeMap.from_json(d, run.field_for(d, a.field))
    return MeasuringInstance(p, a, b, psi)


def _hilbert(run: Run, pres, degree: int) -> None:
    pres.complete(max(degree, max((r.degree for r in pres.relations), default=0)))
    h = pres.hilbert_function(degree)
    cert = pres.finite_dim_certificate(pres.complete_below)
    run.results["hilbert"] = h
    run.results["finite_dim"] = {"finite": cert.finite, "dim": len(cert.basis) if cert.finite else None}
    run.certified_degree = pres.complete_below
    run.text.append("hilbert: " + " ".join(map(str, h)))
    run.text.append(f"finite-dimensional: {'yes, dim ' + str(len(cert.basis)) if cert.finite else 'unknown'}")


# -- commands -------------------------------------------------------------------

def cmd_catalog(run: Run, args) -> None:
    f = run.field_override or FieldSpec("Q")
    if args.action == "list":
        for n in catalog.names():
            e = catalog.entry(n, f)
            run.text.append(f"{n}\t{e.description}")
        run.results["entries"] = catalog.names()
        return
    if not args.name:
        raise UsageError("catalog emit needs a name")
    e = catalog.entry(args.name, f)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        files = {"a.json": e.algebra.to_json()}
        for i, (_, q, rho) in enumerate(e.coactions, 1):
            files[f"coaction{i}.q.json"] = q.to_json()
            files[f"coaction{i}.rho.json"] = rho.to_json()
        for i, (_, p, psi) in enumerate(e.measurings, 1):
            files[f"measuring{i}.p.json"] = p.to_json()
            files[f"measuring{i}.psi.json"] = psi.to_json()
        for name, d in files.items():
            (out / name).write_text(json.dumps(d, indent=2) + "\n")
        run.results["files"] = sorted(files)
        run.text.extend(sorted(str(out / n) for n in files))
    else:
        run.results = e.to_json()
        run.text.append(json.dumps(e.to_json(), indent=2))


def cmd_supp(run: Run, args) -> None:
    d = run.load(args.rho)
    rho = CoactionShapeMap.from_json(d, run.field_for(d, FieldSpec("Q")))
    f = rho.field
    if args.command == "supp":
        basis = supp(rho)
        run.results["dim"] = len(basis)
        run.results["basis"] = [[f.to_str(x) for x in v] for v in basis]
        run.text.append(f"dim supp = {len(basis)}")
    else:
        v = cosupp(rho)
        run.results["dim"] = v.dim
        run.results["subspace"] = v.to_json()
        run.text.append(f"dim cosupp = {v.dim}")


def cmd_compare(run: Run, args) -> None:
    d1, d2 = run.load(args.rho1), run.load(args.rho2)
    f = run.field_override or FieldSpec("Q")
    r1 = CoactionShapeMap.from_json(d1, run.field_for(d1, f))
    r2 = CoactionShapeMap.from_json(d2, run.field_for(d2, f))
    c = compare(r1, r2)
    run.results["relation"] = c.relation.value
    for key, tau in (("tau", c.tau), ("tau_reverse", c.tau_reverse)):
        if tau is not None:
            run.results[key] = [[r1.field.to_str(x) for x in row] for row in tau.data]
    run.text.append(f"relation: {c.relation.value}")


def cmd_univ_comeasuring(run: Run, args) -> None:
    a = run.algebra(args.a)
    b = run.algebra(args.b) if args.b else a
    v = _subspace(run, args.v, a.dim, b.dim, a.field)
    up = build_universal_comeasuring(a, b, v)
    run.results["presentation"] = up.to_json()
    run.text.append(up.listing())
    run.check("universal-map", verify_universal_map(up, args.degree))
    _hilbert(run, up.pres, args.degree)
    run.results["degree_one"] = degree_one_report(up, args.degree)


def cmd_univ_bialgebra(run: Run, args) -> None:
    a = run.algebra(args.a)
    v = _subspace(run, args.v, a.dim, a.dim, a.field)
    bp = build_universal_bialgebra(a, v, args.degree)
    run.results["presentation"] = bp.to_json()
    run.text.append(bp.listing())
    run.check("bialgebra", bp.certificate)
    _hilbert(run, bp.pres, args.degree)


def cmd_hopf_envelope(run: Run, args) -> None:
    a = run.algebra(args.a)
    v = _subspace(run, args.v, a.dim, a.dim, a.field)
    bp = build_universal_bialgebra(a, v, args.degree)
    env = hopf_envelope_presentation(bp, args.layers, args.degree)
    run.results["presentation"] = env.to_json()
    run.text.append(env.listing())
    run.check("bialgebra", env.certificate)
    run.check("antipode", antipode_defects(env, args.degree))
    _hilbert(run, env.pres, args.degree)


def cmd_verify_coaction(run: Run, args) -> None:
    inst = _comeasuring(run, args)
    if inst.q.has(DELTA, EPS):
        run.check("coaction", verify_coaction(inst))
    else:
        run.check("comeasuring", verify_comeasuring(inst))


def cmd_universal_hom(run: Run, args) -> None:
    inst = _comeasuring(run, args)
    v = _subspace(run, args.v, inst.a.dim, inst.b.dim, inst.a.field)
    up = build_universal_comeasuring(inst.a, inst.b, v)
    hom = universal_hom(up, inst)
    f = inst.a.field
    run.results["images"] = {k: [f.to_str(x) for x in vec] for k, vec in hom.images.items()}
    run.results["unique"] = hom.unique
    for k, vec in hom.images.items():
        run.text.append(f"phi({k}) = [{', '.join(f.to_str(x) for x in vec)}]")
    run.check("universal-hom", hom.report)


def cmd_verify_measuring(run: Run, args) -> None:
    inst = _measuring(run, args)
    if inst.p.has(MU, UNIT) and inst.a.dim == inst.b.dim and args.action:
        run.check("action", verify_action(inst))
    else:
        run.check("measuring", verify_measuring(inst))


def cmd_meas_to_comeas(run: Run, args) -> None:
    inst = meas_to_comeas(_measuring(run, args))
    run.results["q"] = inst.q.to_json()
    run.results["rho"] = inst.rho.to_json()
    run.text.append(json.dumps({"q": inst.q.to_json(), "rho": inst.rho.to_json()}, indent=2))


def cmd_finite_dual(run: Run, args) -> None:
    a = run.algebra(args.a)
    v = _subspace(run, args.v, a.dim, a.dim, a.field)
    bp = build_universal_bialgebra(a, v, args.degree)
    fd = finite_dual_bialgebra(bp, args.degree)
    run.certified_degree = bp.pres.complete_below
    run.results["dual"] = fd.to_json()
    run.text.append(f"dim = {len(fd.basis)}; basis of B: " + ", ".join(fd.primal.basis))
    run.check("bialgebra-axioms", fd.report)
    run.check("induced-action", verify_action(fd.measuring()))
    if args.p and args.psi:
        inst = _measuring(run, args)
        theta, unique, rep = terminal_factorization(fd, MeasuringInstance(inst.p, a, a, inst.psi))
        run.results["theta"] = [[a.field.to_str(x) for x in r] for r in theta.data]
        run.check("terminality", rep)


def cmd_grouplikes(run: Run, args) -> None:
    c = run.algebra(args.c)
    gs = grouplikes(c, args.cap)
    f = c.field
    run.results["grouplikes"] = [[f.to_str(x) for x in g] for g in gs]
    for g in gs:
        run.text.append(" + ".join(f"{f.to_str(x)}*{c.basis[i]}" for i, x in enumerate(g) if x))


def cmd_dual_check(run: Run, args) -> None:
    a = run.algebra(args.a)
    v = _subspace(run, args.v, a.dim, a.dim, a.field)
    rep = dual_theorem_check(a, v, args.degree)
    run.certified_degree = args.degree
    run.results["hilbert_left"] = rep.details.get("hilbert_left")
    run.results["hilbert_right"] = rep.details.get("hilbert_right")
    run.check("dual-check", rep)


def cmd_witness(run: Run, args) -> None:
    try:
        ns = [int(x) for x in args.n.split(",") if x.strip()]
    except ValueError:
        raise UsageError("--n takes a comma-separated list of integers") from None
    f = FieldSpec("Fp", args.p)
    rows = nonexistence_witness(ns, args.cap, f, coalgebra=args.coalgebra)
    run.results["rows"] = [{"n": r.n, "dim_supp": r.dim_supp, "dim_v1": r.dim_v1, "verified": r.verified}
                           for r in rows]
    run.text.append(witness_csv(rows).rstrip("\n"))
    run.ok = all(r.verified and r.dim_supp == r.n for r in rows)


def cmd_random_check(run: Run, args) -> None:
    """Seeded support/cosupport dimension comparison on random coaction shapes."""
    rng = random.Random(args.seed)
    f = run.field_override or FieldSpec("Q")
    print(f"seed = {args.seed}", file=sys.stderr)
    bad = 0
    for _ in range(args.count):
        a, b, q = rng.randint(1, 4), rng.randint(1, 4), rng.randint(1, 4)
        coords = [[[f(rng.randint(-2, 2)) for _ in range(q)] for _ in range(a)] for _ in range(b)]
        rho = CoactionShapeMap.from_coords(f, coords, q)
        if len(supp(rho)) != cosupp(rho).dim:
            bad += 1
    run.results = {"seed": args.seed, "count": args.count, "mismatches": bad}
    run.text.append(f"seed {args.seed}: {args.count} maps, {bad} mismatches")
    run.ok = bad == 0


COMMANDS = {
    "catalog": cmd_catalog,
    "supp": cmd_supp,
    "cosupp": cmd_supp,
    "compare": cmd_compare,
    "univ-comeasuring": cmd_univ_comeasuring,
    "univ-bialgebra": cmd_univ_bialgebra,
    "hopf-envelope": cmd_hopf_envelope,
    "verify-coaction": cmd_verify_coaction,
    "universal-hom": cmd_universal_hom,
    "verify-measuring": cmd_verify_measuring,
    "meas-to-comeas": cmd_meas_to_comeas,
    "finite-dual": cmd_finite_dual,
    "grouplikes": cmd_grouplikes,
    "dual-check": cmd_dual_check,
    "nonexistence-witness": cmd_witness,
    "random-check": cmd_random_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--degree", type=int, default=4, help="truncation degree D (default 4)")
    common.add_argument("--layers", type=int, default=1, help="antipode layers K (default 1)")
    common.add_argument("--field", type=FieldSpec.parse, default=None, help="Q or Fp:p, for inputs without a field")
    common.add_argument("--output", choices=("json", "text"), default="text")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--timing", action="store_true", help="report wall time on stderr")

    p = argparse.ArgumentParser(prog="comeas", description="(Co)measurings between finite-dimensional Omega-algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", parents=[common], help="list or emit example inputs")
    c.add_argument("action", choices=("list", "emit"))
    c.add_argument("name", nargs="?")
    c.add_argument("--out", help="directory for the emitted JSON files")

    for name in ("supp", "cosupp"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--rho", required=True)
    s = sub.add_parser("compare", parents=[common])
    s.add_argument("--rho1", required=True)
    s.add_argument("--rho2", required=True)

    s = sub.add_parser("univ-comeasuring", parents=[common])
    s.add_argument("--a", required=True)
    s.add_argument("--b")
    s.add_argument("--v")
    for name in ("univ-bialgebra", "hopf-envelope", "dual-check"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--a", required=True)
        s.add_argument("--v")
    s = sub.add_parser("finite-dual", parents=[common])
    s.add_argument("--a", required=True)
    s.add_argument("--v")
    s.add_argument("--p", help="coalgebra of a measuring to factor through the dual")
    s.add_argument("--psi")
    s.add_argument("--b")

    for name in ("verify-coaction", "universal-hom"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--a", required=True)
        s.add_argument("--b")
        s.add_argument("--q", required=True)
        s.add_argument("--rho", required=True)
        if name == "universal-hom":
            s.add_argument("--v")
    for name in ("verify-measuring", "meas-to-comeas"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--p", required=True)
        s.add_argument("--a", required=True)
        s.add_argument("--b")
        s.add_argument("--psi", required=True)
        if name == "verify-measuring":
            s.add_argument("--action", action="store_true", help="also check the module axioms")

    s = sub.add_parser("grouplikes", parents=[common])
    s.add_argument("--c", required=True)
    s.add_argument("--cap", type=int, default=8)

    s = sub.add_parser("nonexistence-witness", parents=[common])
    s.add_argument("--n", default="2,3,4,6")
    s.add_argument("--p", type=int, default=13)
    s.add_argument("--cap", type=int, default=8)
    s.add_argument("--coalgebra", action="store_true", help="use the primitive span coalgebra instead")

    s = sub.add_parser("random-check", parents=[common])
    s.add_argument("--count", type=int, default=20)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    run = Run(args.command, args.field)
    start = time.perf_counter()
    try:
        COMMANDS[args.command](run, args)
    except CHECK_ERRORS as e:
        run.ok = False
        run.results["error"] = {"code": type(e).__name__, "message": str(e)}
        run.text.append(f"error [{type(e).__name__}]: {e}")
        if isinstance(e, (NotAComeasuring, NotAMeasuring)):
            for k, msg in sorted(e.report.failures.items()):
                run.text.append(f"  {k}: {msg}")
    except (*INPUT_ERRORS, ExactError, ValueError) as e:
        err = {"code": type(e).__name__, "message": str(e)}
        if args.output == "json":
            print(json.dumps({"command": args.command, "error": err}, indent=2, sort_keys=True))
        else:
            print(f"error [{err['code']}]: {err['message']}", file=sys.stderr)
        return 2
    if args.output == "json":
        out = run.to_json()
        out["ok"] = run.ok
        print(json.dumps(out, indent=2, sort_keys=True))
    else:
        print("\n".join(run.text))
    if args.timing:
        print(f"time: {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return 0 if run.ok else 1


if __name__ == "__main__":
    sys.exit(main())
