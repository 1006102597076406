"""Command-line front end.

JSON is the stable output format; csv and text are conveniences.  Exit codes:
0 on success, 2 on usage errors, 1 when a module rejects the input.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from fractions import Fraction

from . import census as cs
from . import fano_lattice as fl
from . import numtheory as nt
from . import quartic_c4 as c4
from . import quartic_v4 as v4


class UsageError(Exception):
    pass


def _rational(text: str) -> Fraction:
    try:
        return fl.parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected an integer or p/q, got {text!r}") from None


def _window_bound(text: str) -> Fraction:
    # window ends may be real: accept p/q, decimals and the constant e
    t = text.strip()
    if t == "e":
        return Fraction(math.e)
    try:
        return Fraction(t) if "/" in t else Fraction(float(t))
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad window bound {text!r}") from None


def _checkpoint(text: str) -> int:
    t = text.strip()
    m = re.fullmatch(r"(\d+)\^(\d+)", t) or re.fullmatch(r"(\d+)e(\d+)", t, re.IGNORECASE)
    if m:
        base = int(m.group(1))
        return base ** int(m.group(2)) if "^" in t else base * 10 ** int(m.group(2))
    if t.isdigit():
        return int(t)
    raise argparse.ArgumentTypeError(f"bad checkpoint {text!r}")


def _checkpoints(text: str) -> list:
    return [_checkpoint(x) for x in text.split(",") if x.strip()]


def _gram(text: str):
    parts = text.split(",")
    if len(parts) != 6:
        raise argparse.ArgumentTypeError("--gram needs six comma separated entries")
    return [_rational(p) for p in parts]


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quartic-shapes", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("shape-v4", help="shape of Q(sqrt d1, sqrt d2)")
    s.add_argument("--d1", type=int, required=True)
    s.add_argument("--d2", type=int, required=True)
    s.add_argument("--d3", type=int)

    s = sub.add_parser("shape-c4", help="shape of the C4 field with parameters A, B, C, D")
    for name in ("a", "b", "c", "d"):
        s.add_argument(f"--{name}", type=int, required=True)

    s = sub.add_parser("reduce", help="Selling-reduce a 3x3 Gram matrix")
    s.add_argument("--gram", type=_gram, required=True, help='"g11,g12,g13,g22,g23,g33"')

    s = sub.add_parser("lattice", help="conorm diagram of a named lattice family")
    s.add_argument("--family", choices=("tP", "tI", "oC", "oI"), required=True)
    s.add_argument("--a2", type=_rational, required=True)
    s.add_argument("--b2", type=_rational)
    s.add_argument("--c2", type=_rational, required=True)

    s = sub.add_parser("census-v4", help="V4 counts in a shape window")
    s.add_argument("--class", dest="klass", choices=("wild", "tame"), required=True)
    s.add_argument("--r1", type=_window_bound, required=True)
    s.add_argument("--r2", type=_window_bound, required=True)
    s.add_argument("--checkpoints", type=_checkpoints, required=True)
    s.add_argument("--direct", action="store_true", help="also list fields one by one")
    s.add_argument("--threads", type=int, default=1)

    s = sub.add_parser("census-c4", help="C4 counts for fixed A")
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--case", choices=cs.C4_CASES, required=True)
    s.add_argument("--checkpoints", type=_checkpoints, required=True)

    s = sub.add_parser("constants", help="Euler-product constants")
    s.add_argument("--name", choices=("wild", "tame", "sigma"), required=True)
    s.add_argument("--a", type=int)
    s.add_argument("--tol", type=float, default=1e-8)

    s = sub.add_parser("selftest", help="run the brute-force oracle checks")
    s.add_argument("--seed", type=int, default=0)
    return p


# -- command bodies ----------------------------------------------------------


def _diagram_payload(d: fl.ConormDiagram) -> dict:
    return {
        "diagram": d.to_json(),
        "shape": fl.canonical_shape(d).to_json(),
        "type": fl.combinatorial_type(d),
        "type_name": fl.TYPE_NAMES[fl.combinatorial_type(d)],
    }


def cmd_shape_v4(args) -> dict:
    f = v4.from_triple(args.d1, args.d2, args.d3) if args.d3 is not None else v4.from_radicands(args.d1, args.d2)
    d = fl.reduced_diagram(v4.perp_superbase_gram(f))
    out = {"field": f.to_json(), "shape": v4.shape(f).to_json(), "special": v4.is_special(f)}
    out.update({k: v for k, v in _diagram_payload(d).items() if k != "shape"})
    out["shape_class"] = v4.shape_via_reduction(f).to_json()
    return out


def cmd_shape_c4(args) -> dict:
    f = c4.validate(args.a, args.b, args.c, args.d)
    d = fl.reduced_diagram(c4.perp_superbase_gram(f))
    out = {"field": f.to_json(), "shape": c4.shape(f).to_json()}
    out.update({k: v for k, v in _diagram_payload(d).items() if k != "shape"})
    out["shape_class"] = c4.shape_via_reduction(f).to_json()
    return out


def cmd_reduce(args) -> dict:
    g = fl.gram_from_entries(args.gram)
    return _diagram_payload(fl.reduced_diagram(fl.superbase_from_basis(g)))


def cmd_lattice(args) -> dict:
    if args.family in ("oC", "oI") and args.b2 is None:
        raise UsageError(f"--b2 is required for {args.family}")
    if args.family in ("tP", "tI"):
        d = fl.named_lattice(args.family, args.a2, c2=args.c2)
    else:
        d = fl.named_lattice(args.family, args.a2, args.b2, args.c2)
    return _diagram_payload(d)


def cmd_census_v4(args) -> cs.CensusReport:
    family = "oC" if args.klass == "wild" else "oI"
    window = cs.Window(family, args.r1, args.r2)
    exp = cs.Experiment.v4(args.klass, window)
    return cs.convergence_report(exp, args.checkpoints, direct=args.direct, workers=args.threads)


def cmd_census_c4(args) -> cs.CensusReport:
    return cs.convergence_report(cs.Experiment.c4(args.case, args.a), args.checkpoints)


def cmd_constants(args) -> dict:
    if args.name == "sigma" and args.a is None:
        raise UsageError("--a is required for the sigma constant")
    if args.tol <= 0:
        raise UsageError("--tol must be positive")
    c = nt.euler_constant(args.name, args.a, tol=args.tol)
    return {
        "name": c.kind,
        "value": repr(c.value),
        "bound": repr(c.bound),
        "prefactor": str(c.prefactor),
        "truncation": c.truncation,
    }


def selftest(seed: int = 0) -> list:
    """Run quick oracle comparisons; returns (name, ok, detail) triples."""
    import random

    from . import oracles

    results = []

    def check(name, ok, detail=""):
        results.append((name, bool(ok), detail))

    check("fano automorphisms", len(fl.fano_automorphisms()) == oracles.automorphism_count_brute() == 168)
    for p in (2, 3, 5):
        brute = oracles.carefree_local_count_brute(p)
        check(f"carefree count p={p}", brute == nt.carefree_local_count(p), f"{brute}")
    bad = [d for d in range(3, 3000) if nt.is_squarefree(d) and all(q % 4 != 3 for q in nt.factorize(d).primes())
           and nt.q_count(d) != nt.q_count_formula(d)]
    check("Q(D) formula", not bad, str(bad[:5]))
    rng = random.Random(seed)
    mism = 0
    n = 0
    while n < 20:
        g = fl.gram_from_entries([rng.randint(-5, 5) for _ in range(6)])
        if not fl.is_positive_definite(g):
            continue
        n += 1
        s = oracles.exhaustive_obtuse_superbase(g)
        if s is None or fl.canonical_shape(fl.ConormDiagram.from_superbase(s)) != fl.shape_of_gram(g):
            mism += 1
    check("selling vs exhaustive superbase", mism == 0, f"{mism} mismatches")
    fields = list(v4.iter_fields(10**5))
    check("V4 disc vs conductor formula", all(v4.discriminant(f) == v4.conductor_discriminant(f) for f in fields))
    check("V4 shape theorem to 1e5", all(v4.shape_via_reduction(f) == v4.shape_class(f) for f in fields))
    cf = list(c4.iter_fields(10**6))
    check("C4 shape theorem to 1e6", all(c4.shape_via_reduction(f) == c4.shape_class(f) for f in cf))
    p = cs.RegionParams(10**4, Fraction(1, 2), 2)
    mc = cs.monte_carlo_volume(p, samples=200_000, seed=seed)
    check("region volume (Monte Carlo)", abs(mc / cs.region_volume(p) - 1) < 0.02, f"{mc:.1f}")
    ok = all(
        nt.f_sigma(p**k) == oracles.dirichlet_local(p, k, lambda q, e: 1, lambda q, e: nt.chi5(q) ** e, nt.h_sigma0)
        for p in (2, 3, 5, 7, 13) for k in range(6)
    )
    check("h table convolution", ok)
    return results


# -- output ------------------------------------------------------------------


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}.")
    elif isinstance(obj, list):
        yield prefix[:-1], json.dumps(obj)
    else:
        yield prefix[:-1], obj


def emit(result, fmt: str, out) -> None:
    if isinstance(result, cs.CensusReport):
        if fmt == "csv":
            out.write(result.to_csv())
            return
        if fmt == "text":
            for r in result.rows:
                out.write(f"{result.experiment}  X={r.x}  count={r.count}  predicted={r.predicted:.3f}  ratio={r.ratio:.4f}\n")
            return
        result = result.to_json()
    if fmt == "json":
        out.write(json.dumps(result, sort_keys=True) + "\n")
    elif fmt == "csv":
        out.write("key,value\n")
        for k, v in _flatten(result):
            out.write(f"{k},{v}\n")
    else:
        for k, v in _flatten(result):
            out.write(f"{k}: {v}\n")


COMMANDS = {
    "shape-v4": cmd_shape_v4,
    "shape-c4": cmd_shape_c4,
    "reduce": cmd_reduce,
    "lattice": cmd_lattice,
    "census-v4": cmd_census_v4,
    "census-c4": cmd_census_c4,
    "constants": cmd_constants,
}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "selftest":
            results = selftest(args.seed)
            payload = {"checks": [{"name": n, "ok": ok, "detail": d} for n, ok, d in results]}
            payload["ok"] = all(ok for _, ok, _ in results)
            emit(payload, args.format, out)
            return 0 if payload["ok"] else 1
        emit(COMMANDS[args.command](args), args.format, out)
        return 0
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return 2
    except (ValueError, ArithmeticError) as exc:
        err.write(f"error: {exc}\n")
        return 1


def main() -> None:
    sys.exit(run())
