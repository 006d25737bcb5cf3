"""Command-line interface: ``qtroesch {homology,verify,search,dims,calibrate}``.

Exit codes: 0 ok, 1 an identity failed, 2 bad usage, 3 internal invariant breach.
Artifacts are canonical JSON (sorted keys), so identical runs are byte-identical;
that is what makes the optional result cache safe.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import logging
import os
import sys
import tempfile
import time

from . import __version__
from .coeff import FieldSpec, get_field, parse_field, qbinom_raw
from .errors import DomainError, NilpotencyError, NoRootError, QTroeschError

log = logging.getLogger("qtroesch")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BREACH = 0, 1, 2, 3
CACHE_ENV = "QTROESCH_CACHE"


class UsageError(Exception):
    pass


def parse_range(text: str) -> list[int]:
    """'5', '0-9' or '0,3,6' -> sorted list of non-negative ints."""
    out = set()
    try:
        for part in str(text).split(","):
            part = part.strip()
            if "-" in part:
                lo, hi = part.split("-", 1)
                out.update(range(int(lo), int(hi) + 1))
            else:
                out.add(int(part))
    except ValueError:
        raise UsageError(f"bad integer range {text!r}") from None
    if not out or min(out) < 0:
        raise UsageError(f"range {text!r} must be a non-empty set of non-negative integers")
    return sorted(out)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def atomic_write(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- cache -------------------------------------------------------------------


class Cache:
    def __init__(self, root: str | None):
        self.root = root

    def key(self, params: dict) -> str:
        blob = json.dumps({**params, "version": __version__}, sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()

    def get(self, key):
        if not self.root:
            return None
        path = os.path.join(self.root, key + ".json")
        try:
            with open(path) as fh:
                entry = json.load(fh)
        except (OSError, ValueError):
            return None
        log.info("cache hit %s", key[:12])
        return entry["exit"], entry["artifact"]

    def put(self, key, code, artifact):
        if not self.root:
            return
        entry = {"key": key, "created": time.time(), "exit": code, "artifact": artifact}
        atomic_write(os.path.join(self.root, key + ".json"), json.dumps(entry, sort_keys=True))


# -- shared helpers ----------------------------------------------------------


def _field(args) -> FieldSpec:
    try:
        spec = parse_field(args.field, args.ell)
        get_field(spec)
    except (DomainError, NoRootError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    return spec


def _header(spec: FieldSpec, with_convention=True):
    out = {"field": spec.to_json(), "version": __version__}
    if with_convention and spec.ell == 3:
        from .qpoly import calibrated_convention

        out["convention"] = calibrated_convention(get_field(spec)).to_json()
    else:
        out["convention"] = None
    return out


def _check(name, passed, detail=None):
    return {"name": name, "passed": bool(passed), "detail": detail}


def _require_ell3(args):
    if args.ell != 3:
        raise UsageError("this command is defined for ell = 3")


# -- commands ----------------------------------------------------------------


def cmd_homology(args):
    from .qpoly import calibrated_convention
    from .troesch import TroeschSpec, build_B, expected_h0, homology_tables

    _require_ell3(args)
    fspec = _field(args)
    ds, ns = parse_range(args.d), parse_range(args.n)
    conv = calibrated_convention(get_field(fspec)) if args.model == "direct" else None
    specs = [TroeschSpec(d, n, args.model, fspec, conv) for n in ns for d in ds]
    results = []
    rows = [("d", "n", "i", "s", "dim")]
    for spec, table in homology_tables(specs, args.jobs):
        B = build_B(spec)
        log.info("B_%d(%d): class %s", spec.d, spec.n, table.classification)
        results.append(
            {
                "spec": spec.to_json(),
                "graded_dims": [[k, v] for k, v in sorted(B.graded_dims().items())],
                "homology": table.to_json(),
                "classification": table.classification,
                "expected_h0": expected_h0(spec.d, spec.n),
            }
        )
        rows += [(spec.d, spec.n, *r) for r in table.to_csv_rows()[1:]]
    if args.csv:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        atomic_write(args.csv, buf.getvalue())
    body = results[0] if len(results) == 1 else {"results": results}
    return EXIT_OK, {"header": _header(fspec), **body}


def _verify_relations(args, fspec):
    from .qpoly import Convention, calibrated_convention, verify_relations

    F = get_field(fspec)
    conv = calibrated_convention(F)
    if args.perturb:
        conv = Convention((conv.c1 + 1) % 3, conv.c2, conv.cross, conv.u, conv.v)
    rep = verify_relations(args.n, args.dmax, conv, F)
    checks = []
    for name, r in rep.to_json()["relations"].items():
        detail = {"label": r["label"], "checked": r["checked"]}
        if r["counterexample"] is not None:
            detail["counterexample"] = r["counterexample"]
            detail["lhs"], detail["rhs"] = r["sides"]
        checks.append(_check(name, r["passed"], detail))
    return checks, {"convention_tested": conv.to_json()}


def _verify_leibniz(args, fspec):
    from .line import leibniz_failures
    from .qpoly import calibrated_convention, mu_B_failures

    F = get_field(fspec)
    bad = leibniz_failures(F, args.dmax, first_only=True)
    checks = [_check(f"twisted Leibniz on B(1), weight <= {args.dmax}", not bad, {"counterexample": bad[:1]})]
    top = min(args.dmax, 4)
    for n in range(1, args.n + 1):
        bad = mu_B_failures(n, top, calibrated_convention(F), F, first_only=True)
        checks.append(_check(f"mu_B commutes with delta, n={n}, d1+d2 <= {top}", not bad, {"counterexample": bad[:1]}))
    return checks, {}


def _verify_troesch(args, fspec):
    from .troesch import TroeschSpec, expected_h0, homology_tables

    specs = [TroeschSpec(d, args.n, "tensor", fspec) for d in range(args.dmax + 1)]
    checks = []
    for spec, t in homology_tables(specs, args.jobs):
        want = "acyclic" if spec.d % 3 else "coresolution"
        h0 = expected_h0(spec.d, spec.n)
        ok = t.classification == want and all(h == h0 for h in t.degree0)
        checks.append(_check(f"B_{spec.d}({spec.n})", ok, {"class": t.classification, "h0": list(t.degree0), "expected_h0": h0}))
    return checks, {}


def _verify_ladder(args, fspec):
    from .troesch import proof_ladder

    F = get_field(fspec)
    checks = []
    for d in range(2, args.dmax + 1):
        for st in proof_ladder(d, F):
            detail = {
                "dims": [[k, v] for k, v in sorted(st.dims.items())],
                "class": st.table.classification,
            }
            if not st.ok:
                detail["expected_dims"] = [[k, v] for k, v in sorted(st.expected_dims.items())]
                detail["expected_class"] = st.expected_class
            checks.append(_check(f"d={d} {st.name}", st.ok, detail))
    return checks, {}


def _verify_kunneth(args, fspec):
    from .troesch import kunneth_check

    F = get_field(fspec)
    checks = []
    top = args.dmax if args.dmax is not None else 4
    for a in range(top + 1):
        for b in range(top + 1 - a):
            t = kunneth_check(a, b, F)
            ok = t.classification == "coresolution" and t.degree0 == (1, 1)
            checks.append(_check(f"B_{3 * a}(1) x B_{3 * b}(1)", ok, {"class": t.classification, "h0": list(t.degree0)}))
    return checks, {}


# primes p with ell | p - 1, used for the prime-field backend
_PRIMES = {3: 7, 5: 11, 7: 29}


def _verify_qcombinatorics(args, fspec):
    checks = []
    for ell, p in _PRIMES.items():
        for kind in ("cyclotomic", "prime"):
            F = get_field(FieldSpec(kind, ell, p if kind == "prime" else None))
            t = F.qpow(2)
            zero = all(F.is_zero(qbinom_raw(F, ell, k, t)) for k in range(1, ell))
            checks.append(_check(f"qbinom({ell},k,q^2)=0 for 0<k<{ell} [{F.spec}]", zero))
            pascal = True
            for n in range(1, 13):
                for k in range(1, n):
                    lhs = qbinom_raw(F, n, k, t)
                    rhs = F.add(qbinom_raw(F, n - 1, k - 1, t), F.mul(F.pow(t, k), qbinom_raw(F, n - 1, k, t)))
                    pascal &= lhs == rhs
            checks.append(_check(f"q-Pascal, n <= 12 [{F.spec}]", pascal))
    return checks, {}


SUITES = {
    "relations": (_verify_relations, {"n": 2, "dmax": 3}),
    "leibniz": (_verify_leibniz, {"n": 2, "dmax": 10}),
    "troesch": (_verify_troesch, {"n": 1, "dmax": 12}),
    "ladder": (_verify_ladder, {"n": 1, "dmax": 10}),
    "kunneth": (_verify_kunneth, {"n": 1, "dmax": 4}),
    "qcombinatorics": (_verify_qcombinatorics, {"n": 1, "dmax": 0}),
}


def cmd_verify(args):
    fn, defaults = SUITES[args.suite]
    if args.suite != "qcombinatorics":
        _require_ell3(args)
    for k, v in defaults.items():
        if getattr(args, k) is None:
            setattr(args, k, v)
    if args.suite == "relations" and (args.n > 3 or args.dmax > 6):
        raise UsageError("relations are checked for n <= 3 and dmax <= 6")
    fspec = _field(args)
    checks, extra = fn(args, fspec)
    passed = all(c["passed"] for c in checks)
    for c in checks:
        log.info("%s %s", "PASS" if c["passed"] else "FAIL", c["name"])
    out = {"header": _header(fspec), "suite": args.suite, "checks": checks, "passed": passed, **extra}
    return (EXIT_OK if passed else EXIT_FAIL), out


def cmd_search(args):
    from .search import search_differentials

    if args.ell < 3 or args.ell % 2 == 0:
        raise UsageError(f"ell must be odd and >= 3, got {args.ell}")
    values = parse_range(args.values) if args.values else None
    bases = parse_range(args.bases)
    stream_path = args.stream or (args.out + "l" if args.out and args.out.endswith(".json") else None)
    fh = open(stream_path, "w") if stream_path else None
    try:
        summary = search_differentials(
            args.ell, args.dmax, values, tuple(bases), args.budget, not args.no_zero, args.jobs, fh
        )
    finally:
        if fh:
            fh.close()
    log.info("examined %d of %d, %d survivors", summary.examined, summary.total, len(summary.survivors))
    spec = FieldSpec("cyclotomic", args.ell)
    return EXIT_OK, {"header": _header(spec, with_convention=False), **summary.to_json()}


def cmd_dims(args):
    from .troesch import B_graded_dims, E_graded_dims, divisible_slice

    if args.target == "SE":
        if args.ell < 3 or args.ell % 2 == 0:
            raise UsageError(f"ell must be odd and >= 3, got {args.ell}")
        dims = E_graded_dims(args.d, args.ell).dims
    elif args.target == "B":
        _require_ell3(args)
        dims = B_graded_dims(args.d, args.n)
    else:
        _require_ell3(args)
        if args.d % 3:
            raise UsageError("divisible slice needs 3 | d")
        dims = divisible_slice(args.d, args.n)
    if args.csv:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows([("degree", "dim"), *sorted(dims.items())])
        atomic_write(args.csv, buf.getvalue())
    return EXIT_OK, {
        "target": args.target,
        "d": args.d,
        "n": args.n,
        "ell": args.ell,
        "dims": [[k, v] for k, v in sorted(dims.items())],
        "version": __version__,
    }


def cmd_calibrate(args):
    from .qpoly import calibrate

    _require_ell3(args)
    fspec = _field(args)
    res = calibrate(get_field(fspec))
    return EXIT_OK, {"field": fspec.to_json(), "version": __version__, **res.to_json()}


COMMANDS = {
    "homology": cmd_homology,
    "verify": cmd_verify,
    "search": cmd_search,
    "dims": cmd_dims,
    "calibrate": cmd_calibrate,
}


# -- argument parsing ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the JSON artifact here instead of stdout")
    common.add_argument("--cache", help=f"result cache directory (default: ${CACHE_ENV})")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for independent jobs")
    common.add_argument("--verbose", "-v", action="store_true")
    common.add_argument("--ell", type=int, default=3)
    common.add_argument("--field", default="cyclotomic", help="'cyclotomic' or 'fp:<p>'")

    p = argparse.ArgumentParser(prog="qtroesch", description="Troesch 3-complexes over exact fields")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    h = sub.add_parser("homology", parents=[common], help="homology table of B_d(n)")
    h.add_argument("--d", required=True, help="degree, range '0-9' or list '0,3,6'")
    h.add_argument("--n", default="1", help="number of variables (range allowed)")
    h.add_argument("--model", choices=("tensor", "direct"), default="tensor")
    h.add_argument("--csv", help="also write the homology table as CSV")

    v = sub.add_parser("verify", parents=[common], help="run an identity suite")
    v.add_argument("suite", choices=sorted(SUITES))
    v.add_argument("--n", type=int)
    v.add_argument("--dmax", type=int)
    v.add_argument("--perturb", action="store_true", help="relations: use a deliberately wrong convention")

    s = sub.add_parser("search", parents=[common], help="bounded search for differentials")
    s.add_argument("--dmax", type=int, default=6)
    s.add_argument("--values", help="allowed exponents c_ij (default 0..ell-1)")
    s.add_argument("--bases", default="2,1", help="quantum-integer bases as q-exponents")
    s.add_argument("--budget", type=int)
    s.add_argument("--no-zero", action="store_true", help="do not allow lambda_i = 0")
    s.add_argument("--stream", help="JSON-lines file receiving every candidate")

    d = sub.add_parser("dims", parents=[common], help="graded dimension tables")
    d.add_argument("--target", choices=("B", "SE", "divisible"), required=True)
    d.add_argument("--d", type=int, required=True)
    d.add_argument("--n", type=int, default=1)
    d.add_argument("--csv")

    sub.add_parser("calibrate", parents=[common], help="select the structure-map convention")
    return p


def _validate(args):
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    for name in ("dmax", "budget"):
        val = getattr(args, name, None)
        if val is not None and val < 0:
            raise UsageError(f"--{name} must be non-negative")
    if isinstance(getattr(args, "d", None), int) and args.d < 0:
        raise UsageError("--d must be non-negative")
    if isinstance(getattr(args, "n", None), int) and args.n < 0:
        raise UsageError("--n must be non-negative")
    if args.command == "homology":
        parse_range(args.d)
        parse_range(args.n)


def _cache_params(args) -> dict:
    skip = {"out", "cache", "jobs", "verbose", "csv", "stream"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s", stream=sys.stderr)
    try:
        _validate(args)
        cache = Cache(args.cache or os.environ.get(CACHE_ENV))
        # searches stream their own output and the CSV views are side files: neither is cached
        cacheable = args.command != "search" and not getattr(args, "csv", None)
        key = cache.key(_cache_params(args)) if cacheable else None
        hit = cache.get(key) if key else None
        if hit is not None:
            code, text = hit
        else:
            code, obj = COMMANDS[args.command](args)
            text = dumps(obj)
            if key:
                cache.put(key, code, text)
    except UsageError as exc:
        print(f"qtroesch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NilpotencyError as exc:
        print(f"qtroesch: invariant breach: {exc} (degree {exc.degree})", file=sys.stderr)
        return EXIT_BREACH
    except (DomainError, NoRootError) as exc:
        print(f"qtroesch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except QTroeschError as exc:
        print(f"qtroesch: internal error: {exc}", file=sys.stderr)
        return EXIT_BREACH
    if args.out:
        atomic_write(args.out, text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
