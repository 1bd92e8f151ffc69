"""Command-line interface.

Examples:
  npset member -p 3 -n 13 --format json
  npset minimal -p 2 --max 5000 --jobs 4 --cache sweep2.jsonl
  npset predict -p 2 -n 85
  npset count -p 2 -k 4 -d 3 -r 2
  npset density n2-lower
  npset relsize -p 2 -n 121369

Exit codes: 0 computed (whatever the verdict), 1 resource or oracle
refusal, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from fractions import Fraction

from . import numth
from .bounds import (eq_lower_value, eq_weak_check, lemma_system_check, predict,
                     sequence_bound_holds, sign_sqrt_sum)
from .density import (DEFAULT_CAP, DEFAULT_PRUNE_CAP, delta_N2_lower, delta_S,
                      delta_trivial)
from .gfq import (DEFAULT_CHARSUM_BOUND, OracleBoundError, count_consecutive_dpowers,
                  count_system_solutions, character_sum_count, enum_bound, make_character,
                  make_field, weil_sweep)
from .members import METHODS, CacheVersionError, VerdictCache, is_member, iter_minimal_elements
from .numth import FactorizationError

EXIT_OK, EXIT_REFUSED, EXIT_USAGE = 0, 1, 2
JSON_SAFE = 2**53


class UsageError(ValueError):
    pass


# -- rendering -----------------------------------------------------------------


def jsonable(obj):
    """Make obj strict-JSON safe: big ints and Fractions become strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) >= JSON_SAFE else obj
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return str(obj)


def flatten(rec: dict, prefix: str = "") -> dict:
    out = {}
    for key, val in rec.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            out.update(flatten(val, name + "."))
        elif isinstance(val, (list, tuple)) and val and isinstance(val[0], dict):
            for item in val:
                tag = item.get("form", str(len(out)))
                out.update(flatten(item, f"{name}.{tag}."))
        else:
            out[name] = val
    return out


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.10g}"
    if isinstance(v, (list, tuple)):
        return " ".join(_cell(x) for x in v)
    return str(v)


def emit_record(rec: dict, fmt: str, out=None) -> None:
    """One report: JSON document, key/value table, or two-line CSV."""
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(jsonable(rec), allow_nan=False) + "\n")
        return
    flat = flatten(rec)
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(flat.keys())
        w.writerow(_cell(v) for v in flat.values())
        return
    width = max(len(k) for k in flat)
    for k, v in flat.items():
        out.write(f"{k:<{width}}  {_cell(v)}\n")


class RowStream:
    """Streams rows for table/csv; collects them for one JSON document."""

    def __init__(self, fmt: str, fields: list[str], header: dict, out=None):
        out = out or sys.stdout
        self.fmt, self.fields, self.header, self.out = fmt, fields, header, out
        self.rows: list[dict] = []
        self._writer = None
        if fmt == "csv":
            self._writer = csv.writer(out, lineterminator="\n")
            self._writer.writerow(fields)
        elif fmt == "table":
            self.out.write("  ".join(f"{f:>12}" for f in fields) + "\n")

    def add(self, row: dict) -> None:
        if self.fmt == "json":
            self.rows.append(row)
        elif self.fmt == "csv":
            self._writer.writerow(_cell(row[f]) for f in self.fields)
            self.out.flush()
        else:
            self.out.write("  ".join(f"{_cell(row[f]):>12}" for f in self.fields) + "\n")
            self.out.flush()

    def close(self) -> None:
        if self.fmt == "json":
            doc = dict(self.header, rows=self.rows)
            self.out.write(json.dumps(jsonable(doc), allow_nan=False) + "\n")


# -- validation ------------------------------------------------------------------


def _prime(p: int) -> int:
    if p is None:
        raise UsageError("-p is required")
    if p < 2 or not numth.is_probable_prime(p):
        raise UsageError(f"-p {p} is not a prime")
    return p


def _positive(name: str, v, minimum: int = 1) -> int:
    if v is None:
        raise UsageError(f"{name} is required")
    if v < minimum:
        raise UsageError(f"{name} must be >= {minimum}")
    return v


def _coprime(p: int, n: int) -> None:
    if math.gcd(p, n) != 1:
        raise UsageError(f"gcd({n}, {p}) != 1")


# -- subcommands -----------------------------------------------------------------


def cmd_member(args) -> int:
    p = _prime(args.p)
    n = _positive("-n", args.n)
    v = is_member(p, n, args.method)
    emit_record(v.to_dict(), args.format)
    return EXIT_OK


def cmd_minimal(args) -> int:
    p = _prime(args.p)
    bound = _positive("--max", args.max, 0)
    jobs = _positive("--jobs", args.jobs)
    cache = VerdictCache(args.cache) if args.cache else None
    fields = ["n", "form", "classification", "witness_count"]
    header = {"p": p, "max": bound, "seed": args.seed}
    stream = RowStream(args.format, fields, header)
    if bound >= 2:
        for row in iter_minimal_elements(p, bound, jobs, cache):
            stream.add({"n": row.n, "form": row.form, "classification": row.classification,
                        "witness_count": row.witness_count})
    stream.close()
    return EXIT_OK


def cmd_predict(args) -> int:
    p = _prime(args.p)
    q = None
    if args.n is not None:
        n = _positive("-n", args.n)
        _coprime(p, n)
        if args.k is not None:
            q = p ** _positive("-k", args.k)
            if (q - 1) % n:
                raise UsageError(f"n = {n} does not divide {p}^{args.k} - 1")
    elif args.k is not None and args.d is not None:
        k, d = _positive("-k", args.k), _positive("-d", args.d)
        q = p**k
        if (q - 1) % d:
            raise UsageError(f"d = {d} does not divide {p}^{k} - 1")
        n = (q - 1) // d
    else:
        raise UsageError("predict needs -n, or -k with -d")
    pred = predict(p, n, q).to_dict()
    emit_record(pred, args.format)
    return EXIT_OK


def count_report(p: int, k: int, d: int, r: int, seed: int = 0) -> dict:
    """Counts, identities and every bound check at (q, d, r)."""
    q = p**k
    if (q - 1) % d:
        raise UsageError(f"d = {d} does not divide q - 1 = {q - 1}")
    if not 1 <= r <= p:
        raise UsageError(f"r = {r} must lie in 1..{p}")
    if q > enum_bound():
        raise OracleBoundError(f"q = {q} exceeds the enumeration bound {enum_bound()}")
    spec = make_field(p, k)
    m, m0 = count_consecutive_dpowers(spec, d, r)
    n_sys = count_system_solutions(spec, d, r)
    ident = d**r * m + d ** (r - 1) * m0
    rep = {"p": p, "k": k, "q": q, "d": d, "r": r, "modulus": str(spec.modulus),
           "M": m, "M0": m0, "N": n_sys, "N_identity": ident, "identity_holds": ident == n_sys}
    bounds = [sequence_bound_holds(q, d, r, m, m0)]
    if r >= 2:
        bounds.append(lemma_system_check(spec, d, r, n_sys))
        bounds.append(eq_weak_check(spec, d, r, n_sys))
    rep["bounds"] = [{"form": b.form, "lhs": b.lhs_int, "rhs_coeff": b.rhs_coeff,
                      "holds": b.verdict, "equality": b.equality} for b in bounds]
    if r == p:
        low = eq_lower_value(p, q, d, m0)
        # M >= rational + coeff*sqrt(q), decided exactly
        diff = m - low.rational
        den = diff.denominator * low.sqrt_coeff.denominator
        holds = sign_sqrt_sum(int(diff * den), int(-low.sqrt_coeff * den), q) >= 0
        rep["eq_lower"] = {"value": low.approx, "positive": low.positive, "holds": holds}
    if q <= DEFAULT_CHARSUM_BOUND:
        char = make_character(spec, d)
        cs = character_sum_count(char, r)
        rounded = round(cs.real)
        rep["charsum"] = {"N": rounded, "residual": abs(cs - rounded), "agrees": rounded == n_sys}
        sweep = weil_sweep(char, r, seed=seed)
        rep["weil"] = {"tuples_checked": sweep.tuples_checked, "total_tuples": sweep.total_tuples,
                       "violations": sweep.violations, "exhaustive": sweep.exhaustive}
    else:
        rep["charsum"] = None
        rep["weil"] = None
    rep["all_hold"] = (rep["identity_holds"] and all(b.verdict for b in bounds)
                       and rep.get("eq_lower", {}).get("holds", True)
                       and (rep["charsum"] is None or rep["charsum"]["agrees"])
                       and (rep["weil"] is None or rep["weil"]["violations"] == 0))
    return rep


def cmd_count(args) -> int:
    p = _prime(args.p)
    rep = count_report(p, _positive("-k", args.k), _positive("-d", args.d),
                       _positive("-r", args.r), args.seed)
    emit_record(rep, args.format)
    return EXIT_OK


def cmd_density(args) -> int:
    if args.which == "tp":
        p = _prime(args.p)
        iv = delta_trivial(p, _positive("--terms", args.terms, 2))
        head = {"quantity": "delta_trivial", "p": p, "terms": args.terms}
    elif args.which == "s":
        iv = delta_S(_positive("--cap", args.cap, 3), _positive("--prune-cap", args.prune_cap))
        head = {"quantity": "delta_S", "cap": args.cap, "prune_cap": args.prune_cap}
    else:
        iv = delta_N2_lower(_positive("--cap", args.cap, 3), _positive("--prune-cap", args.prune_cap))
        head = {"quantity": "delta_N2_lower", "cap": args.cap, "prune_cap": args.prune_cap}
    emit_record(dict(head, **iv.to_json()), args.format)
    return EXIT_OK


def cmd_relsize(args) -> int:
    p = _prime(args.p)
    n = _positive("-n", args.n, 2)
    _coprime(p, n)
    rs = numth.relative_size(p, n)
    emit_record({"p": p, "n": n, "k": rs.k, "p_k_minus_1": f"{p}^{rs.k}-1",
                 "value": rs.value}, args.format)
    return EXIT_OK


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "json", "csv"), default="table")
    common.add_argument("--seed", type=int, default=numth.DEFAULT_SEED,
                        help="seed for randomized factoring and sampling")
    common.add_argument("--oracle-bound", type=int, default=None,
                        help="largest q for brute-force field enumeration")

    ap = argparse.ArgumentParser(prog="npset", description=__doc__.splitlines()[0],
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("member", parents=[common], help="decide n in N_p")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--method", choices=METHODS, default="auto")
    sp.set_defaults(func=cmd_member)

    sp = sub.add_parser("minimal", parents=[common], help="minimal elements up to --max")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("--max", type=int, required=True)
    sp.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    sp.add_argument("--cache", "--resume", dest="cache", default=None, metavar="PATH",
                    help="JSON-lines verdict cache; reruns resume from it")
    sp.set_defaults(func=cmd_minimal)

    sp = sub.add_parser("predict", parents=[common], help="sufficient conditions for n in N_p")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-n", type=int)
    sp.add_argument("-k", type=int)
    sp.add_argument("-d", type=int)
    sp.set_defaults(func=cmd_predict)

    sp = sub.add_parser("count", parents=[common], help="power-residue counts and bound checks")
    for flag in ("-p", "-k", "-d", "-r"):
        sp.add_argument(flag, type=int, required=True)
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("density", parents=[common], help="density intervals")
    sp.add_argument("which", choices=("tp", "s", "n2-lower"))
    sp.add_argument("-p", type=int, default=2)
    sp.add_argument("--terms", type=int, default=31)
    sp.add_argument("--cap", type=int, default=DEFAULT_CAP)
    sp.add_argument("--prune-cap", type=int, default=DEFAULT_PRUNE_CAP)
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("relsize", parents=[common], help="relative size log n / log(p^k - 1)")
    sp.add_argument("-p", type=int, required=True)
    sp.add_argument("-n", type=int, required=True)
    sp.set_defaults(func=cmd_relsize)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    # both overrides last for this call only; the env var also reaches sweep workers
    saved_seed, saved_bound = numth.DEFAULT_SEED, os.environ.get("NPSET_ORACLE_BOUND")
    numth.DEFAULT_SEED = args.seed
    if args.oracle_bound is not None:
        os.environ["NPSET_ORACLE_BOUND"] = str(args.oracle_bound)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"npset {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OracleBoundError, CacheVersionError, FactorizationError) as exc:
        print(f"npset {args.command}: refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except ValueError as exc:
        print(f"npset {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KeyboardInterrupt:
        print(f"npset {args.command}: interrupted", file=sys.stderr)
        return EXIT_REFUSED
    finally:
        numth.DEFAULT_SEED = saved_seed
        if saved_bound is None:
            os.environ.pop("NPSET_ORACLE_BOUND", None)
        else:
            os.environ["NPSET_ORACLE_BOUND"] = saved_bound


if __name__ == "__main__":
    sys.exit(main())
