"""Command-line interface.

Exit codes: 0 ok, 1 verification failure, 2 parameter error,
3 capacity limit, 4 I/O error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import _kernels
from .catalog import CatalogEntry, cw_entry, ds_entry, rds_entry, read_catalog, write_catalog
from .cwkit import cw_from_rds, is_proper, kronecker, singer_cw, verify_cw
from .errors import CatalogIOError, ParameterError, RdsKitError, VerificationError
from .feasibility import feasibility_report
from .fields import singer_rds
from .groupring import DesignParams, RdsParams
from .multipliers import certified_rds_multipliers, first_multiplier_primes, \
    multiplier_group_bruteforce
from .orbitsearch import classify_equivalence, lifts_up_to_translation, search_lifts
from .report import DESK_MAX_M, build_report, construct_family, identify_family, verdict_lines


def _kv(items: list[str]) -> dict[str, int]:
    out = {}
    for item in items:
        key, sep, val = item.partition("=")
        if not sep:
            raise ParameterError(f"expected key=value, got {item!r}")
        try:
            out[key] = int(val)
        except ValueError:
            raise ParameterError(f"{key} must be an integer, got {val!r}") from None
    return out


def _emit(entries: list[CatalogEntry], out: str | None) -> None:
    if out:
        write_catalog(out, entries)
    else:
        for e in entries:
            print(e.to_json())


def _entries(path: str, kind: str) -> list[CatalogEntry]:
    got = [e for e in read_catalog(path) if e.kind == kind]
    if not got:
        raise ParameterError(f"{path} holds no {kind} entry")
    return got


def _design(path: str) -> CatalogEntry:
    return _entries(path, "ds")[0]


# ---------------------------------------------------------------------------
# verbs
# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    bad = 0
    for path in args.files:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise CatalogIOError(f"cannot read {path}: {exc}") from None
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            entry = CatalogEntry.from_json(line)
            try:
                ok = entry.check()
            except RdsKitError:
                ok = False
            label = f"{path}:{lineno} {entry.kind} {dict(entry.params)}"
            if ok:
                print(f"{label} ok")
            else:
                bad += 1
                print(f"{label} FAILED at residue {entry.failing_residue()}")
    return 1 if bad else 0


def cmd_construct(args) -> int:
    kw = _kv(args.params)
    when = args.timestamp
    fam = args.family.replace("-", "_")
    if fam == "singer_rds":
        R, p = singer_rds(kw["q"], kw["d"], kw.get("n", kw["q"] - 1))
        entry = rds_entry(R, p, f"constructed:singer_rds q={kw['q']} d={kw['d']}", when)
    elif fam == "singer_cw":
        W = singer_cw(kw["q"], kw["d"], kw.get("n", 1))
        entry = cw_entry(W, f"constructed:singer_cw q={kw['q']} d={kw['d']} n={kw.get('n', 1)}",
                         when)
    else:
        D, p = construct_family(fam, **kw)
        detail = " ".join(f"{k}={v}" for k, v in sorted(kw.items()))
        entry = ds_entry(D, p, f"constructed:{fam} {detail}", when)
    _emit([entry], args.out)
    return 0


def cmd_feasibility(args) -> int:
    ds = DesignParams(args.v, args.k, args.lam)
    D = None
    if args.design:
        e = _design(args.design)
        if e.design_params() != ds:
            raise ParameterError(f"{args.design} holds {e.design_params()}, not {ds}")
        D = e.element()
    else:
        fam = identify_family(ds)
        if fam is not None:
            D, _ = construct_family(fam[0], **fam[1])
    verdicts = feasibility_report(ds, D=D, require_k2=not args.literal_multipliers)
    if args.csv:
        print("n,status,theorem,fired")
        for v in verdicts:
            print(f"{v.params.n},{v.status},{v.theorem or ''},{' '.join(v.fired)}")
    else:
        base = "multipliers of the base design" if D is not None else "t = 1 only"
        print(f"# {ds}: {base}")
        for line in verdict_lines(verdicts):
            print(line)
    return 0


def cmd_multipliers(args) -> int:
    e = _design(args.file)
    ds, D = e.design_params(), e.element()
    M = multiplier_group_bruteforce(D, ds)
    print(f"design {ds}")
    print(f"multiplier group: {list(M.elements)}")
    print(f"first multiplier primes: {first_multiplier_primes(ds)}")
    if args.n:
        cert = certified_rds_multipliers(ds, args.n, M, require_k2=not args.literal_multipliers)
        print(f"certified lift multipliers mod {ds.v * args.n}: {cert}")
    return 0


def cmd_search(args) -> int:
    e = _design(args.file)
    ds, D = e.design_params(), e.element()
    p = RdsParams.lifting(ds, args.n)
    if args.t is not None:
        found = search_lifts(D, ds, args.n, args.t, normalize=args.normalize,
                             threads=args.threads, checkpoint=args.job)
        job_id = Path(args.job).stem if args.job else f"m{p.m}-n{p.n}-t{args.t}"
    else:
        if args.job:
            raise ParameterError("--job needs an explicit --multiplier")
        found = lifts_up_to_translation(D, ds, args.n, threads=args.threads)
        job_id = f"m{p.m}-n{p.n}-translates"
    entries = [rds_entry(R, p, f"searched:{job_id}", args.timestamp) for R in found]
    _emit(entries, args.out)
    classes = len(classify_equivalence(found, p.order)) if found else 0
    print(f"# {len(found)} lifting(s) of {ds} to {p}, {classes} inequivalent",
          file=sys.stderr)
    return 0


def cmd_cw_verify(args) -> int:
    bad = 0
    for e in read_catalog_unchecked(args.file):
        if e.kind != "cw":
            continue
        W = e.signed()
        if verify_cw(W) and W.weight == e.param_dict["k"]:
            print(f"{W} ok {'proper' if is_proper(W) else 'improper'}")
        else:
            bad += 1
            print(f"{W} FAILED at residue {e.failing_residue()}")
    return 1 if bad else 0


def read_catalog_unchecked(path) -> list[CatalogEntry]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CatalogIOError(f"cannot read {path}: {exc}") from None
    return [CatalogEntry.from_json(line) for line in text.splitlines() if line.strip()]


def cmd_cw_kronecker(args) -> int:
    A = _entries(args.first, "cw")[0].signed()
    B = _entries(args.second, "cw")[0].signed()
    W = kronecker(A, B)
    _emit([cw_entry(W, f"constructed:kronecker {A} x {B}", args.timestamp)], args.out)
    return 0


def cmd_cw_from_rds(args) -> int:
    out = []
    for e in _entries(args.file, "rds"):
        W = cw_from_rds(e.element(), e.rds_params())
        out.append(cw_entry(W, f"constructed:from_rds {e.rds_params()}", args.timestamp))
    _emit(out, args.out)
    return 0


def cmd_report(args) -> int:
    tables = tuple(int(t) for t in args.tables.split(","))
    if any(t not in (2, 3, 4, 5, 6, 7) for t in tables):
        raise ParameterError("tables are chosen from 2..7")
    rep = build_report(tables, max_m=args.max_m, threads=args.threads)
    sys.stdout.write(rep.text())
    if args.csv:
        try:
            Path(args.csv).write_text(rep.csv(), encoding="utf-8")
        except OSError as exc:
            raise CatalogIOError(f"cannot write {args.csv}: {exc}") from None
    if args.strict and rep.mismatches:
        raise VerificationError(f"{len(rep.mismatches)} row(s) differ from the expected rows")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    common.add_argument("--backend", choices=("numba", "numpy"), default=argparse.SUPPRESS,
                        help="kernel backend (default: numba when available)")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS,
                        help="search parallelism (default 1)")
    common.add_argument("--timestamp", default=argparse.SUPPRESS,
                        help="verified_at value for emitted entries (default: now, UTC)")
    ap = argparse.ArgumentParser(prog="rdskit", parents=[common], allow_abbrev=False,
                                 description="Relative difference sets and circulant "
                                             "weighing matrices.")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("verify", parents=[common],
                       help="re-verify every entry of exchange files")
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("construct", parents=[common],
                       help="build a design from a named family")
    p.add_argument("family", help="paley, complement-paley, tpp, complement-tpp, singer, "
                                  "complement-singer, singer-rds, singer-cw")
    p.add_argument("params", nargs="*", help="key=value, e.g. q=2 d=3")
    p.add_argument("--out")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("feasibility", parents=[common],
                       help="nonexistence checks for every n dividing lambda")
    p.add_argument("v", type=int)
    p.add_argument("k", type=int)
    p.add_argument("lam", type=int)
    p.add_argument("--design", help="exchange file whose first ds entry supplies multipliers")
    p.add_argument("--literal-multipliers", action="store_true",
                   help="lift multipliers without the k2 > lambda side condition (unsound)")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_feasibility)

    p = sub.add_parser("multipliers", parents=[common],
                       help="multiplier group of a difference set")
    p.add_argument("file")
    p.add_argument("--n", type=int, help="also list multipliers certified for lifts")
    p.add_argument("--literal-multipliers", action="store_true")
    p.set_defaults(func=cmd_multipliers)

    p = sub.add_parser("search-lifts", parents=[common],
                       help="orbit search for liftings of a difference set")
    p.add_argument("file")
    p.add_argument("n", type=int)
    p.add_argument("-t", "--multiplier", type=int, dest="t",
                   help="search lifts fixed by this multiplier")
    p.add_argument("--normalize", action="store_true",
                   help="keep one profile per translation class")
    p.add_argument("--job", help="resumable job file (needs --multiplier)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("cw-verify", parents=[common],
                       help="verify weighing matrices and report properness")
    p.add_argument("file")
    p.set_defaults(func=cmd_cw_verify)

    p = sub.add_parser("cw-kronecker", parents=[common],
                       help="product of two proper CWs of coprime order")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--out")
    p.set_defaults(func=cmd_cw_kronecker)

    p = sub.add_parser("cw-from-rds", parents=[common],
                       help="CW(mn/2, k) from an RDS with n = 2 mod 4")
    p.add_argument("file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_cw_from_rds)

    p = sub.add_parser("report", parents=[common],
                       help="reproduce the tables and cross-check them")
    p.add_argument("--tables", default="2,3,4,5,6,7")
    p.add_argument("--csv", help="also write the CSV form here")
    p.add_argument("--max-m", type=int, default=DESK_MAX_M,
                   help="largest m searched for lift counts")
    p.add_argument("--strict", action="store_true",
                   help="exit 1 when any row differs from the expected rows")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    # defaults are filled here: set_defaults would also reset the shared
    # parent actions and let a subparser overwrite a flag given before the verb
    for name, value in (("backend", None), ("threads", 1), ("timestamp", None)):
        if not hasattr(args, name):
            setattr(args, name, value)
    if args.threads < 1:
        print("rdskit: --threads must be at least 1", file=sys.stderr)
        return 2
    if args.backend:
        _kernels.use_backend(args.backend)
    try:
        return args.func(args)
    except RdsKitError as exc:
        print(f"rdskit: {exc}", file=sys.stderr)
        return exc.exit_code
    except KeyError as exc:
        print(f"rdskit: missing parameter {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"rdskit: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
