"""``polyauto`` command line.

Exit status: 0 success, 1 validation or verification failure,
2 usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from pathlib import Path

from . import crypto
from .errors import (
    ArityMismatch,
    ExponentOverflow,
    MalformedDocument,
    PolyAutoError,
    PolySyntaxError,
    RingMismatch,
    UnknownVariable,
)
from .families import FamilySpec
from .jacobian import check_keller, check_parametrized_minors
from .oracle import (
    NotPolynomialUpTo,
    back_substitution_inverse,
    default_dmax,
    exact_inverse,
    series_profile,
)
from .parse import MapDocument

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

# errors that mean "the input could not be read", as opposed to "it was read and is invalid"
_PARSE_ERRORS = (PolySyntaxError, UnknownVariable, MalformedDocument, ExponentOverflow,
                 RingMismatch, ArityMismatch)


class UsageError(Exception):
    pass


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _read_bytes(path: str | None) -> bytes:
    if path in (None, "-"):
        return sys.stdin.buffer.read()
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write_text(path: str | None, text: str):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _write_bytes(path: str | None, data: bytes):
    if path in (None, "-"):
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(path).write_bytes(data)


def _load_map(path: str):
    return MapDocument.from_text(_read_text(path)).poly_map


def _fmt_form(form) -> str:
    coeffs = " ".join(str(c) for c in form.coefficients)
    if form.is_full:
        return f"{coeffs} (invariant)"
    return f"{coeffs} (shifted by {form.correction})"


# subcommands


def cmd_gen_map(args) -> int:
    spec = FamilySpec.from_text(_read_text(args.spec))
    pair = spec.build()
    prefix = args.prefix or (Path(args.spec).with_suffix("").as_posix() if args.spec != "-" else "map")
    fwd_path = args.forward or f"{prefix}.forward.map"
    inv_path = args.inverse or f"{prefix}.inverse.map"
    _write_text(fwd_path, MapDocument(pair.forward).to_text())
    _write_text(inv_path, MapDocument(pair.inverse).to_text())
    report = check_keller(pair.forward)
    lines = [
        f"family: {pair.family.value}",
        f"vars: {pair.nvars}",
        f"ring: {pair.ring}",
    ]
    if "case" in pair.info:
        lines.append(f"case: {pair.info['case']}")
    lines += [
        f"deg_forward: {pair.forward.degree()}",
        f"deg_inverse: {pair.inverse.degree()}",
        f"predicted_deg_forward: {pair.predicted_deg_forward}",
        f"predicted_deg_inverse: {'none' if pair.predicted_deg_inverse is None else pair.predicted_deg_inverse}",
        f"deg_inverse_bound: {pair.deg_inverse_bound}",
        f"jacobian_constant: {report.constant_value if report.jacobian_is_constant else 'none'}",
    ]
    lines += [f"invariant_form: {_fmt_form(f)}" for f in pair.invariant_forms]
    lines += [f"forward: {fwd_path}", f"inverse: {inv_path}"]
    print("\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    P = _load_map(args.map)
    if args.lambdas is not None:
        report = check_parametrized_minors(P, [P.ring.coerce(v) for v in args.lambdas])
    else:
        report = check_keller(P)
    sys.stdout.write(report.to_text())
    if args.strict and not report.ok:
        return EXIT_FAIL
    return EXIT_OK


def cmd_invert(args) -> int:
    P = _load_map(args.map)
    Q = None if args.oracle else back_substitution_inverse(P)
    method = "back-substitution"
    if Q is None:
        method = "oracle"
        Q = exact_inverse(P, args.dmax)
    if isinstance(Q, NotPolynomialUpTo):
        print(f"result: {Q}")
        return EXIT_FAIL
    _write_text(args.out, MapDocument(Q).to_text())
    if args.out not in (None, "-"):
        print(f"method: {method}\ninverse: {args.out}")
    return EXIT_OK


def cmd_compose(args) -> int:
    A, B = _load_map(args.outer), _load_map(args.inner)
    _write_text(args.out, MapDocument(A.compose(B)).to_text())
    return EXIT_OK


def cmd_degree(args) -> int:
    P = _load_map(args.map)
    dmax = args.dmax or default_dmax(P)
    Q = exact_inverse(P, dmax)
    d = P.degree()
    bound = max(1, d) ** (P.nvars - 1)
    lines = [f"deg_forward: {d}", f"degree_bound: {bound}", f"dmax: {dmax}"]
    if isinstance(Q, NotPolynomialUpTo):
        lines.append(f"deg_inverse: {Q}")
    else:
        lines += [f"deg_inverse: {Q.degree()}",
                  f"within_bound: {'true' if Q.degree() <= bound else 'false'}"]
    if args.plot:
        from .plotting import series_profile_figure

        profile = series_profile(P, dmax)
        png = Path(args.plot)
        table = png.with_suffix(".csv")
        with table.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["degree", "terms"])
            w.writerows(profile)
        series_profile_figure(profile, png, title=Path(args.map).name)
        lines += [f"plot: {png}", f"table: {table}"]
    print("\n".join(lines))
    return EXIT_OK if not isinstance(Q, NotPolynomialUpTo) else EXIT_FAIL


def cmd_report(args) -> int:
    from .plotting import degree_law_figure
    from .report import REPORT_FIELDS, SUMMARY_FIELDS, degree_report, summarize

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = degree_report(args.per_family, seed=args.seed, budget=args.budget, oracle=not args.no_oracle)
    table = out_dir / "degree_law.csv"
    with table.open("w", newline="") as fh:
        w = csv.DictWriter(fh, REPORT_FIELDS)
        w.writeheader()
        w.writerows(rows)
    figure = degree_law_figure(rows, out_dir / "degree_law.png")
    summary = summarize(rows)
    buf = io.StringIO()
    w = csv.DictWriter(buf, SUMMARY_FIELDS, lineterminator="\n")
    w.writeheader()
    w.writerows(summary)
    sys.stdout.write(buf.getvalue())
    print(f"# table: {table}\n# figure: {figure}", file=sys.stderr)
    ok = all(r["failures"] == 0 for r in summary)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_keygen(args) -> int:
    key = crypto.keygen(args.variant, args.n, args.modulus, args.seed, args.max_degree, toy=args.toy)
    _write_text(args.out or args.key, key.to_text())
    return EXIT_OK


def _load_key(path):
    if path is None:
        raise UsageError("--key is required")
    return crypto.CipherKey.from_text(_read_text(path))


def cmd_encrypt(args) -> int:
    key = _load_key(args.key)
    _write_bytes(args.out, crypto.encrypt_bytes(key, _read_bytes(args.inp)))
    return EXIT_OK


def cmd_decrypt(args) -> int:
    key = _load_key(args.key)
    _write_bytes(args.out, crypto.decrypt_bytes(key, _read_bytes(args.inp)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polyauto", description="Polynomial automorphisms: build, verify, invert.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-map", help="build a family member and its closed-form inverse")
    p.add_argument("spec", help="family spec document ('-' for stdin)")
    p.add_argument("--prefix", help="output prefix (default: spec path without suffix)")
    p.add_argument("--forward", help="forward map file")
    p.add_argument("--inverse", help="inverse map file")
    p.set_defaults(func=cmd_gen_map)

    p = sub.add_parser("verify", help="Jacobian determinant, minor sums and minor equations")
    p.add_argument("map")
    p.add_argument("--lambdas", nargs="+", metavar="L", help="check all 2^n - 1 minor equations")
    p.add_argument("--strict", action="store_true", help="exit 1 when the report shows a failure")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("invert", help="exact polynomial inverse")
    p.add_argument("map")
    p.add_argument("--oracle", action="store_true", help="always use the formal-inverse iteration")
    p.add_argument("--dmax", type=int, help="largest inverse degree to try (default deg^(n-1) + 1)")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("compose", help="outer o inner")
    p.add_argument("outer")
    p.add_argument("inner")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("degree", help="measure the inverse degree with the oracle")
    p.add_argument("map")
    p.add_argument("--dmax", type=int)
    p.add_argument("--plot", metavar="PNG", help="write the inverse-series profile (PNG + CSV)")
    p.set_defaults(func=cmd_degree)

    p = sub.add_parser("report", help="degree laws over a random corpus (CSV + figure)")
    p.add_argument("--per-family", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=None, help="composition cost cap (default: corpus default)")
    p.add_argument("--out-dir", default="report")
    p.add_argument("--no-oracle", action="store_true", help="skip the oracle degree measurement")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("crypto", help="toy block cipher with automorphism keys")
    csub = p.add_subparsers(dest="action", required=True)
    for name, func in (("keygen", cmd_keygen), ("encrypt", cmd_encrypt), ("decrypt", cmd_decrypt)):
        q = csub.add_parser(name)
        q.add_argument("--key", help="key file")
        q.add_argument("--in", dest="inp", help="input file (default stdin)")
        q.add_argument("--out", help="output file (default stdout)")
        if name == "keygen":
            q.add_argument("--seed", type=int, default=0)
            q.add_argument("--variant", default="full-invariance", choices=[v.value for v in crypto.Variant])
            q.add_argument("--n", type=int, default=4)
            q.add_argument("--modulus", type=int, default=65537)
            q.add_argument("--max-degree", type=int, default=3)
            q.add_argument("--toy", action="store_true", help="allow moduli below 257 (no byte codec)")
        q.set_defaults(func=func)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "budget", None) is None and args.command == "report":
        from .corpus import DEFAULT_BUDGET

        args.budget = DEFAULT_BUDGET
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"polyauto: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _PARSE_ERRORS as exc:
        print(f"polyauto: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PolyAutoError as exc:
        print(f"polyauto: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
