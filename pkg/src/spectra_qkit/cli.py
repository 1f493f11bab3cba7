"""Command-line front end.

    spectra-qkit eval zgamma --s 2 --tau 0.25+1.0i
    spectra-qkit expand partition --order 10 --format csv
    spectra-qkit verify ftriple --m-base 0
    spectra-qkit hilbert --betti 1,0,22,0,1 --order-q 3
    spectra-qkit zeros --tau 0.3+1.1i --box -3,1,-7,7

Exit status: 0 on success (all hard checks pass), 1 when a hard check fails,
2 on usage or domain errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys

from .errors import QkitError
from .fock import (CharacterSpec, WreathSpec, fock_graded_dim, ktheory_euler_series,
                   point_case_series, super_character, super_supertrace)
from .hilbert import BettiVector, goettsche_series
from .identities import SUITES, hard_failures, run_suite, verify_zeros
from .params import ETA_CONVENTIONS, ModularParameter, TruncationPolicy, eta_label, eta_value
from .qseries import eta, eta_series, partition_gf, weber_f, weber_f_series
from .report import IdentityReport, jsonable
from .series import FormalSeries
from .spectral import RATIO_VARIANTS, R_READINGS, ruelle, z_gamma_product, z_ratio

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

EVAL_FUNCTIONS = ("zgamma", "ruelle", "zratio", "eta", "f1", "f2", "f3")
EXPAND_SERIES = ("partition", "eta", "f1", "f2", "f3", "goettsche", "character", "supertrace", "ktheory",
                 "fock", "point")
FORMATS = ("json", "csv", "plain")
# flags whose values may legitimately start with '-'
_VALUE_FLAGS = ("--tau", "--s", "--box", "--betti", "--euler")

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_REAL = re.compile(rf"^[+-]?{_NUM}$")
_IMAG = re.compile(rf"^(?P<im>[+-]?(?:{_NUM})?)i$")
_BOTH = re.compile(rf"^(?P<re>[+-]?{_NUM})(?P<im>[+-](?:{_NUM})?)i$")


def parse_complex(text: str) -> complex:
    """Strict ``a+bi`` parser: ``2``, ``-i``, ``1.5i``, ``0.25+1.0i``, ``1e-3-2i``; nothing else."""
    text = text.strip()
    if _REAL.match(text):
        return complex(float(text), 0.0)
    m = _IMAG.match(text)
    if m:
        return complex(0.0, _imag_part(m["im"]))
    m = _BOTH.match(text)
    if m:
        return complex(float(m["re"]), _imag_part(m["im"]))
    raise argparse.ArgumentTypeError(f"not a complex number of the form a+bi: {text!r}")


def _imag_part(text: str) -> float:
    if text in ("", "+"):
        return 1.0
    if text == "-":
        return -1.0
    return float(text)


def _int_list(count: int):
    def parse(text: str) -> list[int]:
        try:
            values = [int(p) for p in text.split(",")]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected {count} comma-separated integers, got {text!r}") from None
        if len(values) != count:
            raise argparse.ArgumentTypeError(f"expected {count} comma-separated integers, got {text!r}")
        return values
    return parse


def _box(text: str) -> tuple[float, float, float, float]:
    try:
        values = tuple(float(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"box must be re_lo,re_hi,im_lo,im_hi, got {text!r}") from None
    if len(values) != 4:
        raise argparse.ArgumentTypeError(f"box must be re_lo,re_hi,im_lo,im_hi, got {text!r}")
    return values


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--out", metavar="PATH", help="write to PATH instead of standard output")
    common.add_argument("--eps", type=_positive_float, help="target tolerance (default 1e-15 or $SPECTRA_QKIT_EPS)")
    common.add_argument("--K", type=int, help="largest product cutoff")
    common.add_argument("--N", type=int, help="largest number of series terms")

    conv = argparse.ArgumentParser(add_help=False)
    conv.add_argument("--m-base", type=int, choices=(0, 1))
    conv.add_argument("--eta-sign", choices=ETA_CONVENTIONS)
    conv.add_argument("--r-reading", choices=R_READINGS)

    parser = argparse.ArgumentParser(prog="spectra-qkit", description="Spectral functions and q-series identities.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common, conv], help="evaluate a function at a point")
    p.add_argument("function", choices=EVAL_FUNCTIONS)
    p.add_argument("--tau", type=parse_complex, required=True)
    p.add_argument("--s", type=parse_complex)
    p.add_argument("--variant", choices=RATIO_VARIANTS, default="plain")

    p = sub.add_parser("expand", parents=[common, conv], help="exact series coefficients")
    p.add_argument("series", choices=EXPAND_SERIES)
    _expand_args(p)

    p = sub.add_parser("hilbert", parents=[common], help="Poincare polynomials of Hilbert schemes (expand goettsche)")
    p.add_argument("--betti", type=_int_list(5), required=True)
    p.add_argument("--order-q", type=int, default=5)
    p.add_argument("--order-r", type=int)

    p = sub.add_parser("verify", parents=[common, conv], help="run an identity suite")
    p.add_argument("suite", choices=("all",) + SUITES)
    p.add_argument("--tau", type=parse_complex, action="append",
                   help="parameter point; may be repeated (default: the suite's standard grid)")
    p.add_argument("--box", type=_box, help="zeros suite: re_lo,re_hi,im_lo,im_hi")

    p = sub.add_parser("zeros", parents=[common], help="predicted zeros in a box and their residuals")
    p.add_argument("--tau", type=parse_complex, required=True)
    p.add_argument("--box", type=_box, required=True)
    return parser


def _expand_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--order", type=int, default=10)
    p.add_argument("--betti", type=_int_list(5))
    p.add_argument("--order-q", type=int)
    p.add_argument("--order-r", type=int)
    p.add_argument("--dims", type=_int_list(2), help="dim_even,dim_odd (or dim K0,dim K1)")
    p.add_argument("--euler", type=int, help="orbifold Euler number")
    p.add_argument("--classes", type=int, help="number of conjugacy classes")


def _attach_equals(argv: list[str]) -> list[str]:
    # '--box -3,1,-7,7' would otherwise be read as an unknown option
    out, i = [], 0
    while i < len(argv):
        arg = argv[i]
        if arg in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{arg}={argv[i + 1]}")
            i += 2
        else:
            out.append(arg)
            i += 1
    return out


def _policy(args) -> TruncationPolicy:
    overrides = {}
    if args.eps is not None:
        overrides["tol"] = args.eps
    if args.K is not None:
        overrides["cutoff"] = args.K
    if args.N is not None:
        overrides["max_terms"] = args.N
    return TruncationPolicy.default(**overrides)


def _tau(value: complex, args) -> ModularParameter:
    sign = -1 if getattr(args, "eta_sign", None) == "-" else 1
    return ModularParameter.from_complex(value, sign)


# -- rendering -----------------------------------------------------------------

def _fmt_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}i"


def _csv(rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerows(rows)
    return buf.getvalue()


def _render_value(record: dict, fmt: str) -> str:
    value, tail = record["value"], record["tail"]
    if fmt == "json":
        return json.dumps(jsonable(record), indent=2) + "\n"
    if fmt == "csv":
        return _csv([["function", "re", "im", "tail"],
                     [record["function"], repr(value.real), repr(value.imag), repr(tail)]])
    conv = "".join(f"; {k}={v}" for k, v in record["conventions"].items())
    return f"{record['function']} = {_fmt_complex(value)}  (tail <= {tail:.3g}{conv})\n"


def _render_series(name: str, series: FormalSeries, fmt: str) -> str:
    if fmt == "json":
        return json.dumps({"series": name, **series.to_json()}, indent=2) + "\n"
    rows = [[str(series.offset + e), str(c)] for e, c in series.terms()]
    if fmt == "csv":
        return _csv([["exponent", "coefficient"]] + rows)
    lines = [f"{name}: offset {series.offset}, known below q^{series.offset + series.order}"]
    lines += [f"  q^{e}: {c}" for e, c in rows]
    return "\n".join(lines) + "\n"


def _render_reports(reports: list[IdentityReport], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([r.to_dict() for r in reports], indent=2) + "\n"
    if fmt == "csv":
        rows = [["identity", "kind", "verdict", "residual", "tail_budget", "tolerance", "params", "conventions"]]
        for r in reports:
            rows.append([r.identity, r.kind, r.verdict, repr(r.residual), repr(r.budget), repr(r.tol),
                         json.dumps(jsonable(r.params)), json.dumps(jsonable(r.conventions))])
        return _csv(rows)
    lines = []
    for r in reports:
        residual = "n/a" if r.residual is None else f"{r.residual:.3e}"
        conv = ",".join(f"{k}={v}" for k, v in r.conventions.items())
        lines.append(f"{r.verdict.upper():4}  {r.kind:5}  {r.identity:32} residual={residual:10}  {conv}")
    failed = hard_failures(reports)
    lines.append(f"{len(reports)} reports, {len(failed)} hard failures")
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands --------------------------------------------------------------------

def cmd_eval(args) -> int:
    policy = _policy(args)
    tau = _tau(args.tau, args)
    fn = args.function
    conventions = {}
    if fn in ("zgamma", "ruelle", "zratio"):
        if args.s is None:
            raise QkitError(f"eval {fn} needs --s")
        if fn == "zgamma":
            est = z_gamma_product(args.s, tau, policy)
        elif fn == "ruelle":
            est = ruelle(args.s, tau, policy)
        else:
            est = z_ratio(args.s, tau, args.variant, policy, eta_value(tau, args.eta_sign))
            conventions["variant"] = args.variant
            if args.variant.endswith("eta-shifted"):
                conventions["eta"] = eta_label(tau, args.eta_sign)
    elif fn == "eta":
        est = eta(tau, policy)
    else:
        m_base = 0 if args.m_base is None else args.m_base
        est = weber_f(int(fn[1]), tau, policy, m_base)
        conventions["m_base"] = m_base
    record = {"function": fn, "tau": args.tau, "s": args.s, "value": complex(est.value), "tail": est.tail,
              "conventions": conventions}
    _emit(_render_value(record, args.format), args.out)
    return EXIT_OK


def _need(value, flag: str, series: str):
    if value is None:
        raise QkitError(f"expand {series} needs {flag}")
    return value


def _expand(args) -> FormalSeries:
    name, order = args.series, args.order
    if order < 1:
        raise QkitError(f"--order must be >= 1, got {order}")
    m_base = 0 if args.m_base is None else args.m_base
    if name == "partition":
        return partition_gf(order)
    if name == "eta":
        return eta_series(order)
    if name in ("f1", "f2", "f3"):
        return weber_f_series(int(name[1]), order, m_base)
    if name == "character":
        return super_character(CharacterSpec(*_need(args.dims, "--dims", name)), order)
    if name == "supertrace":
        return super_supertrace(CharacterSpec(*_need(args.dims, "--dims", name)), order)
    if name == "ktheory":
        return ktheory_euler_series(WreathSpec(_need(args.euler, "--euler", name)), order)
    if name == "fock":
        return fock_graded_dim(CharacterSpec(*_need(args.dims, "--dims", name)), order)
    if name == "point":
        return point_case_series(_need(args.classes, "--classes", name), order)
    raise QkitError(f"unknown series {name!r}")


def _goettsche(args, fmt: str, out: str | None) -> int:
    betti = BettiVector(*args.betti)
    order_q = 5 if args.order_q is None else args.order_q
    table = goettsche_series(betti, order_q, args.order_r)
    if fmt == "json":
        text = json.dumps({"series": "goettsche", "betti": list(betti), **table.to_json()}, indent=2) + "\n"
    elif fmt == "csv":
        text = table.to_csv()
    else:
        lines = [f"betti = {tuple(betti)}, e = {betti.euler}"]
        lines += [f"  N={n}: " + " + ".join(f"{c} r^{j}" for j, c in enumerate(table.polynomial(n)) if c)
                  for n in range(table.order_q)]
        text = "\n".join(lines) + "\n"
    _emit(text, out)
    return EXIT_OK


def cmd_expand(args) -> int:
    if args.series == "goettsche":
        _need(args.betti, "--betti", "goettsche")
        return _goettsche(args, args.format, args.out)
    series = _expand(args)
    _emit(_render_series(args.series, series, args.format), args.out)
    return EXIT_OK


def cmd_hilbert(args) -> int:
    return _goettsche(args, args.format, args.out)


def cmd_verify(args) -> int:
    taus = tuple(_tau(t, args) for t in args.tau) if args.tau else None
    reports = run_suite(args.suite, taus, _policy(args), args.m_base, args.eta_sign, args.r_reading, args.box)
    _emit(_render_reports(reports, args.format), args.out)
    return EXIT_FAIL if hard_failures(reports) else EXIT_OK


def cmd_zeros(args) -> int:
    reports = verify_zeros(_tau(args.tau, args), box=args.box, policy=_policy(args))
    _emit(_render_reports(reports, args.format), args.out)
    return EXIT_FAIL if hard_failures(reports) else EXIT_OK


COMMANDS = {"eval": cmd_eval, "expand": cmd_expand, "hilbert": cmd_hilbert, "verify": cmd_verify,
            "zeros": cmd_zeros}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = _attach_equals(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (QkitError, ValueError) as exc:
        print(f"spectra-qkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"spectra-qkit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
