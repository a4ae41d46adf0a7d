"""Command-line front end with JSON/CSV/table output and the V-sequence cache.

Every command renders one structured document:

    {command, inputs, value, induced_minimum?, sharp?, trail: [{name, value, anchor}]}

Rationals are serialised as reduced "num/den" strings (plain "num" when the
denominator is 1), never as floats.  Exit status: 0 success, 2 validation
error, 1 internal consistency failure; with --format json failures print a
machine-readable {"error": ...} document.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .bounds import (
    A_ESSENTIAL,
    A_OPPOSITE,
    A_SEMIGROUP,
    A_TOWER,
    BoundReport,
    EssentialInput,
    essential_bound,
    reproduce_kn,
    reproduce_whitehead,
    shake_bound,
    winding_bound_via_zero_surgery,
)
from .cache import CACHE_ENV, cache_load, cache_store
from .complexes import set_v_memo, v_sequence
from .errors import InternalCheckError, ValidationError
from .knots import parse_knot_expr
from .surgery import (
    correction_table,
    d_positive_surgery,
    euler_number,
    kn_seifert,
    ncf_eval,
    ncf_expand,
)

A_NIWU = "d(S^3_n(K),t_i) = -2 max{V_i, V_{n-i}} + (n-2i)^2/(4n) - 1/4"
A_SPINC = "spin^c label i has chern number n - 2i"
A_NCF = "[a_1,...,a_k]^- = a_1 - 1/(a_2 - 1/(...))"
A_EULER = "e(M(e0; r_1..r_k)) = e0 + sum r_j"
A_EULER_NEG = "2(2/(4n+3) - 1/(2n+1)) < 0"
A_GENUS = "g(T(p,q)) = (p-1)(q-1)/2, additive over summands"
A_PLUMBING = "plumbing"


def fraction_str(value: Fraction | int) -> str:
    frac = Fraction(value)
    if frac.denominator == 1:
        return str(frac.numerator)
    return f"{frac.numerator}/{frac.denominator}"


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"not a rational number: {text!r} ({exc})") from exc


def _scalar_str(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (Fraction, int)):
        return fraction_str(value)
    return str(value)


def _report_doc(command: str, report: BoundReport) -> dict:
    doc: dict = {"command": command, "inputs": report.inputs}
    doc["value"] = (
        fraction_str(report.value) if isinstance(report.value, Fraction) else report.value
    )
    if report.induced_minimum is not None:
        doc["induced_minimum"] = report.induced_minimum
    if report.sharp is not None:
        doc["sharp"] = report.sharp
    doc["trail"] = [
        {"name": t.name, "value": _scalar_str(t.value), "anchor": t.anchor}
        for t in report.trail
    ]
    return doc


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would sys.exit(2); raise instead
        raise ValidationError(message)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--format",
        choices=("table", "json", "csv"),
        default=argparse.SUPPRESS,
        help="output format (default: table)",
    )
    parser.add_argument(
        "--cache",
        metavar="PATH",
        default=argparse.SUPPRESS,
        help=f"V-sequence cache file (default: ${CACHE_ENV} if set)",
    )
    parser.add_argument(
        "--no-cache",
        action="store_true",
        default=argparse.SUPPRESS,
        help="disable the cache entirely (no file access)",
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="knotwind", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.set_defaults(format="table", cache=None, no_cache=False, handler=None)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("vseq", help="V-sequence of a knot expression")
    p.add_argument("expr", help="knot expression, e.g. 'T(2,3) # -T(4,5)' or 'U'")
    _add_common(p)
    p.set_defaults(handler=_cmd_vseq)

    p = sub.add_parser("dinv", help="d-invariants of a positive surgery")
    p.add_argument("expr")
    p.add_argument("--n", type=int, required=True, help="surgery coefficient (positive)")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--i", type=int, default=None, help="single spin^c index")
    group.add_argument("--all", action="store_true", help="all indices 0..n-1 (default)")
    _add_common(p)
    p.set_defaults(handler=_cmd_dinv)

    bound = sub.add_parser("bound", help="lower-bound combinators")
    bound_sub = bound.add_subparsers(dest="bound_kind", metavar="KIND")
    p = bound_sub.add_parser("winding", help="winding bound via the 0-surgery knot J")
    p.add_argument("expr")
    _add_common(p)
    p.set_defaults(handler=_cmd_bound_winding)
    p = bound_sub.add_parser("shake", help="0-shake genus bound")
    p.add_argument("expr")
    _add_common(p)
    p.set_defaults(handler=_cmd_bound_shake)
    p = bound_sub.add_parser("essential", help="essential-class bound from a d-table file")
    p.add_argument("--w", type=int, required=True, help="even winding class")
    p.add_argument("--dtable", required=True, metavar="FILE", help='JSON {"w": int, "d": {...}}')
    _add_common(p)
    p.set_defaults(handler=_cmd_bound_essential)

    examples = sub.add_parser("examples", help="built-in worked bound chains")
    examples_sub = examples.add_subparsers(dest="example", metavar="NAME")
    p = examples_sub.add_parser("kn", help="the sharp family with winding number 4n+2")
    p.add_argument("--n", type=int, required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_examples_kn)
    p = examples_sub.add_parser("whitehead", help="the knotified Hopf link bound")
    _add_common(p)
    p.set_defaults(handler=_cmd_examples_whitehead)

    seifert = sub.add_parser("seifert", help="Seifert presentations")
    seifert_sub = seifert.add_subparsers(dest="seifert_kind", metavar="NAME")
    p = seifert_sub.add_parser("kn", help="four-fibre presentation of the K_n surgery")
    p.add_argument("--n", type=int, required=True)
    _add_common(p)
    p.set_defaults(handler=_cmd_seifert_kn)

    ncf = sub.add_parser("ncf", help="negative continued fractions")
    ncf_sub = ncf.add_subparsers(dest="ncf_kind", metavar="OP")
    p = ncf_sub.add_parser("eval", help="evaluate a coefficient list, e.g. 4,2")
    p.add_argument("coeffs")
    _add_common(p)
    p.set_defaults(handler=_cmd_ncf_eval)
    p = ncf_sub.add_parser("expand", help="expand a rational > 1, e.g. 7/2")
    p.add_argument("value")
    _add_common(p)
    p.set_defaults(handler=_cmd_ncf_expand)

    return parser


def _cmd_vseq(args) -> dict:
    expr = parse_knot_expr(args.expr)
    seq = v_sequence(expr)
    if expr.single_positive_torus_knot():
        path, anchor = "semigroup count", A_SEMIGROUP
    elif expr.is_unknot:
        path, anchor = "unknot", A_TOWER
    else:
        path, anchor = "staircase homology", A_TOWER
    return {
        "command": "vseq",
        "inputs": {"expr": str(expr)},
        "value": list(seq.values),
        "trail": [
            {"name": "path", "value": path, "anchor": anchor},
            {"name": "genus", "value": str(expr.genus), "anchor": A_GENUS},
        ],
    }


def _cmd_dinv(args) -> dict:
    expr = parse_knot_expr(args.expr)
    if not isinstance(args.n, int) or args.n < 1:
        raise ValidationError(f"surgery coefficient must be a positive integer, got {args.n}")
    inputs: dict = {"expr": str(expr), "n": args.n}
    trail = [
        {"name": "formula", "value": f"n = {args.n}", "anchor": A_NIWU},
        {"name": "labels", "value": "i = 0..n-1", "anchor": A_SPINC},
    ]
    if args.i is not None:
        inputs["i"] = args.i
        value = fraction_str(d_positive_surgery(expr, args.n, args.i))
    else:
        table = correction_table(expr, args.n)
        value = {str(i): fraction_str(table[i]) for i in range(args.n)}
    return {"command": "dinv", "inputs": inputs, "value": value, "trail": trail}


def _cmd_bound_winding(args) -> dict:
    return _report_doc("bound winding", winding_bound_via_zero_surgery(parse_knot_expr(args.expr)))


def _cmd_bound_shake(args) -> dict:
    return _report_doc("bound shake", shake_bound(parse_knot_expr(args.expr)))


def _load_dtable(path: str, w: int) -> EssentialInput:
    try:
        raw = json.loads(open(path, encoding="utf-8").read())
    except OSError as exc:
        raise ValidationError(f"cannot read d-table file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"d-table file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict) or "w" not in raw or "d" not in raw:
        raise ValidationError(f'd-table file {path} must be {{"w": int, "d": {{...}}}}')
    if raw["w"] != w:
        raise ValidationError(f"--w {w} does not match the file's w = {raw['w']}")
    if not isinstance(raw["d"], dict):
        raise ValidationError("d-table entry 'd' must be an object of residue -> rational")
    table = {}
    for key, val in raw["d"].items():
        try:
            residue = int(key)
        except ValueError:
            raise ValidationError(f"d-table key {key!r} is not an integer residue") from None
        table[residue] = parse_fraction(val) if isinstance(val, str) else Fraction(val)
    return EssentialInput(w, table)


def _cmd_bound_essential(args) -> dict:
    data = _load_dtable(args.dtable, args.w)
    value = essential_bound(data)
    size = data.w * data.w
    half = size // 2
    best_k = max(
        range(size), key=lambda k: data.dtable[k] - data.dtable[(k + half) % size]
    )
    return {
        "command": "bound essential",
        "inputs": {"w": data.w, "dtable": args.dtable},
        "value": fraction_str(value),
        "trail": [
            {"name": "opposite involution", "value": f"k -> k + {half} (mod {size})", "anchor": A_OPPOSITE},
            {"name": "maximising residue", "value": str(best_k), "anchor": A_ESSENTIAL},
            {
                "name": "d[k] - d[k_op]",
                "value": fraction_str(data.dtable[best_k] - data.dtable[(best_k + half) % size]),
                "anchor": A_ESSENTIAL,
            },
        ],
    }


def _cmd_examples_kn(args) -> dict:
    return _report_doc("examples kn", reproduce_kn(args.n))


def _cmd_examples_whitehead(args) -> dict:
    return _report_doc("examples whitehead", reproduce_whitehead())


def _cmd_seifert_kn(args) -> dict:
    presentation = kn_seifert(args.n)
    euler = euler_number(presentation)
    trail = [{"name": "e0", "value": str(presentation.e0), "anchor": A_PLUMBING}]
    trail += [
        {"name": f"fibre r_{j + 1}", "value": fraction_str(r), "anchor": A_PLUMBING}
        for j, r in enumerate(presentation.fibers)
    ]
    trail.append({"name": "euler number", "value": fraction_str(euler), "anchor": A_EULER})
    trail.append({"name": "euler < 0", "value": "true" if euler < 0 else "false", "anchor": A_EULER_NEG})
    return {
        "command": "seifert kn",
        "inputs": {"n": args.n},
        "value": fraction_str(euler),
        "trail": trail,
    }


def _cmd_ncf_eval(args) -> dict:
    try:
        coeffs = [int(part) for part in args.coeffs.split(",") if part.strip() != ""]
    except ValueError:
        raise ValidationError(f"coefficient list must be comma-separated integers, got {args.coeffs!r}") from None
    value = ncf_eval(coeffs)
    return {
        "command": "ncf eval",
        "inputs": {"coeffs": coeffs},
        "value": fraction_str(value),
        "trail": [{"name": "definition", "value": fraction_str(value), "anchor": A_NCF}],
    }


def _cmd_ncf_expand(args) -> dict:
    value = parse_fraction(args.value)
    coeffs = ncf_expand(value)
    return {
        "command": "ncf expand",
        "inputs": {"value": fraction_str(value)},
        "value": coeffs,
        "trail": [{"name": "definition", "value": ",".join(map(str, coeffs)), "anchor": A_NCF}],
    }


def _flatten_value(value) -> list[tuple[str, str]]:
    if isinstance(value, dict):
        return [(f"d_{k}", str(v)) for k, v in value.items()]
    if isinstance(value, list):
        return [(f"V_{idx}", str(v)) for idx, v in enumerate(value)]
    return [("value", _scalar_str(value))]


def render_document(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["section", "name", "value", "anchor"])
        for key, val in doc.get("inputs", {}).items():
            writer.writerow(["input", key, _scalar_str(val), ""])
        for name, val in _flatten_value(doc.get("value")):
            writer.writerow(["result", name, val, ""])
        for key in ("induced_minimum", "sharp"):
            if key in doc:
                writer.writerow(["result", key, _scalar_str(doc[key]), ""])
        for entry in doc.get("trail", ()):
            writer.writerow(["trail", entry["name"], entry["value"], entry["anchor"]])
        return buffer.getvalue()
    lines = [f"command: {doc['command']}"]
    for key, val in doc.get("inputs", {}).items():
        lines.append(f"{key}: {_scalar_str(val)}")
    value = doc.get("value")
    if isinstance(value, dict):
        lines.append("value:")
        lines.extend(f"  d_{k} = {v}" for k, v in value.items())
    elif isinstance(value, list):
        lines.append("value: " + " ".join(str(v) for v in value))
    else:
        lines.append(f"value: {_scalar_str(value)}")
    if "induced_minimum" in doc:
        lines.append(f"induced minimum: {doc['induced_minimum']}")
    if "sharp" in doc:
        lines.append(f"sharp: {_scalar_str(doc['sharp'])}")
    trail = doc.get("trail", ())
    if trail:
        lines.append("trail:")
        lines.extend(f"  {t['name']} = {t['value']}   [{t['anchor']}]" for t in trail)
    return "\n".join(lines) + "\n"


def _error_output(kind: str, exc: Exception, fmt: str) -> tuple[str, str]:
    if fmt == "json":
        doc = {"error": {"kind": kind, "message": str(exc)}}
        return json.dumps(doc, indent=2, ensure_ascii=False) + "\n", ""
    return "", f"error ({kind}): {exc}\n"


def _sniff_format(argv: Sequence[str]) -> str:
    for idx, token in enumerate(argv):
        if token == "--format" and idx + 1 < len(argv):
            return argv[idx + 1]
        if token.startswith("--format="):
            return token.split("=", 1)[1]
    return "table"


def run(argv: Sequence[str]) -> tuple[int, str, str]:
    """Execute one command line; returns (exit status, stdout, stderr)."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except ValidationError as exc:
        out, err = _error_output("validation", exc, _sniff_format(argv))
        return 2, out, err
    if getattr(args, "handler", None) is None:
        out, err = _error_output(
            "validation", ValidationError("no command given; see --help"), _sniff_format(argv)
        )
        return 2, out, err
    fmt = args.format
    cache_path = None
    if not args.no_cache:
        cache_path = args.cache or os.environ.get(CACHE_ENV) or None
    loaded: dict[str, list[int]] = {}
    if cache_path:
        loaded = cache_load(cache_path)
    memo = dict(loaded)
    previous = set_v_memo(memo)
    try:
        doc = args.handler(args)
        output = render_document(doc, fmt)
        if cache_path and memo != loaded:
            cache_store(cache_path, memo)
        return 0, output, ""
    except ValidationError as exc:
        out, err = _error_output("validation", exc, fmt)
        return 2, out, err
    except InternalCheckError as exc:
        out, err = _error_output("internal", exc, fmt)
        return 1, out, err
    finally:
        set_v_memo(previous)


def main(argv: Sequence[str] | None = None) -> int:
    try:
        status, out, err = run(sys.argv[1:] if argv is None else argv)
    except SystemExit as exc:  # --help / --version paths
        code = exc.code
        return 0 if code is None else int(code)
    if out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return status


if __name__ == "__main__":
    sys.exit(main())
