"""Command-line front end.

Exit codes: 0 success, 1 parse or validation error, 2 mathematical
precondition failure (non-acyclic complex, pole), 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import __version__
from .cellcx import (Representation, argument_invariant, assemble_twisted_cochain,
                     milnor_turaev_torsion, parse_word, shift_euler, standard_orientation)
from .complexes import (CochainComplex, F_alpha, enumerate_tau_chains, epsilon_alpha, fusion_report,
                        is_admissible, torsion, torsion_acyclic, unsigned_F_alpha)
from .docformat import JobDocument, read_document
from .errors import (AcyclicityError, BasisError, DegeneracyError, InternalError, NoSolutionError,
                     ParseError, PoleError, ShapeError, TorsionLabError, ValidationError)
from .exactfield import (FieldElement, det, evaluate_at, evaluate_matrix,
                         format_constant, parse_constant, pretty, rational_roots, to_literal)
from .maptorus import MonodromyRep, cone_torsion, mapping_cone_complex, verify_maptor

EXIT_OK, EXIT_INPUT, EXIT_MATH, EXIT_INTERNAL = 0, 1, 2, 3


class Output:
    """Collects key/value results; prints text lines or one JSON object."""

    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.data: dict = {}
        self.lines: list[str] = []
        self.exit_code = EXIT_OK

    def put(self, key, value, line=None):
        self.data[key] = value
        if line is not None:
            self.lines.append(line)

    def emit(self, stream=None):
        stream = stream or sys.stdout
        if self.as_json:
            print(json.dumps(self.data, sort_keys=True), file=stream)
        else:
            for line in self.lines:
                print(line, file=stream)


def _value(x: FieldElement) -> dict:
    return {"literal": to_literal(x), "numerator": [format_constant(c) for c in x.num],
            "denominator": [format_constant(c) for c in x.den], "pretty": pretty(x)}


def _need(doc: JobDocument, payload: str):
    if getattr(doc, payload) is None:
        raise ValidationError(f"this command needs a [{payload}] block, the file has [{doc.payload}]")
    return getattr(doc, payload)


def _mt_value(doc: JobDocument, shifts=(), flip=False) -> FieldElement:
    x = _need(doc, "cellcomplex")
    if doc.representation is None:
        raise ValidationError("[cellcomplex] jobs need a [representation] block")
    for cell, word in shifts:
        x = shift_euler(x, x.find_cell(cell), parse_word(word))
    o = doc.orientation
    if flip:
        o = (o or standard_orientation(x)).flipped()
    return milnor_turaev_torsion(x, doc.representation, o)


def _job_value(doc: JobDocument) -> FieldElement:
    """The torsion a job describes: MT torsion, cone torsion or the complex's torsion."""
    p = doc.payload
    if p == "cellcomplex":
        return _mt_value(doc)
    if p == "mappingtorus":
        mt = doc.mappingtorus
        return cone_torsion(mt.selfmap, mt.monodromy)
    if p == "complex":
        return torsion_acyclic(doc.complex.complex)
    raise ValidationError("sequence jobs have no single torsion value; use 'fusion'")


def _specialized_status(doc: JobDocument, point) -> str:
    """Whether the job's complex at variable = point is acyclic."""
    try:
        p = doc.payload
        if p == "cellcomplex":
            r = doc.representation
            images = {g: evaluate_matrix(m, point) for g, m in r.images.items()}
            if any(not det(m) for m in images.values()):
                return "representation singular"
            c = assemble_twisted_cochain(doc.cellcomplex, Representation(r.presentation, images))
        elif p == "mappingtorus":
            w = evaluate_matrix(doc.mappingtorus.monodromy.w, point)
            if not det(w):
                return "monodromy singular"
            c = mapping_cone_complex(doc.mappingtorus.selfmap, MonodromyRep(w))
        else:
            src = doc.complex.complex
            c = CochainComplex(src.dims, tuple(evaluate_matrix(d, point) for d in src.diffs))
    except PoleError:
        return "entries have a pole"
    return "acyclic" if c.is_acyclic() else f"non-acyclic, H dims {list(c.cohomology.dims)}"


def cmd_torsion(doc, args, out: Output):
    blk = _need(doc, "complex")
    c = blk.complex
    if args.h_bases:
        if blk.bases is None:
            raise ValidationError("--h-bases given but the [complex] block has no h<q> keys")
        v = torsion(c, blk.bases)
    else:
        v = torsion_acyclic(c)
    out.put("torsion", _value(v), to_literal(v))


def cmd_taulist(doc, args, out: Output):
    c = _need(doc, "complex").complex
    if not is_admissible(c.dims):
        raise ShapeError(f"shape {list(c.dims)} is not admissible")
    rows = []
    out.lines.append("alpha\tunsigned\teps\tF")
    for a in enumerate_tau_chains(c.dims):
        u = unsigned_F_alpha(c, a)
        if u is None:
            rows.append({"alpha": str(a), "degenerate": True})
            out.lines.append(f"{a}\tdegenerate\t\t")
            continue
        eps = epsilon_alpha(a, c.dims)
        f = F_alpha(c, a)
        rows.append({"alpha": str(a), "degenerate": False, "unsigned": to_literal(u),
                     "epsilon": eps, "F": to_literal(f)})
        out.lines.append(f"{a}\t{to_literal(u)}\t{eps:+d}\t{to_literal(f)}")
    out.put("rows", rows)


def cmd_mt(doc, args, out: Output):
    v = _mt_value(doc, args.shift_euler or (), args.flip_orientation)
    out.put("torsion", _value(v), to_literal(v))
    if doc.field.variable:
        out.lines.append(f"# {pretty(v)}")


def _root_report(doc, poly, kind, out_rows, lines):
    if len(poly) <= 1:
        return ()
    roots, residual = rational_roots(poly)
    for r, mult in roots:
        status = _specialized_status(doc, r)
        out_rows.append({"kind": kind, "root": format_constant(r), "multiplicity": mult, "status": status})
        lines.append(f"{kind} {format_constant(r)} multiplicity {mult}: {status}")
    return residual


def cmd_scan(doc, args, out: Output):
    if doc.field.variable is None:
        raise ValidationError("scan needs a field with a variable")
    v = _job_value(doc)
    out.put("value", _value(v), f"value {to_literal(v)}")
    out.lines.append(f"# {pretty(v)}")
    rows, lines = [], []
    res_num = _root_report(doc, v.num, "zero", rows, lines)
    res_den = _root_report(doc, v.den, "pole", rows, lines)
    out.lines += lines
    if not rows:
        out.lines.append("no rational zeros or poles")
    out.put("roots", rows)
    residual = {}
    for name, res in (("numerator", res_num), ("denominator", res_den)):
        if len(res) > 1:
            residual[name] = [format_constant(c) for c in res]
            out.lines.append(f"residual {name} factor [{', '.join(residual[name])}]")
    out.put("residual", residual)


def cmd_maptorus(doc, args, out: Output):
    mt = _need(doc, "mappingtorus")
    rep = verify_maptor(mt.selfmap, mt.monodromy, points=mt.points)
    sym = doc.field.variable or "w"
    unit = rep.unit_string(sym)
    verdict = "PASS" if rep.passed else "FAIL"
    out.put("verdict", verdict, f"{verdict} unit={unit}")
    out.put("unit", unit)
    out.put("torsion_side", _value(rep.torsion_side), f"torsion {to_literal(rep.torsion_side)}")
    out.put("zeta_side", _value(rep.zeta_side), f"zeta {to_literal(rep.zeta_side)}")
    out.put("ratio", _value(rep.ratio), f"ratio {to_literal(rep.ratio)}")
    out.put("checked_points", [format_constant(p) for p in rep.constant_at])
    if not rep.passed:
        out.exit_code = EXIT_INTERNAL


def cmd_fusion(doc, args, out: Output):
    s = _need(doc, "sequence")
    h0, h2 = doc.sequence_bases
    rep = fusion_report(s, h0, h2)
    verdict = "COMMUTES" if rep.commutes else "FAILS"
    out.put("verdict", verdict, f"{verdict} y={rep.y}")
    out.put("y", rep.y)
    out.put("lhs", to_literal(rep.lhs), f"lhs {to_literal(rep.lhs)}")
    out.put("rhs", to_literal(rep.rhs), f"rhs {to_literal(rep.rhs)}")
    if not rep.commutes:
        out.exit_code = EXIT_INTERNAL


def cmd_arg(doc, args, out: Output):
    v = _job_value(doc)
    at = args.at if args.at is not None else doc.params.get("at")
    if not v.is_constant():
        if at is None:
            raise ValidationError("the value depends on the variable; pass --at POINT")
        v = evaluate_at(v, parse_constant(at))
    modulus = args.modulus or doc.params.get("modulus", "2pi")
    mod = {"pi": math.pi, "2pi": 2 * math.pi}.get(modulus)
    if mod is None:
        raise ValidationError(f"modulus must be 'pi' or '2pi', got {modulus!r}")
    if not v:
        raise AcyclicityError([], "torsion vanishes at this point; the argument is undefined")
    a = argument_invariant(v, mod)
    out.put("value", to_literal(v), f"value {to_literal(v)}")
    out.put("argument", a, f"arg {a!r} (mod {modulus}, double precision)")
    out.put("modulus", modulus)


COMMANDS = {
    "torsion": (cmd_torsion, "torsion of a complex ([complex] block)"),
    "taulist": (cmd_taulist, "tau-chains with unsigned products, signs and F values"),
    "mt": (cmd_mt, "Milnor-Turaev torsion of a cell complex with a representation"),
    "scan": (cmd_scan, "torsion as a rational function with its rational zeros and poles"),
    "maptorus": (cmd_maptorus, "compare cone torsion with the Lefschetz zeta side"),
    "fusion": (cmd_fusion, "check the fusion square of a short exact sequence"),
    "arg": (cmd_arg, "argument of the torsion, optionally at a point"),
}


class _Parser(argparse.ArgumentParser):
    """Usage errors exit 1 (argparse's default 2 is reserved for math failures)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("file", help="job document (torsionlab-v1)")
    common.add_argument("--json", action="store_true", help="emit one JSON object")
    p = _Parser(prog="torsionlab", description="Exact torsion computations.")
    p.add_argument("--version", action="version", version=f"torsionlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    parsers = {name: sub.add_parser(name, parents=[common], help=help_)
               for name, (_, help_) in COMMANDS.items()}
    parsers["torsion"].add_argument("--h-bases", action="store_true",
                                    help="use the h<q> cohomology bases given in the file")
    parsers["mt"].add_argument("--shift-euler", nargs=2, action="append", metavar=("CELL", "WORD"),
                               help="multiply the lift of CELL (name or q:i) by WORD; repeatable")
    parsers["mt"].add_argument("--flip-orientation", action="store_true")
    parsers["arg"].add_argument("--at", help="specialize the variable at this point, e.g. 'i' or '1/2'")
    parsers["arg"].add_argument("--modulus", choices=("pi", "2pi"))
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = Output(args.json)
    try:
        doc = read_document(args.file)
        COMMANDS[args.command][0](doc, args, out)
    except (AcyclicityError, PoleError, DegeneracyError, NoSolutionError) as e:
        return _fail(out, e, EXIT_MATH)
    except OSError as e:
        return _fail(out, e, EXIT_INPUT)
    except InternalError as e:
        return _fail(out, e, EXIT_INTERNAL)
    except (ParseError, ValidationError, ShapeError, BasisError, TorsionLabError, ValueError) as e:
        return _fail(out, e, EXIT_INPUT)
    except Exception as e:  # noqa: BLE001 - anything else is a bug
        return _fail(out, e, EXIT_INTERNAL)
    out.emit()
    return out.exit_code


def _fail(out: Output, e: Exception, code: int) -> int:
    kind = {EXIT_INPUT: "input", EXIT_MATH: "math", EXIT_INTERNAL: "internal"}[code]
    if out.as_json:
        payload = {"error": str(e), "kind": kind}
        if isinstance(e, AcyclicityError):
            payload["h_dims"] = e.dims
        if isinstance(e, ParseError) and e.line is not None:
            payload["line"] = e.line
        print(json.dumps(payload, sort_keys=True))
    else:
        print(f"error ({kind}): {e}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

