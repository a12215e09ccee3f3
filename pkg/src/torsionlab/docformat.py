"""Job documents: a small sectioned text format, its parser and canonical writer.

    torsionlab-v1
    # comments start with '#'
    [field]
    base = rationals
    variable = t

    [complex]
    dims = 1 2 1
    d0 = 2, 3
    d1 = 3, -2

Matrices are row-major, entries separated by top-level commas; vector lists
(cohomology bases) separate vectors with ';'.  Entries use the exactfield
literal grammar: "p/q", "a+b*i", "[c0, c1]" or "[num]/[den]".

``write_document(parse_document(text)) == text`` for canonical files.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .cellcx import (CohomologyOrientation, EquivariantCellComplex, GroupPresentation,
                     Representation, format_group_ring, format_word, parse_group_ring, parse_word)
from .complexes import CochainComplex, ShortExactSequence
from .errors import ParseError, TorsionLabError
from .exactfield import (GAUSSIAN_RATIONALS, QQ, RATIONALS, ExactMatrix, FieldDescriptor,
                         _split_top, format_constant, parse_constant, parse_element, to_literal)
from .maptorus import CellularSelfMap, MonodromyRep

HEADER = "torsionlab-v1"
SECTION_ORDER = ("field", "complex", "group", "representation", "cellcomplex", "orientation",
                 "sequence", "mappingtorus", "params")
PAYLOADS = ("complex", "cellcomplex", "sequence", "mappingtorus")

_SECTION = re.compile(r"\[([a-z]+)\]")
_KEY = re.compile(r"([A-Za-z_][\w.]*)\s*=\s*(.*)")


@dataclass
class ComplexBlock:
    complex: CochainComplex
    bases: list | None = None


@dataclass
class MappingTorusBlock:
    selfmap: CellularSelfMap
    monodromy: MonodromyRep
    points: list | None = None


@dataclass
class JobDocument:
    field: FieldDescriptor
    complex: ComplexBlock | None = None
    group: GroupPresentation | None = None
    representation: Representation | None = None
    cellcomplex: EquivariantCellComplex | None = None
    orientation: CohomologyOrientation | None = None
    sequence: ShortExactSequence | None = None
    sequence_bases: tuple = (None, None)
    mappingtorus: MappingTorusBlock | None = None
    params: dict = field(default_factory=dict)

    @property
    def payload(self) -> str:
        return next(p for p in PAYLOADS if getattr(self, p) is not None)


class _Section:
    def __init__(self, name, line):
        self.name, self.line = name, line
        self.items: dict[str, tuple[str, int]] = {}

    def get(self, key, default=None):
        return self.items[key][0] if key in self.items else default

    def require(self, key) -> str:
        if key not in self.items:
            raise ParseError(f"[{self.name}] is missing '{key}'", self.line)
        return self.items[key][0]

    def where(self, key) -> int:
        return self.items[key][1] if key in self.items else self.line


def _sections(text: str) -> dict[str, _Section]:
    lines = text.splitlines()
    if not lines or lines[0].strip() != HEADER:
        raise ParseError(f"first line must be '{HEADER}'", 1)
    out: dict[str, _Section] = {}
    cur = None
    for no, raw in enumerate(lines[1:], start=2):
        s = raw.strip()
        if not s or s.startswith("#"):
            continue
        m = _SECTION.fullmatch(s)
        if m:
            name = m.group(1)
            if name not in SECTION_ORDER:
                raise ParseError(f"unknown section [{name}]", no)
            if name in out:
                raise ParseError(f"duplicate section [{name}]", no)
            cur = out[name] = _Section(name, no)
            continue
        m = _KEY.fullmatch(s)
        if not m:
            raise ParseError(f"expected 'key = value', got {s!r}", no)
        if cur is None:
            raise ParseError("key outside any section", no)
        if m.group(1) in cur.items:
            raise ParseError(f"duplicate key '{m.group(1)}'", no)
        cur.items[m.group(1)] = (m.group(2).strip(), no)
    return out


def _guard(sec: _Section, key: str, fn, *args):
    """Run a value parser, turning literal errors into ParseError at the key's line."""
    try:
        return fn(*args)
    except ParseError:
        raise
    except (ValueError, ZeroDivisionError, KeyError, TypeError) as e:
        raise ParseError(f"[{sec.name}] {key}: {e}", sec.where(key)) from None


def _ints(s: str) -> list[int]:
    return [int(x) for x in s.replace(",", " ").split()] if s.strip() else []


def _entries(s: str, desc) -> list:
    return [parse_element(x, desc) for x in _split_top(s)] if s.strip() else []


def _matrix(sec, key, rows, cols, desc) -> ExactMatrix:
    vals = _guard(sec, key, _entries, sec.get(key, ""), desc)
    if len(vals) != rows * cols:
        raise ParseError(f"[{sec.name}] {key}: expected {rows}x{cols} = {rows * cols} entries, "
                         f"got {len(vals)}", sec.where(key))
    return ExactMatrix.from_flat(rows, cols, vals, desc)


def _vectors(s: str, length: int, desc) -> list[tuple]:
    if not s.strip():
        return []
    out = []
    for part in _split_top(s, ";"):
        v = tuple(_entries(part, desc))
        if len(v) != length:
            raise ValueError(f"vector of length {len(v)}, expected {length}")
        out.append(v)
    return out


def _parse_field(secs) -> FieldDescriptor:
    if "field" not in secs:
        raise ParseError("missing [field] section", 1)
    sec = secs["field"]
    base = sec.require("base")
    if base not in (RATIONALS, GAUSSIAN_RATIONALS):
        raise ParseError(f"unknown base {base!r}", sec.where("base"))
    var = sec.get("variable") or None
    if var is not None and (var == "i" or not re.fullmatch(r"[A-Za-z]\w*", var)):
        raise ParseError(f"bad variable name {var!r}", sec.where("variable"))
    return FieldDescriptor(base, var)


def _parse_complex(sec, desc, prefix="") -> ComplexBlock:
    dims = _guard(sec, prefix + "dims", _ints, sec.require(prefix + "dims"))
    if not dims or any(k < 0 for k in dims):
        raise ParseError(f"[{sec.name}] {prefix}dims must be nonnegative and nonempty", sec.where(prefix + "dims"))
    diffs = [_matrix(sec, f"{prefix}d{q}", dims[q + 1], dims[q], desc) for q in range(len(dims) - 1)]
    c = _guard(sec, prefix + "dims", CochainComplex, tuple(dims), tuple(diffs), desc)
    bases = None
    if any(f"{prefix}h{q}" in sec.items for q in range(len(dims))):
        bases = [_guard(sec, f"{prefix}h{q}", _vectors, sec.get(f"{prefix}h{q}", ""), dims[q], desc)
                 for q in range(len(dims))]
    return ComplexBlock(c, bases)


def _check_keys(sec, allowed):
    for key, (_, line) in sec.items.items():
        if not any(re.fullmatch(p, key) for p in allowed):
            raise ParseError(f"[{sec.name}] unexpected key '{key}'", line)


def parse_document(text: str) -> JobDocument:
    secs = _sections(text)
    desc = _parse_field(secs)
    _check_keys(secs["field"], ["base", "variable"])
    doc = JobDocument(desc)
    present = [p for p in PAYLOADS if p in secs]
    if len(present) != 1:
        raise ParseError(f"need exactly one of {', '.join('[' + p + ']' for p in PAYLOADS)}; "
                         f"found {len(present)}", 1)

    if "complex" in secs:
        sec = secs["complex"]
        _check_keys(sec, [r"dims", r"d\d+", r"h\d+"])
        doc.complex = _parse_complex(sec, desc)

    if "group" in secs:
        sec = secs["group"]
        _check_keys(sec, ["generators", "relations"])
        gens = sec.require("generators").split()
        rels = sec.get("relations", "")
        words = [_guard(sec, "relations", parse_word, r) for r in rels.split(";")] if rels.strip() else []
        doc.group = _guard(sec, "generators", GroupPresentation, tuple(gens), tuple(words))

    if "representation" in secs:
        sec = secs["representation"]
        if doc.group is None:
            raise ParseError("[representation] needs a [group] section", sec.line)
        _check_keys(sec, ["dim", r"image\.\w+"])
        k = _guard(sec, "dim", int, sec.require("dim"))
        images = {}
        for g in doc.group.generators:
            if f"image.{g}" not in sec.items:
                raise ParseError(f"[representation] is missing 'image.{g}'", sec.line)
            images[g] = _matrix(sec, f"image.{g}", k, k, desc)
        extra = set(key[6:] for key in sec.items if key.startswith("image.")) - set(images)
        if extra:
            raise ParseError(f"[representation] images for undeclared generators {sorted(extra)}", sec.line)
        doc.representation = _guard(sec, "dim", Representation, doc.group, images)

    if "cellcomplex" in secs:
        sec = secs["cellcomplex"]
        if doc.group is None:
            raise ParseError("[cellcomplex] needs a [group] section", sec.line)
        _check_keys(sec, ["cells", r"bd\d+", r"lifts\d+", r"names\d+", "ordering"])
        cells = _guard(sec, "cells", _ints, sec.require("cells"))
        bds = []
        for q in range(1, len(cells)):
            key = f"bd{q}"
            vals = _guard(sec, key, lambda s: [parse_group_ring(x) for x in _split_top(s)] if s.strip() else [],
                          sec.get(key, ""))
            r, c = cells[q - 1], cells[q]
            if len(vals) != r * c:
                raise ParseError(f"[cellcomplex] {key}: expected {r * c} entries, got {len(vals)}", sec.where(key))
            bds.append([vals[i * c:(i + 1) * c] for i in range(r)])
        lifts = None
        if any(f"lifts{q}" in sec.items for q in range(len(cells))):
            lifts = [_guard(sec, f"lifts{q}", lambda s: [parse_word(w) for w in _split_top(s)] if s.strip() else [],
                            sec.get(f"lifts{q}", "")) for q in range(len(cells))]
        names = None
        if any(f"names{q}" in sec.items for q in range(len(cells))):
            names = [sec.get(f"names{q}", "").split() for q in range(len(cells))]
        ordering = _guard(sec, "ordering", _ints, sec.get("ordering")) if "ordering" in sec.items else None
        doc.cellcomplex = _guard(sec, "cells", EquivariantCellComplex, doc.group, tuple(cells), bds,
                                 lifts, ordering, names)

    if "orientation" in secs:
        sec = secs["orientation"]
        if doc.cellcomplex is None:
            raise ParseError("[orientation] needs a [cellcomplex] section", sec.line)
        _check_keys(sec, [r"h\d+", "sign"])
        cells = doc.cellcomplex.cells
        bases = [[tuple(x.constant_value() for x in v) for v in
                  _guard(sec, f"h{q}", _vectors, sec.get(f"h{q}", ""), cells[q], QQ)]
                 for q in range(len(cells))]
        sign = _guard(sec, "sign", int, sec.get("sign", "1"))
        doc.orientation = _guard(sec, "sign", CohomologyOrientation, tuple(bases), sign)

    if "sequence" in secs:
        sec = secs["sequence"]
        _check_keys(sec, [r"c[012]\.(dims|d\d+|h\d+)", r"inject\d+", r"project\d+"])
        blocks = [_parse_complex(sec, desc, f"c{i}.") for i in range(3)]
        c0, c1, c2 = (b.complex for b in blocks)
        n = len(c1.dims)
        if not (len(c0.dims) == len(c2.dims) == n):
            raise ParseError("[sequence] the three complexes need the same number of degrees", sec.line)
        inject = [_matrix(sec, f"inject{q}", c1.dims[q], c0.dims[q], desc) for q in range(n)]
        project = [_matrix(sec, f"project{q}", c2.dims[q], c1.dims[q], desc) for q in range(n)]
        s = ShortExactSequence(c0, c1, c2, inject, project)
        _guard(sec, "c0.dims", s.validate)
        doc.sequence = s
        doc.sequence_bases = (blocks[0].bases, blocks[2].bases)

    if "mappingtorus" in secs:
        sec = secs["mappingtorus"]
        _check_keys(sec, [r"dims", r"d\d+", r"phi\d+", "dim", "w", "points"])
        dom = _parse_complex(sec, desc).complex
        phis = [_matrix(sec, f"phi{q}", k, k, desc) for q, k in enumerate(dom.dims)]
        selfmap = _guard(sec, "phi0", CellularSelfMap, dom, tuple(phis))
        k = _guard(sec, "dim", int, sec.require("dim"))
        rho = _guard(sec, "w", MonodromyRep, _matrix(sec, "w", k, k, desc))
        points = None
        if "points" in sec.items:
            points = _guard(sec, "points", lambda s: [parse_constant(x, desc) for x in _split_top(s)],
                            sec.get("points"))
        doc.mappingtorus = MappingTorusBlock(selfmap, rho, points)

    if "params" in secs:
        doc.params = {k: v for k, (v, _) in secs["params"].items.items()}
    return doc


def read_document(path) -> JobDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except UnicodeDecodeError as e:
        raise ParseError(f"not UTF-8: {e}") from None
    return parse_document(text)


# --------------------------------------------------------------------------
# Canonical writer


def _kv(key, value) -> str:
    return f"{key} = {value}" if value != "" else f"{key} ="


def _flat(m: ExactMatrix) -> str:
    return ", ".join(to_literal(x) for x in m.flat())


def _vecs(vs) -> str:
    return "; ".join(", ".join(to_literal(x) for x in v) for v in vs)


def _complex_lines(c: CochainComplex, bases, prefix="") -> list[str]:
    out = [_kv(prefix + "dims", " ".join(str(k) for k in c.dims))]
    out += [_kv(f"{prefix}d{q}", _flat(c.d(q))) for q in range(c.top)]
    if bases is not None:
        out += [_kv(f"{prefix}h{q}", _vecs(bases[q])) for q in range(len(c.dims))]
    return out


def write_document(doc: JobDocument) -> str:
    out = [HEADER, "", "[field]", _kv("base", doc.field.base)]
    if doc.field.variable:
        out.append(_kv("variable", doc.field.variable))
    if doc.complex is not None:
        out += ["", "[complex]"] + _complex_lines(doc.complex.complex, doc.complex.bases)
    if doc.group is not None:
        out += ["", "[group]", _kv("generators", " ".join(doc.group.generators)),
                _kv("relations", "; ".join(format_word(r) for r in doc.group.relations))]
    if doc.representation is not None:
        r = doc.representation
        out += ["", "[representation]", _kv("dim", str(r.dim))]
        out += [_kv(f"image.{g}", _flat(r.images[g])) for g in doc.group.generators]
    if doc.cellcomplex is not None:
        x = doc.cellcomplex
        out += ["", "[cellcomplex]", _kv("cells", " ".join(str(k) for k in x.cells))]
        for q, b in enumerate(x.boundaries, start=1):
            out.append(_kv(f"bd{q}", ", ".join(format_group_ring(e) for row in b for e in row)))
        out += [_kv(f"lifts{q}", ", ".join(format_word(w) for w in per)) for q, per in enumerate(x.lifts)]
        if x.names is not None:
            out += [_kv(f"names{q}", " ".join(per)) for q, per in enumerate(x.names)]
        out.append(_kv("ordering", " ".join(str(i) for i in x.ordering)))
    if doc.orientation is not None:
        o = doc.orientation
        out += ["", "[orientation]"]
        out += [_kv(f"h{q}", "; ".join(", ".join(format_constant(x) for x in v) for v in hq))
                for q, hq in enumerate(o.bases)]
        out.append(_kv("sign", str(o.sign)))
    if doc.sequence is not None:
        s = doc.sequence
        out += ["", "[sequence]"]
        bases = (doc.sequence_bases[0], None, doc.sequence_bases[1])
        for i, c in enumerate((s.c0, s.c1, s.c2)):
            out += _complex_lines(c, bases[i], f"c{i}.")
        out += [_kv(f"inject{q}", _flat(m)) for q, m in enumerate(s.inject)]
        out += [_kv(f"project{q}", _flat(m)) for q, m in enumerate(s.project)]
    if doc.mappingtorus is not None:
        mt = doc.mappingtorus
        out += ["", "[mappingtorus]"] + _complex_lines(mt.selfmap.domain, None)
        out += [_kv(f"phi{q}", _flat(f)) for q, f in enumerate(mt.selfmap.comap)]
        out += [_kv("dim", str(mt.monodromy.dim)), _kv("w", _flat(mt.monodromy.w))]
        if mt.points is not None:
            out.append(_kv("points", ", ".join(format_constant(p) for p in mt.points)))
    if doc.params:
        out += ["", "[params]"] + [_kv(k, v) for k, v in sorted(doc.params.items())]
    return "\n".join(out) + "\n"


__all__ = ["HEADER", "JobDocument", "ComplexBlock", "MappingTorusBlock", "parse_document",
           "read_document", "write_document", "TorsionLabError"]
