import random
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from torsionlab.complexes import CochainComplex
from torsionlab.docformat import ComplexBlock, JobDocument, parse_document, read_document, write_document
from torsionlab.errors import ParseError
from torsionlab.exactfield import QQ, QQI, FieldDescriptor, FieldElement, Gaussian, normalize
from torsionlab.sampling import random_complex

JOBS = sorted(p for p in (Path(__file__).parent.parent / "jobs").glob("*.tl") if p.name != "bad_literal.tl")


@pytest.mark.parametrize("path", JOBS, ids=lambda p: p.stem)
def test_job_files_round_trip(path):
    text = path.read_text()
    assert write_document(parse_document(text)) == text


def test_bad_literal_reports_line():
    with pytest.raises(ParseError) as e:
        read_document(Path(__file__).parent.parent / "jobs" / "bad_literal.tl")
    assert e.value.line == 8
    assert str(e.value).startswith("line 8:")


def _doc(body):
    return "torsionlab-v1\n[field]\nbase = rationals\n" + body


@pytest.mark.parametrize("text, line", [
    ("nonsense\n", 1),
    (_doc("[complex]\ndims = 1\n[weird]\n"), 6),
    (_doc("[complex]\ndims = 1 1\nd0 = 1\nd0 = 2\n"), 7),
    (_doc("[complex]\ndims = 1 1\nd0 = 1, 2\n"), 6),
    (_doc("[complex]\ndims = 1 1\nd0 = 1\nfoo = 3\n"), 7),
    (_doc("[complex]\ndims = 1 1\nd0 = 1\nh0 = 1, 2\n"), 7),
    (_doc("[complex]\ndims = 1 1 1\nd0 = 1\nd1 = 1\n"), 5),
    (_doc("just text\n"), 4),
    (_doc(""), 1),
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as e:
        parse_document(text)
    assert e.value.line == line


def test_two_payloads_rejected():
    text = _doc("[complex]\ndims = 1\n[mappingtorus]\ndims = 1\nphi0 = 1\ndim = 1\nw = 2\n")
    with pytest.raises(ParseError):
        parse_document(text)


def test_comments_and_blank_lines_ignored():
    text = _doc("# a comment\n\n[complex]\n  dims = 1\n")
    doc = parse_document(text)
    assert doc.complex.complex.dims == (1,)


def test_field_variants():
    doc = parse_document("torsionlab-v1\n[field]\nbase = gaussian-rationals\nvariable = t\n[complex]\ndims = 1\n")
    assert doc.field == FieldDescriptor(QQI.base, "t")
    with pytest.raises(ParseError):
        parse_document("torsionlab-v1\n[field]\nbase = rationals\nvariable = i\n[complex]\ndims = 1\n")


seeds = st.integers(0, 10**6)


@given(seeds)
def test_random_rational_complex_round_trip(seed):
    rng = random.Random(seed)
    c = random_complex([rng.randint(0, 3) for _ in range(rng.randint(1, 4))], rng)
    doc = JobDocument(QQ, ComplexBlock(c))
    text = write_document(doc)
    back = parse_document(text)
    assert back.complex.complex.diffs == c.diffs
    assert write_document(back) == text


def _element(rng, desc):
    num = tuple(rng.randint(-3, 3) for _ in range(rng.randint(1, 3)))
    den = tuple(rng.randint(-3, 3) for _ in range(rng.randint(1, 2)))
    if not any(den):
        den = (1,)
    if desc.base == QQI.base:
        num = tuple(Gaussian(a, rng.randint(-2, 2)) for a in num)
    return normalize(num, den, desc)


@given(seeds, st.sampled_from([FieldDescriptor(QQ.base, "t"), FieldDescriptor(QQI.base, "t")]))
def test_function_field_diagonal_complex_round_trip(seed, desc):
    # d1 d0 = 0 with d0 = (x, 0) stacked and d1 = (0, y)
    rng = random.Random(seed)
    x, y = _element(rng, desc), _element(rng, desc)
    z = FieldElement.constant(0, desc)
    c = CochainComplex.from_lists((1, 2, 1), [[[x], [z]], [[z, y]]], desc)
    text = write_document(JobDocument(desc, ComplexBlock(c)))
    back = parse_document(text)
    assert back.complex.complex.diffs == c.diffs
    assert write_document(back) == text
