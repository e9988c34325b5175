"""Diagram parsing, disk enumeration, gradings, and Stokes checks."""

from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

import pytest

from legch.diagram import (
    Basepoint,
    Crossing,
    DiagramError,
    LagrangianDiagram,
    OnePositiveAt,
    TwoPositiveAt,
    derive_chord_lengths,
    parse_diagram,
)

CORPUS = Path(__file__).resolve().parents[1] / "src" / "legch" / "corpus"


def load(name):
    return parse_diagram((CORPUS / name).read_text())


def diff_words(diag, crossing, cap=8):
    search = diag.enumerate_disks(OnePositiveAt(crossing), cap)
    words = {}
    for d in search.disks:
        words[d.word] = words.get(d.word, 0) ^ 1
    return sorted(w for w, p in words.items() if p)


def test_parse_unknot():
    diag = load("unknot.diagram")
    assert len(diag.crossings) == 1
    assert len(diag.basepoints) == 1
    # one bounded region per lobe plus the outer face
    assert len(diag.faces) == 3


def test_parse_figure8():
    diag = load("figure8.diagram")
    assert sorted(diag.crossings) == [f"a{i}" for i in range(1, 8)]
    assert [bp.label for bp in diag.basepoints] == ["t"]
    # basepoint sits on the kink loop at a6
    (bp,) = diag.basepoints
    c6 = diag.crossings["a6"]
    assert bp.edge in c6.ends


def test_parse_repeated_edge_label_error():
    text = """
rotation: 0
crossings:
  a1 = e1 e1 e1 e2 u
"""
    with pytest.raises(DiagramError) as exc:
        parse_diagram(text)
    assert "e1" in str(exc.value)


def test_parse_dangling_edge_error():
    text = """
rotation: 0
crossings:
  a1 = e1 e2 e3 e4 u
"""
    with pytest.raises(DiagramError):
        parse_diagram(text)


def test_missing_basepoint_error():
    diag_text = load("unknot.diagram").serialize()
    stripped = "\n".join(
        ln for ln in diag_text.splitlines() if not ln.startswith(("basepoints", "  t"))
    )
    with pytest.raises(DiagramError):
        parse_diagram(stripped)


def test_figure8_differential_disks():
    diag = load("figure8.diagram")
    assert diff_words(diag, "a4") == [("a2",), ("a3",), ("a2", "a1", "a3")] or diff_words(
        diag, "a4"
    ) == sorted([("a2",), ("a3",), ("a2", "a1", "a3")])
    assert diff_words(diag, "a2") == []
    assert diff_words(diag, "a6") == sorted([("t",), ("a5",), ("a1", "a3", "a5")])
    assert diff_words(diag, "a7") == sorted([(), ("a5",), ("a5", "a2", "a1")])


def test_disk_retrace_validator():
    diag = load("figure8.diagram")
    for cl in diag.crossings:
        for disk in diag.enumerate_disks(OnePositiveAt(cl)).disks:
            assert diag.validate_disk(disk)


def test_two_positive_disks_exist():
    diag = load("figure8.diagram")
    search = diag.enumerate_disks(TwoPositiveAt("a2"))
    assert search.disks
    for d in search.disks:
        positives = d.positive_corners()
        assert len(positives) == 2
        assert diag.validate_disk(d)
    # restricting the second corner filters the list
    at_a1 = diag.enumerate_disks(TwoPositiveAt("a2", "a1")).disks
    assert at_a1
    assert all(p[0] in ("a1", "a2") for d in at_a1 for p in d.positive_corners())


def test_chord_gradings_figure8():
    diag = load("figure8.diagram")
    assert diag.chord_gradings() == {
        "a1": 1,
        "a2": -1,
        "a3": -1,
        "a4": 0,
        "a5": 0,
        "a6": 1,
        "a7": 1,
    }


def test_chord_gradings_all_override():
    diag = load("unknot.diagram")
    assert diag.chord_gradings() == {"a1": 1}


def test_chord_gradings_trefoil_hand_oracle():
    # hand-computed Maslov potential: braid crossings grade 0, kinks grade 1
    diag = load("trefoil.diagram")
    assert diag.chord_gradings() == {"b1": 0, "b2": 0, "b3": 0, "c1": 1, "c2": 1}


def test_inconsistent_override_rejected():
    text = (CORPUS / "unknot.diagram").read_text().replace("override a1 = 1", "override a1 = 3")
    diag = parse_diagram(text)
    with pytest.raises(DiagramError) as exc:
        diag.chord_gradings()
    assert "degree -1" in str(exc.value)


def test_enumeration_independent_of_edge_labels():
    rng = random.Random(42)
    base = load("figure8.diagram")
    edges = list(base.edge_labels)
    new = edges[:]
    rng.shuffle(new)
    ren = dict(zip(edges, new))
    crossings = [
        Crossing(c.label, tuple(ren[e] for e in c.ends), c.under_first)
        for c in base.crossings.values()
    ]
    bps = [Basepoint(b.label, ren[b.edge], b.offset) for b in base.basepoints]
    outer = (ren[base._outer_spec[0]], base._outer_spec[1])
    diag = LagrangianDiagram(
        crossings,
        bps,
        rotation=0,
        grading_overrides=base.chord_gradings(),
        outer=outer,
    )
    for cl in base.crossings:
        assert diff_words(base, cl) == diff_words(diag, cl)


def test_serialize_parse_fixpoint():
    for name in ("unknot.diagram", "figure8.diagram", "trefoil.diagram"):
        text = (CORPUS / name).read_text()
        once = parse_diagram(text).serialize()
        twice = parse_diagram(once).serialize()
        assert once == twice


def test_stokes_lengths_figure8():
    diag = load("figure8.diagram")
    lengths = derive_chord_lengths(diag)
    areas = diag.face_areas()
    assert all(v > 0 for v in lengths.values())
    for cl in diag.crossings:
        for disk in diag.enumerate_disks(OnePositiveAt(cl)).disks:
            drop = lengths[cl] - sum(lengths.get(w, Fraction(0)) for w in disk.word)
            assert drop == diag.disk_area(disk, areas)
            assert drop > 0  # the strict length inequality


def test_stokes_sub_dga_closure():
    # chords below any height cutoff are closed under the differential
    diag = load("figure8.diagram")
    lengths = derive_chord_lengths(diag)
    for cutoff in (Fraction(1), Fraction(5, 2), Fraction(4)):
        below = {c for c, l in lengths.items() if l < cutoff}
        for cl in below:
            for disk in diag.enumerate_disks(OnePositiveAt(cl)).disks:
                for w in disk.word:
                    if w in lengths:
                        assert w in below


def test_unknot_disks():
    diag = load("unknot.diagram")
    words = diff_words(diag, "a1")
    assert len(words) == 2
    assert () in words
    assert any(w and w[0].startswith("t") for w in words)


def test_winding_multiplicities_nonnegative():
    diag = load("figure8.diagram")
    for cl in diag.crossings:
        for disk in diag.enumerate_disks(OnePositiveAt(cl)).disks:
            assert all(m > 0 for m in disk.multiplicities.values())
            assert diag.outer_face not in disk.multiplicities
