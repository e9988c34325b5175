"""The Chekanov-Eliashberg DGA: semi-free algebra over F2 with differential.

Words are tuples of generator labels with invertible basepoint symbols
reduced eagerly (t t^-1 = 1); algebra elements are frozensets of words, so
mod-2 cancellation is structural.  Basepoint inverses use the label suffix
``^-1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from .diagram import DiagramError, LagrangianDiagram, OnePositiveAt, derive_chord_lengths

Word = Tuple[str, ...]
AlgElement = FrozenSet[Word]

ZERO: AlgElement = frozenset()
ONE: AlgElement = frozenset({()})


class DGAError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    label: str
    kind: str  # chord | basepoint | basepoint_inverse
    grading: int

    def __post_init__(self):
        if self.kind not in ("chord", "basepoint", "basepoint_inverse"):
            raise DGAError(f"bad generator kind {self.kind!r}")
        if self.kind != "chord" and self.grading != 0:
            raise DGAError("basepoint symbols must have grading 0")


def invert_label(label: str) -> str:
    return label[:-3] if label.endswith("^-1") else label + "^-1"


def reduce_word(word: Iterable[str], inverses: Dict[str, str]) -> Word:
    """Cancel adjacent t t^-1 and t^-1 t pairs."""
    out: List[str] = []
    for g in word:
        if out and inverses.get(out[-1]) == g:
            out.pop()
        else:
            out.append(g)
    return tuple(out)


def add(*elements: AlgElement) -> AlgElement:
    acc: FrozenSet[Word] = frozenset()
    for e in elements:
        acc = acc ^ e
    return acc


class CEDGA:
    """Graded semi-free DGA over F2 with invertible basepoint generators."""

    def __init__(
        self,
        generators: Sequence[Generator],
        differential: Dict[str, AlgElement],
        rotation: int = 0,
        link_grading: Optional[Dict[str, Tuple[int, int]]] = None,
        validate: bool = True,
    ):
        self.generators = {g.label: g for g in generators}
        if len(self.generators) != len(generators):
            raise DGAError("duplicate generator label")
        self.rotation = rotation
        self.modulus = 2 * rotation if rotation else 0
        self.inverses: Dict[str, str] = {}
        for g in generators:
            if g.kind == "basepoint":
                inv = invert_label(g.label)
                if inv not in self.generators:
                    raise DGAError(f"missing inverse generator {inv!r}")
                self.inverses[g.label] = inv
                self.inverses[inv] = g.label
        self.chords = [g.label for g in generators if g.kind == "chord"]
        self.basepoints = [g.label for g in generators if g.kind == "basepoint"]
        self.differential: Dict[str, AlgElement] = {}
        for g in generators:
            if g.kind != "chord":
                if differential.get(g.label):
                    raise DGAError("differential must vanish on basepoint symbols")
                self.differential[g.label] = ZERO
            else:
                elt = differential.get(g.label, ZERO)
                self.differential[g.label] = frozenset(
                    reduce_word(w, self.inverses) for w in elt
                )
        self.link_grading = dict(link_grading) if link_grading else None
        if validate:
            report = self.check_degree()
            if not report.ok:
                raise DGAError(f"degree law fails: {report.failures[:3]}")
            report = self.check_d_squared()
            if not report.ok:
                raise DGAError(f"d^2 != 0: {report.failures[:3]}")
            if self.link_grading is not None:
                report = self.check_link_grading()
                if not report.ok:
                    raise DGAError(f"link grading invalid: {report.failures[:3]}")

    # -- basic algebra -------------------------------------------------------

    def grading(self, label: str) -> int:
        g = self.generators[label].grading
        return g % self.modulus if self.modulus else g

    def word_grading(self, word: Word) -> int:
        total = sum(self.generators[g].grading for g in word)
        return total % self.modulus if self.modulus else total

    def reduce(self, word: Iterable[str]) -> Word:
        return reduce_word(word, self.inverses)

    def multiply(self, a: AlgElement, b: AlgElement) -> AlgElement:
        out: FrozenSet[Word] = frozenset()
        for u in a:
            for v in b:
                out = out ^ {self.reduce(u + v)}
        return out

    def d_generator(self, label: str) -> AlgElement:
        return self.differential[label]

    def differential_of(self, element: AlgElement) -> AlgElement:
        """Extend d over the algebra by linearity and the Leibniz rule."""
        out: FrozenSet[Word] = frozenset()
        for word in element:
            for i, g in enumerate(word):
                for img in self.differential.get(g, ZERO):
                    out = out ^ {self.reduce(word[:i] + img + word[i + 1 :])}
        return out

    # -- checks ---------------------------------------------------------------

    def check_degree(self) -> "Report":
        failures = []
        for label in self.chords:
            want = self.grading(label) - 1
            if self.modulus:
                want %= self.modulus
            for word in self.differential[label]:
                got = self.word_grading(word)
                if got != want:
                    failures.append((label, word, got, want))
        return Report("degree", failures)

    def check_d_squared(self) -> "Report":
        failures = []
        for label in self.chords:
            dd = self.differential_of(self.differential[label])
            if dd:
                failures.append((label, sorted(dd)))
        return Report("d_squared", failures)

    def check_stokes(self, diagram: LagrangianDiagram, region_cap: int = 8) -> "Report":
        """Strict length inequality for every differential word, from areas."""
        failures = []
        try:
            lengths = derive_chord_lengths(diagram, region_cap)
        except DiagramError as exc:
            return Report("stokes", [("lengths", str(exc))])
        for label in self.chords:
            for word in self.differential[label]:
                drop = lengths[label] - sum(
                    lengths.get(g, Fraction(0)) for g in word
                )
                if drop <= 0:
                    failures.append((label, word, drop))
        return Report("stokes", failures)

    def check_link_grading(self) -> "Report":
        lg = self.link_grading or {}
        failures = []
        for label in self.generators:
            base = label[:-3] if label.endswith("^-1") else label
            if base not in lg:
                failures.append((label, "missing link grading"))
        if failures:
            return Report("link_grading", failures)

        def pair(label: str) -> Tuple[int, int]:
            base = label[:-3] if label.endswith("^-1") else label
            return lg[base]

        for t in self.basepoints:
            o, u = pair(t)
            if o != u:
                failures.append((t, "basepoint must be diagonal"))
        for label in self.chords:
            o_a, u_a = pair(label)
            for word in self.differential[label]:
                if not word:
                    if o_a != u_a:
                        failures.append((label, word, "constant in off-diagonal differential"))
                    continue
                ok = all(
                    pair(word[i + 1])[0] == pair(word[i])[1] for i in range(len(word) - 1)
                )
                ok = ok and pair(word[0])[0] == o_a and pair(word[-1])[1] == u_a
                if not ok:
                    failures.append((label, word, "not composable"))
        return Report("link_grading", failures)

    # -- serialization ---------------------------------------------------------

    def serialize(self) -> str:
        lines = [f"rotation: {self.rotation}", "generators:"]
        for label, g in sorted(self.generators.items()):
            lines.append(f"  {label} {g.grading} {g.kind}")
        lines.append("diff:")
        for label in sorted(self.chords):
            elt = self.differential[label]
            if not elt:
                continue
            terms = sorted(elt, key=lambda w: (len(w), w))
            shown = " + ".join("1" if not w else " ".join(w) for w in terms)
            lines.append(f"  {label} = {shown}")
        if self.link_grading:
            lines.append("linkgrading:")
            for label, (o, u) in sorted(self.link_grading.items()):
                lines.append(f"  {label} = {o} {u}")
        return "\n".join(lines) + "\n"


@dataclass
class Report:
    name: str
    failures: List[tuple]

    @property
    def ok(self) -> bool:
        return not self.failures


def build_dga(diagram: LagrangianDiagram, region_cap: int = 8) -> CEDGA:
    """CE-DGA of a diagram: d(a) = mod-2 sum of one-positive disk words."""
    grades = diagram.chord_gradings(region_cap)
    gens: List[Generator] = []
    for cl in sorted(diagram.crossings):
        gens.append(Generator(cl, "chord", grades[cl]))
    for bp in sorted(diagram.basepoints, key=lambda b: b.label):
        gens.append(Generator(bp.label, "basepoint", 0))
        gens.append(Generator(invert_label(bp.label), "basepoint_inverse", 0))
    diff: Dict[str, AlgElement] = {}
    warnings: List[str] = []
    for cl in sorted(diagram.crossings):
        search = diagram.enumerate_disks(OnePositiveAt(cl), region_cap)
        if not search.complete:
            raise DGAError(f"disk enumeration incomplete at {cl!r}: {search.warnings}")
        warnings.extend(search.warnings)
        acc: FrozenSet[Word] = frozenset()
        for disk in search.disks:
            if not diagram.validate_disk(disk):
                raise DGAError(f"disk failed immersion re-trace at {cl!r}")
            acc = acc ^ {disk.word}
        diff[cl] = acc
    link = None
    if diagram.n_components > 1:
        link = {}
        for cl in diagram.crossings:
            o, u = diagram.crossing_component_pair(cl)
            link[cl] = (o + 1, u + 1)
        for bp in diagram.basepoints:
            comp = diagram.edge_component[bp.edge]
            link[bp.label] = (comp + 1, comp + 1)
    dga = CEDGA(gens, diff, rotation=diagram.rotation, link_grading=link)
    dga.build_warnings = warnings
    return dga


def parse_dga(text: str) -> CEDGA:
    """Parse the DGA file format; all invariants re-validated on load."""
    rotation = 0
    gens: List[Generator] = []
    diff: Dict[str, FrozenSet[Word]] = {}
    link: Dict[str, Tuple[int, int]] = {}
    section = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.startswith("rotation:"):
                rotation = int(line.split(":", 1)[1])
                continue
            if line.endswith(":") and " " not in line:
                section = line[:-1]
                if section not in ("generators", "diff", "linkgrading"):
                    raise DGAError(f"unknown section {section!r}")
                continue
            if section == "generators":
                label, grade, kind = line.split()
                gens.append(Generator(label, kind, int(grade)))
            elif section == "diff":
                label, rhs = (x.strip() for x in line.split("=", 1))
                words = set()
                for term in rhs.split("+"):
                    letters = term.split()
                    if letters == ["1"]:
                        word: Word = ()
                    else:
                        word = tuple(letters)
                    if word in words:
                        words.discard(word)
                    else:
                        words.add(word)
                diff[label] = frozenset(words)
            elif section == "linkgrading":
                label, rhs = (x.strip() for x in line.split("=", 1))
                o, u = rhs.split()
                link[label] = (int(o), int(u))
            else:
                raise DGAError(f"statement outside any section: {line!r}")
        except DGAError:
            raise
        except Exception as exc:
            raise DGAError(f"line {ln}: cannot parse {line!r}: {exc}") from exc
    known = {g.label for g in gens}
    for label, elt in diff.items():
        if label not in known:
            raise DGAError(f"differential of unknown generator {label!r}")
        for w in elt:
            for g in w:
                if g not in known:
                    raise DGAError(f"unknown generator {g!r} in differential of {label!r}")
    return CEDGA(gens, diff, rotation=rotation, link_grading=link or None)
