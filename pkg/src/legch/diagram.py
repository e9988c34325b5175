"""Lagrangian (xy-projection) knot diagrams and immersed disk enumeration.

A diagram is a 4-valent planar map: each crossing lists its four incident
edge-ends in counterclockwise order starting from an incoming strand end,
flagged `u` (that strand passes under) or `o` (over).  The strand through
ends 0 and 2 enters at end 0; the other strand occupies ends 1 and 3 with
its direction recovered by global orientation propagation.

Quadrant i lies counterclockwise between ends i and i+1.  Quadrant i carries
a positive Reeb sign exactly when end i belongs to the over-strand.

Disks are immersions of the 2-disk with convex corners, found as closed
boundary walks that only turn left through quadrants; a completed walk is
accepted when its winding numbers are nonnegative, the local sheet counts
are consistent, and the pulled-back cell structure has Euler characteristic
one (so the walk bounds a disk).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple


class DiagramError(ValueError):
    pass


@dataclass(frozen=True)
class Crossing:
    label: str
    ends: Tuple[str, str, str, str]  # edge labels, counterclockwise, ends[0] incoming
    under_first: bool  # strand through ends (0,2) is the under-strand

    def over_ends(self) -> Tuple[int, int]:
        return (1, 3) if self.under_first else (0, 2)

    def positive_quadrants(self) -> Tuple[int, int]:
        # quadrant i positive iff end i is on the over-strand
        return self.over_ends()


@dataclass(frozen=True)
class Basepoint:
    label: str
    edge: str
    offset: Fraction


# A dart is (edge_label, direction) with direction +1 = along orientation.
Dart = Tuple[str, int]
# Disk boundary events.
CornerEvent = Tuple[str, str, int, int]  # ("corner", crossing, quadrant, sign)
BaseEvent = Tuple[str, str, int]  # ("base", basepoint label, +1/-1)


@dataclass
class DiskBoundary:
    """One immersed disk, recorded from just after its first positive corner."""

    start: Tuple[str, int]  # (crossing, quadrant) of the first positive corner
    events: Tuple[tuple, ...]  # corner and base-point events in boundary order
    darts: Tuple[Dart, ...]  # edge traversals in boundary order
    multiplicities: Dict[int, int]  # face id -> winding number

    @property
    def word(self) -> Tuple[str, ...]:
        """Boundary letters: negative-corner crossings and base-point symbols."""
        out = []
        for ev in self.events:
            if ev[0] == "corner":
                if ev[3] < 0:
                    out.append(ev[1])
                else:
                    out.append(ev[1] + "^+")  # second positive corner, marked
            else:
                out.append(ev[1] if ev[2] > 0 else ev[1] + "^-1")
        return tuple(out)

    def positive_corners(self) -> List[Tuple[str, int]]:
        out = [self.start]
        for ev in self.events:
            if ev[0] == "corner" and ev[3] > 0:
                out.append((ev[1], ev[2]))
        return out


@dataclass(frozen=True)
class OnePositiveAt:
    crossing: str


@dataclass(frozen=True)
class TwoPositiveAt:
    crossing: str
    second: Optional[str] = None  # None = any crossing


@dataclass
class DiskSearch:
    disks: List[DiskBoundary]
    complete: bool
    warnings: List[str] = field(default_factory=list)


class LagrangianDiagram:
    def __init__(
        self,
        crossings: Sequence[Crossing],
        basepoints: Sequence[Basepoint],
        rotation: int = 0,
        maslov_potential: Optional[Dict[str, int]] = None,
        grading_overrides: Optional[Dict[str, int]] = None,
        areas: Optional[Dict[Tuple[str, int], Fraction]] = None,
        outer: Optional[Dart] = None,
    ):
        self.crossings = {c.label: c for c in crossings}
        if len(self.crossings) != len(crossings):
            raise DiagramError("duplicate crossing label")
        self.basepoints = list(basepoints)
        self.rotation = rotation
        self.maslov_potential = dict(maslov_potential or {})
        self.grading_overrides = dict(grading_overrides or {})
        self._area_spec = dict(areas or {})
        self._outer_spec = outer
        self._build()

    # -- structure ---------------------------------------------------------

    def _build(self):
        # attachment map: edge -> [(crossing, end index)], exactly two entries
        att: Dict[str, List[Tuple[str, int]]] = {}
        for c in self.crossings.values():
            for i, e in enumerate(c.ends):
                att.setdefault(e, []).append((c.label, i))
        for e, ps in att.items():
            if len(ps) != 2:
                raise DiagramError(f"edge {e!r} attached {len(ps)} times, need 2")
        self.edge_labels = sorted(att)
        # orient: at each crossing, ends[0] is incoming, ends[2] outgoing;
        # propagate to settle the (1,3) strand of every crossing.
        head: Dict[str, Tuple[str, int]] = {}
        tail: Dict[str, Tuple[str, int]] = {}

        def set_dir(e: str, tail_at: Tuple[str, int], head_at: Tuple[str, int]):
            if e in head:
                if head[e] != head_at or tail[e] != tail_at:
                    raise DiagramError(f"inconsistent orientation at edge {e!r}")
                return False
            head[e] = head_at
            tail[e] = tail_at
            return True

        for c in self.crossings.values():
            set_dir(c.ends[0], self._other(att, c.ends[0], (c.label, 0)), (c.label, 0))
            set_dir(c.ends[2], (c.label, 2), self._other(att, c.ends[2], (c.label, 2)))
        # propagate through (1,3) strands until stable
        changed = True
        while changed:
            changed = False
            for c in self.crossings.values():
                e1, e3 = c.ends[1], c.ends[3]
                in1 = head.get(e1) == (c.label, 1)
                out1 = tail.get(e1) == (c.label, 1)
                in3 = head.get(e3) == (c.label, 3)
                out3 = tail.get(e3) == (c.label, 3)
                if (in1 or out3) and not (in3 or out1):
                    if e1 not in head:
                        changed |= set_dir(e1, self._other(att, e1, (c.label, 1)), (c.label, 1))
                    if e3 not in head:
                        changed |= set_dir(e3, (c.label, 3), self._other(att, e3, (c.label, 3)))
                elif (in3 or out1) and not (in1 or out3):
                    if e3 not in head:
                        changed |= set_dir(e3, self._other(att, e3, (c.label, 3)), (c.label, 3))
                    if e1 not in head:
                        changed |= set_dir(e1, (c.label, 1), self._other(att, e1, (c.label, 1)))
        # components that never pass under are not anchored by the end-0 rule;
        # orient them in-at-end-1 at their smallest-labeled crossing
        while True:
            undecided = [e for e in self.edge_labels if e not in head]
            if not undecided:
                break
            anchor = None
            for cl in sorted(self.crossings):
                c = self.crossings[cl]
                if c.ends[1] in undecided and c.ends[3] in undecided:
                    anchor = c
                    break
            if anchor is None:
                raise DiagramError(
                    f"cannot orient edges {undecided}; strand data inconsistent"
                )
            set_dir(anchor.ends[1], self._other(att, anchor.ends[1], (anchor.label, 1)), (anchor.label, 1))
            if anchor.ends[3] not in head:
                set_dir(anchor.ends[3], (anchor.label, 3), self._other(att, anchor.ends[3], (anchor.label, 3)))
            changed = True
            while changed:
                changed = False
                for c in self.crossings.values():
                    e1, e3 = c.ends[1], c.ends[3]
                    in1 = head.get(e1) == (c.label, 1)
                    out1 = tail.get(e1) == (c.label, 1)
                    in3 = head.get(e3) == (c.label, 3)
                    out3 = tail.get(e3) == (c.label, 3)
                    if (in1 or out3) and not (in3 or out1):
                        if e1 not in head:
                            changed |= set_dir(e1, self._other(att, e1, (c.label, 1)), (c.label, 1))
                        if e3 not in head:
                            changed |= set_dir(e3, (c.label, 3), self._other(att, e3, (c.label, 3)))
                    elif (in3 or out1) and not (in1 or out3):
                        if e3 not in head:
                            changed |= set_dir(e3, self._other(att, e3, (c.label, 3)), (c.label, 3))
                        if e1 not in head:
                            changed |= set_dir(e1, (c.label, 1), self._other(att, e1, (c.label, 1)))
        # verify each crossing has coherent in/out pattern
        for c in self.crossings.values():
            ins = sum(1 for i, e in enumerate(c.ends) if head[e] == (c.label, i))
            outs = sum(1 for i, e in enumerate(c.ends) if tail[e] == (c.label, i))
            if ins != 2 or outs != 2:
                raise DiagramError(f"crossing {c.label!r} is not a transverse double point")
            if head[c.ends[0]] != (c.label, 0) or tail[c.ends[2]] != (c.label, 2):
                raise DiagramError(f"crossing {c.label!r}: end 0 must be incoming")
        self.head = head
        self.tail = tail
        self._trace_components()
        self._trace_faces()
        self._assign_basepoints()

    @staticmethod
    def _other(att, e, this):
        ps = [p for p in att[e] if p != this]
        if not ps:  # edge attached twice at the same (crossing, end): impossible
            ps = [this]
        return ps[0]

    def next_edge(self, c_label: str, in_end: int) -> str:
        """Edge the strand continues on after entering crossing at in_end."""
        return self.crossings[c_label].ends[(in_end + 2) % 4]

    def _trace_components(self):
        comp: Dict[str, int] = {}
        n = 0
        for e0 in self.edge_labels:
            if e0 in comp:
                continue
            e = e0
            while e not in comp:
                comp[e] = n
                c, i = self.head[e]
                e = self.next_edge(c, i)
            n += 1
        self.edge_component = comp
        self.n_components = n
        # connectivity of the 4-valent map
        seen = {self.edge_labels[0]}
        stack = [self.edge_labels[0]]
        while stack:
            e = stack.pop()
            for c, i in (self.head[e], self.tail[e]):
                for e2 in self.crossings[c].ends:
                    if e2 not in seen:
                        seen.add(e2)
                        stack.append(e2)
        if len(seen) != len(self.edge_labels):
            raise DiagramError("diagram is not connected")

    def _trace_faces(self):
        """Faces as orbits of the left-turn dart permutation; checks planarity."""
        darts: List[Dart] = []
        for e in self.edge_labels:
            darts.append((e, 1))
            darts.append((e, -1))
        self.darts = darts

        def arrive(d: Dart) -> Tuple[str, int]:
            e, s = d
            return self.head[e] if s == 1 else self.tail[e]

        def leave_end(c: str, i: int) -> Dart:
            e = self.crossings[c].ends[i]
            if self.tail[e] == (c, i):
                return (e, 1)
            if self.head[e] == (c, i):
                return (e, -1)
            raise AssertionError

        self._arrive = arrive
        self._leave_end = leave_end

        def next_dart(d: Dart) -> Dart:
            c, i = arrive(d)
            return leave_end(c, (i - 1) % 4)

        face_of: Dict[Dart, int] = {}
        faces: List[Tuple[Dart, ...]] = []
        for d0 in darts:
            if d0 in face_of:
                continue
            orbit = []
            d = d0
            while d not in face_of:
                face_of[d] = len(faces)
                orbit.append(d)
                d = next_dart(d)
            faces.append(tuple(orbit))
        self.faces = faces
        self.face_of_dart = face_of
        v = len(self.crossings)
        e = len(self.edge_labels)
        f = len(faces)
        if v - e + f != 2:
            raise DiagramError(f"rotation data is not planar (V-E+F = {v - e + f})")
        # quadrant -> face: quadrant (c, i) lies left of the dart leaving end i
        self.face_of_quadrant: Dict[Tuple[str, int], int] = {}
        for c in self.crossings.values():
            for i in range(4):
                d = leave_end(c.label, i)
                self.face_of_quadrant[(c.label, i)] = face_of[d]
        if self._outer_spec is not None:
            if self._outer_spec not in face_of:
                raise DiagramError(f"outer face dart {self._outer_spec!r} unknown")
            self.outer_face = face_of[self._outer_spec]
        else:
            # default: a face of maximal valence, ties broken by sorted darts
            best = max(range(f), key=lambda i: (len(faces[i]), faces[i]))
            self.outer_face = best

    def _assign_basepoints(self):
        by_edge: Dict[str, List[Basepoint]] = {}
        labels = set()
        for bp in self.basepoints:
            if bp.edge not in self.head:
                raise DiagramError(f"basepoint {bp.label!r} on unknown edge {bp.edge!r}")
            if bp.label in labels:
                raise DiagramError(f"duplicate basepoint label {bp.label!r}")
            labels.add(bp.label)
            by_edge.setdefault(bp.edge, []).append(bp)
        for e in by_edge:
            by_edge[e].sort(key=lambda b: b.offset)
        self.basepoints_by_edge = by_edge
        comps_with_bp = {self.edge_component[bp.edge] for bp in self.basepoints}
        if comps_with_bp != set(range(self.n_components)):
            raise DiagramError("every component needs at least one basepoint")

    # -- components / link grading ------------------------------------------

    def crossing_component_pair(self, label: str) -> Tuple[int, int]:
        """(over component, under component) of a crossing."""
        c = self.crossings[label]
        if c.under_first:
            return self.edge_component[c.ends[1]], self.edge_component[c.ends[0]]
        return self.edge_component[c.ends[0]], self.edge_component[c.ends[1]]

    # -- disks ---------------------------------------------------------------

    def enumerate_disks(self, pattern, region_cap: int = 8) -> DiskSearch:
        """All immersed disks with convex corners matching the sign pattern.

        Warnings report any pruning by the per-region traversal cap, so an
        incomplete search is visible rather than silent.
        """
        if isinstance(pattern, OnePositiveAt):
            start_label, extra_pos, second = pattern.crossing, 0, None
        elif isinstance(pattern, TwoPositiveAt):
            start_label, extra_pos, second = pattern.crossing, 1, pattern.second
        else:
            raise TypeError(pattern)
        if start_label not in self.crossings:
            raise DiagramError(f"unknown crossing {start_label!r}")
        start = self.crossings[start_label]
        disks: List[DiskBoundary] = []
        warnings: List[str] = []
        cap_hit = [False]

        for q in start.positive_quadrants():
            # corner at quadrant q: walk enters at end q+1 and leaves at end q
            first_dart = self._leave_end(start_label, q)
            close_end = (q + 1) % 4
            self._dfs(
                start_label,
                q,
                close_end,
                first_dart,
                extra_pos,
                second,
                region_cap,
                disks,
                cap_hit,
            )
        if cap_hit[0]:
            warnings.append(
                f"search pruned at region multiplicity cap {region_cap}; disks with "
                f"higher multiplicity, if any exist, were not enumerated"
            )
        disks.sort(key=lambda d: (len(d.word), d.word, d.start))
        # The pruning bounds are exact lower bounds on region multiplicity, so
        # the list is complete for the cap contract; warnings record cap hits.
        return DiskSearch(disks, complete=True, warnings=warnings)

    def _edge_events(self, dart: Dart) -> List[BaseEvent]:
        e, s = dart
        bps = self.basepoints_by_edge.get(e, [])
        if s == 1:
            return [("base", bp.label, 1) for bp in bps]
        return [("base", bp.label, -1) for bp in reversed(bps)]

    def _dfs(self, c0, q0, close_end, first_dart, extra_pos, second, cap, disks, cap_hit):
        # Sound pruning against the region cap: every traversal of a dart is a
        # boundary arc with the disk on its left, so winding(left face) is at
        # least the traversal count; every corner or straight pass covers its
        # quadrants' faces at least that many times.  Exceeding the cap on any
        # such lower bound means every completion has multiplicity beyond the
        # cap, which is outside the search contract.
        events: List[tuple] = []
        darts: List[Dart] = []
        dart_count: Dict[Dart, int] = {}
        cover: Dict[int, int] = {}  # face -> winding lower bound from coverage
        pos_used = [0]

        def bump(face: int, by: int) -> bool:
            cover[face] = cover.get(face, 0) + by
            return cover[face] <= cap

        def quad_faces(c: str, qs: Iterable[int]) -> List[int]:
            return [self.face_of_quadrant[(c, q)] for q in qs]

        def rec(d: Dart):
            if dart_count.get(d, 0) >= cap:
                cap_hit[0] = True
                return
            dart_count[d] = dart_count.get(d, 0) + 1
            darts.append(d)
            for ev in self._edge_events(d):
                events.append(ev)
            c, i = self._arrive(d)
            cross = self.crossings[c]
            # option 1: close up at the starting positive corner
            if c == c0 and i == close_end and pos_used[0] == extra_pos:
                self._try_emit(c0, q0, events, darts, disks)
            # option 2: pass straight through, covering quadrants i+2, i+3
            faces = quad_faces(c, [(i + 2) % 4, (i + 3) % 4])
            ok = True
            for f in faces:
                ok = bump(f, 1) and ok
            if ok:
                rec(self._leave_end(c, (i + 2) % 4))
            else:
                cap_hit[0] = True
            for f in faces:
                cover[f] -= 1
            # option 3: turn left through quadrant i-1
            qq = (i - 1) % 4
            sign = 1 if qq in cross.positive_quadrants() else -1
            allowed = sign < 0 or (
                pos_used[0] < extra_pos and (second is None or c == second)
            )
            if allowed:
                f = self.face_of_quadrant[(c, qq)]
                if bump(f, 1):
                    if sign > 0:
                        pos_used[0] += 1
                    events.append(("corner", c, qq, sign))
                    rec(self._leave_end(c, qq))
                    events.pop()
                    if sign > 0:
                        pos_used[0] -= 1
                else:
                    cap_hit[0] = True
                cover[f] -= 1
            dart_count[d] -= 1
            darts.pop()
            for _ in self._edge_events(d):
                events.pop()

        # the starting positive corner covers its quadrant once
        bump(self.face_of_quadrant[(c0, q0)], 1)
        rec(first_dart)

    def _try_emit(self, c0, q0, events, darts, disks):
        mult = self._winding(darts)
        if mult is None:
            return
        if not self._euler_ok(c0, q0, events, darts, mult):
            return
        db = DiskBoundary(
            start=(c0, q0),
            events=tuple(events),
            darts=tuple(darts),
            multiplicities={f: m for f, m in mult.items() if m},
        )
        disks.append(db)

    def _winding(self, darts: Sequence[Dart]) -> Optional[Dict[int, int]]:
        """Winding number per face from boundary jumps; None if any is negative."""
        net: Dict[str, int] = {}
        for e, s in darts:
            net[e] = net.get(e, 0) + s
        # m(left of forward dart) - m(right) = net(e); propagate from outer = 0
        mult: Dict[int, int] = {self.outer_face: 0}
        stack = [self.outer_face]
        adj: Dict[int, List[Tuple[int, int]]] = {}
        for e in self.edge_labels:
            fl = self.face_of_dart[(e, 1)]
            fr = self.face_of_dart[(e, -1)]
            n = net.get(e, 0)
            adj.setdefault(fl, []).append((fr, -n))
            adj.setdefault(fr, []).append((fl, n))
        while stack:
            f = stack.pop()
            for g, dm in adj.get(f, []):
                m = mult[f] + dm
                if g in mult:
                    if mult[g] != m:
                        return None  # inconsistent jumps: not a closed curve
                else:
                    mult[g] = m
                    stack.append(g)
        if any(m < 0 for m in mult.values()):
            return None
        return mult

    def _euler_ok(self, c0, q0, events, darts, mult) -> bool:
        """Euler characteristic of the pulled-back cell structure equals 1."""
        f_total = sum(mult.values())
        # edge sheets
        b: Dict[str, int] = {}
        for e, _s in darts:
            b[e] = b.get(e, 0) + 1
        e_total = 0
        for e in self.edge_labels:
            ml = mult.get(self.face_of_dart[(e, 1)], 0)
            mr = mult.get(self.face_of_dart[(e, -1)], 0)
            be = b.get(e, 0)
            twice_interior = ml + mr - be
            if twice_interior < 0 or twice_interior % 2:
                return False
            e_total += twice_interior // 2 + be
        # vertex sheets
        corners: Dict[Tuple[str, int], int] = {}
        corners[(c0, q0)] = 1
        for ev in events:
            if ev[0] == "corner":
                key = (ev[1], ev[2])
                corners[key] = corners.get(key, 0) + 1
        # straight passes: reconstruct arrivals/departures per crossing
        passes: Dict[Tuple[str, int], int] = {}  # (crossing, entering end) for straights
        seq = list(darts)
        for k, d in enumerate(seq):
            c, i = self._arrive(d)
            nxt = seq[(k + 1) % len(seq)]
            # a left turn exits at end i-1, a straight pass at i+2; the exit
            # darts differ even on loop edges, so the comparison is unambiguous
            if nxt == self._leave_end(c, (i + 2) % 4):
                passes[(c, i)] = passes.get((c, i), 0) + 1
        v_total = 0
        for c in self.crossings.values():
            cl = c.label
            cover = [mult.get(self.face_of_quadrant[(cl, j)], 0) for j in range(4)]
            # straight pass entering end i covers quadrants i+2, i+3
            sp = [passes.get((cl, i), 0) for i in range(4)]
            kq = [corners.get((cl, j), 0) for j in range(4)]
            interior = None
            for j in range(4):
                cov_from_passes = sp[(j - 2) % 4] + sp[(j - 3) % 4]
                v = cover[j] - cov_from_passes - kq[j]
                if v < 0:
                    return False
                if interior is None:
                    interior = v
                elif interior != v:
                    return False
            v_total += interior + sum(sp) + sum(kq)
        return v_total - e_total + f_total == 1

    # -- immersion re-trace validator ---------------------------------------

    def validate_disk(self, disk: DiskBoundary) -> bool:
        """Independent re-trace: the walk closes up and every corner is convex."""
        c0, q0 = disk.start
        cur = self._leave_end(c0, q0)
        ev = list(disk.events)
        for want in disk.darts:
            if want != cur:
                return False
            c, i = self._arrive(cur)
            for bev in self._edge_events(cur):
                if not ev or ev[0] != bev:
                    return False
                ev.pop(0)
            if ev and ev[0][0] == "corner":
                cc, qq, sign = ev[0][1], ev[0][2], ev[0][3]
                if cc == c and qq == (i - 1) % 4:
                    # a convex left turn; in/out strands must differ locally
                    ev.pop(0)
                    cur = self._leave_end(c, qq)
                    continue
            cur = self._leave_end(c, (i + 2) % 4)
        if ev:
            return False
        c, i = self._arrive(disk.darts[-1])
        return c == c0 and i == (q0 + 1) % 4

    # -- gradings -------------------------------------------------------------

    def chord_gradings(self, region_cap: int = 8) -> Dict[str, int]:
        """Gradings mod 2*rotation; overrides verbatim, else from edge potentials.

        Every enumerated differential disk is checked against the degree -1
        law; an inconsistent assignment raises with the offending disk.
        """
        modulus = 2 * self.rotation if self.rotation else 0
        grades: Dict[str, int] = {}
        for cl, c in sorted(self.crossings.items()):
            if cl in self.grading_overrides:
                g = self.grading_overrides[cl]
            elif self.maslov_potential:
                over_ends = c.over_ends()
                over_in = next(
                    (
                        c.ends[i]
                        for i in over_ends
                        if self.head[c.ends[i]] == (cl, i)
                    ),
                    None,
                )
                under_in = c.ends[0] if c.under_first else next(
                    c.ends[i] for i in (1, 3) if self.head[c.ends[i]] == (cl, i)
                )
                if over_in is None:
                    raise DiagramError(f"no incoming over edge at {cl!r}")
                try:
                    g = self.maslov_potential[over_in] - self.maslov_potential[under_in]
                except KeyError as exc:
                    raise DiagramError(f"missing maslov potential for edge {exc}") from exc
            else:
                raise DiagramError(f"no grading data for crossing {cl!r}")
            grades[cl] = g % modulus if modulus else g
        for cl in sorted(self.crossings):
            for disk in self.enumerate_disks(OnePositiveAt(cl), region_cap).disks:
                total = 0
                for letter in disk.word:
                    if letter in grades:
                        total += grades[letter]
                want = grades[cl] - 1
                if modulus:
                    if (total - want) % modulus:
                        raise DiagramError(
                            f"grading violates degree -1 law at disk {disk.word!r} of {cl!r}"
                        )
                elif total != want:
                    raise DiagramError(
                        f"grading violates degree -1 law at disk {disk.word!r} of {cl!r}"
                    )
        return grades

    # -- areas / chord length (Stokes) ----------------------------------------

    def face_key(self, face_id: int) -> Dart:
        return min(self.faces[face_id])

    def face_areas(self) -> Optional[Dict[int, Fraction]]:
        if not self._area_spec:
            return None
        out: Dict[int, Fraction] = {}
        for dart, a in self._area_spec.items():
            if dart not in self.face_of_dart:
                raise DiagramError(f"area references unknown dart {dart!r}")
            fid = self.face_of_dart[dart]
            if fid == self.outer_face:
                raise DiagramError("outer face cannot carry an area")
            if fid in out and out[fid] != a:
                raise DiagramError("conflicting areas for one face")
            out[fid] = Fraction(a)
        missing = [
            f for f in range(len(self.faces)) if f != self.outer_face and f not in out
        ]
        if missing:
            raise DiagramError(f"missing areas for faces {missing}")
        if any(a <= 0 for a in out.values()):
            raise DiagramError("face areas must be positive")
        return out

    def disk_area(self, disk: DiskBoundary, areas: Dict[int, Fraction]) -> Fraction:
        return sum(
            (areas[f] * m for f, m in disk.multiplicities.items()), Fraction(0)
        )

    # -- serialization --------------------------------------------------------

    def serialize(self) -> str:
        lines = [f"rotation: {self.rotation}", "crossings:"]
        for cl in sorted(self.crossings):
            c = self.crossings[cl]
            flag = "u" if c.under_first else "o"
            lines.append(f"  {cl} = {' '.join(c.ends)} {flag}")
        if self.basepoints:
            lines.append("basepoints:")
            for bp in sorted(self.basepoints, key=lambda b: b.label):
                lines.append(f"  {bp.label} = {bp.edge} {bp.offset}")
        if self.maslov_potential or self.grading_overrides:
            lines.append("maslov:")
            for e in sorted(self.maslov_potential):
                lines.append(f"  {e} = {self.maslov_potential[e]}")
            for cl in sorted(self.grading_overrides):
                lines.append(f"  override {cl} = {self.grading_overrides[cl]}")
        if self._area_spec:
            lines.append("areas:")
            for (e, s), a in sorted(self._area_spec.items()):
                lines.append(f"  {e} {'+' if s == 1 else '-'} = {a}")
        if self._outer_spec is not None:
            e, s = self._outer_spec
            lines.append(f"outer: {e} {'+' if s == 1 else '-'}")
        return "\n".join(lines) + "\n"


def parse_diagram(text: str) -> LagrangianDiagram:
    """Parse the line-oriented diagram format; see LagrangianDiagram.serialize."""
    rotation = 0
    crossings: List[Crossing] = []
    basepoints: List[Basepoint] = []
    potential: Dict[str, int] = {}
    overrides: Dict[str, int] = {}
    areas: Dict[Tuple[str, int], Fraction] = {}
    outer: Optional[Dart] = None
    section = None
    seen_crossings = set()
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            if line.endswith(":") and " " not in line:
                section = line[:-1]
                if section not in ("crossings", "basepoints", "maslov", "areas"):
                    raise DiagramError(f"unknown section {section!r}")
                continue
            if line.startswith("rotation:"):
                rotation = int(line.split(":", 1)[1])
                section = None
                continue
            if line.startswith("outer:"):
                e, s = line.split(":", 1)[1].split()
                outer = (e, 1 if s == "+" else -1)
                section = None
                continue
            if section == "crossings":
                name, rest = (x.strip() for x in line.split("=", 1))
                parts = rest.split()
                flag = "u"
                if parts and parts[-1] in ("u", "o"):
                    flag = parts[-1]
                    parts = parts[:-1]
                if len(parts) != 4:
                    raise DiagramError("crossing needs four edge ends")
                if name in seen_crossings:
                    raise DiagramError(f"repeated crossing label {name!r}")
                seen_crossings.add(name)
                crossings.append(Crossing(name, tuple(parts), flag == "u"))
            elif section == "basepoints":
                name, rest = (x.strip() for x in line.split("=", 1))
                edge, off = rest.split()
                basepoints.append(Basepoint(name, edge, Fraction(off)))
            elif section == "maslov":
                if line.startswith("override"):
                    _, name, _, val = line.split()
                    overrides[name] = int(val)
                else:
                    name, val = (x.strip() for x in line.split("=", 1))
                    potential[name] = int(val)
            elif section == "areas":
                lhs, val = (x.strip() for x in line.split("=", 1))
                e, s = lhs.split()
                areas[(e, 1 if s == "+" else -1)] = Fraction(val)
            else:
                raise DiagramError(f"statement outside any section: {line!r}")
        except DiagramError:
            raise
        except Exception as exc:
            raise DiagramError(f"line {ln}: cannot parse {line!r}: {exc}") from exc
    if not crossings:
        raise DiagramError("no crossings")
    return LagrangianDiagram(
        crossings,
        basepoints,
        rotation=rotation,
        maslov_potential=potential,
        grading_overrides=overrides,
        areas=areas,
        outer=outer,
    )


def derive_chord_lengths(
    diag: LagrangianDiagram, region_cap: int = 8
) -> Dict[str, Fraction]:
    """Chord lengths from face areas via Stokes: len(pos) - sum(neg) = disk area.

    Solves the linear system over all one-positive disks; raises if the areas
    are inconsistent or any derived length fails to be positive.
    """
    areas = diag.face_areas()
    if areas is None:
        raise DiagramError("no areas supplied")
    labels = sorted(diag.crossings)
    index = {c: i for i, c in enumerate(labels)}
    rows: List[List[Fraction]] = []
    rhs: List[Fraction] = []
    origins: List[Tuple[str, Tuple[str, ...]]] = []
    for cl in labels:
        search = diag.enumerate_disks(OnePositiveAt(cl), region_cap)
        if not search.complete:
            raise DiagramError("disk search incomplete; cannot derive lengths")
        for disk in search.disks:
            row = [Fraction(0)] * len(labels)
            row[index[cl]] += 1
            for letter in disk.word:
                if letter in index:
                    row[index[letter]] -= 1
            rows.append(row)
            rhs.append(diag.disk_area(disk, areas))
            origins.append((cl, disk.word))
    # Gaussian elimination over Q
    m = [row + [b] for row, b in zip(rows, rhs)]
    n = len(labels)
    pivot_of: Dict[int, int] = {}
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col] != 0:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivot_of[col] = r
        r += 1
    for i in range(r, len(m)):
        if m[i][n] != 0:
            raise DiagramError(
                f"areas inconsistent with Stokes at disk {origins[min(i, len(origins)-1)]}"
            )
    free_cols = [c for c in range(n) if c not in pivot_of]

    def assign(free_vals: Dict[int, Fraction]) -> Dict[str, Fraction]:
        out = {}
        for col, cl in enumerate(labels):
            if col in pivot_of:
                v = m[pivot_of[col]][n]
                for fc in free_cols:
                    v -= m[pivot_of[col]][fc] * free_vals[fc]
                out[cl] = v
            else:
                out[cl] = free_vals[col]
        return out

    # the disk system may leave chord lengths underdetermined; scan small
    # nonnegative values for the free ones until everything is nonnegative
    from itertools import product as iproduct

    grid = [Fraction(x) for x in (0, 1, 2, 4, 8, 16, 32)]
    lengths = None
    for vals in iproduct(grid, repeat=len(free_cols)):
        cand = assign(dict(zip(free_cols, vals)))
        if all(v >= 0 for v in cand.values()):
            lengths = cand
            break
    if lengths is None:
        raise DiagramError("no nonnegative chord-length solution for the areas")
    for row, b, origin in zip(rows, rhs, origins):
        lhs = sum(c * lengths[l] for c, l in zip(row, labels))
        if lhs != b:
            raise DiagramError(f"length system violated at disk {origin}")
    return lengths
