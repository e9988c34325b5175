"""Exact linear algebra over F2 with bit-packed rows, plus graded chain complexes.

Vectors are python ints used as bitsets over a fixed ordered basis; matrices
are lists of row bitsets.  Everything is immutable-by-convention and pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple


class F2Matrix:
    """Matrix over F2; rows are int bitsets, bit j = column j."""

    def __init__(self, rows: Sequence[int], ncols: int):
        self.rows = list(rows)
        self.ncols = ncols

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @classmethod
    def zero(cls, nrows: int, ncols: int) -> "F2Matrix":
        return cls([0] * nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "F2Matrix":
        return cls([1 << i for i in range(n)], n)

    def column(self, j: int) -> int:
        out = 0
        for i, r in enumerate(self.rows):
            if (r >> j) & 1:
                out |= 1 << i
        return out

    def transpose(self) -> "F2Matrix":
        return F2Matrix([self.column(j) for j in range(self.ncols)], self.nrows)

    def apply(self, vec: int) -> int:
        """Treat rows as images of basis vectors: maps e_i -> rows[i]."""
        out = 0
        i = 0
        while vec:
            if vec & 1:
                out ^= self.rows[i]
            vec >>= 1
            i += 1
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, F2Matrix)
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __repr__(self) -> str:
        return f"F2Matrix({self.nrows}x{self.ncols})"


def row_reduce(rows: Sequence[int]) -> Tuple[List[int], List[int]]:
    """Reduced row echelon form.  Returns (nonzero rows, their pivot columns)."""
    basis: List[int] = []
    pivots: List[int] = []
    for row in rows:
        for b, p in zip(basis, pivots):
            if (row >> p) & 1:
                row ^= b
        if row:
            # pivot = lowest set bit, so pivots follow input basis order
            p = (row & -row).bit_length() - 1
            for i in range(len(basis)):
                if (basis[i] >> p) & 1:
                    basis[i] ^= row
            basis.append(row)
            pivots.append(p)
    order = sorted(range(len(pivots)), key=lambda i: pivots[i])
    return [basis[i] for i in order], [pivots[i] for i in order]


def rank(m: F2Matrix) -> int:
    return len(row_reduce(m.rows)[0])


def kernel_basis(m: F2Matrix) -> List[int]:
    """Basis of {v : v * M = 0} for v a row vector combining rows of M.

    Interpreting rows[i] as the image of basis vector e_i, this is ker of the
    map e_i -> rows[i].
    """
    n = m.nrows
    # Row reduce while tracking the combination that produced each row.
    basis: List[int] = []
    pivots: List[int] = []
    combos: List[int] = []
    kernel: List[int] = []
    for i in range(n):
        row = m.rows[i]
        combo = 1 << i
        for b, p, c in zip(basis, pivots, combos):
            if (row >> p) & 1:
                row ^= b
                combo ^= c
        if row:
            p = (row & -row).bit_length() - 1
            basis.append(row)
            pivots.append(p)
            combos.append(combo)
        else:
            kernel.append(combo)
    return kernel


def solve(m: F2Matrix, target: int) -> Optional[int]:
    """Find x (bitset over rows) with XOR of chosen rows == target, or None."""
    basis: List[int] = []
    pivots: List[int] = []
    combos: List[int] = []
    for i, row in enumerate(m.rows):
        combo = 1 << i
        for b, p, c in zip(basis, pivots, combos):
            if (row >> p) & 1:
                row ^= b
                combo ^= c
        if row:
            basis.append(row)
            pivots.append((row & -row).bit_length() - 1)
            combos.append(combo)
    out = 0
    for b, p, c in zip(basis, pivots, combos):
        if (target >> p) & 1:
            target ^= b
            out ^= c
    return out if target == 0 else None


def in_span(rows: Sequence[int], vec: int) -> bool:
    for b, p in zip(*row_reduce(rows)):
        if (vec >> p) & 1:
            vec ^= b
    return vec == 0


@dataclass(frozen=True)
class GradedF2Space:
    """Ordered basis with integer gradings, reduced mod `modulus` when > 0."""

    basis: Tuple[object, ...]
    gradings: Tuple[int, ...]
    modulus: int = 0  # 2r; 0 means Z-graded

    def __post_init__(self):
        if len(set(self.basis)) != len(self.basis):
            raise ValueError("duplicate basis labels")
        if self.modulus:
            object.__setattr__(
                self, "gradings", tuple(g % self.modulus for g in self.gradings)
            )

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, label) -> int:
        return self.basis.index(label)

    def grading(self, label) -> int:
        return self.gradings[self.basis.index(label)]

    def degrees(self) -> List[int]:
        return sorted(set(self.gradings))

    def reduce_degree(self, d: int) -> int:
        return d % self.modulus if self.modulus else d

    def to_bits(self, element: Iterable[object]) -> int:
        out = 0
        for label in element:
            out ^= 1 << self.basis.index(label)
        return out

    def from_bits(self, bits: int) -> FrozenSet[object]:
        out = []
        i = 0
        while bits:
            if bits & 1:
                out.append(self.basis[i])
            bits >>= 1
            i += 1
        return frozenset(out)


class ChainComplex:
    """Graded F2 space with a degree-homogeneous differential d, d*d = 0."""

    def __init__(self, space: GradedF2Space, d: Dict[object, FrozenSet[object]], d_degree: int):
        self.space = space
        self.d_degree = d_degree
        self.d = {g: frozenset(d.get(g, frozenset())) for g in space.basis}
        self._check()

    def _check(self):
        sp = self.space
        for g in sp.basis:
            want = sp.reduce_degree(sp.grading(g) + self.d_degree)
            for h in self.d[g]:
                if sp.grading(h) != want:
                    raise ValueError(f"d not homogeneous of degree {self.d_degree} at {g!r} -> {h!r}")
        for g in sp.basis:
            acc = 0
            for h in self.d[g]:
                acc ^= sp.to_bits(self.d[h])
            if acc:
                raise ValueError(f"d^2 != 0 at generator {g!r}")

    def d_bits(self, bits: int) -> int:
        out = 0
        i = 0
        while bits:
            if bits & 1:
                out ^= self.space.to_bits(self.d[self.space.basis[i]])
            bits >>= 1
            i += 1
        return out

    def degree_indices(self, deg: int) -> List[int]:
        deg = self.space.reduce_degree(deg)
        return [i for i, g in enumerate(self.space.gradings) if g == deg]

    def cycles(self, deg: int) -> List[int]:
        """Echelon basis of ker(d) in degree deg, as bitsets over the full space."""
        idx = self.degree_indices(deg)
        if not idx:
            return []
        rows = [self.d_bits(1 << i) for i in idx]
        ker = kernel_basis(F2Matrix(rows, self.space.dim))
        out = []
        for combo in ker:
            vec = 0
            j = 0
            while combo:
                if combo & 1:
                    vec ^= 1 << idx[j]
                combo >>= 1
                j += 1
            out.append(vec)
        return sorted(out)

    def boundaries(self, deg: int) -> List[int]:
        """Echelon basis of im(d) in degree deg."""
        src = self.degree_indices(self.space.reduce_degree(deg - self.d_degree))
        rows = [self.d_bits(1 << i) for i in src]
        return row_reduce(rows)[0]

    def homology(self) -> Dict[int, Tuple[int, List[FrozenSet[object]]]]:
        """Per degree: (dimension, representative cycles).

        Representatives: single input-basis generators are preferred, in input
        order; remaining classes get echelon kernel cycles.  Deterministic.
        """
        out: Dict[int, Tuple[int, List[FrozenSet[object]]]] = {}
        for deg in self.space.degrees():
            zs = self.cycles(deg)
            bs = self.boundaries(deg)
            dim = len(zs) - len(bs)
            reps: List[int] = []
            span = list(bs)
            if dim > 0:
                candidates = [1 << i for i in self.degree_indices(deg)] + zs
                cycset = self._cycle_span(zs)
                for cand in candidates:
                    if len(reps) == dim:
                        break
                    if not self._in(cycset, cand):
                        continue
                    if self._in(span, cand):
                        continue
                    reps.append(cand)
                    span = row_reduce(span + [cand])[0]
            if dim > 0:
                out[deg] = (dim, [self.space.from_bits(r) for r in reps])
        return out

    def homology_dims(self) -> Dict[int, int]:
        return {d: v[0] for d, v in self.homology().items()}

    def is_acyclic(self) -> bool:
        return not self.homology_dims()

    @staticmethod
    def _cycle_span(zs: List[int]) -> List[int]:
        return row_reduce(zs)[0]

    @staticmethod
    def _in(span: List[int], vec: int) -> bool:
        return in_span(span, vec)


def check_chain_map(
    f: Dict[object, FrozenSet[object]],
    src: ChainComplex,
    dst: ChainComplex,
    degree_shift: int = 0,
) -> bool:
    """True iff f is homogeneous of the given degree and commutes with d."""
    for g in src.space.basis:
        want = dst.space.reduce_degree(src.space.grading(g) + degree_shift)
        for h in f.get(g, frozenset()):
            if dst.space.grading(h) != want:
                return False
    for g in src.space.basis:
        lhs = 0
        for h in src.d[g]:
            lhs ^= dst.space.to_bits(f.get(h, frozenset()))
        rhs = dst.d_bits(dst.space.to_bits(f.get(g, frozenset())))
        if lhs != rhs:
            return False
    return True


def induced_map_on_homology(
    f: Dict[object, FrozenSet[object]],
    src: ChainComplex,
    dst: ChainComplex,
    degree_shift: int = 0,
) -> Dict[int, F2Matrix]:
    """Matrix of [f] per degree, in the chosen homology representative bases.

    f sends degree d of src to degree d + degree_shift of dst.  Raises if
    f is not a chain map.
    """
    if not check_chain_map(f, src, dst, degree_shift):
        raise ValueError("not a chain map")
    hs = src.homology()
    hd = dst.homology()
    out: Dict[int, F2Matrix] = {}
    for deg in sorted(set(hs) | {dst.space.reduce_degree(d - degree_shift) for d in hd}):
        sreps = hs.get(deg, (0, []))[1]
        ddeg = dst.space.reduce_degree(deg + degree_shift)
        dreps = hd.get(ddeg, (0, []))[1]
        drep_bits = [dst.space.to_bits(r) for r in dreps]
        bnd = dst.boundaries(ddeg)
        rows = []
        for rep in sreps:
            img = 0
            for g in rep:
                img ^= dst.space.to_bits(f.get(g, frozenset()))
            # express [img] in the chosen representative basis modulo boundaries
            mat = F2Matrix(drep_bits + bnd, dst.space.dim)
            sol = solve(mat, img)
            if sol is None:
                raise ValueError("image is not a cycle class")
            rows.append(sol & ((1 << len(drep_bits)) - 1))
        out[deg] = F2Matrix(rows, len(dreps))
    return out


def is_quasi_iso(
    f: Dict[object, FrozenSet[object]],
    src: ChainComplex,
    dst: ChainComplex,
    degree_shift: int = 0,
) -> bool:
    mats = induced_map_on_homology(f, src, dst, degree_shift)
    for m in mats.values():
        if m.nrows != m.ncols or rank(m) != m.nrows:
            return False
    return True


def chain_contraction(cx: ChainComplex) -> Tuple[Dict, Dict]:
    """Harmonic projection p and homotopy h with d h + h d = 1 + p.

    p projects onto chosen harmonic representatives; both returned as
    basis-level tables {generator: frozenset}.
    """
    sp = cx.space
    n = sp.dim
    p_rows = [0] * n
    h_rows = [0] * n
    for deg in sp.degrees():
        idx = cx.degree_indices(deg)
        if not idx:
            continue
        zs = cx.cycles(deg)
        bs_pairs = []  # (boundary vector in this degree, a preimage vector)
        src_idx = cx.degree_indices(sp.reduce_degree(deg - cx.d_degree))
        seen: List[int] = []
        pivcols: List[int] = []
        pre: List[int] = []
        for i in src_idx:
            v = cx.d_bits(1 << i)
            c = 1 << i
            for b, pv, cc in zip(seen, pivcols, pre):
                if (v >> pv) & 1:
                    v ^= b
                    c ^= cc
            if v:
                seen.append(v)
                pivcols.append((v & -v).bit_length() - 1)
                pre.append(c)
                bs_pairs.append((v, c))
        bspan = [v for v, _ in bs_pairs]
        # harmonic representatives: echelon complement of boundaries in cycles
        harm: List[int] = []
        span = list(bspan)
        for z in zs:
            if not in_span(span, z):
                harm.append(z)
                span = row_reduce(span + [z])[0]
        # decompose each basis vector e_i of this degree
        zspan = row_reduce(zs)[0]
        comp: List[int] = []  # complement of cycles
        span2 = list(zspan)
        for i in idx:
            if not in_span(span2, 1 << i):
                comp.append(1 << i)
                span2 = row_reduce(span2 + [1 << i])[0]
        # Build a solver basis: boundaries (with preimages), harmonics, complement.
        cols = [(v, ("b", c)) for v, c in bs_pairs]
        cols += [(v, ("h", v)) for v in harm]
        cols += [(v, ("c", v)) for v in comp]
        mat = F2Matrix([v for v, _ in cols], n)
        for i in idx:
            sol = solve(mat, 1 << i)
            assert sol is not None
            pj = 0
            hj = 0
            j = 0
            s = sol
            while s:
                if s & 1:
                    kind, payload = cols[j][1]
                    if kind == "h":
                        pj ^= payload
                    elif kind == "b":
                        hj ^= payload
                s >>= 1
                j += 1
            p_rows[i] = pj
            h_rows[i] = hj
    p = {sp.basis[i]: sp.from_bits(p_rows[i]) for i in range(n)}
    h = {sp.basis[i]: sp.from_bits(h_rows[i]) for i in range(n)}
    return p, h
