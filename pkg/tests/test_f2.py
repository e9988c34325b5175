"""Linear algebra layer: rank/kernel oracles, homology, induced maps."""

from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from legch import f2
from legch.f2 import ChainComplex, F2Matrix, GradedF2Space


def naive_rank(rows, ncols):
    """Plain row reduction written independently of the library path."""
    work = [list((r >> j) & 1 for j in range(ncols)) for r in rows]
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, len(work)):
            if work[i][col]:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        for i in range(len(work)):
            if i != r and work[i][col]:
                work[i] = [a ^ b for a, b in zip(work[i], work[r])]
        r += 1
    return r


def test_rank_identity():
    assert f2.rank(F2Matrix.identity(3)) == 3


def test_rank_zero():
    assert f2.rank(F2Matrix.zero(4, 5)) == 0


def test_rank_random_vs_oracle():
    rng = random.Random(20250810)
    for _ in range(50):
        rows = [rng.getrandbits(6) for _ in range(6)]
        assert f2.rank(F2Matrix(rows, 6)) == naive_rank(rows, 6)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=255), min_size=1, max_size=8))
def test_rank_nullity(rows):
    m = F2Matrix(rows, 8)
    assert f2.rank(m) + len(f2.kernel_basis(m)) == m.nrows


def test_solve_roundtrip():
    rng = random.Random(7)
    m = F2Matrix([rng.getrandbits(10) for _ in range(8)], 10)
    x = rng.getrandbits(8)
    target = m.apply(x)
    sol = f2.solve(m, target)
    assert sol is not None
    assert m.apply(sol) == target
    assert f2.solve(F2Matrix([1], 1), 2 | 1) is None


def figure8_linearized_complex():
    # linear part of the twisted differential of the running 7-chord example:
    # d(a4) = a2 + a3, d(a6) = a5, d(a7) = a5, rest zero.
    sp = GradedF2Space(
        basis=("a1", "a2", "a3", "a4", "a5", "a6", "a7"),
        gradings=(1, -1, -1, 0, 0, 1, 1),
    )
    d = {
        "a4": frozenset({"a2", "a3"}),
        "a6": frozenset({"a5"}),
        "a7": frozenset({"a5"}),
    }
    return ChainComplex(sp, d, d_degree=-1)


def test_homology_figure8_dims():
    cx = figure8_linearized_complex()
    dims = cx.homology_dims()
    assert dims == {1: 2, -1: 1}


def test_homology_figure8_reps():
    cx = figure8_linearized_complex()
    h = cx.homology()
    assert h[1][1] == [frozenset({"a1"}), frozenset({"a6", "a7"})]
    assert h[-1][1] == [frozenset({"a2"})]


def test_homology_zero_differential():
    sp = GradedF2Space(("x", "y", "z"), (0, 0, 1))
    cx = ChainComplex(sp, {}, d_degree=-1)
    assert cx.homology_dims() == {0: 2, 1: 1}


def test_homology_random_rank_nullity():
    rng = random.Random(99)
    for _ in range(20):
        n = rng.randrange(2, 7)
        labels = tuple(f"g{i}" for i in range(2 * n))
        gradings = tuple([0] * n + [1] * n)
        sp = GradedF2Space(labels, gradings)
        d = {}
        rows = []
        for i in range(n):
            img = frozenset(labels[j] for j in range(n) if rng.random() < 0.4)
            d[labels[n + i]] = img
            rows.append(sp.to_bits(img))
        cx = ChainComplex(sp, d, d_degree=-1)
        r = naive_rank(rows, 2 * n)
        dims = cx.homology_dims()
        assert dims.get(0, 0) == n - r
        assert dims.get(1, 0) == n - r


def test_d_squared_rejected():
    sp = GradedF2Space(("a", "b", "c"), (2, 1, 0))
    d = {"a": frozenset({"b"}), "b": frozenset({"c"})}
    with pytest.raises(ValueError):
        ChainComplex(sp, d, d_degree=-1)


def test_inhomogeneous_rejected():
    sp = GradedF2Space(("a", "b"), (2, 0))
    with pytest.raises(ValueError):
        ChainComplex(sp, {"a": frozenset({"b"})}, d_degree=-1)


def test_mod2_grading_complex():
    sp = GradedF2Space(("a", "b"), (1, 0), modulus=2)
    cx = ChainComplex(sp, {"a": frozenset({"b"})}, d_degree=-1)
    assert cx.homology_dims() == {}


def test_induced_map_identity():
    cx = figure8_linearized_complex()
    ident = {g: frozenset({g}) for g in cx.space.basis}
    mats = f2.induced_map_on_homology(ident, cx, cx)
    for m in mats.values():
        assert m == F2Matrix.identity(m.nrows)
    assert f2.is_quasi_iso(ident, cx, cx)


def test_induced_map_rejects_non_chain_map():
    cx = figure8_linearized_complex()
    bad = {"a4": frozenset({"a1"})}
    with pytest.raises(ValueError):
        f2.induced_map_on_homology(bad, cx, cx)


def test_zero_map_on_acyclic_is_quasi_iso():
    sp = GradedF2Space(("a", "b"), (1, 0))
    cx = ChainComplex(sp, {"a": frozenset({"b"})}, d_degree=-1)
    assert cx.is_acyclic()
    assert f2.is_quasi_iso({}, cx, cx)


def test_homology_invariant_under_basis_permutation():
    rng = random.Random(5)
    cx = figure8_linearized_complex()
    order = list(range(7))
    rng.shuffle(order)
    labels = tuple(cx.space.basis[i] for i in order)
    gradings = tuple(cx.space.gradings[i] for i in order)
    sp = GradedF2Space(labels, gradings)
    cx2 = ChainComplex(sp, cx.d, d_degree=-1)
    assert cx.homology_dims() == cx2.homology_dims()


def test_chain_contraction_identity():
    cx = figure8_linearized_complex()
    p, h = f2.chain_contraction(cx)
    sp = cx.space
    for i, g in enumerate(sp.basis):
        e = 1 << i
        dh = cx.d_bits(sp.to_bits(h[g]))
        hd = 0
        for x in cx.d[g]:
            hd ^= sp.to_bits(h[x])
        assert dh ^ hd == e ^ sp.to_bits(p[g])
    # p projects onto cycles and kills boundaries
    for g in sp.basis:
        assert cx.d_bits(sp.to_bits(p[g])) == 0
