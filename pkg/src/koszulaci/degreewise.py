"""Degreewise linear algebra on graded free modules over S = F_p[x_1..x_n].

A graded vector is a tuple of homogeneous polynomials against a twist list.
The key routine computes a minimal generating set of the kernel of a graded
map between free modules: the kernel's Hilbert slices are numpy nullspaces,
new generators are kernel elements outside the span already generated in
lower degrees, and a Groebner pair bound on the presented submodule caps the
degrees that need scanning.
"""

from __future__ import annotations

import numpy as np

from . import linalg
from .engine import ModuleEngine
from .ring import GREVLEX, Polynomial, Ring, m_mul


def vector_degree(vec, twists):
    """Internal degree of a homogeneous vector, or None if zero."""
    deg = None
    for f, tw in zip(vec, twists):
        if f.is_zero():
            continue
        if not f.is_homogeneous():
            raise ValueError("vector entry is not homogeneous")
        d = f.degree() + tw
        if deg is None:
            deg = d
        elif d != deg:
            raise ValueError("vector is not homogeneous")
    return deg


class DegreeBasis:
    """Monomial basis of one graded slice of a free module, with index maps."""

    def __init__(self, ring: Ring, twists, d: int):
        self.ring = ring
        self.twists = twists
        self.d = d
        self.items = []  # (slot, monomial)
        for slot, tw in enumerate(twists):
            if d - tw < 0:
                continue
            for m in ring.monomials_of_degree(d - tw):
                self.items.append((slot, m))
        self.index = {sm: i for i, sm in enumerate(self.items)}

    def __len__(self):
        return len(self.items)

    def vector_row(self, vec) -> np.ndarray:
        row = np.zeros(len(self.items), dtype=np.int64)
        for slot, f in enumerate(vec):
            for m, c in f.terms:
                row[self.index[(slot, m)]] = c
        return row

    def row_vector(self, row) -> tuple:
        coeffs = [{} for _ in self.twists]
        for i, c in enumerate(row):
            if c:
                slot, m = self.items[i]
                coeffs[slot][m] = int(c)
        return tuple(self.ring.from_dict(d) for d in coeffs)

    def shift_indices(self, coarser: "DegreeBasis", v: int):
        """Index map realizing multiplication by x_v from `coarser` (one
        degree down) into this slice."""
        out = np.empty(len(coarser.items), dtype=np.int64)
        for i, (slot, m) in enumerate(coarser.items):
            mm = list(m)
            mm[v] += 1
            out[i] = self.index[(slot, tuple(mm))]
        return out


class GradedSpan:
    """Degreewise span of the submodule generated by added vectors."""

    def __init__(self, ring: Ring, twists):
        self.ring = ring
        self.twists = tuple(twists)
        self.bases = {}
        self.spans = {}
        self._low = None

    def basis_at(self, d: int) -> DegreeBasis:
        b = self.bases.get(d)
        if b is None:
            b = self.bases[d] = DegreeBasis(self.ring, self.twists, d)
        return b

    def span_at(self, d: int) -> linalg.RowSpan:
        """RowSpan at degree d, propagating generators up from below."""
        sp = self.spans.get(d)
        if sp is not None:
            return sp
        basis = self.basis_at(d)
        sp = linalg.RowSpan(len(basis), self.ring.p)
        if self._low is not None and d > self._low:
            prev = self.span_at(d - 1)
            if prev.rows:
                coarser = self.basis_at(d - 1)
                for v in range(self.ring.n):
                    ix = basis.shift_indices(coarser, v)
                    for row in prev.rows:
                        shifted = np.zeros(len(basis), dtype=np.int64)
                        shifted[ix] = row
                        sp.add(shifted)
        self.spans[d] = sp
        return sp

    def add_row(self, row: np.ndarray, d: int) -> bool:
        if self._low is None or d < self._low:
            self._low = d
        for cached in list(self.spans):
            if cached > d:
                del self.spans[cached]  # stale: rebuilt on demand
        return self.span_at(d).add(row)

    def contains_row(self, row: np.ndarray, d: int) -> bool:
        return self.span_at(d).contains(row)


def map_matrix(columns, target_basis: DegreeBasis, col_degrees, d: int, ring: Ring):
    """Matrix of the map (sum_i S(-d_i) -> F) in degree d; also returns the
    source index list [(column, monomial)]."""
    src_items = []
    for i, cd in enumerate(col_degrees):
        if d - cd < 0:
            continue
        for m in ring.monomials_of_degree(d - cd):
            src_items.append((i, m))
    mat = np.zeros((len(target_basis), len(src_items)), dtype=np.int64)
    tindex = target_basis.index
    for col, (i, m) in enumerate(src_items):
        for slot, f in enumerate(columns[i]):
            for mm, c in f.terms:
                mat[tindex[(slot, m_mul(mm, m))], col] = c
    return mat, src_items


def _src_row_to_vector(row, src_items, ncols, ring: Ring):
    coeffs = [{} for _ in range(ncols)]
    for k, c in enumerate(row):
        if c:
            i, m = src_items[k]
            coeffs[i][m] = int(c)
    return tuple(ring.from_dict(d) for d in coeffs)


def kernel_generators(ambient_twists, columns, ring: Ring):
    """Minimal generators of the kernel of the graded map defined by
    `columns` (vectors in the free module with `ambient_twists`).

    Returns a list of (vector, degree), where vectors have one polynomial
    entry per column.  Scans degrees up to the Groebner pair bound of the
    presented submodule, which dominates the degrees of any minimal kernel
    generator.
    """
    if not columns:
        return []
    col_degrees = []
    for vec in columns:
        d = vector_degree(vec, ambient_twists)
        if d is None:
            raise ValueError("zero column")
        col_degrees.append(d)

    gb = ModuleEngine(GREVLEX, ring)
    pack = gb.packer.pack
    dicts = []
    for vec in columns:
        dicts.append(
            {(slot, pack(m)): c for slot, f in enumerate(vec) for m, c in f.terms}
        )
    gb.run(dicts)
    bound = max(max(col_degrees), gb.pair_degree_bound(ambient_twists))

    target = GradedSpan(ring, ambient_twists)
    found = GradedSpan(ring, tuple(col_degrees))
    gens = []
    for d in range(min(col_degrees), bound + 1):
        tb = target.basis_at(d)
        mat, src_items = map_matrix(columns, tb, col_degrees, d, ring)
        if mat.shape[1] == 0:
            continue
        nsp = linalg.nullspace(mat, ring.p)
        if nsp.shape[0] == 0:
            continue
        for row in nsp:
            reduced = found.span_at(d).reduce(row)
            if np.any(reduced):
                found.add_row(reduced, d)
                gens.append((_src_row_to_vector(reduced, src_items, len(columns), ring), d))
    return gens


def minimal_generator_selection(gens, ring: Ring):
    """Subset of the given homogeneous ring elements that minimally generates
    the ideal they span, selected greedily by ascending degree."""
    items = [(g.degree(), i, g) for i, g in enumerate(gens) if not g.is_zero()]
    items.sort(key=lambda t: (t[0], t[1]))
    span = GradedSpan(ring, (0,))
    kept = []
    for d, _, g in items:
        basis = span.basis_at(d)
        row = basis.vector_row((g,))
        reduced = span.span_at(d).reduce(row)
        if np.any(reduced):
            span.add_row(reduced, d)
            kept.append(g)
    return tuple(kept)
