"""Graded free complexes: syzygies, minimal resolutions, Betti tables,
Koszul and Taylor complexes, complex minimization, Hilbert series.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from . import intpoly
from .degreewise import kernel_generators, vector_degree
from .groebner import MonomialIdeal, krull_dimension, minimal_generators
from .ring import Ideal, Polynomial, Ring, m_deg, m_div


@dataclass(frozen=True)
class FreeModule:
    """Graded free module given by its generator degrees (twists)."""

    twists: tuple

    @property
    def rank(self) -> int:
        return len(self.twists)


class Complex:
    """A complex of graded free modules over S.

    modules[k] is the homological degree-k module; maps[k] is the matrix of
    modules[k+1] -> modules[k], stored row-major (rows indexed by the target).
    """

    def __init__(self, ring: Ring, modules, maps):
        self.ring = ring
        self.modules = [FreeModule(tuple(m.twists if isinstance(m, FreeModule) else m)) for m in modules]
        self.maps = [tuple(tuple(row) for row in mat) for mat in maps]
        if len(self.maps) != max(len(self.modules) - 1, 0):
            raise ValueError("need one map per adjacent module pair")

    @property
    def length(self) -> int:
        return len(self.modules) - 1

    def column(self, k: int, j: int):
        """Column j of maps[k], a vector in modules[k]."""
        return tuple(self.maps[k][i][j] for i in range(self.modules[k].rank))

    def columns(self, k: int):
        return [self.column(k, j) for j in range(self.modules[k + 1].rank)]

    def validate(self):
        """Check homogeneity of entries and d . d = 0."""
        for k, mat in enumerate(self.maps):
            src = self.modules[k + 1]
            tgt = self.modules[k]
            for i in range(tgt.rank):
                for j in range(src.rank):
                    f = mat[i][j]
                    if f.is_zero():
                        continue
                    if not f.is_homogeneous() or f.degree() != src.twists[j] - tgt.twists[i]:
                        raise ValueError(f"entry ({k},{i},{j}) has wrong degree")
        for k in range(len(self.maps) - 1):
            a, b = self.maps[k], self.maps[k + 1]
            rows, mid, cols = self.modules[k].rank, self.modules[k + 1].rank, self.modules[k + 2].rank
            for i in range(rows):
                for j in range(cols):
                    acc = self.ring.zero()
                    for t in range(mid):
                        acc = acc + a[i][t] * b[t][j]
                    if not acc.is_zero():
                        raise ValueError(f"d.d != 0 at ({k},{i},{j})")
        return self

    def is_minimal(self) -> bool:
        return all(
            entry.is_zero() or not entry.is_constant()
            for mat in self.maps
            for row in mat
            for entry in row
        )

    def euler_numerator(self) -> tuple:
        """Alternating sum of generator-degree polynomials; equals the
        Hilbert series numerator when the complex resolves its cokernel."""
        out = (0,)
        for k, mod in enumerate(self.modules):
            for tw in mod.twists:
                term = intpoly.shift((1,), tw)
                out = intpoly.add(out, term) if k % 2 == 0 else intpoly.sub(out, term)
        return out

    def describe(self) -> str:
        chunks = []
        for mod in self.modules:
            groups = {}
            for tw in mod.twists:
                groups[tw] = groups.get(tw, 0) + 1
            part = " + ".join(
                (f"S(-{d})^{c}" if c > 1 else f"S(-{d})") if d else (f"S^{c}" if c > 1 else "S")
                for d, c in sorted(groups.items())
            )
            chunks.append(part if part else "0")
        return " <- ".join(chunks)


@dataclass(frozen=True)
class SyzygyModule:
    """Generators of the kernel of the map defined by presented columns."""

    ambient: FreeModule
    columns: tuple        # the presented map
    generators: tuple     # vectors of length len(columns)
    degrees: tuple

    @property
    def rank_presented(self) -> int:
        return len(self.columns)


def syzygies(columns, twists=None, ring: Ring | None = None) -> SyzygyModule:
    """Generating set of the kernel of (f_1, ..., f_k) as a map into the free
    module with the given twists (default: a single twist-0 summand per
    coordinate).  Single polynomials may be given for the rank-1 case."""
    cols = []
    for c in columns:
        if isinstance(c, Polynomial):
            cols.append((c,))
        else:
            cols.append(tuple(c))
    if not cols:
        raise ValueError("no columns")
    if ring is None:
        ring = cols[0][0].ring
    rank = len(cols[0])
    if twists is None:
        twists = (0,) * rank
    twists = tuple(twists)
    gens = kernel_generators(twists, cols, ring)
    # postcondition: every generator kills the presented map
    for vec, _ in gens:
        for slot in range(rank):
            acc = ring.zero()
            for gvec, col in zip(vec, cols):
                acc = acc + gvec * col[slot]
            assert acc.is_zero(), "syzygy does not annihilate the map"
    return SyzygyModule(
        FreeModule(twists),
        tuple(cols),
        tuple(vec for vec, _ in gens),
        tuple(d for _, d in gens),
    )


def minimal_free_resolution(I: Ideal) -> Complex:
    """Minimal graded free resolution of S/I, built by iterated minimal
    syzygy generators; length is at most the number of variables."""
    ring = I.ring
    mingens = minimal_generators(I)
    if not mingens:
        return Complex(ring, [(0,)], [])
    if any(g.is_constant() for g in mingens):
        raise ValueError("unit ideal has no resolution of S/I")
    modules = [(0,), tuple(g.degree() for g in mingens)]
    maps = [[list(mingens)]]
    columns = [(g,) for g in mingens]
    twists = (0,)
    while True:
        gens = kernel_generators(twists, columns, ring)
        if not gens:
            break
        twists = modules[-1]
        columns = [vec for vec, _ in gens]
        modules.append(tuple(d for _, d in gens))
        rank = len(twists)
        maps.append([[vec[i] for vec in columns] for i in range(rank)])
        if len(modules) > ring.n + 2:
            raise RuntimeError("resolution exceeded the variable-count bound")
    return Complex(ring, modules, maps)


# -- Betti tables ---------------------------------------------------------------

class NonMinimalComplexError(ValueError):
    pass


@dataclass
class BettiTable:
    """Graded Betti numbers beta_{i,j}; entries holds only positive counts."""

    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        self.entries = {k: v for k, v in self.entries.items() if v}
        for (i, j), v in self.entries.items():
            if v < 0:
                raise ValueError("negative Betti number")

    @property
    def pd(self) -> int:
        return max((i for i, _ in self.entries), default=0)

    @property
    def reg(self) -> int:
        return max((j - i for i, j in self.entries), default=0)

    def total(self, i: int) -> int:
        return sum(v for (ii, _), v in self.entries.items() if ii == i)

    def totals(self):
        return tuple(self.total(i) for i in range(self.pd + 1))

    def get(self, i: int, j: int) -> int:
        return self.entries.get((i, j), 0)

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.entries == other.entries

    def to_json(self) -> str:
        rows = sorted([i, j, c] for (i, j), c in self.entries.items())
        return json.dumps({"entries": rows, "pd": self.pd, "reg": self.reg})

    @classmethod
    def from_json(cls, text: str) -> "BettiTable":
        data = json.loads(text)
        return cls({(i, j): c for i, j, c in data["entries"]})

    def ascii(self, style: str = "dot") -> str:
        """Row r, column i shows beta_{i, i+r}; zeros render as a dot or
        double dash."""
        zero = {"dot": "·", "dash": "--"}[style]
        pd = self.pd
        maxrow = self.reg
        cells = []
        header = [""] + [str(i) for i in range(pd + 1)]
        cells.append(header)
        for r in range(maxrow + 1):
            row = [f"{r}:"]
            for i in range(pd + 1):
                v = self.get(i, i + r)
                row.append(str(v) if v else zero)
            cells.append(row)
        widths = [max(len(row[c]) for row in cells) for c in range(pd + 2)]
        lines = [" ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in cells]
        return "\n".join(lines)

    def __str__(self):
        return self.ascii()


def betti_table(C: Complex) -> BettiTable:
    """Generator-degree counts of a minimal complex."""
    if not C.is_minimal():
        raise NonMinimalComplexError("complex has unit entries; minimize it first")
    entries = {}
    for i, mod in enumerate(C.modules):
        for tw in mod.twists:
            entries[(i, tw)] = entries.get((i, tw), 0) + 1
    return BettiTable(entries)


# -- standard complexes ----------------------------------------------------------

def koszul_complex(polys, ring: Ring | None = None) -> Complex:
    """Exterior-algebra complex on the given forms; ranks C(m, i)."""
    polys = list(polys)
    if ring is None:
        if not polys:
            raise ValueError("need a ring for the empty Koszul complex")
        ring = polys[0].ring
    degs = [f.degree() for f in polys]
    m = len(polys)
    modules = []
    subsets = []
    for i in range(m + 1):
        subs = list(itertools.combinations(range(m), i))
        subsets.append(subs)
        modules.append(tuple(sum(degs[t] for t in T) for T in subs))
    maps = []
    for i in range(1, m + 1):
        index = {T: a for a, T in enumerate(subsets[i - 1])}
        mat = [[ring.zero() for _ in subsets[i]] for _ in subsets[i - 1]]
        for b, T in enumerate(subsets[i]):
            for k, t in enumerate(T):
                rest = T[:k] + T[k + 1 :]
                entry = polys[t] if k % 2 == 0 else -polys[t]
                mat[index[rest]][b] = entry
        maps.append(mat)
    return Complex(ring, modules, maps)


def taylor_complex(M: MonomialIdeal) -> Complex:
    """Taylor complex of a monomial ideal: ranks C(g, i), twists are lcm
    degrees of generator subsets.  A resolution, generally non-minimal."""
    ring = M.ring
    gens = M.gens
    m = len(gens)

    def lcm_of(T):
        out = (0,) * ring.n
        for t in T:
            out = tuple(max(a, b) for a, b in zip(out, gens[t]))
        return out

    modules = []
    subsets = []
    for i in range(m + 1):
        subs = list(itertools.combinations(range(m), i))
        subsets.append(subs)
        modules.append(tuple(m_deg(lcm_of(T)) for T in subs))
    maps = []
    for i in range(1, m + 1):
        index = {T: a for a, T in enumerate(subsets[i - 1])}
        mat = [[ring.zero() for _ in subsets[i]] for _ in subsets[i - 1]]
        for b, T in enumerate(subsets[i]):
            big = lcm_of(T)
            for k, t in enumerate(T):
                rest = T[:k] + T[k + 1 :]
                quot = m_div(big, lcm_of(rest))
                entry = Polynomial(ring, ((quot, 1),))
                if k % 2 == 1:
                    entry = -entry
                mat[index[rest]][b] = entry
        maps.append(mat)
    return Complex(ring, modules, maps)


def tensor_with_koszul(F: Complex, polys) -> Complex:
    """Total complex of F tensor K(q_1, ..., q_r), as an iterated mapping
    cone of multiplication by each q."""
    ring = F.ring
    out = F
    for q in polys:
        e = q.degree()
        L = out.length
        modules = []
        for k in range(L + 2):
            prev = tuple(t + e for t in out.modules[k - 1].twists) if k >= 1 else ()
            cur = out.modules[k].twists if k <= L else ()
            modules.append(prev + cur)
        maps = []
        for k in range(1, L + 2):
            tgt_prev = out.modules[k - 2].rank if k >= 2 else 0
            tgt_cur = out.modules[k - 1].rank
            src_prev = out.modules[k - 1].rank
            src_cur = out.modules[k].rank if k <= L else 0
            rows = tgt_prev + tgt_cur
            cols = src_prev + src_cur
            mat = [[ring.zero() for _ in range(cols)] for _ in range(rows)]
            if k >= 2:
                dprev = out.maps[k - 2]
                for i in range(tgt_prev):
                    for j in range(src_prev):
                        mat[i][j] = -dprev[i][j]
            for j in range(src_prev):
                mat[tgt_prev + j][j] = q
            if k <= L:
                dcur = out.maps[k - 1]
                for i in range(tgt_cur):
                    for j in range(src_cur):
                        mat[tgt_prev + i][src_prev + j] = dcur[i][j]
            maps.append(mat)
        out = Complex(ring, modules, maps)
    return out


def minimize(C: Complex) -> Complex:
    """Strip unit entries by row/column operations; returns a homotopy
    equivalent complex with no constant entries."""
    ring = C.ring
    modules = [list(m.twists) for m in C.modules]
    maps = [[list(row) for row in mat] for mat in C.maps]

    def find_unit():
        for k, mat in enumerate(maps):
            for i, row in enumerate(mat):
                for j, f in enumerate(row):
                    if not f.is_zero() and f.is_constant():
                        return k, i, j
        return None

    while True:
        hit = find_unit()
        if hit is None:
            break
        k, i, j = hit
        mat = maps[k]
        inv = ring.field.inv(mat[i][j].coefficient((0,) * ring.n))
        rows = len(mat)
        cols = len(mat[0]) if mat else 0
        # cancel the row/column through the unit pivot
        new = []
        for r in range(rows):
            if r == i:
                continue
            row_out = []
            for c in range(cols):
                if c == j:
                    continue
                f = mat[r][c] - mat[r][j].scale(inv) * mat[i][c]
                row_out.append(f)
            new.append(row_out)
        maps[k] = new
        del modules[k + 1][j]
        del modules[k][i]
        if k + 1 < len(maps):
            del maps[k + 1][j]
        if k - 1 >= 0:
            for row in maps[k - 1]:
                del row[i]
    # drop trailing zero modules
    while len(modules) > 1 and not modules[-1]:
        modules.pop()
        maps.pop()
    return Complex(ring, modules, maps)


# -- Hilbert series ---------------------------------------------------------------

@dataclass(frozen=True)
class HilbertSeries:
    """H(t) = numerator / (1-t)^n = h / (1-t)^dim, with h(1) > 0."""

    numerator: tuple
    n: int
    dim: int
    h: tuple

    @property
    def multiplicity(self) -> int:
        return intpoly.eval_at_one(self.h)

    def __str__(self):
        num = intpoly.to_string(self.numerator)
        return f"({num}) / (1-t)^{self.n}"


def hilbert_series(I: Ideal) -> HilbertSeries:
    """Hilbert series of S/I from a free resolution; exact division yields
    the h-polynomial and multiplicity."""
    C = minimal_free_resolution(I)
    numerator = C.euler_numerator()
    d = krull_dimension(I)
    if d < 0:
        raise ValueError("unit ideal")
    try:
        h = intpoly.divide_by_power_of_one_minus_t(numerator, I.ring.n - d)
    except ArithmeticError as exc:  # invariant breach: dimension disagrees
        raise RuntimeError("numerator not divisible by (1-t)^codim") from exc
    if intpoly.eval_at_one(h) <= 0:
        raise RuntimeError("h-polynomial evaluates nonpositively at 1")
    return HilbertSeries(numerator, I.ring.n, d, h)


def multiplicity(I: Ideal) -> int:
    return hilbert_series(I).multiplicity
