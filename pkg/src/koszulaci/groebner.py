"""Groebner bases and the ideal-theoretic operations built on them."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

from . import intpoly
from .degreewise import kernel_generators, minimal_generator_selection
from .engine import (
    Packer,
    _int_key_fn,
    buchberger_polynomials,
    packed_to_polynomial,
    polynomial_to_packed,
    reduce_packed,
)
from .ring import (
    GREVLEX,
    Ideal,
    MonomialOrder,
    Polynomial,
    Ring,
    m_deg,
    m_div,
    m_divides,
)


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced Groebner basis: monic elements, pairwise tail-reduced, sorted
    by (degree, leading monomial)."""

    ideal: Ideal
    order: MonomialOrder
    elements: tuple

    @property
    def ring(self) -> Ring:
        return self.ideal.ring

    def leading_monomials(self):
        return tuple(g.leading_monomial(self.order) for g in self.elements)

    def normal_form(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self)

    def contains(self, f: Polynomial) -> bool:
        return normal_form(f, self).is_zero()

    def is_quadratic(self) -> bool:
        return all(g.degree() <= 2 for g in self.elements)

    def __iter__(self):
        return iter(self.elements)

    @cached_property
    def _packed_reducers(self):
        packer = Packer(self.ring.n)
        key = _int_key_fn(self.order, packer)
        lms = []
        tails = []
        for g in self.elements:
            lt = g.leading_monomial(self.order)
            lms.append(packer.pack(lt))
            tails.append(tuple((packer.pack(m), c) for m, c in g.terms if m != lt))
        return packer, key, lms, tails


@lru_cache(maxsize=100000)
def _gb_cached(ideal: Ideal, order: MonomialOrder) -> GroebnerBasis:
    elements = buchberger_polynomials(ideal.gens, order)
    return GroebnerBasis(ideal, order, elements)


def groebner_basis(I: Ideal, order: MonomialOrder = GREVLEX, seed=None) -> GroebnerBasis:
    """Reduced Groebner basis of I; deterministic in (I, order).  `seed` may
    hold a GroebnerBasis of a subideal to warm-start the pair queue."""
    if seed is not None:
        elements = buchberger_polynomials(I.gens, order, seed_gb=seed.elements)
        return GroebnerBasis(I, order, elements)
    return _gb_cached(I, order)


def normal_form(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    """Remainder of f on division by G: no term divisible by a leading
    monomial of G, and f - result lies in the ideal."""
    if f.is_zero() or not G.elements:
        return f
    packer, key, lms, tails = G._packed_reducers
    rem = reduce_packed(
        polynomial_to_packed(f, packer), lms, tails, key, packer, f.ring.p
    )
    return packed_to_polynomial(rem, f.ring, packer)


def ideal_contains(I: Ideal, f: Polynomial, order: MonomialOrder = GREVLEX) -> bool:
    return groebner_basis(I, order).contains(f)


def ideals_equal(I: Ideal, J: Ideal) -> bool:
    gi = groebner_basis(I)
    gj = groebner_basis(J)
    return all(gi.contains(g) for g in J.gens) and all(gj.contains(g) for g in I.gens)


# -- monomial ideals -----------------------------------------------------------

@dataclass(frozen=True)
class MonomialIdeal:
    """Minimal generating monomials (an antichain under divisibility)."""

    ring: Ring
    gens: tuple

    def __post_init__(self):
        monos = sorted(set(self.gens), key=lambda m: (m_deg(m), m))
        minimal = []
        for m in monos:
            if not any(m_divides(g, m) for g in minimal):
                minimal.append(m)
        object.__setattr__(self, "gens", tuple(minimal))

    def contains_monomial(self, m) -> bool:
        return any(m_divides(g, m) for g in self.gens)

    def to_ideal(self) -> Ideal:
        return Ideal(self.ring, tuple(Polynomial(self.ring, ((m, 1),)) for m in self.gens))

    def is_quadratic(self) -> bool:
        return all(m_deg(m) == 2 for m in self.gens)

    def is_squarefree(self) -> bool:
        return all(all(e <= 1 for e in m) for m in self.gens)

    def dimension(self) -> int:
        """dim S/M: the largest variable subset meeting no generator support."""
        supports = [frozenset(i for i, e in enumerate(m) if e) for m in self.gens]
        if any(not s for s in supports):
            return -1  # contains a unit
        return self.ring.n - _min_cover(supports)

    def numerator(self) -> tuple:
        """Hilbert series numerator of S/M over (1-t)^n, as integer
        coefficients (index = degree)."""
        return _mono_numerator(self.gens)

    def __str__(self):
        names = self.ring.names
        out = []
        for m in self.gens:
            out.append("*".join(f"{nm}^{e}" if e > 1 else nm for nm, e in zip(names, m) if e))
        return "(" + ", ".join(out) + ")"


def _min_cover(supports) -> int:
    """Minimum number of variables meeting every support set."""
    supports = sorted(set(supports), key=lambda s: (len(s), sorted(s)))
    best = len(supports)  # one variable per support always suffices

    def search(chosen, start_count):
        nonlocal best
        if start_count >= best:
            return
        for s in supports:
            if not (s & chosen):
                for v in sorted(s):
                    search(chosen | {v}, start_count + 1)
                return
        best = min(best, start_count)

    search(frozenset(), 0)
    return best


def _pairwise_coprime(gens) -> bool:
    seen = [False] * (len(gens[0]) if gens else 0)
    for m in gens:
        for i, e in enumerate(m):
            if e:
                if seen[i]:
                    return False
                seen[i] = True
    return True


@lru_cache(maxsize=200000)
def _mono_numerator(gens) -> tuple:
    """Hilbert numerator of S/(gens) over (1-t)^n by variable-pivot
    splitting:  K(I) = K(I + x_v) + t K(I : x_v)."""
    gens = _minimal_monos(gens)
    if not gens:
        return (1,)
    if _pairwise_coprime(gens):
        out = (1,)
        for m in gens:
            out = intpoly.sub(out, intpoly.shift(out, m_deg(m)))
        return out
    # pivot on the variable hitting the most generators
    counts = [0] * len(gens[0])
    for m in gens:
        for i, e in enumerate(m):
            if e:
                counts[i] += 1
    v = counts.index(max(counts))
    added = tuple(m for m in gens if not m[v]) + (
        tuple(1 if i == v else 0 for i in range(len(gens[0]))),
    )
    quotient = tuple(
        tuple(e - 1 if i == v and e else e for i, e in enumerate(m)) for m in gens
    )
    left = _mono_numerator(added)
    right = _mono_numerator(quotient)
    return intpoly.add(left, intpoly.shift(right, 1))


def _minimal_monos(monos):
    monos = sorted(set(monos), key=lambda m: (m_deg(m), m))
    out = []
    for m in monos:
        if not any(m_divides(g, m) for g in out):
            out.append(m)
    return tuple(out)


def initial_ideal(I: Ideal, order: MonomialOrder = GREVLEX) -> MonomialIdeal:
    """Leading monomials of a reduced Groebner basis, minimalized."""
    gb = groebner_basis(I, order)
    return MonomialIdeal(I.ring, gb.leading_monomials())


def krull_dimension(I: Ideal) -> int:
    """dim S/I via the initial ideal; -1 for the unit ideal."""
    if I.is_zero():
        return I.ring.n
    init = initial_ideal(I)
    if any(m_deg(m) == 0 for m in init.gens):
        return -1
    return init.dimension()


def height(I: Ideal) -> int:
    return I.ring.n - krull_dimension(I)


def hilbert_numerator(I: Ideal) -> tuple:
    """Hilbert series numerator of S/I over (1-t)^n, via the initial ideal."""
    if I.is_zero():
        return (1,)
    return initial_ideal(I).numerator()


# -- colon, regularity, minimal generators -------------------------------------

def colon(I: Ideal, f: Polynomial) -> Ideal:
    """(I : f) = {g : g f in I}, with a minimal generating set.

    Computed from the syzygies of (gens(I), f): the last coordinate of each
    syzygy generator lands in the colon, and those coordinates generate it.
    """
    if f.is_zero():
        raise ZeroDivisionError("colon by zero")
    if not f.is_homogeneous():
        raise ValueError("colon divisor must be homogeneous")
    ring = I.ring
    if I.is_zero():
        return I
    columns = [(g,) for g in I.gens] + [(f,)]
    gens = kernel_generators((0,), columns, ring)
    last = [vec[-1] for vec, _ in gens if not vec[-1].is_zero()]
    return Ideal(ring, minimal_generator_selection(last, ring))


def is_regular_on(f: Polynomial, J: Ideal) -> bool:
    """True iff f is a nonzerodivisor on S/J, i.e. (J : f) = J."""
    if f.is_zero():
        return False
    gbj = groebner_basis(J)
    if gbj.contains(f):
        return False
    quot = colon(J, f)
    return all(gbj.contains(g) for g in quot.gens)


def minimal_generators(I: Ideal) -> tuple:
    return minimal_generator_selection(I.gens, I.ring)


def minimal_generator_count(I: Ideal) -> dict:
    """Number of minimal generators per degree: dim_k (I / S_+ I)_d."""
    counts = {}
    for g in minimal_generators(I):
        counts[g.degree()] = counts.get(g.degree(), 0) + 1
    return counts
