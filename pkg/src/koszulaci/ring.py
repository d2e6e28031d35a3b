"""Sparse multivariate polynomials over a prime field.

Monomials are plain exponent tuples; polynomials are immutable sorted term
lists.  Everything here is exact arithmetic mod p, with p = 32003 by default
(large enough that randomized constructions behave like characteristic 0).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

DEFAULT_CHAR = 32003

Monomial = tuple  # exponent vector, one entry per ring variable


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    # deterministic Miller-Rabin, valid far beyond any modulus we accept
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    """The coefficient field F_p.  Elements are plain ints in [0, p)."""

    p: int = DEFAULT_CHAR

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, self.p - 2, self.p)

    def balanced(self, a: int) -> int:
        """Lift to the symmetric range (-p/2, p/2], for readable printing."""
        a %= self.p
        return a if a <= self.p // 2 else a - self.p


@dataclass(frozen=True)
class Ring:
    """A standard graded polynomial ring F_p[x_1, ..., x_n], deg x_i = 1."""

    field: PrimeField
    names: tuple

    def __post_init__(self):
        if len(self.names) < 1:
            raise ValueError("ring needs at least one variable")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable names")

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def p(self) -> int:
        return self.field.p

    def variable(self, i: int) -> "Polynomial":
        expo = [0] * self.n
        expo[i] = 1
        return Polynomial(self, ((tuple(expo), 1),))

    def variables(self):
        return tuple(self.variable(i) for i in range(self.n))

    def zero(self) -> "Polynomial":
        return Polynomial(self, ())

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c: int) -> "Polynomial":
        c %= self.p
        if c == 0:
            return Polynomial(self, ())
        return Polynomial(self, (((0,) * self.n, c),))

    def monomials_of_degree(self, d: int) -> tuple:
        return _monomials_of_degree(self.n, d)

    def from_dict(self, coeffs: dict) -> "Polynomial":
        p = self.p
        terms = [(m, c % p) for m, c in coeffs.items() if c % p]
        terms.sort(key=lambda t: _grevlex_key(t[0]), reverse=True)
        return Polynomial(self, tuple(terms))

    def random_linear_form(self, rng) -> "Polynomial":
        return self.random_form(1, rng)

    def random_form(self, d: int, rng) -> "Polynomial":
        coeffs = {m: rng.randrange(self.p) for m in self.monomials_of_degree(d)}
        return self.from_dict(coeffs)

    def extend(self, extra_names, prepend=False) -> "Ring":
        extra = tuple(extra_names)
        names = extra + self.names if prepend else self.names + extra
        return Ring(self.field, names)


@lru_cache(maxsize=None)
def _monomials_of_degree(n: int, d: int) -> tuple:
    """All exponent tuples of total degree d, descending in grevlex."""
    if d < 0:
        return ()
    out = []
    for bars in itertools.combinations(range(d + n - 1), n - 1):
        expo = []
        prev = -1
        for b in bars:
            expo.append(b - prev - 1)
            prev = b
        expo.append(d + n - 2 - prev)
        out.append(tuple(expo))
    out.sort(key=_grevlex_key, reverse=True)
    return tuple(out)


# -- monomial helpers ---------------------------------------------------------

def m_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def m_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def m_div(a: Monomial, b: Monomial) -> Monomial:
    """Quotient a / b (componentwise difference; caller ensures b | a)."""
    return tuple(x - y for x, y in zip(a, b))


def m_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def m_gcd(a: Monomial, b: Monomial) -> Monomial:
    return tuple(min(x, y) for x, y in zip(a, b))


def m_deg(a: Monomial) -> int:
    return sum(a)


def _grevlex_key(m: Monomial):
    # larger key = larger monomial: compare degree, then reversed exponents
    # negated (ties broken by smallest last exponent)
    return (sum(m),) + tuple(-e for e in reversed(m))


# -- monomial orders -----------------------------------------------------------

class MonomialOrder:
    """Total multiplicative global order; subclasses provide a sort key.

    key(m) returns a tuple such that m1 > m2 in the order iff
    key(m1) > key(m2) lexicographically.
    """

    def key(self, m: Monomial):
        raise NotImplementedError

    def compare(self, a: Monomial, b: Monomial) -> int:
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    def max(self, monomials):
        return max(monomials, key=self.key)


@dataclass(frozen=True)
class GrevLex(MonomialOrder):
    def key(self, m):
        return _grevlex_key(m)

    def __str__(self):
        return "grevlex"


@dataclass(frozen=True)
class Lex(MonomialOrder):
    def key(self, m):
        return m

    def __str__(self):
        return "lex"


@dataclass(frozen=True)
class Block(MonomialOrder):
    """Elimination order: the designated variable block beats everything.

    Monomials are compared grevlex on the block exponents first (so any
    positive block degree dominates), then by the inner order on the rest.
    Keys are flat int tuples (block sizes are fixed per ring, so
    concatenation preserves lexicographic comparison).
    """

    greater: tuple  # sorted variable indices of the greater block
    inner: MonomialOrder = GrevLex()

    def __post_init__(self):
        object.__setattr__(self, "greater", tuple(sorted(self.greater)))

    def key(self, m):
        block = tuple(m[i] for i in self.greater)
        rest = tuple(e for i, e in enumerate(m) if i not in self.greater)
        return _grevlex_key(block) + self.inner.key(rest)

    def __str__(self):
        ix = ",".join(str(i) for i in self.greater)
        return f"block[{ix}]:{self.inner}"


GREVLEX = GrevLex()
LEX = Lex()


# -- polynomials ---------------------------------------------------------------

class Polynomial:
    """Immutable sparse polynomial; terms sorted descending in grevlex.

    Invariants: no zero coefficients, no duplicate monomials, coefficients
    in [1, p).
    """

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: tuple):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # construction helpers live on Ring (from_dict etc.)

    def to_dict(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and sum(self.terms[0][0]) == 0)

    def degree(self):
        """Total degree, or -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m, _ in self.terms)

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        d = sum(self.terms[0][0])
        return all(sum(m) == d for m, _ in self.terms)

    def leading_term(self, order: MonomialOrder = GREVLEX):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        if order is GREVLEX or isinstance(order, GrevLex):
            return self.terms[0]
        return max(self.terms, key=lambda t: order.key(t[0]))

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> Monomial:
        return self.leading_term(order)[0]

    def coefficient(self, m: Monomial) -> int:
        for mm, c in self.terms:
            if mm == m:
                return c
        return 0

    def monic(self, order: MonomialOrder = GREVLEX) -> "Polynomial":
        if not self.terms:
            return self
        c = self.leading_term(order)[1]
        if c == 1:
            return self
        return self.scale(self.ring.field.inv(c))

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        out = dict(self.terms)
        p = self.ring.p
        for m, c in other.terms:
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return self.ring.from_dict(out)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, tuple((m, p - c) for m, c in self.terms))

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ring.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int) -> "Polynomial":
        p = self.ring.p
        c %= p
        if c == 0:
            return self.ring.zero()
        if c == 1:
            return self
        return Polynomial(self.ring, tuple((m, cc * c % p) for m, cc in self.terms))

    def shift(self, m: Monomial) -> "Polynomial":
        """Multiply by the monomial m."""
        return Polynomial(self.ring, tuple((m_mul(mm, m), c) for mm, c in self.terms))

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        p = self.ring.p
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out = {}
        for mb, cb in b:
            for ma, ca in a:
                m = m_mul(ma, mb)
                v = (out.get(m, 0) + ca * cb) % p
                if v:
                    out[m] = v
                else:
                    del out[m]
        return self.ring.from_dict(out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.names, self.ring.p, self.terms))
        return self._hash

    def __str__(self):
        from .parse import polynomial_to_string

        return polynomial_to_string(self)

    def __repr__(self):
        return f"Polynomial({self})"


def ring_map(f: Polynomial, target: Ring, images) -> Polynomial:
    """Apply the ring homomorphism sending variable v to images[v]."""
    out = target.zero()
    for m, c in f.terms:
        prod = target.constant(c)
        for v, e in enumerate(m):
            if e:
                prod = prod * images[v] ** e
        out = out + prod
    return out


@dataclass(frozen=True)
class Ideal:
    """A homogeneous ideal given by generators.  Zero generators are dropped;
    an empty tuple is the zero ideal (needed for the ambient ring itself)."""

    ring: Ring
    gens: tuple

    def __post_init__(self):
        gens = tuple(g for g in self.gens if not g.is_zero())
        for g in gens:
            if g.ring != self.ring:
                raise ValueError("generator from a different ring")
            if not g.is_homogeneous():
                raise ValueError(f"inhomogeneous generator: {g}")
        object.__setattr__(self, "gens", gens)

    def is_zero(self) -> bool:
        return not self.gens

    def __iter__(self):
        return iter(self.gens)

    def __str__(self):
        return "ideal (" + ", ".join(str(g) for g in self.gens) + ")"


def ideal(ring: Ring, *gens) -> Ideal:
    return Ideal(ring, tuple(gens))
