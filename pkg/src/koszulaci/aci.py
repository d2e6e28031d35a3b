"""Almost complete intersections defined by quadrics.

Detection, the count of linear first syzygies, structure extraction for the
two possible shapes (a shared-factor pair xz, zw plus a regular sequence of
quadrics, or the 2-minors of a 3x2 matrix of linear forms plus a regular
sequence of quadrics), family generators, predicted Betti tables,
G-quadratic lifts with Hilbert-series telescopes, and the bound suite.

Structure extraction solves one linear system over F_p for the unknown
linear forms putting a multiple of the linear syzygies inside the span of
the Koszul syzygies, then performs and verifies the generator replacements;
verification failures are reported, never papered over.
"""

from __future__ import annotations

import json
import math
import os
import random
from dataclasses import dataclass, field

import numpy as np

from . import intpoly, linalg
from .groebner import (
    GroebnerBasis,
    colon,
    groebner_basis,
    height,
    hilbert_numerator,
    ideals_equal,
    initial_ideal,
    is_regular_on,
    krull_dimension,
    minimal_generator_count,
    minimal_generators,
    _mono_numerator,
)
from .resolution import BettiTable
from .ring import (
    GREVLEX,
    Block,
    Ideal,
    Lex,
    Polynomial,
    PrimeField,
    Ring,
    ring_map,
)

TAG_CI = "CompleteIntersection"
TAG_ONE = "OneLinearSyzygy"
TAG_TWO = "TwoLinearSyzygies"
TAG_UNSTRUCTURED = "Unstructured"

DEFAULT_RETRY_BUDGET = 64


class NotQuadraticACIError(ValueError):
    pass


class RetryBudgetExceeded(RuntimeError):
    """A randomized construction ran out of attempts; for extraction this
    flags probable non-ACI input rather than bad luck."""


class KernelInconsistency(RuntimeError):
    """A computation contradicted an invariant that holds for every quadratic
    almost complete intersection; indicates a kernel bug."""


def retry_budget(override=None) -> int:
    if override is not None:
        return override
    env = os.environ.get("TOOL_RETRY_BUDGET")
    return int(env) if env else DEFAULT_RETRY_BUDGET


def binomial(n: int, k: int) -> int:
    if k < 0 or n < 0 or k > n:
        return 0
    return math.comb(n, k)


# -- linear syzygies of quadrics -------------------------------------------------

def _coeff_matrix(forms, degree, ring) -> np.ndarray:
    monos = ring.monomials_of_degree(degree)
    index = {m: i for i, m in enumerate(monos)}
    mat = np.zeros((len(forms), len(monos)), dtype=np.int64)
    for r, f in enumerate(forms):
        for m, c in f.terms:
            mat[r, index[m]] = c
    return mat


def forms_independent(forms, degree, ring) -> bool:
    mat = _coeff_matrix(forms, degree, ring)
    return linalg.rank(mat, ring.p) == len(forms)


def _syzygy_system(quadrics, ring):
    """Matrix of (l_1, ..., l_k) -> sum l_i q_i from linear-form tuples into
    cubics; columns grouped by generator then variable."""
    monos3 = ring.monomials_of_degree(3)
    index = {m: i for i, m in enumerate(monos3)}
    k = len(quadrics)
    n = ring.n
    mat = np.zeros((len(monos3), k * n), dtype=np.int64)
    for i, q in enumerate(quadrics):
        for v in range(n):
            col = i * n + v
            shifted = q.shift(tuple(1 if t == v else 0 for t in range(n)))
            for m, c in shifted.terms:
                mat[index[m], col] = c
    return mat


def beta23(quadrics) -> int:
    """dim of the space of linear syzygies on independent quadrics; this is
    the graded Betti number beta_{2,3} of the quotient, since first syzygies
    of independent quadrics start in degree 3."""
    quadrics = list(quadrics)
    ring = quadrics[0].ring
    for q in quadrics:
        if not q.is_homogeneous() or q.degree() != 2:
            raise ValueError("expected homogeneous quadrics")
    if not forms_independent(quadrics, 2, ring):
        raise ValueError("quadrics are linearly dependent (not a minimal presentation)")
    mat = _syzygy_system(quadrics, ring)
    return mat.shape[1] - linalg.rank(mat, ring.p)


def linear_syzygy_basis(quadrics):
    """Basis of linear syzygies as tuples of linear forms, one per quadric."""
    quadrics = list(quadrics)
    ring = quadrics[0].ring
    n = ring.n
    mat = _syzygy_system(quadrics, ring)
    rows = linalg.nullspace(mat, ring.p)
    out = []
    for row in rows:
        vec = []
        for i in range(len(quadrics)):
            coeffs = {}
            for v in range(n):
                c = int(row[i * n + v])
                if c:
                    coeffs[tuple(1 if t == v else 0 for t in range(n))] = c
            vec.append(ring.from_dict(coeffs))
        out.append(tuple(vec))
    return out


def is_quadratic_aci(I: Ideal) -> bool:
    """Nondegenerate, minimally generated by quadrics, and the minimal number
    of generators exceeds the height by exactly one."""
    if I.is_zero():
        return False
    counts = minimal_generator_count(I)
    if set(counts) != {2}:
        return False
    ht = height(I)
    return ht >= 1 and counts[2] == ht + 1


# -- regularity helpers ----------------------------------------------------------

def _numerator_from_gb(gb: GroebnerBasis):
    from .groebner import _minimal_monos

    return _mono_numerator(_minimal_monos(gb.leading_monomials()))


def regular_via_numerator(q: Polynomial, J: Ideal, gbj: GroebnerBasis | None = None):
    """f regular on S/J iff the Hilbert numerator picks up a (1 - t^deg f)
    factor.  Returns (is_regular, gb of J + q) so chains can reuse the basis."""
    ring = J.ring
    if gbj is None:
        gbj = groebner_basis(J)
    bigger = Ideal(ring, J.gens + (q,))
    gb2 = groebner_basis(bigger, seed=gbj)
    k_j = _numerator_from_gb(gbj)
    k_2 = _numerator_from_gb(gb2)
    e = q.degree()
    expected = intpoly.sub(k_j, intpoly.shift(k_j, e))
    return k_2 == expected, gb2


def verify_regular_chain(base_gens, quadrics, ring) -> bool:
    """Each quadric a nonzerodivisor modulo the ideal of everything before it,
    checked by colon stability."""
    sofar = tuple(base_gens)
    for q in quadrics:
        if not sofar:
            if q.is_zero():
                return False
        elif not is_regular_on(q, Ideal(ring, sofar)):
            return False
        sofar = sofar + (q,)
    return True


# -- extraction of regular subsequences (randomized) ------------------------------

def extract_regular_subsequence(I: Ideal, seed=0, budget=None):
    """Split a quadratic ACI's generators as (q_1; q_2..q_{g+1}) with the tail
    a regular sequence, by random combinations of the minimal generators.

    Over a large prime field each slot succeeds in O(1) expected trials; a
    budget exhaustion points at non-ACI input.
    """
    if not is_quadratic_aci(I):
        raise NotQuadraticACIError("input is not a quadratic almost complete intersection")
    ring = I.ring
    rng = random.Random(seed)
    budget = retry_budget(budget)
    basis = minimal_generators(I)
    g = len(basis) - 1

    def random_quadric():
        while True:
            q = sum((b.scale(rng.randrange(ring.p)) for b in basis), ring.zero())
            if not q.is_zero():
                return q

    tail = []
    gb_prev = None
    for _ in range(g):
        for attempt in range(budget):
            q = random_quadric()
            if tail:
                ok, gb_new = regular_via_numerator(q, Ideal(ring, tuple(tail)), gb_prev)
            else:
                ok, gb_new = True, groebner_basis(Ideal(ring, (q,)))
            if ok:
                tail.append(q)
                gb_prev = gb_new
                break
        else:
            raise RetryBudgetExceeded(
                "could not extend the regular sequence; input is probably not an ACI"
            )
    for attempt in range(budget):
        q1 = random_quadric()
        if forms_independent([q1] + tail, 2, ring):
            return q1, tuple(tail)
    raise RetryBudgetExceeded("could not complete a minimal generating set")


# -- classification ----------------------------------------------------------------

@dataclass
class Classification:
    """Outcome of structure extraction on a quadratic ACI.

    For OneLinearSyzygy the ideal is (x z, z w) + (quadrics); for
    TwoLinearSyzygies it is the 2-minors of `matrix` + (quadrics).  A
    structured tag certifies Koszulness (via the G-quadratic lift);
    Unstructured carries the failure reason, and is never Koszul because the
    two structured shapes exhaust Koszul quadratic ACIs.
    """

    tag: str
    beta23: int
    ideal: Ideal
    koszul: bool | None = None
    x: Polynomial | None = None
    z: Polynomial | None = None
    w: Polynomial | None = None
    matrix: tuple | None = None  # 3 rows x 2 cols of linear forms
    quadrics: tuple = ()
    reason: str = ""

    def reassembled_ideal(self) -> Ideal:
        ring = self.ideal.ring
        if self.tag == TAG_ONE:
            return Ideal(ring, (self.x * self.z, self.z * self.w) + self.quadrics)
        if self.tag == TAG_TWO:
            return Ideal(ring, matrix_minors(self.matrix, ring) + self.quadrics)
        raise ValueError(f"no structural data for tag {self.tag}")

    def to_json_dict(self) -> dict:
        ring = self.ideal.ring

        def form(fpoly):
            return None if fpoly is None else [fpoly.coefficient(
                tuple(1 if t == v else 0 for t in range(ring.n))
            ) for v in range(ring.n)]

        out = {
            "tag": self.tag,
            "beta23": self.beta23,
            "koszul": self.koszul,
            "char": ring.p,
            "vars": list(ring.names),
        }
        if self.tag == TAG_ONE:
            out["x"] = form(self.x)
            out["z"] = form(self.z)
            out["w"] = form(self.w)
        if self.tag == TAG_TWO:
            out["matrix"] = [[form(e) for e in row] for row in self.matrix]
        if self.quadrics:
            out["quadrics"] = [str(q) for q in self.quadrics]
        if self.reason:
            out["reason"] = self.reason
        return out


def matrix_minors(matrix, ring) -> tuple:
    """The three 2x2 minors of a 3x2 matrix, rows (0,1), (0,2), (1,2)."""
    (a, b), (c, d), (e, f) = matrix
    return (a * d - b * c, a * f - b * e, c * f - d * e)


def _koszul_span_system(quadrics, syzygies, ring):
    """Linear system for (linear forms t_1..t_r, scalars a_{ij}) with
    sum_k t_k . syz_k = sum_{i<j} a_ij (q_j e_i - q_i e_j).

    Returns (matrix, pairs); unknown layout is r blocks of n coefficients,
    then one scalar per pair (i, j).
    """
    k = len(quadrics)
    n = ring.n
    monos2 = ring.monomials_of_degree(2)
    index = {m: i for i, m in enumerate(monos2)}
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    ncols = len(syzygies) * n + len(pairs)
    mat = np.zeros((k * len(monos2), ncols), dtype=np.int64)
    for slot in range(k):
        row0 = slot * len(monos2)
        for s, syz in enumerate(syzygies):
            ell = syz[slot]
            for v in range(n):
                col = s * n + v
                shifted = ell.shift(tuple(1 if t == v else 0 for t in range(n)))
                for m, c in shifted.terms:
                    mat[row0 + index[m], col] = c
        for pcol, (i, j) in enumerate(pairs):
            col = len(syzygies) * n + pcol
            if slot == i:
                contrib = quadrics[j]
            elif slot == j:
                contrib = -quadrics[i]
            else:
                continue
            for m, c in contrib.terms:
                mat[row0 + index[m], col] = (-c) % ring.p
    return mat, pairs


def _row_to_form(row, offset, ring) -> Polynomial:
    coeffs = {}
    for v in range(ring.n):
        c = int(row[offset + v])
        if c:
            coeffs[tuple(1 if t == v else 0 for t in range(ring.n))] = c
    return ring.from_dict(coeffs)


def _permute_to_front(choice, k):
    """Permutation listing the chosen indices first, the rest ascending."""
    rest = [t for t in range(k) if t not in choice]
    return list(choice) + rest


def _apply_pair_permutation(a_pairs, perm, p):
    """Coefficients over pairs after relabelling generators by perm, with the
    sign flip for pairs whose order reverses."""
    out = {}
    k = len(perm)
    for knew in range(k):
        for lnew in range(knew + 1, k):
            i, j = perm[knew], perm[lnew]
            if i < j:
                val = a_pairs.get((i, j), 0)
            else:
                val = (-a_pairs.get((j, i), 0)) % p
            if val:
                out[(knew, lnew)] = val
    return out


def classify(I: Ideal) -> Classification:
    """Classify a quadratic almost complete intersection by its linear-syzygy
    count, extracting and verifying the corresponding structure."""
    if not is_quadratic_aci(I):
        raise NotQuadraticACIError("input is not a quadratic almost complete intersection")
    quadrics = list(minimal_generators(I))
    b = beta23(quadrics)
    if b == 0:
        return Classification(
            tag=TAG_UNSTRUCTURED,
            beta23=0,
            ideal=I,
            koszul=False,
            reason=(
                "no linear syzygy: an almost complete intersection is not a "
                "complete intersection, and every Koszul non-complete-"
                "intersection has a linear syzygy"
            ),
        )
    if b > 2:
        raise KernelInconsistency(
            f"beta_{{2,3}} = {b} > 2 on a quadratic ACI; this bound holds for "
            "every quadratic almost complete intersection, so the kernel "
            "miscomputed"
        )
    if b == 1:
        return _classify_one(I, quadrics)
    return _classify_two(I, quadrics)


def _unstructured(I, b, reason):
    return Classification(
        tag=TAG_UNSTRUCTURED,
        beta23=b,
        ideal=I,
        koszul=False,
        reason=reason + "; the structured shapes exhaust Koszul quadratic "
        "almost complete intersections, so this algebra is not Koszul",
    )


def _classify_one(I: Ideal, quadrics) -> Classification:
    ring = I.ring
    p = ring.p
    (ell,) = linear_syzygy_basis(quadrics)
    mat, pairs = _koszul_span_system(quadrics, [ell], ring)
    rows = linalg.nullspace(mat, ring.p)
    if rows.shape[0] == 0:
        return _unstructured(
            I, 1, "no multiple of the linear syzygy lies in the span of the Koszul syzygies"
        )
    row = rows[0]
    z = _row_to_form(row, 0, ring)
    assert not z.is_zero(), "kernel element with zero form part"
    a_pairs = {
        pq: int(row[ring.n + t]) for t, pq in enumerate(pairs) if row[ring.n + t]
    }
    (i0, j0) = sorted(a_pairs)[0]
    perm = _permute_to_front((i0, j0), len(quadrics))
    q = [quadrics[t] for t in perm]
    ell = tuple(ell[t] for t in perm)
    a_pairs = _apply_pair_permutation(a_pairs, perm, p)
    scale = ring.field.inv(a_pairs[(0, 1)])
    z = z.scale(scale)
    a_pairs = {pq: v * scale % p for pq, v in a_pairs.items()}

    w = ell[0]
    x = -ell[1]
    rest = tuple(q[2:])
    new_gens = (x * z, z * w) + rest
    if not forms_independent([x, w], 1, ring):
        return _unstructured(I, 1, "the two product factors are proportional")
    if not ideals_equal(Ideal(ring, new_gens), I):
        return _unstructured(I, 1, "generator replacement did not preserve the ideal")
    if not verify_regular_chain((x * z, z * w), rest, ring):
        return _unstructured(
            I, 1, "the remaining quadrics are not a regular sequence on the product quotient"
        )
    return Classification(
        tag=TAG_ONE, beta23=1, ideal=I, koszul=True, x=x, z=z, w=w, quadrics=rest
    )


def _classify_two(I: Ideal, quadrics) -> Classification:
    ring = I.ring
    p = ring.p
    syz = linear_syzygy_basis(quadrics)
    assert len(syz) == 2
    ell, h = syz
    mat, pairs = _koszul_span_system(quadrics, [ell, h], ring)
    rows = linalg.nullspace(mat, ring.p)
    if rows.shape[0] == 0:
        return _unstructured(
            I, 2, "no combination of the linear syzygies lies in the span of the Koszul syzygies"
        )
    n = ring.n
    row = rows[0]
    z = _row_to_form(row, 0, ring)
    v = _row_to_form(row, n, ring)
    if z.is_zero() and v.is_zero():
        raise KernelInconsistency("kernel element with zero form part")
    a_pairs = {
        pq: int(row[2 * n + t]) for t, pq in enumerate(pairs) if row[2 * n + t]
    }
    if not a_pairs:
        return _unstructured(I, 2, "the form combination of the syzygies vanishes")
    k = len(quadrics)
    (i0, j0) = sorted(a_pairs)[0]
    perm = _permute_to_front((i0, j0), k)
    q = [quadrics[t] for t in perm]
    ell = [ell[t] for t in perm]
    h = [h[t] for t in perm]
    a_pairs = _apply_pair_permutation(a_pairs, perm, p)
    scale = ring.field.inv(a_pairs[(0, 1)])
    z = z.scale(scale)
    v = v.scale(scale)
    a_pairs = {pq: val * scale % p for pq, val in a_pairs.items()}

    # replace the two leading generators and transport the syzygies
    q1_new = z * ell[0] + v * h[0]
    q0_new = -(z * ell[1] + v * h[1])
    a0 = {j: a_pairs.get((0, j), 0) for j in range(2, k)}
    a1 = {j: a_pairs.get((1, j), 0) for j in range(2, k)}
    ell = [ell[0], ell[1]] + [
        ell[j] - ell[1].scale(a0[j]) + ell[0].scale(a1[j]) for j in range(2, k)
    ]
    h = [h[0], h[1]] + [
        h[j] - h[1].scale(a0[j]) + h[0].scale(a1[j]) for j in range(2, k)
    ]
    q = [q0_new, q1_new] + q[2:]
    b_pairs = {}
    for i in range(2, k):
        for j in range(i + 1, k):
            val = (a_pairs.get((i, j), 0) + a0[j] * a1[i] - a0[i] * a1[j]) % p
            if val:
                b_pairs[(i, j)] = val
    if b_pairs:
        return _unstructured(
            I, 2, "the Koszul-span solution involves generators beyond the first two"
        )
    for vec in (ell, h):
        acc = ring.zero()
        for f, qq in zip(vec, q):
            acc = acc + f * qq
        assert acc.is_zero(), "transported syzygy failed"

    zmat = _coeff_matrix([z, v], 1, ring)
    if linalg.rank(zmat, p) == 2:
        # independent pair: coordinates beyond the first two are scalar
        # multiples of (v, -z)
        coeffs = []
        vrow = _coeff_matrix([v], 1, ring)[0]
        pivot = int(np.nonzero(vrow)[0][0])
        vinv = ring.field.inv(int(vrow[pivot]))
        for t in range(2, k):
            lrow = _coeff_matrix([ell[t]], 1, ring)[0]
            a_t = int(lrow[pivot]) * vinv % p
            if ell[t] != v.scale(a_t) or h[t] != (-z).scale(a_t):
                return _unstructured(I, 2, "syzygy coordinates are not multiples of the form pair")
            coeffs.append(a_t)
        if not any(coeffs):
            return _unstructured(I, 2, "the linear syzygies collapse onto two generators")
        t0 = 2 + [t for t, c in enumerate(coeffs) if c][0]
        swap = _permute_to_front((0, 1, t0), k)
        q = [q[t] for t in swap]
        coeffs = [coeffs[t - 2] for t in swap[2:]]
        ell = [ell[t] for t in swap]
        h = [h[t] for t in swap]
        q2_new = ring.zero()
        for c, qq in zip(coeffs, q[2:]):
            q2_new = q2_new + qq.scale(c)
        det = ell[0] * h[1] - ell[1] * h[0]
        if q2_new != det:
            return _unstructured(I, 2, "the third generator does not match the syzygy determinant")
        matrix = ((ell[0], h[0]), (ell[1], h[1]), (v, -z))
        rest = tuple(q[3:])
    else:
        # dependent pair: reduce to a single form z with z ell = (q2, -q1, 0..)
        # (the combination z ell + v h is symmetric, so swapping roles keeps
        # the replaced generators as they are)
        if z.is_zero():
            z, v = v, z
            ell, h = h, ell
        zrow = _coeff_matrix([z], 1, ring)[0]
        pivot = int(np.nonzero(zrow)[0][0])
        zinv = ring.field.inv(int(zrow[pivot]))
        if not v.is_zero():
            c = int(_coeff_matrix([v], 1, ring)[0][pivot]) * zinv % p
            if v != z.scale(c):
                raise KernelInconsistency("rank-1 form pair is not proportional")
            ell = [ell[t] + h[t].scale(c) for t in range(k)]
        if any(not ell[t].is_zero() for t in range(2, k)):
            return _unstructured(I, 2, "the reduced syzygy does not vanish beyond the first two slots")
        if not forms_independent([ell[0], ell[1]], 1, ring):
            return _unstructured(I, 2, "degenerate product pair")
        tail = Ideal(ring, tuple(q[2:]))
        if not is_regular_on(z, tail):
            return _unstructured(I, 2, "the common factor is a zerodivisor on the tail quotient")
        det = ell[0] * h[1] - ell[1] * h[0]
        if det.is_zero():
            return _unstructured(I, 2, "the syzygy determinant vanishes")
        coeff_rows = _coeff_matrix(list(q[2:]), 2, ring)
        target = _coeff_matrix([det], 2, ring)[0]
        solved = _solve_combination(coeff_rows, target, p)
        if solved is None:
            return _unstructured(I, 2, "the syzygy determinant is outside the tail quadric span")
        coeffs = [int(c) for c in solved]
        if not any(coeffs):
            return _unstructured(I, 2, "the syzygy determinant vanishes on the tail")
        t0 = 2 + [t for t, c in enumerate(coeffs) if c][0]
        swap = _permute_to_front((0, 1, t0), k)
        q = [q[t] for t in swap]
        ell = [ell[t] for t in swap]
        h = [h[t] for t in swap]
        q[2] = det
        hvec = [h[0], h[1], -z] + [ring.zero()] * (k - 3)
        acc = ring.zero()
        for f, qq in zip(hvec, q):
            acc = acc + f * qq
        if not acc.is_zero():
            return _unstructured(I, 2, "the reassembled syzygy fails on the replaced generators")
        matrix = ((ell[0], h[0]), (ell[1], h[1]), (ring.zero(), -z))
        rest = tuple(q[3:])

    minors = matrix_minors(matrix, ring)
    minor_ideal = Ideal(ring, minors)
    if height(minor_ideal) != 2:
        return _unstructured(I, 2, "the minor ideal does not have height 2")
    if not ideals_equal(Ideal(ring, minors + rest), I):
        return _unstructured(I, 2, "generator replacement did not preserve the ideal")
    if not verify_regular_chain(minors, rest, ring):
        return _unstructured(
            I, 2, "the remaining quadrics are not a regular sequence on the determinantal quotient"
        )
    return Classification(
        tag=TAG_TWO, beta23=2, ideal=I, koszul=True, matrix=matrix, quadrics=rest
    )


def _solve_combination(rows, target, p):
    """Scalar combination of the rows equal to target, or None."""
    if rows.shape[0] == 0:
        return None if np.any(target) else np.zeros(0, dtype=np.int64)
    aug = np.concatenate([rows, target.reshape(1, -1)], axis=0)
    ns = linalg.nullspace(aug.T, p)
    for row in ns:
        if row[-1]:
            inv = pow(int(row[-1]), p - 2, p)
            return (-row[:-1] * inv) % p
    return None


# -- predicted Betti tables --------------------------------------------------------

def predicted_betti(g: int, case: str) -> BettiTable:
    """Closed-form Betti table of the two structured families.

    Case "one": beta_{i,2i} = (g+i)/i C(g-1,i-1), beta_{i,2i-1} = C(g-1,i-2),
    totals C(g+1,i).  Case "two": beta_{i,2i} = 3 C(g-2,i-1) + C(g-2,i),
    beta_{i,2i-1} = 2 C(g-2,i-2), totals C(g,i) + C(g-1,i-1).
    """
    entries = {(0, 0): 1}
    if case == "one":
        if g < 1:
            raise ValueError("case one needs g >= 1")
        for i in range(1, g + 2):
            num = (g + i) * binomial(g - 1, i - 1)
            if num % i:
                raise KernelInconsistency("diagonal formula is not integral")
            if num:
                entries[(i, 2 * i)] = num // i
            sub = binomial(g - 1, i - 2)
            if sub:
                entries[(i, 2 * i - 1)] = sub
    elif case == "two":
        if g < 2:
            raise ValueError("case two needs g >= 2")
        for i in range(1, g + 1):
            diag = 3 * binomial(g - 2, i - 1) + binomial(g - 2, i)
            if diag:
                entries[(i, 2 * i)] = diag
            sub = 2 * binomial(g - 2, i - 2)
            if sub:
                entries[(i, 2 * i - 1)] = sub
    else:
        raise ValueError("case must be 'one' or 'two'")
    return BettiTable(entries)


# -- family generators -------------------------------------------------------------

def _family_ring(g: int, n_vars, char) -> Ring:
    n = n_vars if n_vars is not None else g + 2
    if n < g + 1:
        raise ValueError("need at least g+1 variables")
    names = tuple(f"x{i+1}" for i in range(n))
    return Ring(PrimeField(char), names)


def _independent_linear_forms(ring, count, rng, budget):
    for _ in range(budget):
        forms = [ring.random_linear_form(rng) for _ in range(count)]
        if forms_independent(forms, 1, ring):
            return forms
    raise RetryBudgetExceeded("could not sample independent linear forms")


def _extend_by_regular_quadrics(ring, base_gens, count, rng, budget):
    gens = tuple(base_gens)
    quadrics = []
    gb = groebner_basis(Ideal(ring, gens))
    for _ in range(count):
        for _ in range(budget):
            q = ring.random_form(2, rng)
            ok, gb_new = regular_via_numerator(q, Ideal(ring, gens), gb)
            if ok:
                quadrics.append(q)
                gens = gens + (q,)
                gb = gb_new
                break
        else:
            raise RetryBudgetExceeded("could not extend by a regular quadric")
    return quadrics


def generate_family_one(g: int, n_vars=None, seed=0, char=32003, budget=None) -> Ideal:
    """Random ideal (x z, z w, q_3, ..., q_{g+1}) with x, z, w independent
    linear forms and the quadrics a regular sequence on the product quotient;
    the result has height g and g+1 minimal generators."""
    if g < 1:
        raise ValueError("g >= 1")
    ring = _family_ring(g, n_vars, char)
    rng = random.Random(("one", g, seed).__str__())
    budget = retry_budget(budget)
    for _ in range(budget):
        x, z, w = _independent_linear_forms(ring, 3, rng, budget)
        base = (x * z, z * w)
        try:
            quadrics = _extend_by_regular_quadrics(ring, base, g - 1, rng, budget)
        except RetryBudgetExceeded:
            continue
        I = Ideal(ring, base + tuple(quadrics))
        if height(I) == g and is_quadratic_aci(I):
            return I
    raise RetryBudgetExceeded("family-one generation failed")


def generate_family_two(g: int, n_vars=None, seed=0, char=32003, budget=None) -> Ideal:
    """Random ideal I_2(M) + (q_4, ..., q_{g+1}) with M a 3x2 matrix of linear
    forms of minor height 2 and the quadrics a regular sequence on the
    determinantal quotient."""
    if g < 2:
        raise ValueError("g >= 2")
    ring = _family_ring(g, n_vars, char)
    rng = random.Random(("two", g, seed).__str__())
    budget = retry_budget(budget)
    for _ in range(budget):
        matrix = tuple(
            (ring.random_linear_form(rng), ring.random_linear_form(rng)) for _ in range(3)
        )
        minors = matrix_minors(matrix, ring)
        minor_ideal = Ideal(ring, minors)
        if not forms_independent(minors, 2, ring) or height(minor_ideal) != 2:
            continue
        try:
            quadrics = _extend_by_regular_quadrics(ring, minors, g - 2, rng, budget)
        except RetryBudgetExceeded:
            continue
        I = Ideal(ring, minors + tuple(quadrics))
        if height(I) == g and is_quadratic_aci(I):
            return I
    raise RetryBudgetExceeded("family-two generation failed")


def random_quadratic_aci(g: int, n_vars=None, seed=0, char=32003, budget=None) -> Ideal:
    """Random quadratic almost complete intersection: g+1 independent
    quadrics with height exactly g.  Samples constructions that land on
    height g (quadrics supported on a codimension-g frame, or monomial ACIs
    under a random change of coordinates) and rejects until the ACI predicate
    verifies; no Koszulness is implied."""
    if g < 1:
        raise ValueError("g >= 1")
    ring = _family_ring(g, n_vars, char)
    rng = random.Random(("aci", g, seed).__str__())
    budget = retry_budget(budget)
    n = ring.n
    p = ring.p
    for _ in range(budget):
        style = rng.choice(["subring", "frame", "monomial"])
        if style == "subring":
            zs = _independent_linear_forms(ring, g, rng, budget)
            quadrics = []
            for _ in range(g + 1):
                q = ring.zero()
                for a in range(g):
                    for b in range(a, g):
                        q = q + (zs[a] * zs[b]).scale(rng.randrange(p))
                quadrics.append(q)
        elif style == "frame":
            zs = _independent_linear_forms(ring, g, rng, budget)
            quadrics = []
            for _ in range(g + 1):
                q = ring.zero()
                for a in range(g):
                    q = q + zs[a] * ring.random_linear_form(rng)
                quadrics.append(q)
        else:
            i = rng.randrange(g)
            choices = [j for j in range(n) if j != i]
            j = rng.choice(choices)
            gens = [ring.variable(t) ** 2 for t in range(g)]
            gens.append(ring.variable(i) * ring.variable(j))
            images = []
            while True:
                rows = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
                if linalg.rank(linalg.as_matrix(rows, n), p) == n:
                    break
            for v in range(n):
                coeffs = {}
                for t in range(n):
                    if rows[v][t]:
                        coeffs[tuple(1 if s == t else 0 for s in range(n))] = rows[v][t]
                images.append(ring.from_dict(coeffs))
            quadrics = [ring_map(f, ring, images) for f in gens]
        if not forms_independent(quadrics, 2, ring):
            continue
        I = Ideal(ring, tuple(quadrics))
        if is_quadratic_aci(I):
            return I
    raise RetryBudgetExceeded("random ACI generation failed")


# -- G-quadratic lifts ---------------------------------------------------------------

@dataclass
class LGCertificate:
    """Witness that a classified ACI is a quotient of a G-quadratic algebra by
    a regular sequence of linear forms.

    The lifted ideal has a quadratic reduced Groebner basis under `order`;
    the linear forms are certified regular by the Hilbert-series telescope
    (each quotient multiplies the series by 1 - t); killing them recovers the
    classified ideal.
    """

    base_ideal: Ideal
    ring: Ring
    lifted: Ideal
    order: object
    linear_forms: tuple
    gb_degrees: tuple = ()
    quadratic: bool = False
    telescope: tuple = ()
    telescope_ok: bool = False
    recovered: bool = False

    def to_json_dict(self) -> dict:
        return {
            "char": self.ring.p,
            "vars": list(self.ring.names),
            "lifted": [str(g) for g in self.lifted.gens],
            "order": str(self.order),
            "linear_forms": [str(f) for f in self.linear_forms],
            "gb_degrees": list(self.gb_degrees),
            "quadratic": self.quadratic,
            "telescope": [list(k) for k in self.telescope],
            "telescope_ok": self.telescope_ok,
            "recovered": self.recovered,
        }


def _fresh_names(base, existing):
    out = []
    taken = set(existing)
    for name in base:
        while name in taken:
            name = name + "_"
        out.append(name)
        taken.add(name)
    return tuple(out)


def _embed(f: Polynomial, target: Ring, offset: int) -> Polynomial:
    """Inclusion of a ring whose variables sit at [offset, offset + n) of the
    target variable list."""
    pad_left = offset
    pad_right = target.n - offset - len(f.ring.names)
    terms = tuple(
        ((0,) * pad_left + m + (0,) * pad_right, c) for m, c in f.terms
    )
    return target.from_dict(dict(terms))


def substitute_linear(I: Ideal, theta: Polynomial):
    """Quotient by one linear form, eliminating a variable: returns the
    isomorphic presentation (smaller ring, substituted ideal)."""
    ring = I.ring
    if theta.is_zero() or not theta.is_homogeneous() or theta.degree() != 1:
        raise ValueError("need a nonzero linear form")
    row = _coeff_matrix([theta], 1, ring)[0]
    v0 = int(np.nonzero(row)[0][0])
    inv = ring.field.inv(int(row[v0]))
    small = Ring(ring.field, ring.names[:v0] + ring.names[v0 + 1 :])
    # images: v0 maps to -inv * (theta - c v0), others to themselves
    images = []
    repl = small.zero()
    for v in range(ring.n):
        if v == v0:
            continue
        c = int(row[v])
        if c:
            idx = v if v < v0 else v - 1
            repl = repl + small.variable(idx).scale((-c * inv) % ring.p)
    for v in range(ring.n):
        if v == v0:
            images.append(repl)
        else:
            idx = v if v < v0 else v - 1
            images.append(small.variable(idx))
    gens = tuple(ring_map(g, small, images) for g in I.gens)
    return small, Ideal(small, gens)


def telescope_check(lifted_numerator, base_numerator, lifted: Ideal, forms, base_ideal: Ideal):
    """Certify that the linear forms are a regular sequence on the lifted
    quotient by the Hilbert-series telescope.

    Quotienting a graded algebra A by a linear form always satisfies
    dim (A/f)_d >= dim A_d - dim A_{d-1}, with equality in every degree
    exactly when f is a nonzerodivisor.  Walking the whole chain, any first
    failure survives into the final Hilbert series as a strictly positive
    excess in its lowest degree.  Since killing the forms provably ends at
    the base presentation (checked by substitution), the single equality
    numerator(lifted) == numerator(base) therefore forces every step to
    multiply the series by (1 - t), i.e. the whole sequence is regular.
    """
    try:
        final_ring, final_ideal = kill_linear_forms(lifted, forms)
    except ValueError:
        return False  # a form died along the chain: not even a valid chain
    if final_ring != base_ideal.ring or not ideals_equal(final_ideal, base_ideal):
        return False
    return lifted_numerator == base_numerator


def _substitute_form(f: Polynomial, theta: Polynomial) -> Polynomial:
    ring = f.ring
    row = _coeff_matrix([theta], 1, ring)[0]
    v0 = int(np.nonzero(row)[0][0])
    inv = ring.field.inv(int(row[v0]))
    small = Ring(ring.field, ring.names[:v0] + ring.names[v0 + 1 :])
    images = []
    repl = small.zero()
    for v in range(ring.n):
        if v == v0:
            continue
        c = int(row[v])
        if c:
            idx = v if v < v0 else v - 1
            repl = repl + small.variable(idx).scale((-c * inv) % ring.p)
    for v in range(ring.n):
        if v == v0:
            images.append(repl)
        else:
            idx = v if v < v0 else v - 1
            images.append(small.variable(idx))
    return ring_map(f, small, images)


def lg_lift(classification: Classification) -> LGCertificate:
    """Lift a classified ACI to a G-quadratic algebra with a regular sequence
    of linear forms cutting back down to it."""
    if classification.tag == TAG_ONE:
        return _lift_one(classification)
    if classification.tag == TAG_TWO:
        return _lift_two(classification)
    raise ValueError("only structured classifications lift")


def _lift_one(c: Classification) -> LGCertificate:
    base = c.reassembled_ideal()
    ring = base.ring
    g = len(c.quadrics) + 1
    ynames = _fresh_names([f"y{i}" for i in range(1, g + 2)], ring.names)
    ext = Ring(ring.field, ynames + ring.names)
    off = len(ynames)
    z_e = _embed(c.z, ext, off)
    x_e = _embed(c.x, ext, off)
    w_e = _embed(c.w, ext, off)
    ys = [ext.variable(i) for i in range(len(ynames))]
    gens = [ys[0] * z_e, ys[1] * z_e]
    for t, q in enumerate(c.quadrics):
        gens.append(ys[2 + t] * ys[2 + t] + _embed(q, ext, off))
    lifted = Ideal(ext, tuple(gens))
    order = Block(greater=tuple(range(len(ynames))), inner=GREVLEX)
    forms = [ys[0] - x_e, ys[1] - w_e] + ys[2:]
    return _finish_certificate(c, base, ext, lifted, order, tuple(forms))


def _lift_two(c: Classification) -> LGCertificate:
    base = c.reassembled_ideal()
    ring = base.ring
    g = len(c.quadrics) + 2
    ynames = _fresh_names([f"y{i}" for i in range(4, g + 2)], ring.names)
    xnames = _fresh_names(["x12", "x11", "x22", "x21", "x32", "x31"], ring.names + ynames)
    ext = Ring(ring.field, ynames + xnames + ring.names)
    off = len(ynames) + len(xnames)
    ys = [ext.variable(i) for i in range(len(ynames))]
    xv = {nm: ext.variable(len(ynames) + t) for t, nm in enumerate(xnames)}
    X = (
        (xv[xnames[1]], xv[xnames[0]]),  # x11, x12
        (xv[xnames[3]], xv[xnames[2]]),  # x21, x22
        (xv[xnames[5]], xv[xnames[4]]),  # x31, x32
    )
    gens = list(matrix_minors(X, ext))
    for t, q in enumerate(c.quadrics):
        gens.append(ys[t] * ys[t] + _embed(q, ext, off))
    lifted = Ideal(ext, tuple(gens))
    order = Lex()
    forms = []
    for r in range(3):
        for col in range(2):
            forms.append(X[r][col] - _embed(c.matrix[r][col], ext, off))
    forms.extend(ys)
    return _finish_certificate(c, base, ext, lifted, order, tuple(forms))


def kill_linear_forms(lifted: Ideal, forms):
    """Quotient by the chain of linear forms via successive substitution;
    returns the final (ring, ideal)."""
    current = lifted
    chain = list(forms)
    ring = lifted.ring
    for k in range(len(chain)):
        theta = chain[k]
        ring, current = substitute_linear(current, theta)
        chain = chain[: k + 1] + [_substitute_form(f, theta) for f in chain[k + 1 :]]
    return ring, current


def _finish_certificate(c, base, ext, lifted, order, forms) -> LGCertificate:
    gb = groebner_basis(lifted, order)
    degrees = tuple(g.degree() for g in gb.elements)
    quadratic = bool(degrees) and max(degrees) <= 2
    lifted_numerator = _numerator_from_gb(gb)
    base_numerator = hilbert_numerator(base)
    telescope = (lifted_numerator, base_numerator)
    telescope_ok = telescope_check(lifted_numerator, base_numerator, lifted, forms, base)
    final_ring, final_ideal = kill_linear_forms(lifted, forms)
    recovered = final_ring == base.ring and ideals_equal(final_ideal, c.ideal)
    return LGCertificate(
        base_ideal=base,
        ring=ext,
        lifted=lifted,
        order=order,
        linear_forms=forms,
        gb_degrees=degrees,
        quadratic=quadratic,
        telescope=telescope,
        telescope_ok=telescope_ok,
        recovered=recovered,
    )


def verify_lift(cert: LGCertificate) -> bool:
    """Recheck a certificate from its data: quadratic reduced Groebner basis,
    and the Hilbert-series telescope down the chain of linear forms."""
    gb = groebner_basis(cert.lifted, cert.order)
    quadratic = bool(gb.elements) and max(g.degree() for g in gb.elements) <= 2
    telescope = telescope_numerators(cert.lifted, cert.linear_forms, cert.base_ideal)
    return quadratic and len(set(telescope)) == 1
