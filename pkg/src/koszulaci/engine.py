"""Buchberger engines on packed-monomial polynomials.

Monomials travel as single integers, 8 bits per variable (exponents stay far
below 128 at our scale): multiplication is integer addition, divisibility is
a guard-bit test, and monomial orders become memoized integer keys, so the
reduction loops run on machine comparisons.

Two engines: ideals ({code: coeff} dicts) and free modules ({(slot, code):
coeff}).  Pair selection is the normal strategy (minimal lcm degree); the
ideal engine applies the product and chain criteria, the module engine only
the chain criterion (the product criterion is not valid for module
elements).
"""

from __future__ import annotations

import heapq

from .ring import MonomialOrder, Ring

FIELD_BITS = 8
FIELD_MAX = (1 << (FIELD_BITS - 1)) - 1  # 127; guard bit stays clear


class Packer:
    """Pack exponent tuples into ints, variable v at bits [8v, 8v+7]."""

    def __init__(self, n: int):
        self.n = n
        self.guard = sum(1 << (FIELD_BITS * v + FIELD_BITS - 1) for v in range(n))

    def pack(self, mono) -> int:
        code = 0
        for v, e in enumerate(mono):
            if e:
                if e > FIELD_MAX:
                    raise OverflowError("exponent too large for packed monomials")
                code |= e << (FIELD_BITS * v)
        return code

    def unpack(self, code: int):
        out = []
        for _ in range(self.n):
            out.append(code & ((1 << FIELD_BITS) - 1))
            code >>= FIELD_BITS
        return tuple(out)

    def divides(self, a: int, b: int) -> bool:
        """a | b componentwise."""
        return ((b | self.guard) - a) & self.guard == self.guard

    def lcm(self, a: int, b: int) -> int:
        return self.pack(
            tuple(max(x, y) for x, y in zip(self.unpack(a), self.unpack(b)))
        )


def _int_key_fn(order: MonomialOrder, packer: Packer):
    """Memoized map code -> single int encoding the order (larger = greater).

    Order keys are flat int tuples with entries in (-FIELD_MAX..degree*n];
    they pack into fixed-width fields of one big integer.
    """
    width = 2 * FIELD_BITS + 4
    offset = 1 << (width - 1)
    memo = {}

    def key(code: int) -> int:
        v = memo.get(code)
        if v is None:
            parts = order.key(packer.unpack(code))
            acc = 0
            for x in parts:
                acc = (acc << width) | (x + offset)
            v = memo[code] = acc
        return v

    return key


def polynomial_to_packed(f, packer: Packer) -> dict:
    return {packer.pack(m): c for m, c in f.terms}


def packed_to_polynomial(d: dict, ring: Ring, packer: Packer):
    return ring.from_dict({packer.unpack(code): c for code, c in d.items()})


def reduce_packed(work: dict, lms, tails, key, packer: Packer, p: int) -> dict:
    """Full normal form of `work` against monic reducers (lms[i], tails[i])."""
    guard = packer.guard
    rem = {}
    work = dict(work)
    heap = [(-key(code), code) for code in work]
    heapq.heapify(heap)
    nred = len(lms)
    while heap:
        _, m = heapq.heappop(heap)
        c = work.get(m)
        if c is None:
            continue  # stale heap entry
        del work[m]
        mg = m | guard
        for r in range(nred):
            lm = lms[r]
            if (mg - lm) & guard == guard:
                shift = m - lm
                for tcode, tc in tails[r]:
                    code2 = tcode + shift
                    old = work.get(code2)
                    if old is None:
                        v = (-c * tc) % p
                        if v:
                            work[code2] = v
                            heapq.heappush(heap, (-key(code2), code2))
                    else:
                        v = (old - c * tc) % p
                        if v:
                            work[code2] = v
                        else:
                            del work[code2]
                break
        else:
            rem[m] = c
    return rem


class IdealEngine:
    def __init__(self, order: MonomialOrder, ring: Ring):
        self.packer = Packer(ring.n)
        self.key = _int_key_fn(order, self.packer)
        self.p = ring.p
        self.lms = []
        self.tails = []
        self.dicts = []

    def add(self, fdict: dict) -> int:
        key = self.key
        lm = max(fdict, key=key)
        lc = fdict[lm]
        if lc != 1:
            inv = pow(lc, self.p - 2, self.p)
            fdict = {m: c * inv % self.p for m, c in fdict.items()}
        self.lms.append(lm)
        self.tails.append(tuple((m, c) for m, c in fdict.items() if m != lm))
        self.dicts.append(fdict)
        return len(self.dicts) - 1

    def reduce(self, work: dict) -> dict:
        return reduce_packed(work, self.lms, self.tails, self.key, self.packer, self.p)

    def run(self, dicts, assume_prefix=0):
        """Groebner basis containing the inputs; the first `assume_prefix`
        inputs are assumed to already form a GB (their mutual pairs are
        skipped)."""
        p = self.p
        packer = self.packer
        deg_memo = {}

        def deg(code):
            d = deg_memo.get(code)
            if d is None:
                d = deg_memo[code] = sum(packer.unpack(code))
            return d

        for d in dicts:
            if d:
                self.add(d)
        n0 = min(assume_prefix, len(self.dicts))
        heap = []
        done = set()
        counter = 0

        def push_pair(i, j):
            nonlocal counter
            counter += 1
            lcm = packer.lcm(self.lms[i], self.lms[j])
            heapq.heappush(heap, (deg(lcm), counter, i, j, lcm))

        for j in range(len(self.dicts)):
            for i in range(j):
                if i < n0 and j < n0:
                    done.add((i, j))
                else:
                    push_pair(i, j)
        while heap:
            _, _, i, j, lcm = heapq.heappop(heap)
            done.add((i, j))
            lmi, lmj = self.lms[i], self.lms[j]
            if lmi + lmj == lcm:
                continue  # coprime leading monomials
            skip = False
            for k in range(len(self.dicts)):
                if k == i or k == j:
                    continue
                if packer.divides(self.lms[k], lcm):
                    a, b = (i, k) if i < k else (k, i)
                    c, d = (j, k) if j < k else (k, j)
                    if (a, b) in done and (c, d) in done:
                        skip = True
                        break
            if skip:
                continue
            si = lcm - lmi
            sj = lcm - lmj
            spoly = {}
            for m, c in self.dicts[i].items():
                spoly[m + si] = c
            for m, c in self.dicts[j].items():
                code = m + sj
                v = (spoly.get(code, 0) - c) % p
                if v:
                    spoly[code] = v
                else:
                    spoly.pop(code, None)
            rem = self.reduce(spoly)
            if rem:
                t = self.add(rem)
                for k in range(t):
                    push_pair(k, t)
        return self._interreduce()

    def _interreduce(self):
        key = self.key
        packer = self.packer
        order_idx = sorted(range(len(self.dicts)), key=lambda i: key(self.lms[i]))
        kept = []
        for i in order_idx:
            if not any(packer.divides(self.lms[k], self.lms[i]) for k in kept):
                kept.append(i)
        out = []
        for pos, i in enumerate(kept):
            others = kept[:pos] + kept[pos + 1 :]
            rem = reduce_packed(
                self.dicts[i],
                [self.lms[k] for k in others],
                [self.tails[k] for k in others],
                key,
                packer,
                self.p,
            )
            out.append(rem)
        return out


class ModuleEngine:
    """Buchberger for submodules of a graded free module; module monomials
    are (slot, code) with ring order first, lower slot greater."""

    def __init__(self, order: MonomialOrder, ring: Ring):
        self.packer = Packer(ring.n)
        ring_key = _int_key_fn(order, self.packer)
        self.ring_key = ring_key
        self.p = ring.p
        self.lms = []
        self.tails = []
        self.dicts = []

    def key(self, sm):
        return (self.ring_key(sm[1]), -sm[0])

    def add(self, fdict: dict) -> int:
        lm = max(fdict, key=self.key)
        lc = fdict[lm]
        if lc != 1:
            inv = pow(lc, self.p - 2, self.p)
            fdict = {m: c * inv % self.p for m, c in fdict.items()}
        self.lms.append(lm)
        self.tails.append(tuple((m, c) for m, c in fdict.items() if m != lm))
        self.dicts.append(fdict)
        return len(self.dicts) - 1

    def reduce(self, work: dict) -> dict:
        work = dict(work)
        rem = {}
        p = self.p
        key = self.key
        guard = self.packer.guard
        lms = self.lms
        tails = self.tails
        heap = [(key(sm)[0], sm[0], sm) for sm in work]
        # max ring key first, then lower slot: heapq is a min-heap, so negate
        heap = [(-k, s, sm) for k, s, sm in heap]
        heapq.heapify(heap)
        while heap:
            _, _, sm = heapq.heappop(heap)
            c = work.get(sm)
            if c is None:
                continue
            del work[sm]
            slot, m = sm
            mg = m | guard
            for r in range(len(lms)):
                lslot, lm = lms[r]
                if lslot != slot or (mg - lm) & guard != guard:
                    continue
                shift = m - lm
                for (tslot, tcode), tc in tails[r]:
                    kk = (tslot, tcode + shift)
                    old = work.get(kk)
                    if old is None:
                        v = (-c * tc) % p
                        if v:
                            work[kk] = v
                            heapq.heappush(heap, (-self.ring_key(kk[1]), kk[0], kk))
                    else:
                        v = (old - c * tc) % p
                        if v:
                            work[kk] = v
                        else:
                            del work[kk]
                break
            else:
                rem[sm] = c
        return rem

    def run(self, dicts):
        p = self.p
        packer = self.packer
        for d in dicts:
            if d:
                self.add(d)
        heap = []
        done = set()
        counter = 0

        def push_pairs(t):
            nonlocal counter
            slot_t, lm_t = self.lms[t]
            for k in range(t):
                slot_k, lm_k = self.lms[k]
                if slot_k != slot_t:
                    continue
                counter += 1
                lcm = packer.lcm(lm_k, lm_t)
                heapq.heappush(
                    heap, (sum(packer.unpack(lcm)), counter, k, t, lcm)
                )

        for t in range(len(self.dicts)):
            push_pairs(t)
        while heap:
            _, _, i, j, lcm = heapq.heappop(heap)
            done.add((i, j))
            slot = self.lms[i][0]
            skip = False
            for k in range(len(self.dicts)):
                if k == i or k == j or self.lms[k][0] != slot:
                    continue
                if packer.divides(self.lms[k][1], lcm):
                    a, b = (i, k) if i < k else (k, i)
                    c, d = (j, k) if j < k else (k, j)
                    if (a, b) in done and (c, d) in done:
                        skip = True
                        break
            if skip:
                continue
            si = lcm - self.lms[i][1]
            sj = lcm - self.lms[j][1]
            spoly = {}
            for (s, m), c in self.dicts[i].items():
                spoly[(s, m + si)] = c
            for (s, m), c in self.dicts[j].items():
                kk = (s, m + sj)
                v = (spoly.get(kk, 0) - c) % p
                if v:
                    spoly[kk] = v
                else:
                    spoly.pop(kk, None)
            rem = self.reduce(spoly)
            if rem:
                push_pairs(self.add(rem))

    def pair_degree_bound(self, twists) -> int:
        """Largest internal degree of an S-pair lcm across the basis; kernel
        generators of the presented map live in degrees bounded by this
        together with the column degrees (Schreyer)."""
        packer = self.packer
        best = 0
        by_slot = {}
        for slot, lm in self.lms:
            by_slot.setdefault(slot, []).append(lm)
        for slot, codes in by_slot.items():
            tw = twists[slot]
            monos = [packer.unpack(c) for c in codes]
            for i in range(len(monos)):
                for j in range(i):
                    lcm_deg = sum(max(a, b) for a, b in zip(monos[i], monos[j]))
                    if lcm_deg + tw > best:
                        best = lcm_deg + tw
        return best


def buchberger_polynomials(gens, order: MonomialOrder, seed_gb=None):
    """Reduced Groebner basis of an ideal, as Polynomial objects, sorted by
    (degree, leading monomial).  `seed_gb` seeds the computation with a known
    GB of a subideal."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return ()
    ring = gens[0].ring
    engine = IdealEngine(order, ring)
    seed = list(seed_gb) if seed_gb else []
    dicts = [polynomial_to_packed(g, engine.packer) for g in seed] + [
        polynomial_to_packed(g, engine.packer) for g in gens
    ]
    reduced = engine.run(dicts, assume_prefix=len(seed))
    polys = [packed_to_polynomial(d, ring, engine.packer) for d in reduced]
    polys.sort(key=lambda f: (f.degree(), order.key(f.leading_monomial(order))))
    return tuple(polys)
