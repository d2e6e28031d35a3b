"""Tiny integer polynomial helpers (coefficient tuples indexed by degree).

Used for Hilbert series numerators and h-polynomials, which live over the
integers regardless of the coefficient field.
"""

from __future__ import annotations


def trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c) if c else (0,)


def add(a, b):
    n = max(len(a), len(b))
    return trim(tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)))


def sub(a, b):
    n = max(len(a), len(b))
    return trim(tuple((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)))


def shift(a, k):
    """Multiply by t^k."""
    if a == (0,):
        return a
    return tuple([0] * k + list(a))


def mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def eval_at_one(a) -> int:
    return sum(a)


def divide_by_one_minus_t(a):
    """Exact quotient a / (1 - t); raises if 1 is not a root."""
    q = []
    acc = 0
    for c in a:
        acc += c
        q.append(acc)
    if acc != 0:
        raise ArithmeticError("polynomial is not divisible by 1 - t")
    q.pop()  # the running total ends at the remainder slot
    return trim(q) if q else (0,)


def divide_by_power_of_one_minus_t(a, k):
    for _ in range(k):
        a = divide_by_one_minus_t(a)
    return a


def one_minus_t_multiplicity(a) -> int:
    """Largest k with (1-t)^k dividing a (a nonzero)."""
    if trim(a) == (0,):
        raise ValueError("zero polynomial")
    k = 0
    while eval_at_one(a) == 0:
        a = divide_by_one_minus_t(a)
        k += 1
    return k


def to_string(a, var="t") -> str:
    if trim(a) == (0,):
        return "0"
    chunks = []
    for i, c in enumerate(a):
        if c == 0:
            continue
        if i == 0:
            body = str(abs(c))
        else:
            tpow = var if i == 1 else f"{var}^{i}"
            body = tpow if abs(c) == 1 else f"{abs(c)}{tpow}"
        chunks.append(("-" if c < 0 else "+", body))
    sign, body = chunks[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in chunks[1:]:
        out += f" {sign} {body}"
    return out
