"""Exact rational scalars and vectors.

Every coordinate in the package is a :class:`gmpy2.mpq`, which keeps
numerator and denominator in lowest terms with a positive denominator.
Vectors are plain tuples of ``mpq``.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq

Scalar = type(mpq())
Vector = tuple

ZERO = mpq(0)
ONE = mpq(1)

_RATIONAL_RE = re.compile(r"^\s*[+-]?\d+(\s*/\s*\d+)?\s*$")


def q(value) -> Scalar:
    """Coerce ``value`` (int, Fraction, mpq or ``"p/q"`` string) to ``mpq``."""
    if isinstance(value, Scalar):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        if not _RATIONAL_RE.match(value):
            raise ValueError(f"not a rational literal: {value!r}")
        num, _, den = value.replace(" ", "").partition("/")
        if den and int(den) == 0:
            raise ZeroDivisionError(f"zero denominator in {value!r}")
        return mpq(int(num), int(den) if den else 1)
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass a Fraction or 'p/q' string")
    return mpq(value)


def vec(values: Iterable) -> Vector:
    return tuple(q(v) for v in values)


def zeros(n: int) -> Vector:
    return (ZERO,) * n


def unit(n: int, i: int) -> Vector:
    return tuple(ONE if j == i else ZERO for j in range(n))


def dot(a: Sequence, b: Sequence) -> Scalar:
    if len(a) != len(b):
        raise ValueError(f"length mismatch {len(a)} != {len(b)}")
    s = ZERO
    for x, y in zip(a, b):
        if x and y:
            s += x * y
    return s


def add(a: Sequence, b: Sequence) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence, b: Sequence) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def scale(c, a: Sequence) -> Vector:
    return tuple(c * x for x in a)


def lincomb(coeffs: Sequence, vectors: Sequence[Sequence], n: int | None = None) -> Vector:
    """Return ``sum(c_i * v_i)``; ``n`` fixes the length when ``vectors`` is empty."""
    if n is None:
        n = len(vectors[0])
    out = [ZERO] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for j, x in enumerate(v):
                out[j] += c * x
    return tuple(out)


def fmt(x) -> str:
    """Canonical ``"p/q"`` (or ``"p"``) rendering of a rational."""
    x = q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def fmt_vec(v: Iterable) -> list[str]:
    return [fmt(x) for x in v]


def to_fraction(x) -> Fraction:
    x = q(x)
    return Fraction(int(x.numerator), int(x.denominator))


def inverse(rows: Sequence[Sequence]) -> list[Vector] | None:
    """Exact inverse of a square matrix (Gauss-Jordan), ``None`` if singular."""
    n = len(rows)
    M = [list(map(q, r)) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c]), None)
        if p is None:
            return None
        M[c], M[p] = M[p], M[c]
        inv = 1 / M[c][c]
        M[c] = [v * inv for v in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[c])]
    return [tuple(r[n:]) for r in M]


def transpose(rows: Sequence[Sequence]) -> list[Vector]:
    return [tuple(col) for col in zip(*rows)]


def rank(rows: Sequence[Sequence]) -> int:
    M = [list(map(q, r)) for r in rows]
    if not M:
        return 0
    rk, ncols = 0, len(M[0])
    for c in range(ncols):
        p = next((r for r in range(rk, len(M)) if M[r][c]), None)
        if p is None:
            continue
        M[rk], M[p] = M[p], M[rk]
        for r in range(rk + 1, len(M)):
            if M[r][c]:
                f = M[r][c] / M[rk][c]
                M[r] = [a - f * b for a, b in zip(M[r], M[rk])]
        rk += 1
    return rk
