"""Exact linear algebra over the rationals.

Vectors are tuples of Fraction, matrices are tuples of row vectors.  A
subspace is identified with its row space and represented canonically by
the reduced row echelon form of any spanning set, so two subspaces are
equal iff their canonical matrices are equal as tuples.

Rank computations go through a fraction-free integer elimination (rows are
scaled to integers first); everything else stays in Fraction arithmetic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

Vec = tuple[Fraction, ...]
Mat = tuple[Vec, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def vec(entries: Iterable) -> Vec:
    return tuple(Fraction(x) for x in entries)


def mat(rows: Iterable[Iterable]) -> Mat:
    return tuple(vec(r) for r in rows)


def zeros(n: int, m: int) -> Mat:
    return tuple(tuple(ZERO for _ in range(m)) for _ in range(n))


def identity(n: int) -> Mat:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def _int_rows(rows: Iterable[Sequence[Fraction]]) -> list[list[int]]:
    out = []
    for r in rows:
        den = 1
        for x in r:
            d = x.denominator
            den = den * d // math.gcd(den, d)
        row = [int(x.numerator * (den // x.denominator)) for x in r]
        if any(row):
            g = 0
            for v in row:
                g = math.gcd(g, v)
            if g > 1:
                row = [v // g for v in row]
            out.append(row)
    return out


def rank(rows: Iterable[Sequence[Fraction]]) -> int:
    """Rank via fraction-free Gaussian elimination on integer-scaled rows."""
    work = _int_rows(rows)
    if not work:
        return 0
    ncols = len(work[0])
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(work)):
            if work[i][c]:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        prow = work[r]
        p = prow[c]
        for i in range(r + 1, len(work)):
            q = work[i][c]
            if q:
                row = work[i]
                work[i] = [p * a - q * b for a, b in zip(row, prow)]
        r += 1
        if r == len(work):
            break
    return r


def rref(rows: Iterable[Sequence[Fraction]]) -> Mat:
    """Reduced row echelon form with zero rows dropped (canonical basis)."""
    work = [list(map(Fraction, r)) for r in rows]
    work = [r for r in work if any(x != 0 for x in r)]
    if not work:
        return ()
    ncols = len(work[0])
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(work)):
            if work[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = work[r][c]
        if inv != 1:
            work[r] = [x / inv for x in work[r]]
        prow = work[r]
        for i in range(len(work)):
            if i != r and work[i][c] != 0:
                f = work[i][c]
                work[i] = [a - f * b for a, b in zip(work[i], prow)]
        r += 1
        if r == len(work):
            break
    work = [row for row in work if any(x != 0 for x in row)]
    return tuple(tuple(row) for row in work)


def stack(*mats: Mat) -> Mat:
    rows: list[Vec] = []
    for m in mats:
        rows.extend(m)
    return tuple(rows)


def dim_sum(a: Mat, b: Mat) -> int:
    return rank(stack(a, b))


def dim_intersection(a: Mat, b: Mat) -> int:
    """dim(rowspace(a) ∩ rowspace(b)); a and b need not be reduced."""
    ra, rb = rank(a), rank(b)
    return ra + rb - dim_sum(a, b)


def dim_intersection_coords(coords: Sequence[int], b: Mat, ncols: int) -> int:
    """dim(span(e_i : i in coords) ∩ rowspace(b)) via projection rank."""
    others = [j for j in range(ncols) if j not in set(coords)]
    if not others:
        return rank(b)
    proj = tuple(tuple(row[j] for j in others) for row in b)
    return rank(b) - rank(proj)


def in_span(basis: Mat, v: Vec) -> bool:
    if all(x == 0 for x in v):
        return True
    return rank(stack(basis, (v,))) == rank(basis)


def mat_vec(m: Mat, v: Vec) -> Vec:
    return tuple(sum((a * b for a, b in zip(row, v)), ZERO) for row in m)


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum((x * y for x, y in zip(row, col)), ZERO) for col in bt) for row in a
    )


def mat_sub(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_scale(c: Fraction, a: Mat) -> Mat:
    return tuple(tuple(c * x for x in row) for row in a)


def mat_pow(a: Mat, k: int) -> Mat:
    n = len(a)
    out = identity(n)
    base = a
    while k:
        if k & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        k >>= 1
    return out


def det(a: Mat) -> Fraction:
    n = len(a)
    work = [list(row) for row in a]
    sign = 1
    out = ONE
    for c in range(n):
        piv = None
        for i in range(c, n):
            if work[i][c] != 0:
                piv = i
                break
        if piv is None:
            return ZERO
        if piv != c:
            work[c], work[piv] = work[piv], work[c]
            sign = -sign
        p = work[c][c]
        out *= p
        for i in range(c + 1, n):
            if work[i][c] != 0:
                f = work[i][c] / p
                work[i] = [x - f * y for x, y in zip(work[i], work[c])]
    return out * sign


def trace(a: Mat) -> Fraction:
    return sum((a[i][i] for i in range(len(a))), ZERO)


def char_poly(a: Mat) -> tuple[Fraction, ...]:
    """Coefficients (c_0 .. c_n) of det(xI - a) = c_0 x^n + ... + c_n.

    Faddeev-LeVerrier recursion; exact over Fraction.
    """
    n = len(a)
    coeffs = [ONE]
    m = identity(n)
    for k in range(1, n + 1):
        am = mat_mul(a, m)
        c = -trace(am) / k
        coeffs.append(c)
        m = tuple(
            tuple(am[i][j] + (c if i == j else ZERO) for j in range(n))
            for i in range(n)
        )
    return tuple(coeffs)


def kernel_basis(m: Mat) -> Mat:
    """Basis (rows) of the right null space {x : m x = 0}."""
    if not m:
        return ()
    ncols = len(m[0])
    red = rref(m)
    pivots = []
    for row in red:
        for j, x in enumerate(row):
            if x != 0:
                pivots.append(j)
                break
    free = [j for j in range(ncols) if j not in pivots]
    out = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for i, pj in enumerate(pivots):
            v[pj] = -red[i][f]
        out.append(tuple(v))
    return tuple(out)


def intersect_basis(a: Mat, b: Mat) -> Mat:
    """Canonical basis of rowspace(a) ∩ rowspace(b)."""
    if not a or not b:
        return ()
    stacked = stack(a, b)
    # left null space of `stacked` = kernel of its transpose
    transp = tuple(zip(*stacked))
    combos = kernel_basis(transp)
    na = len(a)
    rows = []
    for z in combos:
        v = [ZERO] * len(a[0])
        for i in range(na):
            if z[i] != 0:
                v = [x + z[i] * y for x, y in zip(v, a[i])]
        if any(x != 0 for x in v):
            rows.append(tuple(v))
    return rref(rows)


def closure_under(vectors: Iterable[Vec], operators: Sequence[Mat]) -> Mat:
    """Smallest subspace containing `vectors` stable under every operator."""
    basis = rref(tuple(vectors))
    queue = list(basis)
    while queue:
        v = queue.pop()
        for op in operators:
            w = mat_vec(op, v)
            if not in_span(basis, w):
                basis = rref(stack(basis, (w,)))
                queue.append(w)
    return basis


def is_stable(basis: Mat, operators: Sequence[Mat]) -> bool:
    r = rank(basis)
    for op in operators:
        for v in basis:
            if rank(stack(basis, (mat_vec(op, v),))) != r:
                return False
    return True


def p_valuation(x: Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    if x == 0:
        raise ZeroDivisionError("valuation of zero")
    v = 0
    num = abs(x.numerator)
    while num % p == 0:
        num //= p
        v += 1
    den = x.denominator
    while den % p == 0:
        den //= p
        v -= 1
    return v
