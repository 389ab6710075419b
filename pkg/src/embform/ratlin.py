"""Exact rational linear algebra.

Vectors are tuples of numbers, matrices are tuples of row tuples.  Entries
may be Python ints or ``fractions.Fraction``; everything stays exact, no
floating point anywhere.  ``Rational`` is an alias for ``Fraction``, which
already guarantees the reduced form and positive denominator we rely on.

Normals and basis vectors returned by this module are scaled to primitive
integer vectors: integer entries with gcd 1 and, where a sign convention is
needed, a positive first nonzero entry.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Rational = Fraction

Vec = tuple
Mat = tuple


def rational(value) -> Fraction:
    """Parse ints, strings like ``"3/4"``, or Fractions into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def dot(a: Sequence, b: Sequence):
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return sum(x * y for x, y in zip(a, b))


def vec_add(a: Sequence, b: Sequence) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vec_sub(a: Sequence, b: Sequence) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vec_scale(a: Sequence, s) -> Vec:
    return tuple(x * s for x in a)


def is_zero(a: Sequence) -> bool:
    return all(x == 0 for x in a)


def scale_primitive(a: Sequence) -> Vec:
    """Scale by a positive rational so entries are integers with gcd 1.

    The orientation (overall sign) of the vector is preserved.
    """
    fracs = [Fraction(x) for x in a]
    den = 1
    for f in fracs:
        den = den * f.denominator // gcd(den, f.denominator)
    ints = [int(f * den) for f in fracs]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g == 0:
        return tuple(0 for _ in ints)
    return tuple(v // g for v in ints)


def sign_normalize(a: Sequence) -> Vec:
    """Flip the sign, if needed, so the first nonzero entry is positive."""
    for x in a:
        if x != 0:
            return tuple(a) if x > 0 else tuple(-v for v in a)
    return tuple(a)


def canonical_normal(a: Sequence) -> Vec:
    """Primitive integer vector with positive first nonzero entry."""
    return sign_normalize(scale_primitive(a))


def _fraction_free_echelon(rows: list[list[int]]) -> int:
    """In-place Bareiss-style elimination on integer rows; returns the rank.

    Integer inputs only; intermediate entries stay integral and bounded by
    subdeterminants, which keeps growth manageable on the matrix sizes the
    hull computations produce.
    """
    if not rows:
        return 0
    n_rows, n_cols = len(rows), len(rows[0])
    rank = 0
    prev_pivot = 1
    for col in range(n_cols):
        pivot_row = None
        for r in range(rank, n_rows):
            if rows[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        piv = rows[rank][col]
        # Bareiss step: every row below is rescaled, even with a zero
        # eliminating coefficient, or later exact divisions break.
        for r in range(rank + 1, n_rows):
            factor = rows[r][col]
            row_r, row_p = rows[r], rows[rank]
            for c in range(col, n_cols):
                row_r[c] = (piv * row_r[c] - factor * row_p[c]) // prev_pivot
        prev_pivot = piv
        rank += 1
        if rank == n_rows:
            break
    return rank


def _integer_rows(matrix: Iterable[Sequence]) -> list[list[int]]:
    out = []
    for row in matrix:
        if all(isinstance(x, int) for x in row):
            out.append(list(row))
        else:
            out.append(list(scale_primitive(row)) if any(row) else [0] * len(row))
    return out


def rank(matrix: Iterable[Sequence]) -> int:
    """Exact rank over the rationals via fraction-free elimination."""
    rows = _integer_rows(matrix)
    return _fraction_free_echelon(rows)


def rank_naive(matrix: Iterable[Sequence]) -> int:
    """Rank via plain rational Gaussian elimination (cross-check path)."""
    rows = [[Fraction(x) for x in row] for row in matrix]
    if not rows:
        return 0
    n_rows, n_cols = len(rows), len(rows[0])
    rnk = 0
    for col in range(n_cols):
        pivot_row = None
        for r in range(rnk, n_rows):
            if rows[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        rows[rnk], rows[pivot_row] = rows[pivot_row], rows[rnk]
        piv = rows[rnk][col]
        for r in range(rnk + 1, n_rows):
            if rows[r][col] != 0:
                f = rows[r][col] / piv
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rnk])]
        rnk += 1
        if rnk == n_rows:
            break
    return rnk


def rref(matrix: Iterable[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals.

    Returns (nonzero rows, pivot column indices).
    """
    rows = [[Fraction(x) for x in row] for row in matrix]
    pivots: list[int] = []
    if not rows:
        return [], pivots
    n_rows, n_cols = len(rows), len(rows[0])
    r = 0
    for col in range(n_cols):
        pivot_row = None
        for i in range(r, n_rows):
            if rows[i][col] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        piv = rows[r][col]
        rows[r] = [x / piv for x in rows[r]]
        for i in range(n_rows):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == n_rows:
            break
    return rows[:r], pivots


def nullspace_basis(matrix: Iterable[Sequence]) -> list[Vec]:
    """Basis of ``{x : Mx = 0}`` as primitive integer vectors.

    Each basis vector is sign-normalized (first nonzero entry positive);
    the list is ordered by the free column it corresponds to.
    """
    mat = [tuple(row) for row in matrix]
    if not mat:
        return []
    n_cols = len(mat[0])
    reduced, pivots = rref(mat)
    pivot_set = set(pivots)
    basis: list[Vec] = []
    for free in range(n_cols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * n_cols
        v[free] = Fraction(1)
        for row, piv_col in zip(reduced, pivots):
            v[piv_col] = -row[free]
        basis.append(canonical_normal(v))
    return basis


def solve(matrix: Iterable[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """One exact solution of ``Mx = b``, or None if inconsistent."""
    mat = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    if not mat:
        return []
    n_cols = len(mat[0]) - 1
    reduced, pivots = rref(mat)
    x = [Fraction(0)] * n_cols
    for row, piv in zip(reduced, pivots):
        if piv == n_cols:
            return None
        x[piv] = row[-1]
    return x


def in_span(vector: Sequence, basis: Sequence[Sequence]) -> bool:
    """Exact membership of ``vector`` in the span of ``basis``."""
    if is_zero(vector):
        return True
    base = list(basis)
    return rank(base) == rank(base + [tuple(vector)])


def primitive_normal(
    directions: Sequence[Sequence], ambient_basis: Sequence[Sequence]
) -> Vec | None:
    """Normal of the hyperplane of span(ambient_basis) containing ``directions``.

    Given directions lying in the subspace L spanned by ``ambient_basis``,
    returns the unique (up to sign) primitive integer b in L with b·d = 0
    for every direction, sign-normalized.  Returns None when the directions
    do not span a (dim L - 1)-dimensional space, i.e. no hyperplane of L is
    singled out.

    Raises ValueError if some direction falls outside L.
    """
    basis = [tuple(b) for b in ambient_basis]
    s = len(basis)
    if rank(basis) != s:
        raise ValueError("ambient_basis must be linearly independent")
    dirs = [tuple(d) for d in directions]
    for d in dirs:
        if not in_span(d, basis):
            raise ValueError(f"direction {d} outside the ambient span")
    if rank(dirs) != s - 1:
        return None
    # b = sum t_a basis_a with d·b = 0 for all directions
    system = [[dot(d, b) for b in basis] for d in dirs]
    coeffs = nullspace_basis(system)
    if len(coeffs) != 1:
        return None
    t = coeffs[0]
    b = [Fraction(0)] * len(basis[0])
    for t_a, base_vec in zip(t, basis):
        for j, x in enumerate(base_vec):
            b[j] += t_a * x
    return canonical_normal(b)
