"""Exact linear algebra over the rationals.

Matrices are sequences of rows; every entry is converted to
:class:`fractions.Fraction` on entry, so results never round.
"""

from fractions import Fraction

from .errors import DependentBasis, DimensionMismatch, SingularSystem


def as_matrix(rows):
    return [[Fraction(x) for x in row] for row in rows]


def transpose(rows):
    return [list(col) for col in zip(*rows)]


def rref(rows):
    """Reduced row echelon form.

    Returns ``(R, pivots)`` where ``pivots`` lists the pivot column of each
    nonzero row of ``R``.
    """
    m = as_matrix(rows)
    if not m:
        return m, []
    n_rows, n_cols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        p = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(rows):
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows, n_cols=None):
    """Basis of ``{x : M x = 0}`` as a list of coefficient lists.

    ``n_cols`` is needed only when ``rows`` is empty.
    """
    if not rows:
        if n_cols is None:
            raise DimensionMismatch("nullspace of an empty matrix needs n_cols")
        return [[Fraction(int(i == j)) for i in range(n_cols)] for j in range(n_cols)]
    r, pivots = rref(rows)
    n = len(r[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, p in zip(r, pivots):
            x[p] = -row[f]
        basis.append(x)
    return basis


def solve(a, b):
    """Unique solution of ``A x = b`` for a possibly overdetermined system.

    Raises :class:`SingularSystem` when the system is inconsistent or its
    solution is not unique.
    """
    a = as_matrix(a)
    if len(a) != len(b):
        raise DimensionMismatch(f"{len(a)} equations but {len(b)} right-hand sides")
    n = len(a[0])
    aug = [row + [Fraction(v)] for row, v in zip(a, b)]
    r, pivots = rref(aug)
    if n in pivots:
        raise SingularSystem("inconsistent linear system")
    if len(pivots) < n:
        raise SingularSystem(f"solution space has dimension {n - len(pivots)}")
    x = [Fraction(0)] * n
    for row, p in zip(r, pivots):
        x[p] = row[n]
    return x


def det(rows):
    m = as_matrix(rows)
    n = len(m)
    if any(len(row) != n for row in m):
        raise DimensionMismatch("determinant of a non-square matrix")
    sign = 1
    result = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            sign = -sign
        piv = m[c][c]
        result *= piv
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / piv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return sign * result


def inverse(rows):
    m = as_matrix(rows)
    n = len(m)
    aug = [row + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise SingularSystem("matrix is not invertible")
    return [row[n:] for row in r]


def matmul(a, b):
    bt = transpose(b)
    return [[sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in bt] for row in a]


def matvec(a, v):
    return [sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a]


def leading_minors(rows):
    n = len(rows)
    return [det([row[:k] for row in rows[:k]]) for k in range(1, n + 1)]


def is_independent(vectors):
    vectors = list(vectors)
    return rank(vectors) == len(vectors) if vectors else True


def coordinates(basis, v):
    """Coordinates of ``v`` in the span of ``basis``, or ``None`` if outside it.

    ``basis`` must be linearly independent.
    """
    basis = list(basis)
    if not basis:
        return [] if all(x == 0 for x in v) else None
    cols = transpose(basis)
    try:
        return solve(cols, list(v))
    except SingularSystem:
        if not is_independent(basis):
            raise DependentBasis("spanning set is linearly dependent")
        return None


def in_span(basis, v):
    return coordinates(basis, v) is not None


def span_equal(a, b):
    a, b = list(a), list(b)
    ra = rank(a) if a else 0
    rb = rank(b) if b else 0
    return ra == rb and rank(a + b) == ra if (a or b) else True
