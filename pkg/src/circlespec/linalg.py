"""Dense exact matrices over the rationals: lists of lists of Fraction.

Nothing here ever touches floating point; rank in particular is one of the
independent verification routes and must stay exact.
"""

from fractions import Fraction


def zeros(rows, cols):
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n):
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def mat_eq(a, b):
    return a == b


def mat_add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scalar_mul(c, a):
    c = Fraction(c)
    return [[c * x for x in row] for row in a]


def mat_mul(a, b):
    if a and b and len(a[0]) != len(b):
        raise ValueError(f"shape mismatch: {len(a)}x{len(a[0])} times {len(b)}x{len(b[0])}")
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def kron(a, b):
    """Kronecker product; block (i, j) is a[i][j] * b."""
    if not a or not b:
        return []
    out = []
    for ra in a:
        for rb in b:
            out.append([x * y for x in ra for y in rb])
    return out


def rank(a):
    """Rank over Q by Gaussian elimination with exact fractions."""
    if not a or not a[0]:
        return 0
    m = [list(row) for row in a]
    nrows, ncols = len(m), len(m[0])
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        lead = m[r][c]
        for i in range(r + 1, nrows):
            if m[i][c]:
                f = m[i][c] / lead
                row_i, row_r = m[i], m[r]
                for j in range(c, ncols):
                    row_i[j] -= f * row_r[j]
        r += 1
        if r == nrows:
            break
    return r
