"""Exact integer/rational matrix helpers: Smith form, lattice bases, signatures.

All matrices are lists of lists. Functions never mutate their arguments.
"""

from fractions import Fraction
from math import gcd

from .errors import PreconditionError


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    return [[sum(a[i][t] * b[t][j] for t in range(k)) for j in range(m)] for i in range(n)]


def mat_vec(a, v):
    return [sum(a[i][j] * v[j] for j in range(len(v))) for i in range(len(a))]


def transpose(a):
    return [list(col) for col in zip(*a)]


def mat_copy(a):
    return [list(row) for row in a]


def determinant(a):
    """Fraction-free Bareiss determinant of a square integer matrix."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(map(int, row)) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def invert_rational(a):
    """Inverse of a nonsingular square matrix, as Fractions."""
    n = len(a)
    m = [[Fraction(a[i][j]) for j in range(n)] + [Fraction(int(i == j)) for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            raise PreconditionError("matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def smith_normal_form(a):
    """Return (d, u, v) with u*a*v diagonal, u and v unimodular.

    d is the list of diagonal entries (non-negative, d[i] | d[i+1]).
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    m = [list(map(int, row)) for row in a]
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):
        m[dst] = [x + c * y for x, y in zip(m[dst], m[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, c):
        for row in m:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    def scale_row(i, c):
        m[i] = [c * x for x in m[i]]
        u[i] = [c * x for x in u[i]]

    t = 0
    while t < min(rows, cols):
        # pivot: entry of least nonzero magnitude in the trailing block
        piv = None
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = abs(m[i][j])
                if x and (best is None or x < best):
                    best, piv = x, (i, j)
        if piv is None:
            break
        swap_rows(t, piv[0])
        swap_cols(t, piv[1])
        dirty = False
        for i in range(t + 1, rows):
            if m[i][t]:
                q = m[i][t] // m[t][t]
                add_row(t, i, -q)
                if m[i][t]:
                    dirty = True
        for j in range(t + 1, cols):
            if m[t][j]:
                q = m[t][j] // m[t][t]
                add_col(t, j, -q)
                if m[t][j]:
                    dirty = True
        if dirty:
            continue
        # enforce divisibility of the trailing block by the pivot
        p = m[t][t]
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if m[i][j] % p:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            add_row(offender, t, 1)
            continue
        t += 1

    for i in range(min(rows, cols)):
        if m[i][i] < 0:
            scale_row(i, -1)
    d = [m[i][i] for i in range(min(rows, cols))]
    return d, u, v


def image_basis(a):
    """Basis (list of column vectors) of the lattice spanned by the columns of a."""
    d, u, _v = smith_normal_form(a)
    uinv = invert_rational(u)
    basis = []
    for i, di in enumerate(d):
        if di:
            col = [uinv[r][i] * di for r in range(len(uinv))]
            if any(x.denominator != 1 for x in col):
                raise AssertionError("image basis must be integral")
            basis.append([int(x) for x in col])
    return basis


def kernel_basis(a):
    """Basis of the integer kernel lattice {x : a*x = 0}."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    if rows == 0:
        return [[int(i == j) for i in range(cols)] for j in range(cols)]
    d, _u, v = smith_normal_form(a)
    rank = sum(1 for x in d if x)
    return [[v[r][j] for r in range(cols)] for j in range(rank, cols)]


def signature_pair(gram):
    """(b_plus, b_minus) of a symmetric rational matrix via congruence diagonalization."""
    n = len(gram)
    m = [[Fraction(gram[i][j]) for j in range(n)] for i in range(n)]
    active = list(range(n))
    pos = neg = 0
    while active:
        piv = next((i for i in active if m[i][i] != 0), None)
        if piv is None:
            pair = None
            for ii in active:
                for jj in active:
                    if ii != jj and m[ii][jj] != 0:
                        pair = (ii, jj)
                        break
                if pair:
                    break
            if pair is None:
                break  # remaining block is zero (degenerate form)
            i, j = pair
            for k in range(n):
                m[i][k] += m[j][k]
            for k in range(n):
                m[k][i] += m[k][j]
            piv = i
        p = m[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for i in active:
            if m[i][piv] != 0:
                f = m[i][piv] / p
                for k in range(n):
                    m[i][k] -= f * m[piv][k]
                for k in range(n):
                    m[k][i] -= f * m[k][piv]
    return pos, neg


def lcm(a, b):
    return abs(a * b) // gcd(a, b) if a and b else 0


def lcm_list(xs):
    out = 1
    for x in xs:
        out = lcm(out, x)
    return out
