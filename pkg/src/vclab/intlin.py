"""Exact integer linear algebra on plain nested lists of Python ints.

Matrices are lists of rows. Nothing here touches floating point; sizes in this
package stay small (a few dozen rows), so clarity wins over asymptotics.
"""

from fractions import Fraction
from math import gcd


def xgcd(a, b):
    """Return (g, s, t) with g = s*a + t*b = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


def gcd_list(values):
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g


def bezout(values):
    """Coefficients u with sum(u[i]*values[i]) == gcd(values)."""
    g, coeffs = 0, []
    for v in values:
        g2, s, t = xgcd(g, int(v))
        coeffs = [c * s for c in coeffs] + [t]
        g = g2
    return g, coeffs


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m, n):
    return [[0] * n for _ in range(m)]


def transpose(a):
    return [list(r) for r in zip(*a)]


def matmul(a, b):
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a, v):
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def to_int_matrix(a):
    return [[int(x) for x in row] for row in a]


def det(a):
    """Bareiss fraction-free determinant."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(map(int, r)) for r in a]
    sign, prev = 1, 1
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


def rational_solve(a, b):
    """Solve a x = b over Q by Gauss-Jordan; return one solution or None.

    Free variables are set to zero. `a` is m x n, `b` has length m.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    aug = [[Fraction(x) for x in a[i]] + [Fraction(b[i])] for i in range(m)]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        piv = aug[r][c]
        aug[r] = [x / piv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    if any(all(x == 0 for x in row[:n]) and row[n] != 0 for row in aug):
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = aug[i][n]
    return x


def inverse_unimodular(a):
    """Exact inverse of an integer matrix with determinant +-1."""
    n = len(a)
    cols = []
    for j in range(n):
        e = [int(i == j) for i in range(n)]
        sol = rational_solve(a, e)
        if sol is None or any(x.denominator != 1 for x in sol):
            raise ValueError("matrix is not unimodular")
        cols.append([int(x) for x in sol])
    return transpose(cols)


def hnf_rows(rows, ncols=None):
    """Row-style Hermite normal form of the lattice spanned by `rows`.

    Returns the nonzero rows, upper echelon, positive pivots, entries above each
    pivot reduced into [0, pivot). The result is a canonical basis: two
    generating sets span the same lattice iff their HNFs are equal.
    """
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    m = [list(map(int, r)) for r in rows if any(r)]
    out = []
    col = 0
    while m and col < ncols:
        nz = [r for r in m if r[col] != 0]
        rest = [r for r in m if r[col] == 0]
        if not nz:
            col += 1
            continue
        # Euclid down the column until one row holds the gcd
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            nxt = [piv]
            for r in nz[1:]:
                q = r[col] // piv[col]
                r2 = [x - q * y for x, y in zip(r, piv)]
                if r2[col] != 0:
                    nxt.append(r2)
                elif any(r2):
                    rest.append(r2)
            nz = nxt
        piv = nz[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        out.append((col, piv))
        m = [r for r in rest if any(r)]
        col += 1
    # reduce entries above pivots
    basis = [r for _, r in out]
    for i in range(len(out)):
        c, p = out[i]
        for k in range(i):
            q = basis[k][c] // p[c]
            if q:
                basis[k] = [x - q * y for x, y in zip(basis[k], p)]
    return basis


def lattice_contains(basis_hnf, v):
    """Membership test of integer vector v in the lattice with given HNF basis."""
    v = list(map(int, v))
    for row in basis_hnf:
        c = next(i for i, x in enumerate(row) if x)
        if v[c] % row[c]:
            return False
        q = v[c] // row[c]
        v = [a - q * b for a, b in zip(v, row)]
    return not any(v)


def smith_normal_form(a):
    """Return (D, U, V) with U*a*V = D diagonal, d_i | d_{i+1}, U and V unimodular."""
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(map(int, r)) for r in a]
    u = identity(m)
    v = identity(n)

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, q):  # row_dst += q*row_src
        d[dst] = [x + q * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for r in d:
            r[dst] += q * r[src]
        for r in v:
            r[dst] += q * r[src]

    for t in range(min(m, n)):
        nonzero = [(abs(d[i][j]), i, j) for i in range(t, m) for j in range(t, n) if d[i][j]]
        if not nonzero:
            break
        _, i0, j0 = min(nonzero)
        swap_rows(t, i0)
        swap_cols(t, j0)
        while True:
            done = True
            for i in range(t + 1, m):
                if d[i][t]:
                    q = d[i][t] // d[t][t]
                    add_row(i, t, -q)
                    if d[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, n):
                if d[t][j]:
                    q = d[t][j] // d[t][t]
                    add_col(j, t, -q)
                    if d[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # divisibility: pivot must divide the whole remaining block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if d[i][j] % d[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    return d, u, v


def elementary_divisors(rows, ncols):
    """Elementary divisors of the sublattice of Z^ncols spanned by `rows`.

    Always returns `ncols` numbers; missing rank is padded with zeros.
    """
    basis = hnf_rows(rows, ncols)
    if not basis:
        return [0] * ncols
    dmat, _, _ = smith_normal_form(basis)
    divs = [dmat[i][i] for i in range(min(len(basis), ncols))]
    divs = [x for x in divs if x]
    return divs + [0] * (ncols - len(divs))
