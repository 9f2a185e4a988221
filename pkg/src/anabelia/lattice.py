"""Exact integer lattice reduction: Hermite and Smith normal forms, kernels.

Matrices are lists of rows of Python ints.
"""

from __future__ import annotations


def _copy(A):
    return [list(r) for r in A]


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def hnf_rows(A):
    """Row-style Hermite normal form of the row lattice of A, zero rows dropped.

    Pivots are positive and entries above a pivot lie in [0, pivot).
    """
    M = [r for r in _copy(A) if any(r)]
    if not M:
        return []
    ncols = len(M[0])
    out = []
    row = 0
    for col in range(ncols):
        # gather rows from `row` down with nonzero entry in col, reduce by gcd steps
        while True:
            nz = [i for i in range(row, len(M)) if M[i][col]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(M[i][col]))
            M[row], M[piv] = M[piv], M[row]
            done = True
            for i in range(row + 1, len(M)):
                if M[i][col]:
                    q = M[i][col] // M[row][col]
                    M[i] = [a - q * b for a, b in zip(M[i], M[row])]
                    if M[i][col]:
                        done = False
            if done:
                break
        if row < len(M) and M[row][col]:
            if M[row][col] < 0:
                M[row] = [-a for a in M[row]]
            for i in range(row):
                q = M[i][col] // M[row][col]
                if q:
                    M[i] = [a - q * b for a, b in zip(M[i], M[row])]
            row += 1
            if row == len(M):
                break
    out = [r for r in M[:row] if any(r)]
    return out


def smith_normal_form(A):
    """Invariant factors (d1 | d2 | ...) of the integer matrix A, zeros omitted."""
    M = [r for r in _copy(A) if any(r)]
    if not M:
        return []
    m, n = len(M), len(M[0])
    diag = []
    t = 0
    while t < min(m, n):
        entries = [(abs(M[i][j]), i, j) for i in range(t, m) for j in range(t, n) if M[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        M[t], M[i] = M[i], M[t]
        for r in M:
            r[t], r[j] = r[j], r[t]
        while True:
            changed = False
            for i in range(t + 1, m):
                if M[i][t]:
                    q = M[i][t] // M[t][t]
                    M[i] = [a - q * b for a, b in zip(M[i], M[t])]
                    if M[i][t]:
                        M[t], M[i] = M[i], M[t]
                        changed = True
            for j in range(t + 1, n):
                if M[t][j]:
                    q = M[t][j] // M[t][t]
                    for r in M:
                        r[j] -= q * r[t]
                    if M[t][j]:
                        for r in M:
                            r[t], r[j] = r[j], r[t]
                        changed = True
            if changed:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if M[i][j] % M[t][t]), None)
            if bad is None:
                break
            M[t] = [a + b for a, b in zip(M[t], M[bad[0]])]
        diag.append(abs(M[t][t]))
        t += 1
    return diag


def integer_kernel(A):
    """HNF basis of {x in Z^n : A x = 0} for an m x n integer matrix A."""
    if not A:
        raise ValueError("integer_kernel needs at least one row")
    m, n = len(A), len(A[0])
    # column operations on A tracked in U: A U = [H | 0]
    M = _copy(A)
    U = _identity(n)
    col = 0
    for r in range(m):
        if col >= n:
            break
        while True:
            nz = [j for j in range(col, n) if M[r][j]]
            if not nz:
                break
            piv = min(nz, key=lambda j: abs(M[r][j]))
            for row in M:
                row[col], row[piv] = row[piv], row[col]
            for row in U:
                row[col], row[piv] = row[piv], row[col]
            done = True
            for j in range(col + 1, n):
                if M[r][j]:
                    q = M[r][j] // M[r][col]
                    for row in M:
                        row[j] -= q * row[col]
                    for row in U:
                        row[j] -= q * row[col]
                    if M[r][j]:
                        done = False
            if done:
                break
        if M[r][col] if col < n else 0:
            col += 1
    basis = [[U[i][j] for i in range(n)] for j in range(col, n)]
    return hnf_rows(basis)


def lattice_index(basis, dim):
    """Index of the full-rank lattice spanned by basis in Z^dim, or 0 if not full rank."""
    d = smith_normal_form(basis)
    if len(d) < dim:
        return 0
    out = 1
    for x in d:
        out *= x
    return out


def in_row_span(basis, v):
    """Whether v lies in the integer row span of basis."""
    H = hnf_rows(basis)
    w = list(v)
    for r in H:
        c = next(j for j, a in enumerate(r) if a)
        if w[c] % r[c]:
            return False
        q = w[c] // r[c]
        w = [a - q * b for a, b in zip(w, r)]
    return not any(w)
