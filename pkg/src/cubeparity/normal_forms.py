"""Exact Hermite and Smith normal forms over Python integers.

Matrices are lists of integer rows.  Transform matrices are returned so
callers can check U @ A @ V == S themselves.
"""

from __future__ import annotations

from dataclasses import dataclass

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if not A:
        return []
    cols = len(B[0]) if B else 0
    return [[sum(a * B[k][j] for k, a in enumerate(row)) for j in range(cols)] for row in A]


def det(A: Matrix) -> int:
    """Bareiss fraction-free determinant."""
    n = len(A)
    if n == 0:
        return 1
    M = [row[:] for row in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def hermite_normal_form(A: Matrix, ncols: int | None = None) -> tuple[Matrix, Matrix]:
    """Row-style HNF: returns (H, U) with H = U A, U unimodular.

    H keeps its zero rows at the bottom; pivots are positive and entries above
    a pivot lie in [0, pivot).
    """
    m = ncols if ncols is not None else (len(A[0]) if A else 0)
    H = [list(r) for r in A]
    k = len(H)
    U = identity(k)
    row = 0
    for col in range(m):
        if row >= k:
            break
        # gcd-combine everything below into the pivot row
        for i in range(row + 1, k):
            if H[i][col] == 0:
                continue
            a, b = H[row][col], H[i][col]
            g, x, y = _xgcd(a, b)
            p, q = a // g, b // g
            H[row], H[i] = (
                [x * u + y * v for u, v in zip(H[row], H[i])],
                [-q * u + p * v for u, v in zip(H[row], H[i])],
            )
            U[row], U[i] = (
                [x * u + y * v for u, v in zip(U[row], U[i])],
                [-q * u + p * v for u, v in zip(U[row], U[i])],
            )
        if H[row][col] == 0:
            continue
        if H[row][col] < 0:
            H[row] = [-v for v in H[row]]
            U[row] = [-v for v in U[row]]
        piv = H[row][col]
        for i in range(row):
            q = H[i][col] // piv
            if q:
                H[i] = [u - q * v for u, v in zip(H[i], H[row])]
                U[i] = [u - q * v for u, v in zip(U[i], U[row])]
        row += 1
    return H, U


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def hnf_basis(rows: Matrix, ncols: int) -> Matrix:
    """Nonzero rows of the HNF: a canonical basis of the row lattice."""
    if not rows:
        return []
    H, _ = hermite_normal_form(rows, ncols)
    return [r for r in H if any(r)]


@dataclass
class SmithForm:
    S: Matrix
    U: Matrix
    V: Matrix
    V_inv: Matrix

    @property
    def invariants(self) -> list[int]:
        out = []
        for i in range(min(len(self.S), len(self.S[0]) if self.S else 0)):
            if self.S[i][i] == 0:
                break
            out.append(self.S[i][i])
        return out

    @property
    def rank(self) -> int:
        return len(self.invariants)


def smith_normal_form(A: Matrix, ncols: int | None = None) -> SmithForm:
    """U A V = S with S diagonal, s_1 | s_2 | ..., all s_i >= 0, U and V unimodular."""
    k = len(A)
    m = ncols if ncols is not None else (len(A[0]) if A else 0)
    S = [list(r) for r in A]
    U = identity(k)
    V = identity(m)
    Vi = identity(m)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def add_row(dst, src, q):  # row dst += q * row src
        S[dst] = [a + q * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def swap_cols(i, j):
        for M in (S, V):
            for r in M:
                r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_col(dst, src, q):  # col dst += q * col src
        for M in (S, V):
            for r in M:
                r[dst] += q * r[src]
        Vi[src] = [a - q * b for a, b in zip(Vi[src], Vi[dst])]

    for t in range(min(k, m)):
        while True:
            nz = [(abs(S[i][j]), i, j) for i in range(t, k) for j in range(t, m) if S[i][j]]
            if not nz:
                return SmithForm(S, U, V, Vi)
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            done = True
            for i in range(t + 1, k):
                q = S[i][t] // S[t][t]
                if q:
                    add_row(i, t, -q)
                if S[i][t]:
                    done = False
            for j in range(t + 1, m):
                q = S[t][j] // S[t][t]
                if q:
                    add_col(j, t, -q)
                if S[t][j]:
                    done = False
            if not done:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, k) for j in range(t + 1, m) if S[i][j] % S[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if S[t][t] < 0:
            S[t] = [-v for v in S[t]]
            U[t] = [-v for v in U[t]]
    return SmithForm(S, U, V, Vi)
