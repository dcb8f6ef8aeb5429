"""Exact dense linear algebra over Q or a quadratic field.

Matrices are lists of rows. Entries are ``Fraction`` or ``QElement``; the
routines only use field operations and comparison with zero.
"""

from __future__ import annotations

from fractions import Fraction


def zeros(m: int, n: int, zero=Fraction(0)):
    return [[zero] * n for _ in range(m)]


def identity(n: int, one=Fraction(1), zero=Fraction(0)):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def shape(A):
    return len(A), (len(A[0]) if A else 0)


def matmul(A, B):
    n = len(B[0]) if B else 0
    Bt = list(zip(*B)) if B else []
    out = []
    for row in A:
        out.append([_dot(row, col) for col in Bt] if Bt else [])
    if not Bt:
        return [[] for _ in A] if n == 0 else out
    return out


def _dot(u, v):
    total = None
    for x, y in zip(u, v):
        if x and y:
            t = x * y
            total = t if total is None else total + t
    if total is None:
        return (u[0] - u[0]) if u else Fraction(0)
    return total


def matadd(A, B):
    return [[x + y for x, y in zip(r, s)] for r, s in zip(A, B)]


def matsub(A, B):
    return [[x - y for x, y in zip(r, s)] for r, s in zip(A, B)]


def scalar(c, A):
    return [[c * x for x in row] for row in A]


def transpose(A):
    return [list(r) for r in zip(*A)]


def kron(A, B):
    return [[a * b for a in ra for b in rb] for ra in A for rb in B]


def is_zero_matrix(A) -> bool:
    return all(not x for row in A for x in row)


def rref(A):
    """Reduced row echelon form and pivot columns (input is not modified)."""
    M = [list(row) for row in A]
    m, n = shape(M)
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(m):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return M, pivots


def rank(A) -> int:
    return len(rref(A)[1]) if A else 0


def nullspace(A, n: int | None = None, zero=Fraction(0), one=Fraction(1)):
    """Basis of ``{x : A x = 0}`` as a list of column vectors (lists)."""
    if n is None:
        n = shape(A)[1]
    if not A:
        return [[one if i == j else zero for i in range(n)] for j in range(n)]
    R, pivots = rref(A)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for row, pc in zip(R, pivots):
            if row[f]:
                v[pc] = -row[f]
        basis.append(v)
    return basis


def inverse(A):
    n = len(A)
    one = _one_like(A)
    zero = one - one
    aug = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(A)]
    R, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in R]


def determinant(A):
    M = [list(row) for row in A]
    n = len(M)
    one = _one_like(A)
    det = one
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c]), None)
        if p is None:
            return one - one
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det = det * M[c][c]
        inv = 1 / M[c][c]
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] * inv
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return det


def is_invertible(A) -> bool:
    return len(A) == len(A[0]) and rank(A) == len(A)


def column_space_basis(A):
    """Columns of ``A`` forming a basis of its column space (as a matrix)."""
    _, pivots = rref(A)
    return [[row[c] for c in pivots] for row in A]


def solve_right(B, C):
    """Solve ``B X = C`` for ``X`` when ``B`` has full column rank."""
    m, k = shape(B)
    n = shape(C)[1]
    aug = [list(B[i]) + list(C[i]) for i in range(m)]
    R, pivots = rref(aug)
    if pivots[:k] != list(range(k)) or any(p >= k for p in pivots):
        raise ValueError("system has no unique solution")
    return [R[i][k : k + n] for i in range(k)]


def _one_like(A):
    for row in A:
        for x in row:
            return x * 0 + 1
    return Fraction(1)


def flatten(A):
    return [x for row in A for x in row]


def unflatten(v, m: int, n: int):
    return [list(v[i * n : (i + 1) * n]) for i in range(m)]


__all__ = [
    "column_space_basis",
    "determinant",
    "flatten",
    "identity",
    "inverse",
    "is_invertible",
    "is_zero_matrix",
    "kron",
    "matadd",
    "matmul",
    "matsub",
    "nullspace",
    "rank",
    "rref",
    "scalar",
    "shape",
    "solve_right",
    "transpose",
    "unflatten",
    "zeros",
]
