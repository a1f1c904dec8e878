"""
Smith normal form over the integers, with transforms.

All arithmetic uses Python integers.  Pivots are chosen by least absolute
value, ties broken by smallest row and then smallest column.

>>> r = smith_normal_form([[2, 4], [6, 8]])
>>> r.invariant_factors
[2, 4]
"""

from __future__ import annotations

from dataclasses import dataclass

__all__ = ["SNFResult", "smith_normal_form", "matmul", "det_bareiss", "identity", "as_int_matrix"]


def as_int_matrix(A) -> list[list[int]]:
    if hasattr(A, "tolist"):
        A = A.tolist()
    return [[int(x) for x in row] for row in A]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B) -> list[list[int]]:
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def det_bareiss(A) -> int:
    """Exact determinant by fraction-free elimination."""
    M = as_int_matrix(A)
    n = len(M)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k]:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        pk = M[k][k]
        rk = M[k]
        for i in range(k + 1, n):
            ri = M[i]
            f = ri[k]
            M[i] = [(pk * ri[j] - f * rk[j]) // prev if j > k else 0 for j in range(n)]
        prev = pk
    return sign * M[n - 1][n - 1]


@dataclass
class SNFResult:
    """``U @ A @ V == S`` with S diagonal and d_1 | d_2 | ... on the diagonal."""

    S: list[list[int]]
    U: list[list[int]]
    V: list[list[int]]
    rank: int

    @property
    def invariant_factors(self) -> list[int]:
        return [self.S[k][k] for k in range(self.rank)]

    def verify(self, A, check_unimodular: bool = True) -> bool:
        A = as_int_matrix(A)
        if matmul(matmul(self.U, A), self.V) != self.S:
            return False
        d = self.invariant_factors
        if any(x <= 0 for x in d) or any(d[k + 1] % d[k] for k in range(len(d) - 1)):
            return False
        for i, row in enumerate(self.S):
            for j, x in enumerate(row):
                if x and i != j:
                    return False
        if check_unimodular:
            return abs(det_bareiss(self.U)) == 1 and abs(det_bareiss(self.V)) == 1
        return True


def smith_normal_form(A) -> SNFResult:
    A = as_int_matrix(A)
    m = len(A)
    n = len(A[0]) if m else 0
    U, V = identity(m), identity(n)

    def swap_rows(i, k):
        A[i], A[k] = A[k], A[i]
        U[i], U[k] = U[k], U[i]

    def swap_cols(j, k):
        for M in (A, V):
            for row in M:
                row[j], row[k] = row[k], row[j]

    def add_row(dst, src, f):  # row dst += f * row src
        for M in (A, U):
            M[dst] = [a + f * b for a, b in zip(M[dst], M[src])]

    def add_col(dst, src, f):
        for M in (A, V):
            for row in M:
                row[dst] += f * row[src]

    rank = 0
    for s in range(min(m, n)):
        while True:
            best = None
            for i in range(s, m):
                row = A[i]
                for j in range(s, n):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best and best[0] == 1:
                    break
            if best is None:
                break
            _, i, j = best
            if i != s:
                swap_rows(s, i)
            if j != s:
                swap_cols(s, j)
            p = A[s][s]
            clean = True
            for i in range(s + 1, m):
                if A[i][s]:
                    add_row(i, s, -(A[i][s] // p))
                    clean = clean and A[i][s] == 0
            for j in range(s + 1, n):
                if A[s][j]:
                    add_col(j, s, -(A[s][j] // p))
                    clean = clean and A[s][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(s + 1, m) if any(A[i][j] % p for j in range(s + 1, n))),
                None,
            )
            if bad is not None:
                add_row(s, bad, 1)
                continue
            break
        if A[s][s] == 0:
            break
        if A[s][s] < 0:
            A[s] = [-x for x in A[s]]
            U[s] = [-x for x in U[s]]
        rank += 1
    return SNFResult(A, U, V, rank)
