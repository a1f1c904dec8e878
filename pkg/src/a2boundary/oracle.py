"""
Determinant-divisor oracle for Smith normal form.

The k-th determinant divisor D_k is the gcd of all k x k minors; the
invariant factors are D_k / D_{k-1}.  Minors are computed with exact
rational elimination, independently of the SNF code path.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd

import numpy as np

from .snf import as_int_matrix, smith_normal_form

__all__ = ["det_exact", "determinant_divisors", "invariant_factors_by_minors", "run_minors_oracle"]


def det_exact(M) -> int:
    M = [[Fraction(x) for x in row] for row in M]
    n = len(M)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k] != 0), None)
        if piv is None:
            return 0
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            det = -det
        det *= M[k][k]
        for i in range(k + 1, n):
            f = M[i][k] / M[k][k]
            if f:
                M[i] = [a - f * b for a, b in zip(M[i], M[k])]
    return int(det)


def determinant_divisors(A) -> list[int]:
    A = as_int_matrix(A)
    m = len(A)
    n = len(A[0]) if m else 0
    out = []
    for k in range(1, min(m, n) + 1):
        g = 0
        for rows in combinations(range(m), k):
            for cols in combinations(range(n), k):
                g = gcd(g, det_exact([[A[i][j] for j in cols] for i in rows]))
                if g == 1:
                    break
            if g == 1:
                break
        if g == 0:
            break
        out.append(g)
    return out


def invariant_factors_by_minors(A) -> list[int]:
    D = [1] + determinant_divisors(A)
    return [D[k] // D[k - 1] for k in range(1, len(D))]


def run_minors_oracle(n_cases: int = 200, max_dim: int = 6, seed: int = 0, bound: int = 6):
    """Compare SNF against the minors oracle on random matrices.

    Returns ``(n_agree, failures)`` where failures lists offending matrices.
    """
    rng = np.random.default_rng(seed)
    failures = []
    for _ in range(n_cases):
        m, n = rng.integers(1, max_dim + 1, size=2)
        A = rng.integers(-bound, bound + 1, size=(m, n))
        # sprinkle in rank deficiency now and then
        if rng.random() < 0.25 and m > 1:
            A[-1] = A[0] * int(rng.integers(-2, 3))
        res = smith_normal_form(A)
        ok = res.verify(A) and res.invariant_factors == invariant_factors_by_minors(A)
        if not ok:
            failures.append(A.tolist())
    return n_cases - len(failures), failures
