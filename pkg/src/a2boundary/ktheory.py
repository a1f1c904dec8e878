"""
Finitely generated abelian groups and K-theory bookkeeping.

A group is stored canonically as ``Z^r + Z_{d_1} + ... + Z_{d_k}`` with
``d_1 | d_2 | ... | d_k`` and every ``d_i >= 2``.  Elements of a cokernel are
coordinate tuples: torsion coordinates reduced mod ``d_i`` first, then free
coordinates.

>>> str(cokernel([[2]]).group)
'Z_2'
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

import numpy as np

from .snf import as_int_matrix, identity, smith_normal_form

__all__ = [
    "KTheoryError",
    "FinAbGroup",
    "ClassMap",
    "Cokernel",
    "KPair",
    "UnitClasses",
    "cokernel",
    "kernel",
    "compute_CGamma",
    "compute_CGamma_M",
    "k_groups_rank2",
    "unit_class",
    "order_of_unit",
    "rank1_ck_k",
    "kunneth",
    "cuntz_k",
    "generic_relation_matrix",
    "generic_presentation_group",
    "unit_congruences",
    "A0",
]

A0 = [[1, 0, 1], [0, 1, 1], [1, 1, 0]]


class KTheoryError(RuntimeError):
    """A structural identity that must hold did not."""


def _prime_powers(n: int) -> dict[int, int]:
    out, p = {}, 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _canonical(orders: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Free rank and invariant factors of Z_{o_1} + ... (order 0 means Z).

    Split every order into prime powers, then build the divisibility chain
    by multiplying the largest remaining power of each prime.
    """
    orders = [abs(int(o)) for o in orders]
    free = sum(1 for o in orders if o == 0)
    powers: dict[int, list[int]] = {}
    for o in orders:
        if o > 1:
            for p, e in _prime_powers(o).items():
                powers.setdefault(p, []).append(p**e)
    n = max((len(v) for v in powers.values()), default=0)
    chain = [1] * n
    for v in powers.values():
        v.sort(reverse=True)
        for k, x in enumerate(v):
            chain[n - 1 - k] *= x
    return free, tuple(chain)


@dataclass(frozen=True)
class FinAbGroup:
    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        free, tors = _canonical(list(self.torsion))
        object.__setattr__(self, "free_rank", self.free_rank + free)
        object.__setattr__(self, "torsion", tors)

    @classmethod
    def from_orders(cls, orders: Sequence[int]) -> "FinAbGroup":
        """Direct sum of cyclic groups; order 0 stands for Z."""
        return cls(0, tuple(orders))

    @classmethod
    def Z(cls, n: int = 1) -> "FinAbGroup":
        return cls(n, ())

    @property
    def cyclic_orders(self) -> tuple[int, ...]:
        return self.torsion + (0,) * self.free_rank

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_cyclic(self) -> bool:
        return len(self.cyclic_orders) <= 1

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    def __add__(self, other: "FinAbGroup") -> "FinAbGroup":
        return FinAbGroup(self.free_rank + other.free_rank, self.torsion + other.torsion)

    def tensor(self, other: "FinAbGroup") -> "FinAbGroup":
        orders = []
        for a in self.cyclic_orders:
            for b in other.cyclic_orders:
                orders.append(gcd(a, b))  # Z x Z = Z, Z x Z_n = Z_n, Z_m x Z_n = Z_gcd
        return FinAbGroup.from_orders(orders)

    def tor(self, other: "FinAbGroup") -> "FinAbGroup":
        orders = [gcd(a, b) for a in self.torsion for b in other.torsion]
        return FinAbGroup.from_orders([o for o in orders if o > 1])

    def to_dict(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self) -> str:
        parts = [f"Z_{d}" for d in self.torsion]
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class ClassMap:
    """Linear map Z^m -> canonical coordinates: ``y = rows @ x``, torsion part reduced."""

    rows: tuple[tuple[int, ...], ...]
    moduli: tuple[int, ...]  # d_i for torsion coordinates, 0 for free ones

    def __call__(self, x) -> tuple[int, ...]:
        x = [int(v) for v in x]
        out = []
        for row, d in zip(self.rows, self.moduli):
            y = sum(a * b for a, b in zip(row, x))
            out.append(y % d if d else y)
        return tuple(out)

    def basis(self, k: int) -> tuple[int, ...]:
        return tuple(r[k] % d if d else r[k] for r, d in zip(self.rows, self.moduli))


@dataclass
class Cokernel:
    """``Z^m / A Z^n`` with a class map for vectors of Z^m."""

    group: FinAbGroup
    class_map: ClassMap
    ambient: int

    def classof(self, x) -> tuple[int, ...]:
        if len(x) != self.ambient:
            raise ValueError(f"vector of length {len(x)} in Z^{self.ambient}")
        return self.class_map(x)

    def generator_class(self, k: int) -> tuple[int, ...]:
        return self.class_map.basis(k)

    def scale(self, n: int, e) -> tuple[int, ...]:
        return self.reduce([n * v for v in e])

    def add(self, a, b) -> tuple[int, ...]:
        return self.reduce([x + y for x, y in zip(a, b)])

    def reduce(self, e) -> tuple[int, ...]:
        return tuple(v % d if d else v for v, d in zip(e, self.class_map.moduli))

    def element_order(self, e) -> int:
        """Order of an element (0 if infinite)."""
        out = 1
        for v, d in zip(e, self.class_map.moduli):
            if d == 0:
                if v:
                    return 0
                continue
            out = out * (d // gcd(d, v)) // gcd(out, d // gcd(d, v))
        return out

    def generates(self, e) -> bool:
        if not self.group.is_cyclic:
            return False
        if self.group.free_rank:
            return abs(e[0]) == 1
        return self.element_order(e) == (self.group.order or 1)


def cokernel(A, rows: int | None = None) -> Cokernel:
    """Cokernel of ``A: Z^n -> Z^m`` (an m x n matrix)."""
    A = as_int_matrix(A)
    m = len(A) if rows is None else rows
    if A and len(A) != m:
        raise ValueError(f"matrix has {len(A)} rows, expected {m}")
    if any(len(r) != len(A[0]) for r in A):
        raise ValueError("ragged matrix")
    if not A or not A[0]:
        return Cokernel(FinAbGroup(m), ClassMap(tuple(tuple(r) for r in identity(m)),
                                                (0,) * m), m)
    res = smith_normal_form(A)
    if not res.verify(A, check_unimodular=False):
        raise KTheoryError("SNF verification failed")
    d = res.invariant_factors + [0] * (m - res.rank)
    keep = [k for k in range(m) if d[k] != 1]
    cmap = ClassMap(tuple(tuple(res.U[k]) for k in keep), tuple(d[k] for k in keep))
    return Cokernel(FinAbGroup.from_orders([d[k] for k in keep]), cmap, m)


def kernel(A) -> tuple[FinAbGroup, list[list[int]]]:
    """Kernel of ``A: Z^n -> Z^m`` and a basis of it (columns of V)."""
    A = as_int_matrix(A)
    n = len(A[0]) if A else 0
    res = smith_normal_form(A)
    basis = [[res.V[i][k] for i in range(n)] for k in range(res.rank, n)]
    return FinAbGroup(n - res.rank), basis


def _as_np(X) -> np.ndarray:
    return np.asarray(X, dtype=np.int64)


def _cgamma(X1, X2) -> Cokernel:
    X1, X2 = _as_np(X1), _as_np(X2)
    if X1.shape != X2.shape or X1.shape[0] != X1.shape[1]:
        raise ValueError(f"transition matrices of shapes {X1.shape} and {X2.shape}")
    eye = np.eye(X1.shape[0], dtype=np.int64)
    return cokernel(np.hstack([eye - X1, eye - X2]))


def compute_CGamma(N1, N2) -> Cokernel:
    """coker(I - N1 | I - N2) over the hexagon alphabet."""
    return _cgamma(N1, N2)


def compute_CGamma_M(M1, M2) -> Cokernel:
    """coker(I - M1 | I - M2) over the tile alphabet."""
    return _cgamma(M1, M2)


@dataclass(frozen=True)
class KPair:
    K0: FinAbGroup
    K1: FinAbGroup
    unit: tuple[int, ...] | None = field(default=None, compare=False)

    def __str__(self):
        return f"({self.K0}, {self.K1})"


def k_groups_rank2(C: FinAbGroup) -> KPair:
    """K0 = K1 = Z^{2r} + T for C = Z^r + T."""
    K = FinAbGroup(2 * C.free_rank, C.torsion)
    return KPair(K, K)


def rank1_ck_k(A) -> KPair:
    """K-theory of the Cuntz-Krieger algebra of a 0/1 matrix."""
    A = _as_np(A)
    B = np.eye(A.shape[0], dtype=np.int64) - A.T
    K1, _ = kernel(B)
    return KPair(cokernel(B).group, K1)


def cuntz_k(n: int) -> KPair:
    return rank1_ck_k(np.ones((n, n), dtype=np.int64))


def kunneth(x: KPair, y: KPair) -> KPair:
    """Graded Kunneth formula for tensor products."""
    K0 = (x.K0.tensor(y.K0) + x.K1.tensor(y.K1)
          + x.K0.tor(y.K1) + x.K1.tor(y.K0))
    K1 = (x.K0.tensor(y.K1) + x.K1.tensor(y.K0)
          + x.K0.tor(y.K0) + x.K1.tor(y.K1))
    return KPair(K0, K1)


@dataclass
class UnitClasses:
    g: tuple[int, ...]          # common class of the alphabet generators
    c: tuple[int, ...]          # class of the sum of all letters
    unit: tuple[int, ...]       # (q+1) * c
    checks: dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def unit_class(alphabet, C: Cokernel, q: int) -> UnitClasses:
    """Distinguished classes in C over a tile alphabet (or a letter count).

    Raises :class:`KTheoryError` if the letter classes do not all agree.
    """
    n_letters = alphabet if isinstance(alphabet, int) else len(alphabet.keys)
    if n_letters != C.ambient:
        raise ValueError(f"alphabet size {n_letters} but cokernel over Z^{C.ambient}")
    g = C.generator_class(0)
    for k in range(1, n_letters):
        if C.generator_class(k) != g:
            raise KTheoryError(
                f"letter classes differ: letter 0 -> {g}, letter {k} -> {C.generator_class(k)}"
            )
    c = C.classof([1] * n_letters)
    unit = C.scale(q + 1, c)
    checks = {
        "generators_equal": True,
        "generator_generates": C.generates(g),
        "sum_is_3q_g": c == C.scale(3 * q, g),
        "unit_is_3(q+1)_g": unit == C.scale(3 * (q + 1), g),
        "q2_g_is_g": C.scale(q * q, g) == g,
    }
    return UnitClasses(g, c, unit, checks)


def order_of_unit(q: int) -> int:
    """Order of 3(q+1) in Z_{q^2-1}, cross-checked against the case split on q mod 3."""
    n = q * q - 1
    a = n // gcd(n, 3 * (q + 1))
    b = (q - 1) // gcd(q - 1, 3)
    if a != b:
        raise KTheoryError(f"order formulas disagree at q={q}: {a} != {b}")
    return a


def generic_relation_matrix(q: int) -> list[list[int]]:
    """Rows a_i - q^2 a_{i+1} and a_i - q^2 a_{i-1} for i = 0, 1, 2."""
    rows = []
    for s in (1, -1):
        for i in range(3):
            r = [0, 0, 0]
            r[i] += 1
            r[(i + s) % 3] -= q * q
            rows.append(r)
    return rows


def generic_presentation_group(q: int) -> FinAbGroup:
    R = generic_relation_matrix(q)
    return cokernel([list(c) for c in zip(*R)]).group


def unit_congruences(q: int) -> dict[str, bool]:
    n = q * q - 1
    return {
        "3q^5 = 3q": (3 * q**5 - 3 * q) % n == 0,
        "(q+1)(q^2+q+1) = 3(q+1)": ((q + 1) * (q * q + q + 1) - 3 * (q + 1)) % n == 0,
    }
