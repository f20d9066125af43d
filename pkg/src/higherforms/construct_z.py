"""Forms over Z representing exactly the non-negative integers outside a finite set."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .forms import Form, orthogonal_sum
from .ring import QQ, iroot
from .waring import g


class InadmissibleSet(ValueError):
    def __init__(self, message: str, witness: tuple[int, int] | None = None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class TargetSetZ:
    elements: frozenset

    def __init__(self, elements: Iterable[int] = ()):
        els = frozenset(int(s) for s in elements)
        if any(s < 1 for s in els):
            raise ValueError("target elements must be positive integers")
        object.__setattr__(self, "elements", els)

    @property
    def B(self) -> int:
        return max(self.elements, default=0)

    def __contains__(self, t: int) -> bool:
        return t in self.elements

    def __iter__(self):
        return iter(sorted(self.elements))

    def __len__(self) -> int:
        return len(self.elements)


def _as_target(A) -> TargetSetZ:
    return A if isinstance(A, TargetSetZ) else TargetSetZ(A)


def admissibility_witness_z(A, m: int) -> tuple[int, int] | None:
    """(a, b) with a*b^m in A but a not in A, b >= 2; None when A is admissible."""
    A = _as_target(A)
    for s in A:
        for b in range(2, iroot(s, m) + 1):
            if s % b**m == 0 and s // b**m not in A:
                return s // b**m, b
    return None


def check_admissible_z(A, m: int) -> bool:
    if m <= 2 or m % 2:
        raise ValueError("m must be even and > 2")
    return admissibility_witness_z(A, m) is None


def _pure(n: int, i: int, e: int) -> tuple:
    exps = [0] * n
    exps[i] = e
    return exps


def coupled_diagonal_form(coefs: list[int], m: int, delta: int) -> Form:
    """sum c_i x_i^m + delta * sum_{i<j} x_i^2 x_j^(m-2)."""
    n = len(coefs)
    terms = [(tuple(_pure(n, i, m)), c) for i, c in enumerate(coefs)]
    for i in range(n):
        for j in range(i + 1, n):
            exps = [0] * n
            exps[i] = 2
            exps[j] = m - 2
            terms.append((tuple(exps), delta))
    return Form.from_terms(QQ, m, n, terms)


def construct_small(B: int, m: int, delta: int | None = None) -> Form:
    """Rank-B form representing 1..B; it misses B+1 whenever B+1 is m-th-powerfree."""
    if B < 1:
        raise ValueError("B must be >= 1")
    delta = B if delta is None else delta
    if delta < B:
        raise ValueError(f"delta={delta} must be >= B={B}")
    return coupled_diagonal_form(list(range(1, B + 1)), m, delta)


def frobenius_decompose(t: int, B: int) -> list[int]:
    """y_0..y_B >= 0 with sum (B+1+j) y_j = t, for t >= B+1."""
    if t <= B:
        raise ValueError(f"t={t} must exceed B={B}")
    y = [0] * (B + 1)
    j = t % (B + 1)
    if j == 0:
        y[0] = t // (B + 1)
    else:
        y[j] = 1
        y[0] = (t - j) // (B + 1) - 1
    assert sum((B + 1 + k) * yk for k, yk in enumerate(y)) == t
    return y


def waring_form_z(m: int) -> Form:
    return Form.diagonal([1] * g(m), m, QQ)


def construct_QB_z(B: int, m: int) -> Form:
    """(B+1+j) * (sum of g(m) m-th powers) for j = 0..B: misses exactly 1..B."""
    if B < 1:
        raise ValueError("B must be >= 1")
    G = g(m)
    coefs = [B + 1 + j for j in range(B + 1) for _ in range(G)]
    return Form.diagonal(coefs, m, QQ)


def construct_excluding_z(A, m: int, delta: int | None = None) -> Form:
    """Form representing exactly Z_{>=0} minus A, for admissible A."""
    A = _as_target(A)
    if m <= 2 or m % 2:
        raise ValueError("m must be even and > 2")
    w = admissibility_witness_z(A, m)
    if w is not None:
        a, b = w
        raise InadmissibleSet(f"condition violated by (a,b)=({a},{b}): {a}*{b}^{m} in A, {a} not in A", w)
    if not A:
        return waring_form_z(m)
    B = A.B
    delta = B + 1 if delta is None else delta
    if delta <= B:
        raise ValueError("delta must exceed B")
    small = [s for s in range(1, B + 1) if s not in A]
    QB = construct_QB_z(B, m)
    if not small:
        return QB
    return orthogonal_sum(QB, coupled_diagonal_form(small, m, delta))


def rank_bound_z(A, m: int) -> int:
    return (_as_target(A).B + 1) * (g(m) + 1)
