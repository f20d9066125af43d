"""Waring constants, m-th power decompositions over Z, and empirical Waring data over fields."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .ring import AlgInt, Field, box_points, iroot

G_VERIFIED_UP_TO = 471_600_000


class WaringDecompositionError(ValueError):
    pass


def g(m: int) -> int:
    """2^m + floor((3/2)^m) - 2, in the range where it is known to equal g(m)."""
    if not 1 <= m <= G_VERIFIED_UP_TO:
        raise ValueError(
            f"g(m) closed form is only established for 1 <= m <= {G_VERIFIED_UP_TO}; got m={m}"
        )
    return 2**m + 3**m // 2**m - 2


def theoretical_G_bound(m: int) -> int:
    return max(8 * m**5, 2**m + 1)


@dataclass(frozen=True)
class WaringParams:
    """Empirical stand-ins for the field Waring number G and the norm threshold P."""

    m: int
    G_hat: int
    P_hat: int = 1

    def __post_init__(self):
        if self.m <= 2 or self.m % 2:
            raise ValueError("m must be even and > 2")
        if self.G_hat < 0 or self.G_hat > theoretical_G_bound(self.m):
            raise ValueError(f"G_hat={self.G_hat} outside [0, {theoretical_G_bound(self.m)}]")
        if self.P_hat < 1:
            raise ValueError("P_hat must be >= 1")

    def to_json(self):
        return {"m": self.m, "G_hat": self.G_hat, "P_hat": self.P_hat}


def decompose_z(t: int, m: int, limit: int | None = None) -> list[int]:
    """Fewest positive bases b_i with sum b_i^m == t, at most ``limit`` of them.

    Largest-base-first depth-first search with backtracking; the branch is cut
    once ceil(rest / b^m) more terms cannot beat the best count so far.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    if limit is None:
        limit = g(m)
    best: list[int] | None = None
    best_len = limit + 1
    chosen: list[int] = []

    def dfs(rest: int, cap: int):
        nonlocal best, best_len
        if rest == 0:
            if len(chosen) < best_len:
                best, best_len = list(chosen), len(chosen)
            return
        b = min(cap, iroot(rest, m))
        # every further term is at most b^m
        if len(chosen) + -(-rest // b**m) >= best_len:
            return
        while b >= 1:
            p = b**m
            if len(chosen) + -(-rest // p) >= best_len:
                return
            chosen.append(b)
            dfs(rest - p, b)
            chosen.pop()
            b -= 1

    dfs(t, iroot(t, m))
    if best is None:
        raise WaringDecompositionError(f"{t} is not a sum of at most {limit} {m}th powers")
    return best


# -- fields -----------------------------------------------------------------


def mth_powers_below(alpha: AlgInt, m: int) -> list[AlgInt]:
    """Distinct nonzero x^m with x^m <= alpha (totally)."""
    field = alpha.field
    radii = tuple(max(s, 0.0) ** (1.0 / m) + 1.0 for s in alpha.embeddings())
    out = set()
    for x in box_points(field, radii):
        if not x:
            continue
        p = x**m
        if (alpha - p).is_totally_nonnegative():
            out.add(p)
    return sorted(out, key=lambda p: (p.trace(), p.a, p.b))


def order_interval(alpha: AlgInt) -> list[AlgInt]:
    """All v with 0 <= v <= alpha in every embedding, sorted by trace."""
    field = alpha.field
    if field.is_rational:
        return [AlgInt(v, 0, field) for v in range(alpha.a + 1)]
    e = alpha.embeddings()
    out = []
    for v in box_points(field, tuple(s + 1.0 for s in e)):
        if v.is_totally_nonnegative() and (alpha - v).is_totally_nonnegative():
            out.append(v)
    return sorted(out, key=lambda v: (v.trace(), v.a, v.b))


def min_power_count(alpha: AlgInt, m: int) -> int | None:
    """Fewest m-th powers of integers of the field summing to alpha (None if impossible)."""
    if not alpha:
        return 0
    powers = mth_powers_below(alpha, m)
    best: dict[AlgInt, int] = {}
    for v in order_interval(alpha):
        if not v:
            best[v] = 0
            continue
        cands = [best[v - p] for p in powers if (v - p) in best and (v - p).is_totally_nonnegative()]
        cands = [c for c in cands if c is not None]
        best[v] = min(cands) + 1 if cands else None
    return best[alpha]


def _min_counts_z(bound: int, m: int) -> list[int | None]:
    best: list[int | None] = [0] + [None] * bound
    powers = [b**m for b in range(1, iroot(bound, m) + 1)]
    for v in range(1, bound + 1):
        c = [best[v - p] for p in powers if p <= v and best[v - p] is not None]
        best[v] = min(c) + 1 if c else None
    return best


@dataclass(frozen=True)
class WaringException:
    element: AlgInt
    norm: int
    min_count: int | None  # None: not a sum of m-th powers at all


def power_subring_orbits(field: Field, m: int, norm_bound: int, psr=None, dom=None) -> list[AlgInt]:
    from .lattice_nf import class_reps_tp, compute_domain, power_subring

    psr = psr or power_subring(field, m)
    dom = dom or compute_domain(field, m)
    return [a for a in class_reps_tp(field, m, norm_bound, dom=dom) if psr.contains(a)]


def waring_profile(field: Field, m: int, norm_bound: int, psr=None, dom=None) -> list[WaringException]:
    """Minimal m-th power counts for every orbit of totally positive elements of
    the power subring with norm <= norm_bound (one representative per orbit)."""
    if field.is_rational:
        counts = _min_counts_z(norm_bound, m)
        return [WaringException(AlgInt(t, 0, field), t, counts[t]) for t in range(1, norm_bound + 1)]
    out = []
    for alpha in power_subring_orbits(field, m, norm_bound, psr, dom):
        out.append(WaringException(alpha, alpha.norm(), min_power_count(alpha, m)))
    return out


def empirical_field_waring(field: Field, m: int, G_hat: int, norm_bound: int, psr=None, dom=None) -> list[WaringException]:
    """Orbits of norm <= norm_bound in the power subring that are NOT sums of
    at most G_hat m-th powers.  An empty list means (G_hat, any P_hat) survives
    the check up to norm_bound.

    Bases range over all integers of the field: sums of m-th powers are then
    invariant under multiplication by unit m-th powers, which is what the
    forms need.
    """
    return [
        w
        for w in waring_profile(field, m, norm_bound, psr, dom)
        if w.min_count is None or w.min_count > G_hat
    ]


def choose_waring_params(field: Field, m: int, norm_bound: int, psr=None, dom=None) -> tuple[WaringParams, list[WaringException]]:
    """G_hat = largest finite minimal count seen; P_hat = largest norm of an
    element that is not a sum of m-th powers at all (1 if there is none)."""
    profile = waring_profile(field, m, norm_bound, psr, dom)
    finite = [w.min_count for w in profile if w.min_count is not None]
    G_hat = max(finite, default=1)
    exceptions = [w for w in profile if w.min_count is None]
    P_hat = max((w.norm for w in exceptions), default=1)
    return WaringParams(m, G_hat, max(P_hat, 1)), exceptions
