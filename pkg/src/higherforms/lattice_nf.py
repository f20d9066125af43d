"""Power subrings, unit fundamental domains and orbit enumeration.

For a real quadratic field with fundamental unit u and even m, the unit
m-th powers are exactly the powers of eta = u^m, and eta acts on a totally
positive beta by multiplying the ratio sigma_1(beta)/sigma_2(beta) by
sigma_1(eta)^2.  A fundamental domain is therefore a window
[rho_lo, rho_lo * sigma_1(eta)^2) for that ratio:

* ``centered``: rho_lo = 1/sigma_1(eta); the smallest normalized
  coordinate is ell = sigma_1(eta)^(-1/2).
* ``arc``: rho_lo = 1, i.e. t in [1, sigma_1(eta)] on the hyperbola; ell =
  sigma_2(eta).

Both windows are tested exactly through the sign of the w-coordinate of a
product (sigma_1 - sigma_2 has the sign of b for a + b*w).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Iterator

from .ring import AlgInt, Field, TrivialUnitGroup, totally_positive_power_unit_generator

C_DENOMINATOR = 10**6
DEFAULT_MAX_RESIDUES = 720**2


class BudgetExceeded(RuntimeError):
    pass


# -- power subring ------------------------------------------------------------


def _hnf_add(state: tuple[int, int, int], v: tuple[int, int]) -> tuple[int, int, int]:
    """Add v to the lattice with basis (p, q), (0, s); returns reduced (p, q, s)."""
    p, q, s = state
    a, b = v
    g, x, y = _egcd(p, a)
    t = (a // g) * q - (p // g) * b
    s = math.gcd(s, t)
    q = (x * q + y * b) % s
    return g, q, s


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        k = a // b
        a, b = b, a - k * b
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@dataclass(frozen=True)
class PowerSubringData:
    """The additive subgroup generated by m-th powers, as a lattice in Z^2.

    ``hnf = (p, q, s)`` is the basis (p, q), (0, s) of the coordinate lattice;
    since 1 is an m-th power, p = 1 and q = 0, so membership is s | b.
    """

    field: Field
    m: int
    modulus: int
    hnf: tuple[int, int, int]
    thetas: tuple[AlgInt, ...]

    @property
    def r(self) -> int:
        if self.field.is_rational:
            return self.hnf[0]
        return self.hnf[0] * self.hnf[2]

    def contains(self, alpha: AlgInt) -> bool:
        return self.class_of(alpha) == 0

    def class_of(self, alpha: AlgInt) -> int:
        if self.field.is_rational:
            return alpha.a % self.hnf[0]
        p, q, s = self.hnf
        i = alpha.a % p
        k = (alpha.a - i) // p
        return i * s + (alpha.b - k * q) % s

    def to_json(self):
        return {"m": self.m, "modulus": self.modulus, "r": self.r,
                "thetas": [t.to_json() for t in self.thetas]}


def _lift_theta(field: Field, j: int, s: int) -> AlgInt:
    """Totally positive representative of the class b = j (mod s) with small house."""
    best = None
    for y in sorted({j, j - s} if j else {0}, reverse=True):
        x = _first_true(lambda a: AlgInt(a, y, field).is_totally_positive(),
                        int(math.floor(-min(y * w for w in field.omega_embeddings))))
        cand = AlgInt(x, y, field)
        if best is None or cand.house() < best.house() - 1e-12:
            best = cand
    return best


def power_subring(field: Field, m: int, max_residues: int = DEFAULT_MAX_RESIDUES) -> PowerSubringData:
    if m < 1:
        raise ValueError("m must be positive")
    M = math.factorial(m)
    if field.is_rational:
        return PowerSubringData(field, m, M, (1, 0, 1), (AlgInt(1, 0, field),))
    if M * M > max_residues:
        raise BudgetExceeded(f"{M}^2 residues exceed the budget of {max_residues}")
    wp, wq = field._wrel
    powers = set()
    for a in range(M):
        for b in range(M):
            # (a + b w)^m mod M with w^2 = wp*w + wq
            ra, rb = 1, 0
            for _ in range(m):
                ra, rb = (ra * a + rb * b * wq) % M, (ra * b + rb * a + rb * b * wp) % M
            powers.add((ra, rb))
    state = (M, 0, M)
    for v in powers:
        if v != (0, 0):
            state = _hnf_add(state, v)
    p, q, s = state
    assert p == 1 and q == 0, state
    thetas = tuple(_lift_theta(field, j, s) for j in range(s))
    return PowerSubringData(field, m, M, state, thetas)


def in_power_subring(alpha: AlgInt, data: PowerSubringData) -> bool:
    return data.contains(alpha)


def class_of(alpha: AlgInt, data: PowerSubringData) -> int:
    return data.class_of(alpha)


# -- fundamental domain ---------------------------------------------------------


def _first_true(pred: Callable[[int], bool], guess: int, limit: int | None = None) -> int:
    """Smallest integer a with pred(a), for pred monotone (False...False True...).

    With ``limit``, pred is taken to hold from ``limit`` on, so the answer is at
    most ``limit``.
    """
    if limit is not None:
        inner = pred
        guess = min(guess, limit)

        def pred(a):
            return a >= limit or inner(a)

    if pred(guess):
        step = 1
        hi = guess
        lo = guess - step
        while pred(lo):
            hi = lo
            step *= 2
            lo = guess - step
    else:
        step = 1
        lo = guess
        hi = guess + step
        while not pred(hi):
            lo = hi
            step *= 2
            hi = guess + step
    # pred(lo) False, pred(hi) True
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class DomainData:
    field: Field
    m: int
    layout: str  # "centered" | "arc" | "trivial"
    eta: AlgInt
    ell: AlgInt  # sigma_1(ell) is the smallest normalized coordinate on the compact slice
    c: Fraction

    def __post_init__(self):
        if not 0 < self.c < 1:
            raise ValueError("c must lie in (0, 1)")
        if self.field.degree == 2:
            # 2c < ell, exactly
            p, q = self.c.numerator, self.c.denominator
            assert (self.ell * q - 2 * p).signs()[0] > 0

    @property
    def degree(self) -> int:
        return self.field.degree

    @property
    def eta_inv(self) -> AlgInt:
        return self.eta.unit_inverse()

    def is_reduced(self, beta: AlgInt) -> bool:
        if self.degree == 1:
            return True
        return self._lower_ok(beta) and self._upper_ok(beta)

    def _lower_ok(self, beta: AlgInt) -> bool:
        if self.layout == "arc":
            return beta.b >= 0
        return (beta * beta * self.eta).b >= 0

    def _upper_ok(self, beta: AlgInt) -> bool:
        if self.layout == "arc":
            return (beta * self.eta_inv).b < 0
        return (beta * beta * self.eta_inv).b < 0

    @property
    def rho_window(self) -> tuple[float, float]:
        e1 = self.eta.embeddings()[0]
        return (1.0 / e1, e1) if self.layout == "centered" else (1.0, e1 * e1)

    def to_json(self):
        return {"layout": self.layout, "eta": self.eta.to_json(), "ell": self.ell.to_json(),
                "ell_float": self.ell.embeddings()[0], "c": [self.c.numerator, self.c.denominator]}


def _largest_c(ell: AlgInt, den: int) -> Fraction:
    def ok(k):  # 2k/den < ell
        return (ell * den - 2 * k).signs()[0] > 0

    k = int(math.floor(ell.embeddings()[0] * den / 2))
    while not ok(k):
        k -= 1
    while ok(k + 1):
        k += 1
    return Fraction(k, den)


def compute_domain(field: Field, m: int, layout: str = "centered") -> DomainData:
    if field.is_rational:
        one = AlgInt(1, 0, field)
        return DomainData(field, m, "trivial", one, one, Fraction(1, 2))
    if layout not in ("centered", "arc"):
        raise ValueError(f"unknown layout {layout!r}")
    if field.degree != 2:
        raise ValueError("only degree <= 2")
    eta = totally_positive_power_unit_generator(field, m)
    if layout == "arc":
        ell = eta.conj()
    else:
        zeta_conj = (field.fundamental_unit ** (m // 2)).conj()
        ell = zeta_conj if zeta_conj.signs()[0] > 0 else -zeta_conj
    return DomainData(field, m, layout, eta, ell, _largest_c(ell, C_DENOMINATOR))


def reduce_to_F(beta: AlgInt, dom: DomainData) -> tuple[AlgInt, AlgInt]:
    """(eps, beta * eps^m) with beta * eps^m in the fundamental domain."""
    if not beta.is_totally_positive():
        raise ValueError(f"{beta!r} is not totally positive")
    field = beta.field
    if dom.degree == 1:
        return AlgInt(1, 0, field), beta
    s1, s2 = beta.embeddings()
    logN = math.log(beta.norm())
    log_ratio = 2 * math.log(s1) - logN if s1 >= s2 else logN - 2 * math.log(s2)
    step = 2 * math.log(dom.eta.embeddings()[0])
    if dom.layout == "centered":
        k = -round(log_ratio / step)
    else:
        k = -math.floor(log_ratio / step)
    cur = beta * dom.eta**k if k >= 0 else beta * dom.eta_inv ** (-k)
    while not dom._lower_ok(cur):
        cur, k = cur * dom.eta, k + 1
    while not dom._upper_ok(cur):
        cur, k = cur * dom.eta_inv, k - 1
    eps = field.fundamental_unit**k
    return eps, cur


def least_house_bound(n: int, psr: PowerSubringData) -> int:
    """Least integer H with H > n + house(theta) for every theta."""
    def ok(h):
        return all(((h - n) - t).is_totally_positive() and ((h - n) + t).is_totally_positive()
                   for t in psr.thetas)

    h = n + int(max(t.house() for t in psr.thetas))
    while ok(h - 1):
        h -= 1
    while not ok(h):
        h += 1
    return h


def compute_Mn(n: int, dom: DomainData, psr: PowerSubringData, d: int | None = None) -> int:
    """Smallest M >= n^d with floor(c M^(1/d)) >= H + 1, H = least_house_bound(n)."""
    d = d or dom.degree
    K = least_house_bound(n, psr) + 1
    return _smallest_M(n, K, dom.c, d)


def _smallest_M(n: int, K: int, c: Fraction, d: int) -> int:
    p, q = c.numerator, c.denominator
    need = -(-(K * q) ** d // p**d)  # ceil(K^d q^d / p^d)
    return max(n**d, need, 1)


def floor_c_root(c: Fraction, X: Fraction | int, d: int) -> int:
    """floor(c * X^(1/d)) exactly, X >= 0."""
    p, q = c.numerator, c.denominator
    X = Fraction(X)
    if d == 1:
        return math.floor(c * X)
    # largest k with (k q)^2 <= p^2 X
    val = p * p * X / (q * q)
    return math.isqrt(val.numerator // val.denominator)


def split_off_n(beta: AlgInt, n: int, dom: DomainData, psr: PowerSubringData) -> tuple[AlgInt, int, AlgInt]:
    """(eps, j, gamma) with beta*eps^m = n + theta_j + gamma, gamma totally positive,
    gamma in the power subring and N(gamma) > c^d N(beta)."""
    M = compute_Mn(n, dom, psr)
    N = beta.norm()
    if N <= M:
        raise ValueError(f"N(beta)={N} must exceed M_{n}={M}")
    eps, red = reduce_to_F(beta, dom)
    j = psr.class_of(red)
    gamma = red - psr.thetas[j] - n
    d = dom.degree
    p, q = dom.c.numerator, dom.c.denominator
    assert gamma.is_totally_positive()
    assert psr.contains(gamma)
    assert gamma.norm() * q**d > p**d * N
    return eps, j, gamma


# -- orbit enumeration --------------------------------------------------------


class OrbitShell:
    """Orbit representatives (reduced elements) with lo < N <= hi, minus ``exclude``.

    Ordered by (norm, a, b).  Counting is done row by row (fixed b) from exact
    thresholds on a, so the size of huge shells is available without listing
    them.
    """

    def __init__(self, dom: DomainData, lo: int, hi: int, exclude=()):
        self.dom = dom
        self.field = dom.field
        self.lo = int(lo)
        self.hi = int(hi)
        ex = set()
        for x in exclude:
            _, red = reduce_to_F(x, dom)
            if self.lo < red.norm() <= self.hi:
                ex.add(red)
        self.exclude = frozenset(ex)
        self._counts: dict[tuple[int, int], int] = {}
        self._total: int | None = None

    # rows -------------------------------------------------------------
    def _rows(self, lo: int, hi: int) -> Iterator[tuple[int, int, int]]:
        """(b, a_min, a_max) for each row with at least one candidate."""
        field, dom = self.field, self.dom
        if hi <= lo or hi < 1:
            return
        w1, w2 = field.omega_embeddings
        r_lo, r_hi = dom.rho_window
        rmax = max(r_hi, 1.0 / r_lo)
        bmax = int(math.sqrt(hi * rmax) / (w1 - w2)) + 2
        for b in range(-bmax, bmax + 1):
            tp_guess = int(math.floor(-min(b * w1, b * w2))) + 1
            a_tp = _first_true(lambda a: AlgInt(a, b, field).is_totally_positive(), tp_guess)

            def over_hi(a):
                return a >= a_tp and AlgInt(a, b, field).norm() > hi

            g_hi = self._norm_root_guess(b, hi)
            a_max = _first_true(over_hi, max(g_hi, a_tp)) - 1
            if a_max < a_tp:
                continue

            def good(a):
                if a < a_tp:
                    return False
                x = AlgInt(a, b, field)
                return x.norm() > lo and dom._lower_ok(x) and dom._upper_ok(x)

            guess = max(a_tp, self._lower_guess(b, lo))
            a_min = _first_true(good, guess, limit=a_max + 1)
            if a_min <= a_max:
                yield b, a_min, a_max

    def _norm_root_guess(self, b: int, X: int) -> int:
        w1, w2 = self.field.omega_embeddings
        # N = (a + b w1)(a + b w2) = X  -> a = (-(w1+w2) b + sqrt((w1-w2)^2 b^2 + 4X)) / 2
        disc = (w1 - w2) ** 2 * b * b + 4 * X
        return int(math.floor((-(w1 + w2) * b + math.sqrt(disc)) / 2))

    def _lower_guess(self, b: int, lo: int) -> int:
        w1, w2 = self.field.omega_embeddings
        r_lo, r_hi = self.dom.rho_window
        g = self._norm_root_guess(b, lo) if lo > 0 else -(10**18)
        if r_lo < 1:
            g = max(g, int(-b * (w1 - r_lo * w2) / (1 - r_lo)))
        g = max(g, int(b * (w1 - r_hi * w2) / (r_hi - 1)))
        return g

    # counting ---------------------------------------------------------
    def _count_window(self, lo: int, hi: int) -> int:
        lo, hi = max(lo, self.lo), min(hi, self.hi)
        if hi <= lo:
            return 0
        key = (lo, hi)
        if key not in self._counts:
            if self.field.is_rational:
                total = hi - lo
            else:
                total = sum(a_max - a_min + 1 for _, a_min, a_max in self._rows(lo, hi))
            total -= sum(1 for x in self.exclude if lo < x.norm() <= hi)
            self._counts[key] = total
        return self._counts[key]

    def count(self) -> int:
        if self._total is None:
            self._total = self._count_window(self.lo, self.hi)
        return self._total

    def __len__(self) -> int:
        return self.count()

    @property
    def min_norm(self) -> int | None:
        # a lower bound; exact minimum not needed for pruning
        return self.lo + 1 if self.count() else None

    def window(self, lo: int, hi: int) -> list[AlgInt]:
        lo, hi = max(lo, self.lo), min(hi, self.hi)
        if hi <= lo:
            return []
        if self.field.is_rational:
            out = [AlgInt(t, 0, self.field) for t in range(lo + 1, hi + 1)]
        else:
            out = [AlgInt(a, b, self.field) for b, a_min, a_max in self._rows(lo, hi)
                   for a in range(a_min, a_max + 1)]
            out = [x for x in out if lo < x.norm() <= hi]
        out = [x for x in out if x not in self.exclude]
        out.sort(key=lambda x: (x.norm(), x.a, x.b))
        return out

    def upto(self, X) -> Iterator[AlgInt]:
        X = math.floor(X)
        return iter(self.window(self.lo, min(X, self.hi)))

    def __iter__(self) -> Iterator[AlgInt]:
        return iter(self.window(self.lo, self.hi))

    def elements(self) -> list[AlgInt]:
        return self.window(self.lo, self.hi)

    def __contains__(self, x: AlgInt) -> bool:
        return (self.lo < x.norm() <= self.hi and x.is_totally_positive()
                and self.dom.is_reduced(x) and x not in self.exclude)

    def index_of(self, x: AlgInt) -> int:
        if x not in self:
            raise KeyError(f"{x!r} is not a representative in this shell")
        N = x.norm()
        same = self.window(N - 1, N)
        return self._count_window(self.lo, N - 1) + same.index(x)

    def at(self, k: int) -> AlgInt:
        if not 0 <= k < self.count():
            raise IndexError(k)
        lo, hi = self.lo + 1, self.hi
        while lo < hi:  # smallest X with count(lo, X) > k
            mid = (lo + hi) // 2
            if self._count_window(self.lo, mid) > k:
                hi = mid
            else:
                lo = mid + 1
        before = self._count_window(self.lo, lo - 1)
        return self.window(lo - 1, lo)[k - before]

    def all_totally_positive(self) -> bool:
        return True

    def to_json(self):
        return {"kind": "orbit_shell", "field": self.field.to_json(), "m": self.dom.m,
                "layout": self.dom.layout, "lo": self.lo, "hi": self.hi,
                "exclude": sorted(x.to_json() for x in self.exclude)}

    def __repr__(self) -> str:
        return f"OrbitShell({self.field}, ({self.lo}, {self.hi}], excluded={len(self.exclude)})"


def class_reps_tp(field: Field, m: int, norm_bound: int, dom: DomainData | None = None) -> list[AlgInt]:
    """One totally positive representative per unit-m-th-power orbit with N <= norm_bound."""
    dom = dom or compute_domain(field, m)
    return OrbitShell(dom, 0, norm_bound).elements()


def orbit_rep(x: AlgInt, dom: DomainData) -> AlgInt:
    return reduce_to_F(x, dom)[1]


def same_orbit(x: AlgInt, y: AlgInt, dom: DomainData) -> bool:
    return orbit_rep(x, dom) == orbit_rep(y, dom)
