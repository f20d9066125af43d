"""Exact arithmetic in Z and in rings of integers of real quadratic fields.

Elements are stored in the integral basis {1, w}, where w = sqrt(D) when
D = 2, 3 (mod 4) and w = (1 + sqrt(D))/2 when D = 1 (mod 4).  Every
order/positivity decision is made with integer sign tests; floats are only
used for display and as starting guesses that are then corrected exactly.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator


class FieldMismatch(ValueError):
    pass


class TrivialUnitGroup(ValueError):
    """Raised for Q, whose unit group {+1, -1} acts trivially on m-th powers (m even)."""


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


def iroot(n: int, k: int) -> int:
    """Largest integer r >= 0 with r**k <= n."""
    if n < 0:
        raise ValueError("iroot of a negative number")
    if n < 2:
        return n
    if k == 2:
        return math.isqrt(n)
    r = int(round(n ** (1.0 / k)))
    while r**k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def sign_surd(p: int, q: int, D: int) -> int:
    """Sign of p + q*sqrt(D) for squarefree D >= 2."""
    if q == 0 or D == 0:
        return _sign(p)
    if p >= 0 and q >= 0:
        return 1
    if p <= 0 and q <= 0:
        return -1
    # mixed signs: compare p^2 with q^2 D (never equal, sqrt(D) irrational)
    return _sign(p) if p * p > q * q * D else -_sign(p)


@dataclass(frozen=True)
class Field:
    """Q (``D is None``) or the real quadratic field Q(sqrt(D))."""

    D: int | None = None

    def __post_init__(self):
        if self.D is not None and (self.D < 2 or not is_squarefree(self.D)):
            raise ValueError(f"D must be a squarefree integer >= 2, got {self.D}")

    @property
    def is_rational(self) -> bool:
        return self.D is None

    @property
    def degree(self) -> int:
        return 1 if self.D is None else 2

    @property
    def kind(self) -> str:
        return "Rational" if self.D is None else "RealQuadratic"

    @property
    def omega_kind(self) -> str | None:
        if self.D is None:
            return None
        return "halfOnePlusSqrtD" if self.D % 4 == 1 else "sqrtD"

    @cached_property
    def _wrel(self) -> tuple[int, int]:
        # w^2 = p*w + q
        if self.D is None:
            return 0, 0
        if self.D % 4 == 1:
            return 1, (self.D - 1) // 4
        return 0, self.D

    @cached_property
    def omega_embeddings(self) -> tuple[float, ...]:
        if self.D is None:
            return (0.0,)
        r = math.sqrt(self.D)
        if self.D % 4 == 1:
            return ((1 + r) / 2, (1 - r) / 2)
        return (r, -r)

    def __call__(self, a: int, b: int = 0) -> AlgInt:
        return AlgInt(a, b, self)

    @property
    def one(self) -> AlgInt:
        return AlgInt(1, 0, self)

    @property
    def zero(self) -> AlgInt:
        return AlgInt(0, 0, self)

    @property
    def omega(self) -> AlgInt:
        if self.D is None:
            raise ValueError("Q has no w generator")
        return AlgInt(0, 1, self)

    @cached_property
    def fundamental_unit(self) -> AlgInt:
        if self.D is None:
            raise TrivialUnitGroup("Q has unit group {+1, -1}")
        return fundamental_unit_cf(self)

    def to_json(self):
        return "Q" if self.D is None else {"D": self.D}

    @classmethod
    def from_json(cls, doc) -> Field:
        if doc == "Q" or doc is None:
            return QQ
        return make_field(int(doc["D"]))

    def __repr__(self) -> str:
        return "Q" if self.D is None else f"Q(sqrt({self.D}))"

    def __reduce__(self):
        # cached units refer back to the field; rebuild from D alone
        return (make_field, (self.D,))


QQ = Field(None)


def make_field(D: int | None = None) -> Field:
    if D is None:
        return QQ
    return Field(int(D))


class AlgInt:
    """a + b*w in the integral basis of ``field``; immutable by convention."""

    __slots__ = ("a", "b", "field")

    def __init__(self, a: int, b: int = 0, field: Field = QQ):
        if field.D is None and b != 0:
            raise ValueError("rational integers have b == 0")
        self.a = int(a)
        self.b = int(b)
        self.field = field

    # -- plumbing ---------------------------------------------------------

    def __reduce__(self):
        return (AlgInt, (self.a, self.b, self.field))

    def _coerce(self, other) -> AlgInt:
        if isinstance(other, AlgInt):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other
        if isinstance(other, int):
            return AlgInt(other, 0, self.field)
        return NotImplemented

    @property
    def coords(self) -> tuple[int, int]:
        return (self.a, self.b)

    def __eq__(self, other) -> bool:
        if isinstance(other, AlgInt):
            return self.a == other.a and self.b == other.b and self.field == other.field
        if isinstance(other, int):
            return self.a == other and self.b == 0
        return NotImplemented

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.field.D))

    def __repr__(self) -> str:
        if self.field.D is None:
            return f"{self.a}"
        return f"{self.a}{self.b:+d}*w"

    def __bool__(self) -> bool:
        return self.a != 0 or self.b != 0

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> AlgInt:
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return AlgInt(self.a + o.a, self.b + o.b, self.field)

    __radd__ = __add__

    def __sub__(self, other) -> AlgInt:
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return AlgInt(self.a - o.a, self.b - o.b, self.field)

    def __rsub__(self, other) -> AlgInt:
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self) -> AlgInt:
        return AlgInt(-self.a, -self.b, self.field)

    def __mul__(self, other) -> AlgInt:
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b, c, d = self.a, self.b, o.a, o.b
        if b == 0:
            return AlgInt(a * c, a * d, self.field)
        if d == 0:
            return AlgInt(a * c, b * c, self.field)
        p, q = self.field._wrel
        bd = b * d
        return AlgInt(a * c + bd * q, a * d + b * c + bd * p, self.field)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> AlgInt:
        if k < 0:
            return self.unit_inverse() ** (-k)
        result = AlgInt(1, 0, self.field)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> AlgInt:
        if self.field.D is None or self.b == 0:
            return self
        if self.field.D % 4 == 1:
            return AlgInt(self.a + self.b, -self.b, self.field)
        return AlgInt(self.a, -self.b, self.field)

    def norm(self) -> int:
        if self.field.D is None:
            return self.a
        a, b = self.a, self.b
        if self.field.D % 4 == 1:
            return a * a + a * b - (self.field.D - 1) // 4 * b * b
        return a * a - self.field.D * b * b

    def trace(self) -> int:
        if self.field.D is None:
            return self.a
        if self.field.D % 4 == 1:
            return 2 * self.a + self.b
        return 2 * self.a

    def is_unit(self) -> bool:
        return abs(self.norm()) == 1

    def unit_inverse(self) -> AlgInt:
        n = self.norm()
        if abs(n) != 1:
            raise ValueError(f"{self!r} is not a unit")
        return self.conj() * n

    # -- embeddings and signs ---------------------------------------------

    def _surd(self) -> tuple[int, int]:
        # 2*sigma_1 = P + Q sqrt(D)  (up to the positive factor 2 for sqrt(D) basis)
        if self.field.D % 4 == 1:
            return 2 * self.a + self.b, self.b
        return self.a, self.b

    def signs(self) -> tuple[int, ...]:
        """Exact signs of (sigma_1, ..., sigma_d)."""
        if self.field.D is None:
            return (_sign(self.a),)
        P, Q = self._surd()
        D = self.field.D
        return (sign_surd(P, Q, D), sign_surd(P, -Q, D))

    def embeddings(self) -> tuple[float, ...]:
        return tuple(self.a + self.b * w for w in self.field.omega_embeddings)

    def is_totally_positive(self) -> bool:
        if self.field.D is None:
            return self.a > 0
        return self.trace() > 0 and self.norm() > 0

    def is_totally_nonnegative(self) -> bool:
        # in a real quadratic field a nonzero element has no zero embedding
        return not self or self.is_totally_positive()

    def house_exceeds(self, n: int) -> bool:
        """True iff max_i |sigma_i(x)| > n, decided by sign tests on n -+ x."""
        return not ((n - self).is_totally_nonnegative() and (n + self).is_totally_nonnegative())

    def house(self) -> float:
        return max(abs(s) for s in self.embeddings())

    def to_json(self) -> list[int]:
        return [self.a, self.b]


def succeq(x: AlgInt, y: AlgInt | int) -> bool:
    """x >= y in every embedding."""
    return (x - y).is_totally_nonnegative()


def succ(x: AlgInt, y: AlgInt | int) -> bool:
    return (x - y).is_totally_positive()


def norm(x: AlgInt) -> int:
    return x.norm()


def trace(x: AlgInt) -> int:
    return x.trace()


def is_totally_positive(x: AlgInt) -> bool:
    return x.is_totally_positive()


def house_exceeds(x: AlgInt, n: int) -> bool:
    return x.house_exceeds(n)


# -- fundamental units ----------------------------------------------------


def floor_surd(P: int, Q: int, D: int) -> int:
    """floor((P + sqrt(D)) / Q) exactly, Q != 0."""
    guess = math.floor((P + math.sqrt(D)) / Q)
    # k <= (P + sqrt D)/Q  <=>  sign(Q) * (P - kQ + sqrt D) >= 0
    s = _sign(Q)
    while s * sign_surd(P - guess * Q, 1, D) < 0:
        guess -= 1
    while s * sign_surd(P - (guess + 1) * Q, 1, D) >= 0:
        guess += 1
    return guess


def _cf_convergents(P: int, Q: int, D: int) -> Iterator[tuple[int, int]]:
    """Convergents h/k of the quadratic irrational (P + sqrt D)/Q, Q | D - P^2."""
    h0, h1 = 1, 0
    k0, k1 = 0, 1
    while True:
        a = floor_surd(P, Q, D)
        h0, h1 = a * h0 + h1, h0
        k0, k1 = a * k0 + k1, k0
        yield h0, k0
        P = a * Q - P
        Q = (D - P * P) // Q


def fundamental_unit_cf(field: Field) -> AlgInt:
    """Smallest unit > 1 via the continued fraction of -conj(w).

    A unit a + b*w > 1 has a/b within 1/(2b^2) of -conj(w), so it shows up
    among the convergents, ordered by b.
    """
    D = field.D
    start = (-1, 2) if D % 4 == 1 else (0, 1)
    for h, k in _cf_convergents(*start, D):
        u = AlgInt(h, k, field)
        if abs(u.norm()) == 1:
            return u
    raise AssertionError("unreachable")


def fundamental_unit_bruteforce(field: Field, limit: int = 10**3) -> AlgInt | None:
    """Pell search over b <= limit; used as a test oracle."""
    D = field.D
    for b in range(1, limit + 1):
        for s in (-1, 1):
            if D % 4 == 1:
                # a^2 + ab - (D-1)/4 b^2 = s  <=>  (2a+b)^2 = D b^2 + 4s
                disc = D * b * b + 4 * s
                if disc < 0:
                    continue
                r = math.isqrt(disc)
                if r * r == disc and (r - b) % 2 == 0:
                    return AlgInt((r - b) // 2, b, field)
            else:
                sq = D * b * b + s
                r = math.isqrt(sq)
                if r * r == sq:
                    return AlgInt(r, b, field)
    return None


def totally_positive_power_unit_generator(field: Field, m: int) -> AlgInt:
    """eta = u^m for the fundamental unit u; generates the unit m-th powers."""
    if m < 2 or m % 2:
        raise ValueError("m must be even and >= 2")
    if field.is_rational:
        raise TrivialUnitGroup("unit m-th powers over Q are {1}")
    eta = field.fundamental_unit**m
    assert eta.is_totally_positive() and eta.norm() == 1
    return eta


# -- divisibility -----------------------------------------------------------


def divides(beta: AlgInt, alpha: AlgInt) -> AlgInt | None:
    """Quotient q with beta*q == alpha, or None."""
    if not beta:
        raise ZeroDivisionError("divisor is zero")
    if alpha.field.is_rational:
        if alpha.a % beta.a:
            return None
        return AlgInt(alpha.a // beta.a, 0, alpha.field)
    n = beta.norm()
    num = alpha * beta.conj()
    if num.a % n or num.b % n:
        return None
    q = AlgInt(num.a // n, num.b // n, alpha.field)
    assert beta * q == alpha
    return q


def elements_of_abs_norm(field: Field, n: int) -> list[AlgInt]:
    """One element of |norm| n from every class modulo the full unit group (possibly more)."""
    if field.is_rational:
        return [field(n)]
    u1 = field.fundamental_unit.embeddings()[0]
    r = math.sqrt(n)
    R1, R2 = r * u1 + 1.0, r + 1.0
    out = []
    for x in box_points(field, (R1, R2)):
        if x.a == 0 and x.b == 0:
            continue
        if abs(x.norm()) != n:
            continue
        s1 = x.embeddings()[0]
        if s1 <= 0:
            continue
        out.append(x)
    return out


def box_points(field: Field, radii: tuple[float, ...]) -> Iterator[AlgInt]:
    """All x with |sigma_i(x)| <= radii[i] (superset if radii carry slack)."""
    if field.is_rational:
        R = int(math.floor(radii[0]))
        for a in range(-R, R + 1):
            yield AlgInt(a, 0, field)
        return
    w1, w2 = field.omega_embeddings
    R1, R2 = radii
    bmax = int(math.floor((R1 + R2) / (w1 - w2))) + 1
    for b in range(-bmax, bmax + 1):
        lo = max(-R1 - b * w1, -R2 - b * w2)
        hi = min(R1 - b * w1, R2 - b * w2)
        if lo > hi + 1:
            continue
        for a in range(math.floor(lo) - 1, math.ceil(hi) + 2):
            yield AlgInt(a, b, field)


def is_mth_powerfree(alpha: AlgInt, m: int) -> bool:
    """True iff every beta with beta^m | alpha is a unit."""
    return mth_power_divisor(alpha, m) is None


def mth_power_divisor(alpha: AlgInt, m: int) -> AlgInt | None:
    """A non-unit beta with beta^m | alpha, or None."""
    if not alpha:
        raise ValueError("alpha must be nonzero")
    N = abs(alpha.norm())
    for n in range(2, iroot(N, m) + 1):
        if N % n**m:
            continue
        for beta in elements_of_abs_norm(alpha.field, n):
            if divides(beta**m, alpha) is not None:
                return beta
    return None


# -- parsing ---------------------------------------------------------------



def parse_algint(text: str, field: Field) -> AlgInt:
    """Parse ``a+b*w`` style input ("2+1*w", "2+w", "3", "-w", "2+1w")."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty element")
    a = b = 0
    pos = 0
    while pos < len(s):
        m = re.match(r"([+-]?)(\d*)(\*?w)?", s[pos:])
        if not m or m.end() == 0:
            raise ValueError(f"cannot parse element {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        digits, wpart = m.group(2), m.group(3)
        if not digits and not wpart:
            raise ValueError(f"cannot parse element {text!r}")
        coef = int(digits) if digits else 1
        if wpart:
            b += sign * coef
        else:
            a += sign * coef
        pos += m.end()
    if b and field.is_rational:
        raise ValueError("w is undefined over Q")
    return AlgInt(a, b, field)


def format_algint(x: AlgInt) -> str:
    if x.field.is_rational or x.b == 0:
        return str(x.a)
    return f"{x.a}{x.b:+d}*w"
