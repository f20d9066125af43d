"""Homogeneous forms of even degree over Z or a real quadratic ring of integers.

``Form`` is the explicit sparse polynomial.  The constructions over number
fields produce forms with far too many variables to write out, so there are
also three structured kinds that share the same surface (``field``, ``m``,
``rank``, ``evaluate``, ``epd_certificate``, ``to_form``):

* ``OrthogonalSum``  -- Q1 _|_ Q2 _|_ ...
* ``ScaledFamily``   -- _|_ over alpha in S of alpha*Q, with S possibly lazy
* ``CoupledDiagonal``-- sum a_i x_i^m + mu * sum_{pairs} x_i^2 x_j^(m-2)

A scalar sequence S is anything with ``count()``, ``min_norm``, ``upto(X)``,
``index_of(alpha)``, ``at(k)`` and ``all_totally_positive()``; ``ScalarList``
is the explicit one, ``lattice_nf.OrbitShell`` the lazy one.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .ring import QQ, AlgInt, Field, FieldMismatch

Monomial = tuple  # dense exponent vector, one entry per variable

DEFAULT_MAX_TERMS = 200_000


class MaterializationError(ValueError):
    pass


def _coerce(x, field: Field) -> AlgInt:
    if isinstance(x, AlgInt):
        if x.field != field:
            raise FieldMismatch(f"{x.field} vs {field}")
        return x
    return AlgInt(int(x), 0, field)


def _pow_cache(x: AlgInt, m: int) -> list[AlgInt]:
    out = [AlgInt(1, 0, x.field)]
    for _ in range(m):
        out.append(out[-1] * x)
    return out


@dataclass(frozen=True, eq=False)
class Form:
    field: Field
    m: int
    n: int
    terms: tuple  # ((exps, coef), ...) sorted by exps

    def __post_init__(self):
        for exps, coef in self.terms:
            if len(exps) != self.n:
                raise ValueError(f"exponent vector {exps} has length != {self.n}")
            if sum(exps) != self.m or min(exps, default=0) < 0:
                raise ValueError(f"monomial {exps} is not of degree {self.m}")
            if not coef:
                raise ValueError("zero coefficient stored")
            if coef.field != self.field:
                raise FieldMismatch("coefficient from another field")

    @classmethod
    def from_terms(cls, field: Field, m: int, n: int, terms) -> Form:
        """Build from a mapping or iterable of (exps, coef); merges duplicates."""
        acc: dict[tuple, AlgInt] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exps, coef in items:
            exps = tuple(int(e) for e in exps)
            c = _coerce(coef, field)
            acc[exps] = acc[exps] + c if exps in acc else c
        clean = tuple(sorted((e, c) for e, c in acc.items() if c))
        return cls(field, m, n, clean)

    @classmethod
    def empty(cls, field: Field, m: int) -> Form:
        return cls(field, m, 0, ())

    @classmethod
    def diagonal(cls, coefs: Sequence, m: int, field: Field | None = None) -> Form:
        field = field or (coefs[0].field if coefs and isinstance(coefs[0], AlgInt) else QQ)
        n = len(coefs)
        terms = []
        for i, c in enumerate(coefs):
            exps = [0] * n
            exps[i] = m
            terms.append((tuple(exps), c))
        return cls.from_terms(field, m, n, terms)

    @property
    def rank(self) -> int:
        return self.n

    @cached_property
    def term_map(self) -> dict:
        return dict(self.terms)

    @cached_property
    def sparse_terms(self) -> tuple:
        """((vars, exps, coef), ...) with only the nonzero exponents."""
        out = []
        for exps, coef in self.terms:
            vs = tuple(i for i, e in enumerate(exps) if e)
            out.append((vs, tuple(exps[i] for i in vs), coef))
        return tuple(out)

    def pure_coefficient(self, i: int) -> AlgInt | None:
        exps = [0] * self.n
        exps[i] = self.m
        return self.term_map.get(tuple(exps))

    def evaluate(self, x) -> AlgInt:
        xs = _as_lookup(x, self.n, self.field)
        total = AlgInt(0, 0, self.field)
        cache: dict[int, list[AlgInt]] = {}
        for vs, es, coef in self.sparse_terms:
            term = coef
            for v, e in zip(vs, es):
                xv = xs(v)
                if not xv:
                    term = None
                    break
                if v not in cache:
                    cache[v] = _pow_cache(xv, self.m)
                term = term * cache[v][e]
            if term is not None:
                total = total + term
        return total

    def epd_certificate(self) -> bool:
        if self.m % 2:
            return False
        for exps, coef in self.terms:
            if any(e % 2 for e in exps) or not coef.is_totally_positive():
                return False
        return all(self.pure_coefficient(i) is not None for i in range(self.n))

    def components(self) -> list[list[int]]:
        """Variable sets of the orthogonal (connected) components, sorted."""
        parent = list(range(self.n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for vs, _, _ in self.sparse_terms:
            for v in vs[1:]:
                ra, rb = find(vs[0]), find(v)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
        groups: dict[int, list[int]] = {}
        for i in range(self.n):
            groups.setdefault(find(i), []).append(i)
        return sorted(groups.values())

    def restrict(self, variables: Sequence[int]) -> Form:
        """Sub-form on ``variables`` (terms touching other variables dropped)."""
        index = {v: k for k, v in enumerate(variables)}
        terms = []
        for vs, es, coef in self.sparse_terms:
            if all(v in index for v in vs):
                exps = [0] * len(variables)
                for v, e in zip(vs, es):
                    exps[index[v]] = e
                terms.append((tuple(exps), coef))
        return Form.from_terms(self.field, self.m, len(variables), terms)

    def to_form(self, max_terms: int = DEFAULT_MAX_TERMS) -> Form:
        return self

    def __repr__(self) -> str:
        return f"Form(field={self.field}, m={self.m}, n={self.n}, terms={len(self.terms)})"


def _as_lookup(x, n: int, field: Field):
    """Uniform accessor for dense sequences and sparse {index: value} maps."""
    if isinstance(x, Mapping):
        for k in x:
            if not 0 <= k < n:
                raise ValueError(f"variable index {k} out of range for rank {n}")
        zero = AlgInt(0, 0, field)
        return lambda i: _coerce(x[i], field) if i in x else zero
    if len(x) != n:
        raise ValueError(f"expected {n} values, got {len(x)}")
    vals = [_coerce(v, field) for v in x]
    return lambda i: vals[i]


# -- scalar sequences -------------------------------------------------------


def scalar_key(x: AlgInt) -> tuple:
    return (x.norm(), x.a, x.b)


class ScalarList:
    """Explicit scalar sequence, kept sorted by (norm, a, b)."""

    def __init__(self, items: Iterable[AlgInt]):
        self.items = tuple(sorted(items, key=scalar_key))
        self._index = {x: k for k, x in enumerate(self.items)}

    def count(self) -> int:
        return len(self.items)

    @property
    def min_norm(self) -> int | None:
        return self.items[0].norm() if self.items else None

    def upto(self, X) -> Iterator[AlgInt]:
        for x in self.items:
            if x.norm() > X:
                break
            yield x

    def index_of(self, x: AlgInt) -> int:
        return self._index[x]

    def at(self, k: int) -> AlgInt:
        return self.items[k]

    def __iter__(self):
        return iter(self.items)

    def all_totally_positive(self) -> bool:
        return all(x.is_totally_positive() for x in self.items)

    def to_json(self):
        return {"kind": "list", "elements": [x.to_json() for x in self.items]}


# -- structured forms -------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ScaledFamily:
    """Orthogonal sum of alpha*base over the scalar sequence."""

    base: "FormLike"
    scalars: object

    @property
    def field(self) -> Field:
        return self.base.field

    @property
    def m(self) -> int:
        return self.base.m

    @cached_property
    def rank(self) -> int:
        return self.scalars.count() * self.base.rank

    def evaluate(self, x) -> AlgInt:
        r = self.base.rank
        total = AlgInt(0, 0, self.field)
        if isinstance(x, Mapping):
            blocks: dict[int, dict[int, AlgInt]] = {}
            for i, v in x.items():
                if not 0 <= i < self.rank:
                    raise ValueError(f"variable index {i} out of range")
                blocks.setdefault(i // r, {})[i % r] = v
            for k, sub in sorted(blocks.items()):
                total = total + self.scalars.at(k) * self.base.evaluate(sub)
            return total
        if len(x) != self.rank:
            raise ValueError(f"expected {self.rank} values, got {len(x)}")
        for k in range(self.scalars.count()):
            chunk = x[k * r : (k + 1) * r]
            total = total + self.scalars.at(k) * self.base.evaluate(chunk)
        return total

    def epd_certificate(self) -> bool:
        return self.base.epd_certificate() and self.scalars.all_totally_positive()

    def to_form(self, max_terms: int = DEFAULT_MAX_TERMS) -> Form:
        base = self.base.to_form(max_terms)
        count = self.scalars.count()
        if count * len(base.terms) > max_terms:
            raise MaterializationError(f"{count} copies of {len(base.terms)} terms")
        forms = [scale(self.scalars.at(k), base) for k in range(count)]
        return _explicit_sum(forms, self.field, self.m)


@dataclass(frozen=True, eq=False)
class CoupledDiagonal:
    """sum a_i x_i^m + coupling * sum x_i^2 x_j^(m-2) over i<j ("lt") or i!=j ("ne")."""

    field: Field
    m: int
    scalars: object
    coupling: AlgInt
    pairs: str = "lt"

    def __post_init__(self):
        if self.m < 4 or self.m % 2:
            raise ValueError("coupled blocks need even m >= 4")
        if self.pairs not in ("lt", "ne"):
            raise ValueError("pairs must be 'lt' or 'ne'")

    @cached_property
    def rank(self) -> int:
        return self.scalars.count()

    def evaluate(self, x) -> AlgInt:
        m = self.m
        if isinstance(x, Mapping):
            nz = sorted((i, _coerce(v, self.field)) for i, v in x.items() if v)
            for i, _ in nz:
                if not 0 <= i < self.rank:
                    raise ValueError(f"variable index {i} out of range")
        else:
            if len(x) != self.rank:
                raise ValueError(f"expected {self.rank} values, got {len(x)}")
            nz = [(i, _coerce(v, self.field)) for i, v in enumerate(x) if v]
        total = AlgInt(0, 0, self.field)
        for i, v in nz:
            total = total + self.scalars.at(i) * v**m
        cross = AlgInt(0, 0, self.field)
        for p, (i, xi) in enumerate(nz):
            for j, xj in nz[p + 1 :]:
                cross = cross + xi**2 * xj ** (m - 2)
                if self.pairs == "ne":
                    cross = cross + xj**2 * xi ** (m - 2)
        return total + self.coupling * cross

    def epd_certificate(self) -> bool:
        return self.coupling.is_totally_positive() and self.scalars.all_totally_positive()

    def to_form(self, max_terms: int = DEFAULT_MAX_TERMS) -> Form:
        n = self.rank
        if n * n > max_terms:
            raise MaterializationError(f"coupled block of rank {n}")
        terms = []
        for i in range(n):
            e = [0] * n
            e[i] = self.m
            terms.append((tuple(e), self.scalars.at(i)))
        for i in range(n):
            for j in range(n):
                if i == j or (self.pairs == "lt" and i > j):
                    continue
                e = [0] * n
                e[i] = 2
                e[j] = self.m - 2
                terms.append((tuple(e), self.coupling))
        return Form.from_terms(self.field, self.m, n, terms)


@dataclass(frozen=True, eq=False)
class OrthogonalSum:
    parts: tuple

    def __post_init__(self):
        if not self.parts:
            raise ValueError("empty orthogonal sum")
        f, m = self.parts[0].field, self.parts[0].m
        for p in self.parts:
            if p.field != f:
                raise FieldMismatch("parts over different fields")
            if p.m != m:
                raise ValueError("parts of different degree")

    @property
    def field(self) -> Field:
        return self.parts[0].field

    @property
    def m(self) -> int:
        return self.parts[0].m

    @cached_property
    def offsets(self) -> tuple[int, ...]:
        out, acc = [], 0
        for p in self.parts:
            out.append(acc)
            acc += p.rank
        return tuple(out)

    @cached_property
    def rank(self) -> int:
        return sum(p.rank for p in self.parts)

    def evaluate(self, x) -> AlgInt:
        total = AlgInt(0, 0, self.field)
        if isinstance(x, Mapping):
            subs: list[dict] = [{} for _ in self.parts]
            for i, v in x.items():
                k = _locate(self.offsets, i, self.rank)
                subs[k][i - self.offsets[k]] = v
            for p, sub in zip(self.parts, subs):
                if sub:
                    total = total + p.evaluate(sub)
            return total
        if len(x) != self.rank:
            raise ValueError(f"expected {self.rank} values, got {len(x)}")
        for p, off in zip(self.parts, self.offsets):
            total = total + p.evaluate(x[off : off + p.rank])
        return total

    def epd_certificate(self) -> bool:
        return all(p.epd_certificate() for p in self.parts)

    def to_form(self, max_terms: int = DEFAULT_MAX_TERMS) -> Form:
        return _explicit_sum([p.to_form(max_terms) for p in self.parts], self.field, self.m)


def _locate(offsets: Sequence[int], i: int, total: int) -> int:
    if not 0 <= i < total:
        raise ValueError(f"variable index {i} out of range")
    lo, hi = 0, len(offsets) - 1
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if offsets[mid] <= i:
            lo = mid
        else:
            hi = mid - 1
    return lo


FormLike = Union[Form, ScaledFamily, CoupledDiagonal, OrthogonalSum]


# -- operations on explicit forms -----------------------------------------


def evaluate(Q: FormLike, x) -> AlgInt:
    return Q.evaluate(x)


def _explicit_sum(forms: Sequence[Form], field: Field, m: int) -> Form:
    n = sum(f.n for f in forms)
    terms = []
    off = 0
    for f in forms:
        pad_l, pad_r = (0,) * off, (0,) * (n - off - f.n)
        for exps, coef in f.terms:
            terms.append((pad_l + exps + pad_r, coef))
        off += f.n
    return Form(field, m, n, tuple(sorted(terms)))


def orthogonal_sum(Q1: FormLike, Q2: FormLike) -> FormLike:
    """Q1 _|_ Q2 with the variables of Q1 first."""
    if Q1.field != Q2.field:
        raise FieldMismatch(f"{Q1.field} vs {Q2.field}")
    if Q1.m != Q2.m:
        raise ValueError(f"degree mismatch {Q1.m} vs {Q2.m}")
    if isinstance(Q1, Form) and isinstance(Q2, Form):
        return _explicit_sum([Q1, Q2], Q1.field, Q1.m)
    if Q2.rank == 0:
        return Q1
    if Q1.rank == 0:
        return Q2
    return OrthogonalSum((Q1, Q2))


def scale(alpha, Q: FormLike) -> FormLike:
    alpha = _coerce(alpha, Q.field)
    if not alpha.is_totally_positive():
        raise ValueError(f"scalar {alpha!r} is not totally positive")
    if isinstance(Q, Form):
        return Form(Q.field, Q.m, Q.n, tuple((e, alpha * c) for e, c in Q.terms))
    return ScaledFamily(Q, ScalarList([alpha]))


def epd_certificate(Q: FormLike) -> bool:
    """Even exponents, totally positive coefficients, a pure power per variable.

    True implies total positive definiteness; False only means "not certified".
    """
    return Q.epd_certificate()


def lower_norm_bound(Q: FormLike) -> int | None:
    """Lower bound on N(Q(x)) over nonzero x, valid for certified forms.

    Every nonzero value dominates some a_i x_i^m, whose norm is at least N(a_i).
    None for a form of rank 0.
    """
    if isinstance(Q, Form):
        norms = [Q.pure_coefficient(i).norm() for i in range(Q.n)]
        return min(norms) if norms else None
    if isinstance(Q, CoupledDiagonal):
        return Q.scalars.min_norm
    if isinstance(Q, ScaledFamily):
        b, s = lower_norm_bound(Q.base), Q.scalars.min_norm
        return None if b is None or s is None else b * s
    if isinstance(Q, OrthogonalSum):
        vals = [v for v in (lower_norm_bound(p) for p in Q.parts) if v is not None]
        return min(vals) if vals else None
    raise TypeError(type(Q))
