"""Exhaustive representation search for certified (even, totally positive) forms.

Every monomial of a certified form is totally non-negative, so each partial
sum of a representation of t lies in the order interval [0, t].  The search
computes, block by block, the set of values v <= t (totally) a block can take,
each with witnesses, and combines orthogonal blocks by a subset-sum style
merge.  Two exact prunings keep large constructions tractable:

* a variable whose pure coefficient a (times the block scale s) has
  N(s*a) > N(t) is zero in every representation, because a nonzero value v of
  the block satisfies N(v) >= N(s*a) while v <= t forces N(v) <= N(t);
* a lazy family alpha*Q over a scalar sequence only needs the scalars with
  N(alpha) <= N(t) / (N(s) * lower_norm_bound(Q)).
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from itertools import product
from typing import Callable, Iterable

from .forms import (
    CoupledDiagonal,
    Form,
    FormLike,
    OrthogonalSum,
    ScalarList,
    ScaledFamily,
    lower_norm_bound,
)
from .ring import AlgInt, Field, box_points, iroot

DEFAULT_MAX_NODES = 5_000_000
Witness = tuple  # ((global_index, AlgInt), ...) sorted, nonzero entries only


class UncertifiedForm(ValueError):
    pass


class _BudgetHit(Exception):
    pass


def default_max_nodes() -> int:
    return int(os.environ.get("HIGHERFORMS_MAX_NODES", DEFAULT_MAX_NODES))


@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int = dc_field(default_factory=default_max_nodes)
    timeout: float | None = None
    parallel_width: int = 1

    def __post_init__(self):
        if self.max_nodes < 1 or self.parallel_width < 1 or (self.timeout is not None and self.timeout <= 0):
            raise ValueError("budget fields must be positive")

    def to_json(self):
        return {"max_nodes": self.max_nodes, "timeout": self.timeout, "parallel_width": self.parallel_width}


@dataclass
class RepresentationReport:
    target: AlgInt
    witnesses: list[Witness]
    nodes: int
    exhaustive: bool

    @property
    def represented(self) -> bool | None:
        """True/False, or None when the search was cut short without a witness."""
        if self.witnesses:
            return True
        return False if self.exhaustive else None

    def dense(self, n: int) -> list[tuple[AlgInt, ...]]:
        return [dense_witness(w, n, self.target.field) for w in self.witnesses]

    def to_json(self):
        return {
            "target": self.target.to_json(),
            "witnesses": [[[i, x.to_json()] for i, x in w] for w in self.witnesses],
            "exhaustive": self.exhaustive,
            "nodes": self.nodes,
        }


def dense_witness(w: Witness, n: int, field: Field) -> tuple[AlgInt, ...]:
    out = [AlgInt(0, 0, field)] * n
    for i, x in w:
        out[i] = x
    return tuple(out)


def _leq(v: AlgInt, t: AlgInt) -> bool:
    return (t - v).is_totally_nonnegative()


def _canonical(x: AlgInt) -> bool:
    """One of +-x: the one with positive first embedding."""
    return x.signs()[0] > 0


class _Search:
    def __init__(self, target: AlgInt, budget: SearchBudget, keep_all: bool):
        self.t = target
        self.tN = target.norm()
        self.field = target.field
        self.budget = budget
        self.keep_all = keep_all
        self.nodes = 0
        self.deadline = None if budget.timeout is None else time.monotonic() + budget.timeout
        self._cand_cache: dict[AlgInt, list[tuple[AlgInt, AlgInt]]] = {}

    def tick(self, k: int = 1):
        self.nodes += k
        if self.nodes > self.budget.max_nodes:
            raise _BudgetHit
        if self.deadline is not None and (self.nodes & 1023) == 0 and time.monotonic() > self.deadline:
            raise _BudgetHit

    # values: dict AlgInt -> list[Witness]; always contains 0 -> [()]
    def zero(self) -> dict:
        return {AlgInt(0, 0, self.field): [()]}

    def merge(self, A: dict, Bv: dict) -> dict:
        if len(Bv) == 1:
            return A
        if len(A) == 1:
            return Bv
        out: dict = {}
        for va, wa in A.items():
            for vb, wb in Bv.items():
                self.tick()
                s = va + vb
                if not _leq(s, self.t):
                    continue
                if self.keep_all:
                    out.setdefault(s, []).extend(tuple(sorted(x + y)) for x in wa for y in wb)
                elif s not in out:
                    out[s] = [tuple(sorted(wa[0] + wb[0]))]
        return out

    def candidates(self, coef: AlgInt) -> list[tuple[AlgInt, AlgInt]]:
        """Canonical nonzero x with coef * x^m <= t, paired with coef * x^m."""
        if coef in self._cand_cache:
            return self._cand_cache[coef]
        m, t = self.m, self.t
        out = []
        if coef.norm() <= self.tN:
            if self.field.is_rational:
                R = iroot(t.a // coef.a, m) if t.a >= coef.a else 0
                xs = (AlgInt(a, 0, self.field) for a in range(1, R + 1))
            else:
                radii = tuple((max(st, 0.0) / sc) ** (1.0 / m) * (1 + 1e-9) + 1e-9
                              for st, sc in zip(t.embeddings(), coef.embeddings()))
                xs = (x for x in box_points(self.field, radii) if x and _canonical(x))
            for x in xs:
                self.tick()
                v = coef * x**m
                if _leq(v, t):
                    out.append((x, v))
        self._cand_cache[coef] = out
        return out

    # -- block dispatch ---------------------------------------------------
    def values(self, Q: FormLike, offset: int, scale: AlgInt) -> dict:
        self.m = Q.m
        if isinstance(Q, OrthogonalSum):
            acc = self.zero()
            for part, off in zip(Q.parts, Q.offsets):
                acc = self.merge(acc, self.values(part, offset + off, scale))
            return acc
        if isinstance(Q, ScaledFamily):
            return self._family(Q, offset, scale)
        if isinstance(Q, CoupledDiagonal):
            return self._coupled(Q, offset, scale)
        if isinstance(Q, Form):
            return self._explicit(Q, offset, scale, list(range(Q.n)))
        raise TypeError(type(Q))

    def _family(self, Q: ScaledFamily, offset: int, scale: AlgInt) -> dict:
        low = lower_norm_bound(Q.base)
        acc = self.zero()
        if low is None:
            return acc
        cap = self.tN // (scale.norm() * low)
        r = Q.base.rank
        for alpha in Q.scalars.upto(cap):
            self.tick()
            k = Q.scalars.index_of(alpha)
            acc = self.merge(acc, self.values(Q.base, offset + k * r, scale * alpha))
        return acc

    def _coupled(self, Q: CoupledDiagonal, offset: int, scale: AlgInt) -> dict:
        active = list(Q.scalars.upto(self.tN // scale.norm()))
        if not active:
            return self.zero()
        sub = CoupledDiagonal(Q.field, Q.m, ScalarList(active), Q.coupling, Q.pairs).to_form()
        # ScalarList re-sorts by (norm, a, b), the same order the sequence uses
        index = [offset + Q.scalars.index_of(a) for a in sorted(active, key=lambda x: (x.norm(), x.a, x.b))]
        vals = self._explicit(sub, 0, scale, list(range(sub.n)))
        return {v: [tuple(sorted((index[i], x) for i, x in w)) for w in ws] for v, ws in vals.items()}

    def _explicit(self, Q: Form, offset: int, scale: AlgInt, variables: list[int]) -> dict:
        active = []
        for i in variables:
            c = Q.pure_coefficient(i)
            if (scale * c).norm() <= self.tN:
                active.append(i)
        if not active:
            return self.zero()
        sub = Q.restrict(active) if len(active) < Q.n else Q
        acc = self.zero()
        for comp in sub.components():
            if len(comp) == 1:
                vals = self._single(sub, comp[0], scale)
            else:
                vals = self._dfs(sub.restrict(comp), scale)
                vals = {v: [tuple((comp[i], x) for i, x in w) for w in ws] for v, ws in vals.items()}
            acc = self.merge(acc, vals)
        return {v: [tuple((offset + active[i], x) for i, x in w) for w in ws] for v, ws in acc.items()}

    def _single(self, Q: Form, i: int, scale: AlgInt) -> dict:
        out = self.zero()
        for x, v in self.candidates(scale * Q.pure_coefficient(i)):
            if self.keep_all:
                out.setdefault(v, []).append(((i, x),))
            elif v not in out:
                out[v] = [((i, x),)]
        return out

    def _dfs(self, Q: Form, scale: AlgInt) -> dict:
        """All values of a connected explicit block, by depth-first search."""
        n = Q.n
        pure = [scale * Q.pure_coefficient(i) for i in range(n)]
        order = sorted(range(n), key=lambda i: (-pure[i].norm(), i))
        pos = {v: k for k, v in enumerate(order)}
        # terms become due once their last variable (in search order) is assigned
        due: list[list] = [[] for _ in range(n)]
        for vs, es, coef in Q.sparse_terms:
            if len(vs) == 1:
                continue
            last = max(vs, key=lambda v: pos[v])
            due[pos[last]].append((vs, es, scale * coef))
        cands = [self.candidates(pure[i]) for i in order]
        zero = AlgInt(0, 0, self.field)
        out: dict = {}
        xs: dict[int, AlgInt] = {}

        def rec(k: int, partial: AlgInt):
            self.tick()
            if k == n:
                w = tuple(sorted(xs.items()))
                if self.keep_all:
                    out.setdefault(partial, []).append(w)
                elif partial not in out:
                    out[partial] = [w]
                return
            var = order[k]
            rec(k + 1, partial + self._due_sum(due[k], xs))
            for x, v in cands[k]:
                xs[var] = x
                s = partial + v + self._due_sum(due[k], xs)
                if _leq(s, self.t):
                    rec(k + 1, s)
                del xs[var]

        rec(0, zero)
        return out

    def _due_sum(self, terms, xs) -> AlgInt:
        total = AlgInt(0, 0, self.field)
        for vs, es, coef in terms:
            if all(v in xs for v in vs):
                term = coef
                for v, e in zip(vs, es):
                    term = term * xs[v] ** e
                total = total + term
        return total


def _expand_signs(w: Witness) -> list[Witness]:
    opts = [((i, x), (i, -x)) for i, x in w]
    return [tuple(c) for c in product(*opts)]


def _coerce_target(Q: FormLike, t) -> AlgInt:
    if isinstance(t, AlgInt):
        return t
    return AlgInt(int(t), 0, Q.field)


def enumerate_representations(
    Q: FormLike,
    t,
    budget: SearchBudget | None = None,
    mode: str = "all",
    compress_signs: bool = False,
) -> RepresentationReport:
    """Solutions of Q(x) = t.

    mode="all" lists every solution (or, with compress_signs, one per sign
    pattern, the canonical one having each nonzero x_i with sigma_1(x_i) > 0);
    mode="one" stops caring after the first witness.
    """
    if not Q.epd_certificate():
        raise UncertifiedForm("form is not certified totally positive definite")
    t = _coerce_target(Q, t)
    if not t.is_totally_nonnegative():
        raise ValueError(f"target {t!r} is not totally non-negative")
    budget = budget or SearchBudget()
    s = _Search(t, budget, keep_all=(mode == "all"))
    s.m = Q.m
    one = AlgInt(1, 0, Q.field)
    try:
        vals = s.values(Q, 0, one)
        exhaustive = True
    except _BudgetHit:
        return RepresentationReport(t, [], s.nodes, False)
    ws = vals.get(t, [])
    if mode == "all":
        if compress_signs:
            ws = [w for w in ws if all(_canonical(x) for _, x in w)]
        else:
            full = set()
            for w in ws:
                full.update(_expand_signs(w))
            ws = list(full)
        ws = sorted(set(ws), key=_witness_key)
    else:
        ws = ws[:1]
    for w in ws:
        assert Q.evaluate(dict(w)) == t, "witness does not re-evaluate"
    return RepresentationReport(t, ws, s.nodes, exhaustive)


def _witness_key(w: Witness):
    return tuple((i, x.a, x.b) for i, x in w)


def represented_values_z(Q: FormLike, bound: int, budget: SearchBudget | None = None) -> tuple[dict[int, Witness], bool, int]:
    """All t in [0, bound] represented by a form over Z, one witness each."""
    budget = budget or SearchBudget()
    t = AlgInt(bound, 0, Q.field)
    s = _Search(t, budget, keep_all=False)
    s.m = Q.m
    try:
        vals = s.values(Q, 0, AlgInt(1, 0, Q.field))
    except _BudgetHit:
        return {}, False, s.nodes
    return {v.a: ws[0] for v, ws in vals.items()}, True, s.nodes


def _one_target(args):
    Q, t, budget = args
    return enumerate_representations(Q, t, budget, mode="one")


def represent_many(Q: FormLike, targets: Iterable[AlgInt], budget: SearchBudget | None = None) -> list[RepresentationReport]:
    """One-witness search per target; parallel over targets when parallel_width > 1."""
    budget = budget or SearchBudget()
    targets = list(targets)
    if budget.parallel_width > 1 and len(targets) > 1:
        with ProcessPoolExecutor(max_workers=budget.parallel_width) as ex:
            return list(ex.map(_one_target, [(Q, t, budget) for t in targets], chunksize=4))
    return [_one_target((Q, t, budget)) for t in targets]


def represented_set(Q: FormLike, bound: int, budget: SearchBudget | None = None, dom=None):
    """Over Z: the set of t in [0, bound] represented.  Over a field: the set of
    orbit representatives of norm <= bound that are represented (0 excluded).

    Raises RuntimeError if the budget runs out (no negative claims without an
    exhaustive search).
    """
    if not Q.epd_certificate():
        raise UncertifiedForm("form is not certified totally positive definite")
    if Q.field.is_rational:
        vals, ok, _ = represented_values_z(Q, bound, budget)
        if not ok:
            raise RuntimeError("search budget exhausted")
        return set(vals)
    from .lattice_nf import class_reps_tp, compute_domain

    dom = dom or compute_domain(Q.field, Q.m)
    reps = class_reps_tp(Q.field, Q.m, bound, dom=dom)
    out = set()
    for rep in represent_many(Q, reps, budget):
        if rep.represented is None:
            raise RuntimeError(f"search budget exhausted at {rep.target!r}")
        if rep.represented:
            out.add(rep.target)
    return out


@dataclass
class DiffReport:
    bound: int
    false_positives: list  # represented but expected excluded
    false_negatives: list  # expected but not represented
    unresolved: list  # budget ran out
    checked: int
    nodes: int

    @property
    def verdict(self) -> str:
        if self.false_positives or self.false_negatives:
            return "fail"
        return "inconclusive" if self.unresolved else "pass"

    def to_json(self):
        enc = lambda xs: [x if isinstance(x, int) else x.to_json() for x in xs]
        return {
            "bound": self.bound,
            "verdict": self.verdict,
            "checked": self.checked,
            "nodes": self.nodes,
            "false_positives": enc(self.false_positives),
            "false_negatives": enc(self.false_negatives),
            "unresolved": enc(self.unresolved),
        }


def verify_exact(Q: FormLike, expected: Callable[[AlgInt], bool], bound: int,
                 budget: SearchBudget | None = None, dom=None) -> DiffReport:
    """Compare the represented set up to ``bound`` with the predicate ``expected``.

    Over Z the candidates are 0..bound; over a field, 0 and one representative
    per unit orbit of norm <= bound.  A partial search never yields "pass".
    """
    budget = budget or SearchBudget()
    field = Q.field
    if field.is_rational:
        vals, ok, nodes = represented_values_z(Q, bound, budget)
        targets = list(range(bound + 1))
        if not ok:
            return DiffReport(bound, [], [], targets, len(targets), nodes)
        fp = [t for t in targets if t in vals and not expected(AlgInt(t, 0, field))]
        fn = [t for t in targets if t not in vals and expected(AlgInt(t, 0, field))]
        return DiffReport(bound, fp, fn, [], len(targets), nodes)
    from .lattice_nf import class_reps_tp, compute_domain

    dom = dom or compute_domain(field, Q.m)
    targets = [AlgInt(0, 0, field)] + class_reps_tp(field, Q.m, bound, dom=dom)
    fp, fn, un, nodes = [], [], [], 0
    for rep in represent_many(Q, targets, budget):
        nodes += rep.nodes
        want = expected(rep.target)
        if rep.represented is None:
            un.append(rep.target)
        elif rep.represented and not want:
            fp.append(rep.target)
        elif not rep.represented and want:
            fn.append(rep.target)
    return DiffReport(bound, fp, fn, un, len(targets), nodes)


def brute_force_representations(Q: FormLike, t, radius: int | None = None, prune: bool = True) -> set[tuple[AlgInt, ...]]:
    """Naive oracle: every x in a full coordinate box with Q(x) == t.

    The box |sigma_j(x_i)| <= (sigma_j(t)/sigma_j(a_i))^(1/m) + 1 per variable
    contains all solutions of a certified form.  When every monomial has even
    exponents and a totally positive coefficient, each term is totally
    nonnegative, so a box prefix whose terms already exceed t is skipped;
    otherwise (or with ``prune=False``) the whole product is scanned.
    """
    t = _coerce_target(Q, t)
    F = Q.to_form()
    per_var = []
    for i in range(F.n):
        a = F.pure_coefficient(i)
        if radius is not None:
            radii = (float(radius),) * F.field.degree
        else:
            radii = tuple((max(st, 0.0) / sa) ** (1.0 / F.m) + 1.0
                          for st, sa in zip(t.embeddings(), a.embeddings()))
        per_var.append(list(box_points(F.field, radii)))
    monotone = all(e % 2 == 0 for exps, c in F.terms for e in exps) and all(c.is_totally_positive() for _, c in F.terms)
    if not (monotone and prune):
        return {x for x in product(*per_var) if F.evaluate(x) == t}
    # terms grouped by their last variable, so a prefix of length k+1 fixes them
    closing = [[] for _ in range(F.n)]
    for exps, c in F.terms:
        last = max(i for i, e in enumerate(exps) if e)
        closing[last].append((exps, c))
    out = set()
    x = [None] * F.n

    def walk(k, partial):
        if k == F.n:
            if partial == t:
                out.add(tuple(x))
            return
        for v in per_var[k]:
            x[k] = v
            val = partial
            for exps, c in closing[k]:
                term = c
                for i, e in enumerate(exps):
                    if e:
                        term = term * x[i] ** e
                val = val + term
            if (t - val).is_totally_nonnegative():
                walk(k + 1, val)

    walk(0, t - t)
    return out
