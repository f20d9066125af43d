"""Universal and exclusion forms over real quadratic fields.

The Waring constants of a field are not effective, so every construction is
parametrized by empirical values (G_hat, P_hat) and records them, together
with the caveat that universality holds only if they are valid, in a
provenance block.  All constructions are lazy: the large orthogonal sums are
``ScaledFamily``/``CoupledDiagonal`` blocks over ``OrbitShell`` sequences.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Iterable

from .forms import CoupledDiagonal, Form, FormLike, OrthogonalSum, ScaledFamily
from .lattice_nf import (
    BudgetExceeded,
    DomainData,
    OrbitShell,
    PowerSubringData,
    compute_domain,
    compute_Mn,
    power_subring,
    reduce_to_F,
)
from .ring import AlgInt, Field, divides, elements_of_abs_norm, iroot
from .waring import WaringParams

UNIVERSAL_CAVEAT = "universal assuming (G_hat, P_hat) are valid Waring parameters for this field"
DEFAULT_MAX_ORBITS = 50_000_000


class InadmissibleTargetSet(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class TargetSetNF:
    """A0; the excluded set is A0 times all unit m-th powers."""

    field: Field
    A0: tuple

    def __init__(self, field: Field, A0: Iterable[AlgInt] = ()):
        els = tuple(A0)
        for a in els:
            if a.field != field or not a.is_totally_positive():
                raise ValueError(f"{a!r} is not a totally positive element of {field}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "A0", els)

    def orbit_reps(self, dom: DomainData) -> frozenset:
        return frozenset(reduce_to_F(a, dom)[1] for a in self.A0)

    def contains(self, x: AlgInt, dom: DomainData) -> bool:
        if not x.is_totally_positive():
            return False
        return reduce_to_F(x, dom)[1] in self.orbit_reps(dom)

    @property
    def max_norm(self) -> int:
        return max((a.norm() for a in self.A0), default=0)


@dataclass(frozen=True)
class NFConstructionParams:
    waring: WaringParams
    verify_bound: int = 100
    layout: str = "centered"
    max_orbits: int = DEFAULT_MAX_ORBITS
    exceptions: tuple = ()

    def to_json(self):
        return {"waring": self.waring.to_json(), "verify_bound": self.verify_bound,
                "layout": self.layout, "max_orbits": self.max_orbits,
                "exceptions": [list(e) for e in self.exceptions]}

    @classmethod
    def from_json(cls, doc) -> NFConstructionParams:
        w = doc["waring"]
        return cls(WaringParams(w["m"], w["G_hat"], w.get("P_hat", 1)), doc.get("verify_bound", 100),
                   doc.get("layout", "centered"), doc.get("max_orbits", DEFAULT_MAX_ORBITS),
                   tuple(tuple(e) for e in doc.get("exceptions", ())))


@dataclass
class Construction:
    form: FormLike
    provenance: dict
    parts: dict = dc_field(default_factory=dict)

    @property
    def rank(self) -> int:
        return self.form.rank


def _ceil_frac(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def c_inverse_power(dom: DomainData, X: int) -> Fraction:
    """c^(-d) * X as an exact fraction."""
    return Fraction(X) / dom.c ** dom.degree


def _setup(field: Field, m: int, params: NFConstructionParams, dom=None, psr=None):
    if params.waring.m != m:
        raise ValueError("Waring parameters were chosen for another exponent")
    dom = dom or compute_domain(field, m, params.layout)
    psr = psr or power_subring(field, m)
    return dom, psr


def _shell(dom: DomainData, lo: int, hi: int, params: NFConstructionParams, exclude=()) -> OrbitShell:
    sh = OrbitShell(dom, lo, hi, exclude)
    if sh.count() > params.max_orbits:
        raise BudgetExceeded(f"{sh.count()} orbit representatives in ({lo}, {hi}] exceed max_orbits={params.max_orbits}")
    return sh


def _provenance(construction: str, field: Field, m: int, params: NFConstructionParams, dom: DomainData, **extra) -> dict:
    doc = {
        "construction": construction,
        "field": field.to_json(),
        "m": m,
        "G_hat": params.waring.G_hat,
        "P_hat": params.waring.P_hat,
        "verify_bound": params.verify_bound,
        "exceptions": [list(e) for e in params.exceptions],
        "domain": dom.to_json(),
        "caveats": [UNIVERSAL_CAVEAT],
    }
    doc.update(extra)
    return doc


def construct_Q1(field: Field, m: int, psr: PowerSubringData, params: NFConstructionParams | int) -> Form:
    """sum theta_i x_i^m + sum_{i<=G_hat} y_i^m.

    ``params`` may be a bare count G, which also allows m = 2 (WaringParams
    itself is restricted to m > 2).
    """
    G = params if isinstance(params, int) else params.waring.G_hat
    coefs = list(psr.thetas) + [AlgInt(1, 0, field)] * G
    return Form.diagonal(coefs, m, field)


def universal_threshold(dom: DomainData, psr: PowerSubringData, P_hat: int) -> tuple[int, int]:
    """(L, M0) with L = ceil(max(M0, c^-d P_hat))."""
    M0 = compute_Mn(0, dom, psr)
    return max(M0, _ceil_frac(c_inverse_power(dom, P_hat))), M0


def construct_universal(field: Field, m: int, params: NFConstructionParams, dom=None, psr=None) -> tuple[Construction, int]:
    """Q1 _|_ sum_{alpha in S} alpha z_alpha^m, S the orbit reps of norm <= L."""
    if field.degree > 2:
        raise ValueError("degree > 2 is not supported")
    dom, psr = _setup(field, m, params, dom, psr)
    L, M0 = universal_threshold(dom, psr, params.waring.P_hat)
    Q1 = construct_Q1(field, m, psr, params)
    classes = _shell(dom, 0, L, params)
    q = ScaledFamily(Form.diagonal([AlgInt(1, 0, field)], m, field), classes)
    form = OrthogonalSum((Q1, q))
    prov = _provenance("universal form: theta-shifted Waring block plus one variable per small orbit",
                       field, m, params, dom, L=L, M0=M0, r=psr.r,
                       thetas=[t.to_json() for t in psr.thetas], classes=classes.count(), rank=form.rank)
    return Construction(form, prov, {"Q1": Q1, "q": q}), L


def construct_QB_nf(field: Field, m: int, B: int, params: NFConstructionParams, dom=None, psr=None,
                    universal: Construction | None = None) -> Construction:
    """Sum of alpha*Q over the orbit reps alpha with B < N(alpha) <= C.

    Represents every totally positive element of norm > B and nothing nonzero
    of norm <= B.
    """
    dom, psr = _setup(field, m, params, dom, psr)
    if universal is None:
        universal, L = construct_universal(field, m, params, dom, psr)
    else:
        L = universal.provenance["L"]
    if B <= L:
        raise ValueError(f"B={B} must exceed L={L}")
    d = field.degree
    n = iroot(B, d) + 1  # smallest n with n^d > B
    M = compute_Mn(n, dom, psr)
    C = max(M, _ceil_frac(c_inverse_power(dom, B)))
    S = _shell(dom, B, C, params)
    form = ScaledFamily(universal.form, S)
    prov = _provenance("norm-threshold form: scaled copies of the universal form over orbits with B < N <= C",
                       field, m, params, dom, L=L, B=B, n=n, M_n=M, C=C, scalars=S.count(),
                       rank=form.rank)
    return Construction(form, prov, {"universal": universal, "S": S})


def admissibility_witness_nf(A0: TargetSetNF, m: int, dom: DomainData):
    """(alpha, beta) with alpha*beta^m in A, beta a non-unit, alpha not in A; or None."""
    field = A0.field
    reps = A0.orbit_reps(dom)
    for delta in A0.A0:
        N = delta.norm()
        for n in range(iroot(N, m), 1, -1):  # largest divisor first: smallest quotient
            if N % n**m:
                continue
            betas = ([AlgInt(n, 0, field)] if field.is_rational else elements_of_abs_norm(field, n))
            for beta in betas:
                q = divides(beta**m, delta)
                if q is None:
                    continue
                if reduce_to_F(q, dom)[1] not in reps:
                    return q, beta
    return None


def check_admissible_nf(A0: TargetSetNF, m: int, dom: DomainData | None = None) -> bool:
    dom = dom or compute_domain(A0.field, m)
    return admissibility_witness_nf(A0, m, dom) is None


def construct_excluding_nf(A0: TargetSetNF, m: int, params: NFConstructionParams, dom=None, psr=None) -> Construction:
    """Q_B _|_ q, q = sum_{alpha in S} alpha x_alpha^m + mu * sum_{alpha != beta} x_alpha^2 x_beta^(m-2),
    where S are the orbit reps of norm <= B outside A and mu^d > B."""
    field = A0.field
    dom, psr = _setup(field, m, params, dom, psr)
    w = admissibility_witness_nf(A0, m, dom)
    if w is not None:
        a, b = w
        raise InadmissibleTargetSet(
            f"condition violated by (a,b)=({a.to_json()},{b.to_json()}): a*b^{m} in A, a not in A", w)
    universal, L = construct_universal(field, m, params, dom, psr)
    B = max(L + 1, A0.max_norm)
    QB = construct_QB_nf(field, m, B, params, dom, psr, universal)
    S = _shell(dom, 0, B, params, exclude=A0.A0)
    d = field.degree
    mu = iroot(B, d) + 1
    q = CoupledDiagonal(field, m, S, AlgInt(mu, 0, field), pairs="ne")
    form = OrthogonalSum((QB.form, q))
    prov = _provenance("exclusion form: norm-threshold form plus coupled diagonal over small orbits outside A",
                       field, m, params, dom, L=L, B=B, mu=mu, A0=[a.to_json() for a in A0.A0],
                       small_orbits=S.count(), cover_scalars=QB.provenance["scalars"],
                       universal_rank=universal.rank, rank=form.rank)
    return Construction(form, prov, {"Q_B": QB, "q": q, "universal": universal})
