"""JSON documents for forms (explicit and structured) and scalar sequences."""

from __future__ import annotations

import json

from .forms import CoupledDiagonal, Form, FormLike, OrthogonalSum, ScalarList, ScaledFamily
from .lattice_nf import OrbitShell, compute_domain
from .ring import AlgInt, Field

SCHEMA = 1


def algint_from_json(doc, field: Field) -> AlgInt:
    if isinstance(doc, int):
        return AlgInt(doc, 0, field)
    a, b = doc
    return AlgInt(int(a), int(b), field)


def scalars_to_json(S) -> dict:
    return S.to_json()


def scalars_from_json(doc, field: Field):
    kind = doc["kind"]
    if kind == "list":
        return ScalarList(algint_from_json(x, field) for x in doc["elements"])
    if kind == "orbit_shell":
        f = Field.from_json(doc["field"])
        layout = doc["layout"] if doc["layout"] != "trivial" else "centered"
        dom = compute_domain(f, doc["m"], layout)
        exclude = [algint_from_json(x, f) for x in doc.get("exclude", [])]
        return OrbitShell(dom, doc["lo"], doc["hi"], exclude)
    raise ValueError(f"unknown scalar sequence kind {kind!r}")


def form_to_json(Q: FormLike) -> dict:
    if isinstance(Q, Form):
        return {
            "field": Q.field.to_json(),
            "m": Q.m,
            "n": Q.n,
            "terms": [{"exps": list(e), "coef": c.to_json()} for e, c in Q.terms],
        }
    if isinstance(Q, OrthogonalSum):
        return {"kind": "orthogonal_sum", "parts": [form_to_json(p) for p in Q.parts]}
    if isinstance(Q, ScaledFamily):
        return {"kind": "scaled_family", "base": form_to_json(Q.base), "scalars": scalars_to_json(Q.scalars)}
    if isinstance(Q, CoupledDiagonal):
        return {
            "kind": "coupled_diagonal",
            "field": Q.field.to_json(),
            "m": Q.m,
            "scalars": scalars_to_json(Q.scalars),
            "coupling": Q.coupling.to_json(),
            "pairs": Q.pairs,
        }
    raise TypeError(type(Q))


def form_from_json(doc) -> FormLike:
    kind = doc.get("kind", "form")
    if kind == "form":
        field = Field.from_json(doc["field"])
        terms = [(t["exps"], algint_from_json(t["coef"], field)) for t in doc["terms"]]
        F = Form.from_terms(field, int(doc["m"]), int(doc["n"]), terms)
        if len(F.terms) != len(doc["terms"]):
            raise ValueError("duplicate or zero terms in form document")
        return F
    if kind == "orthogonal_sum":
        return OrthogonalSum(tuple(form_from_json(p) for p in doc["parts"]))
    if kind == "scaled_family":
        base = form_from_json(doc["base"])
        return ScaledFamily(base, scalars_from_json(doc["scalars"], base.field))
    if kind == "coupled_diagonal":
        field = Field.from_json(doc["field"])
        return CoupledDiagonal(field, int(doc["m"]), scalars_from_json(doc["scalars"], field),
                               algint_from_json(doc["coupling"], field), doc.get("pairs", "lt"))
    raise ValueError(f"unknown form kind {kind!r}")


def dumps(doc) -> str:
    """Deterministic JSON text."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def write_json(path: str, doc) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(doc))


def read_json(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
