import pytest

from higherforms.construct_nf import (
    UNIVERSAL_CAVEAT,
    InadmissibleTargetSet,
    NFConstructionParams,
    TargetSetNF,
    admissibility_witness_nf,
    check_admissible_nf,
    construct_excluding_nf,
    construct_Q1,
    construct_QB_nf,
    construct_universal,
    universal_threshold,
)
from higherforms.lattice_nf import BudgetExceeded, compute_domain, power_subring, reduce_to_F
from higherforms.repsearch import enumerate_representations, represented_set, verify_exact
from higherforms.ring import QQ, make_field
from higherforms.waring import WaringParams


def params(G, m=4, **kw):
    return NFConstructionParams(WaringParams(m, G, 1), **kw)


def test_Q1_shapes():
    Q1 = construct_Q1(QQ, 4, power_subring(QQ, 4), params(19))
    assert Q1.rank == 20 and all(Q1.pure_coefficient(i) == 1 for i in range(20))
    K = make_field(2)
    Q1 = construct_Q1(K, 2, power_subring(K, 2), 3)
    assert Q1.rank == 2 + 3
    assert [Q1.pure_coefficient(i) for i in range(2)] == [K(1), K(2, 1)]


def test_rational_universal():
    C, L = construct_universal(QQ, 4, params(19))
    assert L == 6 and C.rank == 26
    assert C.provenance["caveats"] == [UNIVERSAL_CAVEAT]
    assert represented_set(C.form, 200) == set(range(201))


def test_rational_QB():
    p = params(19)
    C = construct_QB_nf(QQ, 4, 7, p)
    prov = C.provenance
    assert (prov["n"], prov["M_n"], prov["C"], prov["scalars"]) == (8, 22, 22, 15)
    assert represented_set(C.form, 21) == {0} | set(range(8, 22))
    with pytest.raises(ValueError):
        construct_QB_nf(QQ, 4, 6, p)


def test_universal_d5():
    K = make_field(5)
    C, L = construct_universal(K, 4, params(7))
    assert L == 439 and C.rank == 388
    dom = compute_domain(K, 4)
    diff = verify_exact(C.form, lambda t: True, 40, dom=dom)
    assert diff.verdict == "pass"


def test_threshold_uses_P_hat():
    K = make_field(2)
    dom, psr = compute_domain(K, 4), power_subring(K, 4)
    L1, M0 = universal_threshold(dom, psr, 1)
    assert (L1, M0) == (49054, 49054)
    assert universal_threshold(dom, psr, 100)[0] == L1  # c^-2 * 100 < M0
    L2, _ = universal_threshold(dom, psr, 10**4)
    assert L2 > L1


def test_admissibility_examples():
    K = make_field(2)
    dom = compute_domain(K, 4)
    assert check_admissible_nf(TargetSetNF(K, [K(2, 1)]), 4, dom)
    assert check_admissible_nf(TargetSetNF(K, []), 4, dom)
    w = admissibility_witness_nf(TargetSetNF(K, [K(16)]), 4, dom)
    assert w is not None
    a, b = w
    assert a * b**4 == K(16) and abs(b.norm()) > 1
    assert not check_admissible_nf(TargetSetNF(K, [K(4)]), 4, dom)  # 4 = 1 * (sqrt 2)^4
    assert check_admissible_nf(TargetSetNF(K, [K(1), K(4)]), 4, dom)
    assert check_admissible_nf(TargetSetNF(K, [K(1), K(2)]), 4, dom)
    with pytest.raises(ValueError):
        TargetSetNF(K, [K(1, 1)])


def test_target_set_is_unit_orbit_closed():
    K = make_field(2)
    dom = compute_domain(K, 4)
    A0 = TargetSetNF(K, [K(2, 1)])
    assert A0.contains(K(2, 1) * dom.eta**2, dom)
    assert not A0.contains(K(2, -1), dom)


def test_exclusion_d2_small_norms():
    K = make_field(2)
    A0 = TargetSetNF(K, [K(2, 1)])
    C = construct_excluding_nf(A0, 4, params(4))
    prov = C.provenance
    assert (prov["L"], prov["B"], prov["mu"]) == (49054, 49055, 222)
    assert C.form.epd_certificate()
    dom = compute_domain(K, 4)
    reps = A0.orbit_reps(dom)
    diff = verify_exact(C.form, lambda t: t == 0 or reduce_to_F(t, dom)[1] not in reps, 20, dom=dom)
    assert diff.verdict == "pass", diff


def test_witnesses_move_along_unit_orbits():
    K = make_field(5)
    C, _ = construct_universal(K, 4, params(7))
    u = K.fundamental_unit
    for t in (K(3), K(4, 1), K(7, -2)):
        rep = enumerate_representations(C.form, t, mode="one")
        assert rep.represented
        (w,) = rep.witnesses
        assert C.form.evaluate(dict(w)) == t
        assert C.form.evaluate({i: x * u for i, x in w}) == t * u**4


def test_refusals():
    K = make_field(2)
    with pytest.raises(InadmissibleTargetSet):
        construct_excluding_nf(TargetSetNF(K, [K(16)]), 4, params(4))
    with pytest.raises(BudgetExceeded):
        construct_universal(K, 4, params(4, max_orbits=1000))
    with pytest.raises(ValueError):
        construct_universal(K, 6, params(4))  # parameters chosen for m=4


def test_params_round_trip():
    p = params(5, verify_bound=60, layout="arc", exceptions=((3, 1),))
    assert NFConstructionParams.from_json(p.to_json()) == p
