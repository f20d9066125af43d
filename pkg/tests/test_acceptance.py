"""Acceptance gate.  Each test checks one criterion at its stated tolerance and
prints a single ``PASS``/``FAIL`` line (shown even without ``-s``).
"""

import itertools
import math
import random
import time
from fractions import Fraction

import pytest

from higherforms.construct_nf import NFConstructionParams, TargetSetNF, construct_excluding_nf, construct_universal
from higherforms.construct_z import check_admissible_z, construct_excluding_z, construct_QB_z, construct_small, InadmissibleSet, rank_bound_z
from higherforms.forms import Form
from higherforms.lattice_nf import class_reps_tp, compute_domain, floor_c_root, power_subring, reduce_to_F
from higherforms.repsearch import (
    brute_force_representations,
    dense_witness,
    enumerate_representations,
    represented_set,
    verify_exact,
)
from higherforms.ring import QQ, make_field
from higherforms.waring import choose_waring_params, decompose_z, g, WaringParams


@pytest.fixture
def verdict(capsys):
    def emit(name, ok, detail, started):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} {name}: {detail} [{time.perf_counter() - started:.1f}s]")
        assert ok, detail
    return emit


def coin_change(bound, m):
    best = [0] + [10**9] * bound
    for t in range(1, bound + 1):
        b = 1
        while b**m <= t:
            best[t] = min(best[t], best[t - b**m] + 1)
            b += 1
    return best


def test_waring_constants(verdict):
    t0 = time.perf_counter()
    consts = [g(2), g(3), g(4)] == [4, 9, 19]
    dp = coin_change(500, 4)
    bad = []
    for t in range(10**4 + 1):
        bases = decompose_z(t, 4, 19)
        if sum(b**4 for b in bases) != t or len(bases) > 19 or (t <= 500 and len(bases) != dp[t]):
            bad.append(t)
    elapsed = time.perf_counter() - t0
    verdict("waring-constants", consts and not bad and elapsed < 10,
            f"g(2..4)={[g(2), g(3), g(4)]}, decompositions t<=10^4 failing: {bad[:5]}", t0)


def test_small_form_threshold(verdict):
    t0 = time.perf_counter()
    results = {}
    for B in (1, 2, 5):
        Q = construct_small(B, 4)
        rep = [enumerate_representations(Q, t, mode="one") for t in range(1, B + 2)]
        assert all(r.exhaustive for r in rep)
        results[B] = [r.represented for r in rep] == [True] * B + [False]
    verdict("small-form-threshold", all(results.values()) and time.perf_counter() - t0 < 5,
            f"represents 1..B and not B+1 for B in {sorted(results)}: {results}", t0)


def test_norm_threshold_form(verdict):
    t0 = time.perf_counter()
    Q = construct_QB_z(2, 4)
    vals = represented_set(Q, 40)
    ok = Q.rank == 57 == 3 * g(4) and vals == {0} | set(range(3, 41))
    verdict("norm-threshold-form", ok and time.perf_counter() - t0 < 30,
            f"rank {Q.rank}, represented set to 40 is {{0}}+[3,40]: {vals == {0} | set(range(3, 41))}", t0)


def test_integer_exclusion(verdict):
    t0 = time.perf_counter()
    lines, ok = [], True
    for A in (set(), {2}, {2, 3}, {1, 16}):
        Q = construct_excluding_z(A, 4)
        diff = verify_exact(Q, lambda t, A=A: t.a not in A, 30)
        B = max(A, default=0)
        rank_ok = Q.rank < (B + 1) * (g(4) + 1) if A else Q.rank == g(4)
        ok &= diff.verdict == "pass" and rank_ok and rank_bound_z(A, 4) == (B + 1) * (g(4) + 1)
        lines.append(f"A={sorted(A)} rank={Q.rank} {diff.verdict}")
    try:
        construct_excluding_z({16}, 4)
        refused = None
    except InadmissibleSet as e:
        refused = e.witness
    ok &= refused == (1, 2) and not check_admissible_z({16}, 4)
    lines.append(f"A=[16] refused with witness {refused}")
    verdict("integer-exclusion", ok and time.perf_counter() - t0 < 120, "; ".join(lines), t0)


def random_totally_positive(K, rng, max_norm):
    w1, w2 = K.omega_embeddings
    while True:
        b = rng.randint(-800, 800)
        a_lo = math.floor(max(-b * w1, -b * w2))
        a = rng.randint(a_lo, a_lo + 2000)
        x = K(a, b)
        if x.is_totally_positive() and x.norm() <= max_norm:
            return x


def test_domain_reduction_bounds(verdict):
    t0 = time.perf_counter()
    rng = random.Random(20240601)
    violations, checked = [], 0
    for D in (2, 5):
        K = make_field(D)
        dom = compute_domain(K, 4)
        p, q = dom.c.numerator, dom.c.denominator
        for _ in range(500):
            beta = random_totally_positive(K, rng, 10**6)
            beta = beta * dom.eta ** rng.randint(0, 3)
            N = beta.norm()
            eps, red = reduce_to_F(beta, dom)
            assert red == beta * eps**4
            # (a) sigma_i(beta')^2 > 4 c^2 N(beta), both embeddings
            a_ok = (red * red * (q * q) - 4 * p * p * N).is_totally_positive()
            a_ok &= (red - floor_c_root(dom.c, N, 2)).is_totally_positive()
            # (b) N(beta' - n_X) > c^2 N(beta) with X = N/2
            n_X = floor_c_root(dom.c, Fraction(N, 2), 2)
            b_ok = (red - n_X).norm() * q * q > p * p * N
            checked += 1
            if not (a_ok and b_ok):
                violations.append((D, beta.coords))
    verdict("domain-reduction-bounds", not violations and time.perf_counter() - t0 < 30,
            f"{checked} reductions over D in (2,5), violations: {violations[:3]}", t0)


def residue_group(K, M):
    gens = {((K(a, b) ** 4).a % M, (K(a, b) ** 4).b % M) for a in range(M) for b in range(M)}
    group, frontier = {(0, 0)}, [(0, 0)]
    while frontier:
        x = frontier.pop()
        for gx in gens:
            y = ((x[0] + gx[0]) % M, (x[1] + gx[1]) % M)
            if y not in group:
                group.add(y)
                frontier.append(y)
    return group


def test_power_subring(verdict):
    t0 = time.perf_counter()
    K = make_field(2)
    psr2 = power_subring(K, 2)
    # squares mod 2: (a + b w)^2 = a^2 + 2b^2 + 2ab w, so b-coordinate even
    squares_mod2 = {((a * a + 2 * b * b) % 2, (2 * a * b) % 2) for a in range(2) for b in range(2)}
    non_member = not psr2.contains(K(3, 1)) and (3 % 2, 1 % 2) not in squares_mod2
    lines = [f"D=2 m=2 r={psr2.r}, 3+w non-member: {non_member}"]
    ok = psr2.r == 2 and non_member
    for D in (2, 5):
        KD = make_field(D)
        psr = power_subring(KD, 4)
        group = residue_group(KD, 24)
        pos = all(t.is_totally_positive() for t in psr.thetas)
        incong = all(((s - t).a % 24, (s - t).b % 24) not in group for s, t in itertools.combinations(psr.thetas, 2))
        index_ok = psr.r == 24 * 24 // len(group)
        ok &= pos and incong and index_ok
        lines.append(f"D={D} m=4 r={psr.r} positive={pos} incongruent={incong} index-matches-brute-force={index_ok}")
    verdict("power-subring", ok and time.perf_counter() - t0 < 60, "; ".join(lines), t0)


def test_conditional_universality(verdict):
    t0 = time.perf_counter()
    Cq, Lq = construct_universal(QQ, 4, NFConstructionParams(WaringParams(4, 19, 1)))
    q_ok = represented_set(Cq.form, 200) == set(range(201))
    K = make_field(5)
    wp, exceptions = choose_waring_params(K, 4, 100)
    C, L = construct_universal(K, 4, NFConstructionParams(wp, verify_bound=100, exceptions=tuple(e.element.coords for e in exceptions)))
    dom = compute_domain(K, 4)
    diff = verify_exact(C.form, lambda t: True, 100, dom=dom)
    missing = [x.coords for x in diff.false_negatives]
    # never a silent pass: either no gaps, or the exact list is reported
    ok = q_ok and diff.verdict in ("pass", "fail") and not diff.false_positives
    detail = (f"Q: L={Lq} rank={Cq.rank} universal to 200: {q_ok}; "
              f"D=5: G_hat={wp.G_hat} P_hat={wp.P_hat} L={L} rank={C.rank} "
              f"orbits to norm 100 checked={diff.checked}, unrepresented={missing}")
    verdict("conditional-universality", ok and not missing and time.perf_counter() - t0 < 600, detail, t0)


def test_nf_exclusion(verdict):
    t0 = time.perf_counter()
    K = make_field(2)
    wp, _ = choose_waring_params(K, 4, 100)
    A0 = TargetSetNF(K, [K(2, 1)])
    C = construct_excluding_nf(A0, 4, NFConstructionParams(wp, verify_bound=100))
    dom = compute_domain(K, 4)
    reps = A0.orbit_reps(dom)
    # soundness: no member of the excluded orbit is represented (norm <= 50 scan)
    excluded = [t for t in class_reps_tp(K, 4, 50, dom=dom) if t in reps]
    sound = all(enumerate_representations(C.form, t, mode="one").represented is False for t in excluded)
    sound &= enumerate_representations(C.form, K(2, 1) * dom.eta, mode="one").represented is False
    # coverage (conditional on the Waring parameters), plus soundness again over all of norm <= 50
    diff = verify_exact(C.form, lambda t: t == 0 or reduce_to_F(t, dom)[1] not in reps, 50, dom=dom)
    cover = not [x for x in diff.false_negatives if x.norm() <= 20]
    detail = (f"G_hat={wp.G_hat} rank={C.rank} excluded orbit represented: {not sound}; "
              f"diff to norm 50: fp={diff.false_positives} fn={diff.false_negatives} unresolved={diff.unresolved}; "
              f"coverage to norm 20 (conditional): {cover}")
    verdict("nf-exclusion", sound and not diff.false_positives and cover and time.perf_counter() - t0 < 600, detail, t0)


def random_epd_form(rng, K):
    m = rng.choice([2, 4])
    n = rng.randint(1, 4)
    pool = [K(1), K(2), K(3), K(5)]
    if not K.is_rational:
        pool += [K(2, 1), K(2, -1), K(3, 1), K(3, -2)]
    terms = {}
    for i in range(n):
        e = [0] * n
        e[i] = m
        terms[tuple(e)] = rng.choice(pool)
    if n >= 2 and m >= 4:
        for _ in range(rng.randint(0, 2)):
            i, j = rng.sample(range(n), 2)
            e = [0] * n
            e[i], e[j] = 2, m - 2
            terms[tuple(e)] = rng.choice(pool)
    Q = Form.from_terms(K, m, n, terms)
    assert Q.epd_certificate()
    return Q


def test_search_oracle_equivalence(verdict):
    t0 = time.perf_counter()
    rng = random.Random(1729)
    mismatches, compared = [], 0
    for K in (QQ, make_field(2)):
        targets = [t for t in class_reps_tp(K, 4, 50)] if not K.is_rational else [QQ(t) for t in range(51)]
        if not K.is_rational:
            targets += [t * K(3, 2) for t in targets[:6]]  # non-reduced orbit members
        for _ in range(25):
            Q = random_epd_form(rng, K)
            for t in rng.sample(targets, 3) + [K(0)]:
                got = {dense_witness(w, Q.n, K) for w in enumerate_representations(Q, t).witnesses}
                compared += 1
                if got != brute_force_representations(Q, t):
                    mismatches.append((K, Q.terms, t))
    verdict("search-oracle-equivalence", not mismatches and time.perf_counter() - t0 < 120,
            f"50 forms, {compared} targets compared, mismatches: {len(mismatches)}", t0)
