"""Acceptance criteria, one test per criterion.

Each criterion is a plain function returning ``(ok, detail)``; the test
wrapper records a one-line verdict that ``conftest.py`` prints in the
terminal summary. Run this file directly to print the lines without pytest.
"""

import itertools
import random
import time

import pytest

from aqlam import linalg as la
from aqlam.aq import (
    AqDescriptor,
    PeriodStructure,
    RealFormDescriptor,
    ThetaParabolic,
    binomial_multiplicity,
    random_period,
    random_rational_invertible,
    range_labels,
    ratio,
    rho_l,
    rho_u,
    s_q,
    same_double_coset,
    scale,
    vz_cohomology_poincare,
)
from aqlam.characters import (
    CharacterElement,
    LocalizedCharacter,
    c_q,
    conjugate_levi,
    euler_character_H_q,
    exterior_u_dual_oracle,
    full_character,
    galois_twist_character,
    tensor_decomposition,
    weyl_denominator,
)
from aqlam.descent import (
    INF,
    DescentError,
    bilinear_form_symmetry,
    commutant,
    descend_if_possible,
    descent_kind,
    hilbert_symbol,
    hilbert_symbol_oracle,
    local_global_check,
    multiplicity_degree_arithmetic,
    relevant_places,
    restrict_scalars,
    verify_model,
)
from aqlam.fs import classify_admissible_forms, fs_indicator_compact, fs_indicator_oracle, load_golden
from aqlam.galois import delta_tau, diagram_automorphism
from aqlam.lattice import parse_form
from aqlam.qfield import QuadraticField
from aqlam.roots import build_root_system, dominant_weights_up_to_dimension, simple_types
from aqlam.suite import curated_suite

RESULTS = {}


def _subsets(r):
    return [frozenset(s) for k in range(r + 1) for s in itertools.combinations(range(r), k)]


def _key(row):
    return (row["series"], row["rank"], row["form_label"])


# 1 -------------------------------------------------------------------------------


def classification_reproduction():
    t0 = time.perf_counter()
    computed = classify_admissible_forms(8)
    elapsed = time.perf_counter() - t0
    golden = load_golden("admissible_forms.jsonl")
    gmap = {_key(r): r for r in golden}
    cmap = {_key(r): r for r in computed}
    bad = sorted(k for k in gmap.keys() | cmap.keys() if gmap.get(k) != cmap.get(k))
    ok = not bad and [_key(r) for r in golden] == [_key(r) for r in computed] and elapsed < 60
    labels = ", ".join(f"{s}{n} {f}" for s, n, f in bad)
    detail = f"{len(computed)} rows, {len(bad)} divergent" + (f" ({labels})" if bad else "") + f", {elapsed:.1f}s"
    return ok, detail


# 2 -------------------------------------------------------------------------------


def fs_oracle_equivalence():
    t0 = time.perf_counter()
    checked, mismatches = 0, []
    for t in simple_types(4):
        rs = build_root_system(t)
        form = parse_form(rs, "sc")
        for lam in dominant_weights_up_to_dimension(rs, 200):
            checked += 1
            a = fs_indicator_compact(form, lam).value
            b = fs_indicator_oracle(form, lam).value
            if a != b:
                mismatches.append((str(t), lam, a, b))
    elapsed = time.perf_counter() - t0
    ok = not mismatches and elapsed < 300
    return ok, f"{checked} weights, {len(mismatches)} mismatches, {elapsed:.1f}s"


# 3 -------------------------------------------------------------------------------


def hilbert_product_formula():
    values = [x for x in range(-50, 51) if x]
    product_fail = parity_fail = oracle_fail = 0
    pairs = 0
    for a in values:
        for b in values:
            pairs += 1
            prod = 1
            for v in relevant_places(a, b):
                prod *= hilbert_symbol(a, b, v)
            product_fail += prod != 1
            parity_fail += not local_global_check(a, b)["parity_ok"]
            oracle_fail += hilbert_symbol(a, b, 2) != hilbert_symbol_oracle(a, b, 2, 8)
    ok = product_fail == parity_fail == oracle_fail == 0
    return ok, f"{pairs} pairs: product {product_fail}, 2-adic oracle {oracle_fail}, parity {parity_fail} failures"


# 4 -------------------------------------------------------------------------------


def descent_trichotomy():
    suite = curated_suite()
    counts = {k: sum(e.kind == k for e in suite) for k in ("real", "complex", "quaternionic")}
    wrong = []
    for e in suite:
        dim = len(commutant(restrict_scalars(e.module)))
        expected_dim = {"real": 4, "complex": 2, "quaternionic": 4}[e.kind]
        ind, _ = descent_kind(e.module)
        res = descend_if_possible(e.module)
        agree = res.verdict == e.kind and ind == {"real": 1, "complex": 0, "quaternionic": -1}[e.kind]
        agree = agree and dim == expected_dim
        if e.kind == "real":
            agree = agree and res.model is not None and res.model.field is None
            agree = agree and la.is_invertible(verify_model(res.model, e.module))
        else:
            agree = agree and res.model is None
        if not agree:
            wrong.append(e.name)
    ok = len(suite) >= 30 and min(counts.values()) >= 10 and not wrong
    return ok, f"{len(suite)} modules {counts}, {len(wrong)} disagreements"


# 5 -------------------------------------------------------------------------------


def bilinear_form_correspondence():
    suite = curated_suite()
    checked, wrong = 0, []
    for e in suite:
        sym = bilinear_form_symmetry(e.module)
        if e.kind == "complex":
            if sym != "none":
                wrong.append(e.name)
            continue
        checked += 1
        _, alg = descent_kind(e.module)
        expected = "antisymmetric" if alg.kind == "quaternion" else "symmetric"
        if sym != expected:
            wrong.append(e.name)
    return not wrong and checked >= 20, f"{checked} self-dual modules, {len(wrong)} disagreements"


# 6 -------------------------------------------------------------------------------


def character_identities():
    checked = 0
    failures = []
    types = simple_types(3)
    for t in types:
        rs = build_root_system(t)
        one = CharacterElement.one(rs.rank)
        wb = weyl_denominator(rs, frozenset())
        for lam in dominant_weights_up_to_dimension(rs, 300):
            ch = full_character(rs, lam)
            borel = c_q(rs, frozenset(), lam)
            if borel.numerator != ch * wb or borel != LocalizedCharacter(ch, one):
                failures.append((str(t), lam, "weyl"))
            for levi in _subsets(rs.rank):
                checked += 1
                if euler_character_H_q(rs, levi, lam) != exterior_u_dual_oracle(rs, levi, lam):
                    failures.append((str(t), lam, sorted(levi)))
    rng = random.Random(7)
    pairs = 0
    for _ in range(100):
        t = rng.choice(["A1", "A2", "B2", "G2", "A3"])
        rs = build_root_system(t)
        levi = rng.choice(_subsets(rs.rank))
        lam = tuple(rng.randint(0, 2) for _ in range(rs.rank))
        mu = tuple(rng.randint(0, 1) for _ in range(rs.rank))
        lhs = c_q(rs, levi, lam) * c_q(rs, levi, mu)
        rhs = None
        for nu, m in tensor_decomposition(rs, lam, mu).items():
            term = c_q(rs, levi, nu)
            term = LocalizedCharacter(term.numerator * m, term.denominator)
            rhs = term if rhs is None else rhs + term
        pairs += 1
        if lhs != rhs:
            failures.append((t, lam, mu, "product"))
    return not failures, f"{checked} (weight, parabolic) Euler checks, {pairs} products, {len(failures)} failures"


# 7 -------------------------------------------------------------------------------


def galois_equivariance():
    rng = random.Random(11)
    failures, instances = [], 0
    for t in ("A2", "A3", "D4"):
        rs = build_root_system(t)
        for _ in range(50):
            levi = rng.choice(_subsets(rs.rank))
            lam = tuple(rng.randint(0, 2) for _ in range(rs.rank))
            instances += 1
            lhs = galois_twist_character(rs, c_q(rs, levi, lam))
            rhs = c_q(rs, conjugate_levi(rs, levi), delta_tau(rs, lam))
            if lhs != rhs:
                failures.append((t, sorted(levi), lam))
    types = 0
    for t in simple_types(8):
        rs = build_root_system(t)
        types += 1
        sigma = diagram_automorphism(rs)
        if delta_tau(rs, rs.rho) != tuple(rs.rho) or any(sigma[sigma[i]] != i for i in range(rs.rank)):
            failures.append((str(t), "rho"))
        for i in range(rs.rank):
            e = tuple(int(i == j) for j in range(rs.rank))
            if delta_tau(rs, delta_tau(rs, e)) != e:
                failures.append((str(t), i))
    return not failures, f"{instances} squares, {types} types, {len(failures)} failures"


# 8 -------------------------------------------------------------------------------


def _equal_rank_borels(max_rank):
    for t in simple_types(max_rank):
        r = t.rank
        for k in range(1, r + 1):
            for marks in itertools.combinations(range(r), k):
                yield AqDescriptor(RealFormDescriptor.equal_rank(t, marks), ThetaParabolic(), (0,) * r)


def _exterior_pattern_holds(poly):
    nz = [q for q, c in enumerate(poly) if c]
    lo, hi = nz[0], nz[-1]
    body = poly[lo : hi + 1]
    ok = body == body[::-1] and body[0] == body[-1] == 1 and sum(body) == 2 ** (hi - lo)
    return ok and all(poly[q] == binomial_multiplicity(lo, hi, q) for q in range(len(poly)))


def aq_invariants():
    failures = []
    parabolics = 0
    for t in simple_types(6):
        rs = build_root_system(t)
        for levi in _subsets(rs.rank):
            parabolics += 1
            for form in (RealFormDescriptor.compact(t), RealFormDescriptor.equal_rank(t, [0])):
                d = AqDescriptor(form, ThetaParabolic(levi), (0,) * rs.rank)
                if tuple(a + b for a, b in zip(rho_u(d), rho_l(d))) != tuple(rs.rho):
                    failures.append((str(t), sorted(levi), "rho"))
                if not {"weakly_good", "weakly_fair"} <= range_labels(d):
                    failures.append((str(t), sorted(levi), form.kind, "lambda=0"))
    for t in simple_types(3):
        r = t.rank
        for levi in _subsets(r):
            d = AqDescriptor(RealFormDescriptor.complex_group(t), ThetaParabolic(levi), (0,) * (2 * r))
            if not {"weakly_good", "weakly_fair"} <= range_labels(d):
                failures.append((str(t), sorted(levi), "complex", "lambda=0"))
    patterns = 0
    exterior = list(_equal_rank_borels(6))
    exterior += [AqDescriptor(RealFormDescriptor.complex_group(t), ThetaParabolic(), (0,) * (2 * t.rank))
                 for t in simple_types(4)]
    for n in range(2, 9):
        for cd in (0, 1):
            for form in (RealFormDescriptor.gl_real(n, cd), RealFormDescriptor.gl_complex(n, cd)):
                exterior.append(AqDescriptor(form, ThetaParabolic(), (0,) * (n - 1) * (1 + (form.kind == "gl_n_complex"))))
    for d in exterior:
        patterns += 1
        poly = vz_cohomology_poincare(d)
        if not _exterior_pattern_holds(poly) or poly.index(1) != s_q(d):
            failures.append((d.form.kind, str(d.form.cartan_type or d.form.n), "poincare"))
    return not failures, f"{parabolics} parabolics, {patterns} exterior-pattern descriptors, {len(failures)} failures"


# 9 -------------------------------------------------------------------------------


def period_calculus():
    F = QuadraticField(-1)
    rng = random.Random(3)
    failures = 0
    for k in range(100):
        m = 1 + k % 4
        P, P0 = random_period(F, m, rng), random_period(F, m, rng)
        c = F(rng.randint(-4, 4), rng.randint(1, 4))
        if scale(P, c).matrix != la.scalar(c, P.matrix):
            failures += 1
        A, B = random_rational_invertible(m, rng), random_rational_invertible(m, rng)
        Q = PeriodStructure(la.matmul(la.matmul(A, P.matrix), B))
        if not same_double_coset(P, Q) or not same_double_coset(Q, P):
            failures += 1
        if ratio(scale(P, c), scale(P0, c)) != ratio(P, P0):
            failures += 1
    return failures == 0, f"100 instances over Q(i), {failures} failures"


# 10 ------------------------------------------------------------------------------


def multiplicity_arithmetic():
    failures = checked = 0
    for m in range(1, 13):
        for c in range(1, 13):
            for n in range(1, 13):
                for r in range(1, 4):
                    checked += 1
                    try:
                        out = multiplicity_degree_arithmetic(m, c, n, r)
                    except DescentError:
                        failures += n * c == m
                        continue
                    if n * c != m or out["isotypic_length"] % out["splitting_field_degree"]:
                        failures += 1
    return failures == 0, f"{checked} triples, {failures} failures"


CRITERIA = [
    (1, "classification reproduction", classification_reproduction),
    (2, "FS oracle equivalence", fs_oracle_equivalence),
    (3, "Hilbert product formula", hilbert_product_formula),
    (4, "descent trichotomy", descent_trichotomy),
    (5, "bilinear-form correspondence", bilinear_form_correspondence),
    (6, "character identities", character_identities),
    (7, "Galois equivariance", galois_equivariance),
    (8, "A_q invariants", aq_invariants),
    (9, "period calculus", period_calculus),
    (10, "multiplicity arithmetic", multiplicity_arithmetic),
]


def run_criterion(num, name, fn):
    ok, detail = fn()
    line = f"criterion {num:2d} {name}: {'PASS' if ok else 'FAIL'} ({detail})"
    RESULTS[num] = line
    print(line)
    return ok, line


@pytest.mark.parametrize("num,name,fn", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(num, name, fn):
    ok, line = run_criterion(num, name, fn)
    assert ok, line


if __name__ == "__main__":
    for num, name, fn in CRITERIA:
        run_criterion(num, name, fn)
