import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from aqlam import linalg as la
from aqlam.aq import (
    AqDescriptor,
    AqError,
    CASES_SHA256,
    PeriodStructure,
    RealFormDescriptor,
    ThetaParabolic,
    aq_report,
    binomial_multiplicity,
    bottom_layer,
    case_list_checksum,
    cuspidal_multiplicity,
    field_of_definition,
    infinitesimal_character,
    load_case_list,
    random_period,
    random_rational_invertible,
    range_check,
    range_labels,
    ratio,
    rho_l,
    rho_u,
    s_q,
    same_double_coset,
    scale,
    vz_cohomology_poincare,
)
from aqlam.qfield import QuadraticField


def borel(form, lam=None):
    return AqDescriptor(form, ThetaParabolic.borel(), tuple(lam or (0,) * form.rs.rank))


def su(p, q):
    return RealFormDescriptor.equal_rank(f"A{p + q - 1}", [p - 1])


def degrees(poly):
    nz = [k for k, c in enumerate(poly) if c]
    return nz[0], nz[-1]


def test_su11_discrete_series():
    d = borel(su(1, 1))
    assert s_q(d) == 1
    assert vz_cohomology_poincare(d) == [0, 1]
    assert range_check(d) == "good"
    fd = field_of_definition(d)
    assert fd.verdict == "F'"
    assert any("not self-dual" in line for line in fd.rule_trace)


def test_complex_sl2():
    d = borel(RealFormDescriptor.complex_group("A1"))
    assert s_q(d) == 1
    assert vz_cohomology_poincare(d) == [0, 1, 1]
    fd = field_of_definition(d)
    assert fd.verdict == "F" and fd.cases == ["vi"]


@pytest.mark.parametrize("n", range(2, 8))
def test_gl_n(n):
    real = borel(RealFormDescriptor.gl_real(n))
    cplx = borel(RealFormDescriptor.gl_complex(n))
    assert s_q(real) == n * n // 4
    assert s_q(cplx) == n * (n - 1) // 2
    for d, width in ((real, (n + 1) // 2), (cplx, n)):
        poly = vz_cohomology_poincare(d)
        lo, hi = degrees(poly)
        assert hi - lo == width - 1
        assert [poly[q] for q in range(lo, hi + 1)] == [binomial_multiplicity(lo, hi, q) for q in range(lo, hi + 1)]
        assert field_of_definition(d).verdict == "F"
    assert degrees(vz_cohomology_poincare(borel(RealFormDescriptor.gl_real(n, 0))))[1] == n * n // 4 + (n + 1) // 2


def test_case_list_examples():
    d = borel(RealFormDescriptor.equal_rank("C3", [0]))
    fd = field_of_definition(d)
    assert fd.verdict == "F" and fd.cases == ["iii"]
    # SO(2,1): direct case even though the bottom layer of K^0 is not self-dual
    so21 = borel(RealFormDescriptor.equal_rank("A1", [0], "ad", group_label="SO(2,1)"))
    fd = field_of_definition(so21)
    assert fd.verdict == "F"
    assert any("component group" in line for line in fd.rule_trace)
    assert field_of_definition(borel(RealFormDescriptor.complex_group("A2"))).verdict == "undecided"


def test_semi_admissible_flag():
    form = RealFormDescriptor.equal_rank("A3", [1], group_label="U(p,q)")
    d = AqDescriptor(form, ThetaParabolic(frozenset({0, 2})), (0, 0, 0))
    out = {sa: field_of_definition(d, {"semi_admissible": sa, "selfdual": True}) for sa in (None, False, True)}
    assert {k: v.verdict for k, v in out.items()} == {None: "undecided", False: "undecided", True: "F"}
    assert out[None].cases == ["ii"]
    # without an applicable case the verdict stays open
    bare = AqDescriptor(RealFormDescriptor.equal_rank("A3", [1]), d.parabolic, d.lam)
    assert field_of_definition(bare, {"semi_admissible": True, "selfdual": True}).verdict == "undecided"


def test_translation_step():
    form = su(1, 2)
    assert field_of_definition(borel(form, (1, 1))).verdict in ("F", "F'")
    half = borel(form, (Fraction(1, 2), 0))
    assert field_of_definition(half).verdict == "undecided"
    # omega_1 is not fixed by the Galois action of A2
    assert field_of_definition(borel(RealFormDescriptor.compact("A2"), (1, 0))).verdict == "F'"
    assert field_of_definition(borel(RealFormDescriptor.compact("A2"), (1, 1))).verdict == "F"


def test_lambda_zero_ranges_and_infinitesimal_character():
    d = AqDescriptor(su(2, 1), ThetaParabolic(frozenset({0})), (0, 0))
    assert {"weakly_good", "weakly_fair"} <= range_labels(d)
    assert infinitesimal_character(d) == d.form.rs.dominant_rep(rho_u(d))


def test_descriptor_validation():
    with pytest.raises(AqError):
        AqDescriptor(su(1, 2), ThetaParabolic(frozenset({0})), (1, 0))
    with pytest.raises(AqError):
        AqDescriptor(su(1, 2), ThetaParabolic(), (1,))
    with pytest.raises(AqError):
        AqDescriptor(RealFormDescriptor.gl_real(3), ThetaParabolic(frozenset({0})), (0, 0))
    with pytest.raises(AqError):
        RealFormDescriptor.equal_rank("A2", [5])
    with pytest.raises(AqError):
        RealFormDescriptor("split")


def test_from_dict_round_trip():
    d = AqDescriptor.from_dict({"cartan_type": "B2", "form_kind": "equal_rank_inner", "noncompact_marks": [1],
                                "levi_subset": [], "lambda_coords": [1, 0]})
    assert d.form.marks == frozenset({1}) and d.lam == (1, 0)
    rep = aq_report(d)
    assert rep["S_q"] == s_q(d) and rep["poincare_polynomial"] == vz_cohomology_poincare(d)


def test_case_list_checksum():
    assert case_list_checksum() == CASES_SHA256
    names = [c["case"] for c in load_case_list()["cases"]]
    assert names == ["i", "ii", "iii", "iv", "v", "vi", "vii", "viii"]


def test_cuspidal_multiplicity():
    recs = [([0, 1, 1], 2), ({3: 1}, 5)]
    assert {q: m for q, m in cuspidal_multiplicity(recs).items() if m} == {1: 2, 2: 2, 3: 5}
    with pytest.raises(AqError):
        cuspidal_multiplicity([([1], -1)])
    assert binomial_multiplicity(2, 4, 3) == 2 and binomial_multiplicity(2, 4, 5) == 0


# -- properties over random descriptors ---------------------------------------

TYPES = ["A1", "A2", "A3", "B2", "B3", "C3", "G2", "D4", "A2xA1"]


@st.composite
def descriptors(draw, kinds=("compact", "equal_rank_inner", "complex")):
    kind = draw(st.sampled_from(kinds))
    t = draw(st.sampled_from(TYPES if kind != "complex" else ["A1", "A2", "B2", "G2"]))
    if kind == "compact":
        form = RealFormDescriptor.compact(t)
    elif kind == "complex":
        form = RealFormDescriptor.complex_group(t)
    else:
        r = form_rank(t)
        marks = draw(st.sets(st.integers(0, r - 1), min_size=1, max_size=r))
        form = RealFormDescriptor.equal_rank(t, marks)
    r = form.base_rs.rank
    levi = draw(st.sets(st.integers(0, r - 1), max_size=r))
    full = r * (2 if kind == "complex" else 1)
    lam = []
    for i in range(full):
        lam.append(0 if i % r in levi else draw(st.integers(-2, 3)))
    return AqDescriptor(form, ThetaParabolic(frozenset(levi)), tuple(lam))


def form_rank(t):
    from aqlam.roots import CartanType

    return CartanType.parse(t).rank


@settings(max_examples=80, deadline=None)
@given(descriptors())
def test_rho_decomposition_and_lambda_zero(d):
    rs = d.form.rs
    assert tuple(a + b for a, b in zip(rho_u(d), rho_l(d))) == tuple(rs.rho)
    zero = AqDescriptor(d.form, d.parabolic, (0,) * rs.rank)
    assert {"weakly_good", "weakly_fair"} <= range_labels(zero)


@settings(max_examples=80, deadline=None)
@given(descriptors(("equal_rank_inner", "complex")))
def test_poincare_palindromic_and_degree_sum(d):
    poly = vz_cohomology_poincare(d, include_center=True)
    lo, hi = degrees(poly)
    body = poly[lo : hi + 1]
    assert body == body[::-1]
    assert body[0] == body[-1] == 1
    assert lo == s_q(d)
    assert lo + hi == d.form.symmetric_space_dim()


@settings(max_examples=60, deadline=None)
@given(descriptors(("equal_rank_inner",)))
def test_equal_rank_borel_is_a_point(d):
    b = AqDescriptor(d.form, ThetaParabolic(), (0,) * d.form.rs.rank)
    poly = vz_cohomology_poincare(b)
    assert 2 * s_q(b) == d.form.symmetric_space_dim()
    assert poly == [binomial_multiplicity(s_q(b), s_q(b), q) for q in range(len(poly))]


@settings(max_examples=60, deadline=None)
@given(descriptors(("complex",)))
def test_complex_exterior_pattern(d):
    poly = vz_cohomology_poincare(AqDescriptor(d.form, ThetaParabolic(), (0,) * d.form.rs.rank))
    lo, hi = degrees(poly)
    assert sum(poly) == 2 ** (hi - lo)
    assert poly[lo : hi + 1] == [binomial_multiplicity(lo, hi, q) for q in range(lo, hi + 1)]


@pytest.mark.parametrize("p,q", [(1, 1), (1, 2), (2, 1), (1, 3), (2, 2), (3, 1)])
def test_su_pq_borel_degree(p, q):
    d = borel(su(p, q))
    assert s_q(d) == p * q
    assert d.form.symmetric_space_dim() == 2 * p * q


@settings(max_examples=60, deadline=None)
@given(descriptors())
def test_galois_consistency(d):
    c = d.conjugate()
    assert s_q(c) == s_q(d)
    assert range_check(c) == range_check(d)
    assert vz_cohomology_poincare(c) == vz_cohomology_poincare(d)
    rs = d.form.rs
    assert infinitesimal_character(c) == rs.dominant_rep(d.form.galois(infinitesimal_character(d)))
    assert field_of_definition(c).verdict == field_of_definition(d).verdict
    assert c.conjugate() == d


# -- periods --------------------------------------------------------------------


@pytest.mark.parametrize("m", [1, 2, 3])
def test_period_calculus(m):
    F = QuadraticField(-1)
    rng = random.Random(m)
    for _ in range(10):
        P, P0 = random_period(F, m, rng), random_period(F, m, rng)
        c = F(rng.randint(1, 5), rng.randint(-5, 5))
        assert scale(P, c).matrix == la.scalar(c, P.matrix)
        A, B = random_rational_invertible(m, rng), random_rational_invertible(m, rng)
        Q = PeriodStructure(la.matmul(la.matmul(A, P.matrix), B))
        assert same_double_coset(P, Q)
        assert ratio(scale(P, c), scale(P0, c)) == ratio(P, P0)


def test_double_coset_rejects():
    F = QuadraticField(-1)
    P = PeriodStructure([[F.one]])
    Q = PeriodStructure([[F.gen]])
    assert not same_double_coset(P, Q)
    assert same_double_coset(P, PeriodStructure([[F(3)]]))
    with pytest.raises(AqError):
        PeriodStructure([[F.zero]])
