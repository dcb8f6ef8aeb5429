import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf
from hypothesis import given, settings
from hypothesis import strategies as st

from aqlam.lattice import (
    LatticeError,
    class_of,
    expected_center_order,
    isogeny_forms,
    parse_form,
    smith_normal_form,
    weight_mod_root_lattice,
)
from aqlam.roots import build_root_system, simple_types


def _matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_smith_normal_form(A):
    U, D, V = smith_normal_form(A)
    assert _matmul(_matmul(U, A), V) == D
    diag = [D[i][i] for i in range(len(A))]
    assert all(D[i][j] == 0 for i in range(len(A)) for j in range(len(A)) if i != j)
    nonzero = [d for d in diag if d]
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    assert abs(sympy.Matrix(U).det()) == 1 and abs(sympy.Matrix(V).det()) == 1
    # invariant factors agree with sympy
    ref = sympy_snf(sympy.Matrix(A))
    assert sorted(abs(d) for d in diag) == sorted(abs(ref[i, i]) for i in range(len(A)))


def test_quotient_examples():
    assert weight_mod_root_lattice(build_root_system("A1")).invariant_factors == (2,)
    assert weight_mod_root_lattice(build_root_system("D4")).invariant_factors == (2, 2)
    assert weight_mod_root_lattice(build_root_system("E8")).order == 1


@pytest.mark.parametrize("t", simple_types(8), ids=str)
def test_center_orders(t):
    (series, n), = t.factors
    assert weight_mod_root_lattice(build_root_system(t)).order == expected_center_order(series, n)


def test_class_of():
    rs = build_root_system("A1")
    assert class_of(rs, (2,)) == (0,)
    assert class_of(rs, (1,)) != (0,)
    for t in ("B3", "D5", "E6", "G2"):
        rs = build_root_system(t)
        ident = weight_mod_root_lattice(rs).identity()
        assert all(class_of(rs, a) == ident for a in rs.positive_roots)
    for n in (4, 6, 8):
        rs = build_root_system(f"D{n}")
        g = weight_mod_root_lattice(rs)
        e = lambda i: tuple(int(j == i) for j in range(n))  # noqa: E731
        assert class_of(rs, e(0)) == g.add(class_of(rs, e(n - 2)), class_of(rs, e(n - 1)))


def test_forms():
    rs = build_root_system("A2")
    ad, sc = parse_form(rs, "ad"), parse_form(rs, "sc")
    assert ad.contains((1, 1)) and not ad.contains((1, 0))
    assert sc.contains((1, 0)) and sc.contains((0, 1))
    rs = build_root_system("D6")
    so = parse_form(rs, "SO(2n)")
    assert so.contains((1, 0, 0, 0, 0, 0)) and not so.contains((0, 0, 0, 0, 0, 1))
    assert [f.label for f in isogeny_forms(build_root_system("D4"))] == ["ad", "SO(2n)", "half-spin", "half-spin'", "sc"]
    assert {f.label for f in isogeny_forms(build_root_system("A5"))} == {"ad", "cover(2)", "cover(3)", "sc"}
    with pytest.raises(LatticeError):
        parse_form(build_root_system("B3"), "SO(2n)")


def test_explicit_generators():
    rs = build_root_system("A3")
    form = parse_form(rs, [(0, 1, 0)])
    assert form.order == 2 and form.label == "cover(2)"
