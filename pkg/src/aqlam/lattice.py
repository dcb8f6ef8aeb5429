"""Weight lattice modulo root lattice, and isogeny forms as its subgroups."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd

from .roots import RootSystem, build_root_system


class LatticeError(ValueError):
    pass


def smith_normal_form(A):
    """Return ``(U, D, V)`` with ``U A V = D`` diagonal, ``d_i | d_{i+1}``, ``d_i >= 0``.

    ``U`` and ``V`` are unimodular integer matrices (lists of lists).
    """
    m, n = len(A), len(A[0]) if A else 0
    D = [list(map(int, row)) for row in A]
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):  # row_dst += k * row_src
        D[dst] = [a + k * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, k):
        for row in D:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]

    for t in range(min(m, n)):
        while True:
            nz = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not nz:
                return U, D, V
            _, i, j = min(nz)
            swap_rows(t, i)
            swap_cols(t, j)
            p = D[t][t]
            clean = True
            for i in range(t + 1, m):
                q = D[i][t] // p
                if q:
                    add_row(t, i, -q)
                if D[i][t]:
                    clean = False
            for j in range(t + 1, n):
                q = D[t][j] // p
                if q:
                    add_col(t, j, -q)
                if D[t][j]:
                    clean = False
            if not clean:
                continue
            # enforce divisibility of the remaining block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % p), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return U, D, V


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """``Z/d_1 x ... x Z/d_k`` presented as a quotient of the weight lattice.

    ``projection`` is the integer matrix ``V`` restricted to the nontrivial
    columns: the class of ``lam`` is ``(lam . V[:, j]) mod d_j``.
    """

    invariant_factors: tuple
    projection: tuple  # rows indexed by weight coordinates
    generators: tuple  # weights whose classes are the standard generators

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    def identity(self) -> tuple:
        return (0,) * len(self.invariant_factors)

    def add(self, x, y) -> tuple:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.invariant_factors))

    def neg(self, x) -> tuple:
        return tuple((-a) % d for a, d in zip(x, self.invariant_factors))

    def scale(self, k: int, x) -> tuple:
        return tuple((k * a) % d for a, d in zip(x, self.invariant_factors))

    def elements(self) -> list:
        return [tuple(e) for e in product(*(range(d) for d in self.invariant_factors))]

    def element_order(self, x) -> int:
        k, y = 1, x
        while y != self.identity():
            y = self.add(y, x)
            k += 1
        return k

    def span(self, gens) -> frozenset:
        out = {self.identity()}
        frontier = [self.identity()]
        gens = [tuple(g) for g in gens]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.add(x, g)
                    if y not in out:
                        out.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(out)

    def subgroups(self) -> list:
        """All subgroups, as frozensets of elements, sorted by (order, elements)."""
        elems = self.elements()
        found = {frozenset([self.identity()])}
        changed = True
        while changed:
            changed = False
            for H in list(found):
                for g in elems:
                    if g in H:
                        continue
                    K = self.span(list(H) + [g])
                    if K not in found:
                        found.add(K)
                        changed = True
        return sorted(found, key=lambda H: (len(H), sorted(H)))


_QUOTIENTS: dict = {}


def weight_mod_root_lattice(rs: RootSystem) -> FiniteAbelianGroup:
    """Smith normal form presentation of the weight lattice modulo the root lattice."""
    key = rs.cartan_type
    if key in _QUOTIENTS:
        return _QUOTIENTS[key]
    U, D, V = smith_normal_form(rs.cartan_matrix)
    n = rs.rank
    cols = [j for j in range(n) if D[j][j] != 1]
    factors = tuple(D[j][j] for j in cols)
    if any(d == 0 for d in factors):
        raise LatticeError("Cartan matrix is singular")
    proj = tuple(tuple(V[i][j] for j in cols) for i in range(n))
    # representatives: smallest fundamental weights hitting each generator
    group = FiniteAbelianGroup(factors, proj, ())
    gens = []
    for k in range(len(cols)):
        target = tuple(int(i == k) for i in range(len(cols)))
        rep = _find_representative(rs, group, target)
        gens.append(rep)
    group = FiniteAbelianGroup(factors, proj, tuple(gens))
    _QUOTIENTS[key] = group
    return group


def _raw_class(group: FiniteAbelianGroup, lam) -> tuple:
    k = len(group.invariant_factors)
    return tuple(
        sum(int(lam[i]) * group.projection[i][j] for i in range(len(lam))) % group.invariant_factors[j] for j in range(k)
    )


def _find_representative(rs: RootSystem, group: FiniteAbelianGroup, target):
    n = rs.rank
    for total in range(0, 2 * n + 2):
        for coords in _compositions(total, n):
            if _raw_class(group, coords) == target:
                return coords
    raise LatticeError(f"no representative found for class {target}")


def _compositions(total: int, n: int):
    if n == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, n - 1):
            yield (first,) + rest


def class_of(rs: RootSystem, lam) -> tuple:
    """Class of an integral weight in the weight lattice modulo the root lattice."""
    rs.check_weight(lam)
    if not rs.is_integral(lam):
        raise LatticeError(f"weight {lam} is not integral")
    return _raw_class(weight_mod_root_lattice(rs), tuple(int(Fraction(x)) for x in lam))


def fundamental_classes(rs: RootSystem) -> list:
    n = rs.rank
    return [class_of(rs, tuple(int(i == j) for j in range(n))) for i in range(n)]


@dataclass(frozen=True)
class IsogenyForm:
    """A compact form, encoded by the image of its character lattice in the weight/root quotient."""

    rs: RootSystem
    subgroup: frozenset
    label: str = ""

    def __post_init__(self):
        group = weight_mod_root_lattice(self.rs)
        if group.identity() not in self.subgroup:
            raise LatticeError("subgroup must contain the identity")
        for x in self.subgroup:
            for y in self.subgroup:
                if group.add(x, y) not in self.subgroup:
                    raise LatticeError("subset is not closed under addition")

    @property
    def cartan_type(self):
        return self.rs.cartan_type

    @property
    def group(self) -> FiniteAbelianGroup:
        return weight_mod_root_lattice(self.rs)

    @property
    def order(self) -> int:
        return len(self.subgroup)

    def contains(self, lam) -> bool:
        return class_of(self.rs, lam) in self.subgroup


def cover_lattice(form: IsogenyForm):
    """Membership predicate for the character lattice of ``form``."""
    return form.contains


def _series(rs):
    if not rs.cartan_type.is_simple:
        return None, None
    return rs.cartan_type.factors[0]


def standard_label(rs: RootSystem, subgroup) -> str:
    """Conventional name of the compact form with the given subgroup."""
    group = weight_mod_root_lattice(rs)
    H = frozenset(subgroup)
    if group.order == 1:
        return "unique"
    if len(H) == group.order:
        return "sc"
    if len(H) == 1:
        return "ad"
    series, n = _series(rs)
    if series == "D":
        fc = fundamental_classes(rs)
        if H == group.span([fc[0]]):
            return "SO(2n)"
        if n % 2 == 0:
            if H == group.span([fc[n - 1]]):
                return "half-spin"
            if H == group.span([fc[n - 2]]):
                return "half-spin'"
    if series == "A":
        return f"cover({len(H)})"
    gens = _minimal_generators(group, H)
    return "gen" + ";".join(",".join(map(str, g)) for g in gens)


def _minimal_generators(group, H):
    for k in range(1, 3):
        for combo in product(sorted(H), repeat=k):
            if group.span(combo) == H:
                return list(combo)
    return sorted(H)


def isogeny_forms(rs: RootSystem) -> list:
    """All compact forms of a simple type, smallest subgroup (adjoint) first."""
    group = weight_mod_root_lattice(rs)
    return [IsogenyForm(rs, H, standard_label(rs, H)) for H in group.subgroups()]


def parse_form(rs: RootSystem, label) -> IsogenyForm:
    """Resolve a form label or an explicit list of generating weights/classes."""
    group = weight_mod_root_lattice(rs)
    if isinstance(label, IsogenyForm):
        return label
    if isinstance(label, str):
        s = label.strip()
        if s in ("sc", "simply_connected", "simply-connected"):
            return IsogenyForm(rs, frozenset(group.elements()), standard_label(rs, group.elements()))
        if s in ("ad", "adjoint"):
            H = frozenset([group.identity()])
            return IsogenyForm(rs, H, standard_label(rs, H))
        for form in isogeny_forms(rs):
            if form.label == s:
                return form
        raise LatticeError(f"unknown form label {label!r} for {rs.cartan_type}")
    gens = []
    for g in label:
        g = tuple(g)
        if len(g) == rs.rank:
            gens.append(class_of(rs, g))
        elif len(g) == len(group.invariant_factors):
            gens.append(tuple(int(x) % d for x, d in zip(g, group.invariant_factors)))
        else:
            raise LatticeError(f"generator {g} has wrong length")
    H = group.span(gens)
    return IsogenyForm(rs, H, standard_label(rs, H))


def form_for(type_label, label="sc") -> IsogenyForm:
    return parse_form(build_root_system(type_label), label)


def expected_center_order(series: str, n: int) -> int:
    return {"A": n + 1, "B": 2, "C": 2, "D": 4, "E": {6: 3, 7: 2, 8: 1}.get(n, 0), "F": 1, "G": 1}[series]


__all__ = [
    "FiniteAbelianGroup",
    "IsogenyForm",
    "LatticeError",
    "class_of",
    "cover_lattice",
    "expected_center_order",
    "form_for",
    "fundamental_classes",
    "gcd",
    "isogeny_forms",
    "parse_form",
    "smith_normal_form",
    "standard_label",
    "weight_mod_root_lattice",
]
