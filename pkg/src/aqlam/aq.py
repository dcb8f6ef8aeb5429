"""Theta-stable parabolic data and the numerical invariants of A_q(lambda).

Real forms come in five encodings:

* ``compact``;
* ``equal_rank_inner``: a Vogan-style marking of noncompact simple roots; a root
  is noncompact iff the sum of its coefficients on marked simple roots is odd;
* ``complex``: a complex group of type X viewed as a real group; its
  complexified root system is X x X and the Galois action swaps the halves;
* ``gl_n_real`` and ``gl_n_complex``: GL_n(R) and GL_n(C), modelled on the
  semisimple part (A_{n-1}, resp. A_{n-1} x A_{n-1}) with an explicit central
  dimension.

Simple-root indices are 0-based throughout.
"""

from __future__ import annotations

import hashlib
import json
import random
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from importlib import resources
from math import comb

from . import linalg as la
from .galois import delta_tau, diagram_automorphism
from .lattice import IsogenyForm, class_of, parse_form, weight_mod_root_lattice
from .qfield import QElement, QuadraticField
from .roots import CartanType, RootSystem, build_root_system

KINDS = ("compact", "equal_rank_inner", "complex", "gl_n_real", "gl_n_complex")
CASES_RESOURCE = "standard_module_cases.json"
CASES_SHA256 = "8532afb9044c8ef1fa33121306a9ddaa73511d29e627163a77dc3cb42e0d3420"


class AqError(ValueError):
    pass


def _half(x) -> Fraction | int:
    q = Fraction(x, 2)
    return q.numerator if q.denominator == 1 else q


def _vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _vec_neg(u):
    return tuple(-a for a in u)


def _norm(v):
    return tuple(int(x) if Fraction(x).denominator == 1 else Fraction(x) for x in v)


def _pair(lam, coroot):
    return sum(Fraction(x) * c for x, c in zip(lam, coroot))


# -- real forms --------------------------------------------------------------


@dataclass(frozen=True)
class RealFormDescriptor:
    kind: str
    cartan_type: CartanType | None = None  # underlying type; for complex kind, the type X
    marks: frozenset = frozenset()
    form: IsogenyForm | None = None
    n: int = 0
    group_label: str | None = None
    central_dim: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise AqError(f"unknown real form kind {self.kind!r}")
        if self.kind in ("gl_n_real", "gl_n_complex"):
            if self.n < 2:
                raise AqError("gl_n kinds need n >= 2")
            if self.central_dim not in (0, 1):
                raise AqError("central dimension of gl_n is 0 or 1")
            return
        if self.cartan_type is None:
            raise AqError("a Cartan type is required")
        if self.central_dim:
            raise AqError("semisimple kinds have no center")
        r = self.cartan_type.rank
        if any(not 0 <= i < r for i in self.marks):
            raise AqError(f"marks {sorted(self.marks)} out of range for rank {r}")
        if self.kind != "equal_rank_inner" and self.marks:
            raise AqError("only equal_rank_inner forms carry noncompact marks")

    # constructors
    @classmethod
    def compact(cls, type_label, form="sc"):
        t = _ctype(type_label)
        return cls("compact", t, form=parse_form(build_root_system(t), form))

    @classmethod
    def equal_rank(cls, type_label, marks, form="sc", group_label=None):
        t = _ctype(type_label)
        return cls("equal_rank_inner", t, frozenset(marks), parse_form(build_root_system(t), form), group_label=group_label)

    @classmethod
    def complex_group(cls, type_label, form="sc"):
        t = _ctype(type_label)
        return cls("complex", t, form=parse_form(build_root_system(t), form))

    @classmethod
    def gl_real(cls, n, central_dim=1):
        return cls("gl_n_real", n=n, central_dim=central_dim)

    @classmethod
    def gl_complex(cls, n, central_dim=1):
        return cls("gl_n_complex", n=n, central_dim=central_dim)

    @property
    def is_gl(self) -> bool:
        return self.kind in ("gl_n_real", "gl_n_complex")

    @cached_property
    def base_rs(self) -> RootSystem:
        """Root system of the underlying (complex) type X."""
        if self.is_gl:
            return build_root_system(f"A{self.n - 1}")
        return build_root_system(self.cartan_type)

    @cached_property
    def rs(self) -> RootSystem:
        """Root system of the complexified Lie algebra."""
        if self.kind in ("complex", "gl_n_complex"):
            t = self.base_rs.cartan_type
            return build_root_system(CartanType(tuple(t.factors) * 2))
        return self.base_rs

    def is_noncompact(self, root_coords) -> bool:
        if self.kind == "compact":
            return False
        if self.kind == "equal_rank_inner":
            return sum(root_coords[i] for i in self.marks) % 2 == 1
        raise AqError(f"root-wise compactness is not defined for kind {self.kind}")

    def galois(self, lam) -> tuple:
        """The Galois action on weights of the complexified Lie algebra."""
        lam = tuple(lam)
        if self.kind in ("compact", "equal_rank_inner"):
            return delta_tau(self.rs, lam)
        if self.kind == "gl_n_real":
            return lam
        r = self.base_rs.rank
        return lam[r:] + lam[:r]

    def conjugate(self) -> "RealFormDescriptor":
        if self.kind != "equal_rank_inner":
            return self
        sigma = diagram_automorphism(self.rs)
        return RealFormDescriptor(self.kind, self.cartan_type, frozenset(sigma[i] for i in self.marks),
                                  self.form, group_label=self.group_label)

    def symmetric_space_dim(self) -> int:
        """``dim p`` (real dimension of G/K)."""
        if self.kind == "compact":
            return 0
        if self.kind == "equal_rank_inner":
            return 2 * sum(1 for c in self.rs.positive_roots_root_coords if self.is_noncompact(c))
        if self.kind == "complex":
            rs = self.base_rs
            return rs.rank + 2 * len(rs.positive_roots)
        n = self.n
        return n * (n + 1) // 2 if self.kind == "gl_n_real" else n * n


def _ctype(t):
    if isinstance(t, CartanType):
        return t
    return CartanType.parse(str(t))


@dataclass(frozen=True)
class ThetaParabolic:
    levi: frozenset = frozenset()

    @classmethod
    def borel(cls):
        return cls(frozenset())


@dataclass(frozen=True)
class AqDescriptor:
    form: RealFormDescriptor
    parabolic: ThetaParabolic
    lam: tuple

    def __post_init__(self):
        object.__setattr__(self, "lam", _norm(self.lam))
        rs = self.form.rs
        if len(self.lam) != rs.rank:
            raise AqError(f"lambda has {len(self.lam)} coordinates, expected {rs.rank}")
        for i in self.levi:
            if self.lam[i] != 0:
                raise AqError("lambda must vanish on the Levi simple coroots")
        if self.form.is_gl and self.parabolic.levi:
            raise AqError("gl_n kinds support only the Borel parabolic")

    @cached_property
    def levi(self) -> frozenset:
        """Levi simple roots as indices into the complexified root system."""
        base = frozenset(self.parabolic.levi)
        r = self.form.base_rs.rank
        if any(not 0 <= i < r for i in base):
            raise AqError("Levi index out of range")
        if self.form.kind in ("complex", "gl_n_complex"):
            return base | frozenset(i + r for i in base)
        return base

    def _in_levi(self, c) -> bool:
        return all(x == 0 or i in self.levi for i, x in enumerate(c))

    @cached_property
    def u_roots(self) -> list[int]:
        return [k for k, c in enumerate(self.form.rs.positive_roots_root_coords) if not self._in_levi(c)]

    @cached_property
    def levi_roots(self) -> list[int]:
        return [k for k, c in enumerate(self.form.rs.positive_roots_root_coords) if self._in_levi(c)]

    def conjugate(self) -> "AqDescriptor":
        """``q-bar`` and the Galois-twisted parameter."""
        form = self.form
        lam = form.galois(self.lam)
        if form.kind == "equal_rank_inner" or form.kind == "compact":
            sigma = diagram_automorphism(form.rs)
            levi = frozenset(sigma[i] for i in self.parabolic.levi)
        else:
            levi = self.parabolic.levi
        return AqDescriptor(form.conjugate(), ThetaParabolic(levi), lam)

    @classmethod
    def from_dict(cls, d: dict) -> "AqDescriptor":
        kind = d.get("form_kind", "compact")
        iso = d.get("isogeny_form", "sc")
        if kind == "compact":
            form = RealFormDescriptor.compact(d["cartan_type"], iso)
        elif kind == "equal_rank_inner":
            form = RealFormDescriptor.equal_rank(d["cartan_type"], d.get("noncompact_marks", []), iso,
                                                 d.get("group_label"))
        elif kind == "complex":
            form = RealFormDescriptor.complex_group(d["cartan_type"], iso)
        elif kind in ("gl_n_real", "gl_n_complex"):
            ctor = RealFormDescriptor.gl_real if kind == "gl_n_real" else RealFormDescriptor.gl_complex
            form = ctor(int(d["n"]), int(d.get("central_dim", 1)))
        else:
            raise AqError(f"unknown form kind {kind!r}")
        lam = d.get("lambda_coords")
        if lam is None:
            lam = [0] * form.rs.rank
        return cls(form, ThetaParabolic(frozenset(d.get("levi_subset", []))), tuple(Fraction(x) for x in lam))


def _sum_roots(rs: RootSystem, idx) -> tuple:
    tot = [0] * rs.rank
    for k in idx:
        for i, x in enumerate(rs.positive_roots[k]):
            tot[i] += x
    return tuple(tot)


def rho_u(desc: AqDescriptor) -> tuple:
    rs = desc.form.rs
    r = tuple(_half(x) for x in _sum_roots(rs, desc.u_roots))
    if _vec_add(r, rho_l(desc)) != tuple(rs.rho):
        raise AssertionError("rho(u) + rho(l cap n) != rho")
    return r


def rho_l(desc: AqDescriptor) -> tuple:
    """Half sum of the positive Levi roots, ``rho(l cap n)``."""
    return tuple(_half(x) for x in _sum_roots(desc.form.rs, desc.levi_roots))


def s_q(desc: AqDescriptor) -> int:
    form = desc.form
    if form.kind == "compact":
        return 0
    if form.kind == "equal_rank_inner":
        coords = form.rs.positive_roots_root_coords
        return sum(1 for k in desc.u_roots if form.is_noncompact(coords[k]))
    if form.kind == "complex":
        return len(desc.u_roots) // 2
    n = form.n
    return n * n // 4 if form.kind == "gl_n_real" else n * (n - 1) // 2


def rho_u_cap_p(desc: AqDescriptor) -> tuple:
    """``2 rho(u cap p)``, the highest weight of the bottom-layer K-type.

    For the complex kind the weight lives on the compact form of X.
    """
    form = desc.form
    if form.kind == "complex":
        r = form.base_rs.rank
        coords = form.rs.positive_roots_root_coords
        idx = [k for k in desc.u_roots if any(coords[k][:r])]
        return _sum_roots(form.rs, idx)[:r]
    if form.kind not in ("compact", "equal_rank_inner"):
        raise AqError(f"bottom layer not modelled for kind {form.kind}")
    coords = form.rs.positive_roots_root_coords
    return _sum_roots(form.rs, [k for k in desc.u_roots if form.is_noncompact(coords[k])])


# -- ranges and infinitesimal character ---------------------------------------

RANGE_ORDER = ("good", "weakly_good", "fair", "weakly_fair")


def range_labels(desc: AqDescriptor) -> set:
    rs = desc.form.rs
    x = _vec_add(desc.lam, rho_u(desc))
    all_vals = [_pair(x, c) for c in rs.positive_coroots]
    u_vals = [all_vals[k] for k in desc.u_roots]
    out = set()
    if all(v >= 0 for v in all_vals):
        out.add("weakly_good")
        if all(v > 0 for v in all_vals):
            out.add("good")
    if all(v >= 0 for v in u_vals):
        out.add("weakly_fair")
        if all(v > 0 for v in u_vals):
            out.add("fair")
    return out


def range_check(desc: AqDescriptor) -> str:
    labels = range_labels(desc)
    for name in RANGE_ORDER:
        if name in labels:
            return name
    return "none"


def infinitesimal_character(desc: AqDescriptor) -> tuple:
    """Dominant representative of ``lambda + rho(u)``."""
    return desc.form.rs.dominant_rep(_vec_add(desc.lam, rho_u(desc)))


# -- (g, K)-cohomology --------------------------------------------------------


class _CompactReflections:
    """Weyl group of a closed subsystem, given by its positive roots."""

    def __init__(self, rs: RootSystem, positive: list[int]):
        self.rs = rs
        pos = set(positive)
        coords = rs.positive_roots_root_coords
        sums = {_vec_add(coords[a], coords[b]) for a in pos for b in pos}
        self.simple = [k for k in positive if coords[k] not in sums]
        self.positive = list(positive)

    def reflect(self, k, lam):
        p = _pair(lam, self.rs.positive_coroots[k])
        return _norm(tuple(x - p * a for x, a in zip(lam, self.rs.positive_roots[k])))

    def dominant(self, lam):
        lam = _norm(lam)
        while True:
            for k in self.simple:
                if _pair(lam, self.rs.positive_coroots[k]) < 0:
                    lam = self.reflect(k, lam)
                    break
            else:
                return lam

    def signed_orbit_of_rho(self):
        """``[(w rho_c, sign w)]`` over the whole group."""
        rho = _norm(tuple(_half(x) for x in _sum_roots(self.rs, self.positive)))
        seen = {rho: 1}
        frontier = [rho]
        while frontier:
            nxt = []
            for lam in frontier:
                for k in self.simple:
                    mu = self.reflect(k, lam)
                    if mu not in seen:
                        seen[mu] = -seen[lam]
                        nxt.append(mu)
            frontier = nxt
        return rho, seen

    def two_rho_check(self):
        tot = [0] * self.rs.rank
        for k in self.positive:
            for i, x in enumerate(self.rs.positive_coroots[k]):
                tot[i] += x
        return tuple(tot)


def _l_cap_p_data(desc: AqDescriptor):
    """Torus weights of ``l cap p`` and the positive roots of ``L cap K``."""
    form = desc.form
    rs = form.rs
    if form.kind == "compact":
        return rs, [], desc.levi_roots
    if form.kind == "equal_rank_inner":
        coords = rs.positive_roots_root_coords
        nc = [k for k in desc.levi_roots if form.is_noncompact(coords[k])]
        cpt = [k for k in desc.levi_roots if not form.is_noncompact(coords[k])]
        weights = []
        for k in nc:
            weights += [rs.positive_roots[k], _vec_neg(rs.positive_roots[k])]
        return rs, weights, cpt
    if form.kind == "complex":
        base = form.base_rs
        levi = desc.parabolic.levi
        lroots = [k for k, c in enumerate(base.positive_roots_root_coords)
                  if all(x == 0 or i in levi for i, x in enumerate(c))]
        weights = [(0,) * base.rank] * base.rank
        for k in lroots:
            weights += [base.positive_roots[k], _vec_neg(base.positive_roots[k])]
        return base, weights, lroots
    raise AqError(f"l cap p is given in closed form for kind {form.kind}")


def _exterior_character(weights):
    """``{(k, weight): multiplicity}`` for the exterior algebra on the given weights."""
    table = {(0, tuple(0 for _ in weights[0])): 1}
    for w in weights:
        new = defaultdict(int, table)
        for (k, mu), m in table.items():
            new[(k + 1, _norm(_vec_add(mu, w)))] += m
        table = dict(new)
    return table


def _invariant_poincare(rs, weights, compact_pos) -> list[int]:
    if not weights:
        return [1]
    group = _CompactReflections(rs, compact_pos)
    rho, orbit = group.signed_orbit_of_rho()
    table = _exterior_character(weights)
    out = [0] * (len(weights) + 1)
    for k in range(len(weights) + 1):
        total = 0
        for wr, sign in orbit.items():
            shift = _norm(tuple(a - b for a, b in zip(rho, wr)))
            total += sign * table.get((k, shift), 0)
        out[k] = total
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def _poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _poly_divide_one_plus_t(p):
    """Exact division by ``1 + t``."""
    q = []
    rem = list(p)
    for i in range(len(rem) - 1, 0, -1):
        c = rem[i]
        q.append(c)
        rem[i] -= c
        rem[i - 1] -= c
    if rem[0] != 0:
        raise AqError("polynomial not divisible by 1 + t")
    return list(reversed(q)) or [0]


def vz_cohomology_poincare(desc: AqDescriptor, include_center: bool = False) -> list[int]:
    """Coefficients ``[c_0, c_1, ...]`` of the Poincare polynomial in ``t``.

    ``include_center=False`` divides out the central part of ``l cap p`` lying in
    ``k_infinity`` (``desc.form.central_dim`` dimensions).
    """
    form = desc.form
    S = s_q(desc)
    if form.is_gl:
        n = form.n
        width = (n + 1) // 2 if form.kind == "gl_n_real" else n
        inner = [comb(width, k) for k in range(width + 1)]
    else:
        rs, weights, cpt = _l_cap_p_data(desc)
        inner = _invariant_poincare(rs, weights, cpt)
    if not include_center:
        for _ in range(form.central_dim):
            inner = _poly_divide_one_plus_t(inner)
    return [0] * S + inner


def binomial_multiplicity(q_min: int, q_max: int, q: int) -> int:
    if q_min > q_max:
        raise AqError("q_min must not exceed q_max")
    if q < q_min or q > q_max:
        return 0
    return comb(q_max - q_min, q - q_min)


def cuspidal_multiplicity(records, degrees=None) -> dict:
    """Per-degree totals ``sum m_coh(q) * m_L2`` over infinity types.

    Each record is ``(m_coh, m_L2)`` with ``m_coh`` a mapping or list indexed by degree.
    """
    totals = defaultdict(int)
    for m_coh, m_l2 in records:
        items = m_coh.items() if isinstance(m_coh, dict) else enumerate(m_coh)
        if m_l2 < 0:
            raise AqError("negative L2 multiplicity")
        for q, m in items:
            if m < 0:
                raise AqError("negative cohomological multiplicity")
            totals[int(q)] += m * m_l2
    if degrees is not None:
        return {q: totals.get(q, 0) for q in degrees}
    return dict(sorted(totals.items()))


# -- field of definition ----------------------------------------------------------


def load_case_list(verify: bool = True) -> dict:
    raw = resources.files("aqlam.data").joinpath(CASES_RESOURCE).read_bytes()
    if verify and hashlib.sha256(raw).hexdigest() != CASES_SHA256:
        raise AqError("case list checksum mismatch")
    return json.loads(raw)


def case_list_checksum() -> str:
    raw = resources.files("aqlam.data").joinpath(CASES_RESOURCE).read_bytes()
    return hashlib.sha256(raw).hexdigest()


@dataclass
class FieldVerdict:
    verdict: str  # F, F', undecided
    rule_trace: list = field(default_factory=list)
    cases: list = field(default_factory=list)

    def as_dict(self):
        return {"verdict": self.verdict, "rule_trace": list(self.rule_trace), "cases": list(self.cases)}


@dataclass(frozen=True)
class _Factor:
    kind: str
    series: str
    rank: int
    marks: frozenset
    form_label: str
    form_order: int
    rs: RootSystem
    form: IsogenyForm | None


def _real_form_name(series, n, marks):
    """``(name, p, q)`` for a single-mark Vogan diagram of a classical type."""
    if not marks:
        return "compact", 0, {"A": n + 1, "B": n, "C": n, "D": n}.get(series, 0)
    if len(marks) != 1:
        return "other", None, None
    k = next(iter(marks)) + 1  # 1-based position of the mark
    if series == "A":
        return "su(p,q)", k, n + 1 - k
    if series == "B":
        return "so(2p,2q+1)", k, n - k
    if series == "C":
        return ("sp(2n,R)", None, None) if k == n else ("sp(p,q)", k, n - k)
    if series == "D":
        return ("so*(2n)", None, None) if k >= n - 1 else ("so(2p,2q)", k, n - k)
    return "other", None, None


def _factor_form(form: IsogenyForm, block) -> IsogenyForm:
    """Image of a form's character lattice in one simple factor."""
    rs = form.rs
    group = weight_mod_root_lattice(rs)
    sub_rs = build_root_system(CartanType((rs.cartan_type.factors[_block_index(rs, block)],)))
    gens = []
    for cls in form.subgroup:
        lift = [0] * rs.rank
        for coeff, gen in zip(cls, group.generators):
            for i, x in enumerate(gen):
                lift[i] += coeff * x
        gens.append(tuple(lift[i] for i in block))
    return parse_form(sub_rs, gens) if gens else parse_form(sub_rs, "ad")


def _block_index(rs, block):
    return next(i for i, b in enumerate(rs.blocks) if b == block)


def _factors(form: RealFormDescriptor) -> list[_Factor]:
    rs = form.base_rs
    out = []
    for b_idx, block in enumerate(rs.blocks):
        series, r = rs.cartan_type.factors[b_idx]
        sub_rs = build_root_system(CartanType(((series, r),)))
        f = _factor_form(form.form, block) if len(rs.blocks) > 1 else form.form
        marks = frozenset(i - block.start for i in form.marks if i in block)
        out.append(_Factor(form.kind, series, r, marks, f.label, f.order, sub_rs, f))
    return out


def _compact_derived_adjoint(factor: _Factor) -> bool:
    """Whether the derived group of the identity component of K is adjoint."""
    rs = factor.rs
    coords = rs.positive_roots_root_coords
    if factor.kind == "compact":
        cpt = list(range(len(coords)))
    else:
        cpt = [k for k, c in enumerate(coords) if sum(c[i] for i in factor.marks) % 2 == 0]
    group = _CompactReflections(rs, cpt)
    simple = group.simple
    if not simple:
        return True
    CK = [[_pair(rs.positive_roots[a], rs.positive_coroots[b]) for b in simple] for a in simple]
    CK_inv = la.inverse(CK)
    lattice_gens = [tuple(row) for row in rs.cartan_matrix]
    wgroup = weight_mod_root_lattice(rs)
    for cls in factor.form.subgroup:
        lift = [0] * rs.rank
        for coeff, gen in zip(cls, wgroup.generators):
            for i, x in enumerate(gen):
                lift[i] += coeff * x
        lattice_gens.append(tuple(lift))
    for lam in lattice_gens:
        r = [[_pair(lam, rs.positive_coroots[b]) for b in simple]]
        x = la.matmul(r, CK_inv)[0]
        if any(Fraction(v).denominator != 1 for v in x):
            return False
    return True


def _pattern_matches(pat: dict, factor: _Factor, group_label) -> bool:
    if "computed" in pat:
        return False
    if "group_label" in pat:
        return group_label in pat["group_label"]
    if "kind" in pat and factor.kind not in pat["kind"]:
        return False
    if "series" in pat and factor.series != pat["series"]:
        return False
    if "rank" in pat and factor.rank not in pat["rank"]:
        return False
    if pat.get("rank_parity") == "even" and factor.rank % 2:
        return False
    if "form" in pat and factor.form_label not in pat["form"]:
        return False
    name, p, q = _real_form_name(factor.series, factor.rank, factor.marks)
    if "real_form" in pat and name not in pat["real_form"]:
        return False
    for key, val in (("p_parity", p), ("q_parity", q)):
        if key in pat and (val is None or val % 2):
            return False
    if "p_plus_q_parity" in pat and (p is None or (p + q) % 2):
        return False
    if ("p_parity" in pat or "q_parity" in pat) and factor.kind == "equal_rank_inner" and len(factor.marks) > 1:
        return False
    return True


def _match_case(factor: _Factor, group_label, cases) -> str | None:
    for case in cases:
        for pat in case["patterns"]:
            if pat.get("computed") == "compact_derived_adjoint":
                if factor.kind in ("compact", "equal_rank_inner") and _compact_derived_adjoint(factor):
                    return case["case"]
            elif _pattern_matches(pat, factor, group_label):
                return case["case"]
    return None


def _doubled(desc: AqDescriptor) -> bool:
    """Two identical factors carrying equal (or conjugate) parabolic and parameter data."""
    form = desc.form
    if form.kind not in ("compact", "equal_rank_inner"):
        return False
    rs = form.rs
    if len(rs.blocks) != 2 or rs.cartan_type.factors[0] != rs.cartan_type.factors[1]:
        return False
    b0, b1 = rs.blocks
    r = len(b0)
    marks0 = {i for i in form.marks if i in b0}
    marks1 = {i - r for i in form.marks if i in b1}
    if marks0 != marks1:
        return False
    levi0 = {i for i in desc.parabolic.levi if i in b0}
    levi1 = {i - r for i in desc.parabolic.levi if i in b1}
    lam0, lam1 = desc.lam[:r], desc.lam[r:]
    sub = build_root_system(CartanType((rs.cartan_type.factors[0],)))
    sigma = diagram_automorphism(sub)
    if levi0 == levi1 and lam0 == lam1:
        return True
    return {sigma[i] for i in levi0} == levi1 and delta_tau(sub, lam0) == tuple(lam1)


def bottom_layer(desc: AqDescriptor) -> dict:
    """Self-duality and (for self-dual weights) the indicator of the bottom-layer K-type."""
    form = desc.form
    mu = rho_u_cap_p(desc)
    if form.kind == "complex":
        rs = form.base_rs
        group = _CompactReflections(rs, list(range(len(rs.positive_roots))))
    else:
        rs = form.rs
        coords = rs.positive_roots_root_coords
        group = _CompactReflections(rs, [k for k, c in enumerate(coords) if not form.is_noncompact(c)])
    dom = group.dominant(mu)
    selfdual = group.dominant(_vec_neg(mu)) == dom
    out = {"highest_weight": list(mu), "selfdual": selfdual}
    if selfdual:
        parity = sum(Fraction(x) * c for x, c in zip(mu, group.two_rho_check()))
        out["indicator"] = -1 if parity % 2 else 1
    else:
        out["indicator"] = 0
    return out


def _fixed(desc: AqDescriptor, x) -> bool:
    return desc.form.galois(x) == tuple(x)


def _orbit_fixed(desc: AqDescriptor, x) -> bool:
    rs = desc.form.rs
    return rs.dominant_rep(desc.form.galois(x)) == rs.dominant_rep(x)


def field_of_definition(desc: AqDescriptor, flags: dict | None = None) -> FieldVerdict:
    """Decide whether A_q(lambda) is defined over F or needs F'.

    ``flags`` may carry ``semi_admissible`` (bool), ``group_label`` (a name
    from the case list) and ``selfdual`` (override for A_q(0) self-duality).

    The bottom-layer test only sees the identity component of K. Groups in the
    direct cases of the list may have a disconnected K whose component group
    makes A_q(0) self-dual, so a direct case match is applied first.
    """
    flags = dict(flags or {})
    form = desc.form
    trace = []
    cases_data = load_case_list()["cases"]
    by_name = {c["case"]: c for c in cases_data}
    is_borel = not desc.parabolic.levi
    group_label = flags.get("group_label", form.group_label)

    # the case list, factor by factor
    uncovered = None
    if form.is_gl:
        factor_cases = ["i"]
        trace.append(f"case (i): {form.kind}")
    elif _doubled(desc):
        factor_cases = ["vii"]
        trace.append("case (vii): doubled factor with matching data")
    else:
        factor_cases = []
        for f in _factors(form):
            c = _match_case(f, group_label, cases_data)
            label = f"{f.series}{f.rank} form {f.form_label}"
            if f.kind == "equal_rank_inner":
                label += f" marks {sorted(f.marks)}"
            if c is None:
                uncovered = f"no case of the list covers {label} ({f.kind})"
                break
            trace.append(f"case ({c}): {label}")
            factor_cases.append(c)

    # self-duality of A_q(0) through its bottom layer
    if "selfdual" in flags:
        selfdual = bool(flags["selfdual"])
        trace.append(f"self-duality of A_q(0) supplied: {selfdual}")
    elif form.is_gl:
        selfdual = True
        trace.append("GL_n with the Borel: A_q(0) is self-dual")
    else:
        bl = bottom_layer(desc)
        selfdual = bl["selfdual"]
        trace.append(f"bottom layer 2rho(u cap p) = {bl['highest_weight']}, self-dual on K^0: {selfdual}")
        if selfdual:
            trace.append(f"bottom-layer indicator on K^0: {bl['indicator']:+d}")

    if form.kind == "compact":
        trace.append("compact group: A_q(0) is the trivial module")
        return _translate(desc, "F", trace, factor_cases)
    direct = uncovered is None and all(by_name[c]["field_F_if_borel"] for c in factor_cases)
    if direct and (is_borel or "i" not in factor_cases):
        if not selfdual:
            trace.append("the listed group has a component group exchanging the bottom layer with its dual")
        trace.append("only cases (i), (iii)-(vi) occur: F_0 = F")
        return _translate(desc, "F", trace, factor_cases)
    if not selfdual:
        trace.append("A_q(0) not self-dual: field of rationality is F'")
        return _translate(desc, "F'", trace, factor_cases)
    if uncovered is not None:
        trace.append(uncovered)
        return FieldVerdict("undecided", trace, factor_cases)
    sa = flags.get("semi_admissible")
    if sa is None:
        trace.append("semi-admissibility of K not supplied")
        return FieldVerdict("undecided", trace, factor_cases)
    if not sa:
        trace.append("K has no semi-admissible model")
        return FieldVerdict("undecided", trace, factor_cases)
    trace.append("self-dual, semi-admissible K, case list covered: defined over its field of rationality F")
    return _translate(desc, "F", trace, factor_cases)


def _translate(desc: AqDescriptor, f0: str, trace: list, cases: list) -> FieldVerdict:
    lam = desc.lam
    if all(x == 0 for x in lam):
        return FieldVerdict(f0, trace, cases)
    rs = desc.form.rs
    if any(Fraction(x).denominator != 1 for x in lam):
        trace.append("lambda not integral: translation step not available")
        return FieldVerdict("undecided", trace, cases)
    if rs.is_dominant(lam):
        data_fixed = _fixed(desc, lam) and _fixed(desc, rho_l(desc))
        trace.append(f"dominant integral lambda: data (lambda, rho(l cap n)) Galois-fixed: {data_fixed}")
    elif "weakly_good" in range_labels(desc):
        w_lam = rs.dominant_rep(lam)
        data_fixed = _fixed(desc, w_lam) and _orbit_fixed(desc, _vec_add(lam, rho_u(desc)))
        trace.append(f"weakly good lambda: data (w(lambda), lambda + rho(u)) Galois-fixed: {data_fixed}")
    else:
        trace.append("lambda neither dominant nor weakly good: translation step not available")
        return FieldVerdict("undecided", trace, cases)
    verdict = "F" if f0 == "F" and data_fixed else "F'"
    return FieldVerdict(verdict, trace, cases)


# -- periods ------------------------------------------------------------------


@dataclass(frozen=True)
class PeriodStructure:
    omega: tuple  # rows of field elements

    def __post_init__(self):
        rows = tuple(tuple(r) for r in self.omega)
        object.__setattr__(self, "omega", rows)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise AqError("period matrix must be square")
        if not la.is_invertible([list(r) for r in rows]):
            raise AqError("period matrix must be invertible")

    @property
    def m(self) -> int:
        return len(self.omega)

    @property
    def matrix(self):
        return [list(r) for r in self.omega]


def scale(P: PeriodStructure, c) -> PeriodStructure:
    if not c:
        raise AqError("scaling by zero")
    return PeriodStructure(la.scalar(c, P.matrix))


def ratio(P_q: PeriodStructure, P_t0: PeriodStructure):
    if P_q.m != P_t0.m:
        raise AqError("size mismatch")
    return la.matmul(la.inverse(P_t0.matrix), P_q.matrix)


def same_double_coset(P: PeriodStructure, Q: PeriodStructure, trials: int = 20, seed: int = 0) -> bool:
    """Whether ``Q = A P B`` for some rational invertible ``A``, ``B``.

    Entries of ``P`` and ``Q`` lie in a quadratic field ``Q(sqrt d)``. Solves the
    rational linear system ``Q C = A P`` and tests random points of the solution
    space for invertibility of both ``A`` and ``C``.
    """
    m = P.m
    if Q.m != m:
        return False
    Pm, Qm = P.matrix, Q.matrix
    # unknowns: A (m*m) then C (m*m); equation (Q C - A P)_{ij} = 0 split into two rational parts
    rows = []
    for i in range(m):
        for j in range(m):
            for part in ("a", "b"):
                row = [Fraction(0)] * (2 * m * m)
                for k in range(m):
                    # - A[i][k] * P[k][j]
                    row[i * m + k] -= _part(Pm[k][j], part)
                    # + Q[i][k] * C[k][j]
                    row[m * m + k * m + j] += _part(Qm[i][k], part)
                rows.append(row)
    basis = la.nullspace(rows, 2 * m * m)
    if not basis:
        return False
    rng = random.Random(seed)
    for _ in range(trials):
        coeffs = [rng.randint(-1000, 1000) for _ in basis]
        v = [sum(c * b[t] for c, b in zip(coeffs, basis)) for t in range(2 * m * m)]
        A = la.unflatten(v[: m * m], m, m)
        C = la.unflatten(v[m * m :], m, m)
        if la.is_invertible(A) and la.is_invertible(C):
            return True
    return False


def _part(x, which):
    if isinstance(x, QElement):
        return x.a if which == "a" else x.b
    return Fraction(x) if which == "a" else Fraction(0)


def random_rational_invertible(m: int, rng: random.Random, bound: int = 3):
    while True:
        M = [[Fraction(rng.randint(-bound, bound)) for _ in range(m)] for _ in range(m)]
        if la.is_invertible(M):
            return M


def random_period(F: QuadraticField, m: int, rng: random.Random, bound: int = 3) -> PeriodStructure:
    while True:
        M = [[F(rng.randint(-bound, bound), rng.randint(-bound, bound)) for _ in range(m)] for _ in range(m)]
        if la.is_invertible(M):
            return PeriodStructure(M)


def aq_report(desc: AqDescriptor, flags: dict | None = None) -> dict:
    fd = field_of_definition(desc, flags)
    return {
        "S_q": s_q(desc),
        "rho_u": [str(x) for x in rho_u(desc)],
        "range": range_check(desc),
        "infinitesimal_character": [str(x) for x in infinitesimal_character(desc)],
        "poincare_polynomial": vz_cohomology_poincare(desc),
        "field_of_definition": fd.verdict,
        "cases": fd.cases,
        "rule_trace": fd.rule_trace,
    }


__all__ = [
    "AqDescriptor",
    "AqError",
    "FieldVerdict",
    "PeriodStructure",
    "RealFormDescriptor",
    "ThetaParabolic",
    "aq_report",
    "binomial_multiplicity",
    "bottom_layer",
    "case_list_checksum",
    "cuspidal_multiplicity",
    "field_of_definition",
    "infinitesimal_character",
    "load_case_list",
    "random_period",
    "random_rational_invertible",
    "range_check",
    "range_labels",
    "ratio",
    "rho_l",
    "rho_u",
    "rho_u_cap_p",
    "s_q",
    "same_double_coset",
    "scale",
    "vz_cohomology_poincare",
]
