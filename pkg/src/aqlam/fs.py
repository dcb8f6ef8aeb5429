"""Frobenius-Schur indicators of compact groups and admissibility of compact forms."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources

from .galois import delta_tau, fixed_classes, is_selfdual
from .lattice import (
    IsogenyForm,
    class_of,
    isogeny_forms,
    parse_form,
    weight_mod_root_lattice,
)
from .roots import RootSystem, build_root_system, simple_types

DEFAULT_ORACLE_DIM = 5000
MAX_CLASSIFY_RANK = 12


class FSError(ValueError):
    pass


@dataclass(frozen=True)
class FSIndicator:
    value: int
    case: str = ""

    def __post_init__(self):
        if self.value not in (-1, 0, 1):
            raise FSError(f"indicator must be -1, 0 or 1, got {self.value}")

    def __int__(self):
        return self.value

    @property
    def kind(self) -> str:
        return {1: "real", 0: "complex", -1: "quaternionic"}[self.value]


@dataclass(frozen=True)
class CompactFormDescriptor:
    """A compact group whose identity component is ``form`` (or a torus), plus
    an optional order-two component acting on weights.

    ``outer`` is ``None`` for connected groups. Otherwise it is a permutation
    of simple indices (a diagram automorphism; the identity permutation for a
    direct product with ``Z/2``), or ``"negate"`` for a torus.
    """

    form: IsogenyForm | None = None
    torus_rank: int = 0
    outer: tuple | str | None = None

    def __post_init__(self):
        if (self.form is None) == (self.torus_rank == 0):
            raise FSError("give exactly one of a semisimple form or a torus rank")
        if self.outer is None:
            return
        if self.form is None:
            if self.outer != "negate":
                raise FSError("a torus identity component only supports the 'negate' outer action")
            return
        perm = tuple(self.outer)
        rs = self.form.rs
        if sorted(perm) != list(range(rs.rank)):
            raise FSError(f"outer action {perm} is not a permutation of simple indices")
        A = rs.cartan_matrix
        if any(A[perm[i]][perm[j]] != A[i][j] for i in range(rs.rank) for j in range(rs.rank)):
            raise FSError(f"outer action {perm} is not a diagram automorphism")
        # the component must preserve the character lattice of the form
        for c in self.form.subgroup:
            lift = _lift_class(rs, c)
            if class_of(rs, _permute(lift, perm)) not in self.form.subgroup:
                raise FSError("outer action does not preserve the isogeny form")

    @property
    def connected(self) -> bool:
        return self.outer is None

    def act(self, lam) -> tuple:
        if self.outer is None:
            return tuple(lam)
        if self.outer == "negate":
            return tuple(-x for x in lam)
        return _permute(lam, self.outer)


def _permute(lam, perm) -> tuple:
    out = [0] * len(lam)
    for i, x in enumerate(lam):
        out[perm[i]] = x
    return tuple(out)


def _lift_class(rs, c) -> tuple:
    group = weight_mod_root_lattice(rs)
    lift = [0] * rs.rank
    for coeff, gen in zip(c, group.generators):
        for i, x in enumerate(gen):
            lift[i] += coeff * x
    return tuple(lift)


def _as_form(form) -> IsogenyForm:
    if isinstance(form, CompactFormDescriptor):
        if form.form is None:
            raise FSError("torus descriptor has no semisimple form")
        return form.form
    if isinstance(form, IsogenyForm):
        return form
    if isinstance(form, RootSystem):
        return parse_form(form, "sc")
    raise FSError(f"cannot interpret {form!r} as a compact form")


def _check_character(form: IsogenyForm, lam):
    rs = form.rs
    rs.check_weight(lam)
    if not rs.is_integral(lam) or not rs.is_dominant(lam):
        raise FSError(f"{lam} is not dominant integral")
    if not form.contains(lam):
        raise FSError(f"{lam} is not a character of the {form.label or 'given'} form of {rs.cartan_type}")


def central_parity(rs: RootSystem, lam) -> int:
    """``(-1)^<lam, 2 rho_check>``: ``lam`` evaluated at the canonical central element."""
    s = sum(int(x) * c for x, c in zip(lam, rs.two_rho_check))
    return -1 if s % 2 else 1


def fs_indicator_compact(form, lam) -> FSIndicator:
    """Indicator of the irreducible of highest weight ``lam`` of a connected compact group."""
    form = _as_form(form)
    lam = tuple(lam)
    _check_character(form, lam)
    rs = form.rs
    if not is_selfdual(rs, lam):
        return FSIndicator(0, "not self-dual")
    return FSIndicator(central_parity(rs, lam), "self-dual")


def fs_indicator_oracle(form, lam, max_dim: int = DEFAULT_ORACLE_DIM) -> FSIndicator:
    """Indicator from the trivial multiplicity in ``Sym^2 V - Alt^2 V``.

    That virtual character has the weights of ``V`` doubled; its invariant
    dimension is ``sum_w sgn(w) m(w rho - rho)`` (Brauer-Klimyk at weight 0).
    """
    form = _as_form(form)
    lam = tuple(int(x) for x in lam)
    _check_character(form, lam)
    rs = form.rs
    dim = rs.weyl_dimension(lam)
    if dim > max_dim:
        raise FSError(f"dimension {dim} exceeds oracle bound {max_dim}")
    mult = rs.dominant_multiplicities(lam)
    total = 0
    for nu, sign in _alternating_shifts(rs):
        if any(x % 2 for x in nu):
            continue
        half = tuple(x // 2 for x in nu)
        total += sign * mult.get(rs.dominant_rep(half), 0)
    if total not in (-1, 0, 1):
        raise ArithmeticError(f"oracle produced {total}; input is not irreducible")
    return FSIndicator(total, "oracle")


_SHIFTS: dict = {}


def _alternating_shifts(rs: RootSystem):
    """Pairs ``(w rho - rho, sgn w)`` over the Weyl group."""
    key = rs.cartan_type
    if key not in _SHIFTS:
        out = []
        for wrho, word in rs.weyl_group_elements().items():
            nu = tuple(a - b for a, b in zip(wrho, rs.rho))
            out.append((nu, -1 if len(word) % 2 else 1))
        _SHIFTS[key] = out
    return _SHIFTS[key]


# -- beta map and the classification of compact forms --------------------


def _weights_in_class(rs, cls, max_sum):
    from .lattice import _compositions

    for total in range(max_sum + 1):
        for coords in _compositions(total, rs.rank):
            if class_of(rs, coords) == cls:
                yield coords


def beta_map(form, search_sum: int = 4, max_search_sum: int = 8, witnesses: dict | None = None) -> dict:
    """Map each conjugation-fixed class of ``form`` to the common indicator sign.

    Every value is checked on at least two self-dual representatives, and the
    result is checked to be a homomorphism. If ``witnesses`` is given it is
    filled with the representatives used for each class.
    """
    form = _as_form(form)
    rs = form.rs
    group = form.group
    out = {}
    for cls in fixed_classes(rs, form.subgroup):
        bound = search_sum
        while True:
            reps = [lam for lam in _weights_in_class(rs, cls, bound) if is_selfdual(rs, lam)]
            if len(reps) >= 2 or bound >= max_search_sum:
                break
            bound += 2
        if not reps:
            raise FSError(f"no self-dual representative of class {cls} with coordinate sum <= {bound}")
        signs = {central_parity(rs, lam) for lam in reps}
        if len(signs) != 1:
            raise ArithmeticError(f"beta is not well defined on class {cls}: {reps}")
        out[cls] = signs.pop()
        if witnesses is not None:
            witnesses[cls] = reps[:2]
    for a in out:
        for b in out:
            c = group.add(a, b)
            if out[c] != out[a] * out[b]:
                raise ArithmeticError(f"beta is not multiplicative at {a}, {b}")
    return out


def form_has_no_quaternionic(form) -> bool:
    return all(v == 1 for v in beta_map(form).values())


def _residue(series: str, n: int):
    return n % 4 if series in "ABD" else None


def classify_admissible_forms(max_rank: int = 8) -> list[dict]:
    """One record per (simple type, compact form) with the computed verdict."""
    if not 1 <= max_rank <= MAX_CLASSIFY_RANK:
        raise FSError(f"max_rank must lie between 1 and {MAX_CLASSIFY_RANK}")
    rows = []
    for t in simple_types(max_rank):
        rs = build_root_system(t)
        (series, n), = t.factors
        for form in isogeny_forms(rs):
            beta = beta_map(form)
            rows.append(
                {
                    "series": series,
                    "rank": n,
                    "rank_residue": _residue(series, n),
                    "form_label": form.label,
                    "subgroup_order": form.order,
                    "verdict": "yes" if all(v == 1 for v in beta.values()) else "no",
                }
            )
    return sorted(rows, key=_row_key)


def unconditional_forms(max_rank: int = 8) -> list[dict]:
    """Forms whose center dual (as a subgroup) has odd order, so every
    rational representation descends whatever the number field."""
    rows = []
    for t in simple_types(max_rank):
        rs = build_root_system(t)
        (series, n), = t.factors
        for form in isogeny_forms(rs):
            rows.append(
                {
                    "series": series,
                    "rank": n,
                    "rank_residue": _residue(series, n),
                    "form_label": form.label,
                    "subgroup_order": form.order,
                    "verdict": "yes" if form.order % 2 else "no",
                }
            )
    return sorted(rows, key=_row_key)


def _row_key(r):
    return (r["series"], r["rank"], r["subgroup_order"], r["form_label"])


def load_golden(name: str) -> list[dict]:
    text = resources.files("aqlam.data").joinpath(name).read_text()
    return [json.loads(line) for line in text.splitlines() if line.strip()]


# -- groups with two components ------------------------------------------


def class_S_indicator(desc: CompactFormDescriptor, lam) -> FSIndicator:
    """Indicator of the irreducible of the full group containing the identity-component
    irreducible of highest weight ``lam``."""
    if not isinstance(desc, CompactFormDescriptor):
        raise FSError("expected a CompactFormDescriptor")
    lam = tuple(lam)
    if desc.form is None:
        return _torus_indicator(desc, lam)
    base = fs_indicator_compact(desc.form, lam)
    if desc.connected:
        return FSIndicator(base.value, "connected")
    rs = desc.form.rs
    moved = desc.act(lam)
    if moved == lam:
        return FSIndicator(base.value, "restriction irreducible: inherited")
    if base.value != 0:
        return FSIndicator(base.value, "induced from a self-dual constituent")
    if moved == delta_tau(rs, lam):
        return FSIndicator(1, "induced from a conjugate pair; exceptional sign excluded over number fields")
    return FSIndicator(0, "induced, not self-dual")


def _torus_indicator(desc, lam) -> FSIndicator:
    if len(lam) != desc.torus_rank:
        raise FSError("character length does not match the torus rank")
    selfdual = all(x == 0 for x in lam)
    if desc.connected:
        return FSIndicator(1 if selfdual else 0, "connected torus")
    if selfdual:
        return FSIndicator(1, "restriction irreducible: inherited")
    if desc.act(lam) == tuple(-x for x in lam):
        return FSIndicator(1, "induced from a conjugate pair; exceptional sign excluded over number fields")
    return FSIndicator(0, "induced, not self-dual")


# -- admissibility rule engine -------------------------------------------

REQUIRED_FACTS = ("class_S", "anisotropic_at_real_place")


def _orthogonal_factor(n: int):
    if n < 1:
        raise FSError("orthogonal group needs n >= 1")
    if n == 1:
        return None
    if n == 2:
        return ("torus", 1)
    if n == 3:
        return ("A1", "ad")
    if n == 4:
        return ("A1xA1", [[1, 1]])
    if n % 2:
        return (f"B{n // 2}", "ad")
    return (f"D{n // 2}", "SO(2n)")


def _factor_forms(factor: dict):
    """Normalize a factor entry to ``("unitary", n)``, ``("torus", r)`` or an IsogenyForm."""
    if "unitary" in factor:
        return ("unitary", int(factor["unitary"]))
    if "torus" in factor:
        return ("torus", int(factor["torus"]))
    if "orthogonal" in factor:
        orth = _orthogonal_factor(int(factor["orthogonal"]))
        if orth is None or orth[0] == "torus":
            return ("torus", 0 if orth is None else 1)
        return parse_form(build_root_system(orth[0]), orth[1])
    if "type" in factor:
        return parse_form(build_root_system(factor["type"]), factor.get("form", "sc"))
    raise FSError(f"unrecognised factor {factor!r}")


@dataclass
class AdmissibilityReport:
    verdict: str
    rule_trace: list = field(default_factory=list)
    missing: list = field(default_factory=list)

    def as_dict(self):
        return {"verdict": self.verdict, "rule_trace": list(self.rule_trace), "missing": list(self.missing)}


def admissibility_report(descriptor: dict) -> AdmissibilityReport:
    """Decide admissible / semi-admissible / neither from supplied arithmetic facts.

    Keys: ``class_S``, ``anisotropic_at_real_place``, ``quasi_split_except_one``
    (booleans) and ``factors`` (list of ``{"type", "form"}``, ``{"unitary": n}``,
    ``{"orthogonal": n}`` or ``{"torus": r}`` entries describing the identity component).
    """
    trace = []
    missing = [k for k in REQUIRED_FACTS if descriptor.get(k) is None]
    if "factors" not in descriptor:
        missing.append("factors")
    if missing:
        return AdmissibilityReport("undetermined", ["required facts missing"], missing)
    if not descriptor["class_S"]:
        return AdmissibilityReport("neither", ["class S hypothesis fails"])
    if not descriptor["anisotropic_at_real_place"]:
        return AdmissibilityReport("neither", ["identity component isotropic at the ramified real place"])
    trace.append("class S and anisotropic at the ramified real place")

    factors = [_factor_forms(f) for f in descriptor["factors"]]
    semisimple = [f for f in factors if isinstance(f, IsogenyForm)]
    unitary = [f for f in factors if not isinstance(f, IsogenyForm) and f[0] == "unitary"]
    odd = all(f.order % 2 == 1 for f in semisimple)
    if odd:
        if unitary:
            trace.append("product of unitary groups with factors of odd center dual: beta trivial")
        else:
            trace.append("all simple factors have center dual of odd order: beta trivial")
        return AdmissibilityReport("admissible", trace)

    qs = descriptor.get("quasi_split_except_one")
    if qs is None:
        return AdmissibilityReport("undetermined", trace + ["finite-place hypothesis needed"], ["quasi_split_except_one"])
    if not qs:
        trace.append("no criterion fired: not quasi-split at two or more finite places")
        return AdmissibilityReport("neither", trace)
    trace.append("quasi-split at all finite places but one: semi-admissible")
    if unitary:
        # U(n) alone has trivial beta; it does not spoil the real-place test
        pass
    if all(form_has_no_quaternionic(f) for f in semisimple):
        trace.append("no quaternionic representation at the real place: semi-admissible model is admissible")
        return AdmissibilityReport("admissible", trace)
    trace.append("quaternionic representations exist at the real place")
    return AdmissibilityReport("semi-admissible", trace)


__all__ = [
    "AdmissibilityReport",
    "CompactFormDescriptor",
    "FSError",
    "FSIndicator",
    "admissibility_report",
    "beta_map",
    "central_parity",
    "class_S_indicator",
    "classify_admissible_forms",
    "fs_indicator_compact",
    "fs_indicator_oracle",
    "load_golden",
    "unconditional_forms",
]
