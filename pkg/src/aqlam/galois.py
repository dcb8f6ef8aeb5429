"""Complex conjugation acting on weights through the negated longest Weyl element."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .lattice import class_of, weight_mod_root_lattice
from .roots import RootSystem, build_root_system


def delta_tau(rs: RootSystem, lam) -> tuple:
    """``-w0(lam)``: the action of complex conjugation on a weight."""
    rs.check_weight(lam)
    w0lam = rs.weyl_act(rs.longest_element_word, lam)
    return tuple(-x for x in w0lam)


@lru_cache(maxsize=None)
def _diagram_permutation(cartan_type) -> tuple:
    rs = build_root_system(cartan_type)
    n = rs.rank
    perm = []
    for i in range(n):
        image = delta_tau(rs, tuple(int(i == j) for j in range(n)))
        perm.append(image.index(1))
    return tuple(perm)


def diagram_automorphism(rs: RootSystem) -> tuple:
    """Permutation ``sigma`` of simple indices with ``-w0(alpha_i) = alpha_sigma(i)``."""
    return _diagram_permutation(rs.cartan_type)


def is_selfdual(rs: RootSystem, lam) -> bool:
    """Whether the irreducible of highest weight ``lam`` is isomorphic to its dual."""
    return delta_tau(rs, lam) == tuple(lam)


def quotient_action(rs: RootSystem, cls) -> tuple:
    """Induced action of complex conjugation on the weight/root quotient."""
    group = weight_mod_root_lattice(rs)
    cls = tuple(cls)
    # the class map is linear, so it is enough to act on a lift
    lift = [0] * rs.rank
    for coeff, gen in zip(cls, group.generators):
        for i, x in enumerate(gen):
            lift[i] += coeff * x
    return class_of(rs, delta_tau(rs, tuple(lift)))


def fixed_classes(rs: RootSystem, subgroup=None) -> list:
    group = weight_mod_root_lattice(rs)
    elems = group.elements() if subgroup is None else sorted(subgroup)
    return [c for c in elems if quotient_action(rs, c) == c]


@dataclass(frozen=True)
class InfinitesimalCharacter:
    """A Weyl orbit of (rho-shifted) weights, compared through dominant representatives."""

    rs: RootSystem
    representative: tuple

    @property
    def dominant(self) -> tuple:
        return self.rs.dominant_rep(self.representative)

    def __eq__(self, other):
        if not isinstance(other, InfinitesimalCharacter):
            return NotImplemented
        return self.rs.cartan_type == other.rs.cartan_type and self.dominant == other.dominant

    def __hash__(self):
        return hash((self.rs.cartan_type, self.dominant))

    @classmethod
    def of_highest_weight(cls, rs: RootSystem, lam) -> "InfinitesimalCharacter":
        return cls(rs, tuple(a + b for a, b in zip(lam, rs.rho)))


def twist_infinitesimal_character(chi: InfinitesimalCharacter) -> InfinitesimalCharacter:
    """Conjugate an infinitesimal character; ``lam + rho`` goes to ``-w0(lam) + rho``."""
    # -w0 fixes rho, so it is enough to transport the whole representative
    return InfinitesimalCharacter(chi.rs, delta_tau(chi.rs, chi.representative))


__all__ = [
    "InfinitesimalCharacter",
    "delta_tau",
    "diagram_automorphism",
    "fixed_classes",
    "is_selfdual",
    "quotient_action",
    "twist_infinitesimal_character",
]
