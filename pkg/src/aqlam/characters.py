"""Virtual torus characters, Kostant's u-cohomology and localized characters.

Characters are finitely supported maps from weights (fundamental coordinates)
to integers. Levi-irreducible modules are expanded into their full torus
characters, so every identity below is an identity in the group ring of the
weight lattice.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .galois import delta_tau, diagram_automorphism
from .roots import RootSystem, build_root_system


def _w(v) -> tuple:
    v = tuple(v)
    if all(type(x) is int for x in v):
        return v
    return tuple(int(x) if Fraction(x).denominator == 1 else Fraction(x) for x in v)


class CharacterElement:
    """A virtual character ``sum m_mu [mu]``."""

    __slots__ = ("terms",)

    def __init__(self, terms=None, _normalized=False):
        if _normalized:
            self.terms = {mu: m for mu, m in terms.items() if m}
            return
        clean = {}
        for mu, m in (terms or {}).items():
            if m:
                clean[_w(mu)] = clean.get(_w(mu), 0) + m
        self.terms = {mu: m for mu, m in clean.items() if m}

    @classmethod
    def of_weight(cls, mu, m: int = 1):
        return cls({tuple(mu): m})

    @classmethod
    def one(cls, rank: int):
        return cls({(0,) * rank: 1})

    def __add__(self, other):
        out = defaultdict(int, self.terms)
        for mu, m in other.terms.items():
            out[mu] += m
        return CharacterElement(out, _normalized=True)

    def __neg__(self):
        return CharacterElement({mu: -m for mu, m in self.terms.items()}, _normalized=True)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return CharacterElement({mu: m * other for mu, m in self.terms.items()}, _normalized=True)
        out = defaultdict(int)
        for mu, a in self.terms.items():
            for nu, b in other.terms.items():
                out[tuple(x + y for x, y in zip(mu, nu))] += a * b
        return CharacterElement(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, CharacterElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"CharacterElement({self.to_list()})"

    def dual(self) -> "CharacterElement":
        return CharacterElement({tuple(-x for x in mu): m for mu, m in self.terms.items()})

    def map_weights(self, f) -> "CharacterElement":
        out = defaultdict(int)
        for mu, m in self.terms.items():
            out[tuple(f(mu))] += m
        return CharacterElement(out)

    def degree(self) -> int:
        """Virtual dimension."""
        return sum(self.terms.values())

    def to_list(self):
        return [[[str(x) for x in mu], m] for mu, m in sorted(self.terms.items())]


@dataclass(frozen=True)
class LocalizedCharacter:
    numerator: CharacterElement
    denominator: CharacterElement

    def __post_init__(self):
        if not self.denominator:
            raise ZeroDivisionError("zero denominator")

    def __eq__(self, other):
        if not isinstance(other, LocalizedCharacter):
            return NotImplemented
        return self.numerator * other.denominator == other.numerator * self.denominator

    def __hash__(self):  # equality is up to cross-multiplication
        return 0

    def __add__(self, other):
        if self.denominator == other.denominator:
            return LocalizedCharacter(self.numerator + other.numerator, self.denominator)
        return LocalizedCharacter(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    def __mul__(self, other):
        return LocalizedCharacter(self.numerator * other.numerator, self.denominator * other.denominator)

    def dual(self):
        return LocalizedCharacter(self.numerator.dual(), self.denominator.dual())

    def map_weights(self, f):
        return LocalizedCharacter(self.numerator.map_weights(f), self.denominator.map_weights(f))


# -- Levi subsystems ------------------------------------------------------------


class LeviSubsystem:
    """Reductive Levi ``l`` spanned by a subset of the simple roots."""

    def __init__(self, rs: RootSystem, levi):
        self.rs = rs
        self.levi = frozenset(levi)
        coords = rs.positive_roots_root_coords
        self.positive = [k for k, c in enumerate(coords) if all(x == 0 or i in self.levi for i, x in enumerate(c))]
        self.u_roots = [k for k in range(len(coords)) if k not in set(self.positive)]

    def is_dominant(self, mu) -> bool:
        return all(mu[i] >= 0 for i in self.levi)

    def dominant(self, mu) -> tuple:
        mu = list(mu)
        while True:
            for i in self.levi:
                if mu[i] < 0:
                    mu = list(self.rs.reflect(i, tuple(mu)))
                    break
            else:
                return _w(mu)

    def orbit(self, mu) -> set:
        mu = _w(mu)
        seen = {mu}
        frontier = [mu]
        while frontier:
            nxt = []
            for nu in frontier:
                for i in self.levi:
                    r = _w(self.rs.reflect(i, nu))
                    if r not in seen:
                        seen.add(r)
                        nxt.append(r)
            frontier = nxt
        return seen

    def character(self, mu) -> CharacterElement:
        return CharacterElement(_levi_character(self.rs.cartan_type, self.levi, _w(mu)))


@lru_cache(maxsize=4096)
def _levi_character(cartan_type, levi, mu) -> dict:
    """Freudenthal's formula for the Levi-irreducible of highest weight ``mu``."""
    rs = build_root_system(cartan_type)
    L = LeviSubsystem(rs, levi)
    if not L.is_dominant(mu):
        raise ValueError(f"{mu} is not dominant for the Levi {sorted(levi)}")
    roots = [rs.positive_roots[k] for k in L.positive]
    rho_l = tuple(Fraction(sum(r[i] for r in roots), 2) for i in range(rs.rank))

    def below(nu):  # mu - nu a nonnegative integer combination of Levi simple roots
        c = rs.to_root_coords(tuple(a - b for a, b in zip(mu, nu)))
        return all(Fraction(x).denominator == 1 and x >= 0 and (x == 0 or i in levi) for i, x in enumerate(c))

    dom = {mu: 0}
    frontier = [mu]
    while frontier:
        nxt = []
        for nu in frontier:
            for r in roots:
                cand = L.dominant(tuple(a - b for a, b in zip(nu, r)))
                if cand not in dom and below(cand):
                    dom[cand] = sum(rs.to_root_coords(tuple(a - b for a, b in zip(mu, cand))))
                    nxt.append(cand)
        frontier = nxt
    order = sorted(dom, key=lambda nu: dom[nu])
    mult = {mu: 1}
    mr = tuple(a + b for a, b in zip(mu, rho_l))
    norm_mr = rs.inner(mr, mr)
    for nu in order[1:]:
        total = Fraction(0)
        for r in roots:
            # weights along an alpha-string are unbroken, so stop at the first gap
            k = 1
            while True:
                x = tuple(a + k * b for a, b in zip(nu, r))
                d = L.dominant(x)
                if d not in dom:
                    break
                total += mult[d] * rs.inner(x, r)
                k += 1
        nr = tuple(a + b for a, b in zip(nu, rho_l))
        val = 2 * total / (norm_mr - rs.inner(nr, nr))
        if val.denominator != 1:
            raise ArithmeticError("non-integral weight multiplicity")
        mult[nu] = int(val)
    out = {}
    for nu, m in mult.items():
        if m:
            for x in L.orbit(nu):
                out[x] = m
    return out


# -- Kostant ----------------------------------------------------------------------


def _check_dominant_integral(rs: RootSystem, lam):
    lam = tuple(lam)
    if len(lam) != rs.rank or any(Fraction(x).denominator != 1 or x < 0 for x in lam):
        raise ValueError(f"{lam} is not dominant integral for {rs.cartan_type}")
    return _w(lam)


def minimal_coset_representatives(rs: RootSystem, levi) -> list:
    """``[(w rho, word)]`` for ``w`` in ``W^l`` (``w^{-1}`` keeps Levi positive roots positive)."""
    levi = frozenset(levi)
    out = []
    for wrho, word in rs.weyl_group_elements().items():
        if all(wrho[i] > 0 for i in levi):
            out.append((wrho, word))
    return out


def kostant_u_cohomology(rs: RootSystem, levi, lam, q: int) -> CharacterElement:
    lam = _check_dominant_integral(rs, lam)
    L = LeviSubsystem(rs, levi)
    if q < 0 or q > len(L.u_roots):
        return CharacterElement()
    lr = tuple(a + b for a, b in zip(lam, rs.rho))
    out = CharacterElement()
    for _, word in minimal_coset_representatives(rs, levi):
        if len(word) != q:
            continue
        mu = tuple(a - b for a, b in zip(rs.weyl_act(word, lr), rs.rho))
        out = out + L.character(mu)
    return out


def kostant_highest_weights(rs: RootSystem, levi, lam) -> list:
    """``[(degree, highest weight)]`` of the Levi constituents of ``H^*(u, V_lam)``."""
    lam = _check_dominant_integral(rs, lam)
    lr = tuple(a + b for a, b in zip(lam, rs.rho))
    out = []
    for _, word in minimal_coset_representatives(rs, levi):
        mu = tuple(a - b for a, b in zip(rs.weyl_act(word, lr), rs.rho))
        out.append((len(word), _w(mu)))
    return sorted(out)


def euler_character_H_q(rs: RootSystem, levi, lam) -> CharacterElement:
    lam = _check_dominant_integral(rs, lam)
    L = LeviSubsystem(rs, levi)
    out = CharacterElement()
    for q, mu in kostant_highest_weights(rs, levi, lam):
        out = out + L.character(mu) * (-1) ** q
    return out


def weyl_denominator(rs: RootSystem, levi) -> CharacterElement:
    return euler_character_H_q(rs, levi, (0,) * rs.rank)


def c_q(rs: RootSystem, levi, lam) -> LocalizedCharacter:
    return LocalizedCharacter(euler_character_H_q(rs, levi, lam), weyl_denominator(rs, levi))


def full_character(rs: RootSystem, lam) -> CharacterElement:
    """``ch V_lam`` from the root system's own Freudenthal implementation."""
    return CharacterElement(rs.character(_check_dominant_integral(rs, lam)))


def exterior_u_dual_oracle(rs: RootSystem, levi, lam) -> CharacterElement:
    """``sum_q (-1)^q [wedge^q u^* (x) V_lam]`` computed directly on the torus."""
    L = LeviSubsystem(rs, levi)
    ext = CharacterElement.one(rs.rank)
    for k in L.u_roots:
        neg = tuple(-x for x in rs.positive_roots[k])
        ext = ext * CharacterElement({(0,) * rs.rank: 1, neg: -1})
    return ext * full_character(rs, lam)


# -- tensor products, duals, Galois twist --------------------------------------------


def decompose(rs: RootSystem, ch: CharacterElement) -> dict:
    """Highest weights with multiplicities of a (virtual) character of ``g``."""
    remaining = dict(ch.terms)
    out = {}
    while remaining:
        top = max(remaining, key=lambda mu: (sum(rs.to_root_coords(mu)), mu))
        m = remaining[top]
        if not rs.is_dominant(top):
            raise ValueError("character is not Weyl-invariant")
        out[top] = out.get(top, 0) + m
        for nu, k in rs.character(top).items():
            v = remaining.get(nu, 0) - m * k
            if v:
                remaining[nu] = v
            else:
                remaining.pop(nu, None)
    return out


def tensor_decomposition(rs: RootSystem, lam, mu) -> dict:
    return decompose(rs, full_character(rs, lam) * full_character(rs, mu))


def dual_highest_weight(rs: RootSystem, lam) -> tuple:
    return delta_tau(rs, lam)


def galois_twist_character(rs: RootSystem, x):
    """Apply ``-w0`` to every term (works on characters and localized characters)."""
    return x.map_weights(lambda mu: delta_tau(rs, mu))


def conjugate_levi(rs: RootSystem, levi) -> frozenset:
    sigma = diagram_automorphism(rs)
    return frozenset(sigma[i] for i in levi)


__all__ = [
    "CharacterElement",
    "LeviSubsystem",
    "LocalizedCharacter",
    "c_q",
    "conjugate_levi",
    "decompose",
    "dual_highest_weight",
    "euler_character_H_q",
    "exterior_u_dual_oracle",
    "full_character",
    "galois_twist_character",
    "kostant_highest_weights",
    "kostant_u_cohomology",
    "minimal_coset_representatives",
    "tensor_decomposition",
    "weyl_denominator",
]
