"""Exact root systems, weights and Weyl group arithmetic.

Weights are plain tuples of exact numbers (``int`` or ``Fraction``) in the
fundamental-weight basis. Simple roots are the rows of the Cartan matrix in
that basis, so ``<lambda, alpha_i^vee>`` is just the ``i``-th coordinate.
"""

from __future__ import annotations

import os
import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import prod

Weight = tuple

DEFAULT_ORBIT_CAP = 10**6

_RANK_OK = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "C": lambda n: n >= 2,
    "D": lambda n: n >= 3,
    "E": lambda n: n in (6, 7, 8),
    "F": lambda n: n == 4,
    "G": lambda n: n == 2,
}


class RootSystemError(ValueError):
    pass


class OrbitCapExceeded(RuntimeError):
    pass


def orbit_cap() -> int:
    env = os.environ.get("AQLAM_ORBIT_CAP")
    return int(env) if env else DEFAULT_ORBIT_CAP


@dataclass(frozen=True)
class CartanType:
    """A product of simple Cartan types, e.g. ``(("A", 2), ("A", 1))``."""

    factors: tuple

    def __post_init__(self):
        if not self.factors:
            raise RootSystemError("empty Cartan type")
        for series, rank in self.factors:
            if series not in _RANK_OK:
                raise RootSystemError(f"unknown series {series!r}")
            if not isinstance(rank, int) or not _RANK_OK[series](rank):
                raise RootSystemError(f"invalid rank {rank} for series {series}")

    @classmethod
    def parse(cls, label: str) -> "CartanType":
        """Parse labels such as ``"B2"``, ``"A2xA1"`` or ``"E8"``."""
        factors = []
        for part in re.split(r"[x×*]", label.replace(" ", "")):
            m = re.fullmatch(r"([A-Ga-g])(\d+)", part)
            if not m:
                raise RootSystemError(f"cannot parse Cartan type {label!r}")
            factors.append((m.group(1).upper(), int(m.group(2))))
        return cls(tuple(factors))

    @property
    def rank(self) -> int:
        return sum(r for _, r in self.factors)

    @property
    def is_simple(self) -> bool:
        return len(self.factors) == 1

    def __str__(self):
        return "x".join(f"{s}{r}" for s, r in self.factors)


def _simple_cartan_matrix(series: str, n: int) -> list[list[int]]:
    """Bourbaki-numbered Cartan matrix with ``A[i][j] = <alpha_i, alpha_j^vee>``."""
    A = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i, j, a_ij=-1, a_ji=-1):
        A[i][j] = a_ij
        A[j][i] = a_ji

    if series in "ABC":
        for i in range(n - 1):
            link(i, i + 1)
        if series == "B":
            link(n - 2, n - 1, -2, -1)  # alpha_n short
        elif series == "C":
            link(n - 2, n - 1, -1, -2)  # alpha_n long
    elif series == "D":
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 3, n - 1)
    elif series == "E":
        link(0, 2)
        link(1, 3)
        for i in range(2, n - 1):
            link(i, i + 1)
    elif series == "F":
        link(0, 1)
        link(1, 2, -2, -1)
        link(2, 3)
    elif series == "G":
        link(0, 1, -1, -3)  # alpha_1 short
    return A


def _simple_root_lengths(series: str, n: int) -> list[int]:
    """Half squared lengths ``d_i`` with ``(alpha_i, alpha_j) = A[i][j] * d_j``."""
    if series == "B":
        return [2] * (n - 1) + [1]
    if series == "C":
        return [1] * (n - 1) + [2]
    if series == "F":
        return [2, 2, 1, 1]
    if series == "G":
        return [1, 3]
    return [1] * n


def _invert(M):
    n = len(M)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        p = next(r for r in range(c, n) if aug[r][c] != 0)
        aug[c], aug[p] = aug[p], aug[c]
        piv = aug[c][c]
        aug[c] = [x / piv for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c] != 0:
                f = aug[r][c]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def _norm(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def as_weight(coords) -> Weight:
    """Coerce an iterable of numbers/strings into a normalized exact weight."""
    return tuple(_norm(Fraction(c)) for c in coords)


@dataclass(frozen=True)
class WeylWord:
    """Word in simple reflections; ``letters[-1]`` acts first."""

    letters: tuple = ()

    def __len__(self):
        return len(self.letters)

    def inverse(self) -> "WeylWord":
        return WeylWord(tuple(reversed(self.letters)))

    def __mul__(self, other: "WeylWord") -> "WeylWord":
        return WeylWord(self.letters + other.letters)


class RootSystem:
    """Root datum of a (product) Cartan type with cached derived data."""

    def __init__(self, cartan_type: CartanType):
        self.cartan_type = cartan_type
        n = cartan_type.rank
        self.rank = n
        A = [[0] * n for _ in range(n)]
        d = []
        off = 0
        self.blocks = []
        for series, r in cartan_type.factors:
            block = _simple_cartan_matrix(series, r)
            for i in range(r):
                for j in range(r):
                    A[off + i][off + j] = block[i][j]
            d.extend(_simple_root_lengths(series, r))
            self.blocks.append(range(off, off + r))
            off += r
        self.cartan_matrix = A
        self.root_lengths = d
        self.simple_roots = [tuple(row) for row in A]

    def __repr__(self):
        return f"RootSystem({self.cartan_type})"

    # -- derived data -------------------------------------------------

    @cached_property
    def inverse_cartan(self):
        return _invert(self.cartan_matrix)

    @cached_property
    def _positive_root_data(self):
        # closure of the simple roots (root coordinates) under simple reflections
        n, A = self.rank, self.cartan_matrix
        simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        seen = set(simple)
        queue = deque(simple)
        while queue:
            c = queue.popleft()
            for i in range(n):
                pair = sum(c[j] * A[j][i] for j in range(n))
                if pair == 0:
                    continue
                new = tuple(c[j] - (pair if j == i else 0) for j in range(n))
                if all(x >= 0 for x in new) and new not in seen:
                    seen.add(new)
                    queue.append(new)
        roots = sorted(seen, key=lambda c: (sum(c), c))
        return roots

    @cached_property
    def positive_roots_root_coords(self) -> list[tuple]:
        return list(self._positive_root_data)

    @cached_property
    def positive_roots(self) -> list[Weight]:
        A = self.cartan_matrix
        n = self.rank
        return [tuple(sum(c[i] * A[i][j] for i in range(n)) for j in range(n)) for c in self._positive_root_data]

    @cached_property
    def positive_coroots(self) -> list[tuple]:
        """Positive coroots in the simple-coroot basis (integer vectors)."""
        d = self.root_lengths
        out = []
        for c in self._positive_root_data:
            length = self.root_half_length(c)
            out.append(tuple(c[i] * d[i] // length for i in range(self.rank)))
        return out

    def root_half_length(self, root_coords) -> int:
        """``(alpha, alpha) / 2`` for a root given in root coordinates."""
        n, A, d = self.rank, self.cartan_matrix, self.root_lengths
        s = sum(root_coords[i] * root_coords[j] * A[i][j] * d[j] for i in range(n) for j in range(n))
        return s // 2

    @cached_property
    def rho(self) -> Weight:
        return (1,) * self.rank

    @cached_property
    def rho_check(self) -> tuple:
        """Half sum of positive coroots, in the simple-coroot basis."""
        tot = [0] * self.rank
        for c in self.positive_coroots:
            for i, x in enumerate(c):
                tot[i] += x
        return tuple(_norm(Fraction(x, 2)) for x in tot)

    @cached_property
    def two_rho_check(self) -> tuple:
        return tuple(int(2 * x) for x in self.rho_check)

    @cached_property
    def gram(self) -> list[list[Fraction]]:
        """Invariant form on weights: ``(omega_i, omega_j)``."""
        Ainv, d = self.inverse_cartan, self.root_lengths
        n = self.rank
        return [[Ainv[j][i] * d[i] for j in range(n)] for i in range(n)]

    @cached_property
    def _int_gram(self):
        den = 1
        for row in self.gram:
            for x in row:
                den = den * x.denominator // _gcd(den, x.denominator)
        return den, [[int(x * den) for x in row] for row in self.gram]

    def inner(self, lam, mu):
        """Exact invariant inner product ``(lam, mu)``."""
        den, G = self._int_gram
        n = self.rank
        s = sum(lam[i] * G[i][j] * mu[j] for i in range(n) for j in range(n) if lam[i] and mu[j])
        return _norm(Fraction(s) / den)

    def inner_scaled(self, lam, mu):
        """``den * (lam, mu)`` for a fixed integer ``den``; cheap for integral weights."""
        den, G = self._int_gram
        n = self.rank
        return sum(lam[i] * G[i][j] * mu[j] for i in range(n) if lam[i] for j in range(n) if mu[j])

    @cached_property
    def longest_element_word(self) -> WeylWord:
        _, word = self.make_dominant(tuple(-x for x in self.rho))
        return word

    @cached_property
    def weyl_group_order(self) -> int:
        return len(self.weyl_group_elements())

    # -- weights ------------------------------------------------------

    def check_weight(self, lam):
        if len(lam) != self.rank:
            raise RootSystemError(f"weight {lam} has length {len(lam)}, expected {self.rank}")

    def to_root_coords(self, lam) -> tuple:
        Ainv = self.inverse_cartan
        n = self.rank
        return tuple(_norm(sum((Fraction(lam[j]) * Ainv[j][i] for j in range(n)), Fraction(0))) for i in range(n))

    def from_root_coords(self, c) -> Weight:
        A, n = self.cartan_matrix, self.rank
        return tuple(_norm(Fraction(sum(c[i] * A[i][j] for i in range(n)))) for j in range(n))

    def pairing(self, lam, coroot) -> Fraction | int:
        """``<lam, coroot>``; ``coroot`` is a simple index or a vector in the coroot basis."""
        self.check_weight(lam)
        if isinstance(coroot, int):
            if not 0 <= coroot < self.rank:
                raise RootSystemError(f"simple index {coroot} out of range")
            return lam[coroot]
        if len(coroot) != self.rank:
            raise RootSystemError("coroot dimension mismatch")
        return _norm(Fraction(sum(Fraction(a) * b for a, b in zip(lam, coroot))))

    def is_integral(self, lam) -> bool:
        return all(Fraction(x).denominator == 1 for x in lam)

    def is_dominant(self, lam) -> bool:
        return all(x >= 0 for x in lam)

    def reflect(self, i: int, lam) -> Weight:
        c = lam[i]
        if c == 0:
            return tuple(lam)
        a = self.simple_roots[i]
        return tuple(x - c * y for x, y in zip(lam, a))

    def weyl_act(self, word, lam) -> Weight:
        letters = word.letters if isinstance(word, WeylWord) else tuple(word)
        self.check_weight(lam)
        for i in reversed(letters):
            if not 0 <= i < self.rank:
                raise RootSystemError(f"letter {i} out of range")
            lam = self.reflect(i, lam)
        return tuple(lam)

    def make_dominant(self, lam) -> tuple[Weight, WeylWord]:
        """Return ``(mu, w)`` with ``mu`` dominant and ``weyl_act(w, lam) == mu``."""
        self.check_weight(lam)
        lam = tuple(lam)
        applied = []
        while True:
            i = next((k for k, x in enumerate(lam) if x < 0), None)
            if i is None:
                return lam, WeylWord(tuple(reversed(applied)))
            lam = self.reflect(i, lam)
            applied.append(i)

    def dominant_rep(self, lam) -> Weight:
        lam = tuple(lam)
        while True:
            i = next((k for k, x in enumerate(lam) if x < 0), None)
            if i is None:
                return lam
            lam = self.reflect(i, lam)

    def weyl_orbit(self, lam, cap: int | None = None) -> set:
        cap = orbit_cap() if cap is None else cap
        self.check_weight(lam)
        start = tuple(lam)
        seen = {start}
        queue = deque([start])
        while queue:
            mu = queue.popleft()
            for i in range(self.rank):
                if mu[i] == 0:
                    continue
                nu = self.reflect(i, mu)
                if nu not in seen:
                    seen.add(nu)
                    if len(seen) > cap:
                        raise OrbitCapExceeded(f"Weyl orbit of {start} exceeds cap {cap}")
                    queue.append(nu)
        return seen

    def weyl_group_elements(self, cap: int | None = None) -> dict:
        """Map ``w(rho) -> reduced word of w`` for every Weyl group element."""
        cap = orbit_cap() if cap is None else cap
        rho = self.rho
        words = {rho: ()}
        queue = deque([rho])
        while queue:
            mu = queue.popleft()
            for i in range(self.rank):
                if mu[i] <= 0:
                    continue  # only length-increasing steps keep the words reduced
                nu = self.reflect(i, mu)
                if nu not in words:
                    words[nu] = (i,) + words[mu]
                    if len(words) > cap:
                        raise OrbitCapExceeded(f"Weyl group of {self.cartan_type} exceeds cap {cap}")
                    queue.append(nu)
        return {k: WeylWord(v) for k, v in words.items()}

    def length(self, word) -> int:
        """Number of positive roots sent to negative roots."""
        mu = self.weyl_act(word, self.rho)
        return sum(1 for c in self.positive_coroots if sum(a * b for a, b in zip(mu, c)) < 0)

    # -- representations ---------------------------------------------

    def _require_dominant_integral(self, lam):
        self.check_weight(lam)
        if not self.is_integral(lam) or not self.is_dominant(lam):
            raise RootSystemError(f"weight {lam} is not dominant integral")

    def weyl_dimension(self, lam) -> int:
        self._require_dominant_integral(lam)
        num = den = 1
        for c in self.positive_coroots:
            num *= sum((int(x) + 1) * y for x, y in zip(lam, c))
            den *= sum(c)
        return num // den

    def dominant_weights_below(self, lam) -> list[Weight]:
        """Dominant weights of the irreducible module of highest weight ``lam``."""
        self._require_dominant_integral(lam)
        lam = tuple(int(x) for x in lam)
        found = {lam}
        queue = deque([lam])
        roots = self.positive_roots
        while queue:
            mu = queue.popleft()
            for a in roots:
                nu = tuple(x - y for x, y in zip(mu, a))
                if nu not in found and all(x >= 0 for x in nu):
                    found.add(nu)
                    queue.append(nu)
        return sorted(found, key=lambda mu: (self._depth(lam, mu), mu))

    def _depth(self, lam, mu) -> int:
        return int(sum(self.to_root_coords(tuple(a - b for a, b in zip(lam, mu)))))

    def dominant_multiplicities(self, lam) -> dict:
        """Freudenthal recursion restricted to dominant weights."""
        lam = tuple(int(x) for x in lam)
        doms = self.dominant_weights_below(lam)
        roots = list(zip(self.positive_roots, self.positive_roots_root_coords))
        rho = self.rho
        lr = tuple(a + b for a, b in zip(lam, rho))
        top = self.inner_scaled(lr, lr)
        diff_root = {mu: self.to_root_coords(tuple(a - b for a, b in zip(lam, mu))) for mu in doms}
        mult = {lam: 1}
        dom_cache = {}

        def m(nu):
            d = dom_cache.get(nu)
            if d is None:
                d = self.dominant_rep(nu)
                dom_cache[nu] = d
            return mult.get(d, 0)

        for mu in doms[1:]:
            mr = tuple(a + b for a, b in zip(mu, rho))
            denom = top - self.inner_scaled(mr, mr)
            total = 0
            base = diff_root[mu]
            for a, ac in roots:
                k = 1
                nu = mu
                while True:
                    if any(b - k * c < 0 for b, c in zip(base, ac)):
                        break
                    nu = tuple(x + y for x, y in zip(nu, a))
                    mn = m(nu)
                    if mn:
                        total += self.inner_scaled(nu, a) * mn
                    k += 1
            val = Fraction(2 * total, denom)
            if val.denominator != 1:
                raise ArithmeticError(f"non-integral multiplicity at {mu}")
            mult[mu] = int(val)
        return {mu: c for mu, c in mult.items() if c}

    def freudenthal_multiplicities(self, lam, cap: int | None = None) -> dict:
        """All weight multiplicities of the irreducible of highest weight ``lam``."""
        self._require_dominant_integral(lam)
        out = {}
        for mu, c in self.dominant_multiplicities(lam).items():
            for nu in self.weyl_orbit(mu, cap):
                out[nu] = c
        return out

    def character(self, lam) -> dict:
        return self.freudenthal_multiplicities(lam)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


_CACHE: dict = {}


def build_root_system(t) -> RootSystem:
    """Build (and memoize) the root system of a Cartan type or label."""
    if isinstance(t, str):
        t = CartanType.parse(t)
    elif isinstance(t, (list, tuple)) and t and isinstance(t[0], str):
        t = CartanType((tuple(t),))
    elif not isinstance(t, CartanType):
        t = CartanType(tuple(tuple(f) for f in t))
    rs = _CACHE.get(t)
    if rs is None:
        rs = _CACHE[t] = RootSystem(t)
    return rs


def simple_types(max_rank: int):
    """All simple Cartan types of rank ``<= max_rank`` (no duplicates like C2/B2 removed)."""
    out = []
    for series in "ABCDEFG":
        for n in range(1, max_rank + 1):
            if _RANK_OK[series](n):
                out.append(CartanType(((series, n),)))
    return out


def dominant_weights_up_to_dimension(rs: RootSystem, max_dim: int) -> list[Weight]:
    """Dominant integral weights whose irreducible has dimension ``<= max_dim``."""
    n = rs.rank
    out = []

    def rec(prefix):
        i = len(prefix)
        if i == n:
            out.append(tuple(prefix))
            return
        k = 0
        while True:
            trial = tuple(prefix) + (k,) + (0,) * (n - i - 1)
            if rs.weyl_dimension(trial) > max_dim:
                break
            rec(prefix + [k])
            k += 1

    rec([])
    return sorted(out, key=lambda w: (sum(w), w))


def dominant_weights_by_sum(rank: int, max_sum: int):
    """Dominant integral weights with coordinate sum ``<= max_sum``."""
    for coords in product(range(max_sum + 1), repeat=rank):
        if sum(coords) <= max_sum:
            yield coords


def count_positive_roots(series: str, n: int) -> int:
    return {
        "A": n * (n + 1) // 2,
        "B": n * n,
        "C": n * n,
        "D": n * (n - 1),
        "E": {6: 36, 7: 63, 8: 120}.get(n, 0),
        "F": 24,
        "G": 6,
    }[series]


def weyl_group_order_formula(series: str, n: int) -> int:
    from math import factorial

    return {
        "A": factorial(n + 1),
        "B": 2**n * factorial(n),
        "C": 2**n * factorial(n),
        "D": 2 ** (n - 1) * factorial(n),
        "E": {6: 51840, 7: 2903040, 8: 696729600}.get(n, 0),
        "F": 1152,
        "G": 12,
    }[series]


__all__ = [
    "CartanType",
    "DEFAULT_ORBIT_CAP",
    "OrbitCapExceeded",
    "RootSystem",
    "RootSystemError",
    "Weight",
    "WeylWord",
    "as_weight",
    "build_root_system",
    "count_positive_roots",
    "dominant_weights_by_sum",
    "dominant_weights_up_to_dimension",
    "prod",
    "simple_types",
    "weyl_group_order_formula",
]
