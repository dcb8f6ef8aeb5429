"""A curated suite of explicit modules over quadratic fields with known descent kind.

* real: rational representations of finite groups, base-changed and then
  conjugated by a random matrix over the field so they are not visibly rational;
* complex: modules not isomorphic to their Galois conjugate (a non-real
  character, possibly tensored with a rational representation);
* quaternionic: the two-dimensional representation of the quaternion group (and
  of the dicyclic group of order 12) realized over imaginary quadratic fields,
  possibly tensored with rational representations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import linalg as la
from .descent import ExplicitModule
from .qfield import QuadraticField


@dataclass
class SuiteEntry:
    name: str
    kind: str  # real, complex, quaternionic
    module: ExplicitModule


def _int_matrix(rows):
    return [[Fraction(x) for x in r] for r in rows]


def sym3_standard():
    return [_int_matrix([[0, 1], [1, 0]]), _int_matrix([[0, -1], [1, -1]])]


def dihedral4():
    return [_int_matrix([[0, -1], [1, 0]]), _int_matrix([[1, 0], [0, -1]])]


def sym_standard(n: int):
    """Standard ``(n-1)``-dimensional representation of ``S_n`` on ``sum x_i = 0``."""
    # basis e_i - e_n, i < n
    def perm_matrix(perm):
        m = n - 1
        M = [[Fraction(0)] * m for _ in range(m)]
        for i in range(m):
            img = perm[i]
            if img < m:
                M[img][i] += 1
            if perm[n - 1] < m:
                M[perm[n - 1]][i] -= 1
        return M

    transposition = list(range(n))
    transposition[0], transposition[1] = 1, 0
    cycle = [(i + 1) % n for i in range(n)]
    return [perm_matrix(transposition), perm_matrix(cycle)]


def sign_twist(gens, signs):
    return [la.scalar(Fraction(s), g) for g, s in zip(gens, signs)]


def random_invertible(F: QuadraticField, n: int, rng: random.Random):
    while True:
        P = [[F(rng.randint(-2, 2), rng.randint(-1, 1)) for _ in range(n)] for _ in range(n)]
        if la.is_invertible(P):
            return P


def _over(F, gens):
    return [[[F(x) for x in row] for row in g] for g in gens]


def quaternion_group(F: QuadraticField):
    """Two-dimensional representation of Q8, needing ``x^2 + y^2 = -1`` in ``F``."""
    x, y = _sum_of_two_squares_minus_one(F)
    one, zero = F.one, F.zero
    I = [[zero, one], [-one, zero]]
    J = [[x, y], [y, -x]]
    return [I, J]


def _sum_of_two_squares_minus_one(F: QuadraticField):
    """Find ``x = s sqrt d``, ``y = t`` rational with ``d s^2 + t^2 = -1``."""
    d = F.d
    for den in range(1, 30):
        for tn in range(0, 30 * den):
            t = Fraction(tn, den)
            s2 = (-1 - t * t) / d
            if s2 <= 0:
                continue
            from .qfield import is_rational_square, rational_sqrt

            if is_rational_square(s2):
                return F(0, rational_sqrt(s2)), F(t)
    raise ValueError(f"-1 is not visibly a sum of two squares in Q(sqrt {d})")


def dicyclic12():
    """Two-dimensional quaternionic representation of the dicyclic group of order 12."""
    F = QuadraticField(-3)
    zeta = F(Fraction(1, 2), Fraction(1, 2))  # primitive sixth root of unity
    a = [[zeta, F.zero], [F.zero, zeta.conjugate()]]
    x = [[F.zero, -F.one], [F.one, F.zero]]
    return F, [a, x]


def _kron_with_rational(F, gens, rational_gens):
    """Generators of the outer tensor product of two group actions."""
    n, m = len(gens[0]), len(rational_gens[0])
    idn = la.identity(n, F.one, F.zero)
    idm = la.identity(m, F.one, F.zero)
    rat = _over(F, rational_gens)
    return [la.kron(g, idm) for g in gens] + [la.kron(idn, r) for r in rat]


def curated_suite(seed: int = 2024) -> list[SuiteEntry]:
    rng = random.Random(seed)
    out = []

    def add(name, kind, F, gens, conjugate=True):
        m = ExplicitModule(len(gens[0]), gens, F)
        if conjugate:
            m = m.conjugate_by(random_invertible(F, m.dimension, rng))
        out.append(SuiteEntry(name, kind, m))

    # real kind
    rational = [
        ("S3 standard", sym3_standard()),
        ("D4 standard", dihedral4()),
        ("S4 standard", sym_standard(4)),
        ("S4 standard x sign", sign_twist(sym_standard(4), [-1, -1])),
        ("S5 standard", sym_standard(5)),
        ("S3 sign", [_int_matrix([[-1]]), _int_matrix([[1]])]),
    ]
    real_fields = [-1, 2, -3, 5, -7, 3, 6, -2, 13, -5, 7, -11]
    for k, d in enumerate(real_fields):
        name, gens = rational[k % len(rational)]
        F = QuadraticField(d)
        add(f"{name} over Q(sqrt {d})", "real", F, _over(F, gens))

    # complex kind
    Fi, Fw, F2, F5 = (QuadraticField(d) for d in (-1, -3, 2, 5))
    omega = Fw(Fraction(-1, 2), Fraction(1, 2))
    add("Z/4 character i", "complex", Fi, [[[Fi.gen]]], conjugate=False)
    add("Z/3 character omega", "complex", Fw, [[[omega]]], conjugate=False)
    add("sqrt 2 scaling", "complex", F2, [[[F2.gen]]], conjugate=False)
    add("golden ratio scaling", "complex", F5, [[[F5(Fraction(1, 2), Fraction(1, 2))]]], conjugate=False)
    add("i x S3 standard", "complex", Fi, _kron_with_rational(Fi, [[[Fi.gen]]], sym3_standard()))
    add("omega x S3 standard", "complex", Fw, _kron_with_rational(Fw, [[[omega]]], sym3_standard()))
    add("i x D4 standard", "complex", Fi, _kron_with_rational(Fi, [[[Fi.gen]]], dihedral4()))
    add("sqrt 2 x S3 standard", "complex", F2, _kron_with_rational(F2, [[[F2.gen]]], sym3_standard()))
    add("omega x S4 standard", "complex", Fw, _kron_with_rational(Fw, [[[omega]]], sym_standard(4)))
    F7 = QuadraticField(-7)
    add("Z/7-type scaling (1+sqrt -7)/2", "complex", F7, [[[F7(Fraction(1, 2), Fraction(1, 2))]]], conjugate=False)

    # quaternionic kind
    for d in (-1, -2, -5, -10, -13, -17, -26):
        F = QuadraticField(d)
        add(f"Q8 over Q(sqrt {d})", "quaternionic", F, quaternion_group(F))
    F = QuadraticField(-1)
    add("Q8 x S3 standard over Q(i)", "quaternionic", F, _kron_with_rational(F, quaternion_group(F), sym3_standard()))
    F = QuadraticField(-2)
    add("Q8 x D4 standard over Q(sqrt -2)", "quaternionic", F, _kron_with_rational(F, quaternion_group(F), dihedral4()))
    F, gens = dicyclic12()
    add("dicyclic 12 over Q(sqrt -3)", "quaternionic", F, gens)
    return out


__all__ = ["SuiteEntry", "curated_suite", "dicyclic12", "quaternion_group", "sym_standard"]
