"""Quadratic descent of explicit matrix representations.

A module over ``F' = Q(sqrt d)`` is restricted to ``Q``; the endomorphism
algebra of the restriction is then a matrix algebra (a model over ``Q``
exists), the field ``F'`` (the module is not isomorphic to its Galois
conjugate) or a quaternion algebra ``(a, b)`` classified by Hilbert symbols.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy import primefactors

from . import linalg as la
from .qfield import (
    FieldError,
    QElement,
    QuadraticField,
    is_rational_square,
    rational_sqrt,
    squarefree_part,
)

INF = "inf"


class DescentError(ValueError):
    pass


# -- modules -------------------------------------------------------------


@dataclass
class ExplicitModule:
    """Generators of a group action on ``K^n``; ``field`` is ``None`` for ``Q``."""

    dimension: int
    generators: list
    field: QuadraticField | None = None
    labels: list = dc_field(default_factory=list)

    def __post_init__(self):
        if not self.generators:
            raise DescentError("a module needs at least one generator")
        conv = self.field.parse if self.field is not None else _to_fraction
        gens = []
        for g in self.generators:
            if len(g) != self.dimension or any(len(row) != self.dimension for row in g):
                raise DescentError("generator has the wrong shape")
            gens.append([[conv(x) for x in row] for row in g])
        self.generators = gens
        for k, g in enumerate(gens):
            if not la.is_invertible(g):
                raise DescentError(f"generator {k} is not invertible")
        if not self.labels:
            self.labels = [f"g{k}" for k in range(len(gens))]

    @property
    def zero(self):
        return self.field.zero if self.field is not None else Fraction(0)

    @property
    def one(self):
        return self.field.one if self.field is not None else Fraction(1)

    def conjugate(self) -> "ExplicitModule":
        """Galois conjugate module."""
        if self.field is None:
            return self
        gens = [[[x.conjugate() for x in row] for row in g] for g in self.generators]
        return ExplicitModule(self.dimension, gens, self.field, list(self.labels))

    def base_change(self, F: QuadraticField) -> "ExplicitModule":
        if self.field is not None:
            raise DescentError("module is not defined over Q")
        gens = [[[F(x) for x in row] for row in g] for g in self.generators]
        return ExplicitModule(self.dimension, gens, F, list(self.labels))

    def conjugate_by(self, P) -> "ExplicitModule":
        Pinv = la.inverse(P)
        gens = [la.matmul(la.matmul(P, g), Pinv) for g in self.generators]
        return ExplicitModule(self.dimension, gens, self.field, list(self.labels))

    def to_json(self):
        def enc(x):
            if isinstance(x, QElement):
                return x.to_pair()
            return [x.numerator, x.denominator]

        return {
            "dimension": self.dimension,
            "d": self.field.d if self.field is not None else 1,
            "generators": [[[enc(x) for x in row] for row in g] for g in self.generators],
            "labels": list(self.labels),
        }

    @classmethod
    def from_json(cls, data: dict) -> "ExplicitModule":
        d = int(data.get("d", 1))
        F = None if d == 1 else QuadraticField(d)
        return cls(int(data["dimension"]), data["generators"], F, list(data.get("labels", [])))


def _to_fraction(x) -> Fraction:
    if isinstance(x, (list, tuple)):
        if len(x) == 2 and all(isinstance(y, (list, tuple)) for y in x):
            a, b = x
            if Fraction(b[0], b[1]) != 0:
                raise DescentError("irrational entry in a module over Q")
            return Fraction(a[0], a[1])
        if len(x) == 2:
            return Fraction(int(x[0]), int(x[1]))
        raise DescentError(f"cannot parse entry {x!r}")
    if isinstance(x, QElement):
        if x.b:
            raise DescentError("irrational entry in a module over Q")
        return x.a
    return Fraction(x)


def restrict_scalars(m: ExplicitModule) -> ExplicitModule:
    """Regard a module over ``Q(sqrt d)`` as a module over ``Q`` of twice the dimension.

    The basis is ``e_1, sqrt(d) e_1, e_2, ...``; multiplication by
    ``a + b sqrt d`` becomes ``[[a, d b], [b, a]]``.
    """
    if m.field is None:
        return m
    d = m.field.d
    n = m.dimension
    gens = []
    for g in m.generators:
        R = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
        for i in range(n):
            for j in range(n):
                x = g[i][j]
                R[2 * i][2 * j] = x.a
                R[2 * i][2 * j + 1] = d * x.b
                R[2 * i + 1][2 * j] = x.b
                R[2 * i + 1][2 * j + 1] = x.a
        gens.append(R)
    return ExplicitModule(2 * n, gens, None, list(m.labels))


def commutant(m: ExplicitModule) -> list:
    """Basis of the matrices commuting with every generator."""
    n = m.dimension
    rows = []
    for g in m.generators:
        # (X g - g X)_{ij} = sum_k X_ik g_kj - g_ik X_kj; unknown X_ab has index a*n+b
        for i in range(n):
            for j in range(n):
                row = [m.zero] * (n * n)
                for k in range(n):
                    if g[k][j]:
                        row[i * n + k] = row[i * n + k] + g[k][j]
                    if g[i][k]:
                        row[k * n + j] = row[k * n + j] - g[i][k]
                if any(row):
                    rows.append(row)
    basis = la.nullspace(rows, n * n, m.zero, m.one)
    return [la.unflatten(v, n, n) for v in basis]


def intertwiners(m1: ExplicitModule, m2: ExplicitModule) -> list:
    """Basis of ``{T : T g1 = g2 T}`` for matching generators."""
    if len(m1.generators) != len(m2.generators):
        raise DescentError("modules have different numbers of generators")
    n1, n2 = m1.dimension, m2.dimension
    zero, one = m2.zero, m2.one
    rows = []
    for g1, g2 in zip(m1.generators, m2.generators):
        for i in range(n2):
            for j in range(n1):
                row = [zero] * (n2 * n1)
                for k in range(n1):
                    if g1[k][j]:
                        row[i * n1 + k] = row[i * n1 + k] + g1[k][j]
                for k in range(n2):
                    if g2[i][k]:
                        row[k * n1 + j] = row[k * n1 + j] - g2[i][k]
                if any(row):
                    rows.append(row)
    basis = la.nullspace(rows, n2 * n1, zero, one)
    return [la.unflatten(v, n2, n1) for v in basis]


# -- Hilbert symbols -----------------------------------------------------


def _valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _integral_representative(q) -> int:
    q = Fraction(q)
    if q == 0:
        raise DescentError("Hilbert symbol arguments must be nonzero")
    return q.numerator * q.denominator


def _legendre(u: int, p: int) -> int:
    r = pow(u % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else 1


def _normalize_place(v):
    if v in (INF, "oo", "infinity", "real", math.inf) or (isinstance(v, float) and math.isinf(v)):
        return INF
    p = int(v)
    if p < 2 or primefactors(p) != [p]:
        raise DescentError(f"{v!r} is not a prime or the real place")
    return p


def hilbert_symbol(a, b, v) -> int:
    """Hilbert symbol ``(a, b)_v`` for nonzero rationals and a prime or ``"inf"``."""
    v = _normalize_place(v)
    a, b = _integral_representative(a), _integral_representative(b)
    if v == INF:
        return -1 if a < 0 and b < 0 else 1
    p = v
    alpha, beta = _valuation(a, p), _valuation(b, p)
    u, w = a // p**alpha, b // p**beta
    if p == 2:
        eps = lambda x: ((x - 1) // 2) % 2
        omega = lambda x: ((x * x - 1) // 8) % 2
        e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u)
        return -1 if e % 2 else 1
    s = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        s *= _legendre(u, p)
    if alpha % 2:
        s *= _legendre(w, p)
    return s


def _oracle_exponent(p: int) -> int:
    if p == 2:
        return 8
    k = 2
    while p ** (k + 1) <= 1000:
        k += 1
    return k


def _square_class_rep(a: int, p: int, k: int) -> tuple:
    """Reduce ``a`` to ``p^e * u`` with ``e`` in {0, 1} and ``u`` a unit mod ``p^k``."""
    e = _valuation(a, p)
    u = a // p**e
    return e % 2, u % p**k


@lru_cache(maxsize=None)
def _oracle_cached(p: int, k: int, ea: int, ua: int, eb: int, ub: int) -> int:
    mod = p**k
    a = (p**ea * ua) % mod
    b = (p**eb * ub) % mod
    r = np.arange(mod, dtype=np.int64)
    sq = (r * r) % mod
    is_sq = np.zeros(mod, dtype=bool)
    is_sq[sq] = True
    X = r[:, None]
    Y = r[None, :]
    t = (a * sq[:, None] + b * sq[None, :]) % mod
    primitive = (X % p != 0) | (Y % p != 0)
    return 1 if bool(np.any(is_sq[t] & primitive)) else -1


def hilbert_symbol_oracle(a, b, p: int, k: int | None = None) -> int:
    """Decide solubility of ``z^2 = a x^2 + b y^2`` by exhaustive search mod ``p^k``."""
    p = _normalize_place(p)
    if p == INF:
        return hilbert_symbol(a, b, INF)
    a, b = _integral_representative(a), _integral_representative(b)
    k = _oracle_exponent(p) if k is None else k
    ea, ua = _square_class_rep(a, p, k)
    eb, ub = _square_class_rep(b, p, k)
    return _oracle_cached(p, k, ea, ua, eb, ub)


def relevant_places(a, b) -> list:
    a, b = _integral_representative(a), _integral_representative(b)
    primes = sorted(set(primefactors(2 * a * b)))
    return primes + [INF]


@dataclass(frozen=True)
class QuaternionClass:
    a: Fraction
    b: Fraction

    def __post_init__(self):
        if Fraction(self.a) == 0 or Fraction(self.b) == 0:
            raise DescentError("quaternion algebra parameters must be nonzero")


def local_global_check(a, b) -> dict:
    """Ramified places of ``(a, b)_Q``, global splitting and the parity check."""
    ram = [v for v in relevant_places(a, b) if hilbert_symbol(a, b, v) == -1]
    return {"ramified": ram, "is_split_global": not ram, "parity_ok": len(ram) % 2 == 0}


# -- endomorphism algebras -----------------------------------------------


@dataclass
class AlgebraClass:
    kind: str  # rational, split_matrix_algebra, quadratic_field, split_product, quaternion, other
    dimension: int
    params: dict = dc_field(default_factory=dict)

    def as_dict(self):
        return {"kind": self.kind, "dimension": self.dimension, **self.params}


def _scalar_of(M):
    """Return ``c`` if ``M = c I`` else ``None``."""
    c = M[0][0]
    n = len(M)
    for i in range(n):
        for j in range(n):
            if M[i][j] != (c if i == j else 0):
                return None
    return c


def _trace(M):
    return sum((M[i][i] for i in range(len(M))), Fraction(0))


def _in_span(basis, M):
    rows = [la.flatten(B) for B in basis]
    A = la.transpose(rows)
    target = la.flatten(M)
    aug = [r + [t] for r, t in zip(A, target)]
    return la.rank(aug) == la.rank(A)


def _coords(basis, M):
    A = la.transpose([la.flatten(B) for B in basis])
    X = la.solve_right(A, [[t] for t in la.flatten(M)])
    return [row[0] for row in X]


def _center(basis):
    """Basis of the center of the algebra spanned by ``basis``."""
    k = len(basis)
    rows = []
    for B in basis:
        comms = [la.flatten(la.matsub(la.matmul(E, B), la.matmul(B, E))) for E in basis]
        for idx in range(len(comms[0])):
            rows.append([comms[c][idx] for c in range(k)])
    return [_combine(basis, v) for v in la.nullspace(rows, k)]


def _combine(basis, coeffs):
    n = len(basis[0])
    out = [[Fraction(0)] * n for _ in range(n)]
    for c, B in zip(coeffs, basis):
        if c:
            out = la.matadd(out, la.scalar(c, B))
    return out


def _clear_square_class(q: Fraction) -> int:
    # p/q and p*q differ by the square q^2
    return q.numerator * q.denominator


def classify_endomorphism_algebra(basis) -> AlgebraClass:
    """Identify the algebra spanned by ``basis`` (matrices over Q)."""
    k = len(basis)
    if k == 0:
        raise DescentError("empty algebra")
    N = len(basis[0])
    if k == 1:
        return AlgebraClass("rational", 1)
    if k == 2:
        x = next(B for B in basis if _scalar_of(B) is None)
        one = la.identity(N)
        x2 = la.matmul(x, x)
        s, t = _coords([x, one], x2)  # x^2 = s x + t
        disc = s * s + 4 * t
        if is_rational_square(disc):
            return AlgebraClass("split_product", 2, {"discriminant": str(disc)})
        return AlgebraClass("quadratic_field", 2, {"d": squarefree_part(disc)})
    if k == 4:
        if len(_center(basis)) != 1:
            raise DescentError("four-dimensional algebra with center larger than Q")
        a, b = _quaternion_parameters(basis, N)
        lg = local_global_check(a, b)
        kind = "split_matrix_algebra" if lg["is_split_global"] else "quaternion"
        return AlgebraClass(kind, 4, {"a": a, "b": b, "ramified": lg["ramified"]})
    return AlgebraClass("other", k)


def _pure(M, N):
    # reduced trace of M is 2 tr(M) / N; remove half of it to get a pure quaternion
    trd = 2 * _trace(M) / N
    return la.matsub(M, la.scalar(trd / 2, la.identity(N)))


def _pure_with_square(cands, want_zero=False):
    for P in cands:
        if la.is_zero_matrix(P):
            continue
        c = _scalar_of(la.matmul(P, P))
        if c is None:
            continue
        if (c == 0) == want_zero:
            return P, c
    return None, None


def _sums(mats):
    out = list(mats)
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            out.append(la.matadd(mats[i], mats[j]))
            out.append(la.matsub(mats[i], mats[j]))
    return out


def _standard_pair(basis, N):
    """Pure ``i, j`` with ``i^2 = a``, ``j^2 = b`` nonzero and ``ij = -ji``."""
    pures = [P for P in (_pure(B, N) for B in basis) if not la.is_zero_matrix(P)]
    i_elt, a = _pure_with_square(_sums(pures))
    if i_elt is None:
        raise DescentError("no pure element with nonzero square")
    k = len(pures)
    rows = [[None] * k for _ in range(N * N)]
    for c, P in enumerate(pures):
        A = la.matadd(la.matmul(i_elt, P), la.matmul(P, i_elt))
        for idx, x in enumerate(la.flatten(A)):
            rows[idx][c] = x
    anti = [_combine(pures, v) for v in la.nullspace(rows, k)]
    j_elt, b = _pure_with_square(_sums(anti))
    if j_elt is None:
        raise DescentError("no anticommuting pure element with nonzero square")
    return i_elt, a, j_elt, b


def _quaternion_parameters(basis, N):
    _, a, _, b = _standard_pair(basis, N)
    return squarefree_part(a), squarefree_part(b)


# -- descent -------------------------------------------------------------


@dataclass
class DescentResult:
    verdict: str  # real, complex, quaternionic
    model: ExplicitModule | None
    certificate: dict
    indicator: int

    def as_dict(self):
        out = {"verdict": self.verdict, "indicator": self.indicator, "certificate": self.certificate}
        if self.model is not None:
            out["model"] = self.model.to_json()
        return out


def is_absolutely_irreducible(m: ExplicitModule) -> bool:
    return len(commutant(m)) == 1


def descent_kind(m: ExplicitModule, basis=None) -> tuple:
    """``(indicator, AlgebraClass)`` for the restriction of scalars of ``m``.

    ``basis`` may pass in an already computed commutant of the restriction.
    """
    if basis is None:
        basis = commutant(restrict_scalars(m))
    alg = classify_endomorphism_algebra(basis)
    if alg.kind in ("split_matrix_algebra",):
        return 1, alg
    if alg.kind == "quaternion":
        return -1, alg
    if alg.kind == "quadratic_field":
        return 0, alg
    raise DescentError(f"endomorphism algebra of unexpected shape: {alg.as_dict()}")


def _conic_point(a: Fraction, b: Fraction):
    """Rational ``(x, y, z) != 0`` with ``a x^2 + b y^2 = z^2``, by bounded search."""
    A, B = squarefree_part(a), squarefree_part(b)
    s, t = rational_sqrt(Fraction(a) / A), rational_sqrt(Fraction(b) / B)
    # solutions of A X^2 + B Y^2 = Z^2 with squarefree A, B have |X|, |Y| <= sqrt|AB|
    bound = 2 * math.isqrt(abs(A * B)) + 10
    for total in range(1, 2 * bound + 1):
        for X in range(0, total + 1):
            Y = total - X
            val = A * X * X + B * Y * Y
            if val >= 0 and math.isqrt(val) ** 2 == val:
                return Fraction(X) / s, Fraction(Y) / t, Fraction(math.isqrt(val))
    raise DescentError(f"no point on the conic {a}x^2 + {b}y^2 = z^2 found")


def _split_zero_divisor(basis, N):
    """A nonzero non-invertible element of a split quaternion algebra."""
    pures = [P for P in (_pure(B, N) for B in basis) if not la.is_zero_matrix(P)]
    nil, _ = _pure_with_square(_sums(pures), want_zero=True)
    if nil is not None:
        return nil
    i_elt, a, j_elt, b = _standard_pair(basis, N)
    x, y, z = _conic_point(a, b)
    # w = x i + y j satisfies w^2 = z^2, so (w - z)(w + z) = 0
    w = la.matadd(la.scalar(x, i_elt), la.scalar(y, j_elt))
    for sign in (1, -1):
        zd = la.matadd(w, la.scalar(sign * z, la.identity(N)))
        if not la.is_zero_matrix(zd) and not la.is_invertible(zd):
            return zd
    raise ArithmeticError("conic point did not produce a zero divisor")


def descend_if_possible(m: ExplicitModule) -> DescentResult:
    """Produce a verified model over ``Q`` or a certificate that none exists."""
    if m.field is None:
        return DescentResult("real", m, {"reason": "already defined over Q"}, 1)
    if not is_absolutely_irreducible(m):
        raise DescentError("module is not absolutely irreducible")
    R = restrict_scalars(m)
    basis = commutant(R)
    ind, alg = descent_kind(m, basis)
    if ind == 0:
        return DescentResult("complex", None, {"indicator": 0, "algebra": alg.as_dict()}, 0)
    if ind == -1:
        cert = {"quaternion": [alg.params["a"], alg.params["b"]], "ramified": alg.params["ramified"]}
        return DescentResult("quaternionic", None, cert, -1)
    N = R.dimension
    W = la.column_space_basis(_split_zero_divisor(basis, N))
    if len(W[0]) != m.dimension:
        raise ArithmeticError("image of the zero divisor has the wrong dimension")
    gens = [la.solve_right(W, la.matmul(g, W)) for g in R.generators]
    model = ExplicitModule(m.dimension, gens, None, list(m.labels))
    T = verify_model(model, m)
    cert = {"algebra": alg.as_dict(), "intertwiner_rank": len(T)}
    return DescentResult("real", model, cert, 1)


def verify_model(model: ExplicitModule, m: ExplicitModule):
    """Return an invertible intertwiner from the base change of ``model`` to ``m``."""
    bc = model.base_change(m.field)
    sols = intertwiners(bc, m)
    for T in sols:
        if la.is_invertible(T):
            return T
    if len(sols) > 1:
        total = sols[0]
        for k, T in enumerate(sols[1:], start=2):
            total = la.matadd(total, la.scalar(k, T))
        if la.is_invertible(total):
            return total
    raise ArithmeticError("descended model is not isomorphic to the input")


# -- bilinear forms ------------------------------------------------------


def invariant_bilinear_forms(m: ExplicitModule) -> list:
    """Basis of ``{B : g^T B g = B for all generators}``."""
    n = m.dimension
    zero, one = m.zero, m.one
    rows = []
    for g in m.generators:
        # g^T B g - B = 0, entries (i, j): sum_{k,l} g_ki B_kl g_lj - B_ij
        for i in range(n):
            for j in range(n):
                row = [zero] * (n * n)
                for k in range(n):
                    if not g[k][i]:
                        continue
                    for l in range(n):
                        if g[l][j]:
                            row[k * n + l] = row[k * n + l] + g[k][i] * g[l][j]
                row[i * n + j] = row[i * n + j] - one
                rows.append(row)
    return [la.unflatten(v, n, n) for v in la.nullspace(rows, n * n, zero, one)]


def bilinear_form_symmetry(m: ExplicitModule) -> str:
    """``symmetric``, ``antisymmetric`` or ``none`` for the (unique) invariant form."""
    forms = invariant_bilinear_forms(m)
    if not forms:
        return "none"
    if len(forms) > 1:
        raise DescentError("invariant form is not unique; module is not absolutely irreducible")
    B = forms[0]
    Bt = la.transpose(B)
    if B == Bt:
        return "symmetric"
    if all(x == -y for r, s in zip(B, Bt) for x, y in zip(r, s)):
        return "antisymmetric"
    raise ArithmeticError("invariant form is neither symmetric nor antisymmetric")


# -- multiplicity bookkeeping -------------------------------------------


def multiplicity_degree_arithmetic(m: int, c_deg: int, n: int, rational_multiplicity: int = 1) -> dict:
    """Bookkeeping for a simple module whose endomorphism algebra has center of
    degree ``c_deg`` and index ``n``.

    Over an algebraic closure the module splits into ``n * c_deg`` copies of
    one absolutely irreducible module, so ``n * c_deg`` must equal the
    multiplicity ``m``. A minimal splitting field is a maximal subfield, of
    degree ``n`` over the center, hence of degree ``m`` over the base; it
    therefore divides the length ``m * rational_multiplicity`` of the
    isotypic component.
    """
    for name, val in (("m", m), ("c_deg", c_deg), ("n", n), ("rational_multiplicity", rational_multiplicity)):
        if not isinstance(val, int) or isinstance(val, bool) or val < 1:
            raise DescentError(f"{name} must be a positive integer")
    if n * c_deg != m:
        raise DescentError(f"inconsistent triple: n * c_deg = {n * c_deg} != m = {m}")
    if m == 1:
        case = "multiplicity one"
    elif n == 1:
        case = "commutative"
    elif n == 2:
        case = "quaternion index"
    else:
        case = f"division index {n}"
    degree = n * c_deg
    length = m * rational_multiplicity
    return {
        "m": m,
        "c_deg": c_deg,
        "n": n,
        "case": case,
        "splitting_field_degree": degree,
        "isotypic_length": length,
        "degree_divides_length": length % degree == 0,
    }


__all__ = [
    "AlgebraClass",
    "DescentError",
    "DescentResult",
    "ExplicitModule",
    "INF",
    "QuaternionClass",
    "bilinear_form_symmetry",
    "classify_endomorphism_algebra",
    "commutant",
    "descend_if_possible",
    "descent_kind",
    "hilbert_symbol",
    "hilbert_symbol_oracle",
    "intertwiners",
    "invariant_bilinear_forms",
    "is_absolutely_irreducible",
    "local_global_check",
    "multiplicity_degree_arithmetic",
    "relevant_places",
    "restrict_scalars",
    "verify_model",
]
