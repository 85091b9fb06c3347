"""Connected-sum decompositions of Artinian Gorenstein local algebras.

The routines follow constructive arguments: a principal multiple generator
for ideals whose elements have cyclic multiples, a principal reduction of
m^2, normalization of generators into two mutually annihilating groups, and
the socle split driven by (0 : m^2).  Every result is re-verified by exact
subspace equalities; a failed verification raises ``DecompositionBug``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .algebra import (
    AlgebraError,
    IdealSubspace,
    LocalAlgebra,
    annihilator,
    element_times_ideal,
    ideal_generated,
    ideal_power,
    ideal_product,
    is_gorenstein,
    is_homomorphism,
    min_gens,
    mu,
    unital_subalgebra,
)
from .linalg import PrimeField, matmul
from .products import connected_sum, fibre_product, socle_generator


class DecompositionError(AlgebraError):
    """A precondition of a decomposition routine does not hold."""


class DecompositionBug(RuntimeError):
    """An internal verification failed; the construction should always succeed."""


class PreconditionViolation(DecompositionError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# ---------------------------------------------------------------------------
# principal multiple generator


def _span(A, vecs):
    vecs = [v for v in vecs]
    if not vecs:
        return IdealSubspace(A, A.field.zeros((0, A.dim)), is_rref=True)
    return IdealSubspace(A, np.array(vecs, dtype=A.field.dtype))


def _reduced_rank(A, vecs, W: IdealSubspace) -> int:
    if not len(vecs):
        return 0
    vecs = np.array(vecs, dtype=A.field.dtype)
    if W.dim:
        vecs = W.reduce(vecs)
    return linalg.rank(vecs, A.field)


def _scalar_ratio(A, v, base, W):
    """The scalar c with v = c * base modulo W (base nonzero modulo W)."""
    F = A.field
    v = W.reduce(v.reshape(1, -1))[0] if W.dim else v
    b = W.reduce(base.reshape(1, -1))[0] if W.dim else base
    c = linalg.solve(b.reshape(-1, 1), v, F)
    if c is None:
        return None
    return c[0]


def _multiple_search(A: LocalAlgebra, gens, W: IdealSubspace):
    """Recursion of the principal-multiple argument, computing modulo W.

    Returns ("principal", y) with (gens)^2 = y * (gens) mod W, or
    ("violation", x) for a constructed x whose multiples of the current
    generators span a space of dimension >= 2 mod W.
    """
    F = A.field
    gens = [np.asarray(g, dtype=F.dtype) for g in gens]
    n = len(gens)
    if n == 0:
        return "principal", F.zeros(A.dim)
    prods = [[A.mul(gens[i], gens[j]) for j in range(n)] for i in range(n)]
    for i in range(n):
        if _reduced_rank(A, prods[i], W) > 1:
            return "violation", gens[i]
    nonzero = lambda v: bool(np.any(W.reduce(v.reshape(1, -1)))) if W.dim else bool(np.any(v))
    if n == 1 or not any(nonzero(prods[i][j]) for i in range(n) for j in range(n)):
        return "principal", gens[0]
    squares = [i for i in range(n) if nonzero(prods[i][i])]
    if squares:
        # a generator with nonvanishing square: x1 * x_i = l_i x1^2
        a = squares[0]
        x1 = gens[a]
        rest = []
        for i in range(n):
            if i == a:
                continue
            lam = _scalar_ratio(A, prods[a][i], prods[a][a], W)
            rest.append(F.reduce(gens[i] - lam * x1))
    else:
        a, b = next((i, j) for i in range(n) for j in range(i + 1, n) if nonzero(prods[i][j]))
        x1, x2 = gens[a], gens[b]
        rest = []
        for i in range(n):
            if i in (a, b):
                continue
            lam = _scalar_ratio(A, prods[a][i], prods[a][b], W)
            lam2 = _scalar_ratio(A, prods[b][i], prods[a][b], W)
            rest.append(F.reduce(gens[i] - lam * x2 - lam2 * x1))
    kind, y = _multiple_search(A, rest, W)
    if kind == "violation":
        return kind, y
    return "principal", F.reduce(x1 + y)


def principal_multiple_generator(A: LocalAlgebra, I: IdealSubspace, exhaustive=False) -> np.ndarray:
    """An element y of I outside mI with I^2 = y I.

    The hypothesis (every x in I outside mI has a cyclic multiple module xI)
    is checked on the generators arising in the construction; with
    ``exhaustive=True`` over a small prime field every element of I is checked.
    """
    F = A.field
    if I.dim == 0:
        return F.zeros(A.dim)
    if exhaustive:
        _exhaustive_precheck(A, I)
    I2 = ideal_product(I, I)
    W = ideal_product(A.maximal_ideal, I2)
    kind, y = _multiple_search(A, min_gens(I), W)
    if kind == "violation" or mu(element_times_ideal(A, y, I)) > 1:
        raise PreconditionViolation(f"mu(xI) > 1 for x = {A.format(y)}", witness=y)
    mI = ideal_product(A.maximal_ideal, I)
    if mI.contains(y) or element_times_ideal(A, y, I) != I2:
        raise DecompositionBug("principal multiple verification failed")
    return y


def _exhaustive_precheck(A, I):
    F = A.field
    if not isinstance(F, PrimeField) or F.p ** I.dim > 200_000:
        raise DecompositionError("exhaustive mode needs a small prime field and a small ideal")
    mI = ideal_product(A.maximal_ideal, I)
    for coeffs in itertools.product(range(F.p), repeat=I.dim):
        x = matmul(np.array(coeffs, dtype=np.int64), I.vectors, F)
        if mI.contains(x):
            continue
        if mu(element_times_ideal(A, x, I)) > 1:
            raise PreconditionViolation(f"mu(xI) > 1 for x = {A.format(x)}", witness=x)


# ---------------------------------------------------------------------------
# principal reduction of m^2


def principal_reduction_of_m2(A: LocalAlgebra) -> np.ndarray:
    """x in m outside m^2 with m^2 = x m (and x^2 not in m^3 when lo >= 3)."""
    m = A.maximal_ideal
    m2, m3 = ideal_power(A, 2), ideal_power(A, 3)
    k = mu(m2)
    if k >= 3:
        raise DecompositionError(f"mu(m^2) = {k} >= 3")
    gens = min_gens(m)
    if not gens:
        raise DecompositionError("maximal ideal is zero")
    if m2.dim == 0:
        x = gens[0]
    elif k == 1:
        x = next(g for g in gens if not m3.contains_all(element_times_ideal(A, g, m).vectors))
    else:
        # mu(m^2) = 2: either a constructed candidate already has mu(x m) = 2 mod m^3,
        # or the search returns y with m^2 = y m + m^3
        _, x = _multiple_search(A, gens, m3)
    if element_times_ideal(A, x, m) != m2:
        raise DecompositionBug("m^2 != x m")
    if A.loewy_length >= 3 and m3.contains(A.mul(x, x)):
        raise DecompositionBug("x^2 lies in m^3")
    return x


# ---------------------------------------------------------------------------
# generator normalization


@dataclass
class GeneratorNormalForm:
    gens: list  # x_1 .. x_n
    split: int  # m: the first group is x_1 .. x_m

    @property
    def first(self):
        return self.gens[: self.split]

    @property
    def second(self):
        return self.gens[self.split :]


def _independent_mod(A, vecs, base: IdealSubspace) -> bool:
    return _reduced_rank(A, vecs, base) == len(vecs)


def normalize_split_generators(A: LocalAlgebra, x1) -> GeneratorNormalForm:
    F = A.field
    x1 = np.asarray(x1, dtype=F.dtype)
    if not is_gorenstein(A):
        raise DecompositionError("Gorenstein algebra required")
    if A.loewy_length < 3:
        raise DecompositionError("lo >= 3 required")
    m = A.maximal_ideal
    m2, m3 = ideal_power(A, 2), ideal_power(A, 3)
    if m2.contains(x1) or not m.contains(x1):
        raise DecompositionError("x1 must lie in m outside m^2")
    if element_times_ideal(A, x1, m) != m2:
        raise DecompositionError("m^2 != x1 m")
    n = A.edim
    mm = m2.dim - m3.dim
    if mm >= n:
        raise DecompositionError(f"dim m^2/m^3 = {mm} is not below edim = {n}")

    # (a) x_2..x_m with m^2 = (x1^2, x1 x2, ..., x1 xm); then complete to a basis of m/m^2
    cands = min_gens(m)
    first = [x1]
    for g in cands:
        if len(first) == mm:
            break
        trial = first + [g]
        if _independent_mod(A, trial, m2) and _independent_mod(A, [A.mul(x1, t) for t in trial], m3):
            first.append(g)
    if len(first) != mm:
        raise DecompositionBug("could not choose generators for m^2")
    second = []
    for g in cands:
        if len(first) + len(second) == n:
            break
        if _independent_mod(A, first + second + [g], m2):
            second.append(g)

    # (b) make x1 * x_j = 0 for j > m
    X = ideal_generated(A, first)
    M = matmul(A.mult_matrix(x1), X.vectors.T, F)
    for j, g in enumerate(second):
        c = linalg.solve(M, A.mul(x1, g), F)
        if c is None:
            raise DecompositionBug("x1 x_j not in x1 (x_1..x_m)")
        second[j] = F.reduce(g - matmul(c, X.vectors, F))

    # (c) subtract x^_j in (0:x1) cap m^2 so that x_j kills x_2..x_m
    if mm >= 2:
        Z = annihilator(A, _span(A, [x1])) & m2
        if Z.dim:
            blocks = [matmul(A.mult_matrix(xi), Z.vectors.T, F) for xi in first[1:]]
            Mz = np.concatenate(blocks, axis=0)
            for j, g in enumerate(second):
                rhs = np.concatenate([A.mul(g, xi) for xi in first[1:]])
                c = linalg.solve(Mz, rhs, F)
                if c is None:
                    raise DecompositionBug("pairing equation has no solution")
                second[j] = F.reduce(g - matmul(c, Z.vectors, F))

    gens = first + second
    _check_normal_form(A, gens, mm)
    return GeneratorNormalForm(gens, mm)


def _check_normal_form(A, gens, mm):
    m2 = ideal_power(A, 2)
    first, second = gens[:mm], gens[mm:]
    x1 = gens[0]
    if ideal_generated(A, [A.mul(x1, g) for g in first]) != m2:
        raise DecompositionBug("property (1) fails")
    for a in first:
        for b in second:
            if np.any(A.mul(a, b)):
                raise DecompositionBug("property (2) fails")
    if second:
        sq = ideal_generated(A, [A.mul(a, b) for a in second for b in second])
        if sq != A.socle:
            raise DecompositionBug("property (3) fails")
    if _reduced_rank(A, gens, m2) != A.edim or len(gens) != A.edim:
        raise DecompositionBug("normalized generators are not minimal generators of m")


# ---------------------------------------------------------------------------
# socle split


def _require_split_input(A):
    if not is_gorenstein(A):
        raise DecompositionError("Gorenstein algebra required")
    if A.loewy_length < 3:
        raise DecompositionError(f"lo >= 3 required (lo = {A.loewy_length})")


def socle_split_test(A: LocalAlgebra) -> bool:
    """True iff (0 : m^2) is not contained in m^2."""
    _require_split_input(A)
    m2 = ideal_power(A, 2)
    return not (annihilator(A, m2) <= m2)


@dataclass
class DecompositionCertificate:
    R: LocalAlgebra
    S: LocalAlgebra  # k + (0:I)
    T: LocalAlgebra  # k + I
    S_map: np.ndarray  # columns: images of S's basis in R
    T_map: np.ndarray
    delta: np.ndarray  # socle generator of R
    I: IdealSubspace
    K: IdealSubspace
    phi: np.ndarray  # fibre product S x_k T -> R
    Q: LocalAlgebra  # S # T
    psi: np.ndarray  # S # T -> R, an isomorphism
    checks: dict = field(default_factory=dict)


def split_connected_sum(A: LocalAlgebra) -> DecompositionCertificate:
    if not socle_split_test(A):
        raise DecompositionError("criterion fails: (0 : m^2) is contained in m^2")
    F = A.field
    m = A.maximal_ideal
    m2 = ideal_power(A, 2)
    C = annihilator(A, m2)
    base = m2 & C
    idx = linalg.complement_indices(C.vectors, base.vectors if base.dim else None, F)
    ys = [C.vectors[i] for i in idx]
    I = ideal_generated(A, ys)
    K = annihilator(A, I)
    checks = {}
    checks["I + K = m"] = (I + K) == m
    checks["I cap K = soc"] = (I & K) == A.socle
    checks["l(I + K) = l(R) - 1"] = I.dim + K.dim - (I & K).dim == A.dim - 1

    S, S_map = unital_subalgebra(A, K, return_map=True)
    T, T_map = unital_subalgebra(A, I, return_map=True)
    delta = socle_generator(A)
    fw = fibre_product(S, T)
    # phi(s, t) = p + q + lambda for s = lambda + p, t = lambda + q
    phi = F.zeros((A.dim, fw.T.dim))
    phi[:, 0] = A.one()
    phi[:, 1 : S.dim] = S_map[:, 1:]
    phi[:, S.dim :] = T_map[:, 1:]
    checks["phi multiplicative"] = is_homomorphism(fw.T, A, phi)
    checks["phi surjective"] = linalg.rank(phi, F) == A.dim

    cs = connected_sum(S, T)
    Q = cs.Q
    # Q's basis is a subset of the fibre product's basis (complement columns)
    lift = _quotient_section(cs)
    psi = matmul(phi, lift, F)
    checks["kernel is the socle line"] = not np.any(
        matmul(phi, F.reduce(matmul(cs.fibre.embed_R, cs.delta_R, F) - matmul(cs.fibre.embed_S, cs.delta_S, F)), F)
    )
    checks["psi multiplicative"] = is_homomorphism(Q, A, psi)
    checks["psi bijective"] = Q.dim == A.dim and linalg.rank(psi, F) == A.dim
    checks["lo(S) = lo(R)"] = S.loewy_length == A.loewy_length
    checks["lo(T) = 2"] = T.loewy_length == 2
    checks["S, T Gorenstein"] = is_gorenstein(S) and is_gorenstein(T)
    failed = [k for k, v in checks.items() if not v]
    if failed:
        raise DecompositionBug("verification failed: " + ", ".join(failed))
    return DecompositionCertificate(A, S, T, S_map, T_map, delta, I, K, phi, Q, psi, checks)


def _quotient_section(cs) -> np.ndarray:
    """Matrix sending Q's basis to the matching fibre-product basis vectors."""
    F = cs.Q.field
    proj = cs.projection
    d_fib = proj.shape[1]
    lift = F.zeros((d_fib, cs.Q.dim))
    for j in range(cs.Q.dim):
        # the quotient basis consists of unit vectors of the fibre product
        col = next(c for c in range(d_fib) if proj[j, c] == 1 and np.count_nonzero(proj[:, c]) == 1)
        lift[col, j] = 1
    return lift


# ---------------------------------------------------------------------------
# iteration and the length-11 certificate


@dataclass
class Factorization:
    factors: list  # lo-2 pieces in order of removal, then the final piece
    certificates: list
    terminal: str  # "lo<=2" or "criterion-indecomposable"
    terminal_edim_le_4: bool


def factorize(A: LocalAlgebra) -> Factorization:
    if not is_gorenstein(A):
        raise DecompositionError("Gorenstein algebra required")
    current = A
    factors, certs = [], []
    while current.loewy_length >= 3 and socle_split_test(current):
        cert = split_connected_sum(current)
        certs.append(cert)
        factors.append(cert.T)
        current = cert.S
    factors.append(current)
    terminal = "lo<=2" if current.loewy_length <= 2 else "criterion-indecomposable"
    return Factorization(factors, certs, terminal, current.edim <= 4)


@dataclass
class LengthCertificate:
    kind: str  # "edim<=4" | "lo<=2" | "split"
    edim: int
    loewy_length: int
    length: int
    factorization: Factorization | None = None


class OutOfRange(DecompositionError):
    pass


def multiplicity11_certificate(A: LocalAlgebra) -> LengthCertificate:
    if not is_gorenstein(A):
        raise DecompositionError("Gorenstein algebra required")
    if A.dim > 11:
        raise OutOfRange(f"out of theorem's range: length {A.dim} > 11")
    n, lo = A.edim, A.loewy_length
    if n <= 4:
        return LengthCertificate("edim<=4", n, lo, A.dim)
    if lo <= 2:
        return LengthCertificate("lo<=2", n, lo, A.dim)
    fac = factorize(A)
    last = fac.factors[-1]
    if not fac.certificates or not (last.edim <= 4 or last.loewy_length <= 2):
        raise DecompositionBug(f"no certificate for a Gorenstein algebra of length {A.dim}")
    return LengthCertificate("split", n, lo, A.dim, fac)
