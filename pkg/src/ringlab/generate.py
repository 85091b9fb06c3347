"""Seeded random Gorenstein algebras from dual socle polynomials.

Every generator draws a polynomial F of a given shape and then applies a
random invertible linear change of the dual variables, so the structure of
the resulting algebra is hidden from the algorithms that consume it.
Divided-power coefficients are converted to ordinary ones before the
substitution and back afterwards, which keeps the algebra's isomorphism type.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from math import factorial

import numpy as np

from .algebra import AlgebraError, LocalAlgebra, classify_stretch, from_inverse_system, mu, ideal_power
from .linalg import DEFAULT_PRIME, Field, PrimeField
from .polynomials import Poly, monomials_of_degree

KINDS = ("stretched", "almost-stretched", "compressed", "quadratic")


def _efact(e) -> int:
    out = 1
    for a in e:
        out *= factorial(a)
    return out


def linear_change(F: Poly, G) -> Poly:
    """Substitute X_i -> sum_j G[i][j] X_j in the divided-power polynomial F."""
    n = F.nvars
    forms = [Poly(n, {tuple(1 if k == j else 0 for k in range(n)): G[i][j] for j in range(n) if G[i][j]}) for i in range(n)]
    out = Poly(n)
    for e, c in F.terms.items():
        term = Poly.constant(n, Fraction(c, _efact(e)))
        for i, a in enumerate(e):
            if a:
                term = term * forms[i] ** a
        out = out + term
    return Poly(n, {e: c * _efact(e) for e, c in out.terms.items()})


def random_invertible(n: int, rng, p: int = DEFAULT_PRIME, bound: int = 3):
    while True:
        G = rng.integers(-bound, bound + 1, size=(n, n))
        det = round(np.linalg.det(G))
        if det % p and det != 0:
            return [[int(x) for x in row] for row in G]


def _var(n, i, a):
    e = [0] * n
    e[i] = a
    return Poly(n, {tuple(e): 1})


def _random_coeff(rng, lo=1, hi=5):
    c = int(rng.integers(lo, hi + 1))
    return c if rng.integers(2) else -c


def dual_polynomial(kind: str, n: int, s: int, rng) -> Poly:
    """A dual socle polynomial of the requested shape in n variables, degree s."""
    if n < 1 or s < 1:
        raise AlgebraError("need at least one variable and socle degree >= 1")
    F = Poly(n)
    if kind == "stretched":
        F = _var(n, 0, s) + sum((_var(n, i, 2) for i in range(1, n)), Poly(n))
        # lower terms in the first variable keep the Hilbert function
        for a in range(2, s):
            if rng.integers(2):
                F = F + _random_coeff(rng) * _var(n, 0, a)
    elif kind == "almost-stretched":
        if n < 2 or s < 3:
            raise AlgebraError("almost stretched needs n >= 2 and socle degree >= 3")
        r = int(rng.integers(3, s + 1))
        F = _var(n, 0, s) + _var(n, 1, r) + sum((_var(n, i, 2) for i in range(2, n)), Poly(n))
    elif kind == "compressed":
        for e in monomials_of_degree(n, s):
            F = F + Poly(n, {e: _random_coeff(rng, 0, 7)})
        if not F:
            F = _var(n, 0, s)
    elif kind == "quadratic":
        F = sum((_var(n, i, 2) for i in range(n)), Poly(n))
        s = 2
    else:
        raise AlgebraError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    return F


def random_gorenstein(kind: str, n: int, s: int, seed: int, field: Field | None = None, max_tries: int = 50):
    """(F, A): a random algebra of the given kind; retries until the shape checks out."""
    field = field or PrimeField()
    rng = np.random.default_rng(seed)
    p = getattr(field, "p", DEFAULT_PRIME)
    names = tuple(f"x{i + 1}" for i in range(n)) if n > 3 else ("x", "y", "z")[:n]
    for _ in range(max_tries):
        F = dual_polynomial(kind, n, s, rng)
        F = linear_change(F, random_invertible(n, rng, p))
        A = from_inverse_system(field, names, F)
        if A.edim != n:
            continue
        if kind == "stretched" and classify_stretch(A) != "stretched":
            continue
        if kind == "almost-stretched" and classify_stretch(A) != "almost_stretched":
            continue
        if kind == "compressed" and A.loewy_length != s:
            continue
        return F, A
    raise AlgebraError(f"could not draw a {kind} algebra with n={n}, s={s}")


def random_connected_sum_dual(parts, seed: int, field: Field | None = None):
    """F_1 + F_2 + ... in disjoint variable blocks, then a global linear change.

    ``parts`` lists (kind, n, s) triples.  The algebra of such a sum is the
    connected sum of the algebras of the pieces.
    """
    field = field or PrimeField()
    rng = np.random.default_rng(seed)
    p = getattr(field, "p", DEFAULT_PRIME)
    total = sum(n for _, n, _ in parts)
    F = Poly(total)
    offset = 0
    for kind, n, s in parts:
        piece = dual_polynomial(kind, n, s, rng)
        piece = linear_change(piece, random_invertible(n, rng, p))
        F = F + Poly(total, {(0,) * offset + e + (0,) * (total - offset - n): c for e, c in piece.terms.items()})
        offset += n
    F = linear_change(F, random_invertible(total, rng, p))
    names = tuple(f"x{i + 1}" for i in range(total))
    return F, from_inverse_system(field, names, F)


def gorenstein_corpus(count: int, seed: int, max_length: int = 11, field: Field | None = None):
    """A mixed corpus of Gorenstein algebras of length at most ``max_length``."""
    field = field or PrimeField()
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        sub = int(rng.integers(2**31))
        choice = rng.integers(5)
        try:
            if choice == 0:
                n, s = int(rng.integers(1, 5)), int(rng.integers(2, 7))
                F, A = random_gorenstein("stretched", n, s, sub, field)
            elif choice == 1:
                n, s = int(rng.integers(2, 5)), int(rng.integers(3, 6))
                F, A = random_gorenstein("almost-stretched", n, s, sub, field)
            elif choice == 2:
                n, s = int(rng.integers(2, 4)), int(rng.integers(2, 5))
                F, A = random_gorenstein("compressed", n, s, sub, field)
            elif choice == 3:
                n = int(rng.integers(2, 10))
                F, A = random_gorenstein("quadratic", n, 2, sub, field)
            else:
                a = ("stretched", int(rng.integers(1, 4)), int(rng.integers(3, 6)))
                b = ("quadratic", int(rng.integers(2, 6)), 2)
                F, A = random_connected_sum_dual([a, b], sub, field)
        except AlgebraError:
            continue
        if A.dim <= max_length:
            out.append((sub, F, A))
    return out
