"""Finite-dimensional commutative local algebras given by multiplication tables.

An algebra of dimension ``d`` is stored as a structure-constant tensor
``table[i, j, k]`` = coefficient of ``b_k`` in ``b_i * b_j``.  The basis
always starts with ``b_0 = 1`` and ``b_1 .. b_{d-1}`` span the maximal ideal.
Elements are coordinate vectors of length ``d``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg
from .linalg import Field, PrimeField, matmul
from .polynomials import (
    Poly,
    format_monomial,
    monomial_key,
    monomials_below,
    monomials_of_degree,
)

N_MAX = 64


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class Presentation:
    """Relations in a polynomial ring; the algebra is the local ring at the origin."""

    field: Field
    names: tuple[str, ...]
    relations: tuple[Poly, ...]

    def is_minimal(self) -> bool:
        return all(f.order() >= 2 for f in self.relations if f)


class LocalAlgebra:
    def __init__(self, field: Field, basis, table, names=None, gens=None, check=True):
        self.field = field
        self.basis = tuple(str(b) for b in basis)
        self.table = np.asarray(table, dtype=field.dtype)
        d = len(self.basis)
        if self.table.shape != (d, d, d):
            raise AlgebraError(f"table shape {self.table.shape} does not match basis of size {d}")
        self.dim = d
        self._names = tuple(names) if names is not None else None
        self._gens = None if gens is None else field.array(gens).reshape(-1, d)
        # left multiplication by basis elements: mats[l] @ v = b_l * v
        self.mats = np.ascontiguousarray(np.transpose(self.table, (0, 2, 1)))
        if check:
            self.validate()

    # -- structure -------------------------------------------------------

    def validate(self):
        d, T, F = self.dim, self.table, self.field
        e = F.eye(d)
        if not (np.array_equal(T[0], e) and np.array_equal(T[:, 0, :], e)):
            raise AlgebraError("b_0 is not a two-sided identity")
        if not np.array_equal(T, np.transpose(T, (1, 0, 2))):
            raise AlgebraError("multiplication table is not commutative")
        flat = T.reshape(d * d, d)
        # (b_i b_j) b_k  versus  b_i (b_j b_k)
        left = matmul(flat, T.reshape(d, d * d), F).reshape(d, d, d, d)
        # with commutativity, (b_k b_i) b_j must equal (b_i b_j) b_k
        right = np.transpose(left, (1, 2, 0, 3))
        if not np.array_equal(left, right):
            raise AlgebraError("multiplication table is not associative")
        if d > 1 and np.any(T[1:, 1:, 0] != 0):
            raise AlgebraError("span(b_1..) is not closed under multiplication")
        # nilpotency of the maximal ideal
        if len(self.powers) > d + 1:
            raise AlgebraError("maximal ideal is not nilpotent")

    @property
    def names(self) -> tuple[str, ...]:
        if self._names is None:
            self._names = tuple(f"z{i + 1}" for i in range(len(self.gens)))
        return self._names

    @property
    def gens(self) -> np.ndarray:
        """Chosen generators of the maximal ideal, one per row."""
        if self._gens is None:
            self._gens = np.array(min_gens(self.maximal_ideal), dtype=self.field.dtype).reshape(-1, self.dim)
        return self._gens

    def one(self) -> np.ndarray:
        v = self.field.zeros(self.dim)
        v[0] = 1
        return v

    def unit_vector(self, i: int) -> np.ndarray:
        v = self.field.zeros(self.dim)
        v[i] = 1
        return v

    def mult_matrix(self, a) -> np.ndarray:
        """Matrix of multiplication by ``a`` acting on column vectors."""
        a = np.asarray(a, dtype=self.field.dtype)
        if isinstance(self.field, PrimeField):
            return matmul(a.reshape(1, -1), self.mats.reshape(self.dim, -1), self.field).reshape(self.dim, self.dim)
        return np.tensordot(a, self.mats, axes=1)

    def mul(self, a, b) -> np.ndarray:
        return matmul(self.mult_matrix(a), np.asarray(b, dtype=self.field.dtype), self.field)

    def power(self, a, k: int) -> np.ndarray:
        out = self.one()
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def evaluate(self, f: Poly, values=None) -> np.ndarray:
        """Evaluate a polynomial in the algebra generators (or supplied element values)."""
        vals = self.gens if values is None else values
        if f.nvars != len(vals):
            raise AlgebraError("polynomial has the wrong number of variables")
        out = self.field.zeros(self.dim)
        for e, c in f.terms.items():
            term = self.one()
            for v, a in zip(vals, e):
                for _ in range(a):
                    term = self.mul(term, v)
            out = self.field.reduce(out + self.field(c) * term)
        return out

    def format(self, v) -> str:
        terms = []
        for i, c in enumerate(v):
            if c == 0:
                continue
            c = self.field.to_int(c)
            label = self.basis[i]
            if label == "1":
                body = str(abs(c))
            elif abs(c) == 1:
                body = label if "+" not in label and " - " not in label else f"({label})"
            else:
                body = f"{abs(c)}*" + (label if "+" not in label and " - " not in label else f"({label})")
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        text = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        for s, b in terms[1:]:
            text += f" {s} {b}"
        return text

    def __repr__(self):
        return f"LocalAlgebra(dim={self.dim}, field={self.field}, hilbert={hilbert_function(self)})"

    # -- filtration data -------------------------------------------------

    @cached_property
    def maximal_ideal(self) -> "IdealSubspace":
        return IdealSubspace(self, np.eye(self.dim, dtype=np.int64)[1:].astype(self.field.dtype), is_rref=True)

    @cached_property
    def powers(self) -> list["IdealSubspace"]:
        """[m^0, m^1, ..., m^{lo}, 0]."""
        out = [IdealSubspace(self, self.field.eye(self.dim), is_rref=True), self.maximal_ideal]
        while out[-1].dim > 0:
            if len(out) > self.dim + 2:
                break
            out.append(ideal_product(self.maximal_ideal, out[-1]))
        return out

    @property
    def loewy_length(self) -> int:
        return len(self.powers) - 2

    @property
    def edim(self) -> int:
        return self.maximal_ideal.dim - self.powers[2].dim if self.dim > 1 else 0

    @cached_property
    def order(self) -> tuple[int, ...]:
        out = []
        for i in range(self.dim):
            e = self.unit_vector(i)
            k = 0
            while k + 1 < len(self.powers) and self.powers[k + 1].contains(e):
                k += 1
            out.append(k)
        return tuple(out)

    @cached_property
    def socle(self) -> "IdealSubspace":
        if self.dim == 1:
            return IdealSubspace(self, self.field.eye(1), is_rref=True)
        return annihilator(self, self.maximal_ideal)

    def canonical_bytes(self) -> bytes:
        """Canonical serialization of the table and field, used for cache keys."""
        head = f"{self.field}|{self.dim}|".encode()
        return head + np.ascontiguousarray(np.vectorize(str)(self.table) if self.table.dtype == object else self.table).tobytes()


class IdealSubspace:
    """A k-subspace of an algebra closed under multiplication, stored as RREF rows."""

    def __init__(self, parent: LocalAlgebra, vectors, is_rref=False, check=False, generators=None):
        self.parent = parent
        F = parent.field
        vecs = np.asarray(vectors, dtype=F.dtype).reshape(-1, parent.dim)
        if is_rref:
            self.vectors = vecs
            self.pivots = [int(np.nonzero(row)[0][0]) for row in vecs]
        else:
            r, piv, R = linalg.rref(vecs, F) if vecs.shape[0] else (0, [], vecs)
            self.vectors = R[:r]
            self.pivots = list(piv)
        self._generators = generators
        if check:
            prod = _products_with_basis(parent, self.vectors)
            if prod.shape[0] and not self.contains_all(prod):
                raise AlgebraError("subspace is not an ideal")

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    @property
    def generators(self):
        if self._generators is None:
            self._generators = min_gens(self)
        return self._generators

    def reduce(self, v) -> np.ndarray:
        return linalg.reduce_by_rref(v, self.vectors, self.pivots, self.parent.field)

    def contains(self, v) -> bool:
        return not np.any(self.reduce(np.asarray(v).reshape(1, -1)))

    def contains_all(self, vs) -> bool:
        vs = np.asarray(vs).reshape(-1, self.parent.dim)
        return not vs.shape[0] or not np.any(self.reduce(vs))

    def __le__(self, other: "IdealSubspace") -> bool:
        return other.contains_all(self.vectors)

    def __eq__(self, other):
        return isinstance(other, IdealSubspace) and self.dim == other.dim and self <= other

    def __add__(self, other: "IdealSubspace") -> "IdealSubspace":
        return IdealSubspace(self.parent, np.concatenate([self.vectors, other.vectors]))

    def __and__(self, other: "IdealSubspace") -> "IdealSubspace":
        return IdealSubspace(self.parent, subspace_intersection(self.vectors, other.vectors, self.parent.field))

    def __repr__(self):
        return f"IdealSubspace(dim={self.dim}, span=[{', '.join(self.parent.format(v) for v in self.vectors)}])"


# ---------------------------------------------------------------------------
# subspace helpers


def subspace_intersection(U, V, field: Field) -> np.ndarray:
    U = np.asarray(U)
    V = np.asarray(V)
    if U.shape[0] == 0 or V.shape[0] == 0:
        return field.zeros((0, U.shape[1] if U.ndim == 2 else V.shape[1]))
    stacked = np.concatenate([U, field.reduce(-V)], axis=0)
    K = linalg.left_kernel_basis(stacked, field)
    if K.shape[0] == 0:
        return field.zeros((0, U.shape[1]))
    return matmul(K[:, : U.shape[0]], U, field)


def _products_with_basis(A: LocalAlgebra, vectors, include_one=False) -> np.ndarray:
    """All products b_l * v for l >= 1 (or >= 0), v in ``vectors``; one per row."""
    vectors = np.asarray(vectors, dtype=A.field.dtype).reshape(-1, A.dim)
    start = 0 if include_one else 1
    if vectors.shape[0] == 0 or A.dim <= start:
        return A.field.zeros((0, A.dim))
    # mats[l] @ v for all l, v  ->  (l, v, k)
    out = np.einsum("lkj,vj->lvk", A.mats[start:].astype(object) if A.field.dtype == object else A.mats[start:], vectors)
    out = A.field.reduce(out)
    return out.reshape(-1, A.dim)


def ideal_generated(A: LocalAlgebra, elements) -> IdealSubspace:
    elements = np.asarray(elements, dtype=A.field.dtype).reshape(-1, A.dim)
    if elements.shape[0] == 0:
        return IdealSubspace(A, A.field.zeros((0, A.dim)), is_rref=True)
    span = np.concatenate([elements, _products_with_basis(A, elements)], axis=0)
    return IdealSubspace(A, span)


def ideal_product(I: IdealSubspace, J: IdealSubspace) -> IdealSubspace:
    A = I.parent
    if I.dim == 0 or J.dim == 0:
        return IdealSubspace(A, A.field.zeros((0, A.dim)), is_rref=True)
    prods = []
    for u in I.vectors:
        M = A.mult_matrix(u)
        prods.append(matmul(J.vectors, M.T, A.field))
    return IdealSubspace(A, np.concatenate(prods, axis=0))


def element_times_ideal(A: LocalAlgebra, x, I: IdealSubspace) -> IdealSubspace:
    if I.dim == 0:
        return I
    return IdealSubspace(A, matmul(I.vectors, A.mult_matrix(x).T, A.field))


# ---------------------------------------------------------------------------
# operations


def ideal_power(A: LocalAlgebra, i: int) -> IdealSubspace:
    if i < 0:
        raise ValueError("power must be nonnegative")
    P = A.powers
    return P[i] if i < len(P) else P[-1]


def hilbert_function(A: LocalAlgebra) -> list[int]:
    P = A.powers
    return [P[i].dim - P[i + 1].dim for i in range(len(P) - 1)]


def annihilator(A: LocalAlgebra, J: IdealSubspace) -> IdealSubspace:
    """(0 :_A J)."""
    if J.dim == 0:
        return IdealSubspace(A, A.field.eye(A.dim), is_rref=True)
    blocks = [A.mult_matrix(v) for v in J.vectors]
    K = linalg.kernel_basis(np.concatenate(blocks, axis=0), A.field)
    return IdealSubspace(A, K)


def socle(A: LocalAlgebra) -> IdealSubspace:
    return A.socle


def min_gens(J: IdealSubspace) -> list[np.ndarray]:
    """Elements of ``J`` whose images form a basis of J/mJ (pivot-based lift)."""
    A = J.parent
    if J.dim == 0:
        return []
    mJ = ideal_product(A.maximal_ideal, J)
    idx = linalg.complement_indices(J.vectors, mJ.vectors if mJ.dim else None, A.field)
    return [J.vectors[i].copy() for i in idx]


def mu(J: IdealSubspace) -> int:
    if J.dim == 0:
        return 0
    return J.dim - ideal_product(J.parent.maximal_ideal, J).dim


def is_gorenstein(A: LocalAlgebra) -> bool:
    return A.socle.dim == 1


def classify_stretch(A: LocalAlgebra) -> str:
    k = mu(ideal_power(A, 2))
    if k <= 1:
        return "stretched"
    if k == 2:
        return "almost_stretched"
    return "neither"


def quotient(A: LocalAlgebra, J: IdealSubspace, return_map=False):
    """A/J on the complement basis given by the non-pivot columns of J."""
    if J.dim == A.dim:
        raise AlgebraError("cannot take the quotient by the unit ideal")
    piv = set(J.pivots)
    cols = [c for c in range(A.dim) if c not in piv]
    sub = A.table[np.ix_(cols, cols)]  # (c, c, d)
    c = len(cols)
    flat = J.reduce(sub.reshape(c * c, A.dim)) if J.dim else sub.reshape(c * c, A.dim)
    table = flat[:, cols].reshape(c, c, c)
    gens = None
    if A._gens is not None:
        g = J.reduce(A._gens) if J.dim else A._gens
        gens = g[:, cols]
    Q = LocalAlgebra(A.field, [A.basis[i] for i in cols], table, names=A._names if gens is not None else None, gens=gens)
    if return_map:
        # projection A -> A/J as a (c x d) matrix acting on column vectors
        proj = A.field.zeros((c, A.dim))
        for j in range(A.dim):
            v = A.unit_vector(j).reshape(1, -1)
            if J.dim:
                v = J.reduce(v)
            proj[:, j] = v[0, cols]
        return Q, proj
    return Q


def unital_subalgebra(A: LocalAlgebra, V, return_map=False):
    """The local algebra k*1 + V for a multiplicatively closed subspace V of m."""
    F = A.field
    V = np.asarray(V.vectors if isinstance(V, IdealSubspace) else V, dtype=F.dtype).reshape(-1, A.dim)
    if V.shape[0]:
        r, piv, R = linalg.rref(V, F)
        V, piv = R[:r], piv
    else:
        piv = []
    if any(row[0] != 0 for row in V):
        raise AlgebraError("subspace is not contained in the maximal ideal")
    r = V.shape[0]
    for i in range(r):
        for j in range(i, r):
            prod = A.mul(V[i], V[j])
            red = linalg.reduce_by_rref(prod.reshape(1, -1), V, piv, F) if r else prod.reshape(1, -1)
            if np.any(red):
                raise AlgebraError(
                    f"subspace is not multiplicatively closed: ({A.format(V[i])}) * ({A.format(V[j])}) = {A.format(prod)}"
                )
    emb = np.concatenate([A.one().reshape(1, -1), V], axis=0)
    d = r + 1
    table = F.zeros((d, d, d))
    for i in range(d):
        for j in range(d):
            prod = A.mul(emb[i], emb[j])
            if i == 0 or j == 0:
                coeffs = F.zeros(d)
                coeffs[max(i, j)] = 1
            else:
                coeffs = F.zeros(d)
                coeffs[1:] = prod[piv] if r else []
            table[i, j] = coeffs
    labels = ["1"] + [A.format(v) for v in V]
    S = LocalAlgebra(F, labels, table)
    if return_map:
        return S, emb.T.copy()  # columns are the images of S's basis in A
    return S


# ---------------------------------------------------------------------------
# construction from presentations


@dataclass(frozen=True)
class TruncationCertificate:
    degree: int
    dims: tuple[int, ...]


def build_algebra(P: Presentation, n_max: int = N_MAX, return_certificate=False):
    """Local algebra k[x]_(x) / I by truncation and linear algebra.

    The dimension of k[x]/(I + (x)^N) is computed for N = 1, 2, ...; two equal
    consecutive values certify (x)^N contained in I (Nakayama) and the
    standard monomials of the local degree order give the basis.
    """
    F = P.field
    n = len(P.names)
    rels = [f for f in P.relations if f]
    dims = []
    prev = None
    for N in range(1, n_max + 1):
        monos, R, piv = _truncated_ideal(F, n, rels, N)
        dimN = len(monos) - len(piv)
        dims.append(dimN)
        if prev is not None and dimN == prev[0]:
            break
        prev = (dimN, N, monos, R, piv)
    else:
        raise AlgebraError(f"ideal not m-primary (or exceeds truncation cap N_max={n_max})")
    _, N, monos, R, piv = prev
    index = {m: i for i, m in enumerate(monos)}
    pivset = set(piv)
    std = [m for i, m in enumerate(monos) if i not in pivset]
    std_cols = [index[m] for m in std]

    def normal_form(e):
        v = F.zeros(len(monos))
        if sum(e) >= N:
            return F.zeros(len(std))
        v[index[e]] = 1
        if piv:
            v = linalg.reduce_by_rref(v.reshape(1, -1), R, piv, F)[0]
        return v[std_cols]

    d = len(std)
    table = F.zeros((d, d, d))
    for i, a in enumerate(std):
        for j in range(i, d):
            e = tuple(x + y for x, y in zip(a, std[j]))
            table[i, j] = table[j, i] = normal_form(e)
    gens = np.array([normal_form(tuple(1 if k == i else 0 for k in range(n))) for i in range(n)], dtype=F.dtype).reshape(n, d)
    A = LocalAlgebra(F, [format_monomial(m, P.names) for m in std], table, names=P.names, gens=gens)
    if return_certificate:
        return A, TruncationCertificate(N, tuple(dims))
    return A


def _truncated_ideal(F: Field, n: int, rels, N: int):
    monos = monomials_below(n, N)
    index = {m: i for i, m in enumerate(monos)}
    rows = []
    for f in rels:
        o = f.order()
        for d in range(0, N - o):
            for u in monomials_of_degree(n, d):
                row = F.zeros(len(monos))
                for e, c in f.terms.items():
                    w = tuple(a + b for a, b in zip(e, u))
                    if sum(w) < N:
                        row[index[w]] = F.reduce(row[index[w]] + F(c))
                rows.append(row)
    if not rows:
        return monos, F.zeros((0, len(monos))), []
    r, piv, R = linalg.rref(np.array(rows, dtype=F.dtype), F)
    return monos, R[:r], piv


def from_inverse_system(field: Field, names, F_poly: Poly) -> LocalAlgebra:
    """Gorenstein algebra k[x]/Ann(F) under the contraction action."""
    names = tuple(names)
    n = len(names)
    if not F_poly:
        raise AlgebraError("dual socle polynomial must be nonzero")
    deg = F_poly.degree()
    if field.characteristic and field.characteristic <= deg:
        raise AlgebraError(f"characteristic {field.characteristic} must exceed deg F = {deg}")
    # the dual module: exponents of F's support and all their divisors
    support = sorted({e for t in F_poly.terms for e in _divisors(t)}, key=monomial_key)
    sidx = {e: i for i, e in enumerate(support)}

    def vec(g: Poly):
        v = field.zeros(len(support))
        for e, c in g.terms.items():
            v[sidx[e]] = field(c)
        return v

    chosen = []
    rows = []
    cur_rank = 0
    for u in monomials_below(n, deg + 1):
        g = F_poly.contract(u)
        if not g:
            continue
        trial = np.array(rows + [vec(g)], dtype=field.dtype)
        rk = linalg.rank(trial, field)
        if rk > cur_rank:
            rows.append(vec(g))
            chosen.append(u)
            cur_rank = rk
    D = np.array(rows, dtype=field.dtype)  # dual basis vectors, one per row
    d = len(chosen)
    table = field.zeros((d, d, d))
    for i in range(d):
        for j in range(i, d):
            w = tuple(a + b for a, b in zip(chosen[i], chosen[j]))
            g = F_poly.contract(w)
            if g:
                coeffs = linalg.solve(D.T, vec(g), field)
                if coeffs is None:  # pragma: no cover - contraction stays in the span
                    raise AlgebraError("internal error: contraction outside the dual module")
            else:
                coeffs = field.zeros(d)
            table[i, j] = table[j, i] = coeffs
    gens = []
    for k in range(n):
        e = tuple(1 if t == k else 0 for t in range(n))
        g = F_poly.contract(e)
        gens.append(linalg.solve(D.T, vec(g), field) if g else field.zeros(d))
    return LocalAlgebra(field, [format_monomial(u, names) for u in chosen], table, names=names, gens=np.array(gens, dtype=field.dtype))


def _divisors(e):
    import itertools

    return itertools.product(*[range(a + 1) for a in e])


def field_algebra(field: Field) -> LocalAlgebra:
    """The residue field k viewed as a local algebra."""
    return LocalAlgebra(field, ["1"], field.array([[[1]]]), names=(), gens=field.zeros((0, 1)))


def presentation_of(A: LocalAlgebra, names=None) -> Presentation:
    """A minimal presentation of ``A`` on its chosen generators of m."""
    F = A.field
    gens = [g for g in A.gens]
    n = len(gens)
    names = tuple(names) if names is not None else A.names
    lo = A.loewy_length
    monos = monomials_below(n, lo + 2)
    images = []
    for e in monos:
        if sum(e) > lo:
            images.append(F.zeros(A.dim))
            continue
        v = A.one()
        for g, a in zip(gens, e):
            for _ in range(a):
                v = A.mul(v, g)
        images.append(v)
    E = np.array(images, dtype=F.dtype)  # (monomials, d)
    K = linalg.left_kernel_basis(E, F)  # relations as coefficient rows over monos
    if K.shape[0] == 0:
        return Presentation(F, names, ())
    # minimalize: complement of m*I inside I, truncated at degree lo + 2
    index = {m: i for i, m in enumerate(monos)}
    shifted = []
    for row in K:
        for k in range(n):
            s = F.zeros(len(monos))
            for i in np.nonzero(row)[0]:
                w = list(monos[i])
                w[k] += 1
                w = tuple(w)
                if w in index:
                    s[index[w]] = row[i]
            shifted.append(s)
    mI = np.array(shifted, dtype=F.dtype) if shifted else None
    idx = linalg.complement_indices(K, mI, F)
    rels = []
    for i in idx:
        terms = {}
        for j in np.nonzero(K[i])[0]:
            terms[monos[j]] = F.to_int(K[i][j])
        rels.append(Poly(n, terms))
    return Presentation(F, names, tuple(rels))


def induced_map(A: LocalAlgebra, B: LocalAlgebra, images) -> np.ndarray:
    """Matrix (dim B x dim A) of the algebra map A -> B sending A.gens to ``images``.

    Raises AlgebraError when the assignment does not extend to a well-defined
    ring homomorphism.
    """
    F = A.field
    images = np.asarray(images, dtype=F.dtype).reshape(-1, B.dim)
    n = len(A.gens)
    if images.shape[0] != n:
        raise AlgebraError(f"expected {n} generator images, got {images.shape[0]}")
    monos = monomials_below(n, A.loewy_length + 1)
    src, dst = [], []
    for e in monos:
        a, b = A.one(), B.one()
        for i, k in enumerate(e):
            for _ in range(k):
                a = A.mul(a, A.gens[i])
                b = B.mul(b, images[i])
        src.append(a)
        dst.append(b)
    src = np.array(src, dtype=F.dtype)
    dst = np.array(dst, dtype=F.dtype)
    idx = linalg.complement_indices(src, None, F)
    if len(idx) != A.dim:
        raise AlgebraError("generators do not generate the source algebra")
    # phi @ src[idx].T = dst[idx].T
    inv = _inverse(src[idx].T, F)
    phi = matmul(dst[idx].T, inv, F)
    if not np.array_equal(matmul(src, phi.T, F), dst):
        raise AlgebraError("assignment is not compatible with the relations of the source")
    # relations of degree lo+1 must map to zero as well
    for e in monomials_of_degree(n, A.loewy_length + 1):
        b = B.one()
        for i, k in enumerate(e):
            for _ in range(k):
                b = B.mul(b, images[i])
        if np.any(b):
            raise AlgebraError("assignment is not compatible with the relations of the source")
    return phi


def _inverse(M, F: Field) -> np.ndarray:
    n = M.shape[0]
    r, piv, R = linalg.rref(np.concatenate([M, F.eye(n)], axis=1), F)
    if piv[:n] != list(range(n)):
        raise AlgebraError("matrix is singular")
    return R[:, n:]


def is_homomorphism(A: LocalAlgebra, B: LocalAlgebra, phi) -> bool:
    """Check phi(1) = 1 and phi(b_i b_j) = phi(b_i) phi(b_j) on all basis pairs."""
    F = A.field
    phi = np.asarray(phi, dtype=F.dtype)
    if not np.array_equal(phi[:, 0], B.one()):
        return False
    cols = phi.T  # images of basis elements
    for i in range(A.dim):
        Mi = B.mult_matrix(cols[i])
        lhs = matmul(phi, A.table[i].T, F)  # column j: phi(b_i b_j)
        rhs = matmul(Mi, phi, F)
        if not np.array_equal(lhs, rhs):
            return False
    return True
