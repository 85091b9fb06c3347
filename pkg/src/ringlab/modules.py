"""Finite-dimensional modules over a local algebra and their syzygies.

A module of k-dimension ``D`` is stored by the action matrices of the
algebra generators (``acts[g]`` is ``D x D`` acting on column vectors).
Free modules ``A^r`` use coordinates ``(i, l)`` -> ``i * dim A + l`` with
respect to the algebra basis ``b_l``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg
from .algebra import AlgebraError, IdealSubspace, LocalAlgebra, ideal_generated
from .linalg import matmul
from .polynomials import monomials_below


class AlgebraContext:
    """Per-algebra data for module computations: generator words and basis expansions."""

    def __init__(self, A: LocalAlgebra):
        self.A = A
        self.F = A.field
        F = self.F
        self.gens = np.asarray(A.gens)
        self.n = len(self.gens)
        # monomials in the generators up to the Loewy length, each with a parent
        monos = monomials_below(self.n, A.loewy_length + 1) if A.dim > 1 else [()]
        if not monos or monos[0] != (0,) * self.n:
            monos = [(0,) * self.n] + [m for m in monos if any(m)]
        index = {m: i for i, m in enumerate(monos)}
        parent, var = [-1], [-1]
        values = [A.one()]
        gmats = [A.mult_matrix(g) for g in self.gens]
        for m in monos[1:]:
            v = next(i for i, a in enumerate(m) if a)
            p = list(m)
            p[v] -= 1
            parent.append(index[tuple(p)])
            var.append(v)
            values.append(matmul(gmats[v], values[index[tuple(p)]], F))
        self.monos = monos
        self.parent = parent
        self.var = var
        E = np.array(values, dtype=F.dtype)  # (monos, d)
        idx = linalg.complement_indices(E, None, F)
        if len(idx) != A.dim:
            raise AlgebraError("chosen generators do not generate the algebra")
        # b_l = sum_j C[l, j] * mono_{idx[j]}
        P = E[idx].T  # columns: values of the chosen monomials
        inv = _inverse(P, F)
        C = F.zeros((A.dim, len(monos)))
        C[:, idx] = inv.T
        self.C = C
        # generator actions on A in the basis b
        self.gen_mats = np.array(gmats, dtype=F.dtype).reshape(self.n, A.dim, A.dim)

    @property
    def d(self):
        return self.A.dim

    def basis_actions(self, acts) -> np.ndarray:
        """Actions of all basis elements b_l, given generator actions on a module."""
        F = self.F
        D = acts.shape[1] if acts.ndim == 3 else 0
        mono_acts = [F.eye(D)]
        for j in range(1, len(self.monos)):
            mono_acts.append(matmul(acts[self.var[j]], mono_acts[self.parent[j]], F))
        M = np.array(mono_acts, dtype=F.dtype).reshape(len(self.monos), D * D)
        return matmul(self.C, M, F).reshape(self.d, D, D)

    def orbit_matrix(self, acts, G) -> np.ndarray:
        """Columns b_l * G[:, i] ordered as i * d + l (the map A^r -> M sending e_i to G_i)."""
        F = self.F
        D, r = G.shape
        blocks = [np.asarray(G, dtype=F.dtype)]
        for j in range(1, len(self.monos)):
            blocks.append(matmul(acts[self.var[j]], blocks[self.parent[j]], F))
        B = np.array(blocks, dtype=F.dtype)  # (monos, D, r)
        out = matmul(self.C, B.reshape(len(self.monos), D * r), F).reshape(self.d, D, r)
        return np.ascontiguousarray(np.transpose(out, (1, 2, 0))).reshape(D, r * self.d)

    def free_action(self, vectors, g) -> np.ndarray:
        """Multiply rows of free-module vectors (k, r*d) by generator g."""
        k, rd = vectors.shape
        r = rd // self.d
        V = vectors.reshape(k * r, self.d)
        return matmul(V, self.gen_mats[g].T, self.F).reshape(k, rd)

    def multiply(self, a, vectors) -> np.ndarray:
        """Multiply rows of free-module vectors by the algebra element a."""
        k, rd = vectors.shape
        V = vectors.reshape(-1, self.d)
        return matmul(V, self.A.mult_matrix(a).T, self.F).reshape(k, rd)


def _inverse(M, F):
    n = M.shape[0]
    r, piv, R = linalg.rref(np.concatenate([M, F.eye(n)], axis=1), F)
    if list(piv[:n]) != list(range(n)):
        raise AlgebraError("matrix is singular")
    return R[:, n:]


_CONTEXTS: dict[int, AlgebraContext] = {}


def context(A: LocalAlgebra) -> AlgebraContext:
    ctx = getattr(A, "_module_context", None)
    if ctx is None:
        ctx = AlgebraContext(A)
        A._module_context = ctx
    return ctx


class Module:
    """A finite-dimensional A-module given by generator actions."""

    def __init__(self, A: LocalAlgebra, acts):
        self.A = A
        F = A.field
        acts = np.asarray(acts, dtype=F.dtype)
        n = len(context(A).gens)
        if acts.size == 0:
            D = acts.shape[-1] if acts.ndim == 3 else 0
            acts = F.zeros((n, D, D))
        self.acts = acts
        self.dim = acts.shape[1]

    @property
    def ctx(self):
        return context(self.A)

    def dual(self) -> "Module":
        return Module(self.A, np.ascontiguousarray(np.transpose(self.acts, (0, 2, 1))))

    @cached_property
    def radical(self) -> np.ndarray:
        """RREF basis (rows) of mM."""
        F = self.A.field
        if self.dim == 0:
            return F.zeros((0, 0))
        cols = np.concatenate(list(self.acts), axis=1) if len(self.acts) else F.zeros((self.dim, 0))
        return linalg.row_space(cols.T, F)

    @cached_property
    def top_indices(self) -> list[int]:
        """Coordinates whose unit vectors lift a basis of M/mM."""
        R = self.radical
        piv = set(int(np.nonzero(row)[0][0]) for row in R)
        return [c for c in range(self.dim) if c not in piv]

    @property
    def mu(self) -> int:
        return len(self.top_indices)

    @cached_property
    def socle(self) -> np.ndarray:
        """Basis (rows) of the socle {v : m v = 0}."""
        F = self.A.field
        if self.dim == 0:
            return F.zeros((0, 0))
        stacked = np.concatenate(list(self.acts), axis=0) if len(self.acts) else F.zeros((0, self.dim))
        return linalg.kernel_basis(stacked, F)

    def generators(self) -> np.ndarray:
        G = self.A.field.zeros((self.dim, self.mu))
        for j, c in enumerate(self.top_indices):
            G[c, j] = 1
        return G

    def submodule(self, basis_rows) -> "Module":
        """The submodule with the given basis (rows, assumed closed under the action)."""
        F = self.A.field
        r, piv, R = linalg.rref(np.asarray(basis_rows, dtype=F.dtype), F)
        R = R[:r]
        free = piv  # coordinates of a vector in span(R) are its entries at pivot columns
        acts = [matmul(R, X.T, F)[:, free].T for X in self.acts]
        return Module(self.A, np.array(acts, dtype=F.dtype).reshape(len(self.acts), r, r))

    @cached_property
    def layer_signature(self) -> tuple:
        """Dimensions of the radical and socle series (additive over direct sums)."""
        F = self.A.field
        rad = []
        cur = self
        while cur.dim:
            rad.append(cur.dim)
            nxt = cur.submodule(cur.radical) if cur.radical.shape[0] else None
            if nxt is None or nxt.dim == cur.dim:
                break
            cur = nxt
        return (self.dim, self.mu, self.socle.shape[0], tuple(rad))


@dataclass
class Syzygy:
    """Minimal cover A^mu -> M and its kernel."""

    generators: np.ndarray  # D x mu
    orbit: np.ndarray  # D x (mu*d): images of the basis of A^mu
    kernel: np.ndarray  # rows: basis of the kernel in A^mu coordinates
    free_cols: list  # coordinates of kernel vectors are their entries here
    module: Module  # the kernel as an A-module


def syzygy(M: Module) -> Syzygy:
    ctx = M.ctx
    F = ctx.F
    G = M.generators()
    mu = G.shape[1]
    if mu == 0:
        return Syzygy(G, F.zeros((M.dim, 0)), F.zeros((0, 0)), [], Module(M.A, F.zeros((ctx.n, 0, 0))))
    Phi = ctx.orbit_matrix(M.acts, G)
    r, piv, R = linalg.rref(Phi, F)
    cols = Phi.shape[1]
    pivset = set(piv)
    free = [c for c in range(cols) if c not in pivset]
    K = F.zeros((len(free), cols))
    if free:
        fi = np.array(free)
        K[np.arange(len(free)), fi] = 1
        if r:
            K[:, piv] = F.reduce(-R[:r, fi].T)
    acts = []
    for g in range(ctx.n):
        moved = ctx.free_action(K, g) if len(free) else K
        acts.append(moved[:, free].T if len(free) else F.zeros((0, 0)))
    omega = Module(M.A, np.array(acts, dtype=F.dtype).reshape(ctx.n, len(free), len(free)))
    return Syzygy(G, Phi, K, free, omega)


# ---------------------------------------------------------------------------
# constructors


def free_module(A: LocalAlgebra, r: int) -> Module:
    ctx = context(A)
    F = A.field
    acts = np.zeros((ctx.n, r * A.dim, r * A.dim), dtype=F.dtype) if F.dtype != object else F.zeros((ctx.n, r * A.dim, r * A.dim))
    for g in range(ctx.n):
        for i in range(r):
            acts[g, i * A.dim : (i + 1) * A.dim, i * A.dim : (i + 1) * A.dim] = ctx.gen_mats[g]
    return Module(A, acts)


def residue_field(A: LocalAlgebra) -> Module:
    return Module(A, A.field.zeros((context(A).n, 1, 1)))


def cyclic_module(A: LocalAlgebra, J: IdealSubspace) -> Module:
    """A/J."""
    return cokernel(A, A.field.zeros((1, 0, A.dim)), extra=J)


def cokernel(A: LocalAlgebra, matrix, extra: IdealSubspace | None = None) -> Module:
    """Cokernel of A^c -> A^r given by an (r, c, d) array of algebra elements."""
    ctx = context(A)
    F = A.field
    matrix = np.asarray(matrix, dtype=F.dtype)
    r, c, d = matrix.shape
    cols = [matrix[:, j, :].reshape(r * d) for j in range(c)]
    span = []
    for v in cols:
        span.append(v.reshape(1, -1))
        span.append(np.concatenate([ctx.multiply(A.unit_vector(l), v.reshape(1, -1)) for l in range(1, d)], axis=0) if d > 1 else F.zeros((0, r * d)))
    if extra is not None and extra.dim:
        for i in range(r):
            block = F.zeros((extra.dim, r * d))
            block[:, i * d : (i + 1) * d] = extra.vectors
            span.append(block)
    S = np.concatenate(span, axis=0) if span else F.zeros((0, r * d))
    if S.shape[0]:
        rk, piv, R = linalg.rref(S, F)
        R, piv = R[:rk], piv
    else:
        R, piv = S, []
    pivset = set(piv)
    keep = [j for j in range(r * d) if j not in pivset]
    acts = []
    for g in range(ctx.n):
        E = F.eye(r * d)[keep]
        moved = ctx.free_action(E, g)
        if len(piv):
            moved = linalg.reduce_by_rref(moved, R, piv, F)
        acts.append(moved[:, keep].T)
    return Module(A, np.array(acts, dtype=F.dtype).reshape(ctx.n, len(keep), len(keep)))


def direct_sum(*mods: Module) -> Module:
    A = mods[0].A
    F = A.field
    D = sum(m.dim for m in mods)
    n = len(context(A).gens)
    acts = F.zeros((n, D, D))
    o = 0
    for m in mods:
        acts[:, o : o + m.dim, o : o + m.dim] = m.acts
        o += m.dim
    return Module(A, acts)
