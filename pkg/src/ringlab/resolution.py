"""Minimal free resolutions, Betti numbers, Ext and Koszul homology."""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import linalg
from .algebra import AlgebraError, IdealSubspace, LocalAlgebra, is_gorenstein, min_gens, quotient
from .engine import ResourceLimit, SyzygyEngine
from .linalg import matmul
from .modules import Module, cokernel, context, direct_sum, free_module, syzygy

log = logging.getLogger(__name__)

DEFAULT_MAX_DIM = 2500
# modules over A/soc(A) stay much smaller in practice; the bound only stops runaway memory use
SOCLE_ROUTE_MAX_DIM = 6000
# under route="auto" with a fallback available, the direct pass is a cross-check on low degrees
AUTO_CHECK_MAX_DIM = 400


class PresentedModule:
    """coker(A^c -> A^r); ``matrix[i, j]`` is the algebra element in row i, column j."""

    def __init__(self, A: LocalAlgebra, matrix):
        self.A = A
        self.matrix = A.field.array(matrix) if A.field.dtype == object else np.asarray(matrix, dtype=A.field.dtype)
        if self.matrix.ndim != 3 or self.matrix.shape[2] != A.dim:
            raise AlgebraError(f"presentation matrix must have shape (rows, cols, {A.dim})")
        self.rank = self.matrix.shape[0]

    @classmethod
    def quotient(cls, A: LocalAlgebra, elements) -> "PresentedModule":
        """A/(elements) as a cyclic module."""
        els = np.asarray(elements, dtype=A.field.dtype).reshape(-1, A.dim)
        return cls(A, els.reshape(1, -1, A.dim))

    @classmethod
    def residue_field(cls, A: LocalAlgebra) -> "PresentedModule":
        return cls.quotient(A, A.gens)

    @classmethod
    def free(cls, A: LocalAlgebra, r: int = 1) -> "PresentedModule":
        return cls(A, A.field.zeros((r, 0, A.dim)))

    @classmethod
    def from_module(cls, M: Module) -> "PresentedModule":
        """A presentation read off the minimal cover of an action module."""
        syz = syzygy(M)
        A = M.A
        mu = syz.generators.shape[1]
        rel = syz.kernel[syz.module.top_indices] if syz.module.dim else A.field.zeros((0, mu * A.dim))
        return cls(A, np.ascontiguousarray(rel.reshape(-1, mu, A.dim).transpose(1, 0, 2)))

    @cached_property
    def module(self) -> Module:
        return cokernel(self.A, self.matrix)

    def __repr__(self):
        return f"PresentedModule(rank={self.rank}, relations={self.matrix.shape[1]})"


def as_module(A: LocalAlgebra, M) -> Module:
    if M is None:
        return cokernel(A, A.field.zeros((1, 0, A.dim)), extra=A.maximal_ideal)
    if isinstance(M, PresentedModule):
        return M.module
    if isinstance(M, Module):
        return M
    if isinstance(M, IdealSubspace):
        return cokernel(A, A.field.zeros((1, 0, A.dim)), extra=M)
    raise TypeError(f"cannot interpret {type(M).__name__} as a module")


# ---------------------------------------------------------------------------
# explicit minimal resolutions


@dataclass
class ResolutionData:
    A: LocalAlgebra
    differentials: list  # d_i as arrays (beta_{i-1}, beta_i, dim A)
    betti: list

    def check(self) -> bool:
        """d_i o d_{i+1} = 0 and all entries of every d_i lie in the maximal ideal."""
        return all(self.composition_vanishes(i) for i in range(1, len(self.differentials))) and self.is_minimal()

    def is_minimal(self) -> bool:
        return all(linalg.is_zero(d[..., 0]) for d in self.differentials)

    def composition_vanishes(self, i: int) -> bool:
        return linalg.is_zero(compose(self.A, self.differentials[i - 1], self.differentials[i]))


def compose(A: LocalAlgebra, P, Q) -> np.ndarray:
    """Product of matrices over A: (r, s, d) x (s, t, d) -> (r, t, d)."""
    F = A.field
    r, s, d = P.shape
    t = Q.shape[1]
    out = F.zeros((r, t, d))
    if s == 0:
        return out
    # b_l * v = mats[l] @ v; expand each entry of P as a multiplication matrix
    PM = matmul(P.reshape(r * s, d), A.mats.reshape(d, d * d), F).reshape(r, s, d, d)
    for a in range(r):
        for b in range(s):
            out[a] = F.reduce(out[a] + matmul(Q[b], PM[a, b].T, F))
    return out


def minimal_resolution(A: LocalAlgebra, M=None, N: int = 4, max_dim: int = DEFAULT_MAX_DIM) -> ResolutionData:
    """Minimal free resolution of M (default: the residue field) through degree N."""
    if N < 0:
        raise ValueError("N must be non-negative")
    d = A.dim
    cur = as_module(A, M)
    betti = [cur.mu]
    diffs = []
    for i in range(1, N + 1):
        if cur.dim > max_dim:
            raise ResourceLimit(f"syzygy of dimension {cur.dim} exceeds the guard {max_dim}")
        syz = syzygy(cur)
        omega = syz.module
        gens = syz.kernel[omega.top_indices] if omega.dim else A.field.zeros((0, cur.mu * d))
        diffs.append(np.ascontiguousarray(gens.reshape(omega.mu, cur.mu, d).transpose(1, 0, 2)))
        betti.append(omega.mu)
        cur = omega
    return ResolutionData(A, diffs, betti)


# ---------------------------------------------------------------------------
# Betti numbers


@dataclass
class BettiResult:
    betti: list
    route: str  # "direct" or "socle-quotient"
    direct_degree: int  # Betti numbers through this degree were resolved over A itself
    notes: list = field(default_factory=list)


def socle_quotient(A: LocalAlgebra) -> LocalAlgebra:
    """A/soc(A) with the images of A's chosen generators as its generators."""
    A.gens  # fix generators so the quotient inherits them in order
    return quotient(A, A.socle)


def betti_numbers(A: LocalAlgebra, M=None, N: int = 12, route: str = "auto", max_dim: int = DEFAULT_MAX_DIM, seed: int = 0) -> BettiResult:
    """Betti numbers beta_0..beta_N of M (default k).

    ``route="direct"`` resolves over A with summand splitting and raises
    ResourceLimit past ``max_dim``.  ``route="socle-quotient"`` (Gorenstein A
    of embedding dimension >= 2 only) resolves over A/soc(A) and transfers
    back through Levin's identity; ``"auto"`` tries the direct route first and
    falls back, checking the two routes against each other on the degrees the
    direct route finished.  When the fallback applies, the direct pass of
    ``"auto"`` stops at AUTO_CHECK_MAX_DIM.
    """
    if route not in ("auto", "direct", "socle-quotient"):
        raise ValueError(f"unknown route {route!r}")
    Mod = None if M is None else as_module(A, M)
    prefix: list = []
    fallback = is_gorenstein(A) and A.edim >= 2
    if route in ("auto", "direct"):
        cap = min(max_dim, AUTO_CHECK_MAX_DIM) if route == "auto" and fallback else max_dim
        eng = SyzygyEngine(A, seed=seed, max_dim=cap)
        try:
            out = eng.betti(Mod, N, prefix)
            return BettiResult(out, "direct", N)
        except ResourceLimit:
            if route == "direct":
                raise
            log.info("direct route stopped after degree %d; switching to the socle quotient", len(prefix) - 1)
    if not fallback:
        raise ResourceLimit(f"direct route exceeded the guard after degree {len(prefix) - 1} and no fallback applies")
    out = _socle_route(A, Mod, N, seed, max(4 * max_dim, SOCLE_ROUTE_MAX_DIM))
    done = len(prefix) - 1
    if prefix and out[: len(prefix)] != prefix:
        raise AssertionError(f"routes disagree: direct {prefix} vs socle quotient {out[:len(prefix)]}")
    notes = [f"degrees {done + 1}..{N} via the socle quotient"] if route == "auto" else []
    return BettiResult(out, "socle-quotient", max(done, 0), notes)


def betti_sequence(A: LocalAlgebra, M=None, N: int = 12, **kw) -> list[int]:
    return betti_numbers(A, M, N, **kw).betti


def _socle_route(A: LocalAlgebra, Mod: Module | None, N: int, seed: int, max_dim: int = None) -> list[int]:
    from .series import TruncatedSeries

    if not (is_gorenstein(A) and A.edim >= 2):
        raise AlgebraError("the socle-quotient route needs a Gorenstein algebra of embedding dimension >= 2")
    Ab = socle_quotient(A)
    eng = SyzygyEngine(Ab, seed=seed, max_dim=max_dim or SOCLE_ROUTE_MAX_DIM)
    Pbar = TruncatedSeries(eng.betti(None, N), N)
    Pk = Pbar * (1 + Pbar.shift(2)).reciprocal()
    if Mod is None:
        return Pk.as_ints()
    # Omega_A(M) lies in m F, so the socle kills it: it is an A/soc-module
    syz = syzygy(Mod)
    omega = Module(Ab, syz.module.acts)
    Pomega_bar = TruncatedSeries(eng.betti(omega, N), N)
    Pomega = Pomega_bar * (1 - Pk.shift(2))
    return (Mod.mu + Pomega.shift(1)).as_ints()


# ---------------------------------------------------------------------------
# Ext


def ext_dims(A: LocalAlgebra, M, Nmod, degrees, max_dim: int = DEFAULT_MAX_DIM) -> dict[int, int]:
    """dim_k Ext^i_A(M, Nmod) for i in ``degrees``, from Hom of the minimal resolution."""
    degrees = sorted(set(int(i) for i in degrees))
    if not degrees:
        return {}
    if degrees[0] < 0:
        raise ValueError("Ext degrees must be non-negative")
    res = minimal_resolution(A, M, degrees[-1] + 1, max_dim=max_dim)
    N = as_module(A, Nmod)
    F = A.field
    ctx = context(A)
    BA = ctx.basis_actions(N.acts)  # (d, D, D)
    D = N.dim

    def coboundary(i):
        # Hom(F_i, N) = N^{beta_i} -> Hom(F_{i+1}, N): phi |-> phi o d_{i+1}
        dmat = res.differentials[i]  # (beta_i, beta_{i+1}, d)
        bi, bj = dmat.shape[0], dmat.shape[1]
        out = F.zeros((bj * D, bi * D))
        if bi and bj and D:
            blocks = matmul(dmat.reshape(bi * bj, -1), BA.reshape(A.dim, D * D), F).reshape(bi, bj, D, D)
            for a in range(bi):
                for b in range(bj):
                    out[b * D : (b + 1) * D, a * D : (a + 1) * D] = blocks[a, b]
        return out

    ranks = {}

    def rk(i):
        if i < 0:
            return 0
        if i not in ranks:
            ranks[i] = linalg.rank(coboundary(i), F)
        return ranks[i]

    return {i: res.betti[i] * D - rk(i) - rk(i - 1) for i in degrees}


def ar_diagnostic(A: LocalAlgebra, M, N: int = 4, max_dim: int = DEFAULT_MAX_DIM) -> dict:
    """Ext^{1..N}(M, M + A) vanishing diagnostic; a finite window proves nothing by itself."""
    Mod = as_module(A, M)
    if syzygy(Mod).module.dim == 0:
        return {"verdict": "free", "ext": {}}
    target = direct_sum(Mod, free_module(A, 1))
    ext = ext_dims(A, Mod, target, range(1, N + 1), max_dim=max_dim)
    if any(ext.values()):
        return {"verdict": "consistent-with-AR", "ext": ext}
    return {"verdict": "vanishing-window-found", "ext": ext}


# ---------------------------------------------------------------------------
# Koszul homology


@dataclass
class KoszulHomology:
    A: LocalAlgebra
    n: int
    subsets: list  # subsets[i]: sorted tuples of size i
    ranks: list
    cycles: list  # cycles[i]: representative cycles (rows) of a homology basis in degree i
    boundaries: list  # RREF of boundaries per degree
    _class_data: dict = field(default_factory=dict, repr=False)

    def poincare(self) -> list[int]:
        return list(self.ranks)

    def product(self, u, v, i: int, j: int) -> np.ndarray:
        """Wedge product of chains in degrees i and j (coordinates e_S * d + l)."""
        A, F, d = self.A, self.A.field, self.A.dim
        out = F.zeros(len(self.subsets[i + j]) * d) if i + j <= self.n else None
        if out is None:
            return F.zeros(0)
        index = {S: k for k, S in enumerate(self.subsets[i + j])}
        U = np.asarray(u).reshape(-1, d)
        V = np.asarray(v).reshape(-1, d)
        for a, S in enumerate(self.subsets[i]):
            if linalg.is_zero(U[a]):
                continue
            Ma = A.mult_matrix(U[a])
            for b, T in enumerate(self.subsets[j]):
                if set(S) & set(T) or linalg.is_zero(V[b]):
                    continue
                sign = _merge_sign(S, T)
                k = index[tuple(sorted(S + T))]
                prod = matmul(Ma, V[b], F)
                out[k * d : (k + 1) * d] = F.reduce(out[k * d : (k + 1) * d] + sign * prod)
        return out

    def class_of(self, z, i: int) -> np.ndarray:
        """Coordinates of the homology class of a cycle in the chosen basis."""
        F = self.A.field
        if i not in self._class_data:
            B = self.boundaries[i]
            reps = self.cycles[i]
            stack = np.concatenate([B, reps], axis=0) if B.shape[0] else reps
            self._class_data[i] = (stack, B.shape[0])
        stack, nb = self._class_data[i]
        if stack.shape[0] == 0:
            return F.zeros(0)
        x = linalg.solve(stack.T, np.asarray(z), F)
        if x is None:
            raise AlgebraError("not a cycle")
        return x[nb:]

    def multiplication(self, i: int, j: int) -> np.ndarray:
        """Table (ranks[i], ranks[j], ranks[i+j]) of the product on homology."""
        F = self.A.field
        if i + j > self.n:
            return F.zeros((self.ranks[i], self.ranks[j], 0))
        out = F.zeros((self.ranks[i], self.ranks[j], self.ranks[i + j]))
        for a, u in enumerate(self.cycles[i]):
            for b, v in enumerate(self.cycles[j]):
                out[a, b] = self.class_of(self.product(u, v, i, j), i + j)
        return out


def _merge_sign(S, T) -> int:
    inv = sum(1 for s in S for t in T if s > t)
    return -1 if inv % 2 else 1


def koszul_generators(A: LocalAlgebra) -> np.ndarray:
    """A minimal generating set of m (the chosen generators when they are minimal)."""
    if len(A.gens) == A.edim:
        return A.gens
    return np.array(min_gens(A.maximal_ideal), dtype=A.field.dtype).reshape(-1, A.dim)


def koszul_differential(A: LocalAlgebra, subsets, i: int) -> np.ndarray:
    """Matrix of K_i -> K_{i-1} acting on column vectors."""
    F, d = A.field, A.dim
    gens = koszul_generators(A)
    rows = len(subsets[i - 1]) * d
    cols = len(subsets[i]) * d
    out = F.zeros((rows, cols))
    index = {S: k for k, S in enumerate(subsets[i - 1])}
    mults = [A.mult_matrix(g) for g in gens]
    for c, S in enumerate(subsets[i]):
        for pos, s in enumerate(S):
            T = S[:pos] + S[pos + 1 :]
            r = index[T]
            block = mults[s] if pos % 2 == 0 else F.reduce(-mults[s])
            out[r * d : (r + 1) * d, c * d : (c + 1) * d] = block
    return out


def koszul_homology(A: LocalAlgebra) -> KoszulHomology:
    F = A.field
    n = A.edim
    subsets = [list(itertools.combinations(range(n), i)) for i in range(n + 1)]
    diffs = {i: koszul_differential(A, subsets, i) for i in range(1, n + 1)}
    ranks, cycles, bounds = [], [], []
    for i in range(n + 1):
        dim_i = len(subsets[i]) * A.dim
        Z = linalg.kernel_basis(diffs[i], F) if i >= 1 else F.eye(dim_i)
        B = linalg.row_space(diffs[i + 1].T, F) if i < n else F.zeros((0, dim_i))
        # representatives: cycles independent modulo boundaries, first pivots first
        if B.shape[0]:
            idx = linalg.complement_indices(Z, B, F)
        else:
            idx = linalg.complement_indices(Z, None, F)
        reps = Z[idx] if len(idx) else F.zeros((0, dim_i))
        ranks.append(len(idx))
        cycles.append(reps)
        bounds.append(B)
    return KoszulHomology(A, n, subsets, ranks, cycles, bounds)


@dataclass
class PairingResult:
    nondegenerate: bool
    rank: int
    h1: int
    matrix: np.ndarray
    witness: tuple | None  # (z in H_1, z' in H_{n-1}) with z z' spanning H_n


def poincare_pairing_check(A: LocalAlgebra) -> PairingResult:
    """Rank test for the product H_1 x H_{n-1} -> H_n on Koszul homology."""
    if not is_gorenstein(A):
        raise AlgebraError("the pairing check needs a Gorenstein algebra")
    n = A.edim
    if n < 2:
        raise AlgebraError("the pairing check needs embedding dimension >= 2")
    H = koszul_homology(A)
    F = A.field
    if H.ranks[n] != 1:
        raise AlgebraError(f"top Koszul homology has dimension {H.ranks[n]}, expected 1")
    table = H.multiplication(1, n - 1)[:, :, 0]
    r = linalg.rank(table, F)
    witness = None
    if H.ranks[1]:
        nz = np.nonzero(table[0])[0]
        if len(nz):
            witness = (H.cycles[1][0], H.cycles[n - 1][int(nz[0])])
    return PairingResult(r == H.ranks[1], r, H.ranks[1], table, witness)
