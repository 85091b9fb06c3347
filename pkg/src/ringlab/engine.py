"""Betti numbers by syzygies with direct-sum splitting and memoized summands.

The syzygy module of every class representative is split into smaller
pieces; isomorphic pieces share one class, so the Betti numbers follow from
a linear recurrence over the classes:

    beta_0(c) = mu(c),   beta_i(c) = sum over summands c' of Omega(c): beta_{i-1}(c').

Splittings and identifications are certified (explicit idempotent images,
invertible homomorphisms), so a missed splitting only costs time, never
correctness.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .linalg import PrimeField, matmul
from .modules import Module, Syzygy, context, residue_field, syzygy

log = logging.getLogger(__name__)


class ResourceLimit(RuntimeError):
    """Raised when a module exceeds the configured size guard."""


@dataclass
class ModulePresentation:
    """Minimal presentation data of a module: generators and A-linear relations."""

    module: Module
    syz: Syzygy
    basis_cols: list  # columns of the orbit matrix forming a k-basis of the module
    basis_inv: np.ndarray  # inverse of orbit[:, basis_cols]
    relations: np.ndarray  # (beta_1, mu * d) rows in A^mu coordinates


def present(M: Module, syz: Syzygy | None = None) -> ModulePresentation:
    F = M.A.field
    syz = syz or syzygy(M)
    Phi = syz.orbit
    r, piv, R = linalg.rref(Phi, F)
    cols = list(piv)
    inv = _inverse(Phi[:, cols], F) if cols else F.zeros((0, 0))
    rel = syz.kernel[syz.module.top_indices] if syz.module.dim else F.zeros((0, Phi.shape[1]))
    return ModulePresentation(M, syz, cols, inv, rel)


def _inverse(M, F):
    n = M.shape[0]
    r, piv, R = linalg.rref(np.concatenate([M, F.eye(n)], axis=1), F)
    return R[:, n:]


def hom_system(P: ModulePresentation, N: Module) -> np.ndarray:
    """Linear conditions on generator images y (length mu_L * D_N) defining Hom_A(L, N)."""
    ctx = context(N.A)
    F = N.A.field
    mu = P.module.mu
    D = N.dim
    d = ctx.d
    if P.relations.shape[0] == 0 or mu == 0 or D == 0:
        return F.zeros((0, mu * D))
    BA = ctx.basis_actions(N.acts)  # (d, D, D)
    rel = P.relations.reshape(-1, mu, d)
    # block (j, i) = sum_l rel[j, i, l] * BA[l]
    blocks = matmul(rel.reshape(-1, d), BA.reshape(d, D * D), F).reshape(rel.shape[0], mu, D, D)
    return np.ascontiguousarray(np.transpose(blocks, (0, 2, 1, 3))).reshape(rel.shape[0] * D, mu * D)


def hom_basis(P: ModulePresentation, N: Module) -> np.ndarray:
    """Basis of Hom_A(L, N) as generator images, rows of length mu_L * D_N."""
    F = N.A.field
    S = hom_system(P, N)
    if S.shape[0] == 0:
        return F.eye(P.module.mu * N.dim)
    return linalg.kernel_basis(S, F)


def hom_matrix(P: ModulePresentation, N: Module, y) -> np.ndarray:
    """The D_N x D_L matrix of the homomorphism with generator images y (length mu * D_N)."""
    ctx = context(N.A)
    F = N.A.field
    mu = P.module.mu
    Y = np.asarray(y).reshape(mu, N.dim).T  # D_N x mu
    orbit = ctx.orbit_matrix(N.acts, Y)  # D_N x (mu * d)
    return matmul(orbit[:, P.basis_cols], P.basis_inv, F)


def random_hom(P: ModulePresentation, N: Module, rng, basis=None):
    F = N.A.field
    H = hom_basis(P, N) if basis is None else basis
    if H.shape[0] == 0:
        return None
    c = F.random(rng, (H.shape[0],))
    return hom_matrix(P, N, matmul(c, H, F))


def is_module_map(L: Module, N: Module, f) -> bool:
    F = L.A.field
    return all(
        linalg.is_zero(F.reduce(matmul(f, a, F) - matmul(b, f, F))) for a, b in zip(L.acts, N.acts)
    )


# ---------------------------------------------------------------------------
# splitting


def split_simple_summands(M: Module):
    """M = k^a + N: returns (a, N) with N containing mM."""
    F = M.A.field
    soc = M.socle
    if soc.shape[0] == 0:
        return 0, M
    rad = M.radical
    # socle vectors independent modulo mM
    idx = linalg.complement_indices(soc, rad if rad.shape[0] else None, F)
    a = len(idx)
    if a == 0:
        return 0, M
    # complement of span(soc[idx]) containing mM: mM plus unit vectors avoiding the socle pivots
    S = soc[idx]
    base = np.concatenate([rad, S], axis=0) if rad.shape[0] else S
    r, piv, R = linalg.rref(base, F)
    pivset = set(piv)
    extra = [c for c in range(M.dim) if c not in pivset]
    comp = np.concatenate([rad, F.eye(M.dim)[extra]], axis=0) if rad.shape[0] else F.eye(M.dim)[extra]
    if comp.shape[0] == 0:
        return a, Module(M.A, F.zeros((len(M.acts), 0, 0)))
    return a, M.submodule(comp)


def fitting_split(M: Module, P: ModulePresentation, rng, tries=3):
    """Try to split M using a random endomorphism minus an eigenvalue on the top."""
    F = M.A.field
    if not isinstance(F, PrimeField) or M.mu < 2:
        return None
    H = hom_basis(P, M)
    if H.shape[0] <= 1:
        return None
    for _ in range(tries):
        phi = random_hom(P, M, rng, H)
        lam = _top_eigenvalue(M, phi, rng)
        if lam is None:
            continue
        psi = F.reduce(phi - lam * F.eye(M.dim))
        # psi^D by repeated squaring
        k = 1
        Q = psi
        while k < M.dim:
            Q = matmul(Q, Q, F)
            k *= 2
        r = linalg.rank(Q, F)
        if 0 < r < M.dim:
            img = linalg.row_space(Q.T, F)
            ker = linalg.kernel_basis(Q, F)
            return [M.submodule(img), M.submodule(ker)]
    return None


def _top_eigenvalue(M: Module, phi, rng):
    """An eigenvalue in k of the map induced by phi on M/mM, via a Krylov minimal polynomial."""
    F = M.A.field
    tops = M.top_indices
    rad = M.radical
    piv = [int(np.nonzero(row)[0][0]) for row in rad]
    mu = len(tops)
    img = phi[:, tops].T
    if rad.shape[0]:
        img = linalg.reduce_by_rref(img, rad, piv, F)
    T = img[:, tops].T  # mu x mu
    v = F.random(rng, (mu,))
    seq = [v]
    for _ in range(mu):
        seq.append(matmul(T, seq[-1], F))
    K = np.array(seq, dtype=F.dtype)
    for deg in range(1, mu + 1):
        ker = linalg.left_kernel_basis(K[: deg + 1], F)
        if ker.shape[0]:
            coeffs = ker[0]
            break
    else:
        return None
    coeffs = np.trim_zeros(coeffs, "b")
    p = F.p
    xs = np.arange(p, dtype=np.int64)
    val = np.zeros(p, dtype=np.int64)
    for c in coeffs[::-1]:
        val = (val * xs + int(c)) % p
    roots = np.nonzero(val == 0)[0]
    if len(roots) == 0:
        return None
    return int(roots[int(rng.integers(len(roots)))])


# ---------------------------------------------------------------------------
# class memo


@dataclass
class ModuleClass:
    index: int
    rep: Module
    signature: tuple
    presentation: ModulePresentation | None = None
    dual_presentation: ModulePresentation | None = None
    omega: Counter | None = None  # class index -> multiplicity
    peel_failures: int = 0

    @property
    def mu(self):
        return self.rep.mu


@dataclass
class EngineStats:
    syzygies: int = 0
    splits: int = 0
    peels: int = 0
    iso_tests: int = 0
    largest: int = 0


class SyzygyEngine:
    """Memoized syzygy classes over one algebra.

    ``max_dim`` bounds the k-dimension of any module the engine is willing to
    resolve; ``system_cap`` bounds the number of entries of the dense linear
    systems behind Hom computations (splitting and isomorphism tests are
    skipped beyond it, which is always safe).
    """

    def __init__(self, A, seed=0, max_dim=3000, system_cap=3 * 10**7, peel_max=64):
        self.A = A
        self.peel_max = peel_max
        self.system_cap = system_cap
        self.rng = np.random.default_rng(seed)
        self.max_dim = max_dim
        self.classes: list[ModuleClass] = []
        self._by_sig: dict[tuple, list[int]] = {}
        self.stats = EngineStats()
        self.k = self._new_class(residue_field(A))

    # -- decomposition --------------------------------------------------------
    def _guard(self, M):
        self.stats.largest = max(self.stats.largest, M.dim)
        if M.dim > self.max_dim:
            raise ResourceLimit(f"module of dimension {M.dim} exceeds the guard {self.max_dim}")

    def _pieces(self, M: Module):
        a, N = split_simple_summands(M)
        out = []
        if N.dim == 0:
            return a, out
        stack = [N]
        while stack:
            X = stack.pop()
            parts = self._peel(X)
            if parts is None and X.mu >= 2 and self._affordable(X.mu, self._beta1_bound(X), X.dim):
                parts = fitting_split(X, self._presentation(X), self.rng)
                if parts:
                    self.stats.splits += 1
            if parts:
                for p in parts:
                    b, q = split_simple_summands(p)
                    a += b
                    if q.dim:
                        stack.append(q)
            else:
                out.append(X)
        return a, out

    def _peel(self, X: Module):
        """Split off a copy of a known small class, certified by g o f invertible."""
        F = self.A.field
        for c in sorted(self.classes[1:], key=lambda c: c.rep.dim):
            L = c.rep
            if L.dim > self.peel_max:
                break
            if L.dim >= X.dim or L.mu > X.mu or not self._affordable(L.mu, self._beta1_bound(L), X.dim):
                continue
            if c.peel_failures > 8 and c.peel_failures > 4 * self.stats.peels:
                continue
            if c.presentation is None:
                c.presentation = self._presentation(L)
            if c.dual_presentation is None:
                c.dual_presentation = self._presentation(L.dual())
            f = random_hom(c.presentation, X, self.rng)
            if f is None:
                continue
            h = random_hom(c.dual_presentation, X.dual(), self.rng)
            if h is None:
                continue
            g = h.T  # X -> L
            if linalg.rank(matmul(g, f, F), F) == L.dim:
                self.stats.peels += 1
                img = linalg.row_space(f.T, F)
                ker = linalg.kernel_basis(g, F)
                return [X.submodule(img), X.submodule(ker)]
            c.peel_failures += 1
        return None

    def _presentation(self, M):
        self._guard(M)
        return present(M)

    def _new_class(self, M) -> ModuleClass:
        c = ModuleClass(len(self.classes), M, M.layer_signature)
        self.classes.append(c)
        self._by_sig.setdefault(c.signature, []).append(c.index)
        return c

    def _affordable(self, mu, beta1, D) -> bool:
        return mu * max(beta1, 1) * D * D <= self.system_cap

    def _beta1_bound(self, X: Module) -> int:
        # relations are at most the generators of the syzygy, itself at most dim A * mu - dim X
        return max(X.mu * self.A.dim - X.dim, 0)

    def _isomorphic(self, c: ModuleClass, M: Module) -> bool:
        if not self._affordable(c.rep.mu, self._beta1_bound(c.rep), M.dim):
            return False
        if c.presentation is None:
            c.presentation = self._presentation(c.rep)
        self.stats.iso_tests += 1
        H = hom_basis(c.presentation, M)
        for _ in range(2):
            f = random_hom(c.presentation, M, self.rng, H)
            if f is not None and linalg.rank(f, M.A.field) == M.dim:
                return True
        return False

    def classify(self, M: Module) -> Counter:
        """Decompose M and return its summands as class multiplicities."""
        self._guard(M)
        a, pieces = self._pieces(M)
        out = Counter()
        if a:
            out[self.k.index] += a
        for X in pieces:
            sig = X.layer_signature
            for i in self._by_sig.get(sig, []):
                if self._isomorphic(self.classes[i], X):
                    out[i] += 1
                    break
            else:
                out[self._new_class(X).index] += 1
        return out

    def omega(self, c: ModuleClass) -> Counter:
        if c.omega is None:
            self._guard(c.rep)
            syz = syzygy(c.rep)
            self.stats.syzygies += 1
            self._guard(syz.module)
            if c.presentation is None:
                c.presentation = present(c.rep, syz)
            c.omega = self.classify(syz.module)
            log.debug("class %d (dim %d, mu %d): omega %s", c.index, c.rep.dim, c.mu, dict(c.omega))
        return c.omega

    # -- Betti numbers --------------------------------------------------------
    def betti(self, M: Module | None, n: int, prefix: list | None = None) -> list[int]:
        """beta_0 .. beta_n of M (the residue field when M is None).

        If ``prefix`` is given, each Betti number is appended as soon as it is
        known, so a caller catching ResourceLimit keeps the completed degrees.
        """
        out = prefix if prefix is not None else []
        start = Counter({self.k.index: 1}) if M is None else self.classify(M)
        cur = start
        for i in range(n + 1):
            out.append(sum(m * self.classes[c].mu for c, m in cur.items()))
            if i == n:
                break
            nxt = Counter()
            for c, m in cur.items():
                for c2, m2 in self.omega(self.classes[c]).items():
                    nxt[c2] += m * m2
            cur = nxt
        return out
