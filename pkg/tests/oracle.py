"""Slow reference computations, independent of ringlab.

Normal forms come from sympy Groebner bases, linear algebra is plain Python
modulo p.  The expected values frozen in the test files were produced by
running this module (``python tests/oracle.py``); the small cases are also
re-run live so drift in either implementation is noticed.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

import sympy

P = 32003


# -- linear algebra mod p ----------------------------------------------------

def rref_mod(rows, p=P):
    M = [[x % p for x in r] for r in rows]
    piv = []
    r = 0
    ncols = len(M[0]) if M else 0
    for c in range(ncols):
        k = next((i for i in range(r, len(M)) if M[i][c]), None)
        if k is None:
            continue
        M[r], M[k] = M[k], M[r]
        inv = pow(M[r][c], p - 2, p)
        M[r] = [x * inv % p for x in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[r])]
        piv.append(c)
        r += 1
    return M[:r], piv


def rank_mod(rows, p=P) -> int:
    return len(rref_mod(rows, p)[1]) if rows else 0


def kernel_mod(rows, ncols, p=P):
    """Basis of {v : rows . v = 0}."""
    if not rows:
        return [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    R, piv = rref_mod(rows, p)
    free = [c for c in range(ncols) if c not in piv]
    out = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for i, c in enumerate(piv):
            v[c] = -R[i][f] % p
        out.append(v)
    return out


# -- algebras from Groebner bases --------------------------------------------

class RefAlgebra:
    """k[x]/I for an m-primary ideal, with its standard-monomial basis."""

    def __init__(self, names, relations, p=P):
        self.p = p
        self.syms = sympy.symbols(names)
        self.n = len(names)
        rels = [sympy.sympify(r, locals=dict(zip(names, self.syms))) for r in relations]
        self.G = sympy.groebner(rels, *self.syms, order="grevlex", modulus=p)
        leads = [sympy.Poly(g, *self.syms).monoms(order="grevlex")[0] for g in self.G.exprs]
        basis = []
        for deg in range(0, 64):
            layer = [e for e in itertools.product(range(deg + 1), repeat=self.n) if sum(e) == deg]
            layer = [e for e in layer if not any(all(a >= b for a, b in zip(e, l)) for l in leads)]
            if not layer:
                break
            basis += layer
        self.basis = basis
        self.dim = len(basis)
        self.index = {e: i for i, e in enumerate(basis)}
        self.table = [[self.nf_monomial(tuple(a + b for a, b in zip(u, v))) for v in basis] for u in basis]

    def nf(self, expr):
        r = self.G.reduce(expr)[1]
        vec = [0] * self.dim
        if r == 0:
            return vec
        for e, c in sympy.Poly(r, *self.syms).terms():
            vec[self.index[e]] = int(c) % self.p
        return vec

    def nf_monomial(self, e):
        return self.nf(sympy.Mul(*[s**a for s, a in zip(self.syms, e)]))

    def mul(self, a, b):
        out = [0] * self.dim
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y:
                    c = x * y
                    for k, z in enumerate(self.table[i][j]):
                        if z:
                            out[k] = (out[k] + c * z) % self.p
        return out

    def var(self, i):
        e = [0] * self.n
        e[i] = 1
        return self.nf_monomial(tuple(e))

    def power_dims(self):
        """dim m^i for i = 0, 1, ... until zero."""
        out = []
        for i in range(0, self.dim + 2):
            vecs = [self.nf_monomial(e) for e in self.basis if sum(e) >= i]
            # images of all monomials of degree exactly i times the basis
            vecs += [self.mul(self.nf_monomial(e), b) for e in itertools.product(range(i + 1), repeat=self.n) if sum(e) == i for b in self._unit_basis()]
            r = rank_mod([v for v in vecs if any(v)]) if any(any(v) for v in vecs) else 0
            out.append(r)
            if r == 0:
                break
        return out

    def _unit_basis(self):
        return [[int(i == j) for j in range(self.dim)] for i in range(self.dim)]

    def hilbert(self):
        d = self.power_dims()
        return [d[i] - d[i + 1] for i in range(len(d) - 1)]

    def socle_dim(self):
        rows = []
        for i in range(self.n):
            x = self.var(i)
            M = [[self.mul(x, b)[k] for b in self._unit_basis()] for k in range(self.dim)]
            rows += M
        return len(kernel_mod(rows, self.dim))


# -- naive minimal resolutions -----------------------------------------------

def _module_map_matrix(A: RefAlgebra, cols, target_rank):
    """k-matrix of A^len(cols) -> A^target_rank, columns given as lists of A-elements."""
    d = A.dim
    units = A._unit_basis()
    M = [[0] * (len(cols) * d) for _ in range(target_rank * d)]
    for j, col in enumerate(cols):
        for b in range(d):
            for r in range(target_rank):
                img = A.mul(col[r], units[b])
                for k in range(d):
                    M[r * d + k][j * d + b] = img[k]
    return M


def betti(A: RefAlgebra, N, presentation=None):
    """Betti numbers of coker(presentation) (default: the residue field)."""
    d = A.dim
    if presentation is None:
        rank0 = 1
        cols = [[A.var(i)] for i in range(A.n)]
    else:
        rank0, cols = presentation
    # minimalize the first step: generators of image / m*image
    out = [rank0]
    for _ in range(N):
        cols = _minimal_columns(A, cols, out[-1])
        out.append(len(cols))
        if len(out) > N:
            break
        if not cols:
            out += [0] * (N + 1 - len(out))
            break
        M = _module_map_matrix(A, cols, out[-2])
        K = kernel_mod(M, len(cols) * d)
        cols = [[v[j * d:(j + 1) * d] for j in range(len(cols))] for v in K]
    return out[: N + 1]


def _minimal_columns(A, cols, rank):
    """A minimal generating set of the submodule spanned by the columns."""
    d = A.dim
    flat = lambda c: [x for e in c for x in e]
    span = [flat(c) for c in cols]
    mspan = [flat([A.mul(A.var(i), e) for e in c]) for c in span_to_cols(span, rank, d) for i in range(A.n)]
    # full k-span of the submodule
    full = [flat([A.mul(b, e) for e in c]) for c in span_to_cols(span, rank, d) for b in A._unit_basis()]
    mfull = [flat([A.mul(b, e) for e in c]) for c in span_to_cols(mspan, rank, d) for b in A._unit_basis()] if mspan else []
    basis_m = [r for r in mfull if any(r)]
    chosen = []
    cur = rank_mod(basis_m) if basis_m else 0
    for v in full:
        if not any(v):
            continue
        r = rank_mod(basis_m + [v]) if basis_m or v else 0
        if r > cur:
            basis_m.append(v)
            chosen.append(v)
            cur = r
    return span_to_cols(chosen, rank, d)


def span_to_cols(vectors, rank, d):
    return [[v[r * d:(r + 1) * d] for r in range(rank)] for v in vectors]


def koszul_ranks(A: RefAlgebra):
    """dims of Koszul homology on the variables."""
    n, d = A.n, A.dim
    subsets = [list(itertools.combinations(range(n), i)) for i in range(n + 1)]
    units = A._unit_basis()

    def diff(i):
        rows, cols = len(subsets[i - 1]) * d, len(subsets[i]) * d
        M = [[0] * cols for _ in range(rows)]
        pos = {s: k for k, s in enumerate(subsets[i - 1])}
        for c, S in enumerate(subsets[i]):
            for t, j in enumerate(S):
                T = S[:t] + S[t + 1:]
                sign = -1 if t % 2 else 1
                x = A.var(j)
                for b in range(d):
                    img = A.mul(x, units[b])
                    for k in range(d):
                        M[pos[T] * d + k][c * d + b] = sign * img[k] % A.p
        return M

    ranks = [0] + [rank_mod(diff(i)) for i in range(1, n + 1)] + [0]
    return [len(subsets[i]) * d - ranks[i] - ranks[i + 1] for i in range(n + 1)]


# -- series ------------------------------------------------------------------

def series_div(num, den, N):
    """Long division of power series with Fraction arithmetic."""
    num = [Fraction(x) for x in num] + [Fraction(0)] * (N + 1)
    den = [Fraction(x) for x in den] + [Fraction(0)] * (N + 1)
    out = []
    for i in range(N + 1):
        c = (num[i] - sum(out[j] * den[i - j] for j in range(i))) / den[0]
        out.append(c)
    return out


def deviations_bruteforce(P, N):
    """Solve prod (1+t^{2i-1})^{e} / prod (1-t^{2i})^{e} = P one degree at a time."""
    e = []
    for i in range(1, N + 1):
        for guess in range(0, 200):
            trial = e + [guess]
            ser = _product(trial, N)
            if ser[i] == P[i]:
                e.append(guess)
                break
        else:
            raise ValueError(f"no nonnegative deviation in degree {i}")
    return e


def _product(e, N):
    ser = [Fraction(1)] + [Fraction(0)] * N
    for i, ei in enumerate(e, start=1):
        for _ in range(ei):
            if i % 2:
                f = [1] + [0] * (i - 1) + [1]
                ser = [sum(ser[k - j] * f[j] for j in range(len(f)) if k - j >= 0) for k in range(N + 1)]
            else:
                ser = series_div(ser, [1] + [0] * (i - 1) + [-1], N)
    return ser


if __name__ == "__main__":
    cases = {
        "x3": (["x"], ["x**3"]),
        "golden": (["x", "y"], ["x*y", "x**4-y**2"]),
        "x2y2": (["x", "y"], ["x**2", "y**2"]),
        "m2": (["x", "y"], ["x**2", "x*y", "y**2"]),
        "x3y2": (["x", "y"], ["x**3", "y**2"]),
        "trap": (["x", "y", "z"], ["x*y", "x*z", "y*z", "x**2-y**2", "x**2-z**2"]),
        "x2y2_mod_soc": (["x", "y"], ["x**2", "y**2", "x*y"]),
        "golden_mod_soc": (["x", "y"], ["x*y", "x**4-y**2", "x**4"]),
        "cs_x3_y3": (["x", "y"], ["x*y", "x**2-y**2"]),
        "fib_x3_y3": (["x", "y"], ["x*y", "x**3", "y**3"]),
    }
    for name, (v, r) in cases.items():
        A = RefAlgebra(v, r)
        print(name, "dim", A.dim, "hilbert", A.hilbert(), "socle", A.socle_dim(), "koszul", koszul_ranks(A))
    for name, N in [("x2y2", 7), ("m2", 7), ("golden", 6), ("x3", 6), ("x2y2_mod_soc", 6), ("golden_mod_soc", 5)]:
        A = RefAlgebra(*cases[name])
        print(name, "betti(k)", betti(A, N))
    A = RefAlgebra(*cases["x3"])
    print("x3 betti(A/x^2)", betti(A, 5, (1, [[A.nf_monomial((2,))]])))
    print("x3 betti(A/x)", betti(A, 5, (1, [[A.var(0)]])))
    A = RefAlgebra(*cases["golden"])
    print("golden betti(A/x)", betti(A, 5, (1, [[A.var(0)]])))
    print("golden betti(A/y)", betti(A, 5, (1, [[A.var(1)]])))
    print("1/(1-2t+t^2)", [int(c) for c in series_div([1], [1, -2, 1], 8)])
    print("deviations 1/(1-t)^2", deviations_bruteforce(series_div([1], [1, -2, 1], 8), 8))
    print("deviations 1/(1-2t)", deviations_bruteforce(series_div([1], [1, -2], 8), 8))
    # Dress: S=k[x]/(x^2), T=k[y]/(y^2), R = S x_k T, M = S/(x) = k over S
    R = RefAlgebra(["x", "y"], ["x**2", "x*y", "y**2"])
    print("fibre x2,y2 betti(k)", betti(R, 6))
