"""Exact dense linear algebra over GF(p) and the rationals.

Matrices are plain numpy arrays.  Over GF(p) they hold canonical int64
representatives in ``[0, p)``; over the rationals they are object arrays of
:class:`fractions.Fraction`.  The field descriptor travels alongside the
array and is passed explicitly to every routine.

Pivoting is deterministic: columns are scanned left to right and the first
row (at or below the current pivot row) with a nonzero entry is used.
"""
from __future__ import annotations

from fractions import Fraction

import numba
import numpy as np

DEFAULT_PRIME = 32003

# float64 products of residues stay exact while n * (p - 1)**2 < 2**53.
_FLOAT_EXACT = 2**53


class PrimeField:
    """The prime field GF(p)."""

    dtype = np.int64

    def __init__(self, p: int = DEFAULT_PRIME):
        p = int(p)
        if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
            raise ValueError(f"{p} is not a prime")
        if p >= 2**31:
            raise ValueError("primes must be below 2**31")
        self.p = p

    characteristic = property(lambda self: self.p)

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __call__(self, x) -> int:
        if isinstance(x, Fraction):
            num = x.numerator % self.p
            den = x.denominator % self.p
            if den == 0:
                raise ZeroDivisionError(f"denominator of {x} vanishes in {self}")
            return num * pow(den, self.p - 2, self.p) % self.p
        return int(x) % self.p

    def inv(self, a) -> int:
        a = int(a) % self.p
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)

    def neg(self, a) -> int:
        return (-int(a)) % self.p

    def to_int(self, a) -> int:
        """Symmetric lift in (-p/2, p/2], used for printing."""
        a = int(a) % self.p
        return a - self.p if a > self.p // 2 else a

    def reduce(self, arr):
        return np.mod(arr, self.p)

    def array(self, data) -> np.ndarray:
        arr = np.asarray(data, dtype=object)
        if arr.size and any(isinstance(v, Fraction) for v in arr.flat):
            out = np.empty(arr.shape, dtype=np.int64)
            for idx, v in np.ndenumerate(arr):
                out[idx] = self(v)
            return out
        return np.mod(np.asarray(data, dtype=np.int64), self.p)

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def eye(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def random(self, rng: np.random.Generator, shape) -> np.ndarray:
        return rng.integers(0, self.p, size=shape, dtype=np.int64)

    def random_scalar(self, rng: np.random.Generator, nonzero=False) -> int:
        lo = 1 if nonzero else 0
        return int(rng.integers(lo, self.p))


class Rationals:
    """The field QQ with exact Fraction arithmetic (intended for small instances)."""

    dtype = object
    characteristic = 0

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("QQ")

    def __call__(self, x) -> Fraction:
        return Fraction(x)

    def inv(self, a) -> Fraction:
        a = Fraction(a)
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def neg(self, a):
        return -Fraction(a)

    def to_int(self, a):
        return Fraction(a)

    def reduce(self, arr):
        return arr

    def array(self, data) -> np.ndarray:
        arr = np.array(data, dtype=object)
        flat = arr.reshape(-1)
        for i in range(flat.size):
            flat[i] = Fraction(flat[i])
        return arr

    def zeros(self, shape) -> np.ndarray:
        arr = np.empty(shape, dtype=object)
        arr.fill(Fraction(0))
        return arr

    def eye(self, n: int) -> np.ndarray:
        arr = self.zeros((n, n))
        for i in range(n):
            arr[i, i] = Fraction(1)
        return arr

    def random(self, rng: np.random.Generator, shape) -> np.ndarray:
        return self.array(rng.integers(-9, 10, size=shape))

    def random_scalar(self, rng: np.random.Generator, nonzero=False):
        while True:
            v = Fraction(int(rng.integers(-9, 10)))
            if v or not nonzero:
                return v


Field = PrimeField | Rationals


def parse_field(text: str) -> Field:
    text = text.strip()
    if text in ("QQ", "Q"):
        return Rationals()
    if text.upper().startswith("GF(") and text.endswith(")"):
        return PrimeField(int(text[3:-1]))
    raise ValueError(f"unknown field {text!r}; expected GF(p) or QQ")


# ---------------------------------------------------------------------------
# elimination kernels


@numba.njit(cache=True)
def _rref_mod_p(A, p):
    rows, cols = A.shape
    pivots = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        piv = -1
        for i in range(r, rows):
            if A[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(c, cols):
                tmp = A[r, j]
                A[r, j] = A[piv, j]
                A[piv, j] = tmp
        # modular inverse by Fermat
        a = A[r, c]
        inv = 1
        e = p - 2
        base = a
        while e > 0:
            if e & 1:
                inv = inv * base % p
            base = base * base % p
            e >>= 1
        for j in range(c, cols):
            A[r, j] = A[r, j] * inv % p
        for i in range(rows):
            if i != r:
                f = A[i, c]
                if f != 0:
                    for j in range(c, cols):
                        if A[r, j] != 0:
                            A[i, j] = (A[i, j] - f * A[r, j]) % p
        pivots[r] = c
        r += 1
    return r, pivots[:r]


def _rref_generic(A, field):
    rows, cols = A.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = [i for i in range(r, rows) if A[i, c] != 0]
        if not nz:
            continue
        piv = nz[0]
        if piv != r:
            A[[r, piv], c:] = A[[piv, r], c:]
        inv = field.inv(A[r, c])
        A[r, c:] = A[r, c:] * inv
        for i in range(rows):
            if i != r and A[i, c] != 0:
                f = A[i, c]
                A[i, c:] = A[i, c:] - f * A[r, c:]
        pivots.append(c)
        r += 1
    return r, pivots


def rref(M: np.ndarray, field: Field):
    """Reduced row echelon form.

    Returns ``(rank, pivot_columns, R)`` where ``R`` has the same shape as
    ``M`` and its first ``rank`` rows are the nonzero rows.
    """
    A = np.array(M, dtype=field.dtype, copy=True)
    if A.ndim != 2:
        raise ValueError("rref expects a 2-d array")
    if A.size == 0:
        return 0, [], A
    if isinstance(field, PrimeField):
        A = np.mod(A, field.p)
        r, piv = _rref_mod_p(A, field.p)
        return int(r), [int(c) for c in piv], A
    r, piv = _rref_generic(A, field)
    return r, piv, A


def rank(M: np.ndarray, field: Field) -> int:
    return rref(M, field)[0]


def kernel_basis(M: np.ndarray, field: Field) -> np.ndarray:
    """Basis of the right kernel ``{v : M v = 0}``, one vector per row.

    Each basis vector carries a 1 in its own free (non-pivot) coordinate and
    zeros in the other free coordinates.
    """
    M = np.asarray(M)
    cols = M.shape[1]
    r, piv, R = rref(M, field)
    free = [c for c in range(cols) if c not in set(piv)]
    K = field.zeros((len(free), cols))
    if not free:
        return K
    free_idx = np.array(free)
    K[np.arange(len(free)), free_idx] = 1
    if r:
        # v[piv[i]] = -R[i, f]
        K[:, piv] = field.reduce(-R[:r, free_idx].T)
    return K


def left_kernel_basis(M: np.ndarray, field: Field) -> np.ndarray:
    """Basis of ``{w : w M = 0}``, one vector per row."""
    return kernel_basis(np.asarray(M).T, field)


def solve(M: np.ndarray, b, field: Field):
    """Some ``x`` with ``M x = b``, free coordinates set to zero; ``None`` if none exists."""
    M = np.asarray(M)
    b = np.asarray(b)
    if M.ndim != 2 or b.ndim != 1 or M.shape[0] != b.shape[0]:
        raise ValueError(f"dimension mismatch: matrix {M.shape} vs vector {b.shape}")
    rows, cols = M.shape
    aug = np.concatenate([np.asarray(M, dtype=field.dtype), b.reshape(-1, 1).astype(field.dtype)], axis=1)
    r, piv, R = rref(aug, field)
    if piv and piv[-1] == cols:
        return None
    x = field.zeros(cols)
    for i, c in enumerate(piv):
        x[c] = R[i, cols]
    return x


def matmul(A: np.ndarray, B: np.ndarray, field: Field) -> np.ndarray:
    A = np.asarray(A)
    B = np.asarray(B)
    if isinstance(field, PrimeField):
        inner = A.shape[-1] if A.ndim else 1
        p = field.p
        if inner * (p - 1) ** 2 < _FLOAT_EXACT:
            out = A.astype(np.float64) @ B.astype(np.float64)
            return np.mod(out, p).astype(np.int64)
        return np.mod(A.astype(np.int64) @ B.astype(np.int64), p)
    return A.dot(B)


def row_space(M: np.ndarray, field: Field) -> np.ndarray:
    """Canonical basis (the nonzero RREF rows) of the row space."""
    r, _, R = rref(M, field)
    return R[:r]


def in_row_space(v: np.ndarray, basis_rref: np.ndarray, pivots, field: Field) -> bool:
    """Membership test against a basis already in RREF with the given pivots."""
    return not np.any(reduce_by_rref(v, basis_rref, pivots, field))


def reduce_by_rref(v: np.ndarray, basis_rref: np.ndarray, pivots, field: Field) -> np.ndarray:
    """Reduce the rows of ``v`` modulo a row space given in RREF."""
    v = np.array(v, dtype=field.dtype, copy=True)
    if len(pivots) == 0:
        return v
    coeffs = v[..., list(pivots)]
    return field.reduce(v - matmul(coeffs, basis_rref[: len(pivots)], field))


def complement_indices(M: np.ndarray, sub: np.ndarray, field: Field) -> list[int]:
    """Indices of rows of ``M`` which, added greedily to ``sub``, extend it to span ``sub + rowspace(M)``.

    Rows are taken in order and kept when independent of ``sub`` and the
    rows already kept; the result is deterministic.
    """
    M = np.asarray(M)
    k = 0 if sub is None else len(sub)
    stacked = M if not k else np.concatenate([sub, M], axis=0)
    # pivot columns of the transpose pick out a maximal independent row set
    r, piv, _ = rref(np.asarray(stacked).T, field)
    base = rank(sub, field) if k else 0
    if base != k:
        # sub itself is dependent; fall back to greedy insertion
        kept = []
        current = np.asarray(sub)
        cur_rank = base
        for i in range(M.shape[0]):
            trial = np.concatenate([current, M[i : i + 1]], axis=0) if current.size else M[i : i + 1]
            tr = rank(trial, field)
            if tr > cur_rank:
                kept.append(i)
                current, cur_rank = trial, tr
        return kept
    return [c - k for c in piv if c >= k]


def nullity(M: np.ndarray, field: Field) -> int:
    return np.asarray(M).shape[1] - rank(M, field)


def is_zero(arr) -> bool:
    return not np.any(np.asarray(arr) != 0)
