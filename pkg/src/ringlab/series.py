"""Truncated power series, rational functions and the Poincare-series checkers."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import AlgebraError, LocalAlgebra, ideal_power, is_gorenstein, mu, quotient


class SeriesError(ValueError):
    pass


class TruncatedSeries:
    """c_0 + c_1 t + ... + c_N t^N, exact rationals, known only through degree N."""

    __slots__ = ("coeffs", "N")

    def __init__(self, coeffs, N: int | None = None):
        coeffs = [Fraction(c) for c in coeffs]
        if N is None:
            N = len(coeffs) - 1
        coeffs = coeffs[: N + 1] + [Fraction(0)] * max(0, N + 1 - len(coeffs))
        self.coeffs = coeffs
        self.N = N

    @classmethod
    def one(cls, N):
        return cls([1], N)

    @classmethod
    def t(cls, N):
        return cls([0, 1], N)

    def _coerce(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, Polynomial):
            return TruncatedSeries(other.coeffs, self.N)
        return TruncatedSeries([other], self.N)

    def __add__(self, other):
        o = self._coerce(other)
        N = min(self.N, o.N)
        return TruncatedSeries([a + b for a, b in zip(self.coeffs[: N + 1], o.coeffs[: N + 1])], N)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-a for a in self.coeffs], self.N)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        N = min(self.N, o.N)
        out = [Fraction(0)] * (N + 1)
        for i, a in enumerate(self.coeffs[: N + 1]):
            if a:
                for j in range(N + 1 - i):
                    out[i + j] += a * o.coeffs[j]
        return TruncatedSeries(out, N)

    __rmul__ = __mul__

    def shift(self, k: int):
        """Multiply by t^k (k >= 0)."""
        return TruncatedSeries([0] * k + self.coeffs, self.N)

    def reciprocal(self):
        if self.coeffs[0] == 0:
            raise SeriesError("reciprocal of a series with zero constant term")
        inv = [Fraction(0)] * (self.N + 1)
        inv[0] = 1 / self.coeffs[0]
        for n in range(1, self.N + 1):
            s = sum(self.coeffs[k] * inv[n - k] for k in range(1, n + 1))
            inv[n] = -s * inv[0]
        return TruncatedSeries(inv, self.N)

    def __truediv__(self, other):
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.reciprocal()

    def __eq__(self, other):
        o = self._coerce(other)
        N = min(self.N, o.N)
        return self.coeffs[: N + 1] == o.coeffs[: N + 1]

    def differences(self, other) -> list[tuple[int, Fraction, Fraction]]:
        o = self._coerce(other)
        N = min(self.N, o.N)
        return [(i, a, b) for i, (a, b) in enumerate(zip(self.coeffs[: N + 1], o.coeffs[: N + 1])) if a != b]

    def truncate(self, N):
        return TruncatedSeries(self.coeffs, min(N, self.N))

    def as_ints(self) -> list[int]:
        if any(c.denominator != 1 for c in self.coeffs):
            raise SeriesError("series has non-integer coefficients")
        return [int(c) for c in self.coeffs]

    def __repr__(self):
        return f"TruncatedSeries({[str(c) for c in self.coeffs]}, N={self.N})"


@dataclass(frozen=True)
class Polynomial:
    """Integer (or rational) polynomial, coefficients from degree 0 upward."""

    coeffs: tuple

    def __init__(self, coeffs):
        c = [Fraction(x) for x in coeffs]
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c) if c else (Fraction(0),))

    @property
    def degree(self) -> int:
        return -1 if self.coeffs == (0,) else len(self.coeffs) - 1

    def __add__(self, other):
        o = _poly(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(o.coeffs) + [0] * (n - len(o.coeffs))
        return Polynomial([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-_poly(other))

    def __rsub__(self, other):
        return _poly(other) - self

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return other * self
        o = _poly(other)
        out = [Fraction(0)] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(o.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Polynomial([1])
        for _ in range(k):
            out = out * self
        return out

    def divmod(self, other):
        """Euclidean division over the rationals."""
        o = _poly(other)
        if o.degree < 0:
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        q = [Fraction(0)] * max(1, len(r) - len(o.coeffs) + 1)
        lead = o.coeffs[-1]
        for k in range(len(r) - len(o.coeffs), -1, -1):
            c = r[k + len(o.coeffs) - 1] / lead
            q[k] = c
            for j, b in enumerate(o.coeffs):
                r[k + j] -= c * b
        return Polynomial(q), Polynomial(r[: max(1, len(o.coeffs) - 1)])

    def divides(self, other) -> bool:
        """True when self divides other with an integer quotient."""
        q, r = _poly(other).divmod(self)
        return r.degree < 0 and all(c.denominator == 1 for c in q.coeffs)

    def series(self, N):
        return TruncatedSeries(self.coeffs, N)

    def as_ints(self):
        return [int(c) if c.denominator == 1 else c for c in self.coeffs]

    def __str__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if mono and abs(c) == 1:
                coef = "-" if c < 0 else "+"
                terms.append(f"{coef} {mono}")
            else:
                terms.append(f"{'-' if c < 0 else '+'} {abs(c)}{('*' + mono) if mono else ''}")
        if not terms:
            return "0"
        s = " ".join(terms)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]


def _poly(x) -> Polynomial:
    return x if isinstance(x, Polynomial) else Polynomial([x])


T = Polynomial([0, 1])


@dataclass(frozen=True)
class RationalFn:
    """numerator / denominator with the denominator's constant term normalized to 1."""

    numerator: Polynomial
    denominator: Polynomial

    def __post_init__(self):
        c = self.denominator.coeffs[0]
        if c == 0:
            raise SeriesError("denominator must have a nonzero constant term")
        if c != 1:
            object.__setattr__(self, "numerator", Polynomial([x / c for x in self.numerator.coeffs]))
            object.__setattr__(self, "denominator", Polynomial([x / c for x in self.denominator.coeffs]))

    def expand(self, N: int) -> TruncatedSeries:
        return self.numerator.series(N) / self.denominator.series(N)

    def __str__(self):
        return f"({self.numerator}) / ({self.denominator})"


# ---------------------------------------------------------------------------
# deviations


def deviations(P: TruncatedSeries, N: int | None = None) -> list[int]:
    """e_1..e_N with P = prod_{i odd} (1+t^i)^{e_i} / prod_{i even} (1-t^i)^{e_i} through degree N."""
    N = P.N if N is None else min(N, P.N)
    if P.coeffs[0] != 1:
        raise SeriesError("a Poincare series has constant term 1")
    rest = P.truncate(N)
    out = []
    for i in range(1, N + 1):
        e = rest.coeffs[i]
        if e.denominator != 1 or e < 0:
            raise SeriesError(f"series is not a Poincare series of a local ring to this degree (e_{i} = {e})")
        e = int(e)
        out.append(e)
        if e:
            if i % 2:
                rest = rest / (Polynomial([1] + [0] * (i - 1) + [1]) ** e).series(N)
            else:
                rest = rest * (Polynomial([1] + [0] * (i - 1) + [-1]) ** e).series(N)
    return out


def product_formula(e: list[int], N: int) -> TruncatedSeries:
    out = TruncatedSeries.one(N)
    for i, ei in enumerate(e, start=1):
        if ei:
            f = Polynomial([1] + [0] * (i - 1) + [1 if i % 2 else -1]) ** ei
            out = out * f.series(N) if i % 2 else out / f.series(N)
    return out


# ---------------------------------------------------------------------------
# reports


@dataclass
class CheckReport:
    name: str
    passed: bool
    N: int
    details: dict = field(default_factory=dict)
    diffs: list = field(default_factory=list)  # (degree, lhs, rhs)

    def to_dict(self):
        return {
            "check": self.name,
            "passed": self.passed,
            "N": self.N,
            "details": _jsonable(self.details),
            "diffs": [[i, str(a), str(b)] for i, a, b in self.diffs],
        }


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, TruncatedSeries):
        return [str(c) if c.denominator != 1 else int(c) for c in x.coeffs]
    if isinstance(x, (Polynomial, RationalFn)):
        return str(x)
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    return x


def _series(betti, N):
    return TruncatedSeries(betti, N)


def _poincare(A, M=None, N=12, route="direct", **kw):
    from .resolution import betti_numbers

    res = betti_numbers(A, M, N, route=route, **kw)
    return TruncatedSeries(res.betti, N), res


# ---------------------------------------------------------------------------
# checkers


def check_dress(S: LocalAlgebra, T: LocalAlgebra, M=None, N: int = 10, route="direct") -> CheckReport:
    """Fibre-product identities for P_k and, given an S-module M, for P_M."""
    from .modules import Module
    from .products import fibre_product
    from .resolution import as_module

    fw = fibre_product(S, T)
    R = fw.T
    PS, _ = _poincare(S, None, N, route)
    PT, _ = _poincare(T, None, N, route)
    PR, _ = _poincare(R, None, N, route)
    rhs = 1 / PS + 1 / PT - 1
    lhs = 1 / PR
    diffs = lhs.differences(rhs)
    details = {"P_R": PR, "P_S": PS, "P_T": PT}
    if M is not None:
        MS = as_module(S, M)
        # the R-action factors through R -> S; T's generators act by zero
        import numpy as np

        acts = np.concatenate([MS.acts, S.field.zeros((len(T.gens), MS.dim, MS.dim))], axis=0)
        MR = Module(R, acts)
        PSM, _ = _poincare(S, MS, N, route)
        PRM, _ = _poincare(R, MR, N, route)
        mrhs = (PS / PSM) * rhs
        mdiffs = (1 / PRM).differences(mrhs)
        details.update({"P_R(M)": PRM, "P_S(M)": PSM, "module_clause": not mdiffs})
        diffs += [(f"M:{i}", a, b) for i, a, b in mdiffs]
    return CheckReport("dress", not diffs, N, details, diffs)


def check_levin_socle(R: LocalAlgebra, N: int = 12) -> CheckReport:
    """P^{R/soc}_k = P^R_k / (1 - t^2 P^R_k), both sides resolved directly."""
    from .resolution import socle_quotient

    if not is_gorenstein(R):
        raise AlgebraError("the socle identity needs a Gorenstein algebra")
    if R.edim < 2:
        raise AlgebraError("the socle identity needs embedding dimension >= 2")
    P, _ = _poincare(R, None, N, "direct")
    Pbar, _ = _poincare(socle_quotient(R), None, N, "direct")
    rhs = P / (1 - P.shift(2))
    diffs = Pbar.differences(rhs)
    return CheckReport("levin", not diffs, N, {"P_R": P, "P_R/soc": Pbar}, diffs)


def golod_bound(A: LocalAlgebra, N: int) -> TruncatedSeries:
    from .resolution import koszul_homology

    kappa = Polynomial(koszul_homology(A).ranks)
    n = A.edim
    return (Polynomial([1, 1]) ** n).series(N) / (1 - T * (kappa - 1)).series(N)


def golod_certificate(A: LocalAlgebra, N: int = 12, route="auto") -> CheckReport:
    """Compare P^A_k with the Golod bound; equality through N is evidence only."""
    from .engine import ResourceLimit

    bound = golod_bound(A, N)
    try:
        P, res = _poincare(A, None, N, route)
    except ResourceLimit as exc:
        return CheckReport("golod", False, N, {"verdict": "inconclusive", "reason": str(exc)})
    diffs = P.differences(bound)
    if not diffs:
        verdict = "numerically-golod"
    elif diffs[0][1] < diffs[0][2]:
        verdict = "not-golod"
    else:
        # the bound is an upper bound; exceeding it signals an error upstream
        verdict = "inconclusive"
    details = {"verdict": verdict, "P": P, "bound": bound, "note": "equality through N is truncation-level evidence"}
    return CheckReport("golod", verdict == "numerically-golod", N, details, diffs)


def backelin_roos_denominator(A: LocalAlgebra) -> Polynomial:
    """d(t) = 1 - t(kappa(t) - 1) + t^{n+1}(1 + t) with kappa the Koszul homology ranks."""
    from .resolution import koszul_homology

    if not is_gorenstein(A):
        raise AlgebraError("the denominator formula needs a Gorenstein algebra")
    n = A.edim
    if n < 2:
        raise AlgebraError("the denominator formula needs embedding dimension >= 2")
    kappa = Polynomial(koszul_homology(A).ranks)
    return 1 - T * (kappa - 1) + (T ** (n + 1)) * Polynomial([1, 1])


def check_denominator(A: LocalAlgebra, M, d: Polynomial, N: int = 12, window_start: int | None = None, route="auto", P=None) -> CheckReport:
    """Coefficients of d(t) P^A_M(t) vanish on [window_start, N].

    The default window start deg(d) + dim A is a heuristic: no bound on the
    numerator degree is available for general modules.
    """
    if P is None:
        P, _ = _poincare(A, M, N, route)
    if window_start is None:
        window_start = d.degree + A.dim
    prod = d.series(N) * P
    bad = [(i, prod.coeffs[i], Fraction(0)) for i in range(window_start, N + 1) if prod.coeffs[i] != 0]
    last = max((i for i, c in enumerate(prod.coeffs) if c != 0), default=-1)
    details = {
        "denominator": d,
        "product": prod,
        "window": [window_start, N],
        "window_empty": window_start > N,
        "polynomial_part": Polynomial(prod.coeffs[: min(window_start, N + 1)]),
        "observed_vanishing_from": last + 1,
    }
    return CheckReport("denominator", not bad, N, details, bad)


@dataclass
class PoincarePrediction:
    label: str
    formula: RationalFn
    computed: TruncatedSeries | None = None
    verified: bool | None = None
    route: str | None = None
    diffs: list = field(default_factory=list)


def stretched_prediction(A: LocalAlgebra) -> tuple[str, RationalFn]:
    n = A.edim
    one = Polynomial([1])
    if n == 0:
        raise AlgebraError("no closed-form prediction for the field itself")
    m2 = mu(ideal_power(A, 2))
    if is_gorenstein(A) and m2 <= 2:
        if n == 1:
            return "gorenstein-edim-1", RationalFn(one, Polynomial([1, -1]))
        return "gorenstein-mu(m^2)<=2", RationalFn(one, Polynomial([1, -n, 1]))
    if m2 <= 1:
        r = A.socle.dim
        if r == n:
            return "stretched-type-n", RationalFn(one, Polynomial([1, -n]))
        return "stretched", RationalFn(one, Polynomial([1, -n, 1]))
    raise AlgebraError("no closed-form prediction for this algebra")


def stretched_poincare(A: LocalAlgebra, N: int = 12, parent: LocalAlgebra | None = None, power: int | None = None, route="auto", verify=True) -> PoincarePrediction:
    """Closed form for P^A_k from the covered classes, checked against the computed series.

    Pass ``parent`` and ``power`` when A is the truncation parent/m^power of a
    Gorenstein algebra with mu(m^2) <= 2.
    """
    if parent is not None:
        if not (is_gorenstein(parent) and mu(ideal_power(parent, 2)) <= 2):
            raise AlgebraError("no closed-form prediction: parent is not Gorenstein with mu(m^2) <= 2")
        if power is None or not 2 <= power <= parent.loewy_length:
            raise AlgebraError("truncation power must satisfy 2 <= i <= Loewy length")
        B = quotient(parent, ideal_power(parent, power))
        if B.dim != A.dim:
            raise AlgebraError("algebra is not the stated truncation of its parent")
        label, formula = "gorenstein-truncation", RationalFn(Polynomial([1]), Polynomial([1, -parent.edim]))
    else:
        label, formula = stretched_prediction(A)
    pred = PoincarePrediction(label, formula)
    if verify:
        P, res = _poincare(A, None, N, route)
        pred.computed = P
        pred.route = res.route
        pred.diffs = P.differences(formula.expand(N))
        pred.verified = not pred.diffs
    return pred


def derive_connected_sum_poincare(P_R: TruncatedSeries, P_S: TruncatedSeries) -> TruncatedSeries:
    """P_k of R # S from P_k of R and S (both Gorenstein of embedding dimension >= 2)."""
    for P in (P_R, P_S):
        if P.N >= 1 and P.coeffs[1] < 2:
            raise SeriesError("constituents must have embedding dimension >= 2")
    bars = [P / (1 - P.shift(2)) for P in (P_R, P_S)]
    Pbar = 1 / (1 / bars[0] + 1 / bars[1] - 1)
    return Pbar / (1 + Pbar.shift(2))


def check_deviation_divisibility(A: LocalAlgebra, d: Polynomial, level: int, N: int = 12, P=None, window_start=None) -> CheckReport:
    """d(t) P^A_k(t) is a polynomial dividing prod_{odd j <= level} (1 + t^j)^{e_j}."""
    if P is None:
        P, _ = _poincare(A, None, N, "auto")
    den = check_denominator(A, None, d, N, window_start, P=P)
    if not den.passed:
        return CheckReport("divisibility", False, N, {"reason": "d*P is not polynomial through N", **den.details}, den.diffs)
    poly = den.details["polynomial_part"]
    e = deviations(P, N)
    target = Polynomial([1])
    for j in range(1, level + 1, 2):
        target = target * Polynomial([1] + [0] * (j - 1) + [1]) ** e[j - 1]
    ok = poly.divides(target)
    details = {"d*P": poly, "deviation_formula_values": e, "product": target, "divides": ok}
    return CheckReport("divisibility", ok, N, details)
