"""Mechanized verification of the contraction-rate proof certificates.

Each of the three per-iteration contraction theorems (squared distance,
squared residual gradient norm, function-value gap) is proved by one weighted
sum of interpolation inequalities: nonnegative multipliers on the standard
inequalities characterizing smooth strongly convex functions and convex
functions, which after substituting

    x_{k+1} = x_k - gamma (g_k + s_{k+1})        (prox optimality)
    s_*     = -g_*                               (optimality of x_*)

equals the claimed bound minus an explicit nonnegative sum of squares. This
module expands those weighted sums symbolically, with exact rational
coefficients over the Gram basis

    X = x_k - x_*,  g_k,  g_{k+1},  g_*,  s_k,  s_{k+1}

plus the affine function-value symbols f_k, f_{k+1}, f_*, h_k, h_{k+1}, h_*,
and checks that the residual is identically zero and that every multiplier
and sum-of-squares coefficient has the right sign. No floating point is used
anywhere on this path.

Two scalar modes share all the code:

* exact rationals (`fractions.Fraction`): verifies one (mu, L, gamma) point;
* univariate rational functions in the step size (`gamma_symbol()`): verifies
  the identity for every step size at once at fixed rational (mu, L). Sign
  conditions depend on the step-size regime and are then checked by exact
  evaluation at sample points inside the regime interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

__all__ = [
    "Poly",
    "RatFunc",
    "gamma_symbol",
    "VecExpr",
    "SymbolicExpr",
    "inner",
    "norm_sq",
    "fval",
    "interp_smooth",
    "interp_convex",
    "Regime",
    "Multiplier",
    "SosTerm",
    "CertificateReport",
    "verify_distance",
    "verify_residual",
    "verify_funcvalue",
    "alpha_small",
    "beta_small",
    "alpha_large",
    "beta_large",
    "default_grid",
    "numeric_spot_check",
    "SpotCheckResult",
]

BASIS = ("x", "gk", "gk1", "gs", "sk", "sk1")
FUNC_SYMBOLS = ("const", "fk", "fk1", "fs", "hk", "hk1", "hs")
LABELS = ("k", "k+1", "*")


# --------------------------------------------------------------------------
# univariate polynomials and rational functions over the rationals
# --------------------------------------------------------------------------


class Poly:
    """Univariate polynomial with Fraction coefficients, lowest degree first."""

    __slots__ = ("c",)

    def __init__(self, coeffs=()):
        c = [Fraction(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)

    @classmethod
    def const(cls, v) -> "Poly":
        return cls((Fraction(v),))

    @property
    def degree(self) -> int:
        return len(self.c) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.c

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.c), len(other.c))
        return Poly(
            [
                (self.c[i] if i < len(self.c) else 0)
                + (other.c[i] if i < len(other.c) else 0)
                for i in range(n)
            ]
        )

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __neg__(self) -> "Poly":
        return Poly([-v for v in self.c])

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            for j, b in enumerate(other.c):
                out[i + j] += a * b
        return Poly(out)

    def scale(self, v) -> "Poly":
        return Poly([a * Fraction(v) for a in self.c])

    def __eq__(self, other) -> bool:
        return isinstance(other, Poly) and self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.c)
        quo = [Fraction(0)] * max(len(rem) - len(other.c) + 1, 0)
        d = len(other.c) - 1
        lead = other.c[-1]
        while len(rem) - 1 >= d and any(v != 0 for v in rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < d:
                break
            k = len(rem) - 1 - d
            q = rem[-1] / lead
            quo[k] = q
            for i, b in enumerate(other.c):
                rem[k + i] -= q * b
            rem.pop()
        return Poly(quo), Poly(rem)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(1 / self.c[-1])

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a.divmod(b)[1]
        return a.monic() if not a.is_zero() else Poly()

    def eval(self, v) -> Fraction:
        out = Fraction(0)
        for a in reversed(self.c):
            out = out * Fraction(v) + a
        return out

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            parts.append(f"{a}" if i == 0 else (f"{a}*t^{i}" if i > 1 else f"{a}*t"))
        return " + ".join(parts)


class RatFunc:
    """Ratio of two `Poly`, normalized: reduced by their gcd, monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        den = Poly.const(1) if den is None else den
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = Poly(), Poly.const(1)
        else:
            g = num.gcd(den)
            if g.degree > 0:
                num = num.divmod(g)[0]
                den = den.divmod(g)[0]
            lead = den.c[-1]
            num = num.scale(1 / lead)
            den = den.scale(1 / lead)
        self.num, self.den = num, den

    @staticmethod
    def _lift(v) -> "RatFunc":
        if isinstance(v, RatFunc):
            return v
        return RatFunc(Poly.const(Fraction(v)))

    def __add__(self, other):
        o = self._lift(other)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return RatFunc(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other):
        return self._lift(other) - self

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __mul__(self, other):
        o = self._lift(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, n: int):
        out = RatFunc(Poly.const(1))
        for _ in range(n):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        try:
            o = self._lift(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self == o

    def __hash__(self):
        return hash((self.num, self.den))

    def eval(self, v) -> Fraction:
        d = self.den.eval(v)
        if d == 0:
            raise ZeroDivisionError(f"pole of the rational function at {v}")
        return self.num.eval(v) / d

    def __repr__(self):
        if self.den == Poly.const(1):
            return repr(self.num)
        return f"({self.num!r}) / ({self.den!r})"


def gamma_symbol() -> RatFunc:
    """The step size as an indeterminate, enabling the all-step-sizes mode."""
    return RatFunc(Poly((0, 1)))


def _is_zero_scalar(v) -> bool:
    return v.is_zero() if isinstance(v, RatFunc) else v == 0


# --------------------------------------------------------------------------
# linear combinations of basis vectors and Gram-space expressions
# --------------------------------------------------------------------------


class VecExpr:
    """Linear combination of the basis vectors, exact scalar coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {}
        if coeffs:
            for name, v in coeffs.items():
                if name not in BASIS:
                    raise ValueError(f"unknown basis vector {name!r}")
                if not _is_zero_scalar(v):
                    self.coeffs[name] = v

    def __add__(self, other: "VecExpr") -> "VecExpr":
        out = dict(self.coeffs)
        for name, v in other.coeffs.items():
            out[name] = out.get(name, 0) + v
        return VecExpr(out)

    def __sub__(self, other: "VecExpr") -> "VecExpr":
        return self + (-other)

    def __neg__(self) -> "VecExpr":
        return VecExpr({n: -v for n, v in self.coeffs.items()})

    def scale(self, v) -> "VecExpr":
        return VecExpr({n: v * c for n, c in self.coeffs.items()})

    def __rmul__(self, v):
        return self.scale(v)

    def is_zero(self) -> bool:
        return not self.coeffs


class SymbolicExpr:
    """Affine part (function-value symbols and a constant) plus a Gram part.

    The Gram part maps unordered basis pairs to exact coefficients; both parts
    are kept pruned of zeros, so construction is canonicalization.
    """

    __slots__ = ("lin", "gram")

    def __init__(self, lin=None, gram=None):
        self.lin = {}
        if lin:
            for name, v in lin.items():
                if name not in FUNC_SYMBOLS:
                    raise ValueError(f"unknown function symbol {name!r}")
                if not _is_zero_scalar(v):
                    self.lin[name] = v
        self.gram = {}
        if gram:
            for key, v in gram.items():
                a, b = key
                key = (a, b) if a <= b else (b, a)
                if a not in BASIS or b not in BASIS:
                    raise ValueError(f"unknown basis pair {key!r}")
                if not _is_zero_scalar(v):
                    self.gram[key] = self.gram.get(key, 0) + v
                    if _is_zero_scalar(self.gram[key]):
                        del self.gram[key]

    def __add__(self, other: "SymbolicExpr") -> "SymbolicExpr":
        lin = dict(self.lin)
        for n, v in other.lin.items():
            lin[n] = lin.get(n, 0) + v
        gram = dict(self.gram)
        for k, v in other.gram.items():
            gram[k] = gram.get(k, 0) + v
        return SymbolicExpr(lin, gram)

    def __sub__(self, other: "SymbolicExpr") -> "SymbolicExpr":
        return self + (-other)

    def __neg__(self) -> "SymbolicExpr":
        return SymbolicExpr(
            {n: -v for n, v in self.lin.items()},
            {k: -v for k, v in self.gram.items()},
        )

    def scale(self, v) -> "SymbolicExpr":
        return SymbolicExpr(
            {n: v * c for n, c in self.lin.items()},
            {k: v * c for k, c in self.gram.items()},
        )

    def __rmul__(self, v):
        return self.scale(v)

    def is_zero(self) -> bool:
        return not self.lin and not self.gram

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymbolicExpr):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash((frozenset(self.lin), frozenset(self.gram)))

    def lin_coeff(self, name: str):
        return self.lin.get(name, Fraction(0))

    def gram_coeff(self, a: str, b: str):
        key = (a, b) if a <= b else (b, a)
        return self.gram.get(key, Fraction(0))

    def __repr__(self):
        terms = [f"{v}*{n}" for n, v in sorted(self.lin.items())]
        terms += [f"{v}*<{a},{b}>" for (a, b), v in sorted(self.gram.items())]
        return " + ".join(terms) if terms else "0"


def inner(u: VecExpr, v: VecExpr) -> SymbolicExpr:
    gram: dict[tuple[str, str], object] = {}
    for a, ca in u.coeffs.items():
        for b, cb in v.coeffs.items():
            key = (a, b) if a <= b else (b, a)
            gram[key] = gram.get(key, 0) + ca * cb
    return SymbolicExpr(gram=gram)


def norm_sq(v: VecExpr) -> SymbolicExpr:
    return inner(v, v)


def fval(name: str, coeff=1) -> SymbolicExpr:
    return SymbolicExpr(lin={name: Fraction(coeff) if not isinstance(coeff, RatFunc) else coeff})


# --------------------------------------------------------------------------
# interpolation inequalities in the canonical basis
# --------------------------------------------------------------------------


def _points(gamma):
    """Vectors and value symbols per point label, substitutions applied."""
    X = VecExpr({"x": 1})
    GK, GK1, GS = VecExpr({"gk": 1}), VecExpr({"gk1": 1}), VecExpr({"gs": 1})
    SK, SK1 = VecExpr({"sk": 1}), VecExpr({"sk1": 1})
    x = {"k": X, "k+1": X - (GK + SK1).scale(gamma), "*": VecExpr()}
    g = {"k": GK, "k+1": GK1, "*": GS}
    s = {"k": SK, "k+1": SK1, "*": -GS}
    fsym = {"k": "fk", "k+1": "fk1", "*": "fs"}
    hsym = {"k": "hk", "k+1": "hk1", "*": "hs"}
    return x, g, s, fsym, hsym


def _check_label(label: str) -> None:
    if label not in LABELS:
        raise ValueError(f"point label must be one of {LABELS}, got {label!r}")


def interp_smooth(i: str, j: str, mu, L, gamma) -> SymbolicExpr:
    """The smooth strongly convex interpolation inequality between points i and j.

    Returns the expression

        f_i - f_j - <g_j, x_i - x_j> - ||g_i - g_j||^2 / (2L)
            - mu / (2 (1 - mu/L)) ||x_i - x_j - (g_i - g_j)/L||^2

    which is nonnegative for every f in F_{mu,L}. Requires mu < L.
    """
    _check_label(i)
    _check_label(j)
    mu, L = Fraction(mu), Fraction(L)
    if not 0 <= mu < L:
        raise ValueError("interp_smooth requires 0 <= mu < L")
    x, g, _, fsym, _ = _points(gamma)
    dx = x[i] - x[j]
    dg = g[i] - g[j]
    coeff = mu / (2 * (1 - mu / L))
    return (
        fval(fsym[i])
        - fval(fsym[j])
        - inner(g[j], dx)
        - norm_sq(dg).scale(Fraction(1, 2) / L)
        - norm_sq(dx - dg.scale(Fraction(1) / L)).scale(coeff)
    )


def interp_convex(i: str, j: str, gamma) -> SymbolicExpr:
    """The convex (subgradient) inequality h_i - h_j - <s_j, x_i - x_j> >= 0."""
    _check_label(i)
    _check_label(j)
    x, _, s, _, hsym = _points(gamma)
    return fval(hsym[i]) - fval(hsym[j]) - inner(s[j], x[i] - x[j])


# --------------------------------------------------------------------------
# the three certificates
# --------------------------------------------------------------------------


class Regime(Enum):
    SMALL_STEP = "small_step"  # gamma <= 2/(L+mu), contraction factor 1 - gamma*mu
    LARGE_STEP = "large_step"  # gamma >= 2/(L+mu), contraction factor gamma*L - 1


@dataclass(frozen=True)
class Multiplier:
    name: str
    value: object
    nonneg: bool


@dataclass(frozen=True)
class SosTerm:
    name: str
    coefficient: object
    nonneg: bool
    combination: dict


@dataclass
class CertificateReport:
    theorem: str
    regime: Regime
    mu: Fraction
    L: Fraction
    gamma: object  # Fraction, or RatFunc in the all-step-sizes mode
    multipliers: list[Multiplier]
    sos_terms: list[SosTerm]
    residual_zero: bool
    residual: SymbolicExpr

    @property
    def verified(self) -> bool:
        return (
            self.residual_zero
            and all(m.nonneg for m in self.multipliers)
            and all(t.nonneg for t in self.sos_terms)
        )

    @property
    def symbolic_gamma(self) -> bool:
        return isinstance(self.gamma, RatFunc)

    def to_json_dict(self) -> dict:
        def s(v):
            return repr(v) if isinstance(v, RatFunc) else str(v)

        return {
            "theorem": self.theorem,
            "regime": self.regime.value,
            "mu": str(self.mu),
            "L": str(self.L),
            "gamma": "symbolic" if self.symbolic_gamma else str(self.gamma),
            "verified": self.verified,
            "residual_zero": self.residual_zero,
            "multipliers": [
                {"name": m.name, "value": s(m.value), "nonneg": m.nonneg}
                for m in self.multipliers
            ],
            "sos_terms": [
                {
                    "name": t.name,
                    "coefficient": s(t.coefficient),
                    "nonneg": t.nonneg,
                    "combination": {k: s(v) for k, v in t.combination.items()},
                }
                for t in self.sos_terms
            ],
            "residual": {} if self.residual_zero else {
                "lin": {k: s(v) for k, v in self.residual.lin.items()},
                "gram": {f"{a},{b}": s(v) for (a, b), v in self.residual.gram.items()},
            },
        }


def _coerce(mu, L, gamma):
    mu, L = Fraction(mu), Fraction(L)
    if not 0 <= mu < L:
        raise ValueError("certificates require exact rationals with 0 <= mu < L")
    if not isinstance(gamma, RatFunc):
        gamma = Fraction(gamma)
    return mu, L, gamma


def _sign_samples(regime: Regime, mu: Fraction, L: Fraction) -> list[Fraction]:
    g_star = 2 / (L + mu)
    if regime is Regime.SMALL_STEP:
        return [g_star / 1000, g_star / 2, g_star]
    return [g_star, (g_star + 2 / L) / 2, 2 / L]


def _nonneg(value, regime: Regime, mu: Fraction, L: Fraction) -> bool:
    if isinstance(value, RatFunc):
        return all(value.eval(t) >= 0 for t in _sign_samples(regime, mu, L))
    return value >= 0


def _apply_mutation(name, value, mutate):
    if mutate is not None and mutate[0] == name:
        return value + Fraction(mutate[1])
    return value


def _assemble(
    theorem: str,
    regime: Regime,
    mu,
    L,
    gamma,
    weighted: list[tuple[str, object, SymbolicExpr]],
    target: SymbolicExpr,
    sos: list[tuple[str, object, VecExpr]],
    mutate,
) -> CertificateReport:
    multipliers = []
    total = SymbolicExpr()
    for name, lam, ineq in weighted:
        lam = _apply_mutation(name, lam, mutate)
        multipliers.append(Multiplier(name, lam, _nonneg(lam, regime, mu, L)))
        total = total + ineq.scale(lam)
    residual = total - target
    sos_terms = []
    for name, coeff, comb in sos:
        coeff = _apply_mutation(name, coeff, mutate)
        sos_terms.append(SosTerm(name, coeff, _nonneg(coeff, regime, mu, L), dict(comb.coeffs)))
        residual = residual + norm_sq(comb).scale(coeff)
    return CertificateReport(
        theorem, regime, mu, L, gamma, multipliers, sos_terms, residual.is_zero(), residual
    )


def _rho(regime: Regime, mu, L, gamma):
    return 1 - gamma * mu if regime is Regime.SMALL_STEP else gamma * L - 1


def verify_distance(mu, L, gamma, regime: Regime, _mutate=None) -> CertificateReport:
    """Certificate for ||x_{k+1} - x_*||^2 <= rho^2 ||x_k - x_*||^2.

    Multipliers 2*gamma*rho on the smooth inequalities between x_k and x_*
    (both orders) and 2*gamma on the convex inequalities between x_{k+1} and
    x_*; the weighted sum equals the bound minus gamma^2 ||g_* + s_{k+1}||^2
    minus the regime's squared-norm term.
    """
    mu, L, gamma = _coerce(mu, L, gamma)
    rho = _rho(regime, mu, L, gamma)
    lam_f = 2 * gamma * rho
    lam_h = 2 * gamma
    weighted = [
        ("lambda0", lam_f, interp_smooth("*", "k", mu, L, gamma)),
        ("lambda1", lam_f, interp_smooth("k", "*", mu, L, gamma)),
        ("lambda2", lam_h, interp_convex("*", "k+1", gamma)),
        ("lambda3", lam_h, interp_convex("k+1", "*", gamma)),
    ]
    x, _, _, _, _ = _points(gamma)
    target = norm_sq(x["k"]).scale(rho * rho) - norm_sq(x["k+1"])
    if regime is Regime.SMALL_STEP:
        reg = ("regime", gamma * (2 - gamma * (L + mu)) / (L - mu), VecExpr({"x": mu, "gk": -1, "gs": 1}))
    else:
        reg = ("regime", gamma * (gamma * (L + mu) - 2) / (L - mu), VecExpr({"x": L, "gk": -1, "gs": 1}))
    sos = [("prox_residual", gamma * gamma, VecExpr({"gs": 1, "sk1": 1})), reg]
    return _assemble("distance", regime, mu, L, gamma, weighted, target, sos, _mutate)


def verify_residual(mu, L, gamma, regime: Regime, _mutate=None) -> CertificateReport:
    """Certificate for ||g_{k+1} + s_{k+1}||^2 <= rho^2 ||g_k + s_k||^2.

    Uses only the inequalities between the consecutive iterates, with
    multipliers 2*rho/gamma (smooth pair) and 2*rho^2/gamma (convex pair).
    """
    mu, L, gamma = _coerce(mu, L, gamma)
    rho = _rho(regime, mu, L, gamma)
    lam_f = 2 * rho / gamma
    lam_h = 2 * rho * rho / gamma
    weighted = [
        ("lambda0", lam_f, interp_smooth("k", "k+1", mu, L, gamma)),
        ("lambda1", lam_f, interp_smooth("k+1", "k", mu, L, gamma)),
        ("lambda2", lam_h, interp_convex("k", "k+1", gamma)),
        ("lambda3", lam_h, interp_convex("k+1", "k", gamma)),
    ]
    gk_sk = VecExpr({"gk": 1, "sk": 1})
    gk1_sk1 = VecExpr({"gk1": 1, "sk1": 1})
    target = norm_sq(gk_sk).scale(rho * rho) - norm_sq(gk1_sk1)
    if regime is Regime.SMALL_STEP:
        reg = (
            "regime",
            (2 - gamma * (L + mu)) / (gamma * (L - mu)),
            VecExpr({"gk": 1 - mu * gamma, "gk1": -1, "sk1": -mu * gamma}),
        )
    else:
        reg = (
            "regime",
            (gamma * (L + mu) - 2) / (gamma * (L - mu)),
            VecExpr({"gk": 1 - L * gamma, "gk1": -1, "sk1": -L * gamma}),
        )
    sos = [("subgrad_change", rho * rho, VecExpr({"sk": 1, "sk1": -1})), reg]
    return _assemble("residual", regime, mu, L, gamma, weighted, target, sos, _mutate)


def alpha_small(mu, L, gamma):
    """Scaling polynomial of the small-step function-value certificate.

    Concave quadratic in the step size, positive on [0, 2/(L+mu)]:
    alpha(0) = 4(L - mu) and alpha(2/(L+mu)) = 4 L^2 (L-mu)/(L+mu)^2.
    """
    return -(gamma**2 * L**2 * mu + 2 * L * (gamma * mu - 2) + mu * (gamma * mu - 2) ** 2)


def beta_small(mu, L, gamma):
    return 2 - gamma * (L + mu)


def alpha_large(mu, L, gamma):
    """Scaling polynomial of the large-step function-value certificate.

    Increasing linear in the step size, nonnegative from 2/(L+mu) on:
    alpha(2/(L+mu)) = 2 mu^2 (L-mu)/(L+mu).
    """
    return -2 * L**2 - 2 * mu**2 + 2 * L * mu + gamma * L**3 + gamma * L * mu**2


def beta_large(mu, L, gamma):
    return gamma * (L + mu) - 2


def verify_funcvalue(mu, L, gamma, regime: Regime, _mutate=None) -> CertificateReport:
    """Certificate for F(x_{k+1}) - F_* <= rho^2 (F(x_k) - F_*).

    Five inequalities with multipliers rho, (1-rho)rho, 1-rho, rho^2, 1-rho^2
    and three squared-norm terms whose coefficients carry the regime scaling
    polynomials alpha and beta. Requires mu > 0: the stored combinations
    divide by mu.
    """
    mu, L, gamma = _coerce(mu, L, gamma)
    if mu == 0:
        raise ValueError("function-value certificate requires mu > 0")
    rho = _rho(regime, mu, L, gamma)
    one = Fraction(1)
    weighted = [
        ("lambda0", rho, interp_smooth("k", "k+1", mu, L, gamma)),
        ("lambda1", (1 - rho) * rho, interp_smooth("*", "k", mu, L, gamma)),
        ("lambda2", 1 - rho, interp_smooth("*", "k+1", mu, L, gamma)),
        ("lambda3", rho * rho, interp_convex("k", "k+1", gamma)),
        ("lambda4", 1 - rho * rho, interp_convex("*", "k+1", gamma)),
    ]
    target = (
        (fval("fk") + fval("hk")).scale(rho * rho)
        - (fval("fk1") + fval("hk1"))
        + (fval("fs") + fval("hs")).scale(1 - rho * rho)
    )
    if regime is Regime.SMALL_STEP:
        al = alpha_small(mu, L, gamma)
        be = beta_small(mu, L, gamma)
        if _is_zero_scalar(al):
            raise ValueError("degenerate step size: the alpha scaling vanishes")
        sos = [
            (
                "grad_combination",
                (2 - gamma * mu) * be / (2 * al),
                VecExpr({"gk": 1 - gamma * mu, "gk1": -1, "gs": mu * gamma}),
            ),
            (
                "point_combination",
                gamma * L * mu**2 * (2 - gamma * mu) / (2 * (L - mu)),
                VecExpr(
                    {
                        "x": one,
                        "sk1": -(2 * L - 2 * mu + gamma * mu**2) / (L * mu * (2 - gamma * mu)),
                        "gk": -1 / (mu * (2 - gamma * mu)),
                        "gk1": -1 / (mu * (2 - gamma * mu)),
                        "gs": 1 / L,
                    }
                ),
            ),
            (
                "subgrad_combination",
                gamma * mu * al / (2 * L * (L - mu) * (2 - gamma * mu)),
                VecExpr(
                    {
                        "sk1": one,
                        "gk": (mu * gamma - 1) * L * be / al,
                        "gk1": L * be / al,
                        "gs": (L - mu) * (2 - gamma * mu) ** 2 / al,
                    }
                ),
            ),
        ]
    else:
        al = alpha_large(mu, L, gamma)
        be = beta_large(mu, L, gamma)
        if _is_zero_scalar(al):
            raise ValueError("degenerate step size: the alpha scaling vanishes")
        sos = [
            (
                "grad_combination",
                (2 - gamma * L) * be / (2 * gamma * al),
                VecExpr({"gk": 1 - gamma * L, "gk1": -1, "gs": gamma * L}),
            ),
            (
                "point_combination",
                gamma * L**2 * mu * (2 - gamma * L) / (2 * (L - mu)),
                VecExpr(
                    {
                        "x": one,
                        "sk1": -1 / mu,
                        "gk": (1 - gamma * L - gamma * mu) / (gamma * L * mu),
                        "gk1": -1 / (gamma * L * mu),
                        "gs": 1 / L,
                    }
                ),
            ),
            (
                "subgrad_combination",
                gamma * al / (2 * mu * (L - mu)),
                VecExpr(
                    {
                        "sk1": one,
                        "gk": (gamma * L - 1) * L * be / (gamma * al),
                        "gk1": L * be / (gamma * al),
                        "gs": (2 - gamma * L) * (L - mu) * mu / al,
                    }
                ),
            ),
        ]
    return _assemble("funcvalue", regime, mu, L, gamma, weighted, target, sos, _mutate)


VERIFIERS = {
    "distance": verify_distance,
    "residual": verify_residual,
    "funcvalue": verify_funcvalue,
}


def default_grid() -> list[tuple[Fraction, Fraction, Fraction, Regime]]:
    """Exact-rational verification grid covering both regimes and the boundary.

    mu in {L/10, L/2, 9L/10}, L in {1, 3, 10}, and per pair seven step sizes:
    1/1000, 1/L, the regime boundary 2/(L+mu) and both its 1/1000-shifts, and
    2/L with its 1/1000-shift. The boundary appears once per regime.
    """
    eps = Fraction(1, 1000)
    grid = []
    for L_int in (1, 3, 10):
        L = Fraction(L_int)
        for frac in (Fraction(1, 10), Fraction(1, 2), Fraction(9, 10)):
            mu = frac * L
            g_star = 2 / (L + mu)
            gammas = [eps, 1 / L, g_star - eps, g_star, g_star + eps, 2 / L - eps, 2 / L]
            for g in gammas:
                if g < g_star:
                    grid.append((mu, L, g, Regime.SMALL_STEP))
                elif g > g_star:
                    grid.append((mu, L, g, Regime.LARGE_STEP))
                else:
                    grid.append((mu, L, g, Regime.SMALL_STEP))
                    grid.append((mu, L, g, Regime.LARGE_STEP))
    return grid


# --------------------------------------------------------------------------
# floating-point spot evaluation (independent oracle for the exact engine)
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SpotCheckResult:
    max_abs: float
    min_value: float
    max_value: float


def evaluate_expr(expr: SymbolicExpr, vectors: dict, values: dict) -> float:
    """Evaluate an expression at concrete vectors and function values."""
    total = float(values.get("const", 1.0)) * float(expr.lin_coeff("const"))
    for name in FUNC_SYMBOLS[1:]:
        c = expr.lin_coeff(name)
        if not _is_zero_scalar(c):
            total += float(c) * float(values[name])
    for (a, b), c in expr.gram.items():
        total += float(c) * float(vectors[a] @ vectors[b])
    return total


def _random_assignment(rng):
    import numpy as np

    vectors = {name: rng.standard_normal(3) for name in BASIS}
    values = {name: float(rng.standard_normal()) for name in FUNC_SYMBOLS[1:]}
    values["const"] = 1.0
    return vectors, values


def _trace_assignment(rng, mu: float, L: float, gamma: float, seed: int):
    import numpy as np

    from .engine import pgm_step
    from .prox import L1Norm, NonnegIndicator, Zero
    from .rates import ClassParams
    from .smooth import CompositeProblem, random_instance

    params = ClassParams(mu, L)
    f = random_instance(params, 3, seed)
    h = [Zero(3), NonnegIndicator(3), L1Norm(0.7, 3)][int(rng.integers(3))]
    problem = CompositeProblem(f, h)
    x_star, _ = problem.optimum()
    x_k = rng.uniform(-1.5, 1.5, size=3)
    if isinstance(h, NonnegIndicator):
        x_k = np.abs(x_k)
    s_k = h.subgradient(x_k)
    x_k1, s_k1 = pgm_step(problem, gamma, x_k)
    vectors = {
        "x": x_k - x_star,
        "gk": f.grad(x_k),
        "gk1": f.grad(x_k1),
        "gs": f.grad(x_star),
        "sk": s_k,
        "sk1": s_k1,
    }
    values = {
        "const": 1.0,
        "fk": f.value(x_k),
        "fk1": f.value(x_k1),
        "fs": f.value(x_star),
        "hk": h.value(x_k),
        "hk1": h.value(x_k1),
        "hs": h.value(x_star),
    }
    return vectors, values


def numeric_spot_check(
    expr: SymbolicExpr,
    mu,
    L,
    gamma,
    trials: int = 20,
    seed: int = 0,
    assignment: str = "random",
) -> SpotCheckResult:
    """Evaluate expr at `trials` concrete assignments; floats, dimension 3.

    assignment="random" draws independent vectors and values, which suffices
    to expose any nonzero expression. assignment="trace" instead derives every
    symbol from an actual catalog problem and one prox-gradient step with the
    given step size, so true inequalities evaluate nonnegative as well.
    """
    import numpy as np

    if any(isinstance(c, RatFunc) for c in expr.lin.values()) or any(
        isinstance(c, RatFunc) for c in expr.gram.values()
    ):
        raise ValueError("spot checks need a concrete rational step size, not a symbol")
    rng = np.random.default_rng(seed)
    lo, hi, big = math.inf, -math.inf, 0.0
    for t in range(trials):
        if assignment == "random":
            vectors, values = _random_assignment(rng)
        elif assignment == "trace":
            vectors, values = _trace_assignment(rng, float(mu), float(L), float(gamma), seed + t)
        else:
            raise ValueError("assignment must be 'random' or 'trace'")
        v = evaluate_expr(expr, vectors, values)
        lo, hi, big = min(lo, v), max(hi, v), max(big, abs(v))
    return SpotCheckResult(big, lo, hi)
