"""Smooth strongly convex quadratic oracles and composite problems.

The smooth catalog is quadratic on purpose: every worst-case instance of the
proximal gradient method in this library is quadratic (or quadratic plus a
simple nonsmooth term), and quadratics keep gradients, optima and attained
rates exact to machine precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .prox import (
    BoxIndicator,
    L1Norm,
    LinearPlusNonnegIndicator,
    NonnegIndicator,
    ProxFunction,
    Zero,
)
from .rates import ClassParams

__all__ = [
    "SmoothFunction",
    "ScaledSqNorm",
    "DiagonalQuadratic",
    "DenseQuadratic",
    "CompositeProblem",
    "random_instance",
    "random_composite",
    "check_interpolation",
    "relaxed_distance_condition",
]

_SPECTRUM_TOL = 1e-9


class SmoothFunction:
    """Base for quadratic members of F_{mu,L}: value, gradient, Hessian product."""

    params: ClassParams
    dim: int

    def value(self, x) -> float:
        raise NotImplementedError

    def grad(self, x) -> np.ndarray:
        raise NotImplementedError

    def value_grad(self, x) -> tuple[float, np.ndarray]:
        return self.value(x), self.grad(x)

    def hess_vec(self, v) -> np.ndarray:
        """Product of the (constant) Hessian with v."""
        raise NotImplementedError

    def _check_point(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ValueError(f"expected point of shape ({self.dim},), got {x.shape}")
        return x


class ScaledSqNorm(SmoothFunction):
    """f(x) = (a/2)||x||^2 with curvature a inside the declared class [mu, L]."""

    def __init__(self, a: float, dim: int, params: ClassParams | None = None):
        self.a = float(a)
        self.dim = int(dim)
        self.params = params if params is not None else ClassParams(self.a, self.a)
        if not (self.params.mu - _SPECTRUM_TOL <= self.a <= self.params.L + _SPECTRUM_TOL):
            raise ValueError("curvature must lie within the declared [mu, L]")

    def value(self, x) -> float:
        x = self._check_point(x)
        return 0.5 * self.a * float(x @ x)

    def grad(self, x) -> np.ndarray:
        return self.a * self._check_point(x)

    def hess_vec(self, v) -> np.ndarray:
        return self.a * self._check_point(v)


class DiagonalQuadratic(SmoothFunction):
    """f(x) = 0.5 * sum_i d_i x_i^2 + sum_i b_i x_i with d_i in [mu, L]."""

    def __init__(self, d, b=None, params: ClassParams | None = None):
        self.d = np.asarray(d, dtype=float)
        if self.d.ndim != 1 or self.d.size == 0:
            raise ValueError("d must be a nonempty 1-d array")
        self.dim = self.d.shape[0]
        self.b = np.zeros(self.dim) if b is None else np.asarray(b, dtype=float)
        if self.b.shape != (self.dim,):
            raise ValueError("b must match the dimension of d")
        if params is None:
            params = ClassParams(float(self.d.min()), float(max(self.d.max(), 1e-300)))
        self.params = params
        if np.any(self.d < params.mu - _SPECTRUM_TOL) or np.any(self.d > params.L + _SPECTRUM_TOL):
            raise ValueError("diagonal entries must lie within the declared [mu, L]")

    def value(self, x) -> float:
        x = self._check_point(x)
        return 0.5 * float(self.d @ (x * x)) + float(self.b @ x)

    def grad(self, x) -> np.ndarray:
        x = self._check_point(x)
        return self.d * x + self.b

    def hess_vec(self, v) -> np.ndarray:
        return self.d * self._check_point(v)


class DenseQuadratic(SmoothFunction):
    """f(x) = 0.5 x^T A x + b^T x for symmetric A with spectrum in [mu, L]."""

    def __init__(self, A, b=None, params: ClassParams | None = None):
        self.A = np.asarray(A, dtype=float)
        if self.A.ndim != 2 or self.A.shape[0] != self.A.shape[1]:
            raise ValueError("A must be a square matrix")
        if not np.allclose(self.A, self.A.T, atol=1e-12):
            raise ValueError("A must be symmetric")
        self.dim = self.A.shape[0]
        self.b = np.zeros(self.dim) if b is None else np.asarray(b, dtype=float)
        if self.b.shape != (self.dim,):
            raise ValueError("b must match the dimension of A")
        eigs = np.linalg.eigvalsh(self.A)
        if params is None:
            params = ClassParams(float(eigs.min()), float(max(eigs.max(), 1e-300)))
        self.params = params
        if eigs.min() < params.mu - _SPECTRUM_TOL or eigs.max() > params.L + _SPECTRUM_TOL:
            raise ValueError("spectrum must lie within the declared [mu, L]")

    def value(self, x) -> float:
        x = self._check_point(x)
        return 0.5 * float(x @ (self.A @ x)) + float(self.b @ x)

    def grad(self, x) -> np.ndarray:
        x = self._check_point(x)
        return self.A @ x + self.b

    def hess_vec(self, v) -> np.ndarray:
        return self.A @ self._check_point(v)


def random_instance(params: ClassParams, dim: int, seed: int) -> DiagonalQuadratic:
    """Random diagonal quadratic in F_{mu,L}, deterministic under seed.

    The spectrum always contains both endpoints mu and L so the declared class
    constants are attained. With dim = 1 and mu < L both endpoints cannot fit;
    the instance falls back to curvature mu and its effective smoothness is
    max(d) = mu rather than the declared L.
    """
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    if dim == 1:
        d = np.array([params.mu if params.mu > 0 else params.L])
    else:
        interior = rng.uniform(params.mu, params.L, size=dim - 2)
        d = np.concatenate([[params.mu], [params.L], interior])
        rng.shuffle(d)
    b = rng.uniform(-1.0, 1.0, size=dim)
    return DiagonalQuadratic(d, b, params)


@dataclass
class CompositeProblem:
    """A smooth quadratic oracle f plus a proximable nonsmooth term h."""

    f: SmoothFunction
    h: ProxFunction
    params: ClassParams = None
    known_optimum: tuple[np.ndarray, float] | None = None
    _solved: tuple[np.ndarray, float] | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.params is None:
            self.params = self.f.params
        if self.f.dim != self.h.dim:
            raise ValueError("f and h dimensions disagree")
        if self.known_optimum is not None:
            x_star, F_star = self.known_optimum
            self.known_optimum = (np.asarray(x_star, dtype=float), float(F_star))

    @property
    def dim(self) -> int:
        return self.f.dim

    def value(self, x) -> float:
        return self.f.value(x) + self.h.value(x)

    def optimum(self) -> tuple[np.ndarray, float]:
        """Minimizer and optimal value, solved in closed form for catalog members."""
        if self.known_optimum is not None:
            return self.known_optimum
        if self._solved is None:
            x_star = _solve_catalog_optimum(self.f, self.h)
            self._solved = (x_star, self.value(x_star))
        return self._solved

    def try_optimum(self) -> tuple[np.ndarray, float] | None:
        try:
            return self.optimum()
        except ValueError:
            return None

    def fixed_point_residual(self, gamma: float) -> float:
        """||x* - prox(h, gamma, x* - gamma grad f(x*))||, zero at a true optimum."""
        x_star, _ = self.optimum()
        step = self.h.prox(gamma, x_star - gamma * self.f.grad(x_star))
        return float(np.linalg.norm(step - x_star))


def _coordinate_optimum(d: float, b: float, h: ProxFunction, i: int) -> float:
    """Minimize 0.5*d*x^2 + b*x + (coordinate i of h)."""
    if isinstance(h, Zero):
        if d > 0:
            return -b / d
        if b == 0:
            return 0.0
        raise ValueError("unbounded below: zero curvature with a linear slope")
    if isinstance(h, NonnegIndicator):
        if d > 0:
            return max(0.0, -b / d)
        if b >= 0:
            return 0.0
        raise ValueError("unbounded below on the orthant")
    if isinstance(h, BoxIndicator):
        lo, hi = h.lo[i], h.hi[i]
        if d > 0:
            return float(np.clip(-b / d, lo, hi))
        target = lo if b > 0 else hi if b < 0 else lo
        if not math.isfinite(target):
            raise ValueError("unbounded below on the box")
        return float(target)
    if isinstance(h, L1Norm):
        w = h.weight
        if d > 0:
            return math.copysign(max(abs(b) - w, 0.0), -b) / d
        if abs(b) <= w:
            return 0.0
        raise ValueError("unbounded below with l1 term")
    if isinstance(h, LinearPlusNonnegIndicator):
        slope = b + h.c[i]
        if d > 0:
            return max(0.0, -slope / d)
        if slope >= 0:
            return 0.0
        raise ValueError("unbounded below on the orthant")
    raise ValueError(f"no closed-form optimum for h of type {type(h).__name__}")


def _solve_catalog_optimum(f: SmoothFunction, h: ProxFunction) -> np.ndarray:
    if isinstance(f, DenseQuadratic):
        if isinstance(h, Zero):
            return np.linalg.solve(f.A, -f.b)
        raise ValueError("dense quadratics admit a closed-form optimum only with h = 0")
    if isinstance(f, ScaledSqNorm):
        d = np.full(f.dim, f.a)
        b = np.zeros(f.dim)
    elif isinstance(f, DiagonalQuadratic):
        d, b = f.d, f.b
    else:
        raise ValueError(f"no closed-form optimum for f of type {type(f).__name__}")
    return np.array([_coordinate_optimum(d[i], b[i], h, i) for i in range(f.dim)])


_H_KINDS = ("zero", "nonneg", "box", "l1")


def random_composite(
    params: ClassParams, dim: int, h_kind: str, seed: int
) -> tuple[CompositeProblem, np.ndarray]:
    """Random catalog problem plus a feasible starting point, seeded."""
    f = random_instance(params, dim, seed)
    rng = np.random.default_rng(seed + 0x9E3779B9)
    x0 = rng.uniform(-2.0, 2.0, size=dim)
    if h_kind == "zero":
        h: ProxFunction = Zero(dim)
    elif h_kind == "nonneg":
        h = NonnegIndicator(dim)
        x0 = np.abs(x0)
    elif h_kind == "box":
        lo = rng.uniform(-2.0, 0.0, size=dim)
        hi = lo + rng.uniform(0.5, 2.0, size=dim)
        h = BoxIndicator(lo, hi)
        x0 = np.clip(x0, lo, hi)
    elif h_kind == "l1":
        h = L1Norm(rng.uniform(0.2, 1.5), dim)
    else:
        raise ValueError(f"unknown h kind {h_kind!r}; expected one of {_H_KINDS}")
    return CompositeProblem(f, h), x0


def check_interpolation(
    f: SmoothFunction, params: ClassParams, points
) -> float:
    """Worst violation of the F_{mu,L} interpolation inequalities at the points.

    For every ordered pair (i, j) evaluates

        f_i - f_j - <g_j, x_i - x_j> - ||g_i - g_j||^2 / (2L)
            - mu / (2(1 - mu/L)) * ||x_i - x_j - (g_i - g_j)/L||^2

    and returns the minimum, which is >= 0 (up to rounding) exactly when the
    data extends to a member of F_{mu,L}. Requires mu < L; the degenerate
    class mu = L contains only pure quadratics and is handled by simulation.
    """
    mu, L = params.mu, params.L
    if mu >= L:
        raise ValueError("interpolation check requires mu < L")
    pts = [np.asarray(p, dtype=float) for p in points]
    if len(pts) < 2:
        raise ValueError("need at least two points")
    vals = [f.value(p) for p in pts]
    grads = [f.grad(p) for p in pts]
    coeff = mu / (2.0 * (1.0 - mu / L))
    worst = math.inf
    for i in range(len(pts)):
        for j in range(len(pts)):
            if i == j:
                continue
            dx = pts[i] - pts[j]
            dg = grads[i] - grads[j]
            gap = (
                vals[i]
                - vals[j]
                - float(grads[j] @ dx)
                - float(dg @ dg) / (2.0 * L)
                - coeff * float(np.sum((dx - dg / L) ** 2))
            )
            worst = min(worst, gap)
    return worst


def relaxed_distance_condition(
    f: SmoothFunction, params: ClassParams, x, x_star
) -> float:
    """Slack of the weaker-than-strong-convexity condition between x and x*.

    <grad f(x*) - grad f(x), x* - x> >= ||grad f(x) - grad f(x*)||^2 / L
        + mu/(1 - mu/L) * ||x - x* - (grad f(x) - grad f(x*))/L||^2

    This is what the distance-contraction proof actually uses; it can hold for
    functions outside F_{mu,L}, e.g. rank-deficient quadratics measured
    against the projection of x onto their solution set.
    """
    mu, L = params.mu, params.L
    if mu >= L:
        raise ValueError("requires mu < L")
    x = np.asarray(x, dtype=float)
    x_star = np.asarray(x_star, dtype=float)
    dg = f.grad(x) - f.grad(x_star)
    dx = x - x_star
    lhs = float(dg @ dx)
    rhs = float(dg @ dg) / L + mu / (1.0 - mu / L) * float(np.sum((dx - dg / L) ** 2))
    return lhs - rhs
