"""Closed-form proximal operators for the nonsmooth catalog.

Each member h is a closed proper convex function with an analytical prox map
prox_{gamma*h}(x) = argmin_y gamma*h(y) + 0.5*||x - y||^2, an extended-real
value, a canonical subgradient at every feasible point, and a closed-form
subdifferential membership test.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "ProxFunction",
    "Zero",
    "NonnegIndicator",
    "BoxIndicator",
    "L1Norm",
    "LinearPlusNonnegIndicator",
]


class ProxFunction:
    """Base class; subclasses implement value/prox/subgradient/membership."""

    dim: int

    def _check_point(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise ValueError(f"expected point of shape ({self.dim},), got {x.shape}")
        return x

    def _check_gamma(self, gamma: float) -> float:
        if not gamma > 0:
            raise ValueError(f"prox step size must be positive, got {gamma}")
        return float(gamma)

    def value(self, x) -> float:
        raise NotImplementedError

    def prox(self, gamma: float, x) -> np.ndarray:
        raise NotImplementedError

    def subgradient(self, x) -> np.ndarray:
        """A canonical element of the subdifferential at a feasible x."""
        raise NotImplementedError

    def subgradient_membership(self, x, s, tol: float = 0.0) -> bool:
        """True iff s lies in the subdifferential at x, up to tol per coordinate."""
        raise NotImplementedError

    def _require_feasible(self, x) -> np.ndarray:
        x = self._check_point(x)
        if math.isinf(self.value(x)):
            raise ValueError("point is outside the domain of h")
        return x


class Zero(ProxFunction):
    """h = 0; prox is the identity."""

    def __init__(self, dim: int):
        self.dim = int(dim)

    def value(self, x) -> float:
        self._check_point(x)
        return 0.0

    def prox(self, gamma, x):
        self._check_gamma(gamma)
        return self._check_point(x).copy()

    def subgradient(self, x):
        self._check_point(x)
        return np.zeros(self.dim)

    def subgradient_membership(self, x, s, tol=0.0):
        self._require_feasible(x)
        s = self._check_point(s)
        return bool(np.all(np.abs(s) <= tol))


class NonnegIndicator(ProxFunction):
    """Indicator of the nonnegative orthant; prox is the projection."""

    def __init__(self, dim: int):
        self.dim = int(dim)

    def value(self, x) -> float:
        x = self._check_point(x)
        return 0.0 if np.all(x >= 0) else math.inf

    def prox(self, gamma, x):
        self._check_gamma(gamma)
        return np.maximum(self._check_point(x), 0.0)

    def subgradient(self, x):
        self._require_feasible(x)
        return np.zeros(self.dim)

    def subgradient_membership(self, x, s, tol=0.0):
        # normal cone: s_i <= 0 where x_i = 0, s_i = 0 where x_i > 0
        x = self._require_feasible(x)
        s = self._check_point(s)
        at_boundary = x <= tol
        return bool(np.all(np.where(at_boundary, s <= tol, np.abs(s) <= tol)))


class BoxIndicator(ProxFunction):
    """Indicator of the box [lo, hi]; prox clips coordinatewise."""

    def __init__(self, lo, hi):
        self.lo = np.asarray(lo, dtype=float)
        self.hi = np.asarray(hi, dtype=float)
        if self.lo.shape != self.hi.shape or self.lo.ndim != 1:
            raise ValueError("lo and hi must be 1-d arrays of equal length")
        if np.any(self.lo > self.hi):
            raise ValueError("need lo <= hi coordinatewise")
        self.dim = self.lo.shape[0]

    def value(self, x) -> float:
        x = self._check_point(x)
        return 0.0 if np.all((x >= self.lo) & (x <= self.hi)) else math.inf

    def prox(self, gamma, x):
        self._check_gamma(gamma)
        return np.clip(self._check_point(x), self.lo, self.hi)

    def subgradient(self, x):
        self._require_feasible(x)
        return np.zeros(self.dim)

    def subgradient_membership(self, x, s, tol=0.0):
        x = self._require_feasible(x)
        s = self._check_point(s)
        at_lo = x <= self.lo + tol
        at_hi = x >= self.hi - tol
        ok_lo = s <= tol
        ok_hi = s >= -tol
        interior_ok = np.abs(s) <= tol
        ok = np.where(
            at_lo & at_hi,
            True,  # degenerate coordinate, any slope
            np.where(at_lo, ok_lo, np.where(at_hi, ok_hi, interior_ok)),
        )
        return bool(np.all(ok))


class L1Norm(ProxFunction):
    """h(x) = weight * ||x||_1; prox is coordinatewise soft-thresholding."""

    def __init__(self, weight: float, dim: int):
        if weight < 0:
            raise ValueError("l1 weight must be nonnegative")
        self.weight = float(weight)
        self.dim = int(dim)

    def value(self, x) -> float:
        return self.weight * float(np.sum(np.abs(self._check_point(x))))

    def prox(self, gamma, x):
        gamma = self._check_gamma(gamma)
        x = self._check_point(x)
        shift = gamma * self.weight
        return np.sign(x) * np.maximum(np.abs(x) - shift, 0.0)

    def subgradient(self, x):
        return self.weight * np.sign(self._check_point(x))

    def subgradient_membership(self, x, s, tol=0.0):
        x = self._require_feasible(x)
        s = self._check_point(s)
        w = self.weight
        at_zero = np.abs(x) <= tol
        sign_ok = np.abs(s - w * np.sign(x)) <= tol
        zero_ok = np.abs(s) <= w + tol
        return bool(np.all(np.where(at_zero, zero_ok, sign_ok)))


class LinearPlusNonnegIndicator(ProxFunction):
    """h(x) = <c, x> on the nonnegative orthant, +inf outside."""

    def __init__(self, c):
        self.c = np.asarray(c, dtype=float)
        if self.c.ndim != 1:
            raise ValueError("c must be a 1-d array")
        self.dim = self.c.shape[0]

    def value(self, x) -> float:
        x = self._check_point(x)
        return float(self.c @ x) if np.all(x >= 0) else math.inf

    def prox(self, gamma, x):
        gamma = self._check_gamma(gamma)
        return np.maximum(self._check_point(x) - gamma * self.c, 0.0)

    def subgradient(self, x):
        self._require_feasible(x)
        return self.c.copy()

    def subgradient_membership(self, x, s, tol=0.0):
        x = self._require_feasible(x)
        s = self._check_point(s)
        at_boundary = x <= tol
        slack = s - self.c
        return bool(np.all(np.where(at_boundary, slack <= tol, np.abs(slack) <= tol)))
