"""Proximal gradient method with fixed step and with exact line search.

Every run produces a fully instrumented trace: iterates, gradients, the
subgradient extracted from each prox step via

    s_{k+1} = (x_k - x_{k+1}) / gamma - grad f(x_k),

the composite value, and the three performance measures (squared distance to
the optimum, function-value gap, squared residual gradient norm) wherever the
optimum is available. The residual measure at an iterate always uses that
iterate's own gradient and subgradient, which distinguishes it from the
gradient mapping (x_k - x_{k+1}) / gamma.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .prox import Zero
from .rates import MeasureKind
from .smooth import CompositeProblem, SmoothFunction

__all__ = [
    "IterateRecord",
    "IterateTrace",
    "LineSearchError",
    "pgm_step",
    "run",
    "exact_line_search_step",
    "run_exact_line_search",
    "residual_line_search_step",
]

_MEMBERSHIP_TOL = 1e-9
_EPS = float(np.finfo(float).eps)
_FLOOR_FACTOR = 256.0


class LineSearchError(RuntimeError):
    """Line search could not certify a minimizer; carries the best point found."""

    def __init__(self, message: str, gamma: float, x):
        super().__init__(message)
        self.gamma = gamma
        self.x = x


@dataclass
class IterateRecord:
    x: np.ndarray
    grad_f: np.ndarray
    s: np.ndarray | None
    F_val: float
    dist_sq: float | None
    func_gap: float | None
    residual_grad_sq: float | None

    def measure(self, kind: MeasureKind) -> float | None:
        return {
            MeasureKind.DISTANCE_SQ: self.dist_sq,
            MeasureKind.FUNC_GAP: self.func_gap,
            MeasureKind.RESIDUAL_GRAD_SQ: self.residual_grad_sq,
        }[kind]


@dataclass
class IterateTrace:
    problem: CompositeProblem
    records: list[IterateRecord]
    gammas: list[float]
    method: str = "fixed"
    outside_theory: bool = False

    def __len__(self) -> int:
        return len(self.records)

    def measure(self, kind: MeasureKind, k: int) -> float | None:
        return self.records[k].measure(kind)

    def measure_floor(self, kind: MeasureKind, k: int) -> float:
        """Absolute double-precision noise floor of measure `kind` at record k.

        The function gap is a difference of comparable values, the distance a
        square of one, and the residual a square of the gradient/subgradient
        sum; each inherits a floor of a few hundred ulps of its inputs. Below
        this level the stored value carries no information, a measured "gap"
        may even be negative, and no ratio or bound check is meaningful.
        """
        rec = self.records[k]
        opt = self.problem.try_optimum()
        if kind is MeasureKind.FUNC_GAP:
            f_star = abs(opt[1]) if opt is not None else 0.0
            return _FLOOR_FACTOR * _EPS * max(abs(rec.F_val), f_star)
        if kind is MeasureKind.DISTANCE_SQ:
            x_star = float(np.linalg.norm(opt[0])) if opt is not None else 0.0
            return (_FLOOR_FACTOR * _EPS * max(float(np.linalg.norm(rec.x)), x_star)) ** 2
        if rec.s is None:
            return 0.0
        scale = float(np.linalg.norm(rec.grad_f)) + float(np.linalg.norm(rec.s))
        return (_FLOOR_FACTOR * _EPS * scale) ** 2

    def step_ratios(self, kind: MeasureKind) -> list[float | None]:
        """measure(k+1) / measure(k) per step.

        None where a measure is missing, zero, or below its noise floor (a
        ratio of rounding noise says nothing about contraction).
        """
        out: list[float | None] = []
        for k, (prev, nxt) in enumerate(zip(self.records, self.records[1:])):
            a, b = prev.measure(kind), nxt.measure(kind)
            defined = a is not None and b is not None and a > self.measure_floor(kind, k)
            out.append(b / a if defined else None)
        return out


def _record(problem: CompositeProblem, x, s, optimum) -> IterateRecord:
    grad = problem.f.grad(x)
    F_val = problem.value(x)
    dist_sq = func_gap = residual = None
    if optimum is not None:
        x_star, F_star = optimum
        dist_sq = float(np.sum((x - x_star) ** 2))
        func_gap = F_val - F_star
    if s is not None:
        r = grad + s
        residual = float(r @ r)
    return IterateRecord(x, grad, s, F_val, dist_sq, func_gap, residual)


def pgm_step(
    problem: CompositeProblem, gamma: float, x_k, grad_k=None
) -> tuple[np.ndarray, np.ndarray]:
    """One proximal gradient step; returns (x_{k+1}, s_{k+1}).

    gamma must be strictly positive: the extracted subgradient divides by it.
    """
    if not gamma > 0:
        raise ValueError("pgm_step requires gamma > 0")
    x_k = np.asarray(x_k, dtype=float)
    grad_k = problem.f.grad(x_k) if grad_k is None else np.asarray(grad_k, dtype=float)
    x_next = problem.h.prox(gamma, x_k - gamma * grad_k)
    s_next = (x_k - x_next) / gamma - grad_k
    return x_next, s_next


def _initial_subgradient(problem: CompositeProblem, x0, s0):
    if s0 is not None:
        s0 = np.asarray(s0, dtype=float)
        if not problem.h.subgradient_membership(x0, s0, _MEMBERSHIP_TOL):
            raise ValueError("supplied s0 is not a subgradient of h at x0")
        return s0
    try:
        return problem.h.subgradient(x0)
    except NotImplementedError:
        return None


def run(
    problem: CompositeProblem,
    gamma: float,
    x0,
    N: int,
    s0=None,
) -> IterateTrace:
    """Run N fixed-step PGM iterations from x0, producing N+1 records.

    x0 must be feasible (F(x0) finite). Record 0 carries s0 when supplied, the
    canonical subgradient of h at x0 otherwise. Steps with gamma > 2/L are
    allowed for exploration but mark the trace as outside the theory.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    if not gamma > 0:
        raise ValueError("run requires gamma > 0")
    x0 = np.asarray(x0, dtype=float)
    if math.isinf(problem.h.value(x0)):
        raise ValueError("infeasible start: F(x0) = +inf")
    optimum = problem.try_optimum()
    records = [_record(problem, x0, _initial_subgradient(problem, x0, s0), optimum)]
    x = x0
    for _ in range(N):
        x, s = pgm_step(problem, gamma, x, records[-1].grad_f)
        records.append(_record(problem, x, s, optimum))
    outside = gamma > 2.0 / problem.params.L * (1 + 1e-12)
    return IterateTrace(problem, records, [gamma] * N, "fixed", outside)


def _golden_section(phi, lo: float, hi: float, rel_width: float = 1e-12):
    inv = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv * (b - a)
    d = a + inv * (b - a)
    fc, fd = phi(c), phi(d)
    while (b - a) > rel_width * max(1.0, abs(a), abs(b)):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = phi(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = phi(d)
    return (c, fc) if fc <= fd else (d, fd)


def exact_line_search_step(
    problem: CompositeProblem, x_k, gamma_max: float | None = None
) -> tuple[float, np.ndarray]:
    """Step size minimizing F(prox(h, gamma, x_k - gamma grad f(x_k))) and the new point.

    With h = 0 the quadratic catalog admits the closed form
    gamma = <g, g> / <g, Hg>. Otherwise a coarse scan brackets the minimum on
    (0, gamma_max], expanding the interval while the objective still decreases
    at its right end, and golden-section search refines the bracket to
    relative width 1e-12.
    """
    x_k = np.asarray(x_k, dtype=float)
    g = problem.f.grad(x_k)
    if isinstance(problem.h, Zero):
        Hg = problem.f.hess_vec(g)
        denom = float(g @ Hg)
        gnorm = float(g @ g)
        if gnorm == 0.0:
            return 1.0 / problem.params.L, x_k.copy()
        if denom <= 0.0:
            raise LineSearchError("objective is unbounded along the gradient ray", math.inf, x_k)
        gamma = gnorm / denom
        return gamma, x_k - gamma * g

    def phi(t: float) -> float:
        if t <= 0.0:
            return problem.value(x_k)
        return problem.value(problem.h.prox(t, x_k - t * g))

    mu = problem.params.mu
    hi = gamma_max if gamma_max is not None else (4.0 / mu if mu > 0 else 4.0 / problem.params.L)
    expansions = 0
    while phi(hi) < phi(0.5 * hi) and expansions < 60:
        hi *= 2.0
        expansions += 1
    if expansions == 60:
        raise LineSearchError("no bracket: objective keeps decreasing", hi, problem.h.prox(hi, x_k - hi * g))

    grid = np.linspace(0.0, hi, 65)
    vals = [phi(t) for t in grid]
    idx = int(np.argmin(vals))
    lo_b = grid[max(idx - 1, 0)]
    hi_b = grid[min(idx + 1, len(grid) - 1)]
    gamma, f_best = _golden_section(phi, lo_b, hi_b)
    if f_best > min(vals) + 1e-9 * (abs(min(vals)) + 1.0):
        raise LineSearchError("bracket refinement failed (non-unimodal search)", gamma, problem.h.prox(gamma, x_k - gamma * g))
    if gamma <= 0.0:
        gamma = max(gamma, 1e-300)
    return float(gamma), problem.h.prox(gamma, x_k - gamma * g)


def run_exact_line_search(problem: CompositeProblem, x0, N: int) -> IterateTrace:
    """N exact-line-search steps; per-step gamma recorded, subgradients from the prox."""
    x0 = np.asarray(x0, dtype=float)
    if math.isinf(problem.h.value(x0)):
        raise ValueError("infeasible start: F(x0) = +inf")
    optimum = problem.try_optimum()
    records = [_record(problem, x0, _initial_subgradient(problem, x0, None), optimum)]
    gammas: list[float] = []
    x = x0
    for _ in range(N):
        gamma, x_next = exact_line_search_step(problem, x)
        s_next = (x - x_next) / gamma - records[-1].grad_f
        records.append(_record(problem, x_next, s_next, optimum))
        gammas.append(gamma)
        x = x_next
    return IterateTrace(problem, records, gammas, "els", False)


def residual_line_search_step(f: SmoothFunction, x_k) -> tuple[float, np.ndarray]:
    """Line search along the gradient minimizing the next gradient norm (h = 0 only).

    Returns (alpha, x_{k+1}) with x_{k+1} = x_k + alpha * grad f(x_k); for the
    quadratic catalog alpha = -<g, Hg> / <Hg, Hg> is exact. The composite
    analogue has no available procedure and is out of scope.
    """
    x_k = np.asarray(x_k, dtype=float)
    g = f.grad(x_k)
    Hg = f.hess_vec(g)
    denom = float(Hg @ Hg)
    if denom == 0.0:
        return 0.0, x_k.copy()
    alpha = -float(g @ Hg) / denom
    return alpha, x_k + alpha * g
