"""Strong-convexity conversions between performance measures, as checkable predicates.

For a feasible point x with subgradient s of h, strong convexity of F = f + h
with modulus mu > 0 gives

    (i)   ||x - x*||^2  <=  ||grad f(x) + s||^2 / mu^2
    (ii)  F(x) - F*     <=  ||grad f(x) + s||^2 / (2 mu)
    (iii) ||x - x*||^2  <=  2 (F(x) - F*) / mu

Composing (i)-(iii) with the per-iteration contraction yields the
mixed-measure trajectory bounds checked by `check_mixed_bound`. All slacks
are normalized by the magnitude of the quantities compared, so tolerances are
dimensionless across parameter scales.
"""

from __future__ import annotations

from dataclasses import dataclass

from .engine import IterateTrace
from .rates import ClassParams, MeasureKind, bound_lookup

__all__ = ["MeasureTriple", "check_proposition", "check_mixed_bound"]


@dataclass(frozen=True)
class MeasureTriple:
    dist_sq: float
    func_gap: float
    residual_grad_sq: float

    def __post_init__(self):
        if min(self.dist_sq, self.residual_grad_sq) < 0:
            raise ValueError("squared measures must be nonnegative")


def _normalized_slack(lhs: float, rhs: float, floor: float = 0.0) -> float:
    """(rhs - lhs) / scale for the claim lhs <= rhs; 0 when both vanish.

    A negative raw slack smaller in magnitude than `floor` (the absolute
    double-precision noise of computing lhs and rhs) is indistinguishable
    from zero and reported as such.
    """
    raw = rhs - lhs
    if raw < 0 and -raw <= floor:
        return 0.0
    scale = max(abs(lhs), abs(rhs))
    return raw / scale if scale > 0 else 0.0


def check_proposition(
    triple: MeasureTriple,
    params: ClassParams,
    floors: MeasureTriple | None = None,
) -> list[tuple[str, float]]:
    """Normalized slacks of the three strong-convexity conversions at one point.

    All slacks are >= 0 (up to rounding) for measures coming from a feasible
    point of a genuine mu-strongly-convex composite problem. `floors`, when
    given, carries the absolute noise floors of the three measures (see
    IterateTrace.measure_floor); apparent violations below them read as zero.
    """
    params.require_strongly_convex()
    mu = params.mu
    f = floors if floors is not None else MeasureTriple(0.0, 0.0, 0.0)
    return [
        (
            "dist_le_residual_over_musq",
            _normalized_slack(
                triple.dist_sq,
                triple.residual_grad_sq / mu**2,
                f.dist_sq + f.residual_grad_sq / mu**2,
            ),
        ),
        (
            "gap_le_residual_over_2mu",
            _normalized_slack(
                triple.func_gap,
                triple.residual_grad_sq / (2 * mu),
                abs(f.func_gap) + f.residual_grad_sq / (2 * mu),
            ),
        ),
        (
            "dist_le_2gap_over_mu",
            _normalized_slack(
                triple.dist_sq,
                2 * triple.func_gap / mu,
                f.dist_sq + 2 * abs(f.func_gap) / mu,
            ),
        ),
    ]


def check_mixed_bound(
    trace: IterateTrace,
    init: MeasureKind,
    final: MeasureKind,
    k: int,
    conjectured: bool = False,
) -> float:
    """Normalized slack of bound(init -> final, k) * measure_0 - measure_k >= 0.

    Requires a fixed-step trace carrying both measures; a missing initial
    residual (no subgradient at x0) is an error because the residual-seeded
    bounds assume one exists.
    """
    if trace.method != "fixed":
        raise ValueError("mixed bounds are stated for fixed-step traces")
    if not 1 <= k < len(trace):
        raise ValueError(f"k must be in [1, {len(trace) - 1}]")
    params = trace.problem.params
    params.require_strongly_convex()
    gamma = trace.gammas[0]
    initial = trace.measure(init, 0)
    final_val = trace.measure(final, k)
    if initial is None or final_val is None:
        raise ValueError(
            f"trace lacks the required measures ({init.value} at 0, {final.value} at {k})"
        )
    bound = bound_lookup(init, final, params, gamma, k, conjectured=conjectured)
    floor = trace.measure_floor(final, k) + bound.value * trace.measure_floor(init, 0)
    return _normalized_slack(final_val, bound.value * initial, floor)
