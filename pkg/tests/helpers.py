"""Shared independent oracles for the test suite.

Everything here recomputes expected values by a route different from the
library code it checks: brute-force one-dimensional minimization for prox
maps, direct recurrence iteration for the constrained quadratic family, and
the long hand-expanded coefficient display for the distance certificate.
"""

from fractions import Fraction

from proxrates.certificate import (
    Regime,
    SymbolicExpr,
    interp_convex,
    interp_smooth,
)


def _rational_value_1d(h):
    """The defining extended-real value of a 1-d catalog member, in exact rationals.

    Returns a callable mapping Fraction -> Fraction, or None for +infinity.
    This re-states the definitions only; it shares nothing with the prox maps
    under test.
    """
    from proxrates import BoxIndicator, L1Norm, LinearPlusNonnegIndicator, NonnegIndicator, Zero

    if isinstance(h, Zero):
        return lambda y: Fraction(0)
    if isinstance(h, NonnegIndicator):
        return lambda y: Fraction(0) if y >= 0 else None
    if isinstance(h, BoxIndicator):
        lo, hi = Fraction(float(h.lo[0])), Fraction(float(h.hi[0]))
        return lambda y: Fraction(0) if lo <= y <= hi else None
    if isinstance(h, L1Norm):
        w = Fraction(float(h.weight))
        return lambda y: w * abs(y)
    if isinstance(h, LinearPlusNonnegIndicator):
        c = Fraction(float(h.c[0]))
        return lambda y: c * y if y >= 0 else None
    raise TypeError(f"no rational value for {type(h).__name__}")


def brute_force_prox_1d(h, gamma: float, x: float, lo: float, hi: float) -> float:
    """Minimize gamma*h(y) + (x-y)^2/2 on [lo, hi] by grid scan plus refinement.

    Runs in exact rational arithmetic so the bracket can be shrunk far below
    the square-root-of-epsilon wall that a floating-point value comparison
    would hit near a smooth minimum.
    """
    gamma_q, x_q = Fraction(gamma), Fraction(x)
    h_val = _rational_value_1d(h)

    def objective(y):
        hy = h_val(y)
        return None if hy is None else gamma_q * hy + (x_q - y) ** 2 / 2

    a, b = Fraction(lo), Fraction(hi)
    for _ in range(60):
        step = (b - a) / 40
        pts = [a + i * step for i in range(41)]
        finite = [(objective(p), i) for i, p in enumerate(pts) if objective(p) is not None]
        _, i = min(finite)
        a, b = pts[max(i - 1, 0)], pts[min(i + 1, 40)]
        if b - a < Fraction(1, 10**13):
            break
    return float((a + b) / 2)


def iterate_recurrence(mu: float, L: float, c: float, x0: float, N: int) -> list[float]:
    """x_{k+1} = (1 - mu/L) x_k - c/L iterated directly (independent of closed forms)."""
    xs = [x0]
    for _ in range(N):
        xs.append((1.0 - mu / L) * xs[-1] - c / L)
    return xs


def distance_weighted_sum(mu, L, gamma, regime: Regime) -> SymbolicExpr:
    """The distance certificate's weighted sum of inequalities, no target subtracted."""
    mu, L = Fraction(mu), Fraction(L)
    rho = 1 - gamma * mu if regime is Regime.SMALL_STEP else gamma * L - 1
    lam_f = 2 * gamma * rho
    lam_h = 2 * gamma
    return (
        interp_smooth("*", "k", mu, L, gamma).scale(lam_f)
        + interp_smooth("k", "*", mu, L, gamma).scale(lam_f)
        + interp_convex("*", "k+1", gamma).scale(lam_h)
        + interp_convex("k+1", "*", gamma).scale(lam_h)
    )


def reference_display(mu, L, g) -> SymbolicExpr:
    """The long hand-expanded form of the small-step distance weighted sum.

    Transcribed coefficient by coefficient from the reference hand expansion, which
    is stated for free x_k and x_*; the optimal point is the origin of the
    canonical basis, so the x_* columns fold into the x = x_k - x_* entries.
    The internal consistency of that folding (each x_* coefficient is the
    exact negative of its x_k partner, and the x_k/x_* quadratic block is a
    perfect square in x_k - x_*) is asserted here before folding.
    """
    mu, L = Fraction(mu), Fraction(L)
    pref = 2 / (L - mu)

    gk_gk = g - g**2 * mu
    gk_gs = g**2 * mu + g**2 * L - 2 * g
    gk_sk1 = g**2 * L - g**2 * mu
    gk_xk = g**2 * mu**2 + g**2 * mu * L - g * L - g * mu
    gk_xs = -(g**2) * mu**2 - g**2 * mu * L + g * L + g * mu
    gs_gs = g - g**2 * mu
    gs_sk1 = g**2 * L - g**2 * mu
    gs_xk = 2 * g * mu - g**2 * mu**2 - g**2 * mu * L
    gs_xs = g**2 * mu**2 + g**2 * mu * L - 2 * g * mu
    sk1_sk1 = g**2 * L - g**2 * mu
    sk1_xk = g * mu - g * L
    sk1_xs = g * L - g * mu
    xk_xk = g * mu * L - g**2 * mu**2 * L
    xk_xs = 2 * g**2 * mu**2 * L - 2 * g * mu * L
    xs_xs = g * mu * L - g**2 * mu**2 * L

    # translation-invariance structure of the printed display
    assert gk_xs == -gk_xk
    assert gs_xs == -gs_xk
    assert sk1_xs == -sk1_xk
    assert xk_xs == -2 * xk_xk
    assert xs_xs == xk_xk

    gram = {
        ("gk", "gk"): gk_gk,
        ("gk", "gs"): gk_gs,
        ("gk", "sk1"): gk_sk1,
        ("gk", "x"): gk_xk,
        ("gs", "gs"): gs_gs,
        ("gs", "sk1"): gs_sk1,
        ("gs", "x"): gs_xk,
        ("sk1", "sk1"): sk1_sk1,
        ("sk1", "x"): sk1_xk,
        ("x", "x"): xk_xk,
    }
    return SymbolicExpr(gram={k: pref * v for k, v in gram.items()})
