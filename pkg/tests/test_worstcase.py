import numpy as np
import pytest

from proxrates import (
    ClassParams,
    MeasureKind,
    mixed_measure_instance,
    bound_lookup,
    check_interpolation,
    contraction,
    els_worst_quadratic,
    optimal_step,
    quadratic_lower_bound,
    run,
    run_exact_line_search,
    unbounded_family,
)
from proxrates.worstcase import (
    DIST_TO_FUNCGAP,
    DIST_TO_RESIDUAL,
    FUNCGAP_TO_RESIDUAL,
)

from helpers import iterate_recurrence

M = MeasureKind


class TestQuadraticLowerBound:
    def test_short_step_picks_small_curvature(self):
        spec = quadratic_lower_bound(ClassParams(1, 10), 0.05, N=1)
        assert spec.problem.f.a == 1.0
        trace = run(spec.problem, spec.gamma, spec.x0, 1, s0=spec.s0)
        ratio = trace.measure(M.DISTANCE_SQ, 1) / trace.measure(M.DISTANCE_SQ, 0)
        assert ratio == pytest.approx(0.9025, rel=1e-14)

    def test_long_step_picks_large_curvature(self):
        spec = quadratic_lower_bound(ClassParams(1, 10), 0.19, N=1)
        assert spec.problem.f.a == 10.0
        trace = run(spec.problem, spec.gamma, spec.x0, 1, s0=spec.s0)
        ratio = trace.measure(M.DISTANCE_SQ, 1) / trace.measure(M.DISTANCE_SQ, 0)
        assert ratio == pytest.approx(0.81, rel=1e-14)

    def test_boundary_step_matches_optimal_rate(self):
        params = ClassParams(1, 10)
        gamma, rate = optimal_step(params)
        spec = quadratic_lower_bound(params, gamma, N=1)
        trace = run(spec.problem, spec.gamma, spec.x0, 1, s0=spec.s0)
        ratio = trace.measure(M.FUNC_GAP, 1) / trace.measure(M.FUNC_GAP, 0)
        assert ratio == pytest.approx(rate.rho_squared, rel=1e-13)

    @pytest.mark.parametrize("gamma_frac", [0.1, 0.5, 1.0, 1.6, 2.0])
    def test_attainment_over_twenty_steps(self, gamma_frac):
        params = ClassParams(0.5, 4.0)
        gamma = gamma_frac / params.L
        spec = quadratic_lower_bound(params, gamma, N=20)
        trace = run(spec.problem, spec.gamma, spec.x0, 20, s0=spec.s0)
        decay = contraction(params, gamma).geometric(20)
        for m in M:
            if decay == 0.0:
                assert trace.measure(m, 20) == 0.0
                continue
            attained = trace.measure(m, 20) / trace.measure(m, 0)
            assert attained == pytest.approx(decay, rel=1e-12)

    def test_closed_form_matches_simulation(self):
        params = ClassParams(1.0, 10.0)
        spec = quadratic_lower_bound(params, 0.13, N=7)
        trace = run(spec.problem, spec.gamma, spec.x0, 7, s0=spec.s0)
        for k in range(8):
            np.testing.assert_allclose(trace.records[k].x, spec.closed_form_iterates(k), rtol=1e-13)

    def test_rejections(self):
        with pytest.raises(ValueError):
            quadratic_lower_bound(ClassParams(1, 10), 0.21)  # beyond 2/L
        with pytest.raises(ValueError):
            quadratic_lower_bound(ClassParams(0, 1), 0.5)  # no linear rate at mu = 0


class TestMixedMeasureInstance:
    def test_gap_target_reference_point(self):
        spec = mixed_measure_instance(ClassParams(1.0, 2.0), 2, 1.0, DIST_TO_FUNCGAP)
        assert spec.problem.f.b[0] == pytest.approx(1 / 15, rel=1e-15)
        assert spec.closed_form_iterates(2)[0] == pytest.approx(0.2, rel=1e-14)
        assert spec.predicted[DIST_TO_FUNCGAP] == pytest.approx(1 / 30, rel=1e-14)

    def test_residual_target_reference_point(self):
        spec = mixed_measure_instance(ClassParams(1.0, 2.0), 1, 1.0, DIST_TO_RESIDUAL)
        assert spec.problem.f.b[0] == pytest.approx(1.0, rel=1e-15)
        assert spec.predicted[DIST_TO_RESIDUAL] == pytest.approx(1.0, rel=1e-15)

    def test_degenerate_horizon_rejected(self):
        with pytest.raises(ValueError):
            mixed_measure_instance(ClassParams(1.0, 2.0), 0, 1.0, DIST_TO_FUNCGAP)

    def test_nonpositive_start_rejected(self):
        with pytest.raises(ValueError):
            mixed_measure_instance(ClassParams(1.0, 2.0), 2, 0.0, DIST_TO_FUNCGAP)

    def test_degenerate_class_rejected(self):
        with pytest.raises(ValueError):
            mixed_measure_instance(ClassParams(2.0, 2.0), 2, 1.0, DIST_TO_FUNCGAP)

    @pytest.mark.parametrize("target", [DIST_TO_FUNCGAP, DIST_TO_RESIDUAL, FUNCGAP_TO_RESIDUAL])
    @pytest.mark.parametrize("mu,L,N", [(1.0, 2.0, 3), (1.0, 10.0, 5), (0.5, 1.0, 2)])
    def test_simulation_attains_prediction(self, mu, L, N, target):
        params = ClassParams(mu, L)
        spec = mixed_measure_instance(params, N, 1.0, target)
        trace = run(spec.problem, spec.gamma, spec.x0, N, s0=spec.s0)
        # iterates match both the closed form and a direct recurrence oracle
        rec = iterate_recurrence(mu, L, float(spec.problem.f.b[0]), 1.0, N)
        for k in range(N + 1):
            assert trace.records[k].x[0] == pytest.approx(spec.closed_form_iterates(k)[0], abs=1e-12)
            assert trace.records[k].x[0] == pytest.approx(rec[k], abs=1e-12)
        init, final = target
        attained = trace.measure(final, N)
        assert attained == pytest.approx(spec.predicted[target], rel=1e-10)

    def test_feasibility_of_trajectory(self):
        for target in (DIST_TO_FUNCGAP, DIST_TO_RESIDUAL):
            spec = mixed_measure_instance(ClassParams(1.0, 3.0), 6, 2.0, target)
            assert min(spec.closed_form_iterates(k)[0] for k in range(7)) >= -1e-12

    def test_padded_embedding_flagged_and_equivalent(self):
        spec1 = mixed_measure_instance(ClassParams(1.0, 2.0), 2, 1.0, DIST_TO_FUNCGAP)
        spec3 = mixed_measure_instance(ClassParams(1.0, 2.0), 2, 1.0, DIST_TO_FUNCGAP, dim=3)
        assert spec3.note
        t1 = run(spec1.problem, spec1.gamma, spec1.x0, 2, s0=spec1.s0)
        t3 = run(spec3.problem, spec3.gamma, spec3.x0, 2, s0=spec3.s0)
        assert t1.measure(M.FUNC_GAP, 2) == pytest.approx(t3.measure(M.FUNC_GAP, 2), rel=1e-15)

    def test_small_mu_limit_of_gap_prediction(self):
        L, N, x0 = 1.0, 5, 1.0
        limit = L * x0**2 / (4 * N)
        errors = []
        for mu in (1e-2, 1e-4, 1e-6):
            spec = mixed_measure_instance(ClassParams(mu, L), N, x0, DIST_TO_FUNCGAP)
            errors.append(abs(spec.predicted[DIST_TO_FUNCGAP] - limit))
        assert errors[0] > errors[1] > errors[2]
        # error shrinks proportionally to mu
        assert errors[1] / errors[0] == pytest.approx(1e-2, rel=0.25)
        assert errors[2] / errors[1] == pytest.approx(1e-2, rel=0.25)


class TestUnboundedFamily:
    def test_witness_ratios_grow_without_bound(self):
        big = unbounded_family(0.1)
        small = unbounded_family(0.01)
        for cell in big.predicted:
            assert small.predicted[cell] >= 10 * big.predicted[cell]

    def test_predictions_match_simulation(self):
        spec = unbounded_family(0.05, N=5)
        trace = run(spec.problem, spec.gamma, spec.x0, 5, s0=spec.s0)
        for (init, final), predicted in spec.predicted.items():
            attained = trace.measure(final, 5) / trace.measure(init, 0)
            assert attained == pytest.approx(predicted, rel=1e-12)

    def test_cells_are_the_unbounded_table_cells(self):
        spec = unbounded_family(0.1)
        for init, final in spec.predicted:
            b = bound_lookup(init, final, ClassParams(0.0, 1.0), 1.0, 5)
            assert b.is_unbounded

    def test_start_at_optimum_stays(self):
        spec = unbounded_family(1.0, x0=0.0)
        trace = run(spec.problem, spec.gamma, spec.x0, 4, s0=spec.s0)
        for k in range(5):
            assert trace.records[k].x[0] == 0.0
        assert spec.predicted == {}

    def test_rejects_nonpositive_slope(self):
        with pytest.raises(ValueError):
            unbounded_family(0.0)


class TestElsWorstQuadratic:
    def test_ratio_attained(self):
        params = ClassParams(1.0, 10.0)
        spec = els_worst_quadratic(params, N=8)
        trace = run_exact_line_search(spec.problem, spec.x0, 8)
        rho_sq_star = optimal_step(params)[1].rho_squared
        for r in trace.step_ratios(M.FUNC_GAP):
            assert r == pytest.approx(rho_sq_star, rel=1e-12)
        for k in range(9):
            np.testing.assert_allclose(trace.records[k].x, spec.closed_form_iterates(k), rtol=1e-12)

    def test_degenerate_class_rejected(self):
        with pytest.raises(ValueError):
            els_worst_quadratic(ClassParams(2.0, 2.0))

    def test_eigendirection_start_converges_in_one_step(self):
        spec = els_worst_quadratic(ClassParams(1.0, 10.0))
        trace = run_exact_line_search(spec.problem, np.array([1.0, 0.0]), 1)
        assert trace.measure(M.FUNC_GAP, 1) == pytest.approx(0.0, abs=1e-20)


class TestGeneratedInstancesAreClassMembers:
    def test_interpolation_and_prox_invariants(self):
        rng = np.random.default_rng(17)
        specs = [
            quadratic_lower_bound(ClassParams(1, 10), 0.05),
            quadratic_lower_bound(ClassParams(1, 10), 0.19),
            mixed_measure_instance(ClassParams(1.0, 2.0), 3, 1.0, DIST_TO_FUNCGAP),
            unbounded_family(0.1),
            els_worst_quadratic(ClassParams(1.0, 10.0)),
        ]
        for spec in specs:
            params = spec.problem.params
            if params.mu < params.L:
                pts = list(rng.normal(size=(4, spec.problem.dim)))
                assert check_interpolation(spec.problem.f, params, pts) >= -1e-12
            h = spec.problem.h
            x = h.prox(1.0, rng.normal(size=spec.problem.dim))
            s = (rng.normal(size=spec.problem.dim) * 0.0)  # canonical member
            assert h.subgradient_membership(x, h.subgradient(x), tol=1e-12)
            gamma = 0.3
            y = rng.normal(size=spec.problem.dim)
            p = h.prox(gamma, y)
            assert h.subgradient_membership(p, (y - p) / gamma, tol=1e-12)
