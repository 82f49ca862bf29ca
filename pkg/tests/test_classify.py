"""Classification tests: frame components, rectifying verdicts, component fits."""

import numpy as np
import pytest

from pgcurves.classify import (
    DegenerateFit,
    NonConstantInvariants,
    ZeroTorsion,
    classify_rectifying,
    fit_normal_components,
    fit_normal_samples,
    frame_components,
    normal_component_exprs,
    normal_ode_residuals,
)
from pgcurves.dsl import Const
from pgcurves.frenet import curve_from_exprs, frame_at, frenet_grid
from pgcurves.space import ORIGIN, PGVector3

COSH_SINH = curve_from_exprs("cosh(s)", "sinh(s)", 0.0, 2.0)
PARABOLA = curve_from_exprs("s^2/2", "0", -1.0, 1.0)


def _position(curve, s):
    x, y, z = curve.position(s)
    return PGVector3(float(x), float(y), float(z))


class TestFrameComponents:
    def test_cosh_sinh_at_zero(self):
        fc = frame_components(COSH_SINH, 0.0, ORIGIN)
        assert fc.alpha == pytest.approx(0.0, abs=1e-14)
        assert fc.beta == pytest.approx(1.0, rel=1e-12)
        assert fc.gamma == pytest.approx(0.0, abs=1e-12)

    def test_basis_vector_recovered(self):
        s = 0.8
        f = frame_at(COSH_SINH, s)
        p0 = _position(COSH_SINH, s) - f.n
        fc = frame_components(COSH_SINH, s, p0)
        assert fc.alpha == pytest.approx(0.0, abs=1e-12)
        assert fc.beta == pytest.approx(1.0, rel=1e-12)
        assert fc.gamma == pytest.approx(0.0, abs=1e-12)

    def test_basis_combination_recovered(self):
        s = 1.2
        f = frame_at(COSH_SINH, s)
        p0 = _position(COSH_SINH, s) - (2.0 * f.t + 3.0 * f.b)
        fc = frame_components(COSH_SINH, s, p0)
        assert fc.alpha == pytest.approx(2.0, rel=1e-12)
        assert fc.beta == pytest.approx(0.0, abs=1e-11)
        assert fc.gamma == pytest.approx(3.0, rel=1e-12)

    @pytest.mark.parametrize("curve", [COSH_SINH, PARABOLA])
    def test_reconstruction_everywhere(self, curve):
        p0 = PGVector3(0.3, -0.4, 0.9)
        s = curve.grid()
        g = frenet_grid(curve, s)
        x, y, z = curve.position(s)
        for i in range(0, s.size, 97):
            fc = frame_components(curve, float(s[i]), p0)
            rx = fc.alpha * 1.0
            ry = fc.alpha * g.t_y[i] + fc.beta * g.n_y[i] + fc.gamma * g.b_y[i]
            rz = fc.alpha * g.t_z[i] + fc.beta * g.n_z[i] + fc.gamma * g.b_z[i]
            err = np.sqrt((rx - (x[i] - p0.x)) ** 2 + (ry - (y[i] - p0.y)) ** 2
                          + (rz - (z[i] - p0.z)) ** 2)
            assert err <= 1e-12 * (1.0 + abs(fc.alpha) + abs(fc.beta) + abs(fc.gamma))

    def test_origin_shift_covariance(self):
        # Shifting p0 along the x axis changes r - p0 by -delta (1, 0, 0).
        # The tangential coefficient absorbs -delta exactly; beta and gamma
        # pick up the decomposition of +delta (0, t_y, t_z) in {n, b}, which
        # only vanishes where the tangent has no isotropic part.
        s, delta = 1.5, 5.0
        f = frame_at(COSH_SINH, s)
        base = frame_components(COSH_SINH, s, ORIGIN)
        shifted = frame_components(COSH_SINH, s, PGVector3(delta, 0.0, 0.0))
        assert shifted.alpha == pytest.approx(base.alpha - delta, rel=1e-12)
        det = f.n.y * f.b.z - f.b.y * f.n.z
        beta_shift = delta * (f.b.z * f.t.y - f.b.y * f.t.z) / det
        gamma_shift = delta * (f.n.y * f.t.z - f.n.z * f.t.y) / det
        assert shifted.beta == pytest.approx(base.beta + beta_shift, rel=1e-10)
        assert shifted.gamma == pytest.approx(base.gamma + gamma_shift, rel=1e-10)

    def test_origin_shift_leaves_plane_components_where_tangent_is_axial(self):
        # at the parabola vertex the tangent is purely non-isotropic
        base = frame_components(PARABOLA, 0.0, ORIGIN)
        shifted = frame_components(PARABOLA, 0.0, PGVector3(5.0, 0.0, 0.0))
        assert shifted.alpha == pytest.approx(base.alpha - 5.0, rel=1e-12)
        assert shifted.beta == pytest.approx(base.beta, abs=1e-13)
        assert shifted.gamma == pytest.approx(base.gamma, abs=1e-13)


class TestClassifyRectifying:
    def test_cosh_sinh_not_rectifying(self):
        verdict = classify_rectifying(COSH_SINH, ORIGIN)
        assert not verdict.is_rectifying
        # normal component is identically 1, ratio tau/kappa identically 1
        assert verdict.beta_max == pytest.approx(1.0, rel=1e-10)
        assert verdict.a == pytest.approx(0.0, abs=1e-10)
        assert verdict.ratio_residual <= 1e-9

    def test_parabola_not_rectifying(self):
        verdict = classify_rectifying(PARABOLA, ORIGIN)
        assert not verdict.is_rectifying
        assert verdict.a == 0.0  # torsion vanishes identically

    def test_needs_enough_grid_points(self):
        tiny = curve_from_exprs("cosh(s)", "sinh(s)", 0.0, 1.0, samples=5)
        with pytest.raises(DegenerateFit):
            classify_rectifying(tiny, ORIGIN)

    def test_grid_refinement_does_not_flip(self):
        coarse = classify_rectifying(COSH_SINH, ORIGIN)
        fine = classify_rectifying(
            curve_from_exprs("cosh(s)", "sinh(s)", 0.0, 2.0, samples=2001), ORIGIN)
        assert coarse.is_rectifying == fine.is_rectifying


class TestNormalComponentFamily:
    def test_closed_forms_solve_component_system_symbolically(self):
        # independent desk oracle, machine checked
        import sympy as sp

        s, k, t, c1, c2, c3, c4 = sp.symbols("s k t c1 c2 c3 c4", nonzero=True)
        a_part = (c1 + c2 * s) * sp.exp(-t * s)
        b_part = (c3 + c4 * s) * sp.exp(t * s)
        xi = a_part + b_part + k / t**2
        eta = a_part - b_part
        r1 = sp.simplify(sp.diff(xi, s, 2) + 2 * t * sp.diff(eta, s) + t**2 * xi - k)
        r2 = sp.simplify(sp.diff(eta, s, 2) + 2 * t * sp.diff(xi, s) + t**2 * eta)
        assert r1 == 0
        assert r2 == 0

    def test_constant_particular_solution(self):
        grid = np.linspace(0.0, 1.0, 50)
        r1, r2 = normal_ode_residuals(Const(0.25), Const(0.0), 1.0, 2.0, grid)
        assert r1 == 0.0 and r2 == 0.0

    def test_zero_functions_leave_forcing_term(self):
        grid = np.linspace(0.0, 1.0, 50)
        r1, r2 = normal_ode_residuals(Const(0.0), Const(0.0), 1.0, 1.0, grid)
        assert r1 == 1.0 and r2 == 0.0

    def test_closed_forms_at_rounding_floor(self):
        rng = np.random.default_rng(3)
        grid = np.linspace(0.0, 1.0, 101)
        for _ in range(25):
            kappa = rng.uniform(0.1, 10.0)
            tau = rng.uniform(0.1, 5.0) * rng.choice([-1.0, 1.0])
            c = tuple(rng.uniform(-1.0, 1.0, size=4))
            xi_e, eta_e = normal_component_exprs(kappa, tau, c)
            r1, r2 = normal_ode_residuals(xi_e, eta_e, kappa, tau, grid)
            assert r1 <= 1e-10 and r2 <= 1e-10

    def test_zero_torsion_rejected(self):
        with pytest.raises(ZeroTorsion):
            normal_component_exprs(1.0, 0.0, (0, 0, 0, 0))


class TestFitNormalSamples:
    @staticmethod
    def _reference_profile(s, kappa, tau, c):
        # generated directly with numpy, independent of the DSL expressions
        c1, c2, c3, c4 = c
        a_part = (c1 + c2 * s) * np.exp(-tau * s)
        b_part = (c3 + c4 * s) * np.exp(tau * s)
        return a_part + b_part + kappa / tau**2, a_part - b_part

    def test_recovers_documented_draw(self):
        s = np.linspace(0.0, 2.0, 201)
        kappa, tau = 1.0, 1.0
        c = (0.3, -0.2, 0.1, 0.05)
        xi, eta = self._reference_profile(s, kappa, tau, c)
        fit = fit_normal_samples(s, xi, eta)
        assert fit.kappa0 == pytest.approx(kappa, abs=1e-8)
        assert fit.tau0 == pytest.approx(tau, abs=1e-8)
        for got, want in zip((fit.c1, fit.c2, fit.c3, fit.c4), c):
            assert got == pytest.approx(want, abs=1e-8)
        assert fit.xi_residual <= 1e-10 and fit.eta_residual <= 1e-10

    def test_constant_profile_fits_exactly(self):
        # kappa and tau are not separately identifiable from constant data;
        # the fit must still reproduce the profile and the ratio kappa/tau^2
        s = np.linspace(0.0, 1.0, 64)
        xi = np.full_like(s, 0.25)
        eta = np.zeros_like(s)
        fit = fit_normal_samples(s, xi, eta)
        assert fit.xi_residual <= 1e-10 and fit.eta_residual <= 1e-10
        assert fit.kappa0 / fit.tau0**2 == pytest.approx(0.25, abs=1e-6)

    def test_negative_tau_identified(self):
        s = np.linspace(0.0, 1.5, 151)
        kappa, tau = 2.0, -1.7
        c = (0.4, 0.2, -0.3, 0.6)
        xi, eta = self._reference_profile(s, kappa, tau, c)
        fit = fit_normal_samples(s, xi, eta)
        assert fit.tau0 == pytest.approx(tau, abs=1e-8)
        assert fit.kappa0 == pytest.approx(kappa, abs=1e-8)


class TestFitNormalComponents:
    def test_cosh_sinh_measured_components_do_not_fit(self):
        # beta = 1 fits the family but gamma = -s cannot; the admissible
        # graph-form geometry keeps real curves out of the family, so the
        # fit must report a visible misfit rather than fail
        fit = fit_normal_components(COSH_SINH, ORIGIN)
        assert fit.kappa0 == pytest.approx(1.0, abs=1e-9)
        assert fit.tau0 == pytest.approx(1.0, abs=1e-9)
        assert max(fit.xi_residual, fit.eta_residual) > 1e-2
        # whatever was fitted still satisfies the governing system exactly
        assert fit.ode_r1 <= 1e-8 and fit.ode_r2 <= 1e-8

    def test_varying_invariants_rejected(self):
        varying = curve_from_exprs("exp(s)", "s^2/2", 0.5, 1.5)
        with pytest.raises(NonConstantInvariants):
            fit_normal_components(varying, ORIGIN)

    def test_zero_torsion_rejected(self):
        with pytest.raises(ZeroTorsion):
            fit_normal_components(PARABOLA, ORIGIN)
