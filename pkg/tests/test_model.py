"""Model layer: potential family, penalized nonlinearity, threshold root,
energy and its gradient."""

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.optimize import bisect

from frns.specfun import FracParams
from frns.operator import Field, Grid, build_symbol
from frns.model import (
    AssumptionError,
    ModelConfig,
    NonlinearitySpec,
    PenalizationSpec,
    PotentialSpec,
    G_eval,
    energy,
    energy_gradient,
    g_eval,
    lambda_mask,
    potential_on_grid,
    solve_penalization_threshold,
    validate_config,
)


FRAC = FracParams(s=0.5, m=1.0, n_dim=2)
NL = NonlinearitySpec(lam=1.0, p=3.0, ar_theta=3.0, q=3.5)
POT = PotentialSpec(
    V1=0.2,
    V0=0.2,
    M_points=((-1.0, 0.0), (1.0, 0.0)),
    lambda_center=(0.0, 0.0),
    lambda_radius=2.5,
)


def default_config(eps=0.25, kappa=10.0):
    a = solve_penalization_threshold(FRAC, NL, POT.V1, kappa)
    return ModelConfig(frac=FRAC, eps=eps, potential=POT, nonlin=NL,
                       pen=PenalizationSpec(kappa=kappa, a=a))


class TestPotential:
    def test_wells_reach_the_depth(self):
        for mp in POT.M_points:
            assert POT(np.array([mp[0]]), np.array([mp[1]]))[0] == pytest.approx(
                -0.2, abs=1e-14
            )

    def test_bounded_between_minus_v0_and_v1_minus_v0(self):
        xs = np.linspace(-6, 6, 121)
        X, Y = np.meshgrid(xs, xs)
        v = POT(X, Y)
        assert np.min(v) >= -0.2 - 1e-14
        assert np.max(v) <= -0.2 + POT.barrier + 1e-14

    def test_lambda_membership(self):
        assert POT.in_lambda(np.array([0.0]), np.array([0.0]))[0]
        assert not POT.in_lambda(np.array([3.0]), np.array([0.0]))[0]

    def test_validate_accepts_default(self):
        validate_config(default_config())

    def test_validate_rejects_well_outside_lambda(self):
        bad_pot = PotentialSpec(
            V1=0.2, V0=0.2, M_points=((4.0, 0.0),),
            lambda_center=(0.0, 0.0), lambda_radius=2.5,
        )
        a = solve_penalization_threshold(FRAC, NL, 0.2, 10.0)
        with pytest.raises(AssumptionError):
            cfg = ModelConfig(frac=FRAC, eps=0.25, potential=bad_pot, nonlin=NL,
                              pen=PenalizationSpec(kappa=10.0, a=a))
            validate_config(cfg)

    def test_validate_rejects_depth_at_or_above_m2s(self):
        bad_pot = PotentialSpec(
            V1=1.0, V0=1.0, M_points=((-1.0, 0.0),),
            lambda_center=(0.0, 0.0), lambda_radius=2.5,
        )
        with pytest.raises(AssumptionError):
            a = solve_penalization_threshold(FRAC, NL, 1.0, 10.0)
            cfg = ModelConfig(frac=FRAC, eps=0.25, potential=bad_pot, nonlin=NL,
                              pen=PenalizationSpec(kappa=10.0, a=a))
            validate_config(cfg)


class TestPenalizationThreshold:
    def test_root_by_independent_bisection(self):
        # f(a) + a^{2*-1} = (V1/kappa) a, smallest positive root
        kappa, V1 = 10.0, 0.2
        a = solve_penalization_threshold(FRAC, NL, V1, kappa)

        def mismatch(t):
            return NL.f(t) + t ** (FRAC.two_star - 1.0) - (V1 / kappa) * t

        ref = bisect(mismatch, 1e-12, 1.0, xtol=1e-15)
        assert a == pytest.approx(ref, rel=1e-9)
        assert abs(mismatch(a)) < 1e-12

    def test_root_decreases_with_kappa(self):
        roots = [solve_penalization_threshold(FRAC, NL, 0.2, k)
                 for k in (5.0, 10.0, 40.0)]
        assert roots[0] > roots[1] > roots[2] > 0

    def test_pure_power_closed_form(self):
        # with f = lam t^{p-1}, p = 3, the defining equation
        # lam a^2 + a^3 = (V1/kappa) a reduces to a quadratic in a
        frac = FracParams(s=0.5, m=1.0, n_dim=2)
        nl = NonlinearitySpec(lam=2.0, p=3.0, ar_theta=3.0, q=3.5)
        a = solve_penalization_threshold(frac, nl, 0.3, 8.0)
        lam, ratio = 2.0, 0.3 / 8.0
        root = 0.5 * (-lam + np.sqrt(lam * lam + 4.0 * ratio))
        assert a == pytest.approx(root, rel=1e-12)


class TestPenalizedNonlinearity:
    def test_g_matches_f_inside(self):
        cfg = default_config()
        t = np.linspace(0.0, 2.0, 50)
        inside = np.ones_like(t, dtype=bool)
        ref = NL.f(t) + np.maximum(t, 0.0) ** 3
        assert np.allclose(g_eval(cfg, inside, t), ref, rtol=1e-14)

    def test_g_linear_above_a_outside(self):
        cfg = default_config()
        a = cfg.pen.a
        t = np.array([2 * a, 10 * a, 1.0])
        outside = np.zeros_like(t, dtype=bool)
        ref = (cfg.potential.V1 / cfg.pen.kappa) * t
        assert np.allclose(g_eval(cfg, outside, t), ref, rtol=1e-14)

    def test_g_continuous_at_seam(self):
        cfg = default_config()
        a = cfg.pen.a
        outside = np.zeros(1, dtype=bool)
        lo = g_eval(cfg, outside, np.array([a * (1 - 1e-9)]))[0]
        hi = g_eval(cfg, outside, np.array([a * (1 + 1e-9)]))[0]
        assert hi == pytest.approx(lo, rel=1e-6)

    def test_g_vanishes_for_nonpositive(self):
        cfg = default_config()
        t = np.array([-1.0, -1e-8, 0.0])
        for mask in (np.ones_like(t, dtype=bool), np.zeros_like(t, dtype=bool)):
            assert np.all(g_eval(cfg, mask, t) == 0.0)

    def test_g_over_t_nondecreasing(self):
        # (g4): g(x, t)/t nondecreasing in t > 0
        cfg = default_config()
        t = np.geomspace(1e-6, 10.0, 400)
        for mask_val in (True, False):
            mask = np.full_like(t, mask_val, dtype=bool)
            ratio = g_eval(cfg, mask, t) / t
            assert np.all(np.diff(ratio) >= -1e-14)

    def test_g_bounded_by_penalty_slope_outside(self):
        # (g2): g <= (V1/kappa) t outside Lambda for all t
        cfg = default_config()
        t = np.geomspace(1e-8, 100.0, 300)
        outside = np.zeros_like(t, dtype=bool)
        bound = (cfg.potential.V1 / cfg.pen.kappa) * t
        assert np.all(g_eval(cfg, outside, t) <= bound * (1 + 1e-12))

    def test_G_is_primitive_of_g(self):
        cfg = default_config()
        for mask_val in (True, False):
            for t_end in (0.5 * cfg.pen.a, 3.0 * cfg.pen.a, 1.5):
                mask = np.array([mask_val])
                ref, err = quad(
                    lambda tt: g_eval(cfg, mask, np.array([tt]))[0], 0.0, t_end,
                    points=[cfg.pen.a], limit=200,
                )
                assert err < 1e-12
                got = G_eval(cfg, mask, np.array([t_end]))[0]
                assert got == pytest.approx(ref, rel=1e-10)


class TestEnergyAndGradient:
    def test_gradient_matches_directional_derivative(self):
        cfg = default_config()
        grid = Grid(2, 64, 12.0)
        table = build_symbol(grid, cfg.frac)
        rng = np.random.default_rng(42)
        for _ in range(5):
            u = Field(grid=grid, values=np.abs(rng.standard_normal(grid.shape)))
            v = rng.standard_normal(grid.shape)
            d = 1e-6
            up = Field(grid=grid, values=u.values + d * v)
            um = Field(grid=grid, values=u.values - d * v)
            fd = (energy(cfg, up, table) - energy(cfg, um, table)) / (2 * d)
            grad = energy_gradient(cfg, u, table)
            pairing = grid.spacing**2 * np.sum(grad.values * v)
            assert pairing == pytest.approx(fd, rel=1e-6)

    def test_mountain_pass_geometry_along_a_ray(self):
        # J(t u) rises from 0, peaks, then goes to -infinity
        cfg = default_config()
        grid = Grid(2, 64, 12.0)
        table = build_symbol(grid, cfg.frac)
        r2 = grid.radii(center=(-4.0, 0.0)) ** 2
        u = Field(grid=grid, values=np.exp(-r2 / 2.0))
        ts = np.linspace(0.01, 8.0, 120)
        vals = [energy(cfg, Field(grid=grid, values=t * u.values), table)
                for t in ts]
        vals = np.array(vals)
        assert vals[0] > 0.0
        assert np.max(vals) > vals[0]
        assert vals[-1] < 0.0

    def test_potential_on_grid_scales_with_eps(self):
        cfg = default_config(eps=0.5)
        # h = 0.25 so the blown-up well at x = -2 lands exactly on the lattice
        grid = Grid(2, 64, 8.0)
        V = potential_on_grid(cfg, grid)
        # the well at (-1, 0) appears at x = -2 in blown-up coordinates
        ax = grid.axis()
        i = np.argmin(np.abs(ax + 2.0))
        j = np.argmin(np.abs(ax))
        assert V[i, j] == pytest.approx(-0.2, abs=1e-10)

    def test_lambda_mask_radius(self):
        cfg = default_config(eps=0.5)
        grid = Grid(2, 64, 10.0)
        mask = lambda_mask(cfg, grid)
        r = grid.radii()
        assert np.all(mask[r < 4.9])
        assert not np.any(mask[r > 5.1])
