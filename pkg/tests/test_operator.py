"""Spectral operator on the periodic grid: algebraic identities and the
independent singular-integral / Green-function cross-checks."""

import numpy as np
import pytest

from frns.specfun import DomainError, FracParams
from frns.operator import (
    Field,
    Grid,
    GridMismatchError,
    apply_operator,
    apply_operator_singular,
    bessel_kernel,
    build_symbol,
    inner,
    norm_l2,
    operator_quadratic_form,
    solve_resolvent,
)


def make(n_dim=2, n=64, L=10.0, s=0.5, m=1.0):
    grid = Grid(n_dim, n, L)
    params = FracParams(s=s, m=m, n_dim=n_dim)
    return grid, params, build_symbol(grid, params)


class TestGridInvariants:
    def test_rejects_bad_sizes(self):
        with pytest.raises(DomainError):
            Grid(2, 100, 10.0)     # not a power of two
        with pytest.raises(DomainError):
            Grid(2, 16, 10.0)      # too small
        with pytest.raises(DomainError):
            Grid(2, 4096, 10.0)    # exceeds the desk-scale cap
        with pytest.raises(DomainError):
            Grid(1, 64, -1.0)

    def test_field_shape_and_finiteness(self):
        g = Grid(1, 64, 5.0)
        with pytest.raises(GridMismatchError):
            Field(grid=g, values=np.zeros(65))
        bad = np.zeros(64)
        bad[3] = np.nan
        with pytest.raises(ValueError):
            Field(grid=g, values=bad)

    def test_inner_product_weight(self):
        # h^N sum over a constant equals the box volume
        g = Grid(2, 64, 3.0)
        one = Field(grid=g, values=np.ones(g.shape))
        assert inner(one, one) == pytest.approx(6.0**2, rel=1e-14)
        assert norm_l2(one) == pytest.approx(6.0, rel=1e-14)


class TestSpectralIdentities:
    def test_fourier_mode_is_eigenfunction(self):
        grid, params, table = make()
        x, y = grid.coords()
        k = np.pi / grid.half_length * np.array([3.0, 5.0])
        u = Field(grid=grid, values=np.cos(k[0] * x + k[1] * y))
        Au = apply_operator(u, table)
        lam = (k @ k + params.m**2) ** params.s
        assert np.allclose(Au.values, lam * u.values, rtol=1e-12, atol=1e-12)

    def test_constant_eigenvalue_m2s(self):
        grid, params, table = make(s=0.4, m=2.0)
        u = Field(grid=grid, values=np.ones(grid.shape))
        Au = apply_operator(u, table)
        assert np.allclose(Au.values, 2.0 ** (2 * 0.4), rtol=1e-13)

    def test_linearity_and_self_adjointness(self):
        grid, params, table = make()
        rng = np.random.default_rng(7)
        u = Field(grid=grid, values=rng.standard_normal(grid.shape))
        v = Field(grid=grid, values=rng.standard_normal(grid.shape))
        a, b = 1.7, -0.3
        lin = apply_operator(
            Field(grid=grid, values=a * u.values + b * v.values), table
        )
        ref = a * apply_operator(u, table).values + b * apply_operator(v, table).values
        assert np.allclose(lin.values, ref, rtol=1e-12, atol=1e-12)
        lhs = inner(apply_operator(u, table), v)
        rhs = inner(u, apply_operator(v, table))
        assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_quadratic_form_positivity(self):
        # <Au, u> >= m^{2s} ||u||^2 since the symbol is bounded below
        grid, params, table = make(s=0.6, m=1.5)
        rng = np.random.default_rng(11)
        for _ in range(5):
            u = Field(grid=grid, values=rng.standard_normal(grid.shape))
            q = operator_quadratic_form(u, table)
            assert q >= 1.5 ** (2 * 0.6) * inner(u, u) * (1 - 1e-12)

    def test_quadratic_form_matches_inner(self):
        grid, params, table = make()
        rng = np.random.default_rng(3)
        u = Field(grid=grid, values=rng.standard_normal(grid.shape))
        assert operator_quadratic_form(u, table) == pytest.approx(
            inner(apply_operator(u, table), u), rel=1e-12
        )

    def test_mode_quadratic_form_value(self):
        # Q(cos kx) = (|k|^2 + m^2)^s Vol/2 for a resolved mode
        grid, params, table = make(n_dim=1, n=128, L=5.0, s=0.25)
        x = grid.coords()[0]
        k = 2.0 * np.pi / 10.0 * 4
        u = Field(grid=grid, values=np.cos(k * x))
        expected = (k**2 + 1.0) ** 0.25 * 10.0 / 2.0
        assert operator_quadratic_form(u, table) == pytest.approx(expected, rel=1e-12)

    def test_symbol_continuous_in_m(self):
        grid, p1, t1 = make(m=1.0)
        _, p2, t2 = make(m=1.0 + 1e-7)
        assert np.max(np.abs(t1.symbol - t2.symbol) / t1.symbol) < 1e-6


class TestResolvent:
    def test_round_trip(self):
        grid, params, table = make()
        rng = np.random.default_rng(5)
        mu = Field(grid=grid, values=rng.standard_normal(grid.shape))
        z = solve_resolvent(mu, table)
        back = apply_operator(z, table)
        err = norm_l2(Field(grid=grid, values=back.values - mu.values)) / norm_l2(mu)
        assert err < 1e-10

    def test_spike_approximates_green_function(self):
        # resolvent of a delta-like spike tracks G_{2s,m} away from the
        # origin (grid regularizes the singularity at r ~ h)
        grid = Grid(2, 256, 12.0)
        params = FracParams(s=0.5, m=1.0, n_dim=2)
        table = build_symbol(grid, params)
        spike = np.zeros(grid.shape)
        spike[0, 0] = 1.0 / grid.spacing**2  # unit mass at the origin index
        z = solve_resolvent(Field(grid=grid, values=np.fft.fftshift(spike)), table)
        r = grid.radii()
        sel = (r > 1.0) & (r < 5.0)
        ref = bessel_kernel(params, r[sel])
        rel = np.abs(z.values[sel] - ref) / ref
        assert np.median(rel) < 1e-2

    def test_green_function_positive_and_decaying(self):
        params = FracParams(s=0.4, m=1.0, n_dim=2)
        r = np.linspace(0.05, 12.0, 300)
        G = bessel_kernel(params, r)
        assert np.all(G > 0)
        # exponential decay rate for r >= 2: fit log G, slope < 0
        sel = r >= 2.0
        slope = np.polyfit(r[sel], np.log(G[sel]), 1)[0]
        assert slope < -0.9  # ~ -m with algebraic correction

    def test_green_function_singularity_exponent(self):
        # G ~ c r^{2s-N} as r -> 0
        params = FracParams(s=0.25, m=1.0, n_dim=1)
        r1, r2 = 1e-4, 2e-4
        ratio = bessel_kernel(params, r2) / bessel_kernel(params, r1)
        assert ratio == pytest.approx(2.0 ** (2 * 0.25 - 1), rel=1e-2)


class TestSingularIntegral:
    @pytest.mark.parametrize("s,tol", [(0.25, 5e-3), (0.4, 1e-2)])
    def test_matches_spectral_on_gaussian(self, s, tol):
        grid = Grid(1, 512, 20.0)
        params = FracParams(s=s, m=1.0, n_dim=1)
        table = build_symbol(grid, params)
        x = grid.coords()[0]
        u = Field(grid=grid, values=np.exp(-(x**2)))
        spec = apply_operator(u, table)
        sing = apply_operator_singular(u, params, truncation_radius=18.0)
        err = norm_l2(Field(grid=grid, values=spec.values - sing.values))
        assert err / norm_l2(spec) < tol

    def test_rejects_2d(self):
        grid = Grid(2, 32, 5.0)
        params = FracParams(s=0.25, m=1.0, n_dim=2)
        u = Field(grid=grid, values=np.zeros(grid.shape))
        with pytest.raises(DomainError):
            apply_operator_singular(u, params, truncation_radius=4.0)
