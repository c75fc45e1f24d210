"""Discrete (-Delta + m^2)^s on a uniform periodic grid.

The box [-L, L)^N stands in for R^N: decaying functions are truncated
periodically and the operator acts mode by mode through the symbol
(|k|^2 + m^2)^s.  A direct principal-value quadrature of the
singular-integral form is kept (1D only) as an independent cross-check
of the spectral path, and the resolvent / Bessel-kernel pair gives the
Green-function view.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .specfun import DomainError, FracParams, bessel_k, kernel_constants

MAX_TOTAL_POINTS = 2**22  # desk-scale cap


class GridMismatchError(ValueError):
    """Fields/tables built on different grids were combined."""


@dataclass(frozen=True)
class Grid:
    """Uniform periodic lattice on [-L, L)^N with 2^k points per axis."""

    n_dim: int
    points_per_dim: int
    half_length: float

    def __post_init__(self):
        if self.n_dim not in (1, 2):
            raise DomainError(f"n_dim must be 1 or 2, got {self.n_dim}")
        n = self.points_per_dim
        if n < 32 or (n & (n - 1)) != 0:
            raise DomainError(f"points_per_dim must be a power of two >= 32, got {n}")
        if not self.half_length > 0.0:
            raise DomainError("half_length must be positive")
        if n**self.n_dim > MAX_TOTAL_POINTS:
            raise DomainError(
                f"total points {n**self.n_dim} exceed desk-scale cap {MAX_TOTAL_POINTS}"
            )

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_length / self.points_per_dim

    @property
    def total_points(self) -> int:
        return self.points_per_dim**self.n_dim

    @property
    def shape(self) -> tuple:
        return (self.points_per_dim,) * self.n_dim

    def axis(self) -> np.ndarray:
        """1D coordinate axis, shared by every dimension."""
        n = self.points_per_dim
        return -self.half_length + self.spacing * np.arange(n)

    def coords(self) -> list:
        """Meshgrid coordinate arrays (ij indexing), one per dimension."""
        return list(np.meshgrid(*(self.axis(),) * self.n_dim, indexing="ij"))

    def radii(self, center=None) -> np.ndarray:
        """Distance from each grid point to `center` (default: origin)."""
        if center is None:
            center = (0.0,) * self.n_dim
        acc = np.zeros(self.shape)
        for c, x in zip(center, self.coords()):
            acc += (x - c) ** 2
        return np.sqrt(acc)

    def wavenumbers(self) -> list:
        """Meshgrid frequency arrays k_j = pi * integer / L per dimension."""
        k1 = 2.0 * np.pi * np.fft.fftfreq(self.points_per_dim, d=self.spacing)
        return list(np.meshgrid(*(k1,) * self.n_dim, indexing="ij"))

    def k_squared(self) -> np.ndarray:
        acc = np.zeros(self.shape)
        for k in self.wavenumbers():
            acc += k * k
        return acc


@dataclass(frozen=True)
class Field:
    """Real samples of a function on a Grid."""

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != self.grid.shape:
            raise GridMismatchError(
                f"values shape {vals.shape} does not match grid {self.grid.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("field contains non-finite values")
        object.__setattr__(self, "values", vals)

    def check_same_grid(self, other_grid: Grid):
        if self.grid != other_grid:
            raise GridMismatchError("operands live on different grids")


def inner(u: Field, v: Field) -> float:
    """Discrete L^2 inner product h^N sum(u v)."""
    u.check_same_grid(v.grid)
    return float(u.grid.spacing**u.grid.n_dim * np.sum(u.values * v.values))


def norm_l2(u: Field) -> float:
    return float(np.sqrt(max(inner(u, u), 0.0)))


@dataclass(frozen=True)
class KernelTable:
    """Precomputed symbol (|k|^2 + m^2)^s over the frequency lattice."""

    grid: Grid
    params: FracParams
    symbol: np.ndarray = field(repr=False)


def build_symbol(grid: Grid, params: FracParams) -> KernelTable:
    """Tabulate (|k|^2 + m^2)^s on the discrete frequency lattice."""
    if params.n_dim != grid.n_dim:
        raise GridMismatchError("params.n_dim does not match grid.n_dim")
    sym = (grid.k_squared() + params.m**2) ** params.s
    return KernelTable(grid=grid, params=params, symbol=sym)


def apply_operator(u: Field, table: KernelTable) -> Field:
    """Spectral application: inverse FFT of symbol * FFT(u).

    Linear and self-adjoint with respect to the discrete inner product;
    the quadratic form <Au, u> is the discrete H^s norm squared.
    """
    u.check_same_grid(table.grid)
    out = np.fft.ifftn(table.symbol * np.fft.fftn(u.values)).real
    return Field(grid=u.grid, values=out)


def operator_quadratic_form(u: Field, table: KernelTable) -> float:
    """<Au, u> = h^N/n^N sum_k symbol |u_hat|^2, computed in k-space."""
    u.check_same_grid(table.grid)
    g = u.grid
    uhat = np.fft.fftn(u.values)
    w = g.spacing**g.n_dim / g.total_points
    return float(w * np.sum(table.symbol * np.abs(uhat) ** 2))


def solve_resolvent(mu: Field, table: KernelTable) -> Field:
    """Solve (-Delta + m^2)^s z = mu by symbol division.

    The symbol is bounded below by m^(2s) > 0, so the solve is always
    well posed and apply_operator(z) recovers mu to round-off.
    """
    mu.check_same_grid(table.grid)
    out = np.fft.ifftn(np.fft.fftn(mu.values) / table.symbol).real
    return Field(grid=mu.grid, values=out)


def bessel_kernel(params: FracParams, r):
    """Green function G_{2s,m}(r) of (-Delta + m^2)^s at radius r > 0,

        G_{2s,m}(r) = m^((N-2s)/2) K_((N-2s)/2)(m r) r^((2s-N)/2)
                      / (2^((N+2s-2)/2) pi^(N/2) Gamma(s)).

    Positive, radially symmetric, ~ r^(2s-N) at the origin and
    exponentially decaying at infinity.
    """
    from scipy.special import gamma as Gamma

    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise DomainError("bessel_kernel is singular at r = 0; need r > 0")
    N, s, m = float(params.n_dim), params.s, params.m
    nu = (N - 2.0 * s) / 2.0
    with np.errstate(over="ignore", invalid="ignore"):
        val = (
            m**nu
            * bessel_k(nu, m * r)
            * r ** (-nu)
            / (2.0 ** ((N + 2.0 * s - 2.0) / 2.0) * np.pi ** (N / 2.0) * Gamma(s))
        )
    val = np.where(np.isfinite(val), val, 0.0)
    if val.ndim == 0:
        return float(val)
    return val


def apply_operator_singular(
    u: Field, params: FracParams, truncation_radius: float
) -> Field:
    """Principal-value quadrature of the singular-integral form (1D only),

        m^(2s) u(x) + C(N,s) m^((N+2s)/2)
            P.V. int (u(x)-u(y)) K_nu(m|x-y|) / |x-y|^nu dy,

    with nu = (N+2s)/2.  The singularity is handled by a symmetric
    exclusion window of one grid cell (the odd part of the integrand
    cancels) plus an analytic second-order correction for the even
    part, and the integral is truncated at `truncation_radius`.

    Cross-check path only: the spectral application is the production
    route and the agreement contract is ~1e-2 in relative L^2.
    """
    g = u.grid
    if g.n_dim != 1:
        raise DomainError("singular-integral cross-check supports n_dim = 1 only")
    if params.n_dim != 1:
        raise GridMismatchError("params.n_dim must be 1")
    s, m = params.s, params.m
    h = g.spacing
    nu = (1.0 + 2.0 * s) / 2.0
    consts = kernel_constants(params)
    pref = consts.C_Ns * m**nu

    n = g.points_per_dim
    n_off = min(int(truncation_radius / h), n // 2 - 1)
    vals = u.values
    out = m ** (2.0 * s) * vals.copy()

    # P.V. sum over symmetric offsets, one-cell exclusion around r = 0.
    offsets = np.arange(1, n_off + 1)
    r = offsets * h
    w = bessel_k(nu, m * r) / r**nu
    acc = np.zeros_like(vals)
    for j, wj in zip(offsets, w):
        acc += (2.0 * vals - np.roll(vals, j) - np.roll(vals, -j)) * wj
    out += pref * acc * h

    # Even-part correction for the excluded cell:
    # u(x)-u(x+r)+u(x)-u(x-r) ~ -u''(x) r^2, integrated against the kernel.
    cell, _ = quad(lambda rr: rr**2 * bessel_k(nu, m * rr) / rr**nu, 0.0, h)
    d2u = (np.roll(vals, -1) - 2.0 * vals + np.roll(vals, 1)) / h**2
    out += pref * (-d2u) * cell

    return Field(grid=g, values=out)
