"""Command-line front end: config ingestion, experiment orchestration and
artifact emission (CSV tables, minimal SVG plots).

Config files are flat ``key = value`` text with dotted sections (see
docs/config.md); unknown keys are hard errors so misconfiguration fails
loudly.  Exit codes: 0 pass, 1 numerical failure, 2 invalid parameters,
3 parse error.
"""

import argparse
import csv
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .specfun import (
    DomainError,
    FracParams,
    kappa_s,
    sigma_s,
    sobolev_trace_constant,
    theta_profile,
    theta_profile_deriv,
)
from .operator import (
    Field,
    Grid,
    apply_operator,
    bessel_kernel,
    build_symbol,
    inner,
    norm_l2,
    solve_resolvent,
)
from .extension import conormal_derivative, extend
from .model import (
    AssumptionError,
    ModelConfig,
    NonlinearitySpec,
    PenalizationSpec,
    PotentialSpec,
    solve_penalization_threshold,
    validate_config,
)
from .solver import (
    AutonomousConfig,
    Tolerances,
    autonomous_ground_state,
    decay_fit,
    dist_to_wells,
    estimate_s_star,
    concentration_sweep,
    grid_for_eps,
    ground_state,
    mp_threshold,
    verify_solution_region,
)

EXIT_PASS = 0
EXIT_NUMERICAL = 1
EXIT_INVALID = 2
EXIT_PARSE = 3

# test hook: when set, the kernel suite uses this in place of sigma_s
_sigma_override = None


class ConfigError(Exception):
    """Parse-level problem in a config file; carries the offending line."""

    def __init__(self, message, line_no=None):
        self.line_no = line_no
        where = f"line {line_no}: " if line_no is not None else ""
        super().__init__(where + message)


# ---------------------------------------------------------------------------
# config schema and parsing

# key -> (kind, required, default); kinds: float, int, point_list, float_list,
# point (a single coordinate tuple)
_SCHEMA = {
    "frac.s": ("float", True, None),
    "frac.m": ("float", True, None),
    "frac.n_dim": ("int", True, None),
    "eps": ("float", True, None),
    "potential.V1": ("float", True, None),
    "potential.V0": ("float", True, None),
    "potential.M_points": ("point_list", True, None),
    "potential.lambda_center": ("point", True, None),
    "potential.lambda_radius": ("float", True, None),
    "nonlin.lam": ("float", True, None),
    "nonlin.p": ("float", True, None),
    "nonlin.ar_theta": ("float", True, None),
    "nonlin.q": ("float", True, None),
    "pen.kappa": ("float", True, None),
    "grid.points_per_dim": ("int", False, 128),
    "grid.half_length": ("float", False, None),
    "solver.grad_tol": ("float", False, 1e-6),
    "solver.nehari_tol": ("float", False, 1e-10),
    "solver.max_iterations": ("int", False, 20000),
    "solver.restarts": ("int", False, 3),
    "sweep.eps": ("float_list", False, (0.5, 0.25, 0.1)),
    "sweep.points_per_dim": ("int", False, 256),
    "sweep.jobs": ("int", False, 0),  # 0 = machine cores
}


def _parse_scalar(kind, text, line_no):
    try:
        if kind == "float":
            return float(text)
        if kind == "int":
            val = float(text)
            if val != int(val):
                raise ValueError
            return int(val)
    except ValueError:
        raise ConfigError(f"cannot parse {text!r} as {kind}", line_no)
    raise ConfigError(f"unknown value kind {kind!r}", line_no)


def _parse_value(kind, text, line_no):
    if kind in ("float", "int"):
        return _parse_scalar(kind, text, line_no)
    if kind == "float_list":
        parts = [p for p in text.replace(",", " ").split() if p]
        if not parts:
            raise ConfigError("empty list", line_no)
        return tuple(_parse_scalar("float", p, line_no) for p in parts)
    if kind == "point":
        return tuple(
            _parse_scalar("float", p, line_no)
            for p in text.replace(",", " ").split()
        )
    if kind == "point_list":
        points = []
        for chunk in text.split(";"):
            coords = [p for p in chunk.replace(",", " ").split() if p]
            if not coords:
                raise ConfigError("empty point in list", line_no)
            points.append(tuple(_parse_scalar("float", p, line_no) for p in coords))
        return tuple(points)
    raise ConfigError(f"unknown value kind {kind!r}", line_no)


def load_config(path):
    """Parse a flat key-value config file against the schema.

    Returns a dict with every schema key present (defaults filled in).
    Unknown keys, duplicate keys, syntax problems and missing required
    keys raise ConfigError.
    """
    raw = {}
    try:
        with open(path, "r", encoding="utf-8") as f:
            lines = f.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}")
    for i, line in enumerate(lines, start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"expected 'key = value', got {stripped!r}", i)
        key, _, value = stripped.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _SCHEMA:
            raise ConfigError(f"unknown key {key!r}", i)
        if key in raw:
            raise ConfigError(f"duplicate key {key!r}", i)
        if not value:
            raise ConfigError(f"empty value for {key!r}", i)
        raw[key] = _parse_value(_SCHEMA[key][0], value, i)
    for key, (_, required, default) in _SCHEMA.items():
        if key not in raw:
            if required:
                raise ConfigError(f"missing required key {key!r}")
            raw[key] = default
    return raw


def config_hash(raw) -> str:
    """Hex digest of the canonicalized config (sorted key = repr lines)."""
    canon = "\n".join(f"{k} = {raw[k]!r}" for k in sorted(raw))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class RunSettings:
    """Everything beyond the ModelConfig that a run needs."""

    points_per_dim: int
    half_length: float  # 0 = derive from Lambda via grid_for_eps
    tolerances: Tolerances
    restarts: int
    sweep_eps: tuple
    sweep_points_per_dim: int
    sweep_jobs: int


def build_config(raw):
    """Raw schema dict -> (ModelConfig, RunSettings).

    Semantic violations surface as AssumptionError / DomainError from
    the model layer (exit code 2 territory).
    """
    frac = FracParams(s=raw["frac.s"], m=raw["frac.m"], n_dim=raw["frac.n_dim"])
    n = frac.n_dim
    for key in ("potential.lambda_center",):
        if len(raw[key]) != n:
            raise AssumptionError("(V2)", f"{key} must have {n} coordinates")
    for pnt in raw["potential.M_points"]:
        if len(pnt) != n:
            raise AssumptionError("(V2)", f"well {pnt} must have {n} coordinates")
    nonlin = NonlinearitySpec(
        lam=raw["nonlin.lam"], p=raw["nonlin.p"],
        ar_theta=raw["nonlin.ar_theta"], q=raw["nonlin.q"],
    )
    pot = PotentialSpec(
        V1=raw["potential.V1"], V0=raw["potential.V0"],
        M_points=raw["potential.M_points"],
        lambda_center=raw["potential.lambda_center"],
        lambda_radius=raw["potential.lambda_radius"],
    )
    a = solve_penalization_threshold(frac, nonlin, pot.V1, raw["pen.kappa"])
    cfg = ModelConfig(
        frac=frac, eps=raw["eps"], potential=pot, nonlin=nonlin,
        pen=PenalizationSpec(kappa=raw["pen.kappa"], a=a),
    )
    settings = RunSettings(
        points_per_dim=raw["grid.points_per_dim"],
        half_length=raw["grid.half_length"] or 0.0,
        tolerances=Tolerances(
            grad=raw["solver.grad_tol"],
            nehari=raw["solver.nehari_tol"],
            max_iterations=raw["solver.max_iterations"],
        ),
        restarts=raw["solver.restarts"],
        sweep_eps=raw["sweep.eps"],
        sweep_points_per_dim=raw["sweep.points_per_dim"],
        sweep_jobs=raw["sweep.jobs"] or (os.cpu_count() or 1),
    )
    return cfg, settings


def _grid_for(cfg, settings) -> Grid:
    if settings.half_length > 0.0:
        return Grid(cfg.frac.n_dim, settings.points_per_dim, settings.half_length)
    return grid_for_eps(cfg, cfg.eps, settings.points_per_dim)


# ---------------------------------------------------------------------------
# artifact emission

def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.17g}"
    return str(value)


def write_csv(path, header, rows, cfg_hash):
    """RFC-4180 CSV with a leading config-hash comment line.

    Floats carry 17 significant digits so reruns are bit-comparable.
    """
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(f"# config-hash: {cfg_hash}\r\n")
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def write_manifest(out_dir, cfg_hash, seed, outputs):
    manifest = {
        "config_hash": cfg_hash,
        "seed": int(seed),
        "version": __version__,
        "outputs": sorted(outputs),
    }
    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def write_svg(path, xs, ys, title, xlabel, ylabel):
    """Minimal SVG 1.1 line plot: axes, polyline, labels.  No dependencies;
    figures are a convenience, the CSVs are the contract."""
    W, H = 640, 440
    ml, mr, mt, mb = 70, 20, 40, 50
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    ok = np.isfinite(xs) & np.isfinite(ys)
    xs, ys = xs[ok], ys[ok]
    if xs.size == 0:
        xs, ys = np.array([0.0, 1.0]), np.array([0.0, 0.0])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    def px(x):
        return ml + (x - x0) / (x1 - x0) * (W - ml - mr)

    def py(y):
        return H - mb - (y - y0) / (y1 - y0) * (H - mt - mb)

    pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W / 2:.0f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{title}</text>',
        f'<line x1="{ml}" y1="{H - mb}" x2="{W - mr}" y2="{H - mb}" '
        'stroke="black" stroke-width="1"/>',
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{H - mb}" '
        'stroke="black" stroke-width="1"/>',
    ]
    for frac_pos in (0.0, 0.5, 1.0):
        xv = x0 + frac_pos * (x1 - x0)
        yv = y0 + frac_pos * (y1 - y0)
        lines.append(
            f'<text x="{px(xv):.1f}" y="{H - mb + 18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{xv:.4g}</text>'
        )
        lines.append(
            f'<text x="{ml - 8}" y="{py(yv) + 4:.1f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{yv:.4g}</text>'
        )
    lines.append(
        f'<text x="{(ml + W - mr) / 2:.0f}" y="{H - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{xlabel}</text>'
    )
    lines.append(
        f'<text x="16" y="{(mt + H - mb) / 2:.0f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13" '
        f'transform="rotate(-90 16 {(mt + H - mb) / 2:.0f})">{ylabel}</text>'
    )
    lines.append(
        f'<polyline points="{pts}" fill="none" stroke="#1f77b4" stroke-width="1.5"/>'
    )
    lines.append("</svg>")
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------------------
# commands

def cmd_validate(args) -> int:
    raw = load_config(args.config)
    cfg, _ = build_config(raw)
    validate_config(cfg)
    for name in ("(V1)", "(V2)", "(f2)", "kappa bound", "threshold a"):
        print(f"verified {name}")
    print(f"config-hash {config_hash(raw)}")
    return EXIT_PASS


def _kernel_checks(cfg):
    """(name, computed, expected, tolerance) rows for kernels.csv.

    Each check passes when |computed - expected| <= tolerance; the
    tolerances are absolute on the stated quantity.
    """
    frac = cfg.frac
    s, m, N = frac.s, frac.m, frac.n_dim
    sig = _sigma_override if _sigma_override is not None else sigma_s(s)
    checks = []

    # theta(r) = 1 - O(r^(2s)); probe where the correction is ~1e-8
    r0 = 1e-8 ** (1.0 / (2.0 * s))
    checks.append(("theta_at_zero", float(theta_profile(s, r0)), 1.0, 1e-6))
    checks.append(
        ("theta_half_exponential", float(theta_profile(0.5, 1.0)), float(np.exp(-1.0)), 1e-10)
    )

    # ODE residual theta'' + (1-2s)/y theta' = theta (profile with m = 1)
    r = np.linspace(0.2, 6.0, 40)
    h = 1e-5
    d2 = (theta_profile(s, r + h) - 2.0 * theta_profile(s, r) + theta_profile(s, r - h)) / h**2
    resid = d2 + (1.0 - 2.0 * s) / r * theta_profile_deriv(s, r) - theta_profile(s, r)
    checks.append(("theta_ode_residual", float(np.max(np.abs(resid))), 0.0, 1e-4))

    checks.append(("kappa_s_equals_sigma_s", float(kappa_s(s)), float(sig), 1e-6))

    # Poisson kernel mass: extension of a constant trace is theta(m y)
    grid = Grid(N, 64, 10.0)
    const = Field(grid=grid, values=np.ones(grid.shape))
    stack = extend(const, frac)
    mass_err = max(
        float(np.max(np.abs(stack.slabs[j] - theta_profile(s, m * y))))
        for j, y in enumerate(stack.y_levels)
    )
    checks.append(("poisson_kernel_mass", mass_err, 0.0, 1e-6))

    # conormal derivative of the extension reproduces sigma_s * A u
    table = build_symbol(grid, frac)
    bump = Field(grid=grid, values=np.exp(-grid.radii() ** 2))
    flux, _ = conormal_derivative(extend(bump, frac), frac)
    target = sig * apply_operator(bump, table).values
    rel = float(
        np.sqrt(np.sum((flux.values - target) ** 2) / np.sum(target**2))
    )
    checks.append(("conormal_vs_operator", rel, 0.0, 1e-2))

    # resolvent round trip: A (A^{-1} mu) = mu
    mu = Field(grid=grid, values=np.cos(np.pi * grid.coords()[0] / grid.half_length))
    back = apply_operator(solve_resolvent(mu, table), table)
    checks.append(
        ("resolvent_round_trip", float(np.max(np.abs(back.values - mu.values))), 0.0, 1e-10)
    )

    # Green kernel positivity on (0, 6]
    rr = np.linspace(0.25, 6.0, 24)
    gmin = float(np.min(bessel_kernel(frac, rr)))
    checks.append(("green_kernel_min_positive", min(gmin, 0.0), 0.0, 0.0))

    return checks


def cmd_kernels(args) -> int:
    raw = load_config(args.config)
    cfg, _ = build_config(raw)
    cfg_hash = config_hash(raw)
    os.makedirs(args.out, exist_ok=True)
    rows = []
    all_pass = True
    for name, computed, expected, tol in _kernel_checks(cfg):
        ok = abs(computed - expected) <= tol
        all_pass = all_pass and ok
        rows.append((name, computed, expected, tol, ok))
        print(f"{'pass' if ok else 'FAIL'} {name}: {computed:.6g} vs {expected:.6g}")
    path = os.path.join(args.out, "kernels.csv")
    write_csv(path, ("check", "computed", "expected", "tolerance", "pass"), rows, cfg_hash)
    write_manifest(args.out, cfg_hash, args.seed, [path])
    return EXIT_PASS if all_pass else EXIT_NUMERICAL


def _radial_envelope(result):
    """Shell envelope (2h bins) of the field about its argmax."""
    g = result.field.grid
    r = g.radii(center=result.argmax_point).ravel()
    v = result.field.values.ravel()
    width = 2.0 * g.spacing
    bins = np.floor(r / width).astype(int)
    n_bins = bins.max() + 1
    env = np.full(n_bins, -np.inf)
    np.maximum.at(env, bins, v)
    radii = (np.arange(n_bins) + 0.5) * width
    ok = env > 0.0
    return radii[ok], env[ok]


def cmd_solve(args) -> int:
    raw = load_config(args.config)
    cfg, settings = build_config(raw)
    cfg_hash = config_hash(raw)
    os.makedirs(args.out, exist_ok=True)
    grid = _grid_for(cfg, settings)
    res = ground_state(
        cfg, grid, tolerances=settings.tolerances,
        restarts=settings.restarts, seed=args.seed,
    )
    region = verify_solution_region(res, cfg)
    try:
        fit = decay_fit(res)
    except (DomainError, ValueError):
        fit = {"C1": float("nan"), "C2": float("nan"), "r_squared": float("nan"),
               "pointwise_bound_ok": False}

    outputs = []
    coords = [c.ravel() for c in grid.coords()]
    axis_names = ["x", "y"][: grid.n_dim]
    sol_rows = zip(*coords, res.field.values.ravel())
    sol_path = os.path.join(args.out, "solution.csv")
    write_csv(sol_path, tuple(axis_names) + ("u",), sol_rows, cfg_hash)
    outputs.append(sol_path)

    diag_header = (
        ("energy", "c_star", "nehari_residual", "grad_residual")
        + tuple(f"argmax_{a}" for a in axis_names)
        + ("sup_norm", "iterations", "converged",
           "max_outside_lambda", "a_threshold", "below_threshold",
           "decay_C1", "decay_C2", "decay_r_squared", "decay_bound_ok")
    )
    diag_row = (
        (res.energy, mp_threshold(cfg), res.nehari_residual, res.grad_residual)
        + tuple(res.argmax_point)
        + (res.sup_norm, res.iterations, res.converged,
           region["max_outside_lambda"], region["a_threshold"], region["below_threshold"],
           fit["C1"], fit["C2"], fit["r_squared"], fit["pointwise_bound_ok"])
    )
    diag_path = os.path.join(args.out, "diagnostics.csv")
    write_csv(diag_path, diag_header, [diag_row], cfg_hash)
    outputs.append(diag_path)

    radii, env = _radial_envelope(res)
    svg_path = os.path.join(args.out, "profile.svg")
    write_svg(svg_path, radii, np.log10(env), "radial profile",
              "r = |x - argmax|", "log10 shell max of u")
    outputs.append(svg_path)

    outputs.append(write_manifest(args.out, cfg_hash, args.seed, outputs))
    status = "converged" if res.converged else "NOT CONVERGED"
    print(f"{status}: energy {res.energy:.10g}, c_star {mp_threshold(cfg):.10g}, "
          f"iterations {res.iterations}")
    return EXIT_PASS if res.converged else EXIT_NUMERICAL


def cmd_sweep(args) -> int:
    raw = load_config(args.config)
    cfg, settings = build_config(raw)
    cfg_hash = config_hash(raw)
    eps_list = tuple(args.eps) if args.eps else settings.sweep_eps
    if len(eps_list) < 3:
        print("sweep needs at least 3 eps values", file=sys.stderr)
        return EXIT_INVALID
    if any(e <= 0 for e in eps_list):
        print("eps values must be positive", file=sys.stderr)
        return EXIT_INVALID
    os.makedirs(args.out, exist_ok=True)
    jobs = args.jobs if args.jobs else settings.sweep_jobs

    # eps-independent reference level d at constant potential -V0
    auto = AutonomousConfig(mu=-cfg.potential.V0, frac=cfg.frac, nonlin=cfg.nonlin)
    d_grid = Grid(cfg.frac.n_dim, min(settings.sweep_points_per_dim, 128), 20.0 / cfg.frac.m)
    d_res = autonomous_ground_state(
        auto, d_grid, tolerances=settings.tolerances,
        restarts=settings.restarts, seed=args.seed,
    )

    rows = concentration_sweep(
        cfg, eps_list, points_per_dim=settings.sweep_points_per_dim,
        tolerances=settings.tolerances, restarts=settings.restarts,
        seed=args.seed, jobs=jobs,
    )
    axis_names = ["x", "y"][: cfg.frac.n_dim]
    header = (
        ("eps", "energy", "c_star", "d_V0_estimate")
        + tuple(f"argmax_{a}" for a in axis_names)
        + ("dist_to_M_rescaled", "decay_C2", "max_outside_Lambda",
           "a_threshold", "converged")
    )
    out_rows = []
    any_fail = False
    for row in rows:
        if row.get("error"):
            any_fail = True
            out_rows.append(
                (row["eps"], float("nan"), float("nan"), d_res.energy)
                + (float("nan"),) * len(axis_names)
                + (float("nan"), float("nan"), float("nan"), float("nan"), False)
            )
            print(f"eps {row['eps']}: FAILED ({row['error']})")
            continue
        any_fail = any_fail or not row["converged"]
        out_rows.append(
            (row["eps"], row["energy"], row["c_star"], d_res.energy)
            + tuple(row["argmax"])
            + (row["dist_to_M_rescaled"], row["decay_C2"],
               row["max_outside_lambda"], row["a_threshold"], row["converged"])
        )
        print(f"eps {row['eps']}: energy {row['energy']:.8g}, "
              f"dist_to_M(rescaled) {row['dist_to_M_rescaled']:.4g}")
    path = os.path.join(args.out, "sweep.csv")
    write_csv(path, header, out_rows, cfg_hash)
    outputs = [path]
    finite = [(r[0], r[len(header) - 5]) for r in out_rows if np.isfinite(r[len(header) - 5])]
    svg_path = os.path.join(args.out, "concentration.svg")
    write_svg(
        svg_path,
        [p[0] for p in finite], [p[1] for p in finite],
        "concentration at the wells", "eps", "dist(eps x_max, M)",
    )
    outputs.append(svg_path)
    outputs.append(write_manifest(args.out, cfg_hash, args.seed, outputs))
    return EXIT_NUMERICAL if any_fail else EXIT_PASS


def cmd_sstar(args) -> int:
    raw = load_config(args.config)
    cfg_hash = config_hash(raw)
    frac = FracParams(s=raw["frac.s"], m=raw["frac.m"], n_dim=raw["frac.n_dim"])
    os.makedirs(args.out, exist_ok=True)
    out = estimate_s_star(frac)
    formula = out["formula"]
    rows = [
        (rho, q, formula) for rho, q in zip(out["rho_values"], out["quotients"])
    ]
    path = os.path.join(args.out, "sstar.csv")
    write_csv(path, ("rho", "rayleigh_quotient", "formula_value"), rows, cfg_hash)
    write_manifest(args.out, cfg_hash, args.seed, [path])
    rel = abs(out["estimate"] - formula) / formula
    print(f"estimate {out['estimate']:.10g}, formula {formula:.10g}, "
          f"relative error {rel:.3g}")
    return EXIT_PASS if rel < 0.05 else EXIT_NUMERICAL


# ---------------------------------------------------------------------------
# entry point

def _build_parser():
    parser = argparse.ArgumentParser(
        prog="frns",
        description="Ground states and kernel diagnostics for (-Delta + m^2)^s.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn, needs in (
        ("validate", cmd_validate, ()),
        ("kernels", cmd_kernels, ("out",)),
        ("solve", cmd_solve, ("out",)),
        ("sweep", cmd_sweep, ("out", "eps", "jobs")),
        ("sstar", cmd_sstar, ("out",)),
    ):
        p = sub.add_parser(name)
        p.set_defaults(fn=fn)
        p.add_argument("--config", required=True, metavar="PATH")
        p.add_argument("--seed", type=int, default=0, metavar="N")
        if "out" in needs:
            p.add_argument("--out", default="out", metavar="DIR")
        if "eps" in needs:
            p.add_argument("--eps", type=float, nargs="+", default=None, metavar="LIST")
        if "jobs" in needs:
            p.add_argument("--jobs", type=int, default=0, metavar="N")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (AssumptionError, DomainError) as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ArithmeticError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
