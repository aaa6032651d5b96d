"""Command-line front end for outage analysis.

Three subcommands over a flat ``key = value`` config file:

* ``point``    — classify one scenario and report bounds + both oracles.
* ``sweep``    — CSV curve over one axis (``d``, ``p_t`` or ``theta_3db``).
* ``optimize`` — closed-form optimal beamwidth report, optionally
  re-derived on a grid (``--verify``).

Sweep output is deterministic for a fixed config: the Monte Carlo seed
of row ``i`` is ``mc_seed + i``, so identical runs produce byte-identical
CSV.  Grid rows are evaluated concurrently but always emitted in axis
order.

Exit codes: 0 success, 2 config error, 3 numerical failure (quadrature
tolerance not met).
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable

import numpy as np

from .channel import (
    SMALL_BEAM_LIMIT,
    AntennaConfig,
    LinkConfig,
    pmax_from_budget,
    pmax_from_budget_exact,
)
from .errors import ConfigError, InvalidModelError, ToleranceNotMetError
from .gauss2d import Covariance2x2, PositioningErrorModel, covariance_from_model
from .optimizer import BudgetedLink, optimal_beamwidth, verify_optimum
from .oracle import McConfig, outage_montecarlo, outage_quadrature
from .outage import OutageEstimate, RegimeKind, estimate_outage

__all__ = [
    "ScenarioConfig",
    "parse_config",
    "load_config",
    "cmd_point",
    "cmd_sweep",
    "cmd_optimize",
    "main",
    "entrypoint",
]

_FLOAT_KEYS = {
    "sigma1",
    "sigma2",
    "phi",
    "theta_3db",
    "a_m",
    "d",
    "lambda",
    "gamma_th",
    "p_max",
    "p_t",
    "sweep_min",
    "sweep_max",
    "quad_tol",
}
_INT_KEYS = {"sweep_points", "mc_samples", "mc_seed"}
_STR_KEYS = {"sweep_axis", "p_t_unit"}
_ALL_KEYS = _FLOAT_KEYS | _INT_KEYS | _STR_KEYS

_AXES = ("d", "p_t", "theta_3db")
_UNITS = ("W", "dBm", "dBW", "dB")
_SWEEP_KEYS = ("sweep_axis", "sweep_min", "sweep_max", "sweep_points")

_MAX_WORKERS = 8

_CSV_COLUMNS = (
    "regime",
    "k",
    "lower",
    "upper",
    "quadrature",
    "mc",
    "mc_stderr",
    "tightness_ratio",
)


def _fmt(x: float) -> str:
    """Scientific notation with 17 significant digits."""
    return f"{x:.16e}"


def _watts(value: float, unit: str) -> float:
    if unit == "dBm":
        return 10.0 ** ((value - 30.0) / 10.0)
    if unit == "dBW":
        return 10.0 ** (value / 10.0)
    return value


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario: error model, antenna, link, power, sweep, oracles.

    Power is either a peak (``p_max``, watts) or a total main-lobe
    budget (``p_t_watts``), never both.  When the sweep axis is ``p_t``
    the power comes from the grid instead and both fields are ``None``;
    ``p_t_unit`` then applies to the grid values.  ``theta_3db`` may be
    omitted in budgeted sweeps over ``d`` or ``p_t``, in which case each
    row uses its own optimal beamwidth.
    """

    sigma1: float
    sigma2: float
    phi: float
    a_m: float
    wavelength: float
    gamma_th: float
    theta_3db: float | None = None
    d: float | None = None
    p_max: float | None = None
    p_t_watts: float | None = None
    p_t_unit: str = "W"
    sweep_axis: str | None = None
    sweep_min: float | None = None
    sweep_max: float | None = None
    sweep_points: int | None = None
    mc_samples: int = 100_000
    mc_seed: int = 0
    quad_tol: float = 1e-10

    def error_model(self) -> PositioningErrorModel:
        return PositioningErrorModel(self.sigma1, self.sigma2, self.phi)


class _Raw:
    """Key/value pairs with the line each key appeared on."""

    def __init__(self) -> None:
        self.values: dict[str, float | int | str] = {}
        self.lines: dict[str, int] = {}

    def fail(self, key: str, message: str) -> "ConfigError":
        return ConfigError(f"line {self.lines[key]}: {message}")


def _parse_lines(text: str) -> _Raw:
    raw = _Raw()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected key = value, got '{stripped}'")
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _ALL_KEYS:
            raise ConfigError(f"line {lineno}: unknown key '{key}'")
        if key in raw.values:
            raise ConfigError(f"line {lineno}: duplicate key '{key}'")
        if not value:
            raise ConfigError(f"line {lineno}: empty value for '{key}'")
        if key in _FLOAT_KEYS:
            try:
                parsed: float | int | str = float(value)
            except ValueError:
                raise ConfigError(
                    f"line {lineno}: invalid number for '{key}': '{value}'"
                ) from None
            if not math.isfinite(parsed):
                raise ConfigError(f"line {lineno}: '{key}' must be finite")
        elif key in _INT_KEYS:
            try:
                parsed = int(value, 10)
            except ValueError:
                raise ConfigError(
                    f"line {lineno}: invalid integer for '{key}': '{value}'"
                ) from None
        else:
            parsed = value
        raw.values[key] = parsed
        raw.lines[key] = lineno
    return raw


def _positive(raw: _Raw, key: str) -> None:
    if key in raw.values and not raw.values[key] > 0:  # type: ignore[operator]
        raise raw.fail(key, f"'{key}' must be > 0")


def parse_config(text: str, *, stderr: IO[str] | None = None) -> ScenarioConfig:
    """Parse and validate config text.

    Raises :class:`ConfigError` with a line-numbered message when a
    specific line is at fault, or a message naming the field otherwise.
    Warnings (the bare-``dB`` unit) go to ``stderr``.
    """
    err = stderr if stderr is not None else sys.stderr
    raw = _parse_lines(text)
    vals = raw.values

    for key in ("sigma1", "sigma2", "theta_3db", "a_m", "d", "lambda", "gamma_th",
                "p_max", "quad_tol"):
        _positive(raw, key)
    if "sigma1" in vals and "sigma2" in vals and vals["sigma2"] > vals["sigma1"]:
        raise raw.fail("sigma2", "sigma2 must not exceed sigma1")
    if "theta_3db" in vals and vals["theta_3db"] > math.pi:
        raise raw.fail("theta_3db", "theta_3db must not exceed pi")
    if "a_m" in vals and not vals["a_m"] < 1:
        raise raw.fail("a_m", "a_m must be < 1")
    if "quad_tol" in vals and not (1e-14 < vals["quad_tol"] < 1e-4):
        raise raw.fail("quad_tol", "quad_tol must lie in (1e-14, 1e-4)")
    if "mc_samples" in vals and vals["mc_samples"] < 1:
        raise raw.fail("mc_samples", "mc_samples must be >= 1")
    if "mc_seed" in vals and vals["mc_seed"] < 0:
        raise raw.fail("mc_seed", "mc_seed must be >= 0")

    axis = vals.get("sweep_axis")
    if "sweep_axis" in vals and axis not in _AXES:
        raise raw.fail("sweep_axis", f"sweep_axis must be one of {', '.join(_AXES)}")
    present = [k for k in _SWEEP_KEYS if k in vals]
    if present and len(present) < len(_SWEEP_KEYS):
        missing = [k for k in _SWEEP_KEYS if k not in vals]
        raise ConfigError(f"incomplete sweep: missing {', '.join(missing)}")
    if axis is not None:
        if axis in vals:
            raise raw.fail(axis, f"key '{axis}' conflicts with sweep_axis = {axis}")
        if vals["sweep_points"] < 2:
            raise raw.fail("sweep_points", "sweep_points must be >= 2")
        if not vals["sweep_min"] < vals["sweep_max"]:
            raise raw.fail("sweep_max", "sweep range must be increasing")
        axis_in_db = axis == "p_t" and vals.get("p_t_unit", "W") != "W"
        if not axis_in_db and not vals["sweep_min"] > 0:
            raise raw.fail("sweep_min", "sweep range must be positive")
        if axis == "theta_3db" and vals["sweep_max"] > math.pi:
            raise raw.fail("sweep_max", "theta_3db sweep must not exceed pi")

    unit = vals.get("p_t_unit", "W")
    if "p_t_unit" in vals:
        if unit not in _UNITS:
            raise raw.fail("p_t_unit", f"p_t_unit must be one of {', '.join(_UNITS)}")
        if "p_t" not in vals and axis != "p_t":
            raise raw.fail("p_t_unit", "p_t_unit requires p_t (or a p_t sweep)")
        if unit == "dB":
            print("warning: bare 'dB' unit interpreted as dBm", file=err)
            unit = "dBm"

    if axis == "p_t":
        for key in ("p_max", "p_t"):
            if key in vals:
                raise raw.fail(key, f"key '{key}' conflicts with sweep_axis = p_t")
    else:
        if "p_max" in vals and "p_t" in vals:
            raise raw.fail("p_t", "give exactly one of p_max and p_t")
        if "p_max" not in vals and "p_t" not in vals:
            raise ConfigError("missing power: give exactly one of p_max and p_t")

    p_t_watts = None
    if "p_t" in vals:
        p_t_watts = _watts(vals["p_t"], unit)
        if not p_t_watts > 0:
            raise raw.fail("p_t", "p_t must be > 0")

    def need(key: str) -> float:
        if key not in vals:
            raise ConfigError(f"missing required key '{key}'")
        return vals[key]  # type: ignore[return-value]

    return ScenarioConfig(
        sigma1=need("sigma1"),
        sigma2=need("sigma2"),
        phi=need("phi"),
        a_m=need("a_m"),
        wavelength=need("lambda"),
        gamma_th=need("gamma_th"),
        theta_3db=vals.get("theta_3db"),
        d=vals.get("d"),
        p_max=vals.get("p_max"),
        p_t_watts=p_t_watts,
        p_t_unit=unit,
        sweep_axis=axis,
        sweep_min=vals.get("sweep_min"),
        sweep_max=vals.get("sweep_max"),
        sweep_points=vals.get("sweep_points"),
        mc_samples=vals.get("mc_samples", 100_000),
        mc_seed=vals.get("mc_seed", 0),
        quad_tol=vals.get("quad_tol", 1e-10),
    )


def load_config(path: str, *, stderr: IO[str] | None = None) -> ScenarioConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config file '{path}': {e.strerror or e}") from e
    return parse_config(text, stderr=stderr)


def _resolved_pmax(cfg: ScenarioConfig, theta_3db: float, p_t: float | None) -> float:
    """Peak power, either direct or recovered from the budget."""
    if cfg.p_max is not None:
        return cfg.p_max
    assert p_t is not None
    if theta_3db <= SMALL_BEAM_LIMIT:
        return pmax_from_budget(p_t, theta_3db)
    return pmax_from_budget_exact(p_t, theta_3db)


@dataclass(frozen=True)
class _Eval:
    est: OutageEstimate
    quad: float
    mc: float
    mc_stderr: float


def _evaluate(
    antenna: AntennaConfig,
    link: LinkConfig,
    cov: Covariance2x2,
    quad_tol: float,
    mc_samples: int,
    mc_seed: int,
) -> _Eval:
    """Bounds plus both oracles; deterministic regimes are definitional."""
    est = estimate_outage(antenna, link, cov)
    if not est.regime.is_probabilistic:
        p = est.lower  # == upper: exact 0 or 1
        return _Eval(est=est, quad=p, mc=p, mc_stderr=0.0)
    assert est.regime.k is not None
    quad = outage_quadrature(est.regime.k, link.d, cov, tol=quad_tol).p_out
    mc = outage_montecarlo(antenna, link, cov, McConfig(mc_samples, mc_seed))
    return _Eval(est=est, quad=quad, mc=mc.p_out, mc_stderr=mc.std_err)


def _require(cfg: ScenarioConfig, **fields: object) -> None:
    for name, value in fields.items():
        if value is None:
            raise ConfigError(f"missing required key '{name}'")


def cmd_point(cfg: ScenarioConfig, out: IO[str] | None = None) -> int:
    """Single-scenario report: regime, bounds, both oracles."""
    stream = out if out is not None else sys.stdout
    if cfg.sweep_axis is not None:
        raise ConfigError("the point command takes no sweep_axis")
    _require(cfg, theta_3db=cfg.theta_3db, d=cfg.d)
    assert cfg.theta_3db is not None and cfg.d is not None
    cov = covariance_from_model(cfg.error_model())
    link = LinkConfig(d=cfg.d, wavelength=cfg.wavelength, gamma_th=cfg.gamma_th)
    p_max = _resolved_pmax(cfg, cfg.theta_3db, cfg.p_t_watts)
    antenna = AntennaConfig(theta_3db=cfg.theta_3db, a_m=cfg.a_m, p_max=p_max)

    ev = _evaluate(antenna, link, cov, cfg.quad_tol, cfg.mc_samples, cfg.mc_seed)
    regime = ev.est.regime
    if not regime.is_probabilistic:
        tag = " (wraparound)" if regime.wraparound else ""
        print(f"regime: {regime.kind.value}{tag}", file=stream)
        print(f"P_out: {int(ev.est.lower)}", file=stream)
        return 0

    est = ev.est
    print(f"regime: {regime.kind.value}", file=stream)
    print(f"k: {_fmt(regime.k)}", file=stream)  # type: ignore[arg-type]
    print(f"I_R: {_fmt(est.i_r)}", file=stream)  # type: ignore[arg-type]
    print(f"I_L: {_fmt(est.i_l)}", file=stream)  # type: ignore[arg-type]
    print(f"I_B: {_fmt(est.i_b)}", file=stream)  # type: ignore[arg-type]
    print(f"lower: {_fmt(est.lower)}", file=stream)
    print(f"upper: {_fmt(est.upper)}", file=stream)
    print(f"quadrature: {_fmt(ev.quad)}", file=stream)
    print(
        f"mc: {_fmt(ev.mc)} +/- {_fmt(ev.mc_stderr)} "
        f"(n={cfg.mc_samples}, seed={cfg.mc_seed})",
        file=stream,
    )
    print(f"tightness_ratio: {_fmt(est.tightness_ratio)}", file=stream)  # type: ignore[arg-type]
    return 0


def _sweep_row(cfg: ScenarioConfig, cov: Covariance2x2, index: int, value: float) -> list[str]:
    """One CSV row of a sweep; row index fixes the Monte Carlo seed."""
    axis = cfg.sweep_axis
    d = value if axis == "d" else cfg.d
    assert d is not None
    link = LinkConfig(d=d, wavelength=cfg.wavelength, gamma_th=cfg.gamma_th)

    p_t = _watts(value, cfg.p_t_unit) if axis == "p_t" else cfg.p_t_watts
    if axis == "theta_3db":
        theta = value
    elif cfg.theta_3db is not None:
        theta = cfg.theta_3db
    else:
        # Budgeted sweep without a fixed beamwidth: each row runs at its
        # own optimum (capped at the physical pattern limit pi).
        assert p_t is not None
        opt = optimal_beamwidth(BudgetedLink(p_t=p_t, link=link, a_m=cfg.a_m))
        theta = min(opt.theta_star, math.pi)

    p_max = _resolved_pmax(cfg, theta, p_t)
    antenna = AntennaConfig(theta_3db=theta, a_m=cfg.a_m, p_max=p_max)
    ev = _evaluate(antenna, link, cov, cfg.quad_tol, cfg.mc_samples, cfg.mc_seed + index)

    est = ev.est
    probabilistic = est.regime.is_probabilistic
    return [
        _fmt(value),
        est.regime.kind.value,
        _fmt(est.regime.k) if probabilistic else "",  # type: ignore[arg-type]
        _fmt(est.lower),
        _fmt(est.upper),
        _fmt(ev.quad),
        _fmt(ev.mc),
        _fmt(ev.mc_stderr),
        _fmt(est.tightness_ratio) if probabilistic else "",  # type: ignore[arg-type]
    ]


def cmd_sweep(cfg: ScenarioConfig, out: IO[str] | None = None) -> int:
    """CSV curve over the configured axis, rows in axis order."""
    stream = out if out is not None else sys.stdout
    if cfg.sweep_axis is None:
        raise ConfigError("missing required key 'sweep_axis'")
    axis = cfg.sweep_axis
    if axis != "d":
        _require(cfg, d=cfg.d)
    if axis != "theta_3db" and cfg.theta_3db is None:
        if cfg.p_t_watts is None and axis != "p_t":
            raise ConfigError(
                "missing required key 'theta_3db' "
                "(omit it only in a budgeted sweep, for per-row optimal beamwidth)"
            )
    cov = covariance_from_model(cfg.error_model())
    assert cfg.sweep_min is not None and cfg.sweep_max is not None
    assert cfg.sweep_points is not None
    grid = np.linspace(cfg.sweep_min, cfg.sweep_max, cfg.sweep_points)

    writer = csv.writer(stream)
    writer.writerow((axis,) + _CSV_COLUMNS)
    workers = min(_MAX_WORKERS, len(grid))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows: Iterable[list[str]] = pool.map(
            lambda iv: _sweep_row(cfg, cov, iv[0], float(iv[1])), enumerate(grid)
        )
        for row in rows:
            writer.writerow(row)
    return 0


def cmd_optimize(cfg: ScenarioConfig, verify: bool = False,
                 out: IO[str] | None = None, err: IO[str] | None = None) -> int:
    """Closed-form optimum report, optionally grid-verified."""
    stream = out if out is not None else sys.stdout
    errs = err if err is not None else sys.stderr
    if cfg.p_t_watts is None:
        raise ConfigError("optimize requires p_t")
    _require(cfg, d=cfg.d)
    assert cfg.d is not None
    link = LinkConfig(d=cfg.d, wavelength=cfg.wavelength, gamma_th=cfg.gamma_th)
    b = BudgetedLink(p_t=cfg.p_t_watts, link=link, a_m=cfg.a_m)
    opt = optimal_beamwidth(b)

    print(f"theta_star: {_fmt(opt.theta_star)}", file=stream)
    print(f"k_star: {_fmt(opt.k_star)}", file=stream)
    print(f"theta_cutoff: {_fmt(opt.theta_cutoff)}", file=stream)
    print(f"feasible: {'yes' if opt.feasible else 'no'}", file=stream)
    if not opt.feasible:
        reason = (
            "optimal coverage half-angle reaches pi/2"
            if opt.wraparound
            else f"theta_star exceeds the small-beam validity bound {SMALL_BEAM_LIMIT}"
        )
        print(f"warning: infeasible optimum: {reason}", file=errs)

    if verify:
        cov = covariance_from_model(cfg.error_model())
        v = verify_optimum(b, cov, tol=cfg.quad_tol)
        print(f"grid_argmin: {_fmt(v.argmin_theta)}", file=stream)
        print(f"gap: {_fmt(v.gap)}", file=stream)
        print(f"grid_step: {_fmt(v.grid_step)}", file=stream)
        print(f"within_one_step: {'yes' if v.within_one_step else 'no'}", file=stream)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="beamoutage",
        description="Outage bounds, oracles and beamwidth optimization "
        "for position-aided beam pointing.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p_point = sub.add_parser("point", help="report one scenario")
    p_sweep = sub.add_parser("sweep", help="CSV curve over one axis")
    p_opt = sub.add_parser("optimize", help="optimal beamwidth report")
    for p in (p_point, p_sweep, p_opt):
        p.add_argument("--config", required=True, metavar="PATH",
                       help="flat key = value config file")
    p_sweep.add_argument("--out", metavar="PATH", default=None,
                         help="CSV output path (default: standard output)")
    p_opt.add_argument("--verify", action="store_true",
                       help="re-derive the optimum on a 200-point grid")
    args = parser.parse_args(argv)

    try:
        cfg = load_config(args.config)
        if args.command == "point":
            return cmd_point(cfg)
        if args.command == "sweep":
            if args.out is None:
                return cmd_sweep(cfg)
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                return cmd_sweep(cfg, fh)
        return cmd_optimize(cfg, verify=args.verify)
    except (ConfigError, InvalidModelError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except ToleranceNotMetError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main())
