"""Optimal beamwidth under a fixed total-power budget.

With the total main-lobe power held fixed, widening the beam lowers the
peak power while narrowing it shrinks the covered wedge; the outage
probability is minimized where the wedge slope ``k`` peaks.  Writing the
budget-constrained boresight margin as ``C / theta_3db`` with

    C = wavelength^2 p_t sqrt(PATTERN_DECAY ln 10)
        / (sqrt(pi) (4 pi d)^2 gamma_th),

the slope argument ``theta_3db^2 log10(C / theta_3db)`` has a unique
interior maximizer

    theta_star = C * 10**(-1 / (2 ln 10))  (= C / sqrt(e)),

independent of the positioning covariance.  The matching optimal slope
admits its own closed form, which this module cross-checks against the
general slope machinery.  A grid verifier re-derives the optimum from
the quadrature estimator to confirm the closed form numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import (
    PATTERN_DECAY,
    SMALL_BEAM_LIMIT,
    AntennaConfig,
    LinkConfig,
    friis_gain,
    pmax_from_budget,
    pmax_from_budget_exact,
    transmit_power_exact,
)
from .errors import InvalidModelError
from .gauss2d import Covariance2x2
from .oracle import outage_quadrature

__all__ = [
    "BudgetedLink",
    "Optimum",
    "SweepVerification",
    "optimal_beamwidth",
    "verify_optimum",
    "budget_outage_on_grid",
]

_LN10 = math.log(10.0)
_HALF_PI = math.pi / 2.0


@dataclass(frozen=True)
class BudgetedLink:
    """A link whose transmitter is constrained by total power ``p_t``.

    ``a_m`` is carried along so that full antenna configurations can be
    reconstituted at any candidate beamwidth.
    """

    p_t: float
    link: LinkConfig
    a_m: float

    def __post_init__(self) -> None:
        p_t = float(self.p_t)
        if not (math.isfinite(p_t) and p_t > 0.0):
            raise InvalidModelError(f"p_t must be finite and > 0, got {self.p_t!r}")
        a_m = float(self.a_m)
        if not (math.isfinite(a_m) and 0.0 < a_m < 1.0):
            raise InvalidModelError(f"a_m must lie in (0, 1), got {self.a_m!r}")
        object.__setattr__(self, "p_t", p_t)
        object.__setattr__(self, "a_m", a_m)


@dataclass(frozen=True)
class Optimum:
    """Closed-form optimal beamwidth and its companions.

    ``theta_cutoff`` is the scale ``C``: beamwidths at or beyond it give
    the budgeted link no boresight margin at all (deterministic outage),
    so the meaningful search interval is ``(0, C)``.  ``feasible`` marks
    whether ``theta_star`` lies in the small-beam regime where the
    linearized budget relation is trustworthy; outside it the value is
    still reported, and ``budget_roundtrip_error`` quantifies the
    linearization's relative error at ``theta_star``.  In the extreme
    case where the optimal coverage half-angle reaches pi/2 the slope
    has no finite value: ``wraparound`` is set, ``k_star`` is ``inf``,
    and the result is marked infeasible.
    """

    theta_star: float
    k_star: float
    theta_cutoff: float
    feasible: bool
    budget_roundtrip_error: float
    wraparound: bool = False


@dataclass(frozen=True, eq=False)
class SweepVerification:
    """Grid re-derivation of the optimum from the quadrature estimator."""

    grid: np.ndarray
    outage: np.ndarray
    argmin_theta: float
    theta_star: float
    gap: float
    grid_step: float
    within_one_step: bool


def _budget_scale(b: BudgetedLink) -> float:
    """The beamwidth scale C of the budgeted link."""
    lam = b.link.wavelength
    denom = math.sqrt(math.pi) * (4.0 * math.pi * b.link.d) ** 2 * b.link.gamma_th
    return lam * lam * b.p_t * math.sqrt(PATTERN_DECAY * _LN10) / denom


def optimal_beamwidth(b: BudgetedLink) -> Optimum:
    """Closed-form beamwidth minimizing outage under the power budget.

    ``theta_star = C / sqrt(e)`` with the scale ``C`` described in the
    module docstring, and the optimal wedge slope

        k_star = tan( wavelength^2 p_t 10**(-1/(2 ln 10))
                      / (sqrt(2 pi) (4 pi d)^2 gamma_th) ).

    Never raises: infeasibility is reported through the result's flags.
    In the extreme case where the optimal coverage half-angle would
    reach pi/2 the slope has no finite value, so ``k_star`` is ``inf``
    and ``wraparound`` is set.
    """
    scale = _budget_scale(b)
    theta_star = scale * 10.0 ** (-1.0 / (2.0 * _LN10))
    lam = b.link.wavelength
    arg = (
        lam
        * lam
        * b.p_t
        * 10.0 ** (-1.0 / (2.0 * _LN10))
        / (math.sqrt(2.0 * math.pi) * (4.0 * math.pi * b.link.d) ** 2 * b.link.gamma_th)
    )
    wraparound = arg >= _HALF_PI
    k_star = math.inf if wraparound else math.tan(arg)
    if theta_star <= math.pi:
        p_max = pmax_from_budget(b.p_t, theta_star)
        antenna = AntennaConfig(theta_3db=theta_star, a_m=b.a_m, p_max=p_max)
        roundtrip = abs(transmit_power_exact(antenna) - b.p_t) / b.p_t
    else:
        # theta_star beyond pi is outside any physical pattern; the
        # linearization error is reported as infinite.
        roundtrip = math.inf
    return Optimum(
        theta_star=theta_star,
        k_star=k_star,
        theta_cutoff=scale,
        feasible=theta_star <= SMALL_BEAM_LIMIT and not wraparound,
        budget_roundtrip_error=roundtrip,
        wraparound=wraparound,
    )


def budget_outage_on_grid(
    b: BudgetedLink,
    cov: Covariance2x2,
    grid: np.ndarray,
    tol: float = 1e-11,
) -> np.ndarray:
    """Quadrature outage probability at each candidate beamwidth.

    For each beamwidth the peak power is recovered from the budget (the
    linearized relation below :data:`SMALL_BEAM_LIMIT`, the exact
    inversion beyond), the wedge slope follows from the main-lobe
    margin, and the probability comes from the quadrature estimator.
    Candidates with no boresight margin score probability 1; candidates
    whose coverage half-angle reaches pi/2 score 0.
    """
    gd = friis_gain(b.link)
    out = np.empty(len(grid))
    for i, theta in enumerate(grid):
        theta = float(theta)
        if theta <= SMALL_BEAM_LIMIT:
            p_max = pmax_from_budget(b.p_t, theta)
        else:
            p_max = pmax_from_budget_exact(b.p_t, theta)
        margin = p_max * gd / b.link.gamma_th
        if margin <= 1.0:
            out[i] = 1.0
            continue
        half_sq = theta * theta / PATTERN_DECAY * math.log10(margin)
        if half_sq >= _HALF_PI * _HALF_PI:
            out[i] = 0.0
            continue
        k = math.tan(math.sqrt(half_sq))
        out[i] = outage_quadrature(k, b.link.d, cov, tol=tol).p_out
    return out


def default_grid(b: BudgetedLink, n_points: int = 200) -> np.ndarray:
    """Evenly spaced interior grid over the search interval ``(0, C)``."""
    scale = _budget_scale(b)
    return np.linspace(0.0, scale, int(n_points) + 2)[1:-1]


def verify_optimum(
    b: BudgetedLink,
    cov: Covariance2x2,
    grid: np.ndarray | None = None,
    tol: float = 1e-11,
) -> SweepVerification:
    """Re-derive the optimal beamwidth from the quadrature estimator.

    Scans the grid (by default 200 interior points of ``(0, C)``; a
    caller-supplied grid must hold at least 100 increasing positive
    points) and reports the argmin together with its gap to the closed
    form.  ``within_one_step`` records whether the two agree to one grid
    step, which is the strongest statement a finite grid supports.
    """
    if grid is None:
        grid = default_grid(b)
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or len(grid) < 100:
        raise InvalidModelError("verification grid needs at least 100 points")
    if not (grid[0] > 0.0 and np.all(np.diff(grid) > 0.0)):
        raise InvalidModelError("verification grid must be positive and increasing")

    outage = budget_outage_on_grid(b, cov, grid, tol=tol)
    idx = int(np.argmin(outage))
    theta_star = optimal_beamwidth(b).theta_star
    step = float(np.max(np.diff(grid)))
    gap = abs(float(grid[idx]) - theta_star)
    return SweepVerification(
        grid=grid,
        outage=outage,
        argmin_theta=float(grid[idx]),
        theta_star=theta_star,
        gap=gap,
        grid_step=step,
        within_one_step=gap <= step * (1.0 + 1e-9),
    )
