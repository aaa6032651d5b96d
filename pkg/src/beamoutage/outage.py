"""Outage regimes and closed-form outage-probability bounds.

An outage occurs when the received power falls at or below the detection
threshold.  Depending on the link budget this is deterministic (the
side-lobe floor alone clears the threshold, or even a perfectly aimed
beam cannot) or probabilistic.  In the probabilistic regime the outage
event reduces to the estimate falling outside the wedge
``{|x| < k * y}`` around the true receiver direction, where the slope
``k`` collects the entire link budget into one number.  The wedge's
complement is bracketed by three half-plane probabilities, giving exact
lower and upper bounds:

    i_r = Q(k d / sqrt(q_R)),  q_R = [1, -k] R [1, -k]^T
    i_l = Q(k d / sqrt(q_L)),  q_L = [1,  k] R [1,  k]^T
    i_b = Q(d / sqrt(r22))

    i_r + i_l - i_b  <=  P_out  <=  i_r + i_l

The ratio ``i_b / (i_r + i_l)`` measures how much of the upper bound the
double-counted overlap could account for; it vanishes as the distance
grows relative to the positioning spread, which is why the sandwich
tightens on long links.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

from .channel import PATTERN_DECAY, AntennaConfig, LinkConfig, friis_gain
from .errors import BeamWraparoundError, InvalidModelError, WrongRegimeError
from .gauss2d import Covariance2x2, q_function

__all__ = [
    "RegimeKind",
    "OutageRegime",
    "OutageEstimate",
    "classify",
    "k_factor",
    "outage_bounds",
    "tightness_ratio",
    "estimate_outage",
]

_HALF_PI_SQ = (math.pi / 2.0) ** 2


class RegimeKind(enum.Enum):
    """Deterministic coverage, deterministic outage, or neither."""

    ALWAYS_COVERED = "always_covered"
    ALWAYS_OUTAGE = "always_outage"
    PROBABILISTIC = "probabilistic"


@dataclass(frozen=True)
class OutageRegime:
    """Classification result.

    ``k`` is populated exactly when the regime is probabilistic.
    ``wraparound`` marks the always-covered subcase where the main lobe's
    coverage half-angle reaches pi/2, i.e. coverage holds for every
    pointing angle rather than through the side-lobe floor.
    """

    kind: RegimeKind
    k: float | None = None
    wraparound: bool = False

    @property
    def is_probabilistic(self) -> bool:
        return self.kind is RegimeKind.PROBABILISTIC


@dataclass(frozen=True)
class OutageEstimate:
    """Closed-form outage bounds plus their half-plane components.

    In the probabilistic regime all component fields are populated and

        upper = min(1, i_r + i_l)
        lower = max(0, i_r + i_l - i_b)

    In the deterministic regimes ``lower == upper`` equals the exact
    outage probability (0 or 1) and the components are ``None``.
    ``degenerate`` flags the case where ``i_r + i_l`` underflowed to
    zero, making the bounds coincide at machine precision and the
    tightness ratio meaningless (reported as 0).
    """

    regime: OutageRegime
    lower: float
    upper: float
    i_r: float | None = None
    i_l: float | None = None
    i_b: float | None = None
    tightness_ratio: float | None = None
    degenerate: bool = False

    def __post_init__(self) -> None:
        if not (0.0 <= self.lower <= self.upper <= 1.0):
            raise InvalidModelError(
                f"bounds must satisfy 0 <= lower <= upper <= 1, "
                f"got lower={self.lower}, upper={self.upper}"
            )


def _coverage_halfangle_sq(antenna: AntennaConfig, link: LinkConfig) -> float:
    """Squared half-angle of main-lobe coverage, or -inf when none.

    The main lobe clears the threshold at angles ``|theta| <= theta_c``
    with ``theta_c^2 = (theta_3db^2 / PATTERN_DECAY) * log10(margin)``,
    where ``margin`` is the boresight received power over the threshold.
    Returns -inf when the margin is <= 1 (no angle works).
    """
    margin = antenna.p_max * friis_gain(link) / link.gamma_th
    if margin <= 1.0:
        return -math.inf
    th = antenna.theta_3db
    return th * th / PATTERN_DECAY * math.log10(margin)


def classify(antenna: AntennaConfig, link: LinkConfig) -> OutageRegime:
    """Decide which outage regime the link operates in.

    * always covered: the side-lobe floor alone clears the threshold
      (``p_max * a_m * friis >= gamma_th``), or the main lobe's coverage
      half-angle reaches pi/2 so no pointing angle causes outage;
    * always outage: even boresight cannot clear it
      (``p_max * friis <= gamma_th``);
    * probabilistic otherwise, with wedge slope ``k = tan(theta_c)``.

    Boundary equalities deliberately fall into the deterministic
    regimes on both sides (>= for covered, <= for outage).
    """
    bore = antenna.p_max * friis_gain(link)
    if antenna.a_m * bore >= link.gamma_th:
        return OutageRegime(RegimeKind.ALWAYS_COVERED)
    if bore <= link.gamma_th:
        return OutageRegime(RegimeKind.ALWAYS_OUTAGE)
    half_sq = _coverage_halfangle_sq(antenna, link)
    if half_sq >= _HALF_PI_SQ:
        return OutageRegime(RegimeKind.ALWAYS_COVERED, wraparound=True)
    return OutageRegime(RegimeKind.PROBABILISTIC, k=math.tan(math.sqrt(half_sq)))


def k_factor(antenna: AntennaConfig, link: LinkConfig) -> float:
    """Wedge slope ``k = tan(theta_c)`` of the probabilistic regime.

    Raises :class:`WrongRegimeError` when the boresight margin is <= 1
    (the link is deterministically in outage, no coverage wedge exists)
    and :class:`BeamWraparoundError` when the coverage half-angle
    reaches pi/2 (the tangent has no finite value; the link is covered
    at every angle).  The side-lobe floor is not consulted here: the
    slope is a property of the main lobe alone.
    """
    half_sq = _coverage_halfangle_sq(antenna, link)
    if half_sq == -math.inf:
        raise WrongRegimeError(
            "no coverage wedge: boresight power does not exceed the threshold"
        )
    if half_sq >= _HALF_PI_SQ:
        raise BeamWraparoundError(
            "coverage half-angle reaches pi/2; every pointing angle is covered"
        )
    return math.tan(math.sqrt(half_sq))


def _components(k: float, d: float, cov: Covariance2x2) -> tuple[float, float, float]:
    """Half-plane probabilities (i_r, i_l, i_b) for wedge slope k."""
    q_r = cov.quad_form(1.0, -k)
    q_l = cov.quad_form(1.0, k)
    i_r = q_function(k * d / math.sqrt(q_r))
    i_l = q_function(k * d / math.sqrt(q_l))
    i_b = q_function(d / math.sqrt(cov.r22))
    return i_r, i_l, i_b


def _check_k_d(k: float, d: float) -> tuple[float, float]:
    k = float(k)
    d = float(d)
    if not (math.isfinite(k) and k > 0.0):
        raise InvalidModelError(f"wedge slope k must be finite and > 0, got {k!r}")
    if not (math.isfinite(d) and d > 0.0):
        raise InvalidModelError(f"distance d must be finite and > 0, got {d!r}")
    return k, d


def outage_bounds(k: float, d: float, cov: Covariance2x2) -> OutageEstimate:
    """Closed-form sandwich on the outage probability, probabilistic regime.

    ``k`` is the wedge slope (> 0), ``d`` the true distance (> 0) and
    ``cov`` the positioning-error covariance.  The returned estimate
    carries the three half-plane components, the clamped bounds and the
    tightness ratio.  The true outage probability always lies strictly
    inside ``[lower, upper]``; both clamps are inactive in exact
    arithmetic because each component probability is below one half.
    """
    k, d = _check_k_d(k, d)
    i_r, i_l, i_b = _components(k, d, cov)
    total = i_r + i_l
    upper = min(1.0, total)
    lower = max(0.0, total - i_b)
    if total > 0.0:
        ratio = i_b / total
        degenerate = False
    else:
        ratio = 0.0
        degenerate = True
    return OutageEstimate(
        regime=OutageRegime(RegimeKind.PROBABILISTIC, k=k),
        lower=lower,
        upper=upper,
        i_r=i_r,
        i_l=i_l,
        i_b=i_b,
        tightness_ratio=ratio,
        degenerate=degenerate,
    )


def tightness_ratio(k: float, d: float, cov: Covariance2x2) -> float:
    """Overlap share ``i_b / (i_r + i_l)`` of the upper bound.

    Small values certify that the sandwich is tight: the gap between the
    bounds is at most ``i_b``.  The ratio decreases as ``d`` grows
    against the positioning spread and as the covariance shrinks.  When
    ``i_r + i_l`` underflows to zero the bounds already coincide at
    machine precision; the ratio is then reported as 0 with a warning.
    """
    k, d = _check_k_d(k, d)
    i_r, i_l, i_b = _components(k, d, cov)
    total = i_r + i_l
    if total == 0.0:
        warnings.warn(
            "tightness ratio degenerate: bound components underflowed to zero",
            RuntimeWarning,
            stacklevel=2,
        )
        return 0.0
    return i_b / total


def estimate_outage(
    antenna: AntennaConfig, link: LinkConfig, cov: Covariance2x2
) -> OutageEstimate:
    """Classify the link and produce its outage estimate.

    Deterministic regimes short-circuit to exact probabilities (0 or 1,
    with ``lower == upper``); the probabilistic regime delegates to
    :func:`outage_bounds` with the classified wedge slope.
    """
    regime = classify(antenna, link)
    if regime.kind is RegimeKind.ALWAYS_COVERED:
        return OutageEstimate(regime=regime, lower=0.0, upper=0.0)
    if regime.kind is RegimeKind.ALWAYS_OUTAGE:
        return OutageEstimate(regime=regime, lower=1.0, upper=1.0)
    assert regime.k is not None
    return outage_bounds(regime.k, link.d, cov)
