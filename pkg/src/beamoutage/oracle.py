"""Independent numerical estimators of the outage probability.

Two routes that share no algebra with the closed-form bounds:

* :func:`outage_quadrature` integrates the covered-wedge mass of the
  bivariate normal through its conditional decomposition and returns the
  complement, with a certified absolute-error tolerance.
* :func:`outage_montecarlo` simulates the full physical chain per draw:
  sample a position estimate, point the beam at it, evaluate the
  received power, and count threshold failures.  It never touches the
  wedge slope ``k``, so agreement with the quadrature route validates
  the geometric reduction end to end.

Monte Carlo results are a deterministic function of ``(seed,
n_samples)`` alone.  Draws come from a counter-based bit stream
(Philox) split into contiguous blocks, so partitioning the work across
any number of substreams reproduces the identical sample set and hence
bit-identical results.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator, Philox
from scipy.integrate import quad
from scipy.special import ndtr

from .channel import AntennaConfig, LinkConfig, received_power
from .errors import InvalidModelError, ToleranceNotMetError
from .gauss2d import Covariance2x2, q_function, spectral_sqrt

__all__ = [
    "McConfig",
    "OracleMethod",
    "OracleResult",
    "outage_quadrature",
    "outage_montecarlo",
]

# Truncation half-width of the range coordinate, in conditional standard
# deviations. The neglected tail mass is below Q(10) ~ 7.6e-24.
_TAIL_SIGMAS = 10.0

# Per-chunk cap on generated samples, to bound peak memory during large
# runs.  Must stay even so chunk starts remain counter-block aligned.
_CHUNK = 1 << 19


class OracleMethod(enum.Enum):
    QUADRATURE = "quadrature"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class McConfig:
    """Monte Carlo run description.

    ``n_streams`` only partitions the work; it never changes the result.
    """

    n_samples: int
    seed: int
    n_streams: int = 1

    def __post_init__(self) -> None:
        if not (isinstance(self.n_samples, int) and self.n_samples >= 1):
            raise InvalidModelError(f"n_samples must be a positive int, got {self.n_samples!r}")
        if not (isinstance(self.seed, int) and self.seed >= 0):
            raise InvalidModelError(f"seed must be a non-negative int, got {self.seed!r}")
        if not (isinstance(self.n_streams, int) and self.n_streams >= 1):
            raise InvalidModelError(f"n_streams must be a positive int, got {self.n_streams!r}")


@dataclass(frozen=True)
class OracleResult:
    """Probability estimate with its uncertainty.

    ``std_err`` is the binomial standard error for Monte Carlo and 0 for
    quadrature (whose error is certified against the tolerance instead).
    """

    p_out: float
    std_err: float
    method: OracleMethod

    def __post_init__(self) -> None:
        if not (0.0 <= self.p_out <= 1.0):
            raise InvalidModelError(f"p_out must lie in [0, 1], got {self.p_out!r}")
        if not (self.std_err >= 0.0):
            raise InvalidModelError(f"std_err must be >= 0, got {self.std_err!r}")


def outage_quadrature(
    k: float, d: float, cov: Covariance2x2, tol: float = 1e-10
) -> OracleResult:
    """Deterministic outage probability for wedge slope ``k``.

    Integrates the covered mass ``P(|x| < k y)`` of the position
    estimate ``(x, y) ~ N((0, d), R)`` by conditioning on the range
    coordinate:

        covered = integral_0^inf f_y(y) [F(k y | y) - F(-k y | y)] dy

    where ``x | y`` is normal with mean ``r12/r22 (y - d)`` and variance
    ``r11 - r12^2/r22``, and returns ``1 - covered``.  The integration
    interval is truncated at ``d +- 10 sqrt(r22)`` and the upper tail
    (where the bracket is 1 to within its own tail mass) is restored
    analytically via Q.  Raises :class:`ToleranceNotMetError` if the
    integrator cannot certify an absolute error within ``tol``.

    ``d = 0`` is accepted (the estimate centred on the transmitter):
    the covered region is then a fixed wedge and the result its angular
    mass.
    """
    k = float(k)
    d = float(d)
    tol = float(tol)
    if not (math.isfinite(k) and k > 0.0):
        raise InvalidModelError(f"wedge slope k must be finite and > 0, got {k!r}")
    if not (math.isfinite(d) and d >= 0.0):
        raise InvalidModelError(f"distance d must be finite and >= 0, got {d!r}")
    if not (1e-14 < tol < 1e-4):
        raise InvalidModelError(f"tol must lie in (1e-14, 1e-4), got {tol!r}")

    sigma_y = math.sqrt(cov.r22)
    cond_slope = cov.r12 / cov.r22
    cond_std = math.sqrt(cov.r11 - cov.r12 * cov.r12 / cov.r22)
    norm = 1.0 / (sigma_y * math.sqrt(2.0 * math.pi))

    def integrand(y: float) -> float:
        z = (y - d) / sigma_y
        f_y = norm * math.exp(-0.5 * z * z)
        mu = cond_slope * (y - d)
        hi = ndtr((k * y - mu) / cond_std)
        lo = ndtr((-k * y - mu) / cond_std)
        return f_y * (hi - lo)

    y_lo = max(0.0, d - _TAIL_SIGMAS * sigma_y)
    y_hi = d + _TAIL_SIGMAS * sigma_y
    covered, abserr = quad(integrand, y_lo, y_hi, epsabs=tol / 4.0, epsrel=0.0, limit=200)
    if abserr > tol:
        raise ToleranceNotMetError(
            f"quadrature error estimate {abserr:.3e} exceeds tol {tol:.3e}"
        )
    covered += q_function(_TAIL_SIGMAS)  # analytic tail above y_hi
    p = min(1.0, max(0.0, 1.0 - covered))
    return OracleResult(p_out=p, std_err=0.0, method=OracleMethod.QUADRATURE)


def _normals_from_counter(seed: int, start: int, count: int) -> np.ndarray:
    """``count`` standard-normal pairs at sample offset ``start``.

    Each 2-D sample consumes exactly two 64-bit uniforms, transformed by
    the polar (Box-Muller) map, so sample ``i`` always sees the same
    bits no matter how the run is partitioned.  ``start`` must be even:
    two samples fill one Philox counter block of four 64-bit words.
    """
    assert start % 2 == 0
    bitgen = Philox(key=seed)
    if start:
        bitgen.advance(start // 2)
    u = Generator(bitgen).random(2 * count)
    u1 = u[0::2]
    u2 = u[1::2]
    radius = np.sqrt(-2.0 * np.log1p(-u1))  # 1 - u1 in (0, 1]: never log(0)
    angle = (2.0 * math.pi) * u2
    return np.column_stack((radius * np.cos(angle), radius * np.sin(angle)))


def outage_montecarlo(
    antenna: AntennaConfig,
    link: LinkConfig,
    cov: Covariance2x2,
    mc: McConfig,
) -> OracleResult:
    """Monte Carlo outage estimate through the full physical pipeline.

    Per draw: sample the position estimate from N((0, d), R), point the
    beam along it, evaluate the received power through the pattern and
    path gain, and count a failure when it does not exceed the
    threshold.  No regime classification or wedge algebra is involved,
    so this estimator exercises the model exactly as stated.

    The returned standard error is the binomial one,
    ``sqrt(p (1 - p) / n)``; it is zero when every draw agrees, which is
    the expected outcome in the deterministic regimes.
    """
    root = spectral_sqrt(cov)
    mean = np.array([0.0, link.d])
    n = mc.n_samples

    # Contiguous blocks with even-aligned starts; the union of blocks is
    # always samples [0, n), so the failure count cannot depend on the
    # partition.
    per_stream = -(-n // mc.n_streams)
    per_stream += per_stream % 2

    failures = 0
    for j in range(mc.n_streams):
        start = j * per_stream
        if start >= n:
            break
        remaining = min(per_stream, n - start)
        offset = start
        while remaining > 0:
            count = min(remaining, _CHUNK)
            z = _normals_from_counter(mc.seed, offset, count)
            points = mean + z @ root
            theta = np.arctan2(points[:, 0], points[:, 1])
            p_rx = received_power(theta, antenna, link)
            failures += int(np.count_nonzero(p_rx <= link.gamma_th))
            offset += count
            remaining -= count

    p = failures / n
    return OracleResult(
        p_out=p,
        std_err=math.sqrt(p * (1.0 - p) / n),
        method=OracleMethod.MONTE_CARLO,
    )
