"""Anisotropic bivariate Gaussian positioning-error model.

The estimated receiver position is modelled as a 2-D normal vector whose
covariance is assembled from two principal standard deviations and an
orientation angle: R = G diag(sigma1^2, sigma2^2) G^T with G the rotation
by phi.  This module owns that model end to end:

* covariance assembly and validation,
* the symmetric (spectral) matrix square root,
* the Gaussian tail function Q,
* exact probabilities of half-plane events,
* seeded sampling.

All probabilities returned here are exact closed forms; independent
numerical cross-checks live in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateNormalError,
    InvalidModelError,
    NotPositiveDefiniteError,
)

__all__ = [
    "PositioningErrorModel",
    "Covariance2x2",
    "HalfPlane",
    "covariance_from_model",
    "spectral_sqrt",
    "q_function",
    "halfplane_prob",
    "sample_gaussian",
]

_SQRT2 = math.sqrt(2.0)


def _require_finite(name: str, value: float) -> float:
    v = float(value)
    if not math.isfinite(v):
        raise InvalidModelError(f"{name} must be finite, got {value!r}")
    return v


@dataclass(frozen=True)
class PositioningErrorModel:
    """Principal-axis description of the position-estimate error.

    Parameters
    ----------
    sigma1, sigma2:
        Standard deviations along the major and minor principal axes,
        in metres.  Must satisfy ``sigma1 >= sigma2 > 0``.
    phi:
        Orientation of the major axis, radians.  The model is
        pi-periodic, so the angle is normalized into ``[0, pi)`` on
        construction.
    """

    sigma1: float
    sigma2: float
    phi: float

    def __post_init__(self) -> None:
        s1 = _require_finite("sigma1", self.sigma1)
        s2 = _require_finite("sigma2", self.sigma2)
        ph = _require_finite("phi", self.phi)
        if not (s1 >= s2 > 0.0):
            raise InvalidModelError(
                f"need sigma1 >= sigma2 > 0, got sigma1={s1}, sigma2={s2}"
            )
        ph = ph % math.pi
        if ph >= math.pi:  # float wrap of tiny negative inputs
            ph -= math.pi
        object.__setattr__(self, "sigma1", s1)
        object.__setattr__(self, "sigma2", s2)
        object.__setattr__(self, "phi", ph)


@dataclass(frozen=True)
class Covariance2x2:
    """Symmetric positive-definite 2x2 covariance matrix.

    Stored by its three free entries ``[[r11, r12], [r12, r22]]``.
    Construction validates positive definiteness.
    """

    r11: float
    r12: float
    r22: float

    def __post_init__(self) -> None:
        r11 = _require_finite("r11", self.r11)
        r12 = _require_finite("r12", self.r12)
        r22 = _require_finite("r22", self.r22)
        if r11 <= 0.0 or r22 <= 0.0 or r11 * r22 - r12 * r12 <= 0.0:
            raise NotPositiveDefiniteError(
                f"matrix [[{r11}, {r12}], [{r12}, {r22}]] is not positive definite"
            )
        object.__setattr__(self, "r11", r11)
        object.__setattr__(self, "r12", r12)
        object.__setattr__(self, "r22", r22)

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.r11, self.r12], [self.r12, self.r22]])

    @property
    def trace(self) -> float:
        return self.r11 + self.r22

    @property
    def det(self) -> float:
        return self.r11 * self.r22 - self.r12 * self.r12

    def quad_form(self, v1: float, v2: float) -> float:
        """Quadratic form ``v R v^T`` for the row vector ``(v1, v2)``."""
        return v1 * v1 * self.r11 + 2.0 * v1 * v2 * self.r12 + v2 * v2 * self.r22

    def scaled(self, factor: float) -> "Covariance2x2":
        """Covariance multiplied elementwise by ``factor > 0``."""
        return Covariance2x2(self.r11 * factor, self.r12 * factor, self.r22 * factor)


@dataclass(frozen=True)
class HalfPlane:
    """Closed half-plane ``{p : a1*x + a2*y >= b}``.

    The boundary normal ``(a1, a2)`` must be nonzero; its length is
    irrelevant to the event, and :func:`halfplane_prob` is invariant
    under rescaling ``(a, b) -> (c*a, c*b)`` for ``c > 0``.
    """

    a1: float
    a2: float
    b: float

    def __post_init__(self) -> None:
        a1 = _require_finite("a1", self.a1)
        a2 = _require_finite("a2", self.a2)
        b = _require_finite("b", self.b)
        if a1 == 0.0 and a2 == 0.0:
            raise DegenerateNormalError("half-plane normal must be nonzero")
        object.__setattr__(self, "a1", a1)
        object.__setattr__(self, "a2", a2)
        object.__setattr__(self, "b", b)


def covariance_from_model(model: PositioningErrorModel) -> Covariance2x2:
    """Assemble R = G diag(sigma1^2, sigma2^2) G^T for the given model.

    Closed form:
        r11 = sigma1^2 cos^2(phi) + sigma2^2 sin^2(phi)
        r12 = (sigma1^2 - sigma2^2) sin(phi) cos(phi)
        r22 = sigma1^2 sin^2(phi) + sigma2^2 cos^2(phi)
    """
    c = math.cos(model.phi)
    s = math.sin(model.phi)
    v1 = model.sigma1 * model.sigma1
    v2 = model.sigma2 * model.sigma2
    return Covariance2x2(
        r11=v1 * c * c + v2 * s * s,
        r12=(v1 - v2) * s * c,
        r22=v1 * s * s + v2 * c * c,
    )


def spectral_sqrt(cov: Covariance2x2) -> np.ndarray:
    """Unique symmetric positive-definite square root S with S @ S = R.

    Uses the closed form for 2x2 SPD matrices,

        S = (R + sqrt(det R) * I) / sqrt(tr R + 2 sqrt(det R)),

    which coincides with rotating into the principal frame, taking
    elementwise square roots of the eigenvalues, and rotating back.
    Row dot products of S reproduce the entries of R exactly:
    ``S[i] . S[j] == R[i, j]``.
    """
    root_det = math.sqrt(cov.det)
    denom = math.sqrt(cov.trace + 2.0 * root_det)
    return (cov.as_matrix() + root_det * np.eye(2)) / denom


def q_function(x: float) -> float:
    """Gaussian tail probability Q(x) = P(Z > x) for Z ~ N(0, 1).

    Evaluated through the complementary error function,
    ``Q(x) = erfc(x / sqrt(2)) / 2``, whose C-library implementation is
    a documented-accuracy rational approximation correct to a few ulp.
    Relative accuracy is well under 1e-12 for |x| <= 8; for larger x the
    result follows the tail down through the subnormal range and
    underflows to 0.0 only where the true value is far below 1e-300.
    """
    return 0.5 * math.erfc(float(x) / _SQRT2)


def halfplane_prob(
    half: HalfPlane,
    mean: tuple[float, float] | np.ndarray,
    cov: Covariance2x2,
) -> float:
    """Exact probability that a N(mean, R) draw lands in the half-plane.

    The linear statistic ``a . p`` is itself normal with mean ``a . mean``
    and variance ``a R a^T``, so

        P(a . p >= b) = Q((b - a . mean) / sqrt(a R a^T)).

    The variance is strictly positive for any nonzero normal because R is
    positive definite.
    """
    mx, my = float(mean[0]), float(mean[1])
    shift = half.b - (half.a1 * mx + half.a2 * my)
    spread = math.sqrt(cov.quad_form(half.a1, half.a2))
    return q_function(shift / spread)


def sample_gaussian(
    mean: tuple[float, float] | np.ndarray,
    cov: Covariance2x2,
    rng: np.random.Generator,
    size: int | None = None,
) -> np.ndarray:
    """Draw from N(mean, R) using the spectral square root.

    Each draw is ``mean + S z`` with ``z`` standard normal and
    ``S = spectral_sqrt(cov)``, so the sample covariance converges to R.
    The caller owns the generator state: a generator seeded identically
    reproduces the identical sequence.

    Returns shape ``(2,)`` when ``size`` is None, else ``(size, 2)``.
    """
    root = spectral_sqrt(cov)
    center = np.asarray(mean, dtype=float)
    if size is None:
        z = rng.standard_normal(2)
        return center + root @ z
    z = rng.standard_normal((int(size), 2))
    # S is symmetric, so right-multiplying rows by S equals S @ z per row.
    return center + z @ root
