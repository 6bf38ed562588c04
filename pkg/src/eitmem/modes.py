"""Laguerre-Gaussian mode geometry and overlap with the atomic ensemble.

Each OAM order l is a pure-vortex LG mode (radial index p = 0).  The cloud
is modeled as a transverse Gaussian column-density profile of 1/e^2 radius
sigma_t; weighting that profile by the mode intensity yields a per-mode
effective optical depth.  The waist is treated as constant through the
medium (collimated regime, Rayleigh range long compared to the cloud).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.special import gammaln

from .errors import NumericError

QUAD_RTOL = 1e-8
DOMAIN_FACTOR = 8.0


@dataclass(frozen=True)
class LGMode:
    """Pure vortex mode: winding number l, Gaussian waist w0 in um, p = 0."""

    l: int
    w0: float
    p: int = 0

    def __post_init__(self):
        if self.l < 0:
            raise ValueError(f"winding number must be >= 0, got {self.l}")
        if self.w0 <= 0:
            raise ValueError(f"waist must be positive, got {self.w0}")
        if self.p != 0:
            raise ValueError("only p = 0 vortex modes are supported")

    @property
    def waist(self) -> float:
        """Effective mode size sqrt(l+1) * w0, in um."""
        return mode_waist(self.l, self.w0)


@dataclass(frozen=True)
class EnsembleConfig:
    """Atomic cloud geometry and rates.

    peak_od   : resonant optical depth on axis for the probe transition
    sigma_t   : transverse 1/e^2 Gaussian column-density radius (um)
    length    : medium length (mm)
    gamma_e   : excited-state decay rate Gamma (rad/s)
    gamma_12  : ground-state decoherence rate (rad/s)
    """

    peak_od: float
    sigma_t: float
    length: float
    gamma_e: float
    gamma_12: float

    def __post_init__(self):
        if self.peak_od < 0:
            raise ValueError(f"peak_od must be >= 0, got {self.peak_od}")
        if self.sigma_t <= 0:
            raise ValueError(f"sigma_t must be positive, got {self.sigma_t}")
        if self.length <= 0:
            raise ValueError(f"length must be positive, got {self.length}")
        if self.gamma_e <= 0:
            raise ValueError(f"gamma_e must be positive, got {self.gamma_e}")
        if not 0 <= self.gamma_12 < self.gamma_e:
            raise ValueError(
                f"gamma_12 must satisfy 0 <= gamma_12 < gamma_e, got {self.gamma_12}"
            )


def mode_waist(l: int, w0: float) -> float:
    """Mode size of OAM order l: sqrt(l+1) * w0."""
    if l < 0:
        raise ValueError(f"winding number must be >= 0, got {l}")
    if w0 <= 0:
        raise ValueError(f"waist must be positive, got {w0}")
    return float(np.sqrt(l + 1) * w0)


def lg_intensity(mode: LGMode, r):
    """Normalized radial intensity density of a p = 0 LG mode, in 1/um^2.

    I_l(r) = 2 / (pi w0^2 l!) * (2 r^2 / w0^2)^l * exp(-2 r^2 / w0^2),
    normalized so that integral I_l(r) 2 pi r dr = 1.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("radius must be >= 0")
    w0, l = mode.w0, mode.l
    x = 2.0 * r**2 / w0**2
    with np.errstate(divide="ignore"):
        log_pow = np.where(x > 0, l * np.log(np.where(x > 0, x, 1.0)), 0.0)
    val = 2.0 / (np.pi * w0**2) * np.exp(log_pow - x - gammaln(l + 1))
    if l > 0:
        val = np.where(r == 0, 0.0, val)
    return val if val.ndim else float(val)


def effective_od(mode: LGMode, ens: EnsembleConfig) -> float:
    """Mode-averaged optical depth seen by one OAM order.

    OD_eff = peak_od * integral I_mode(r) exp(-r^2 / (2 sigma_t^2)) 2 pi r dr:
    the column-OD profile of the cloud weighted by the transverse intensity
    of the mode.  Strictly decreasing in l for fixed w0 and sigma_t.
    """
    r_max = DOMAIN_FACTOR * max(mode.waist, ens.sigma_t)

    def integrand(r):
        return lg_intensity(mode, r) * np.exp(-(r**2) / (2.0 * ens.sigma_t**2)) * 2.0 * np.pi * r

    result = integrate.quad(integrand, 0.0, r_max, epsrel=QUAD_RTOL, limit=200, full_output=1)
    if len(result) > 3:
        overlap, abserr, info, message = result
        raise NumericError(
            f"effective_od quadrature failed for l={mode.l}, w0={mode.w0}, "
            f"sigma_t={ens.sigma_t}: {message} (abserr={abserr:.3e})"
        )
    overlap, abserr, _ = result
    if overlap > 0 and abserr > 1e-6 * max(overlap, 1e-12):
        raise NumericError(
            f"effective_od quadrature did not converge (value={overlap:.6e}, abserr={abserr:.3e})"
        )
    return float(ens.peak_od * overlap)
