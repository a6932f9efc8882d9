"""Link metrics: SINR, Shannon rate, RSRP, and the neighbor-cell
interference-limiting scheme quantities."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence, Tuple

import numpy as np

_BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class LinkBudget:
    """Normalized link budget: linear transmit power and noise variance."""

    power: float = 1.0
    noise_var: float = 3.16e-11

    def __post_init__(self):
        if not self.power > 0:
            raise ValueError(f"power must be positive, got {self.power}")
        if not self.noise_var > 0:
            raise ValueError(f"noise variance must be positive, got {self.noise_var}")


@dataclass(frozen=True)
class InterferenceGeometry:
    """Geometry and thresholds for the neighbor-interference schemes.

    ``normal_angle``: angle between the surface beam normal and the line
    joining the serving and neighbor base stations.  ``width_table`` maps
    increasing angle bounds to beam widths (non-increasing: small angles
    get broad beams, large angles narrow ones).
    """

    normal_angle: float
    beam_width: float
    s0: float
    p_i0: float
    width_table: Tuple[Tuple[float, float], ...] = ()

    def __post_init__(self):
        if not np.isfinite(self.normal_angle):
            raise ValueError(f"normal angle must be finite, got {self.normal_angle}")
        if not 0.0 < self.beam_width < 2.0 * np.pi:
            raise ValueError(f"beam width must lie in (0, 2*pi), got {self.beam_width}")
        if not self.s0 > 0:
            raise ValueError(f"strength threshold s0 must be positive, got {self.s0}")
        if not 0.0 < self.p_i0 <= 1.0:
            raise ValueError(f"probability threshold must lie in (0, 1], got {self.p_i0}")
        table = tuple((float(b), float(w)) for b, w in self.width_table)
        bounds = [b for b, _ in table]
        if any(b2 <= b1 for b1, b2 in zip(bounds, bounds[1:])):
            raise ValueError("width table angle bounds must be strictly increasing")
        widths = [w for _, w in table]
        if any(w <= 0 for w in widths):
            raise ValueError("beam widths must be positive")
        if any(w2 > w1 for w1, w2 in zip(widths, widths[1:])):
            raise ValueError("beam widths must be non-increasing with angle")
        object.__setattr__(self, "width_table", table)


def sinr(desired, interferers: Sequence = (), budget: LinkBudget = LinkBudget()) -> float:
    """Signal to interference-plus-noise ratio of an effective channel.

    ``desired`` is the effective channel (scalar, vector or matrix;
    squared Frobenius norm taken); ``interferers`` holds (channel, power)
    pairs.  With no interferers this reduces to plain SNR.
    """
    signal = float(np.sum(np.abs(np.asarray(desired, dtype=complex)) ** 2))
    interference = 0.0
    for channel, p in interferers:
        if p < 0:
            raise ValueError(f"interferer power must be non-negative, got {p}")
        interference += float(np.sum(np.abs(np.asarray(channel, dtype=complex)) ** 2)) * p
    return signal * budget.power / (interference + budget.noise_var)


def achievable_rate(gamma: float) -> float:
    """Shannon spectral efficiency log2(1 + gamma) in bits/s/Hz."""
    if gamma < 0:
        raise ValueError(f"SINR must be non-negative, got {gamma}")
    return float(np.log2(1.0 + gamma))


def rsrp(effective_channel, precoder, budget: LinkBudget = LinkBudget()) -> float:
    """Reference-signal received power, linear, averaged per receive antenna.

    ``precoder`` must have unit Frobenius norm; the result is
    power * ||H f||^2 / n_rx.
    """
    H = np.atleast_2d(np.asarray(effective_channel, dtype=complex))
    f = np.asarray(precoder, dtype=complex).reshape(-1)
    if H.shape[1] != f.size:
        raise ValueError(f"channel has {H.shape[1]} transmit ports but precoder has {f.size}")
    norm = np.linalg.norm(f)
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"precoder must have unit norm, got {norm}")
    received = H @ f
    return float(budget.power * np.sum(np.abs(received) ** 2) / H.shape[0])


def linear_to_dbm(value: float, scale_watts: float = 1.0) -> float:
    """Convert a normalized linear power to dBm given a watts-per-unit scale."""
    if value < 0:
        raise ValueError(f"power must be non-negative, got {value}")
    if value == 0:
        return float("-inf")
    return float(10.0 * np.log10(value * scale_watts / 1e-3))


def scheme1_check(s: float, geom: InterferenceGeometry) -> bool:
    """Semi-static strength profile: admit the beam iff s*cos(angle) <= s0."""
    if s < 0:
        raise ValueError(f"signal strength must be non-negative, got {s}")
    return bool(s * np.cos(geom.normal_angle) <= geom.s0)


class EquivalentInterference(NamedTuple):
    p_i: float
    i_e: float
    admitted: bool


def scheme2_equivalent_interference(s: float, geom: InterferenceGeometry) -> EquivalentInterference:
    """Narrow-beam equivalent interference: probability times strength.

    p_i = beam_width / 2*pi; i_e = p_i * s; ``admitted`` reports whether
    p_i stays within the configured probability threshold (boundary
    admitted).
    """
    if s < 0:
        raise ValueError(f"signal strength must be non-negative, got {s}")
    p_i = geom.beam_width / (2.0 * np.pi)
    return EquivalentInterference(float(p_i), float(p_i * s), bool(p_i <= geom.p_i0 + _BOUNDARY_TOL))


def scheme3_select_width(angle: float, geom: InterferenceGeometry) -> float:
    """Angle-dependent beam width: first table row whose bound exceeds the angle."""
    if not geom.width_table:
        raise ValueError("width table is empty")
    for bound, width in geom.width_table:
        if angle < bound:
            return width
    raise ValueError(f"angle {angle} exceeds every table bound")
