"""Array geometries, steering vectors, and channel realizations.

Everything is normalized for link-level Monte Carlo work: large-scale
fading collapses to a unit per-branch gain, element spacing is expressed
in carrier wavelengths, and the far-field model keeps small-scale draws
independent of the absolute carrier frequency.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .regulation import RegulationMatrix
from .rng import RngStream, as_generator

ULA = "ula"
UPA = "upa"
LOS = "los"
RAYLEIGH = "rayleigh"
_MODELS = (LOS, RAYLEIGH)

# Visible half-space of a linear/planar aperture: angles are drawn from
# these ranges for line-of-sight realizations.
AZIMUTH_RANGE = (-np.pi / 2, np.pi / 2)
ELEVATION_RANGE = (-np.pi / 4, np.pi / 4)


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear or planar element layout, spacing in wavelengths."""

    kind: str
    n_x: int
    n_y: int = 1
    spacing: float = 0.5

    def __post_init__(self):
        if self.kind not in (ULA, UPA):
            raise ValueError(f"kind must be '{ULA}' or '{UPA}', got {self.kind!r}")
        if self.n_x < 1 or self.n_y < 1:
            raise ValueError(f"element counts must be >= 1, got {self.n_x}x{self.n_y}")
        if self.kind == ULA and self.n_y != 1:
            raise ValueError(f"a ULA has n_y = 1, got n_y = {self.n_y}")
        if not self.spacing > 0:
            raise ValueError(f"spacing must be positive, got {self.spacing}")

    @property
    def num_elements(self) -> int:
        return self.n_x * self.n_y

    @classmethod
    def ula(cls, n: int, spacing: float = 0.5) -> "ArrayGeometry":
        return cls(ULA, n, 1, spacing)

    @classmethod
    def upa(cls, n_x: int, n_y: int, spacing: float = 0.5) -> "ArrayGeometry":
        return cls(UPA, n_x, n_y, spacing)


def _phase_ramp(n: int, spatial_freq: float, spacing: float) -> np.ndarray:
    return np.exp(1j * 2.0 * np.pi * spacing * spatial_freq * np.arange(n))


def ula_steering(n: int, angle: float, spacing: float = 0.5) -> np.ndarray:
    """Far-field steering vector of an n-element uniform linear array.

    Entry k is exp(+j * 2*pi * spacing * k * sin(angle)), k = 0..n-1;
    every entry has unit modulus.  ``angle`` is measured from broadside,
    visible range [-pi/2, pi/2].
    """
    if n < 1:
        raise ValueError(f"element count must be >= 1, got {n}")
    if not np.isfinite(angle):
        raise ValueError(f"angle must be finite, got {angle}")
    if not spacing > 0:
        raise ValueError(f"spacing must be positive, got {spacing}")
    return _phase_ramp(n, np.sin(angle), spacing)


def upa_steering(geom: ArrayGeometry, azimuth: float, elevation: float) -> np.ndarray:
    """Far-field steering vector of a uniform planar array.

    Kronecker product of the x-axis factor (spatial frequency
    sin(azimuth)*cos(elevation)) and the y-axis factor (sin(elevation)).
    Element ordering is row-major over (x, y): index = ix * n_y + iy.
    """
    if geom.kind != UPA:
        raise ValueError(f"upa_steering needs a UPA geometry, got kind {geom.kind!r}")
    if not (np.isfinite(azimuth) and np.isfinite(elevation)):
        raise ValueError(f"angles must be finite, got ({azimuth}, {elevation})")
    a_x = _phase_ramp(geom.n_x, np.sin(azimuth) * np.cos(elevation), geom.spacing)
    a_y = _phase_ramp(geom.n_y, np.sin(elevation), geom.spacing)
    return np.kron(a_x, a_y)


def _draw_steering(geom: ArrayGeometry, gen: np.random.Generator) -> np.ndarray:
    azimuth = gen.uniform(*AZIMUTH_RANGE)
    if geom.kind == UPA:
        elevation = gen.uniform(*ELEVATION_RANGE)
        return upa_steering(geom, azimuth, elevation)
    return ula_steering(geom.n_x, azimuth, geom.spacing)


def gen_channel(model: str, rx_geom: ArrayGeometry, tx_geom: ArrayGeometry,
                rng: "RngStream | np.random.Generator") -> np.ndarray:
    """One small-scale channel realization, shape (rx_elements, tx_elements).

    ``los``: rank-1 outer product of receive and transmit steering vectors
    at angles drawn uniformly from the visible ranges, scaled by a
    unit-magnitude gain with uniform random phase.  ``rayleigh``: i.i.d.
    circularly-symmetric complex Gaussian entries of unit variance.
    Deterministic given the stream.  Draw order: rx angles, tx angles,
    gain phase.
    """
    model = model.lower()
    if model not in _MODELS:
        raise ValueError(f"model must be one of {_MODELS}, got {model!r}")
    gen = as_generator(rng)
    if model == LOS:
        a_rx = _draw_steering(rx_geom, gen)
        a_tx = _draw_steering(tx_geom, gen)
        gain = np.exp(1j * gen.uniform(0.0, 2.0 * np.pi))
        return gain * np.outer(a_rx, a_tx.conj())
    shape = (rx_geom.num_elements, tx_geom.num_elements)
    return (gen.standard_normal(shape) + 1j * gen.standard_normal(shape)) / np.sqrt(2.0)


def _as_matrix(a, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.ndim == 1:
        return a.reshape(-1, 1)
    if a.ndim == 2:
        return a
    raise ValueError(f"{name} must be a vector or matrix, got ndim={a.ndim}")


def cascaded_channel(H, Phi: RegulationMatrix, G, direct=None) -> np.ndarray:
    """Effective surface-relayed link H^H diag(Phi) G (+ direct), UE x NB.

    H is the surface-to-UE link (elements x UE antennas), G the NB-to-
    surface link (elements x NB antennas); a present ``direct`` term is
    added, otherwise the direct path is treated as blocked.
    """
    H = _as_matrix(H, "H")
    G = _as_matrix(G, "G")
    n = len(Phi)
    if H.shape[0] != n:
        raise ValueError(f"H has {H.shape[0]} surface elements but Phi has {n}")
    if G.shape[0] != n:
        raise ValueError(f"G has {G.shape[0]} surface elements but Phi has {n}")
    out = (H.conj().T * Phi.coefficients()) @ G
    if direct is not None:
        direct = _as_matrix(direct, "direct")
        if direct.shape != out.shape:
            raise ValueError(f"direct path shape {direct.shape} does not match cascade {out.shape}")
        out = out + direct
    return out


def comp_jt_channel(branches: Sequence[Tuple]) -> np.ndarray:
    """Joint-transmission composite: sum of per-branch cascades.

    ``branches`` holds (H, Phi, G) triples with consistent outer
    dimensions; the direct path is blocked by assumption.
    """
    if not branches:
        raise ValueError("joint transmission needs at least one branch")
    total = None
    for H, phi, G in branches:
        term = cascaded_channel(H, phi, G)
        if total is None:
            total = term
        elif term.shape != total.shape:
            raise ValueError(f"branch cascade shape {term.shape} does not match {total.shape}")
        else:
            total = total + term
    return total


@dataclass
class ChannelSet:
    """One realization of every link in a scenario.

    ``branches`` holds per-surface (G, H) pairs: G is NB-to-surface
    (elements x NB antennas), H surface-to-UE (elements x UE antennas).
    ``direct`` is None under the blocked-direct-path assumption.
    ``large_scale_gain`` is a per-branch linear scalar (normalized to 1).
    """

    branches: Sequence[Tuple[np.ndarray, np.ndarray]]
    direct: Optional[np.ndarray] = None
    carrier_freq: float = 28e9
    large_scale_gain: Tuple[float, ...] = ()

    def __post_init__(self):
        if not self.branches:
            raise ValueError("a channel set needs at least one branch")
        branches = []
        nb = ue = None
        for i, (G, H) in enumerate(self.branches):
            G = _as_matrix(G, f"G[{i}]")
            H = _as_matrix(H, f"H[{i}]")
            if G.shape[0] != H.shape[0]:
                raise ValueError(
                    f"branch {i}: G has {G.shape[0]} surface elements but H has {H.shape[0]}")
            if nb is None:
                nb, ue = G.shape[1], H.shape[1]
            elif G.shape[1] != nb or H.shape[1] != ue:
                raise ValueError(
                    f"branch {i}: antenna counts ({G.shape[1]} NB, {H.shape[1]} UE) "
                    f"differ from branch 0 ({nb} NB, {ue} UE)")
            branches.append((G, H))
        self.branches = tuple(branches)
        if self.direct is not None:
            d = _as_matrix(self.direct, "direct")
            if d.shape != (ue, nb):
                raise ValueError(f"direct path shape {d.shape} is not (UE x NB) = ({ue}, {nb})")
            self.direct = d
        if not self.carrier_freq > 0:
            raise ValueError(f"carrier frequency must be positive, got {self.carrier_freq}")
        gains = tuple(float(g) for g in self.large_scale_gain) or (1.0,) * len(branches)
        if len(gains) != len(branches):
            raise ValueError(f"{len(branches)} branches but {len(gains)} large-scale gains")
        if any(g <= 0 for g in gains):
            raise ValueError("large-scale gains must be positive")
        self.large_scale_gain = gains

    @property
    def nb_antennas(self) -> int:
        return self.branches[0][0].shape[1]

    @property
    def ue_antennas(self) -> int:
        return self.branches[0][1].shape[1]


def draw_channel_set(model: str, ris_geoms: Sequence[ArrayGeometry], nb_geom: ArrayGeometry,
                     ue_geom: ArrayGeometry, rng: "RngStream | np.random.Generator",
                     carrier_freq: float = 28e9) -> ChannelSet:
    """Draw all per-surface links of one trial, direct path blocked.

    Branches share the (normalized) large-scale gain but use independent
    small-scale draws; draw order is branch-major, G before H.
    """
    gen = as_generator(rng)
    branches = [(gen_channel(model, geom, nb_geom, gen), gen_channel(model, geom, ue_geom, gen))
                for geom in ris_geoms]
    return ChannelSet(branches, direct=None, carrier_freq=carrier_freq)
