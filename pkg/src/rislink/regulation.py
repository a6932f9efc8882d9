"""Reflection-state synthesis for programmable passive surfaces.

A surface state is a diagonal matrix of per-element coefficients
``amplitude * exp(j*phase)`` with amplitude <= 1 (a passive element cannot
amplify).  This module builds those states for every regulation policy the
simulator compares: per-user matched phases, random phases, global phase
offsets and their estimation/calibration, weighted multi-beam superposition
(pattern addition), element blocking, mixed-channel matching, and uniform
phase quantization.

Phase conventions: ``optimal_regulation(h, g)`` aligns the per-element
cascade ``sum_n h_n * phi_n * g_n``, i.e. h and g are the two factor
vectors of the cascade as seen at the receiver.  For a physical link
``H^H diag(phi) G`` the receive-side factor is the conjugated column of H.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache as _functools_lru_cache
from typing import Mapping, Optional, Sequence

import numpy as np

from .rng import RngStream, as_generator

TWO_PI = 2.0 * np.pi
PASSIVITY_TOL = 1e-12
UNIT_MODULUS_TOL = 1e-12

SUM_ABS = "sum_abs"
SUM_SQ = "sum_sq"
_CONSTRAINTS = (SUM_ABS, SUM_SQ)


@dataclass
class RegulationMatrix:
    """Diagonal per-element reflection state: ``amplitude * exp(j*phase)``.

    Phases are stored normalized to [0, 2*pi).  ``quant_bits = b`` records
    that every phase sits on the uniform 2^b-point grid {2*pi*k / 2^b}.
    """

    phases: np.ndarray
    amplitudes: Optional[np.ndarray] = None
    quant_bits: Optional[int] = None

    def __post_init__(self):
        phases = np.asarray(self.phases, dtype=float)
        if phases.ndim != 1 or phases.size == 0:
            raise ValueError("phases must be a non-empty 1-D vector")
        if not np.all(np.isfinite(phases)):
            raise ValueError("phases must be finite")
        self.phases = np.mod(phases, TWO_PI)

        if self.amplitudes is None:
            self.amplitudes = np.ones(self.phases.size)
        else:
            amps = np.asarray(self.amplitudes, dtype=float)
            if amps.shape != self.phases.shape:
                raise ValueError(
                    f"amplitudes shape {amps.shape} does not match phases shape {self.phases.shape}"
                )
            if not np.all(np.isfinite(amps)):
                raise ValueError("amplitudes must be finite")
            if np.any(amps < 0.0):
                raise ValueError(f"amplitudes must be non-negative, min is {amps.min()}")
            if np.any(amps > 1.0 + PASSIVITY_TOL):
                raise ValueError(f"passivity violated: max amplitude {amps.max()} > 1")
            self.amplitudes = np.minimum(amps, 1.0)

        if self.quant_bits is not None:
            bits = int(self.quant_bits)
            if bits < 1:
                raise ValueError(f"quant_bits must be >= 1, got {self.quant_bits}")
            step = TWO_PI / (1 << bits)
            off_grid = np.abs(self.phases - np.round(self.phases / step) * step)
            if np.any(off_grid > 1e-9):
                raise ValueError(f"phases are not on the {1 << bits}-point grid for quant_bits={bits}")
            self.quant_bits = bits

    def __len__(self) -> int:
        return self.phases.size

    def coefficients(self) -> np.ndarray:
        """Complex diagonal entries amplitude_n * exp(j*phase_n).

        Cached on first use; instances are treated as immutable.
        """
        cached = getattr(self, "_coefficients", None)
        if cached is None:
            cached = self.amplitudes * np.exp(1j * self.phases)
            object.__setattr__(self, "_coefficients", cached)
        return cached

    def matrix(self) -> np.ndarray:
        """Dense diagonal matrix form."""
        return np.diag(self.coefficients())

    @classmethod
    def identity(cls, n: int) -> "RegulationMatrix":
        """All-pass state: unit amplitude, zero phase."""
        if n < 1:
            raise ValueError(f"element count must be >= 1, got {n}")
        return cls(np.zeros(n))

    @classmethod
    def from_coefficients(cls, values: Sequence[complex],
                          quant_bits: Optional[int] = None) -> "RegulationMatrix":
        c = np.asarray(values, dtype=complex)
        return cls(np.angle(c), np.abs(c), quant_bits)


@dataclass(frozen=True)
class PhaseOffset:
    """Unit-modulus global phase offset of one surface's regulation state.

    ``path_phase`` keeps an optional additive propagation-length phase
    (radians) separate from the regulation-induced offset, so the usual
    "co-located surfaces, negligible path phase" approximation stays
    testable; it defaults to 0.
    """

    value: complex
    path_phase: float = 0.0

    def __post_init__(self):
        v = complex(self.value)
        if abs(abs(v) - 1.0) > UNIT_MODULUS_TOL:
            raise ValueError(f"offset must have unit modulus, got |{v}| = {abs(v)}")
        object.__setattr__(self, "value", v)
        object.__setattr__(self, "path_phase", float(self.path_phase))

    @classmethod
    def from_phase(cls, phi: float, path_phase: float = 0.0) -> "PhaseOffset":
        """Offset ``exp(-j*phi)`` for a regulation reference phase phi."""
        return cls(complex(np.exp(-1j * phi)), path_phase)

    def total(self) -> complex:
        """Combined multiplier including the additive path phase."""
        return self.value * complex(np.exp(-1j * self.path_phase))

    @property
    def angle(self) -> float:
        return float(np.angle(self.total()))


@dataclass(frozen=True)
class PAWeights:
    """Per-user superposition weights.

    Magnitudes ``rho`` in [0, 1], rotation angles ``theta`` in (0, 2*pi];
    the complex weight of user k is ``rho_k * exp(-j*theta_k)``.
    """

    rho: tuple
    theta: tuple

    def __post_init__(self):
        rho = tuple(float(r) for r in self.rho)
        theta = tuple(float(t) for t in self.theta)
        if len(rho) != len(theta) or not rho:
            raise ValueError("rho and theta must be non-empty and the same length")
        if any(r < -PASSIVITY_TOL or r > 1.0 + PASSIVITY_TOL for r in rho):
            raise ValueError(f"rho values must lie in [0, 1], got {rho}")
        if any(t <= 0.0 or t > TWO_PI + 1e-9 for t in theta):
            raise ValueError(f"theta values must lie in (0, 2*pi], got {theta}")
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "theta", theta)

    def alphas(self) -> np.ndarray:
        return np.array(self.rho) * np.exp(-1j * np.array(self.theta))


@dataclass
class BlockPartition:
    """Disjoint element blocks, each regulated for a single owner user.

    ``beta`` maps each owner to the energy fraction of its signal incident
    on its own block (in (0, 1]); the remaining 1-beta falls on foreign
    blocks and is regulated unexpectedly there.
    """

    blocks: Sequence[np.ndarray]
    owners: Sequence[int]
    beta: Mapping[int, float]

    def __post_init__(self):
        blocks = tuple(np.asarray(b, dtype=int) for b in self.blocks)
        owners = tuple(int(o) for o in self.owners)
        if not blocks:
            raise ValueError("partition needs at least one block")
        if len(blocks) != len(owners):
            raise ValueError(f"{len(blocks)} blocks but {len(owners)} owners")
        if any(b.size == 0 for b in blocks):
            raise ValueError("blocks must be non-empty")
        joined = np.sort(np.concatenate(blocks))
        n = joined.size
        if not np.array_equal(joined, np.arange(n)):
            raise ValueError("blocks must be disjoint and cover the element range 0..N-1")
        beta = {int(k): float(v) for k, v in dict(self.beta).items()}
        for owner in owners:
            if owner not in beta:
                raise ValueError(f"missing beta for owner {owner}")
        for owner, b in beta.items():
            if not 0.0 < b <= 1.0:
                raise ValueError(f"beta for owner {owner} must lie in (0, 1], got {b}")
        self.blocks = blocks
        self.owners = owners
        self.beta = beta

    @property
    def n(self) -> int:
        return sum(b.size for b in self.blocks)

    @classmethod
    def single_block(cls, n: int, owner: int, beta: float = 1.0) -> "BlockPartition":
        return cls((np.arange(n),), (owner,), {owner: beta})

    @classmethod
    def two_blocks(cls, n: int, n_first: int, owners=(0, 1),
                   betas: Optional[Sequence[float]] = None) -> "BlockPartition":
        """Split 0..n-1 at ``n_first``; betas default to the size proportions."""
        if not 0 < n_first < n:
            raise ValueError(f"split index must lie strictly inside 0..{n}, got {n_first}")
        if betas is None:
            betas = (n_first / n, 1.0 - n_first / n)
        blocks = (np.arange(n_first), np.arange(n_first, n))
        return cls(blocks, tuple(owners), {owners[0]: betas[0], owners[1]: betas[1]})


def optimal_regulation(h: Sequence[complex], g: Sequence[complex]) -> RegulationMatrix:
    """Matched single-user state: phase_n = -(angle(h_n) + angle(g_n)).

    Aligns every term of the cascade sum_n h_n*phi_n*g_n, making the
    effective scalar channel real, non-negative and equal to
    sum_n |h_n|*|g_n|.
    """
    h = np.asarray(h, dtype=complex).reshape(-1)
    g = np.asarray(g, dtype=complex).reshape(-1)
    if h.size != g.size:
        raise ValueError(f"factor lengths differ: {h.size} vs {g.size}")
    if h.size == 0:
        raise ValueError("factors must be non-empty")
    return RegulationMatrix(-(np.angle(h) + np.angle(g)))


def random_phase_regulation(n: int, rng: "RngStream | np.random.Generator") -> RegulationMatrix:
    """Unit-amplitude state with i.i.d. phases uniform on (0, 2*pi]."""
    if n < 1:
        raise ValueError(f"element count must be >= 1, got {n}")
    gen = as_generator(rng)
    # 1 - U[0,1) maps the half-open draw onto (0, 1]
    return RegulationMatrix(TWO_PI * (1.0 - gen.random(n)))


def apply_global_phase(phi: RegulationMatrix, c: PhaseOffset) -> RegulationMatrix:
    """Rotate every phase by the offset angle; amplitudes are untouched.

    A common unit-modulus factor never changes single-link beamforming
    gain; it only matters when several surfaces superpose at a receiver.
    """
    return RegulationMatrix(phi.phases + c.angle, phi.amplitudes.copy())


def estimate_phase_offset(obs_j: complex, obs_k: complex) -> PhaseOffset:
    """Relative offset between two surfaces from per-branch pilot observations.

    Returns the unit-modulus ratio of the normalized observations,
    (obs_j/|obs_j|) / (obs_k/|obs_k|); branch magnitudes cancel, so any
    non-zero pilot level works.
    """
    obs_j = complex(obs_j)
    obs_k = complex(obs_k)
    if obs_j == 0 or obs_k == 0:
        raise ValueError("offset estimation failed: zero pilot observation")
    return PhaseOffset(complex(np.exp(1j * (np.angle(obs_j) - np.angle(obs_k)))))


def calibrate(phi_2: RegulationMatrix, delta: PhaseOffset) -> RegulationMatrix:
    """Re-align a second surface onto the first using their estimated offset.

    With delta = offset(first)/offset(second), the calibrated state makes
    both branch contributions co-phase at the receiver.
    """
    return apply_global_phase(phi_2, delta)


def _check_weight_constraint(weights: np.ndarray, constraint: str) -> None:
    if constraint not in _CONSTRAINTS:
        raise ValueError(f"constraint must be one of {_CONSTRAINTS}, got {constraint!r}")
    mags = np.abs(weights)
    if constraint == SUM_ABS:
        total = mags.sum()
        if total > 1.0 + PASSIVITY_TOL:
            raise ValueError(f"weight constraint violated: sum of |alpha| = {total} > 1")
    else:
        total = np.square(mags).sum()
        if total > 1.0 + PASSIVITY_TOL:
            raise ValueError(f"weight constraint violated: sum of |alpha|^2 = {total} > 1")


def pa_superpose(components: Sequence, constraint: str = SUM_ABS) -> RegulationMatrix:
    """Multi-beam state as a weighted sum of per-user states.

    ``components`` is a sequence of (weight, RegulationMatrix) pairs; the
    result is the entrywise complex sum of weight_k * state_k.  Under the
    default sum-of-magnitudes constraint the triangle inequality keeps
    every resulting amplitude passive; under the sum-of-squares reading
    amplitudes saturate at 1.
    """
    if not components:
        raise ValueError("pa_superpose needs at least one component")
    weights = np.array([complex(w) for w, _ in components])
    mats = [m for _, m in components]
    n = len(mats[0])
    if any(len(m) != n for m in mats):
        raise ValueError("component matrices must all have the same length")
    _check_weight_constraint(weights, constraint)
    coeffs = np.zeros(n, dtype=complex)
    for w, m in zip(weights, mats):
        coeffs += w * m.coefficients()
    amps = np.abs(coeffs)
    if constraint == SUM_SQ:
        amps = np.minimum(amps, 1.0)
    return RegulationMatrix(np.angle(coeffs), amps)


@_functools_lru_cache(maxsize=16)
def _pa_grid(phase_steps: int, amp_steps: int, k_users: int, constraint: str):
    """Feasible candidate grid, shared across calls.

    Candidates are enumerated lexicographically over per-user
    (theta index, rho index) pairs; infeasible rows are dropped up front,
    which preserves first-maximum tie-breaking because pruning keeps the
    enumeration order.
    """
    thetas = TWO_PI * np.arange(1, phase_steps + 1) / phase_steps
    rhos = np.linspace(0.0, 1.0, amp_steps)
    per_user = phase_steps * amp_steps
    idx = np.arange(per_user ** k_users)
    rho_rows = np.empty((idx.size, k_users))
    theta_rows = np.empty((idx.size, k_users))
    rem = idx
    for u in range(k_users):
        div = per_user ** (k_users - 1 - u)
        pair = rem // div
        rem = rem % div
        theta_rows[:, u] = thetas[pair // amp_steps]
        rho_rows[:, u] = rhos[pair % amp_steps]
    if constraint == SUM_ABS:
        feasible = rho_rows.sum(axis=1) <= 1.0 + PASSIVITY_TOL
    else:
        feasible = np.square(rho_rows).sum(axis=1) <= 1.0 + PASSIVITY_TOL
    rho_rows = rho_rows[feasible]
    theta_rows = theta_rows[feasible]
    alphas = rho_rows * np.exp(-1j * theta_rows)
    return rho_rows, theta_rows, alphas


def pa_optimize(channels: Sequence, phase_steps: int = 16, amp_steps: int = 8, *,
                power: float = 1.0, noise_var: float = 1.0,
                constraint: str = SUM_ABS):
    """Exhaustive grid search over superposition weights.

    ``channels`` holds per-user factor pairs (h_k, g_k); each user's
    component state is its matched regulation.  The search sweeps rotation
    angles theta in (0, 2*pi] (``phase_steps`` points) and magnitudes rho
    in [0, 1] (``amp_steps`` points) per user, subject to the weight
    constraint, and maximizes the sum of per-user Shannon rates
    log2(1 + |effective_k|^2 * power / noise_var).  The equal-weight
    superposition is always evaluated as an extra candidate, so the
    returned optimum never falls below it.  Ties resolve to the
    lexicographically smallest grid index, independent of evaluation
    order.

    Returns (PAWeights, RegulationMatrix).
    """
    if not channels:
        raise ValueError("pa_optimize needs at least one user channel")
    k_users = len(channels)
    if k_users > 3:
        raise ValueError(f"exhaustive grid search is limited to 3 users, got {k_users}")
    if phase_steps < 2 or amp_steps < 2:
        raise ValueError(f"degenerate grid: need >= 2 steps per axis, got {phase_steps}x{amp_steps}")
    if power <= 0 or noise_var <= 0:
        raise ValueError("power and noise_var must be positive")
    if constraint not in _CONSTRAINTS:
        raise ValueError(f"constraint must be one of {_CONSTRAINTS}, got {constraint!r}")

    comps = [optimal_regulation(h, g) for h, g in channels]
    factors = np.stack([np.asarray(h, dtype=complex).reshape(-1) * np.asarray(g, dtype=complex).reshape(-1)
                        for h, g in channels])
    # cross[k, j] = effective channel of user k under user j's component state
    cross = factors @ np.stack([c.coefficients() for c in comps]).T
    scale = power / noise_var

    def objective(alpha_rows: np.ndarray) -> np.ndarray:
        eff = alpha_rows @ cross.T
        gain = eff.real ** 2 + eff.imag ** 2
        return np.log2(1.0 + gain * scale).sum(axis=1)

    rho_rows, theta_rows, alphas = _pa_grid(phase_steps, amp_steps, k_users, constraint)
    obj = objective(alphas)
    best = int(np.argmax(obj))
    best_val = float(obj[best])
    best_weights = (tuple(rho_rows[best]), tuple(theta_rows[best]))

    # Equal-weight superposition as a guaranteed reference candidate; the
    # grid wins ties so the result stays order-independent.
    eq_rho = np.full((1, k_users), 1.0 / k_users)
    eq_theta = np.full((1, k_users), TWO_PI)
    eq_obj = objective(eq_rho * np.exp(-1j * eq_theta))
    if eq_obj[0] > best_val:
        best_weights = (tuple(eq_rho[0]), tuple(eq_theta[0]))

    weights = PAWeights(best_weights[0], best_weights[1])
    matrix = pa_superpose(list(zip(weights.alphas(), comps)), constraint=constraint)
    return weights, matrix


def blocking_regulation(partition: BlockPartition, per_ue: Sequence[RegulationMatrix]) -> RegulationMatrix:
    """Composite state: each block carries its owner's regulation.

    ``per_ue`` is aligned with ``partition.blocks``; every matrix covers
    the full element range and only its restriction to the owned block is
    used.
    """
    if len(per_ue) != len(partition.blocks):
        raise ValueError(f"{len(partition.blocks)} blocks but {len(per_ue)} per-user matrices")
    n = partition.n
    for m in per_ue:
        if len(m) != n:
            raise ValueError(f"per-user matrices must cover all {n} elements, got {len(m)}")
    phases = np.empty(n)
    amps = np.empty(n)
    for block, m in zip(partition.blocks, per_ue):
        phases[block] = m.phases[block]
        amps[block] = m.amplitudes[block]
    bits = {m.quant_bits for m in per_ue}
    return RegulationMatrix(phases, amps, bits.pop() if len(bits) == 1 else None)


def blocking_effective_channel(partition: BlockPartition, per_ue: Sequence[RegulationMatrix],
                               h: Sequence[complex], g: Sequence[complex], ue: int) -> complex:
    """Received-signal factor for ``ue`` under a block-partitioned surface.

    Sums the block-restricted cascades, weighting the user's own block by
    sqrt(beta) and each foreign block by sqrt(1-beta), where beta is the
    user's own-block energy fraction.
    """
    if ue not in partition.beta:
        raise ValueError(f"no beta recorded for user {ue}")
    if len(per_ue) != len(partition.blocks):
        raise ValueError(f"{len(partition.blocks)} blocks but {len(per_ue)} per-user matrices")
    h = np.asarray(h, dtype=complex).reshape(-1)
    g = np.asarray(g, dtype=complex).reshape(-1)
    n = partition.n
    if h.size != n or g.size != n:
        raise ValueError(f"factor lengths {h.size}/{g.size} do not match the {n}-element partition")
    beta = partition.beta[ue]
    own_w = math.sqrt(beta)
    foreign_w = math.sqrt(1.0 - beta) if beta < 1.0 else 0.0
    u = h * g
    received = 0.0 + 0.0j
    for block, owner, m in zip(partition.blocks, partition.owners, per_ue):
        w = own_w if owner == ue else foreign_w
        received += w * np.sum(u[block] * m.coefficients()[block])
    return complex(received)


def mixed_channel_regulation(cascades: Sequence) -> RegulationMatrix:
    """Matched state for the superimposed per-user cascades.

    ``cascades`` holds per-user factor pairs (h_i, g_i); the state aligns
    the elementwise sum of h_i*g_i, which matches no single user exactly
    when their channels differ.
    """
    if not cascades:
        raise ValueError("mixed_channel_regulation needs at least one user")
    mixed = None
    for h, g in cascades:
        u = np.asarray(h, dtype=complex).reshape(-1) * np.asarray(g, dtype=complex).reshape(-1)
        mixed = u if mixed is None else mixed + u
    return optimal_regulation(mixed, np.ones(mixed.size))


def quantize(phi: RegulationMatrix, bits: int) -> RegulationMatrix:
    """Round every phase to the nearest of 2^bits uniform grid points.

    Exact midpoints round toward the smaller phase so the result is
    deterministic.  Amplitudes pass through; ``quant_bits`` is recorded.
    """
    bits = int(bits)
    if bits < 1:
        raise ValueError(f"bits must be >= 1, got {bits}")
    levels = 1 << bits
    step = TWO_PI / levels
    # ceil(x - 0.5) rounds halves down, i.e. ties go to the smaller phase
    k = np.ceil(phi.phases / step - 0.5)
    k = np.mod(k, levels)
    return RegulationMatrix(k * step, phi.amplitudes.copy(), quant_bits=bits)
