"""Scenario orchestration for the bundled collaboration experiments.

Each trial function draws one realization of every link, applies all the
regulation policies a scenario compares, and returns per-curve rate
samples over the surface-size sweep; aggregation into curves lives in
``montecarlo``.  Curve labels carry a mode tag: ``(ncm)`` for policies
needing network-supplied CSI or cross-surface coordination, ``(sam)``
for standalone policies, ``(side)`` for auxiliary non-rate metrics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Mapping, Optional, Sequence, Tuple

import numpy as np

from .channel import (
    LOS,
    RAYLEIGH,
    ArrayGeometry,
    draw_channel_set,
    gen_channel,
)
from .metrics import (
    InterferenceGeometry,
    LinkBudget,
    achievable_rate,
    scheme1_check,
    scheme2_equivalent_interference,
    scheme3_select_width,
    sinr,
)
from .regulation import (
    TWO_PI,
    BlockPartition,
    RegulationMatrix,
    blocking_effective_channel,
    blocking_regulation,
    calibrate,
    estimate_phase_offset,
    mixed_channel_regulation,
    optimal_regulation,
    pa_optimize,
    pa_superpose,
    random_phase_regulation,
)

COMP_JT = "comp-jt"
MULTI_UE_PA = "multi-ue-pa"
MULTI_UE_BLOCKING = "multi-ue-blocking"
MULTI_UE_NONCOLLAB = "multi-ue-noncollab"
MULTI_CELL = "multi-cell"
SCENARIOS = (COMP_JT, MULTI_UE_PA, MULTI_UE_BLOCKING, MULTI_UE_NONCOLLAB, MULTI_CELL)

NCM = "ncm"
SAM = "sam"
BOTH = "both"
SIDE = "side"
MODES = (NCM, SAM, BOTH)

JT_VARIANTS = ("coherent", "noncoherent", "calibrated", "dps")
INTERFERENCE_CASES = ("null", "random", "matched")
BLOCKING_OUTPUTS = ("per-beta", "sum-compare")

# Mode tag of each joint-transmission variant: co-phasing, calibration and
# dynamic surface selection all need network coordination.
_JT_MODE = {"coherent": NCM, "calibrated": NCM, "dps": NCM, "noncoherent": SAM}


class ConfigError(ValueError):
    """A scenario configuration violates one of its invariants."""


def default_interference_geometry() -> InterferenceGeometry:
    """Illustrative neighbor-cell geometry for the multi-cell preset.

    The strength threshold sits inside the preset sweep's matched-beam
    range so the semi-static check flips within the sweep; the width
    table assigns broad beams to small normal angles.
    """
    return InterferenceGeometry(
        normal_angle=np.pi / 3,
        beam_width=math.radians(2.0),
        s0=5e6,
        p_i0=1.0 / 60.0,
        width_table=(
            (np.pi / 6, math.radians(6.0)),
            (np.pi / 3, math.radians(4.0)),
            (np.pi, math.radians(2.0)),
        ),
    )


@dataclass(frozen=True)
class ScenarioConfig:
    """Full description of one experiment.

    ``ris_sweep`` is the x-axis: one geometry per swept surface size.
    ``carrier_freq`` is recorded for provenance; the normalized far-field
    model itself is frequency independent (spacing is in wavelengths).
    """

    scenario: str
    ris_sweep: Tuple[ArrayGeometry, ...]
    nb_geometry: ArrayGeometry
    ue_antennas: int = 1
    carrier_freq: float = 28e9
    budget: LinkBudget = field(default_factory=LinkBudget)
    trials: int = 1000
    seed: int = 20240
    mode: str = BOTH
    channel_model: str = LOS
    normalize: bool = True
    # joint transmission
    jt_variants: Tuple[str, ...] = ("coherent", "noncoherent")
    n_branches: int = 2
    # multi-user access
    n_ues: int = 2
    ofdma: bool = True
    pa_phase_steps: int = 16
    pa_amp_steps: int = 8
    beta_values: Tuple[float, ...] = (0.1, 0.2, 0.4, 0.5, 0.6, 0.8, 0.9)
    blocking_output: str = "per-beta"
    # multi-cell coordination
    interference_cases: Tuple[str, ...] = INTERFERENCE_CASES
    interference_geometry: InterferenceGeometry = field(default_factory=default_interference_geometry)
    preset: Optional[str] = None

    def validate(self) -> None:
        """Raise ConfigError naming the violated invariant."""
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"scenario: must be one of {SCENARIOS}, got {self.scenario!r}")
        if not self.ris_sweep:
            raise ConfigError("ris_sweep: sweep must be non-empty")
        sizes = [g.num_elements for g in self.ris_sweep]
        if len(set(sizes)) != len(sizes):
            raise ConfigError(f"ris_sweep: element counts must be unique, got {sizes}")
        if self.trials < 1:
            raise ConfigError(f"trials: must be >= 1, got {self.trials}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed: must fit in an unsigned 64-bit int, got {self.seed}")
        if self.ue_antennas < 1:
            raise ConfigError(f"ue_antennas: must be >= 1, got {self.ue_antennas}")
        if not self.carrier_freq > 0:
            raise ConfigError(f"carrier_freq: must be positive, got {self.carrier_freq}")
        if self.mode not in MODES:
            raise ConfigError(f"mode: must be one of {MODES}, got {self.mode!r}")
        if self.channel_model not in (LOS, RAYLEIGH):
            raise ConfigError(f"channel_model: must be '{LOS}' or '{RAYLEIGH}', got {self.channel_model!r}")
        if self.scenario == COMP_JT:
            if not self.jt_variants:
                raise ConfigError("jt_variants: at least one variant required")
            bad = [v for v in self.jt_variants if v not in JT_VARIANTS]
            if bad:
                raise ConfigError(f"jt_variants: unknown variants {bad}, valid: {JT_VARIANTS}")
            if self.n_branches < 2:
                raise ConfigError(
                    f"n_branches: joint transmission needs >= 2 surfaces, got {self.n_branches}")
        if self.scenario == MULTI_UE_PA and not 2 <= self.n_ues <= 3:
            raise ConfigError(f"n_ues: pattern-addition preset supports 2..3 users, got {self.n_ues}")
        if self.scenario in (MULTI_UE_BLOCKING, MULTI_UE_NONCOLLAB) and self.n_ues != 2:
            raise ConfigError(f"n_ues: {self.scenario} is defined for exactly 2 users, got {self.n_ues}")
        if self.scenario == MULTI_UE_PA and (self.pa_phase_steps < 2 or self.pa_amp_steps < 2):
            raise ConfigError(
                f"pa grid: need >= 2 steps per axis, got {self.pa_phase_steps}x{self.pa_amp_steps}")
        if self.scenario == MULTI_UE_BLOCKING:
            if not self.beta_values:
                raise ConfigError("beta_values: at least one blocking factor required")
            bad = [b for b in self.beta_values if not 0.0 < b <= 1.0]
            if bad:
                raise ConfigError(f"beta_values: blocking factors must lie in (0, 1], got {bad}")
            if self.blocking_output not in BLOCKING_OUTPUTS:
                raise ConfigError(
                    f"blocking_output: must be one of {BLOCKING_OUTPUTS}, got {self.blocking_output!r}")
        if self.scenario == MULTI_CELL:
            if not self.interference_cases:
                raise ConfigError("interference_cases: at least one case required")
            bad = [c for c in self.interference_cases if c not in INTERFERENCE_CASES]
            if bad:
                raise ConfigError(f"interference_cases: unknown cases {bad}, valid: {INTERFERENCE_CASES}")

    @property
    def x_values(self) -> Tuple[int, ...]:
        return tuple(int(g.num_elements) for g in self.ris_sweep)

    def canonical_dict(self) -> dict:
        """Plain nested dict, stable across runs, for config digests."""
        def geom(g: ArrayGeometry) -> dict:
            return {"kind": g.kind, "n_x": g.n_x, "n_y": g.n_y, "spacing": g.spacing}

        ig = self.interference_geometry
        return {
            "scenario": self.scenario,
            "ris_sweep": [geom(g) for g in self.ris_sweep],
            "nb_geometry": geom(self.nb_geometry),
            "ue_antennas": self.ue_antennas,
            "carrier_freq": self.carrier_freq,
            "budget": {"power": self.budget.power, "noise_var": self.budget.noise_var},
            "trials": self.trials,
            "seed": self.seed,
            "mode": self.mode,
            "channel_model": self.channel_model,
            "normalize": self.normalize,
            "jt_variants": list(self.jt_variants),
            "n_branches": self.n_branches,
            "n_ues": self.n_ues,
            "ofdma": self.ofdma,
            "pa_phase_steps": self.pa_phase_steps,
            "pa_amp_steps": self.pa_amp_steps,
            "beta_values": list(self.beta_values),
            "blocking_output": self.blocking_output,
            "interference_cases": list(self.interference_cases),
            "interference_geometry": {
                "normal_angle": ig.normal_angle,
                "beam_width": ig.beam_width,
                "s0": ig.s0,
                "p_i0": ig.p_i0,
                "width_table": [list(row) for row in ig.width_table],
            },
            "preset": self.preset,
        }


@dataclass(frozen=True)
class TrialResult:
    """Per-curve rate samples of one trial over the sweep points."""

    trial_index: int
    mode: str
    rates: Mapping[str, Tuple[float, ...]]

    def __post_init__(self):
        for label, samples in self.rates.items():
            arr = np.asarray(samples, dtype=float)
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"trial {self.trial_index}, curve {label!r}: non-finite sample")
            if np.any(arr < 0):
                raise ValueError(f"trial {self.trial_index}, curve {label!r}: negative sample")


def mrt_precoder(effective_channel) -> np.ndarray:
    """Matched transmit direction: dominant right singular vector.

    Returned with unit norm and rotated so the strongest receive entry of
    H @ f is real and non-negative (deterministic global phase).  A
    single-row channel reduces to the conjugate matched filter; tall
    channels go through the Gram matrix, both exact shortcuts.
    """
    H = np.atleast_2d(np.asarray(effective_channel, dtype=complex))
    if not np.any(H):
        raise ValueError("zero channel has no transmit direction")
    if H.shape[0] == 1:
        f = H[0].conj()
    elif H.shape[0] >= H.shape[1]:
        _, vecs = np.linalg.eigh(H.conj().T @ H)
        f = vecs[:, -1]
    else:
        _, _, vh = np.linalg.svd(H, full_matrices=False)
        f = vh[0].conj()
    f = f / np.linalg.norm(f)
    received = H @ f
    pivot = received[np.argmax(np.abs(received))]
    if pivot != 0:
        f = f * (pivot.conjugate() / abs(pivot))
    return f


def _effective_scalar(u: np.ndarray, reg: RegulationMatrix) -> complex:
    """Effective channel sum_n u_n * phi_n for per-element cascade factors u."""
    return complex(np.sum(u * reg.coefficients()))


def _rate(desired, interferers, budget: LinkBudget) -> float:
    return achievable_rate(sinr(desired, interferers, budget))


def _ref_factors(H: np.ndarray, G: np.ndarray, f: np.ndarray):
    """Cascade factor vectors at the reference receive antenna (index 0)
    when the NB transmits along f: (conj of H's reference column, G @ f)."""
    return H[:, 0].conj(), G @ f


def _ue_geometry(config: ScenarioConfig) -> ArrayGeometry:
    return ArrayGeometry.ula(config.ue_antennas)


def _label(base: str, tag: str) -> str:
    return f"{base} ({tag})"


def _joint_precoder(gs: Sequence[np.ndarray]) -> np.ndarray:
    """Shared NB beam for joint transmission over several surfaces.

    Dominant right singular direction of the stacked NB-to-surface links;
    the NB cannot observe the surfaces' phase states, so the beam is
    offset independent.
    """
    return mrt_precoder(np.vstack(gs))


# ---------------------------------------------------------------------------
# trial functions: config + per-trial generator -> {label: per-x samples}
# ---------------------------------------------------------------------------

def _trial_comp_jt(config: ScenarioConfig, gen: np.random.Generator) -> Dict[str, Tuple[float, ...]]:
    ue_geom = _ue_geometry(config)
    labels = {v: _label(f"{v}-jt" if v != "dps" else "dps", _JT_MODE[v]) for v in config.jt_variants}
    out: Dict[str, list] = {labels[v]: [] for v in config.jt_variants}
    n_br = config.n_branches
    for geom in config.ris_sweep:
        chans = draw_channel_set(config.channel_model, (geom,) * n_br, config.nb_geometry,
                                 ue_geom, gen, config.carrier_freq)
        gs = [G for G, _ in chans.branches]
        hs = [H for _, H in chans.branches]
        f = _joint_precoder(gs)
        factors = [_ref_factors(H, G, f) for G, H in chans.branches]
        us = [h * g for h, g in factors]
        regs = [optimal_regulation(h, g) for h, g in factors]
        # each branch contribution is real-positive after matched regulation
        e = np.array([_effective_scalar(us[b], regs[b]) for b in range(n_br)])
        # per-branch reference-phase offsets, uniform on (0, 2*pi]; drawn
        # every sweep point so the stream is identical across variant sets
        offsets = TWO_PI * (1.0 - gen.random(n_br))
        c = np.exp(-1j * offsets)
        for variant in config.jt_variants:
            if variant == "coherent":
                amp = abs(e.sum())
            elif variant == "noncoherent":
                amp = abs((e * c).sum())
            elif variant == "calibrated":
                obs = e * c  # per-branch uplink pilot observations at the NB
                regs_cal = [regs[0]]
                regs_cal += [calibrate(regs[b], estimate_phase_offset(obs[0], obs[b]))
                             for b in range(1, n_br)]
                e_cal = np.array([_effective_scalar(us[b], regs_cal[b]) for b in range(n_br)])
                amp = abs((e_cal * c).sum())
            else:  # dps: best single surface, NB beam matched to that surface alone
                best = 0.0
                for G, H in chans.branches:
                    fb = mrt_precoder(G)
                    hb, gb = _ref_factors(H, G, fb)
                    best = max(best, float(np.sum(np.abs(hb * gb))))
                amp = best
            out[labels[variant]].append(_rate(amp, (), config.budget))
    return {k: tuple(v) for k, v in out.items()}


def _trial_multi_ue_pa(config: ScenarioConfig, gen: np.random.Generator) -> Dict[str, Tuple[float, ...]]:
    """Multi-user access on one surface via superposed per-user states.

    All users share the NB's illumination beam toward the surface, so a
    curve's rate isolates the regulation policy: per-user re-optimization
    of the transmit beam would partially undo a mismatched surface state
    by harvesting off-beam scattered energy.  Without OFDMA the other
    users' streams ride the same illumination and interfere through the
    victim's own cascade.
    """
    ue_geom = _ue_geometry(config)
    k_ues = config.n_ues
    labels = {
        "ideal": _label("ideal", NCM),
        "pa-opt": _label("pa-opt", NCM),
        "pa": _label("pa", NCM),
        "unexpected": _label("unexpected", SAM),
        "random": _label("random-phase", SAM),
    }
    out: Dict[str, list] = {v: [] for v in labels.values()}
    for geom in config.ris_sweep:
        m = geom.num_elements
        G = gen_channel(config.channel_model, geom, config.nb_geometry, gen)
        Hs = [gen_channel(config.channel_model, geom, ue_geom, gen) for _ in range(k_ues)]
        f0 = mrt_precoder(G)
        factors = [_ref_factors(H, G, f0) for H in Hs]
        us = [h * g for h, g in factors]
        regs = [optimal_regulation(h, g) for h, g in factors]
        reg_rand = random_phase_regulation(m, gen)
        reg_pa = pa_superpose([(1.0 / k_ues, r) for r in regs])
        _, reg_opt = pa_optimize(factors, config.pa_phase_steps, config.pa_amp_steps,
                                 power=config.budget.power, noise_var=config.budget.noise_var)
        states = {
            "ideal": regs,
            "unexpected": [regs[(k + 1) % k_ues] for k in range(k_ues)],
            "pa": [reg_pa] * k_ues,
            "pa-opt": [reg_opt] * k_ues,
            "random": [reg_rand] * k_ues,
        }
        for name, per_ue in states.items():
            rates = []
            for k in range(k_ues):
                e_k = _effective_scalar(us[k], per_ue[k])
                interferers = [] if config.ofdma else [(e_k, config.budget.power)] * (k_ues - 1)
                rates.append(_rate(e_k, interferers, config.budget))
            out[labels[name]].append(float(np.mean(rates)))
    return {k: tuple(v) for k, v in out.items()}


def _trial_blocking(config: ScenarioConfig, gen: np.random.Generator) -> Dict[str, Tuple[float, ...]]:
    ue_geom = _ue_geometry(config)
    per_beta = config.blocking_output == "per-beta"
    out: Dict[str, list] = {}
    if per_beta:
        out[_label("target full-panel", NCM)] = []
        out[_label("nontarget full-panel", SAM)] = []
        for beta in config.beta_values:
            out[_label(f"target b={beta:g}", NCM)] = []
            out[_label(f"nontarget b={beta:g}", NCM)] = []
    else:
        out[_label("sum half-block", NCM)] = []
        out[_label("sum normal-ris", SAM)] = []
    budget = config.budget
    for geom in config.ris_sweep:
        m = geom.num_elements
        G = gen_channel(config.channel_model, geom, config.nb_geometry, gen)
        H0 = gen_channel(config.channel_model, geom, ue_geom, gen)
        H1 = gen_channel(config.channel_model, geom, ue_geom, gen)
        f0 = mrt_precoder(G)
        h0, g = _ref_factors(H0, G, f0)
        h1, _ = _ref_factors(H1, G, f0)
        u0, u1 = h0 * g, h1 * g
        reg0 = optimal_regulation(h0, g)
        reg1 = optimal_regulation(h1, g)
        # full panel matched to the target user; the other user's signal is
        # regulated unexpectedly by the same state
        r_target_full = _rate(_effective_scalar(u0, reg0), (), budget)
        r_nontarget_full = _rate(_effective_scalar(u1, reg0), (), budget)

        def blocked_rates(beta: float):
            if beta == 1.0:
                part = BlockPartition.single_block(m, owner=0)
                composite = blocking_regulation(part, [reg0])
                e_t = _effective_scalar(u0, composite)
                return _rate(e_t, (), budget), r_nontarget_full
            n_first = min(max(int(round(beta * m)), 1), m - 1)
            part = BlockPartition.two_blocks(m, n_first, owners=(0, 1), betas=(beta, 1.0 - beta))
            regs = [reg0, reg1]
            e_t = blocking_effective_channel(part, regs, h0, g, ue=0)
            e_n = blocking_effective_channel(part, regs, h1, g, ue=1)
            return _rate(e_t, (), budget), _rate(e_n, (), budget)

        if per_beta:
            out[_label("target full-panel", NCM)].append(r_target_full)
            out[_label("nontarget full-panel", SAM)].append(r_nontarget_full)
            for beta in config.beta_values:
                r_t, r_n = blocked_rates(beta)
                out[_label(f"target b={beta:g}", NCM)].append(r_t)
                out[_label(f"nontarget b={beta:g}", NCM)].append(r_n)
        else:
            r_t, r_n = blocked_rates(0.5)
            out[_label("sum half-block", NCM)].append(r_t + r_n)
            out[_label("sum normal-ris", SAM)].append(r_target_full + r_nontarget_full)
    return {k: tuple(v) for k, v in out.items()}


def _trial_noncollab(config: ScenarioConfig, gen: np.random.Generator) -> Dict[str, Tuple[float, ...]]:
    ue_geom = _ue_geometry(config)
    labels = {
        "perfect": _label("ue1 perfect-csi", NCM),
        "mixed": _label("ue2 mixed-channel", SAM),
        "foreign": _label("ue2 ue1-csi", SAM),
        "random": _label("ue2 random-phase", SAM),
    }
    out: Dict[str, list] = {v: [] for v in labels.values()}
    budget = config.budget
    for geom in config.ris_sweep:
        m = geom.num_elements
        G = gen_channel(config.channel_model, geom, config.nb_geometry, gen)
        H0 = gen_channel(config.channel_model, geom, ue_geom, gen)
        H1 = gen_channel(config.channel_model, geom, ue_geom, gen)
        f0 = mrt_precoder(G)
        h0, g = _ref_factors(H0, G, f0)
        h1, _ = _ref_factors(H1, G, f0)
        u0, u1 = h0 * g, h1 * g
        reg0 = optimal_regulation(h0, g)
        reg_mix = mixed_channel_regulation([(h0, g), (h1, g)])
        reg_rand = random_phase_regulation(m, gen)
        out[labels["perfect"]].append(_rate(_effective_scalar(u0, reg0), (), budget))
        out[labels["mixed"]].append(_rate(_effective_scalar(u1, reg_mix), (), budget))
        out[labels["foreign"]].append(_rate(_effective_scalar(u1, reg0), (), budget))
        out[labels["random"]].append(_rate(_effective_scalar(u1, reg_rand), (), budget))
    return {k: tuple(v) for k, v in out.items()}


def _trial_multi_cell(config: ScenarioConfig, gen: np.random.Generator) -> Dict[str, Tuple[float, ...]]:
    ue_geom = _ue_geometry(config)
    labels = {
        "null": _label("no-interference", NCM),
        "random": _label("random-interference", SAM),
        "matched": _label("matched-interference", SAM),
    }
    out: Dict[str, list] = {labels[c]: [] for c in config.interference_cases}
    side = {
        "matched-power": _label("matched-interference-power", SIDE),
        "random-power": _label("random-interference-power", SIDE),
        "scheme1": _label("scheme1-admit-rate", SIDE),
        "scheme2": _label("scheme2-equivalent-interference", SIDE),
        "scheme3": _label("scheme3-beam-width", SIDE),
    }
    for v in side.values():
        out[v] = []
    budget = config.budget
    igeom = config.interference_geometry
    for geom in config.ris_sweep:
        m = geom.num_elements
        # branch 0: serving cell's surface; branch 1: neighbor cell's
        # surface illuminating the same edge user (equal large-scale gain)
        chans = draw_channel_set(config.channel_model, (geom, geom), config.nb_geometry,
                                 ue_geom, gen, config.carrier_freq)
        (G1, H1), (G2, H2) = chans.branches
        f1 = mrt_precoder(G1)
        f2 = mrt_precoder(G2)
        h1, g1 = _ref_factors(H1, G1, f1)
        h2, g2 = _ref_factors(H2, G2, f2)
        u1, u2 = h1 * g1, h2 * g2
        e_sig = _effective_scalar(u1, optimal_regulation(h1, g1))
        e_matched = _effective_scalar(u2, optimal_regulation(h2, g2))
        e_random = _effective_scalar(u2, random_phase_regulation(m, gen))
        for case in config.interference_cases:
            if case == "null":
                interferers = []
            elif case == "random":
                interferers = [(e_random, budget.power)]
            else:
                interferers = [(e_matched, budget.power)]
            out[labels[case]].append(_rate(e_sig, interferers, budget))
        p_matched = abs(e_matched) ** 2
        p_random = abs(e_random) ** 2
        out[side["matched-power"]].append(p_matched)
        out[side["random-power"]].append(p_random)
        out[side["scheme1"]].append(1.0 if scheme1_check(p_matched, igeom) else 0.0)
        out[side["scheme2"]].append(scheme2_equivalent_interference(p_matched, igeom).i_e)
        out[side["scheme3"]].append(scheme3_select_width(igeom.normal_angle, igeom))
    return {k: tuple(v) for k, v in out.items()}


TRIAL_FUNCTIONS: Dict[str, Callable] = {
    COMP_JT: _trial_comp_jt,
    MULTI_UE_PA: _trial_multi_ue_pa,
    MULTI_UE_BLOCKING: _trial_blocking,
    MULTI_UE_NONCOLLAB: _trial_noncollab,
    MULTI_CELL: _trial_multi_cell,
}


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------

def _upa_sweep() -> Tuple[ArrayGeometry, ...]:
    # planar surface, fixed 20-element rows, growing column count
    return tuple(ArrayGeometry.upa(20, n_y) for n_y in (8, 16, 32, 64))


def _ula_sweep() -> Tuple[ArrayGeometry, ...]:
    return tuple(ArrayGeometry.ula(n) for n in (64, 128, 256, 512, 1024))


def _mmwave_defaults() -> dict:
    return {
        "ris_sweep": _upa_sweep(),
        "nb_geometry": ArrayGeometry.upa(8, 4),
        "ue_antennas": 1,
        "carrier_freq": 28e9,
        "budget": LinkBudget(power=1.0, noise_var=3.16e-11),
        "trials": 1000,
    }


def _sub6_defaults() -> dict:
    # rich scattering below 6 GHz: Rayleigh small-scale fading, which also
    # makes a foreign user's matched state look like a uniform random draw
    return {
        "ris_sweep": _ula_sweep(),
        "nb_geometry": ArrayGeometry.ula(64),
        "ue_antennas": 1,
        "carrier_freq": 5e9,
        "budget": LinkBudget(power=1.0, noise_var=3.16e-11),
        "trials": 1000,
        "channel_model": RAYLEIGH,
    }


def _preset_fig3() -> ScenarioConfig:
    return ScenarioConfig(scenario=COMP_JT, preset="fig3",
                          jt_variants=("coherent", "noncoherent"), n_branches=2,
                          **_mmwave_defaults())


def _preset_fig4() -> ScenarioConfig:
    return ScenarioConfig(scenario=MULTI_UE_PA, preset="fig4", n_ues=2, ofdma=True,
                          **_sub6_defaults())


def _preset_fig5() -> ScenarioConfig:
    return ScenarioConfig(scenario=MULTI_UE_BLOCKING, preset="fig5",
                          blocking_output="per-beta", **_mmwave_defaults())


def _preset_fig6() -> ScenarioConfig:
    return ScenarioConfig(scenario=MULTI_UE_BLOCKING, preset="fig6",
                          blocking_output="sum-compare", **_mmwave_defaults())


def _preset_fig7() -> ScenarioConfig:
    return ScenarioConfig(scenario=MULTI_UE_NONCOLLAB, preset="fig7", ofdma=True,
                          **_sub6_defaults())


def _preset_fig8() -> ScenarioConfig:
    return ScenarioConfig(scenario=MULTI_CELL, preset="fig8", **_mmwave_defaults())


PRESETS: Dict[str, Callable[[], ScenarioConfig]] = {
    "fig3": _preset_fig3,
    "fig4": _preset_fig4,
    "fig5": _preset_fig5,
    "fig6": _preset_fig6,
    "fig7": _preset_fig7,
    "fig8": _preset_fig8,
}

# Canonical preset behind each scenario subcommand.
SCENARIO_DEFAULT_PRESET = {
    COMP_JT: "fig3",
    MULTI_UE_PA: "fig4",
    MULTI_UE_BLOCKING: "fig5",
    MULTI_UE_NONCOLLAB: "fig7",
    MULTI_CELL: "fig8",
}


# ---------------------------------------------------------------------------
# public runners (thin wrappers over the Monte Carlo engine)
# ---------------------------------------------------------------------------

def _run(config: ScenarioConfig, scenario: str, workers: int = 1):
    from .montecarlo import run_experiment
    if config.scenario != scenario:
        raise ConfigError(f"scenario: expected {scenario!r}, got {config.scenario!r}")
    return run_experiment(config, workers=workers)


def run_comp_jt(config: ScenarioConfig, workers: int = 1):
    """Joint transmission over several surfaces, coherent vs non-coherent."""
    return _run(config, COMP_JT, workers)


def run_multi_ue_pa(config: ScenarioConfig, workers: int = 1):
    """Multi-user access via weighted superposition of per-user states."""
    return _run(config, MULTI_UE_PA, workers)


def run_multi_ue_blocking(config: ScenarioConfig, workers: int = 1):
    """Multi-user access via element blocks dedicated per user."""
    return _run(config, MULTI_UE_BLOCKING, workers)


def run_multi_ue_noncollab(config: ScenarioConfig, workers: int = 1):
    """One surface serving two users without collaborative regulation."""
    return _run(config, MULTI_UE_NONCOLLAB, workers)


def run_multi_cell(config: ScenarioConfig, workers: int = 1):
    """Edge user under neighbor-cell surface-enhanced interference."""
    return _run(config, MULTI_CELL, workers)
