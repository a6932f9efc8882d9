"""Link-level Monte Carlo simulator for surface-assisted wireless networks.

Contrasts network-controlled and standalone regulation of programmable
reflecting surfaces across three collaboration scenarios: joint
transmission over multiple surfaces, multi-user access on one surface,
and multi-cell interference coordination.
"""

from .channel import (
    ArrayGeometry,
    ChannelSet,
    cascaded_channel,
    comp_jt_channel,
    draw_channel_set,
    gen_channel,
    ula_steering,
    upa_steering,
)
from .metrics import (
    InterferenceGeometry,
    LinkBudget,
    achievable_rate,
    linear_to_dbm,
    rsrp,
    scheme1_check,
    scheme2_equivalent_interference,
    scheme3_select_width,
    sinr,
)
from .montecarlo import Curve, CurveSet, aggregate, config_digest, run_experiment
from .regulation import (
    BlockPartition,
    PAWeights,
    PhaseOffset,
    RegulationMatrix,
    apply_global_phase,
    blocking_effective_channel,
    blocking_regulation,
    calibrate,
    estimate_phase_offset,
    mixed_channel_regulation,
    optimal_regulation,
    pa_optimize,
    pa_superpose,
    quantize,
    random_phase_regulation,
)
from .rng import RngStream
from .scenarios import (
    PRESETS,
    ConfigError,
    ScenarioConfig,
    TrialResult,
    mrt_precoder,
    run_comp_jt,
    run_multi_cell,
    run_multi_ue_blocking,
    run_multi_ue_noncollab,
    run_multi_ue_pa,
)

__version__ = "0.1.0"
