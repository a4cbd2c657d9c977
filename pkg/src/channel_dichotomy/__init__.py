"""Unital quantum channels as Kraus tuples: sampling, classification, invariants.

The package centers on one dichotomy: a channel either admits a
Holevo-style form (and then breaks all entanglement) or it preserves
entanglement at every maximally entangled pure input.  It provides the
Kraus-tuple algebra needed to state that precisely, uniform random
sampling of unital tuples, separability criteria that are exact in small
dimensions, wedge-rank and extremality invariants, and a Monte Carlo
harness with reproducible seeding.
"""

from ._version import __version__
from .channel import (
    BipartiteDensity,
    HolevoForm,
    KrausChannel,
    apply,
    channel_from_dict,
    channel_to_dict,
    choi_state,
    depolarizing_holevo,
    from_holevo,
    load_channel,
    maximally_entangled_vector,
    mix_unitary,
    output_state,
    rank,
    recover_mixing_unitary,
    reduce_minimal,
    same_map,
    save_channel,
)
from .entanglement import (
    RankOneCertificate,
    Verdict,
    VerdictKind,
    classify_channel,
    is_marginally_cyclic,
    ppt_verdict,
    realignment_value,
    schmidt_rank,
    verify_rank_one_certificate,
)
from .errors import (
    DimensionMismatch,
    InvalidInput,
    NumericalFailure,
    SizeGuardExceeded,
    ToolkitError,
)
from .experiments import (
    ExperimentConfig,
    ExperimentKind,
    ExperimentResult,
    run_critical_rank_scan,
    run_cyclicity_density,
    run_ep_probability,
    run_extremal_fraction,
    run_rank_concentration,
    run_zero_one,
    wilson_interval,
)
from .invariants import ExtremalityReport, WedgeReport, is_extremal, wedge_invariants
from .linalg import (
    DEFAULT_TOL,
    Keep,
    Tolerance,
    antisymmetric_projector,
    hermitian_min_eig,
    kron,
    numerical_rank,
    partial_trace,
    partial_transpose,
    symmetric_projector,
)
from .report import ChannelReport, analyze_channel, report_to_json_dict
from .sampling import (
    SeedSpec,
    make_extremal,
    sample_holevo,
    sample_sphere,
    sample_unitary,
    sample_vr,
)

__all__ = [
    "__version__",
    "BipartiteDensity",
    "ChannelReport",
    "DEFAULT_TOL",
    "DimensionMismatch",
    "ExperimentConfig",
    "ExperimentKind",
    "ExperimentResult",
    "ExtremalityReport",
    "HolevoForm",
    "InvalidInput",
    "Keep",
    "KrausChannel",
    "NumericalFailure",
    "RankOneCertificate",
    "SeedSpec",
    "SizeGuardExceeded",
    "Tolerance",
    "ToolkitError",
    "Verdict",
    "VerdictKind",
    "WedgeReport",
    "analyze_channel",
    "antisymmetric_projector",
    "apply",
    "channel_from_dict",
    "channel_to_dict",
    "choi_state",
    "classify_channel",
    "depolarizing_holevo",
    "from_holevo",
    "hermitian_min_eig",
    "is_extremal",
    "is_marginally_cyclic",
    "kron",
    "load_channel",
    "make_extremal",
    "maximally_entangled_vector",
    "mix_unitary",
    "numerical_rank",
    "output_state",
    "partial_trace",
    "partial_transpose",
    "ppt_verdict",
    "rank",
    "realignment_value",
    "recover_mixing_unitary",
    "reduce_minimal",
    "report_to_json_dict",
    "run_critical_rank_scan",
    "run_cyclicity_density",
    "run_ep_probability",
    "run_extremal_fraction",
    "run_rank_concentration",
    "run_zero_one",
    "same_map",
    "sample_holevo",
    "sample_sphere",
    "sample_unitary",
    "sample_vr",
    "save_channel",
    "schmidt_rank",
    "symmetric_projector",
    "verify_rank_one_certificate",
    "wedge_invariants",
    "wilson_interval",
]
