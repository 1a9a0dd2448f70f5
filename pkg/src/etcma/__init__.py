"""Link-level simulation of overloaded trellis-coded multiple access.

Up to seven rate-1/2 TCM streams share one block of resource elements
through per-stream interleaving and unit-modulus scrambling signatures.
The package provides the transmitter chain, the AWGN channel, the
iterative soft interference-cancellation receiver, EXIT-chart analysis,
and a deterministic Monte-Carlo sweep harness with CSV output.
"""

from .bcjr import bcjr_decode, hard_decision
from .channel import (
    ChannelSpec,
    add_noise,
    per_stream_snr,
    sigma_to_snr,
    snr_to_sigma,
)
from .exit_charts import (
    CodeSelection,
    ExitCurve,
    binary_gaussian_mi,
    chart_fixed_point,
    emsd_transfer_curve,
    estimate_mi,
    etcmd_transfer_curve,
    gen_apriori_llrs,
    select_code_by_exit,
    spread_for_binary_mi,
)
from .harness import (
    CSV_COLUMNS,
    MetricsRecord,
    SimConfig,
    awgn_capacity,
    records_to_csv,
    run_bler_point,
    snr_loss,
    spectral_efficiency,
    sweep,
)
from .llr import clamp_llrs, llrs_to_probs, maxstar, maxstar_reduce
from .receiver import SicResult, sic_decode
from .shaping import (
    Permutation,
    Signature,
    StreamParams,
    make_permutations,
    make_signatures,
    min_pairwise_distance,
    optimize_min_distance_signatures,
    select_params,
    uniform_phase_signatures,
    zadoff_chu_signatures,
)
from .superposition import SuperConstellation, TxBlock, transmit_block
from .trellis import (
    FOUR_STATE,
    QPSK_SYMBOLS,
    TWO_STATE,
    ConvCode,
    TcmTrellis,
    build_trellis,
    qpsk_map,
    tcm_encode,
)

__all__ = [
    "CSV_COLUMNS",
    "ChannelSpec",
    "CodeSelection",
    "ConvCode",
    "ExitCurve",
    "FOUR_STATE",
    "MetricsRecord",
    "Permutation",
    "QPSK_SYMBOLS",
    "SicResult",
    "Signature",
    "SimConfig",
    "StreamParams",
    "SuperConstellation",
    "TWO_STATE",
    "TcmTrellis",
    "TxBlock",
    "add_noise",
    "awgn_capacity",
    "bcjr_decode",
    "binary_gaussian_mi",
    "build_trellis",
    "chart_fixed_point",
    "clamp_llrs",
    "emsd_transfer_curve",
    "estimate_mi",
    "etcmd_transfer_curve",
    "gen_apriori_llrs",
    "hard_decision",
    "llrs_to_probs",
    "make_permutations",
    "make_signatures",
    "maxstar",
    "maxstar_reduce",
    "min_pairwise_distance",
    "optimize_min_distance_signatures",
    "per_stream_snr",
    "qpsk_map",
    "records_to_csv",
    "run_bler_point",
    "select_code_by_exit",
    "select_params",
    "sic_decode",
    "sigma_to_snr",
    "snr_loss",
    "snr_to_sigma",
    "spectral_efficiency",
    "spread_for_binary_mi",
    "sweep",
    "tcm_encode",
    "transmit_block",
    "uniform_phase_signatures",
    "zadoff_chu_signatures",
]

__version__ = "0.1.0"
