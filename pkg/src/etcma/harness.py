"""Monte-Carlo driver: block simulation, metrics, capacity, CSV emission.

A sweep simulates blocks per SNR point until enough block errors have
accumulated, with every block seeded from (master_seed, snr_index,
block_index) so the simulated set never depends on worker count or
timing; stopping is evaluated at fixed batch boundaries for the same
reason.  Records carry both SNR conventions and serialize to a CSV with
a pinned column order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelSpec, add_noise, per_stream_snr
from .receiver import NOISELESS_SIGMA_W2, sic_decode
from .shaping import make_permutations, make_signatures, select_params
from .superposition import SuperConstellation, transmit_block
from .trellis import ConvCode, build_trellis

#: Pinned CSV column order; bler_stream (per-stream BLERs joined by ';')
#: is appended after the core columns.
CSV_COLUMNS = (
    "snr_db_aggregate", "snr_db_per_stream", "K", "blocks", "block_errors",
    "bit_errors", "bler", "ber", "se", "capacity", "seed", "bler_stream",
)


@dataclass(frozen=True)
class SimConfig:
    """Everything that identifies a simulation experiment.

    ``batch_size`` is the stopping-rule granularity: the error count is
    checked only after each full batch, so results are identical for any
    worker count (and only change if the batch size itself changes).
    """

    num_streams: int
    length: int = 240
    code: ConvCode | None = None
    signature_design: str | None = None
    interleaver_design: str = "random"
    n_it: int | None = None
    snr_start: float = 0.0
    snr_stop: float = 10.0
    snr_step: float = 0.5
    max_blocks: int = 1000
    min_block_errors: int = 50
    master_seed: int = 0
    noiseless: bool = False
    batch_size: int = 25

    def __post_init__(self):
        if self.length < self.num_streams:
            raise ValueError("block length must be at least the stream count")
        if self.max_blocks < 1:
            raise ValueError("max_blocks must be at least 1")
        if self.snr_step <= 0:
            raise ValueError("snr_step must be positive")
        if self.min_block_errors < 1:
            raise ValueError("min_block_errors must be at least 1")
        if self.batch_size < 1:
            raise ValueError("batch_size must be at least 1")
        select_params(self.num_streams)  # rejects unsupported stream counts

    @property
    def resolved_code(self) -> ConvCode:
        return self.code if self.code is not None else select_params(self.num_streams).code

    @property
    def resolved_design(self) -> str:
        if self.signature_design is not None:
            return self.signature_design
        return select_params(self.num_streams).signature_design

    @property
    def resolved_n_it(self) -> int:
        return self.n_it if self.n_it is not None else select_params(self.num_streams).n_it

    def snr_points(self) -> np.ndarray:
        n = int(np.floor((self.snr_stop - self.snr_start) / self.snr_step + 1e-9))
        return self.snr_start + self.snr_step * np.arange(n + 1)


@dataclass(frozen=True)
class MetricsRecord:
    """Aggregated outcome of one SNR point."""

    snr_db_aggregate: float
    snr_db_per_stream: float
    num_streams: int
    blocks: int
    block_errors: int
    bit_errors: int
    bler: float
    ber: float
    se: float
    seed: int
    stream_block_errors: tuple[int, ...] = field(default=())

    def csv_row(self) -> str:
        bler_stream = ";".join(
            repr(e / self.blocks) for e in self.stream_block_errors)
        cells = (
            repr(float(self.snr_db_aggregate)),
            repr(float(self.snr_db_per_stream)),
            str(self.num_streams), str(self.blocks), str(self.block_errors),
            str(self.bit_errors), repr(self.bler), repr(self.ber),
            repr(self.se), repr(awgn_capacity(self.snr_db_aggregate)),
            str(self.seed), bler_stream,
        )
        return ",".join(cells)


def spectral_efficiency(bler: float, num_streams: int) -> float:
    """Aggregate SE = (1 - BLER) * R * m0 * K with R = 1/2, m0 = 2."""
    if not 0.0 <= bler <= 1.0:
        raise ValueError("bler must lie in [0, 1]")
    return (1.0 - bler) * num_streams


def awgn_capacity(snr_db: float) -> float:
    """Shannon capacity log2(1 + SNR) of the complex AWGN channel."""
    return float(np.log2(1.0 + 10.0 ** (np.asarray(snr_db, dtype=float) / 10.0)))


def _simulate_block(block_index, snr_index, config, trellis,
                    signatures, superconst, spec, sigma_rx):
    K, L = config.num_streams, config.length
    rng = np.random.default_rng(np.random.SeedSequence(
        entropy=(config.master_seed, snr_index, block_index)))
    perms = make_permutations(config.interleaver_design, K, L, rng)
    bits = rng.integers(0, 2, (K, L - config.resolved_code.memory))
    block = transmit_block(bits, trellis, signatures, perms)
    r = add_noise(block.composite, spec, rng)
    res = sic_decode(r, trellis, superconst, perms, sigma_rx,
                     n_it=config.resolved_n_it)
    stream_bit_errors = np.sum(res.info_bits != bits, axis=1)
    return stream_bit_errors


def run_bler_point(config: SimConfig, snr_db: float, snr_index: int = 0,
                   workers: int = 1) -> MetricsRecord:
    """Simulate one SNR point until min_block_errors or max_blocks.

    A block errs when any of its K streams has a bit error.  The result
    is a pure function of (config, snr_db, snr_index); worker count only
    affects wall time.
    """
    K, L = config.num_streams, config.length
    code = config.resolved_code
    trellis = build_trellis(code)
    signatures = make_signatures(config.resolved_design, K, L,
                                 seed=config.master_seed)
    superconst = SuperConstellation(signatures, length=L)
    spec = ChannelSpec(snr_db, K, noiseless=config.noiseless)
    sigma_rx = NOISELESS_SIGMA_W2 if config.noiseless else spec.sigma_w2

    def simulate(b):
        return _simulate_block(b, snr_index, config, trellis,
                               signatures, superconst, spec, sigma_rx)

    blocks = 0
    block_errors = 0
    bit_errors = 0
    stream_block_errors = np.zeros(K, dtype=int)
    for start in range(0, config.max_blocks, config.batch_size):
        end = min(start + config.batch_size, config.max_blocks)
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(simulate, range(start, end)))
        else:
            results = [simulate(b) for b in range(start, end)]
        for stream_bit_errors in results:
            blocks += 1
            bit_errors += int(np.sum(stream_bit_errors))
            erred = stream_bit_errors > 0
            stream_block_errors += erred
            block_errors += bool(np.any(erred))
        if block_errors >= config.min_block_errors:
            break

    n_info = L - code.memory
    bler = block_errors / blocks
    return MetricsRecord(
        snr_db_aggregate=float(snr_db),
        snr_db_per_stream=per_stream_snr(snr_db, K),
        num_streams=K,
        blocks=blocks,
        block_errors=block_errors,
        bit_errors=bit_errors,
        bler=bler,
        ber=bit_errors / (blocks * K * n_info),
        se=spectral_efficiency(bler, K),
        seed=config.master_seed,
        stream_block_errors=tuple(int(e) for e in stream_block_errors),
    )


def records_to_csv(records) -> str:
    lines = [",".join(CSV_COLUMNS)]
    lines.extend(r.csv_row() for r in records)
    return "\n".join(lines) + "\n"


def sweep(config: SimConfig, out=None, workers: int = 1) -> list[MetricsRecord]:
    """Run every SNR point of the config; optionally write the CSV.

    ``out`` may be a path or a writable text file object; rows stream
    out as points finish.  The emitted bytes are a pure function of the
    config, so reruns (and any worker count) produce identical files.
    """
    sink, owns_sink = None, False
    if out is not None:
        if isinstance(out, (str, bytes)):
            sink = open(out, "w", encoding="utf-8", newline="")
            owns_sink = True
        else:
            sink = out
    records = []
    try:
        if sink is not None:
            sink.write(",".join(CSV_COLUMNS) + "\n")
        for i, snr_db in enumerate(config.snr_points()):
            record = run_bler_point(config, snr_db, snr_index=i, workers=workers)
            records.append(record)
            if sink is not None:
                sink.write(record.csv_row() + "\n")
    finally:
        if owns_sink:
            sink.close()
    return records


def _as_curve(curve):
    """Normalize a curve to (per-stream snr array, se array, K)."""
    if isinstance(curve, tuple) and len(curve) == 3:
        snr, se, K = curve
        return np.asarray(snr, dtype=float), np.asarray(se, dtype=float), int(K)
    records = list(curve)
    snr = np.array([r.snr_db_per_stream for r in records])
    se = np.array([r.se for r in records])
    return snr, se, records[0].num_streams


def _threshold_snr(snr, se, target):
    order = np.argsort(snr)
    snr, se = snr[order], se[order]
    reached = np.nonzero(se >= target)[0]
    if reached.size == 0:
        raise ValueError(
            f"curve never reaches SE {target:.3f} (max {se.max():.3f})")
    j = reached[0]
    if j == 0:
        return float(snr[0])
    # linear interpolation between the bracketing points
    frac = (target - se[j - 1]) / (se[j] - se[j - 1])
    return float(snr[j - 1] + frac * (snr[j] - snr[j - 1]))


def snr_loss(curve_overloaded, curve_single, rho: float = 0.9) -> float:
    """Single-stream SNR loss Delta_SNR(K, rho) in dB.

    Each curve is a list of MetricsRecords or a (snr_per_stream, se, K)
    tuple.  The loss is the difference of the per-stream SNRs at which
    each curve crosses rho times its asymptotic SE (K and 1).
    """
    snr_k, se_k, K = _as_curve(curve_overloaded)
    snr_1, se_1, K1 = _as_curve(curve_single)
    if K1 != 1:
        raise ValueError("the reference curve must be single-stream")
    t_k = _threshold_snr(snr_k, se_k, rho * K)
    t_1 = _threshold_snr(snr_1, se_1, rho * 1.0)
    return t_k - t_1
