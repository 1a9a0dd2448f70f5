# -----------------------------------------------------------------------------
# --- 05_sweep_to_csv.py ---
"""Small Monte-Carlo sweep: BLER waterfalls, CSV output, SNR loss.

Runs K=1 and K=2 over short windows around their waterfalls (a desk-
scale version of the full calibration), writes the K=2 results to a
CSV next to this script, and reports the single-stream SNR loss at 90%
of the asymptotic spectral efficiency.  Takes a minute or two.
"""
import pathlib

from etcma import SimConfig, snr_loss, sweep

BLOCKS = 150
OUT = pathlib.Path(__file__).with_name("sweep_k2.csv")

single_cfg = SimConfig(num_streams=1, snr_start=3.0, snr_stop=4.5,
                       snr_step=0.5, max_blocks=BLOCKS,
                       min_block_errors=10 ** 6, master_seed=0)
double_cfg = SimConfig(num_streams=2, snr_start=6.5, snr_stop=8.0,
                       snr_step=0.5, max_blocks=BLOCKS,
                       min_block_errors=10 ** 6, master_seed=0)

print(f"K=1 window {single_cfg.snr_start}..{single_cfg.snr_stop} dB, "
      f"{BLOCKS} blocks per point")
single = sweep(single_cfg)
for r in single:
    print(f"  {r.snr_db_aggregate:5.2f} dB  BLER={r.bler:.3f}  SE={r.se:.3f}")

print(f"K=2 window {double_cfg.snr_start}..{double_cfg.snr_stop} dB "
      f"(aggregate), CSV -> {OUT.name}")
double = sweep(double_cfg, out=str(OUT))
for r in double:
    print(f"  {r.snr_db_aggregate:5.2f} dB  BLER={r.bler:.3f}  SE={r.se:.3f}")

loss = snr_loss(double, single)
print(f"\nsingle-stream SNR loss at rho=0.9: {loss:.2f} dB "
      f"(per-stream axis; doubles the rate for that price)")
print(f"CSV written: {OUT}")
