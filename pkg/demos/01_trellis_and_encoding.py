# -----------------------------------------------------------------------------
# --- 01_trellis_and_encoding.py ---
"""Trellis-coded modulation basics: codes, trellis tables, termination.

Every stream runs the same rate-1/2 convolutional encoder whose two
output bits select one QPSK symbol per information bit, so one trellis
step consumes one bit and emits one resource element.
"""
import numpy as np

from etcma import FOUR_STATE, TWO_STATE, QPSK_SYMBOLS, build_trellis, tcm_encode

print("QPSK labeling (symbol index n = 2*d1 + d2):")
for n, s in enumerate(QPSK_SYMBOLS):
    print(f"  n={n} -> {s.real:+.4f}{s.imag:+.4f}j  |s|^2={abs(s) ** 2:.1f}")

for code in (FOUR_STATE, TWO_STATE):
    trellis = build_trellis(code)
    print(f"\ncode ({code.g1:o},{code.g2:o})_8: "
          f"{code.num_states} states, memory {code.memory}")
    print("  state  input  next  coded  symbol")
    for s in range(code.num_states):
        for u in (0, 1):
            c1, c2 = trellis.coded_bits[s, u]
            print(f"  {s:5d}  {u:5d}  {trellis.next_state[s, u]:4d}"
                  f"   ({c1},{c2})  {trellis.symbol[s, u]:6d}")

# Termination: the tail drives the register back to state zero, so a
# length-L block carries L - memory information bits.
L = 12
rng = np.random.default_rng(0)
for code in (FOUR_STATE, TWO_STATE):
    bits = rng.integers(0, 2, L - code.memory)
    syms = tcm_encode(bits, code, terminate=True)
    print(f"\n({code.g1:o},{code.g2:o})_8 block of {L} REs "
          f"from {bits.size} info bits")
    print(f"  info bits : {''.join(map(str, bits))}")
    print(f"  symbols   : {' '.join(map(str, syms))}")

    # replaying the symbol sequence through the trellis must end in state 0
    trellis = build_trellis(code)
    state = 0
    for n in syms:
        (u,) = [u for u in (0, 1) if trellis.symbol[state, u] == n]
        state = trellis.next_state[state, u]
    print(f"  final state after replay: {state} (terminated)")
