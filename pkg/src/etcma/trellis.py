"""Rate-1/2 feedforward convolutional encoding mapped onto QPSK.

Each trellis step consumes one information bit and emits one QPSK symbol,
so a length-L symbol block carries L - memory information bits when the
trellis is driven back to the zero state by a tail of zeros.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SQRT2 = np.sqrt(2.0)

# QPSK symbol for the coded pair (d1, d2); Gray-labelled, unit energy.
# Symbols are indexed n = 2*d1 + d2 so index 0 carries the all-zero label.
QPSK_SYMBOLS = np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]) / SQRT2

#: Supported generator pairs (octal notation (g1, g2)).
SUPPORTED_CODES = ((0o5, 0o7), (0o2, 0o3))


def qpsk_map(d1, d2):
    """Map coded bit pair(s) to unit-energy QPSK symbol(s).

    Parameters
    ----------
    d1, d2 : int or array_like of {0, 1}
        First and second coded bit.

    Returns
    -------
    complex or ndarray
        ((1 - 2*d1) + 1j*(1 - 2*d2)) / sqrt(2).
    """
    d1 = np.asarray(d1)
    d2 = np.asarray(d2)
    if np.any((d1 != 0) & (d1 != 1)) or np.any((d2 != 0) & (d2 != 1)):
        raise ValueError("coded bits must be 0 or 1")
    out = ((1 - 2 * d1) + 1j * (1 - 2 * d2)) / SQRT2
    return out[()] if out.ndim == 0 else out


def symbol_index(d1, d2):
    """QPSK symbol index n = 2*d1 + d2 of a coded bit pair."""
    return 2 * np.asarray(d1) + np.asarray(d2)


@dataclass(frozen=True)
class ConvCode:
    """Rate-1/2 feedforward convolutional code.

    Generators are tap masks with the most significant bit on the current
    input, e.g. 0o5 = 101 taps u(l) and u(l-2).  The first output bit d1
    comes from ``g1``, the second from ``g2``.
    """

    g1: int
    g2: int

    def __post_init__(self):
        if self.g1 <= 0 or self.g2 <= 0:
            raise ValueError(f"generators must be positive, got ({self.g1}, {self.g2})")
        if self.memory < 1:
            raise ValueError("code must have at least one memory element")

    @property
    def memory(self) -> int:
        return max(self.g1.bit_length(), self.g2.bit_length()) - 1

    @property
    def constraint_length(self) -> int:
        return self.memory + 1

    @property
    def num_states(self) -> int:
        return 2 ** self.memory

    def taps(self, which: int) -> np.ndarray:
        """Binary taps of generator 1 or 2, current input first."""
        g = self.g1 if which == 1 else self.g2
        m = self.memory
        return np.array([(g >> (m - j)) & 1 for j in range(m + 1)], dtype=np.uint8)


FOUR_STATE = ConvCode(0o5, 0o7)
TWO_STATE = ConvCode(0o2, 0o3)


@dataclass
class TcmTrellis:
    """Branch tables of a TCM trellis, plus reverse lookups for BCJR sweeps.

    The state holds the shift register contents, most recent bit in the
    most significant position.  Branch arrays are indexed [state, input].
    """

    code: ConvCode
    next_state: np.ndarray  # (S, 2) int
    coded_bits: np.ndarray  # (S, 2, 2) uint8, (d1, d2) per branch
    symbol: np.ndarray      # (S, 2) int, QPSK index per branch
    prev_state: np.ndarray = field(repr=False, default=None)  # (S, 2) int
    prev_input: np.ndarray = field(repr=False, default=None)  # (S, 2) int
    prev_symbol: np.ndarray = field(repr=False, default=None)  # (S, 2) int

    @property
    def num_states(self) -> int:
        return self.next_state.shape[0]

    @property
    def memory(self) -> int:
        return self.code.memory


def build_trellis(code: ConvCode) -> TcmTrellis:
    """Construct the branch tables of a supported rate-1/2 TCM code.

    Raises
    ------
    ValueError
        If ``code`` is not one of the supported generator pairs.
    """
    if (code.g1, code.g2) not in SUPPORTED_CODES:
        supported = ", ".join(f"({g1:o},{g2:o})_8" for g1, g2 in SUPPORTED_CODES)
        raise ValueError(
            f"unsupported code ({code.g1:o},{code.g2:o})_8; supported pairs: {supported}"
        )
    m = code.memory
    nstates = code.num_states
    next_state = np.zeros((nstates, 2), dtype=np.int64)
    coded = np.zeros((nstates, 2, 2), dtype=np.uint8)
    for s in range(nstates):
        for u in (0, 1):
            reg = (u << m) | s  # [u(l), u(l-1), ..., u(l-m)]
            d1 = bin(code.g1 & reg).count("1") & 1
            d2 = bin(code.g2 & reg).count("1") & 1
            next_state[s, u] = (u << (m - 1)) | (s >> 1)
            coded[s, u] = (d1, d2)
    symbol = (2 * coded[..., 0] + coded[..., 1]).astype(np.int64)

    # Reverse tables: every state of these codes has exactly two incoming
    # branches, one per value of the oldest register bit.
    prev_state = np.zeros((nstates, 2), dtype=np.int64)
    prev_input = np.zeros((nstates, 2), dtype=np.int64)
    prev_symbol = np.zeros((nstates, 2), dtype=np.int64)
    fill = np.zeros(nstates, dtype=np.int64)
    for s in range(nstates):
        for u in (0, 1):
            t = next_state[s, u]
            prev_state[t, fill[t]] = s
            prev_input[t, fill[t]] = u
            prev_symbol[t, fill[t]] = symbol[s, u]
            fill[t] += 1
    if not np.all(fill == 2):
        raise AssertionError("trellis is not biregular")
    return TcmTrellis(code, next_state, coded, symbol, prev_state, prev_input, prev_symbol)


def tcm_encode(info_bits, code: ConvCode, terminate: bool = True) -> np.ndarray:
    """Encode information bits into a QPSK symbol-index sequence.

    Parameters
    ----------
    info_bits : array_like of {0, 1}
        Information bits, one trellis step each.
    code : ConvCode
    terminate : bool
        Append ``code.memory`` zero tail bits so the encoder ends in
        state 0.  The output then has ``len(info_bits) + code.memory``
        symbols.

    Returns
    -------
    ndarray of int
        QPSK symbol index (2*d1 + d2) per trellis step.
    """
    u = np.asarray(info_bits, dtype=np.uint8)
    if u.ndim != 1:
        raise ValueError("info_bits must be one-dimensional")
    if np.any(u > 1):
        raise ValueError("info_bits must be 0/1 valued")
    if terminate:
        u = np.concatenate([u, np.zeros(code.memory, dtype=np.uint8)])
    n = u.size
    # Feedforward taps make the coded bits plain mod-2 convolutions.
    d1 = np.convolve(u, code.taps(1))[:n] & 1
    d2 = np.convolve(u, code.taps(2))[:n] & 1
    return (2 * d1.astype(np.int64) + d2).astype(np.int64)
