"""Superposed transmit constellation and block transmission.

K scrambled TCM streams add coherently on each resource element, so the
receiver sees points from a constellation of size 4^K whose index q
stacks the per-stream QPSK indices in base 4, stream 0 least significant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .shaping import Permutation, Signature
from .trellis import QPSK_SYMBOLS, TcmTrellis, tcm_encode


def component_symbol_index(q: int, k: int, num_streams: int):
    """Digit k of the joint constellation index: n_k = floor(q / 4^k) mod 4."""
    q = np.asarray(q)
    if np.any(q < 0) or np.any(q >= 4 ** num_streams):
        raise ValueError("joint index out of range")
    if not 0 <= k < num_streams:
        raise ValueError("stream index out of range")
    return (q >> (2 * k)) & 3


def joint_index(stream_indices) -> np.ndarray:
    """Joint constellation index from per-stream QPSK indices (stream 0 LSD)."""
    n = np.asarray(stream_indices, dtype=np.int64)
    weights = 4 ** np.arange(n.shape[0], dtype=np.int64)
    return np.tensordot(weights, n, axes=(0, 0))


class SuperConstellation:
    """All 4^K superposed points x_q(l) = sum_k c_k(l) m_{n_k(q)}.

    With constant signatures the constellation is the same on every
    resource element and is cached once; Zadoff-Chu style signatures give
    a different slice per element.
    """

    def __init__(self, signatures: list[Signature], length: int):
        if not signatures:
            raise ValueError("need at least one signature")
        self.num_streams = len(signatures)
        self.length = length
        self.size = 4 ** self.num_streams
        self.is_constant = all(s.is_constant for s in signatures)
        if self.is_constant:
            self.coeffs = np.array([s.values[()] for s in signatures])  # (K,)
        else:
            self.coeffs = np.stack([s.sequence(length) for s in signatures])  # (K, L)
        q = np.arange(self.size, dtype=np.int64)
        self.digits = np.stack([(q >> (2 * k)) & 3 for k in range(self.num_streams)])
        self._const_points = (
            self.coeffs @ QPSK_SYMBOLS[self.digits] if self.is_constant else None
        )

    def points(self, l: int = 0) -> np.ndarray:
        """The 4^K constellation points on resource element ``l``."""
        if self.is_constant:
            return self._const_points
        return self.coeffs[:, l] @ QPSK_SYMBOLS[self.digits]

    def point_matrix(self) -> np.ndarray:
        """Points on every resource element, shape (L, 4^K)."""
        if self.is_constant:
            return np.broadcast_to(self._const_points, (self.length, self.size))
        return np.einsum("kl,kq->lq", self.coeffs, QPSK_SYMBOLS[self.digits])

    def mean_energy(self, l: int = 0) -> float:
        return float(np.mean(np.abs(self.points(l)) ** 2))


@dataclass
class TxBlock:
    """One transmitted block: inputs, per-stream symbols, composite signal."""

    info_bits: np.ndarray       # (K, L - memory) uint8
    symbol_indices: np.ndarray  # (K, L) int, channel order
    stream_symbols: np.ndarray  # (K, L) complex, scrambled
    composite: np.ndarray       # (L,) complex

    @property
    def num_streams(self) -> int:
        return self.info_bits.shape[0]

    def joint_indices(self) -> np.ndarray:
        """Joint constellation index transmitted on each resource element."""
        return joint_index(self.symbol_indices)


def transmit_block(
    info_bits,
    trellis: TcmTrellis,
    signatures: list[Signature],
    permutations: list[Permutation],
) -> TxBlock:
    """Encode, interleave, scramble, and superpose K streams onto L elements.

    ``info_bits`` has one row per stream of length L - memory; the tail
    driving each trellis back to state zero fills the remaining elements.
    """
    info = np.asarray(info_bits, dtype=np.uint8)
    if info.ndim != 2:
        raise ValueError("info_bits must be (num_streams, num_info_bits)")
    K = info.shape[0]
    if len(signatures) != K or len(permutations) != K:
        raise ValueError("one signature and one permutation required per stream")
    L = permutations[0].length
    if any(p.length != L for p in permutations):
        raise ValueError("all interleavers must share the block length")
    if info.shape[1] != L - trellis.memory:
        raise ValueError(
            f"expected {L - trellis.memory} info bits per stream, got {info.shape[1]}"
        )

    symbol_indices = np.empty((K, L), dtype=np.int64)
    stream_symbols = np.empty((K, L), dtype=complex)
    for k in range(K):
        encoded = tcm_encode(info[k], trellis.code, terminate=True)
        symbol_indices[k] = permutations[k].interleave(encoded)
        stream_symbols[k] = signatures[k].sequence(L) * QPSK_SYMBOLS[symbol_indices[k]]
    return TxBlock(info, symbol_indices, stream_symbols, stream_symbols.sum(axis=0))
