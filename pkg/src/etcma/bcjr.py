"""Symbol-level BCJR decoding over the TCM trellis.

The branch metric at trellis step l is simply the prior LLR of the
branch's QPSK symbol, so the decoder consumes an (L, 4) grid of symbol
LLRs and produces symbol extrinsics plus a-posteriori info-bit LLRs.
All recursions run in the log domain with exact max* combining unless
``max_log`` is set.
"""

from __future__ import annotations

import numpy as np

from .llr import maxstar, maxstar_reduce
from .trellis import TcmTrellis

NEG_INF = -np.inf


def bcjr_decode(
    symbol_llrs: np.ndarray,
    trellis: TcmTrellis,
    terminated: bool = True,
    max_log: bool = False,
) -> tuple[np.ndarray, np.ndarray]:
    """Run the forward-backward sweep on per-symbol prior LLRs.

    Parameters
    ----------
    symbol_llrs : (L, 4) ndarray
        Prior LLR of each QPSK index per trellis step (component 0
        convention; a common per-step offset is harmless).
    trellis : TcmTrellis
    terminated : bool
        If true the encoder ended in state 0 via ``memory`` tail zeros;
        the backward sweep is pinned there and the returned info-bit
        LLRs cover only the L - memory information positions.
    max_log : bool
        Replace max* with plain max.

    Returns
    -------
    extrinsic : (L, 4) ndarray
        A-posteriori symbol LLRs minus the prior, component 0 pinned to
        zero.  Entries are -inf where the trellis rules a symbol out.
    info_llrs : ndarray
        A-posteriori LLR (positive favors bit 1) of each information
        bit; length L - memory when terminated, else L.
    """
    tau = np.asarray(symbol_llrs, dtype=float)
    if tau.ndim != 2 or tau.shape[1] != 4:
        raise ValueError("symbol_llrs must have shape (L, 4)")
    L = tau.shape[0]
    S = trellis.num_states
    if terminated and L <= trellis.memory:
        raise ValueError("block too short for a terminated trellis")

    ns, sym = trellis.next_state, trellis.symbol
    ps, psym = trellis.prev_state, trellis.prev_symbol

    alpha = np.full((L + 1, S), NEG_INF)
    alpha[0, 0] = 0.0
    for l in range(L):
        cand = alpha[l, ps] + tau[l, psym]  # (S, 2) incoming branch metrics
        a = maxstar(cand[:, 0], cand[:, 1], max_log)
        alpha[l + 1] = a - a.max()  # keep metrics near zero

    beta = np.zeros((L + 1, S))
    if terminated:
        beta[L, 1:] = NEG_INF
    for l in range(L - 1, -1, -1):
        cand = beta[l + 1, ns] + tau[l, sym]  # (S, 2) outgoing branch metrics
        b = maxstar(cand[:, 0], cand[:, 1], max_log)
        beta[l] = b - b.max()

    # branch weights w[l, s, u] = alpha[l, s] + tau[l, sym[s, u]] + beta[l+1, ns[s, u]]
    w = alpha[:-1, :, None] + tau[:, sym] + beta[1:, ns]

    flat = w.reshape(L, 2 * S)
    flat_sym = sym.ravel()
    app = np.empty((L, 4))
    for n in range(4):
        app[:, n] = maxstar_reduce(flat[:, flat_sym == n], axis=1, max_log=max_log)
    app -= app[:, :1]

    extrinsic = app - tau
    extrinsic -= extrinsic[:, :1]

    info_llrs = maxstar_reduce(w[:, :, 1], axis=1, max_log=max_log) - maxstar_reduce(
        w[:, :, 0], axis=1, max_log=max_log
    )
    if terminated:
        info_llrs = info_llrs[: L - trellis.memory]
    return extrinsic, info_llrs


def hard_decision(llrs) -> np.ndarray:
    """Threshold LLRs at zero: bit 1 iff LLR > 0 (ties resolve to 0)."""
    return (np.asarray(llrs) > 0).astype(np.uint8)
