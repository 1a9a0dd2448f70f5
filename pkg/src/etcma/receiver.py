"""Multi-stream detection over the joint LLR grid and the SIC schedule.

The detector keeps a grid of joint constellation LLRs Lambda_q(l)
(component q=0 pinned to zero), marginalizes it into per-stream symbol
priors, and folds decoder extrinsics back in by replacing each stream's
previous contribution.  One decode runs N_IT outer iterations, each
visiting the K streams in order; the grid carries over between outer
iterations, which realizes the wrap rule Lambda_{-1}^{(t)} =
Lambda_{K-1}^{(t-1)}.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bcjr import bcjr_decode, hard_decision
from .llr import clamp_llrs, maxstar, maxstar_reduce, normalize_symbol_llrs  # noqa: F401
from .shaping import Permutation
from .superposition import SuperConstellation
from .trellis import TcmTrellis

#: Surrogate noise variance for decoding noiseless observations; keeps
#: the channel LLRs finite without moving any hard decision.
NOISELESS_SIGMA_W2 = 1e-6

#: Containment bound for decoder extrinsics fed back into the grid.  A
#: terminated trellis can emit -inf for symbols with no surviving branch;
#: capping at this magnitude keeps the grid updates free of inf - inf
#: while staying orders of magnitude above any finite LLR the detector
#: produces (~1e8 at the noiseless surrogate), so no real value is moved.
EXTRINSIC_LLR_LIMIT = 1e12


def _num_streams_of(grid_width: int) -> int:
    K = round(np.log2(grid_width)) // 2
    if 4 ** K != grid_width:
        raise ValueError("grid width must be a power of 4")
    return K


def init_joint_llrs(received, superconst: SuperConstellation, sigma_w2: float) -> np.ndarray:
    """Channel-only joint LLR grid: (||r - x_0||^2 - ||r - x_q||^2) / (2 sigma_w2).

    Returns an (L, 4^K) array with component q=0 identically zero.
    """
    if sigma_w2 <= 0:
        raise ValueError("sigma_w2 must be positive; decode noiseless blocks "
                         "with the NOISELESS_SIGMA_W2 surrogate")
    r = np.asarray(received, dtype=complex)
    if r.shape != (superconst.length,):
        raise ValueError("received block length does not match the constellation")
    d2 = np.abs(r[:, None] - superconst.point_matrix()) ** 2
    return (d2[:, :1] - d2) / (2.0 * sigma_w2)


def stream_prior_llrs(
    grid: np.ndarray,
    k: int,
    prev_extrinsic: np.ndarray,
    max_log: bool = False,
) -> np.ndarray:
    """Marginalize the grid onto stream k and strip its own last extrinsic.

    Implements sigma_{k,n}(l) = max*_{q: n_k(q)=n} Lambda_q(l)
    - max*_{q: n_k(q)=0} Lambda_q(l) - omega_{k,n}(l), renormalized so
    component 0 is exactly zero.
    """
    L, Q = grid.shape
    K = _num_streams_of(Q)
    if not 0 <= k < K:
        raise ValueError("stream index out of range")
    view = grid.reshape(L, 4 ** (K - 1 - k), 4, 4 ** k)
    marg = maxstar_reduce(view, axis=(1, 3), max_log=max_log)  # (L, 4)
    sigma = marg - marg[:, :1] - prev_extrinsic
    return sigma - sigma[:, :1]


def update_joint_llrs(
    grid: np.ndarray,
    k: int,
    new_extrinsic: np.ndarray,
    prev_extrinsic: np.ndarray,
) -> np.ndarray:
    """Swap stream k's extrinsic contribution inside the grid, in place.

    Lambda_q(l) += omega_new[n_k(q)] - omega_old[n_k(q)], then the grid
    is renormalized to component q=0.
    """
    L, Q = grid.shape
    K = _num_streams_of(Q)
    delta = np.asarray(new_extrinsic) - np.asarray(prev_extrinsic)  # (L, 4)
    view = grid.reshape(L, 4 ** (K - 1 - k), 4, 4 ** k)
    view += delta[:, None, :, None]
    grid -= grid[:, :1].copy()
    return grid


@dataclass
class SicResult:
    """Outcome of one block decode."""

    info_bits: np.ndarray  # (K, L - memory) uint8
    info_llrs: np.ndarray  # (K, L - memory) float


def sic_decode(
    received,
    trellis: TcmTrellis,
    superconst: SuperConstellation,
    permutations: list[Permutation],
    sigma_w2: float,
    n_it: int,
    max_log: bool = False,
    iteration_hook=None,
) -> SicResult:
    """Iteratively detect and decode all K superposed streams.

    Runs ``n_it`` outer iterations; within each, stream k's priors are
    marginalized from the grid, deinterleaved, decoded by the symbol
    BCJR, and the fresh extrinsics are folded back into the grid before
    the next stream is visited.  After the final iteration each stream's
    information bits are sliced from its last a-posteriori LLRs.

    ``iteration_hook(t, k, info_llrs)``, when given, observes each inner
    decode (useful for convergence instrumentation).
    """
    K = superconst.num_streams
    L = superconst.length
    if len(permutations) != K:
        raise ValueError("need one interleaver per stream")
    if any(p.length != L for p in permutations):
        raise ValueError("interleaver length does not match the block")
    if n_it < 1:
        raise ValueError("n_it must be at least 1")

    grid = init_joint_llrs(received, superconst, sigma_w2)
    omega = np.zeros((K, L, 4))
    info_llrs = [None] * K
    for t in range(n_it):
        for k in range(K):
            sigma = stream_prior_llrs(grid, k, omega[k], max_log=max_log)
            tau = permutations[k].deinterleave(sigma)
            nu, info = bcjr_decode(tau, trellis, terminated=True, max_log=max_log)
            new_omega = permutations[k].interleave(
                clamp_llrs(nu, EXTRINSIC_LLR_LIMIT))
            grid = update_joint_llrs(grid, k, new_omega, omega[k])
            omega[k] = new_omega
            info_llrs[k] = info
            if iteration_hook is not None:
                iteration_hook(t, k, info)
    bits = np.stack([hard_decision(x) for x in info_llrs]).astype(np.uint8)
    return SicResult(bits, np.stack(info_llrs))
