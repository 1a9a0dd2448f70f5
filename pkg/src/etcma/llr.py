"""Log-likelihood ratio conventions and log-domain combining helpers.

Symbol LLR vectors hold one entry per QPSK index with component 0 pinned
to zero, i.e. entry n is log p(n)/p(0).  Combining uses the exact
Jacobian logarithm by default; every function takes a ``max_log`` switch
for the max-only approximation.
"""

from __future__ import annotations

import numpy as np

#: Saturation applied to extrinsic LLRs before they are exponentiated or
#: differenced across iterations.  Numerically inert at double precision
#: for the block lengths used here, but keeps iterated extrinsics finite
#: so updates never form inf - inf.
LLR_CLAMP = 300.0


def maxstar(a, b, max_log: bool = False):
    """max*(a, b) = log(e^a + e^b), or plain max under ``max_log``.

    Computed as max(a, b) + log1p(exp(-|a - b|)) for stability.
    """
    if max_log:
        return np.maximum(a, b)
    return np.logaddexp(a, b)


def maxstar_reduce(x, axis=None, max_log: bool = False):
    """Fold max* over one or more axes of an array."""
    x = np.asarray(x, dtype=float)
    if max_log:
        return np.max(x, axis=axis)
    if axis is None or isinstance(axis, int):
        return np.logaddexp.reduce(x, axis=axis)
    # multiple axes: one stable pass with the shifted-exponential form
    m = np.max(x, axis=axis, keepdims=True)
    shift = np.where(np.isneginf(m), 0.0, m)  # all -inf groups stay -inf
    s = np.sum(np.exp(x - shift), axis=axis)
    with np.errstate(divide="ignore"):
        out = np.squeeze(shift, axis=axis) + np.log(s)
    return out


def clamp_llrs(x, limit: float = LLR_CLAMP) -> np.ndarray:
    """Saturate LLRs into [-limit, limit]."""
    return np.clip(x, -limit, limit)


def normalize_symbol_llrs(x) -> np.ndarray:
    """Pin component 0 of the trailing axis to zero by subtraction."""
    x = np.asarray(x, dtype=float)
    return x - x[..., :1]


def llrs_to_probs(x, axis: int = -1) -> np.ndarray:
    """Probabilities from (possibly unnormalized) LLRs along ``axis``."""
    x = np.asarray(x, dtype=float)
    z = x - np.max(x, axis=axis, keepdims=True)
    p = np.exp(z)
    return p / p.sum(axis=axis, keepdims=True)
