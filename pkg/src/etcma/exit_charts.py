"""EXIT-chart analysis: MI estimation, a-priori modeling, transfer curves.

Mutual information between a stream's symbols and any of the LLR
vectors flowing through the receiver (sigma, tau, nu, omega) is
estimated from samples; a-priori LLRs at a prescribed MI are generated
with the independent-per-bit Gaussian model standard in EXIT analysis.
Detector (EMSD) and decoder (ETCMD) transfer characteristics built from
these two pieces predict receiver convergence and drive the trellis
code selection.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .bcjr import bcjr_decode
from .channel import ChannelSpec, add_noise
from .receiver import init_joint_llrs, stream_prior_llrs, update_joint_llrs
from .shaping import make_permutations, make_signatures, select_params
from .superposition import SuperConstellation, transmit_block
from .trellis import FOUR_STATE, TWO_STATE, ConvCode, build_trellis, tcm_encode

LN2 = np.log(2.0)

#: Log-domain margin of "perfect" a-priori knowledge.  exp(-200) vanishes
#: against every other quantity in the receiver, yet the value stays far
#: below the extrinsic containment bound.
PEAK_LLR = 200.0

# Gauss-Hermite rule for the binary-input Gaussian MI integral.
_GH_NODES, _GH_WEIGHTS = np.polynomial.hermite.hermgauss(129)


def estimate_mi(llrs, true_symbols) -> float:
    """Estimate I(s; llr) in bits from per-position symbol LLR vectors.

    I = 2 - (1/L) sum_l (max*2_n x_n(l) - x_{true}(l)) with x in bits
    (LLRs rescaled by 1/ln 2) and max*2 the base-2 log-sum-exp.  Exact at
    the endpoints: all-zero rows give 0, perfectly peaked rows give 2.
    """
    x = np.asarray(llrs, dtype=float)
    true_symbols = np.asarray(true_symbols)
    if x.ndim != 2 or x.shape[1] != 4:
        raise ValueError("llrs must have shape (L, 4)")
    if x.shape[0] == 0:
        raise ValueError("cannot estimate MI from an empty sample")
    if true_symbols.shape != (x.shape[0],):
        raise ValueError("true_symbols must match the number of LLR rows")
    if np.any((true_symbols < 0) | (true_symbols > 3)):
        raise ValueError("true symbol indices must lie in 0..3")

    x = x / LN2
    m = np.max(x, axis=1)
    lse2 = m + np.log2(np.sum(np.exp2(x - m[:, None]), axis=1))
    truth = x[np.arange(x.shape[0]), true_symbols]
    return float(2.0 - np.mean(lse2 - truth))


def binary_gaussian_mi(spread: float) -> float:
    """MI in bits of a binary input observed through a consistent
    Gaussian LLR channel: llr ~ N(+-spread^2/2, spread^2)."""
    if spread < 0:
        raise ValueError("spread must be nonnegative")
    if spread == 0.0:
        return 0.0
    # E[log2(1 + e^-x)] with x ~ N(mu, spread^2), by Gauss-Hermite
    mu = 0.5 * spread * spread
    xs = mu + np.sqrt(2.0) * spread * _GH_NODES
    vals = np.logaddexp(0.0, -xs) / LN2
    return float(1.0 - np.dot(_GH_WEIGHTS, vals) / np.sqrt(np.pi))


def spread_for_binary_mi(target: float) -> float:
    """Invert binary_gaussian_mi by bisection on [0, 80]."""
    if not 0.0 <= target <= 1.0:
        raise ValueError("per-bit MI must lie in [0, 1]")
    if target == 0.0:
        return 0.0
    if target == 1.0:
        raise ValueError("per-bit MI of exactly 1 needs an infinite spread")
    return float(brentq(lambda s: binary_gaussian_mi(s) - target, 0.0, 80.0,
                        xtol=1e-12))


def gen_apriori_llrs(target_mi: float, true_symbols, seed=None) -> np.ndarray:
    """Draw symbol a-priori LLR vectors carrying ``target_mi`` bits.

    Each of the two label bits gets an independent consistent-Gaussian
    LLR at MI = target_mi/2; the symbol vector is their superposition,
    normalized to component 0.  target 0 returns exact zeros; target 2
    returns vectors peaked at the true symbol with margin PEAK_LLR.
    """
    if not 0.0 <= target_mi <= 2.0:
        raise ValueError("target MI must lie in [0, 2]")
    true_symbols = np.asarray(true_symbols)
    L = true_symbols.shape[0]
    if np.any((true_symbols < 0) | (true_symbols > 3)):
        raise ValueError("true symbol indices must lie in 0..3")

    if target_mi == 0.0:
        return np.zeros((L, 4))
    if target_mi == 2.0:
        out = np.where(np.arange(4) == true_symbols[:, None], PEAK_LLR, 0.0)
        return out - out[:, :1]

    rng = np.random.default_rng(seed)
    s = spread_for_binary_mi(target_mi / 2.0)
    # lambda_i = log P(b_i=0)/P(b_i=1), consistent: mean has sign (1-2b)
    bits = np.stack([(true_symbols >> 1) & 1, true_symbols & 1])  # (2, L)
    lam = rng.normal((1.0 - 2.0 * bits) * (s * s / 2.0), s)  # (2, L)
    n = np.arange(4)
    digit = np.stack([(n >> 1) & 1, n & 1])  # (2, 4)
    return -(lam.T @ digit)  # component 0 is zero by construction


@dataclass(frozen=True)
class ExitCurve:
    """A measured transfer characteristic on a grid of a-priori MI."""

    kind: str  # "emsd" or "etcmd"
    i_in: np.ndarray
    i_out: np.ndarray
    num_streams: int | None = None
    snr_db: float | None = None
    code: ConvCode | None = None
    length: int = 0
    num_blocks: int = 0

    def __post_init__(self):
        i_in = np.asarray(self.i_in, dtype=float)
        i_out = np.asarray(self.i_out, dtype=float)
        if i_in.shape != i_out.shape or i_in.ndim != 1:
            raise ValueError("i_in and i_out must be 1-D and equally long")
        if np.any(np.diff(i_in) <= 0):
            raise ValueError("i_in must be strictly increasing")
        if np.any((i_out < 0) | (i_out > 2)) or np.any((i_in < 0) | (i_in > 2)):
            raise ValueError("MI values must lie in [0, 2]")
        object.__setattr__(self, "i_in", i_in)
        object.__setattr__(self, "i_out", i_out)

    def interp(self, x) -> np.ndarray | float:
        return np.interp(x, self.i_in, self.i_out)


def _point_rng(seed, *indices):
    return np.random.default_rng(np.random.SeedSequence(entropy=(seed, *indices)))


def etcmd_transfer_curve(code: ConvCode, i_grid, length: int = 4000,
                         num_blocks: int = 2, seed: int = 0) -> ExitCurve:
    """Decoder characteristic I_nu vs I_tau, measured on random
    terminated blocks; independent of SNR and of the stream count."""
    grid = np.unique(np.asarray(i_grid, dtype=float))
    trellis = build_trellis(code)
    n_info = length - code.memory
    i_out = np.zeros_like(grid)
    for b in range(num_blocks):
        rng = _point_rng(seed, b)
        bits = rng.integers(0, 2, n_info)
        syms = tcm_encode(bits, code, terminate=True)
        for j, target in enumerate(grid):
            tau = gen_apriori_llrs(target, syms, _point_rng(seed, b, j))
            nu, _ = bcjr_decode(tau, trellis, terminated=True)
            i_out[j] += estimate_mi(nu, syms)
    i_out = np.clip(i_out / num_blocks, 0.0, 2.0)
    return ExitCurve("etcmd", grid, i_out, code=code, length=length,
                     num_blocks=num_blocks)


def emsd_transfer_curve(num_streams: int, snr_db: float, i_grid,
                        length: int = 4800, num_blocks: int = 2,
                        seed: int = 0, signature_design: str | None = None,
                        code: ConvCode | None = None) -> ExitCurve:
    """Detector characteristic I_sigma vs I_omega at an aggregate SNR.

    For every block a random transmission is observed in noise; all K
    streams' extrinsics are modeled at the probed MI, folded into the
    joint grid, and the marginal delivered to each stream (its own prior
    excluded) is measured and averaged.
    """
    grid = np.unique(np.asarray(i_grid, dtype=float))
    params = select_params(num_streams)
    code = params.code if code is None else code
    design = params.signature_design if signature_design is None else signature_design
    trellis = build_trellis(code)
    sigs = make_signatures(design, num_streams, length, seed=seed)
    sc = SuperConstellation(sigs, length=length)
    spec = ChannelSpec(snr_db, num_streams)
    zeros = np.zeros((length, 4))

    i_out = np.zeros_like(grid)
    for b in range(num_blocks):
        rng = _point_rng(seed, b)
        perms = make_permutations("random", num_streams, length, rng)
        bits = rng.integers(0, 2, (num_streams, length - code.memory))
        block = transmit_block(bits, trellis, sigs, perms)
        r = add_noise(block.composite, spec, rng)
        grid0 = init_joint_llrs(r, sc, spec.sigma_w2)
        for j, target in enumerate(grid):
            lam = grid0.copy()
            omegas = [
                gen_apriori_llrs(target, block.symbol_indices[k],
                                 _point_rng(seed, b, j, k))
                for k in range(num_streams)
            ]
            for k in range(num_streams):
                update_joint_llrs(lam, k, omegas[k], zeros)
            acc = 0.0
            for k in range(num_streams):
                sigma = stream_prior_llrs(lam, k, omegas[k])
                acc += estimate_mi(sigma, block.symbol_indices[k])
            i_out[j] += acc / num_streams
    i_out = np.clip(i_out / num_blocks, 0.0, 2.0)
    return ExitCurve("emsd", grid, i_out, num_streams=num_streams,
                     snr_db=snr_db, length=length, num_blocks=num_blocks)


@dataclass(frozen=True)
class CodeSelection:
    """Outcome of the EXIT intersection analysis at one operating point."""

    code: ConvCode
    fixed_points: dict[ConvCode, float] = field(repr=False)
    emsd: ExitCurve = field(repr=False, default=None)
    etcmd: dict[ConvCode, ExitCurve] = field(repr=False, default=None)


def chart_fixed_point(emsd: ExitCurve, etcmd: ExitCurve,
                      tol: float = 1e-6, max_steps: int = 500) -> float:
    """Iterate I_omega <- ETCMD(EMSD(I_omega)) from zero a-priori and
    return the converged I_omega (the charts' lowest intersection)."""
    x = 0.0
    for _ in range(max_steps):
        x_new = float(etcmd.interp(emsd.interp(x)))
        if abs(x_new - x) < tol:
            return x_new
        x = x_new
    return x


def select_code_by_exit(num_streams: int, snr_db: float,
                        codes=(FOUR_STATE, TWO_STATE), i_grid=None,
                        seed: int = 0, detector_length: int = 4800,
                        decoder_length: int = 4000, num_blocks: int = 2,
                        etcmd_curves: dict[ConvCode, ExitCurve] | None = None
                        ) -> CodeSelection:
    """Pick the trellis code whose chart intersection sits closest to the
    (2, 2) corner at the given aggregate SNR.

    Decoder curves are SNR-independent, so precomputed ones can be
    passed in when sweeping several operating points.
    """
    if i_grid is None:
        i_grid = np.linspace(0.0, 2.0, 13)
    emsd = emsd_transfer_curve(num_streams, snr_db, i_grid, seed=seed,
                               length=detector_length, num_blocks=num_blocks)
    if etcmd_curves is None:
        etcmd_curves = {
            code: etcmd_transfer_curve(code, i_grid, length=decoder_length,
                                       num_blocks=num_blocks, seed=seed)
            for code in codes
        }
    fixed_points = {code: chart_fixed_point(emsd, etcmd_curves[code])
                    for code in codes}
    best = max(codes, key=lambda c: fixed_points[c])
    return CodeSelection(best, fixed_points, emsd, dict(etcmd_curves))
