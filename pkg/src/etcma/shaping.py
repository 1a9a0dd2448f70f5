"""Per-stream symbol interleavers, scrambling signatures, and parameter selection.

Each stream k rearranges its TCM symbol sequence with a permutation and
multiplies it by a unit-modulus signature c_k(l) before superposition.
The interleaver convention is fixed here once for the whole package: the
channel-position sequence is y with y[perm[i]] = x[i], i.e. trellis step
i is transmitted on resource element perm[i].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .trellis import FOUR_STATE, TWO_STATE, QPSK_SYMBOLS, ConvCode

_UNIT_TOL = 1e-9


@dataclass
class Permutation:
    """A permutation of block positions with both transport directions.

    ``interleave`` moves trellis-ordered data into channel order,
    ``deinterleave`` undoes it; the two compose to the identity.
    """

    forward: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.forward, dtype=np.int64)
        if p.ndim != 1:
            raise ValueError("permutation map must be one-dimensional")
        if not np.array_equal(np.sort(p), np.arange(p.size)):
            raise ValueError("map is not a bijection on 0..L-1")
        self.forward = p
        self._inverse = np.empty_like(p)
        self._inverse[p] = np.arange(p.size)

    @classmethod
    def identity(cls, length: int) -> "Permutation":
        return cls(np.arange(length))

    @property
    def length(self) -> int:
        return self.forward.size

    def interleave(self, x: np.ndarray) -> np.ndarray:
        """Trellis order -> channel order along axis 0: out[forward[i]] = x[i]."""
        x = np.asarray(x)
        if x.shape[0] != self.length:
            raise ValueError("block length mismatch")
        out = np.empty_like(x)
        out[self.forward] = x
        return out

    def deinterleave(self, x: np.ndarray) -> np.ndarray:
        """Channel order -> trellis order along axis 0: out[i] = x[forward[i]]."""
        x = np.asarray(x)
        if x.shape[0] != self.length:
            raise ValueError("block length mismatch")
        return x[self.forward]

    def inverse(self) -> "Permutation":
        return Permutation(self._inverse.copy())


def gen_random_permutation(length: int, seed) -> Permutation:
    """Uniformly random permutation (Fisher-Yates) from a seeded generator."""
    if length < 1:
        raise ValueError("length must be positive")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    return Permutation(rng.permutation(length))


def gen_circular_shift_set(base: Permutation, num_streams: int) -> list[Permutation]:
    """Derive one permutation per stream by circularly shifting a base map.

    Stream k reads the base permutation at offset k*floor(L/K):
    perm_k(i) = base((i + k*floor(L/K)) mod L).  Stream 0 is the base.
    """
    if num_streams < 1:
        raise ValueError("need at least one stream")
    L = base.length
    step = L // num_streams
    out = []
    for k in range(num_streams):
        idx = (np.arange(L) + k * step) % L
        out.append(Permutation(base.forward[idx]))
    return out


def gen_qpp_permutation(length: int, f1: int, f2: int) -> Permutation:
    """Quadratic polynomial permutation pi(i) = (f1*i + f2*i^2) mod L.

    The coefficient pair must actually produce a bijection; this is
    checked constructively and rejected otherwise.
    """
    i = np.arange(length, dtype=np.int64)
    p = (f1 * i + f2 * i * i) % length
    if np.unique(p).size != length:
        raise ValueError(f"(f1={f1}, f2={f2}) is not a bijection mod {length}")
    return Permutation(p)


def make_permutations(design: str, num_streams: int, length: int, seed) -> list[Permutation]:
    """Build the per-stream interleaver set for one of the named designs.

    ``random``  independent uniform permutations per stream;
    ``circular``  one random base permutation plus circular shifts;
    ``qpp``  first ``num_streams`` distinct quadratic permutations found by
    scanning (f1, f2) in lexicographic order over valid coefficients.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if design == "random":
        return [gen_random_permutation(length, rng) for _ in range(num_streams)]
    if design == "circular":
        return gen_circular_shift_set(gen_random_permutation(length, rng), num_streams)
    if design == "qpp":
        found: list[Permutation] = []
        seen: set[bytes] = set()
        for f2 in range(1, length):
            for f1 in range(1, length):
                if math.gcd(f1, length) != 1:
                    continue
                try:
                    perm = gen_qpp_permutation(length, f1, f2)
                except ValueError:
                    continue
                key = perm.forward.tobytes()
                if key not in seen:
                    seen.add(key)
                    found.append(perm)
                if len(found) == num_streams:
                    return found
        raise ValueError(f"could not find {num_streams} distinct QPP maps of length {length}")
    raise ValueError(f"unknown interleaver design {design!r}; use random|circular|qpp")


@dataclass
class Signature:
    """Unit-modulus scrambling sequence of one stream.

    ``values`` is either a scalar (signature constant across the block) or
    a length-L array.  All entries must lie on the unit circle.
    """

    values: np.ndarray
    design: str = "custom"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim > 1:
            raise ValueError("signature must be scalar or one-dimensional")
        if np.any(np.abs(np.abs(v) - 1.0) > _UNIT_TOL):
            raise ValueError("signature entries must have unit modulus")
        self.values = v

    @property
    def is_constant(self) -> bool:
        return self.values.ndim == 0

    def sequence(self, length: int) -> np.ndarray:
        """Materialize the signature over a block of ``length`` elements."""
        if self.is_constant:
            return np.full(length, self.values[()])
        if self.values.size != length:
            raise ValueError("signature length does not match block length")
        return self.values.copy()


def uniform_phase_signatures(num_streams: int, mu: int = 2) -> list[Signature]:
    """Constant signatures with uniformly spaced phases exp(j*pi*k/(K*mu)).

    ``mu`` is the modulation density; mu = 2 for QPSK spreads K streams
    evenly over one quadrant.
    """
    if num_streams < 1:
        raise ValueError("need at least one stream")
    return [
        Signature(np.exp(1j * np.pi * k / (num_streams * mu)), design="uniform")
        for k in range(num_streams)
    ]


def zadoff_chu_signatures(length: int, num_streams: int) -> list[Signature]:
    """Zadoff-Chu scrambling sequences with the smallest coprime roots.

    Stream k gets root r_k, the (k+1)-th smallest positive integer
    relatively prime with the block length, and the sequence
    c_k(l) = exp(-j*pi*r_k*l*(l + L mod 2)/L).
    """
    roots = zadoff_chu_roots(length, num_streams)
    l = np.arange(length)
    out = []
    for r in roots:
        seq = np.exp(-1j * np.pi * r * l * (l + length % 2) / length)
        out.append(Signature(seq, design="zadoff_chu"))
    return out


def zadoff_chu_roots(length: int, num_streams: int) -> list[int]:
    """The ``num_streams`` smallest positive integers coprime with ``length``."""
    roots = []
    r = 1
    while len(roots) < num_streams:
        if r >= length:
            raise ValueError(f"not enough coprime roots below {length}")
        if math.gcd(r, length) == 1:
            roots.append(r)
        r += 1
    return roots


def _constant_super_points(coeffs: np.ndarray) -> np.ndarray:
    """All 4^K superposed points for constant per-stream coefficients."""
    K = coeffs.size
    q = np.arange(4 ** K)
    pts = np.zeros(q.size, dtype=complex)
    for k in range(K):
        pts += coeffs[k] * QPSK_SYMBOLS[(q >> (2 * k)) & 3]
    return pts


def min_pairwise_distance(points: np.ndarray, chunk: int = 1024) -> float:
    """Smallest pairwise Euclidean distance among constellation points."""
    n = points.size
    best = np.inf
    for i0 in range(0, n - 1, chunk):
        block = points[i0 : i0 + chunk]
        d = np.abs(block[:, None] - points[None, i0:])
        rows = np.arange(block.size)
        d[rows, rows] = np.inf  # self-distances within the block
        best = min(best, float(d.min()))
    return best


def optimize_min_distance_signatures(
    num_streams: int,
    budget: int = 4000,
    seed: int = 0,
    restarts: int = 4,
) -> tuple[list[Signature], float]:
    """Search constant phase signatures maximizing the superposition d_min.

    Stream 0 is pinned to c_0 = 1; the remaining K-1 phases live in
    [0, pi/2) because QPSK is invariant under quarter-turn rotations.
    The search runs seeded random restarts, each followed by rounds of
    per-coordinate grid refinement (a shrinking bracket around the best
    phase), until the evaluation budget is spent.

    Returns the signature list and the achieved minimum distance.
    """
    if num_streams < 1:
        raise ValueError("need at least one stream")
    if num_streams == 1:
        return [Signature(np.array(1.0 + 0j), design="max_dmin")], np.inf

    rng = np.random.default_rng(seed)
    nfree = num_streams - 1
    evals = 0

    def objective(phases: np.ndarray) -> float:
        nonlocal evals
        evals += 1
        coeffs = np.concatenate([[1.0 + 0j], np.exp(1j * phases)])
        return min_pairwise_distance(_constant_super_points(coeffs))

    best_phases = None
    best_val = -np.inf
    grid_n = 24
    for _ in range(restarts):
        phases = rng.uniform(0.0, np.pi / 2, nfree)
        val = objective(phases)
        width = np.pi / 2
        while width > 1e-5 and evals < budget:
            for k in range(nfree):
                offsets = width * (np.arange(grid_n) / grid_n - 0.5)
                for off in offsets:
                    if evals >= budget:
                        break
                    trial = phases.copy()
                    trial[k] = (phases[k] + off) % (np.pi / 2)
                    v = objective(trial)
                    if v > val:
                        val, phases = v, trial
            width *= 0.5
        if val > best_val:
            best_val, best_phases = val, phases.copy()
        if evals >= budget:
            break

    coeffs = np.concatenate([[1.0 + 0j], np.exp(1j * best_phases)])
    sigs = [Signature(np.array(c), design="max_dmin") for c in coeffs]
    return sigs, best_val


#: Signature design automatically chosen per stream count.
AUTO_SIGNATURE_DESIGN = {
    1: "uniform",
    2: "max_dmin",
    3: "uniform",
    4: "uniform",
    5: "uniform",
    6: "zadoff_chu",
    7: "zadoff_chu",
}


def make_signatures(
    design: str, num_streams: int, length: int, seed: int = 0
) -> list[Signature]:
    """Build the per-stream signature set for one of the named designs."""
    if design == "uniform":
        return uniform_phase_signatures(num_streams)
    if design == "zadoff_chu":
        return zadoff_chu_signatures(length, num_streams)
    if design == "max_dmin":
        sigs, _ = optimize_min_distance_signatures(num_streams, seed=seed)
        return sigs
    raise ValueError(f"unknown signature design {design!r}; use uniform|zadoff_chu|max_dmin")


@dataclass
class StreamParams:
    """Code, iteration count, and signature design serving K streams."""

    num_streams: int
    code: ConvCode
    n_it: int
    signature_design: str


def select_params(num_streams: int) -> StreamParams:
    """Default operating parameters for 1..7 superposed streams.

    Up to three streams use the four-state code with 10 receiver
    iterations; four or more use the two-state code with 15.  The
    signature design follows the stream count (single phase / optimized
    phases / uniform phases / Zadoff-Chu).
    """
    if num_streams not in AUTO_SIGNATURE_DESIGN:
        raise ValueError(
            f"no default parameters for K={num_streams}; "
            "construct StreamParams explicitly for other stream counts"
        )
    if num_streams <= 3:
        code, n_it = FOUR_STATE, 10
    else:
        code, n_it = TWO_STATE, 15
    return StreamParams(num_streams, code, n_it, AUTO_SIGNATURE_DESIGN[num_streams])
