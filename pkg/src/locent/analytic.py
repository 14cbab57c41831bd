"""Closed-form Z-measurement bound for an edge (a, b) under Pauli noise.

Only three numbers describe the neighbourhood: how many flip-prone
(type-1) measured neighbours touch a only, b only, or both.  A flip on such a
neighbour toggles a Z correction on the endpoints it touches, which leaves
the edge in a mixture of the four Z-corrected copies of the two-qubit graph
state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import dense
from .graphs import Graph, from_edge_list, linear_chain, neighborhood_partition
from .noise import (
    NOISE_LETTERS,
    NoiseLayer,
    SingleQubitChannel,
    conjugate_channel,
    lc_frame,
    make_channel,
    pauli_channel,
)

CUTOFF = 1e-6


@dataclass(frozen=True)
class NeighborhoodCounts:
    n_a: int
    n_ab: int
    n_b: int
    par_a: int = 0
    par_ab: int = 0
    par_b: int = 0

    def __post_init__(self):
        if min(self.n_a, self.n_ab, self.n_b) < 0:
            raise ValueError("class sizes must be non-negative")
        if any(p not in (0, 1) for p in (self.par_a, self.par_ab, self.par_b)):
            raise ValueError("outcome parities must be 0 or 1")

    @classmethod
    def symmetric(cls, n: int) -> "NeighborhoodCounts":
        return cls(n, n, n)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.n_a, self.n_ab, self.n_b)


@dataclass(frozen=True)
class MixingProbabilities:
    """Weights of the corrections II, IZ, ZI, ZZ on (a, b)."""

    qbar: tuple[float, float, float, float]

    def __getitem__(self, beta: int) -> float:
        return self.qbar[beta]

    def as_array(self) -> np.ndarray:
        return np.array(self.qbar)


def _parity_probs(n: int, parity: int, s: float) -> tuple[float, float]:
    x = (-1) ** parity * (1 - 2 * s) ** n
    return 0.5 * (1 + x), 0.5 * (1 - x)


def mixing_probabilities(c: NeighborhoodCounts, s: float) -> MixingProbabilities:
    """Correction weights from the class sizes and the per-qubit flip chance ``s``."""
    if not 0.0 <= s <= 0.5:
        raise ValueError(f"flip probability {s} outside [0, 1/2]")
    ap, am = _parity_probs(c.n_a, c.par_a, s)
    bp, bm = _parity_probs(c.n_b, c.par_b, s)
    xp, xm = _parity_probs(c.n_ab, c.par_ab, s)
    q0 = am * xm * bm + ap * xp * bp
    q1 = am * xm * bp + ap * xp * bm
    q2 = ap * xm * bm + am * xp * bp
    q3 = am * xp * bm + ap * xm * bp
    return MixingProbabilities((q0, q1, q2, q3))


_EDGE = from_edge_list(2, [(0, 1)])

# region pattern shift caused by each Pauli on a (qubit 0) or on b (qubit 1)
_SHIFT_A = {"I": 0, "X": 0b01, "Y": 0b11, "Z": 0b10}
_SHIFT_B = {"I": 0, "X": 0b10, "Y": 0b11, "Z": 0b01}


def _require_pauli(ch: SingleQubitChannel | None) -> SingleQubitChannel:
    if ch is None:
        return make_channel("I")
    if not ch.is_pauli:
        raise ValueError(f"{ch.kind} is not a Pauli channel")
    return ch


def assemble_post_state(
    qbar: MixingProbabilities, ch_a: SingleQubitChannel | None = None, ch_b: SingleQubitChannel | None = None
) -> np.ndarray:
    """Two-qubit state: Z-corrected mixture of the edge graph state, then local noise."""
    ch_a, ch_b = _require_pauli(ch_a), _require_pauli(ch_b)
    rho = dense.dense_gd_state(_EDGE, qbar.as_array())
    rho = ch_a.apply(rho, 0)
    return ch_b.apply(rho, 1)


def post_state_patterns(
    qbar: MixingProbabilities, ch_a: SingleQubitChannel | None = None, ch_b: SingleQubitChannel | None = None
) -> np.ndarray:
    """Pattern weights of :func:`assemble_post_state`, obtained without matrices."""
    p = qbar.as_array()
    for ch, shifts in ((_require_pauli(ch_a), _SHIFT_A), (_require_pauli(ch_b), _SHIFT_B)):
        out = np.zeros(4)
        for w, L in zip(ch.probs, NOISE_LETTERS):
            out += w * p[np.arange(4) ^ shifts[L]]
        p = out
    return p


def pair_log_negativity(p: Sequence[float]) -> float:
    """Log-negativity of an edge GD state from its pattern weights."""
    lam = 0.5 - np.asarray(p)[::-1]
    return float(np.log2(1 + 2 * -lam[lam < 0].sum()))


def e0_from_counts(
    c: NeighborhoodCounts,
    s: float,
    ch_a: SingleQubitChannel | None = None,
    ch_b: SingleQubitChannel | None = None,
) -> float:
    return pair_log_negativity(post_state_patterns(mixing_probabilities(c, s), ch_a, ch_b))


def analytic_e0(n: int, q: float) -> float:
    """Symmetric neighbourhoods of size n, flip-type noise of strength q, clean (a, b)."""
    if n < 1:
        raise ValueError("neighbourhood size must be at least 1")
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"noise strength {q} outside [0, 1]")
    if q >= critical_noise(n):
        return 0.0
    return max(math.log2(3 * (1 - q) ** (2 * n) + 1) - 1, 0.0)


def analytic_e0_general(n_a: int, n_b: int, n_ab: int, q: float) -> float:
    """Same setting with unequal class sizes, via the partial-transpose spectrum."""
    t = 1 - q
    ta, tb, tc = t ** (n_a + n_ab), t ** (n_a + n_b), t ** (n_ab + n_b)
    lam = 0.25 * np.array([
        1 + ta - tb + tc,
        1 + ta + tb - tc,
        1 - ta + tb + tc,
        1 - ta - tb - tc,
    ])
    return float(np.log2(1 + 2 * -lam[lam < 0].sum()))


def critical_noise(n: int) -> float:
    if n < 1:
        raise ValueError("neighbourhood size must be at least 1")
    return 1 - 3 ** (-1 / (2 * n))


def pair_channels(pair: str, q: float) -> tuple[SingleQubitChannel, SingleQubitChannel]:
    """Channels on (a, b) from a two-digit label over 0=I, 1=X, 2=Y, 3=Z.

    A non-identity letter is applied with probability q/2.
    """
    if len(pair) != 2 or any(ch not in "0123" for ch in pair):
        raise ValueError(f"channel pair label {pair!r} must be two digits in 0..3")
    out = []
    for d in pair:
        k = int(d)
        probs = [1 - q / 2, 0.0, 0.0, 0.0] if k else [1.0, 0.0, 0.0, 0.0]
        if k:
            probs[k] = q / 2
        out.append(pauli_channel(probs))
    return out[0], out[1]


def e0_pair_curve_value(c: NeighborhoodCounts, pair: str, q: float, flip_kind: str = "BF") -> float:
    """E0 with neighbourhood noise ``flip_kind`` and the labelled channels on (a, b)."""
    s = make_channel(flip_kind, q).flip_probability
    ch_a, ch_b = pair_channels(pair, q)
    return e0_from_counts(c, s, ch_a, ch_b)


def critical_noise_numeric(
    c: NeighborhoodCounts, pair: str = "00", flip_kind: str = "BF",
    cutoff: float = CUTOFF, resolution: float = 1e-8,
) -> float:
    """Smallest q with E0 below ``cutoff``, by bisection (E0 decreases in q)."""
    f = lambda q: e0_pair_curve_value(c, pair, q, flip_kind)
    if f(0.0) < cutoff:
        return 0.0
    if f(1.0) >= cutoff:
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if f(mid) < cutoff:
            hi = mid
        else:
            lo = mid
    return hi


def small_q_expansion(n: int, q: float) -> tuple[float, float, float]:
    ln2 = math.log(2)
    return (1.0, -3 * n * q / (2 * ln2), 3 * n * (n - 2) * q * q / (8 * ln2))


def realizing_graph(c: NeighborhoodCounts) -> tuple[Graph, int, int]:
    """Edge (0, 1) with n_a leaves on 0, n_b leaves on 1 and n_ab shared neighbours."""
    edges = [(0, 1)]
    k = 2
    for _ in range(c.n_a):
        edges.append((0, k))
        k += 1
    for _ in range(c.n_b):
        edges.append((1, k))
        k += 1
    for _ in range(c.n_ab):
        edges += [(0, k), (1, k)]
        k += 1
    return from_edge_list(k, edges), 0, 1


@dataclass(frozen=True)
class LinearChainParams:
    counts: NeighborhoodCounts
    ch_a: SingleQubitChannel
    ch_b: SingleQubitChannel
    flip_probability: float
    graph: Graph
    a: int
    b: int
    layer: NoiseLayer


def linear_graph_params(n_l: int, kind: str, q: float = 0.5, bulk: bool = True) -> LinearChainParams:
    """Neighbourhood counts and (a, b) channels once the chain is connectified.

    Every qubit carries ``kind``.  The LC sequence along the interior gives a
    local Clifford frame; a measured neighbour is type-1 when its transformed
    channel can flip a Z outcome.
    """
    if n_l < 1:
        raise ValueError("chain needs at least one interior qubit")
    g, a, b = linear_chain(n_l, bulk=bulk)
    gp, frame = lc_frame(g, list(range(a + 1, b)))
    base = make_channel(kind, q)
    if not base.is_pauli:
        raise ValueError("chain rules apply to Pauli channels")
    layer = NoiseLayer(tuple(conjugate_channel(base, c) for c in frame))
    # classify at a generic strength so the counts do not collapse at q = 0
    probe = make_channel(kind, 0.5)
    type1 = [i for i, c in enumerate(frame) if i not in (a, b) and conjugate_channel(probe, c).flip_probability > 0]
    cls = neighborhood_partition(gp, a, b, type1=type1)
    n_a, n_ab, n_b = cls.type1_counts()
    # uniform noise: every type-1 qubit shares one flip probability
    flips = {round(layer[i].flip_probability, 15) for i in type1}
    s = flips.pop() if flips else 0.0
    return LinearChainParams(NeighborhoodCounts(n_a, n_ab, n_b), layer[a], layer[b], s, gp, a, b, layer)


def linear_chain_e0(n_l: int, kind: str, q: float, bulk: bool = True) -> float:
    prm = linear_graph_params(n_l, kind, q, bulk)
    return e0_from_counts(prm.counts, prm.flip_probability, prm.ch_a, prm.ch_b)


@dataclass(frozen=True)
class AnalyticCurve:
    pair: str
    counts: NeighborhoodCounts
    q: tuple[float, ...]
    e0: tuple[float, ...]

    def rows(self):
        for q, e in zip(self.q, self.e0):
            yield (self.pair, *self.counts.as_tuple(), q, e)


def analytic_curve(c: NeighborhoodCounts, pair: str, qs: Sequence[float], flip_kind: str = "BF") -> AnalyticCurve:
    qs = tuple(float(q) for q in qs)
    return AnalyticCurve(pair, c, qs, tuple(e0_pair_curve_value(c, pair, q, flip_kind) for q in qs))
