"""Graph-diagonal states: mixtures of Z-pattern-flipped copies of one graph state.

A GD state on graph ``g`` is stored as a probability vector ``p`` over the
``2**n`` patterns nu, using the same index convention as the dense engine
(qubit 0 is the most significant bit), so ``to_dense`` is a plain sum of
``p[nu] |G^nu><G^nu|``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import dense
from .entanglement import log_negativity, negativity
from .graphs import Graph, as_region, bits
from .noise import NoiseLayer

MAX_GD_QUBITS = 26


@dataclass(frozen=True, eq=False)
class GDState:
    graph: Graph
    p: np.ndarray

    def __post_init__(self):
        if self.graph.n > MAX_GD_QUBITS:
            raise dense.CapExceeded(f"GD state limited to {MAX_GD_QUBITS} qubits")
        p = np.asarray(self.p, dtype=float).reshape(-1)
        if p.size != 1 << self.graph.n:
            raise ValueError("probability vector length does not match the graph")
        if p.min() < -1e-12 or abs(p.sum() - 1) > 1e-10:
            raise ValueError("GD coefficients must be a probability vector")
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        return self.graph.n

    @classmethod
    def pure(cls, g: Graph) -> "GDState":
        p = np.zeros(1 << g.n)
        p[0] = 1.0
        return cls(g, p)

    def to_dense(self) -> np.ndarray:
        return dense.dense_gd_state(self.graph, self.p)


@dataclass(frozen=True, eq=False)
class RegionMarginal:
    """Pattern distribution restricted to a region (first member = high bit)."""

    region: tuple[int, ...]
    subgraph: Graph
    p: np.ndarray

    def region_state(self) -> np.ndarray:
        """sum_nu p_nu Z_nu |G_region><G_region| Z_nu on the region's qubits."""
        return dense.dense_gd_state(self.subgraph, self.p)

    def marginal(self, members: Sequence[int]) -> "RegionMarginal":
        """Marginal on a subset given in terms of original node labels."""
        sub = as_region(members, max(self.region) + 1)
        pos = [self.region.index(v) for v in sub]
        t = self.p.reshape((2,) * len(self.region))
        drop = tuple(k for k in range(len(self.region)) if k not in pos)
        return RegionMarginal(sub, self.subgraph.induced(pos), t.sum(axis=drop).reshape(-1))


def _flip(t: np.ndarray, mask: int) -> np.ndarray:
    axes = tuple(bits(mask))
    return np.flip(t, axis=axes) if axes else t


def gd_from_pauli_noise(g: Graph, layer: NoiseLayer) -> GDState:
    """Pattern distribution of a graph state after independent Pauli noise.

    On a graph state, X_i acts as Z on the neighbours of i, Y_i as Z on i and
    its neighbours, Z_i as itself, so each channel convolves the distribution
    with up to three pattern shifts.
    """
    if len(layer) != g.n:
        raise ValueError(f"noise layer has {len(layer)} channels for {g.n} qubits")
    if not layer.is_pauli:
        raise ValueError("GD representation requires Pauli channels only")
    if g.n > MAX_GD_QUBITS:
        raise dense.CapExceeded(f"GD state limited to {MAX_GD_QUBITS} qubits")
    t = np.zeros((2,) * g.n)
    t[(0,) * g.n] = 1.0
    for i, ch in enumerate(layer.channels):
        q0, qx, qy, qz = ch.probs
        if q0 >= 1.0:
            continue
        nb = g.adj[i]
        out = q0 * t
        for w, mask in ((qx, nb), (qy, nb | 1 << i), (qz, 1 << i)):
            if w > 0:
                out = out + w * _flip(t, mask)
        t = out
    return GDState(g, t.reshape(-1))


def gd_marginal(gd: GDState, omega: Sequence[int]) -> RegionMarginal:
    om = as_region(omega, gd.n)
    t = gd.p.reshape((2,) * gd.n)
    drop = tuple(i for i in range(gd.n) if i not in om)
    return RegionMarginal(om, gd.graph.induced(om), t.sum(axis=drop).reshape(-1))


def pair_pt_eigenvalues(p_tilde: Sequence[float]) -> np.ndarray:
    """Partial-transpose spectrum of an edge region: lambda_i = 1/2 - p_(3-i)."""
    p = np.asarray(p_tilde, dtype=float)
    if p.shape != (4,):
        raise ValueError("closed form applies to two-qubit regions only")
    return 0.5 - p[::-1]


def gd_region_negativity(m: RegionMarginal, part_a: Sequence[int] | None = None) -> float:
    if len(m.region) == 2 and m.subgraph.has_edge(0, 1):
        lam = pair_pt_eigenvalues(m.p)
        return float(2 * -lam[lam < 0].sum())
    return negativity(m.region_state(), _local_part(m, part_a))


def gd_region_log_negativity(m: RegionMarginal, part_a: Sequence[int] | None = None) -> float:
    """Closed form for an edge region, dense eigensolve otherwise.

    ``part_a`` lists original node labels of the transposed side and defaults
    to the region's first member.
    """
    if len(m.region) == 2 and m.subgraph.has_edge(0, 1):
        return float(np.log2(gd_region_negativity(m) + 1))
    return log_negativity(m.region_state(), _local_part(m, part_a))


def _local_part(m: RegionMarginal, part_a) -> list[int]:
    if part_a is None:
        return [0]
    return [m.region.index(v) for v in part_a]
