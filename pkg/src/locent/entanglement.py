"""Negativity, local stabilizer witnesses and the witness-based lower bound."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import dense
from .graphs import Graph, as_region
from .pauli import PauliString, pauli_expectation


def pt_eigenvalues(rho: np.ndarray, part_a: Sequence[int]) -> np.ndarray:
    """Eigenvalues of the partial transpose; entries below 1e-12 in size are zeroed."""
    n = dense.n_qubits(rho)
    part_a = list(part_a)
    if not part_a or len(part_a) >= n:
        raise ValueError(f"subsystem {part_a} is not a proper bipartition of {n} qubits")
    lam = np.linalg.eigvalsh(dense.hermitize(dense.partial_transpose(rho, part_a)))
    lam[np.abs(lam) < dense.EIG_FLOOR] = 0.0
    return lam


def negativity(rho: np.ndarray, part_a: Sequence[int] = (0,)) -> float:
    """Twice the summed magnitude of negative partial-transpose eigenvalues."""
    lam = pt_eigenvalues(rho, part_a)
    return float(2 * -lam[lam < 0].sum())


def log_negativity(rho: np.ndarray, part_a: Sequence[int] = (0,)) -> float:
    return float(np.log2(negativity(rho, part_a) + 1))


def negativity_from_eigenvalues(lam) -> float:
    lam = np.asarray(lam, dtype=float)
    return float(2 * -lam[lam < -dense.EIG_FLOOR].sum())


MEASURES = {"log_negativity": log_negativity, "negativity": negativity}


def get_measure(measure):
    if callable(measure):
        return measure
    try:
        return MEASURES[measure]
    except KeyError:
        raise ValueError(f"unknown entanglement measure {measure!r}") from None


# --- witnesses -------------------------------------------------------------


@dataclass(frozen=True)
class WitnessObservable:
    """Real linear combination of Pauli strings attached to a region of a graph."""

    graph: Graph
    region: tuple[int, ...]
    terms: tuple[tuple[float, PauliString], ...]

    @property
    def n(self) -> int:
        return self.graph.n

    def matrix(self) -> np.ndarray:
        dense._check_density(self.n)
        return sum(c * p.matrix() for c, p in self.terms)

    def expectation(self, rho: np.ndarray) -> float:
        if rho.shape != (1 << self.n, 1 << self.n):
            raise ValueError("state size does not match the witness")
        return float(sum(c * pauli_expectation(rho, p).real for c, p in self.terms))


def local_witness(g: Graph, omega: Sequence[int]) -> WitnessObservable:
    """1/2 I minus the product of (I + g_i)/2 over the region's generators.

    The product is expanded into its 2^|omega| stabilizer-group elements.
    The region must induce a connected subgraph.
    """
    om = as_region(omega, g.n)
    if not g.induced(om).is_connected():
        raise ValueError(f"region {om} is not connected in the graph; connectify first")
    gens = [dense.generator(g, i) for i in om]
    w = 0.5 ** len(om)
    terms = [(0.5 - w, PauliString(g.n))]
    for r in range(1, len(om) + 1):
        for sub in itertools.combinations(gens, r):
            p = sub[0]
            for s in sub[1:]:
                p = p * s
            # commuting Hermitian generators give a real sign
            sign = 1.0 if p.phase == 0 else -1.0
            terms.append((-w * sign, PauliString(g.n, p.xmask, p.zmask)))
    return WitnessObservable(g, om, tuple(terms))


def region_witness(g: Graph, omega: Sequence[int]) -> WitnessObservable:
    """The witness of the region's own subgraph, acting on |omega| qubits."""
    om = as_region(omega, g.n)
    sub = g.induced(om)
    return local_witness(sub, range(sub.n))


def witness_expectation(state, w: WitnessObservable) -> float:
    """Tr(rho W) for a density matrix, or 1/2 - p_0 on the region for a GD state."""
    from .gd import GDState, gd_marginal

    if isinstance(state, GDState):
        if state.graph != w.graph:
            raise ValueError("GD state and witness refer to different graphs")
        return 0.5 - float(gd_marginal(state, w.region).p[0])
    return w.expectation(np.asarray(state))


def wlb(omega: float, log: bool = False) -> float:
    """Smallest negativity compatible with a witness value ``omega``."""
    v = max(-2.0 * omega, 0.0)
    return float(np.log2(v + 1)) if log else v


@dataclass(frozen=True)
class WlbCertificate:
    f: float
    h: float
    family: str
    singular_values: tuple[float, ...]
    bound: float

    def to_dict(self) -> dict:
        return {"f": self.f, "h": self.h, "family": self.family,
                "singular_values": list(self.singular_values), "bound": self.bound}


# (name, h as a function of f, f interval)
WLB_FAMILIES = (
    ("i", lambda f: 1.0, (0.0, 2.0)),
    ("ii", lambda f: -1.0, (-2.0, 0.0)),
    ("iii", lambda f: 1.0 + f, (-2.0, 0.0)),
    ("iv", lambda f: -1.0 - f, (0.0, 2.0)),
)


def d_singular_values(f: float, h: float, region_size: int) -> tuple[float, ...]:
    sv = [abs(h), abs(h - f)]
    if region_size == 3:
        sv.append(abs(h - f / 2))
    return tuple(sv)


def wlb_certificate(omega: float, region_size: int = 2) -> WlbCertificate:
    """Best (f, h) over the four unit-norm families of the trace-norm bound.

    The objective -f*omega + h - 1 is linear in f along each family, so only
    interval endpoints are examined.  Ties go to the smaller |f|.
    """
    if region_size not in (2, 3):
        raise ValueError("certificate is defined for regions of size 2 or 3")
    if not -0.5 - 1e-12 <= omega <= 0.5 + 1e-12:
        raise ValueError(f"witness value {omega} outside [-1/2, 1/2]")
    best = None
    for name, hfun, (lo, hi) in WLB_FAMILIES:
        for f in (lo, hi):
            h = hfun(f)
            val = -f * omega + h - 1
            key = (round(val, 13), -abs(f))
            if best is None or key > best[0]:
                best = (key, name, f, h, val)
    _, name, f, h, val = best
    return WlbCertificate(f + 0.0, h + 0.0, name, d_singular_values(f, h, region_size), val)


def witness_report(omega: float, region_size: int = 2) -> str:
    cert = wlb_certificate(omega, region_size)
    return json.dumps({"omega": omega, "wlb": wlb(omega), "certificate": {"f": cert.f, "h": cert.h}})
