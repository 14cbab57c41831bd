"""Randomized self-checks behind ``locent verify``.

Each suite runs ``trials`` cases; case ``t`` draws from
``numpy.random.default_rng(seed + t)`` so a failure can be replayed alone.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import analytic, dense, entanglement, gd, localizable, noise
from .graphs import random_connected_graph
from .pauli import SingleQubitClifford

PAULI_KIND_NAMES = ("BF", "BPF", "PF", "DP")


@dataclass
class SuiteResult:
    name: str
    trials: int
    passed: bool
    message: str = ""


class CheckFailed(AssertionError):
    pass


def _check(cond: bool, msg: str):
    if not cond:
        raise CheckFailed(msg)


def _random_region(rng, n: int, g, size: int):
    while True:
        om = tuple(sorted(rng.choice(n, size=size, replace=False).tolist()))
        if g.induced(om).is_connected():
            return om


def case_appendix_c(rng: np.random.Generator):
    n_l = int(rng.integers(1, 9))
    mats = noise.linear_chain_unitaries(n_l)
    table = noise.linear_chain_table(n_l)
    for key, u in mats.items():
        c = SingleQubitClifford.from_matrix(u)
        for letter in "XYZ":
            got = c.conjugate(letter)
            _check(got == table[key][letter], f"n_L={n_l}, unitary {key}, {letter}: table {table[key][letter]} vs {got}")


def _mixing_bruteforce(c: analytic.NeighborhoodCounts, s: float) -> np.ndarray:
    sizes = (c.n_a, c.n_ab, c.n_b)
    pars = (c.par_a, c.par_ab, c.par_b)
    starts = [[1] * p + [0] * (k - p) for k, p in zip(sizes, pars)]
    out = np.zeros(4)
    total = sum(sizes)
    for flips in itertools.product((0, 1), repeat=total):
        w = np.prod([s if f else 1 - s for f in flips])
        ones, k = [], 0
        for base in starts:
            ones.append(sum(b ^ f for b, f in zip(base, flips[k:k + len(base)])) % 2)
            k += len(base)
        ba, bb = (ones[0] + ones[1]) % 2, (ones[2] + ones[1]) % 2
        out[2 * ba + bb] += w
    return out


def case_mixing(rng: np.random.Generator):
    sizes = rng.integers(0, 5, size=3)
    pars = [int(rng.integers(0, 2)) if k else 0 for k in sizes]
    c = analytic.NeighborhoodCounts(int(sizes[0]), int(sizes[1]), int(sizes[2]), pars[0], pars[1], pars[2])
    s = float(rng.uniform(0, 0.5))
    got = analytic.mixing_probabilities(c, s).as_array()
    ref = _mixing_bruteforce(c, s)
    _check(np.allclose(got, ref, atol=1e-12), f"counts {c}, s={s}: {got} vs {ref}")


def _random_layer(rng, n: int, kinds) -> noise.NoiseLayer:
    return noise.NoiseLayer(tuple(noise.make_channel(str(rng.choice(kinds)), float(rng.uniform())) for _ in range(n)))


def case_gd_dense(rng: np.random.Generator):
    n = int(rng.integers(2, 6))
    g = random_connected_graph(n, rng)
    layer = _random_layer(rng, n, PAULI_KIND_NAMES)
    ref = noise.apply_noise(dense.to_density(dense.graph_state(g)), layer)
    got = gd.gd_from_pauli_noise(g, layer).to_dense()
    dist = 0.5 * np.abs(np.linalg.eigvalsh(dense.hermitize(ref - got))).sum()
    _check(dist < 1e-10, f"graph {g.edges()}: trace distance {dist}")


def case_hierarchy(rng: np.random.Generator):
    n = int(rng.integers(3, 6))
    g = random_connected_graph(n, rng)
    size = int(rng.integers(2, min(3, n - 1) + 1))
    om = _random_region(rng, n, g, size)
    kind = str(rng.choice(PAULI_KIND_NAMES + ("AD",)))
    q = float(rng.uniform())
    rho = noise.apply_noise(dense.to_density(dense.graph_state(g)), noise.NoiseLayer.uniform(n, kind, q))
    rep = localizable.hierarchy_report(rho, g, om, measure="negativity")
    _check(rep.ok, f"graph {g.edges()}, region {om}, {kind}({q:.4f}): flags {rep.flags}")


def case_gd_equalities(rng: np.random.Generator):
    n = int(rng.integers(3, 6))
    g = random_connected_graph(n, rng)
    om = _random_region(rng, n, g, 2)
    layer = _random_layer(rng, n, PAULI_KIND_NAMES)
    st = gd.gd_from_pauli_noise(g, layer)
    fast = localizable.mlb_zbasis(st, om)
    slow = localizable.mlb_zbasis(st.to_dense(), om)
    _check(abs(fast - slow) < 1e-9, f"graph {g.edges()}, region {om}: GD {fast} vs dense {slow}")
    m = gd.gd_marginal(st, om)
    if m.p[0] >= m.p.max():
        w = entanglement.witness_expectation(st, entanglement.local_witness(g, om))
        _check(abs(gd.gd_region_negativity(m) - entanglement.wlb(w)) < 1e-10, f"witness equality fails on {g.edges()}")


def case_wlb(rng: np.random.Generator):
    omega = float(rng.uniform(-0.5, 0.5))
    for size in (2, 3):
        cert = entanglement.wlb_certificate(omega, size)
        _check(abs(cert.bound - entanglement.wlb(omega)) < 1e-9, f"omega={omega}: {cert}")
        _check(abs(max(cert.singular_values) - 1) < 1e-9, f"omega={omega}: norm {cert.singular_values}")


def case_analytic_dense(rng: np.random.Generator):
    n = int(rng.integers(1, 3))
    c = analytic.NeighborhoodCounts.symmetric(n)
    kind = str(rng.choice(PAULI_KIND_NAMES))
    q = float(rng.uniform())
    g, a, b = analytic.realizing_graph(c)
    rho = noise.apply_noise(dense.to_density(dense.graph_state(g)), noise.NoiseLayer.uniform(g.n, kind, q))
    ref = localizable.mlb_zbasis(rho, (a, b))
    ch = noise.make_channel(kind, q)
    got = analytic.e0_from_counts(c, ch.flip_probability, ch, ch)
    _check(abs(got - ref) < 1e-10, f"counts {c.as_tuple()}, {kind}({q}): analytic {got} vs dense {ref}")


SUITES: dict[str, Callable[[np.random.Generator], None]] = {
    "appendix-c": case_appendix_c,
    "mixing": case_mixing,
    "gd-dense": case_gd_dense,
    "gd-equalities": case_gd_equalities,
    "wlb": case_wlb,
    "analytic-dense": case_analytic_dense,
    "hierarchy": case_hierarchy,
}


def run_suite(name: str, seed: int, trials: int) -> SuiteResult:
    case = SUITES[name]
    for t in range(trials):
        try:
            case(np.random.default_rng(seed + t))
        except CheckFailed as exc:
            return SuiteResult(name, t + 1, False, f"trial {t} (seed {seed + t}): {exc}")
    return SuiteResult(name, trials, True)


def run_all(seed: int = 0, trials: int = 20, suites=None) -> list[SuiteResult]:
    if trials == 0:
        warnings.warn("verify ran with zero trials; nothing was checked", stacklevel=2)
    return [run_suite(s, seed, trials) for s in (suites or SUITES)]
