import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from locent import dense
from locent.entanglement import (
    WLB_FAMILIES,
    d_singular_values,
    get_measure,
    local_witness,
    log_negativity,
    negativity,
    pt_eigenvalues,
    region_witness,
    witness_expectation,
    witness_report,
    wlb,
    wlb_certificate,
)
from locent.gd import GDState, gd_from_pauli_noise, gd_marginal, gd_region_negativity
from locent.graphs import from_edge_list, random_connected_graph
from locent.noise import NoiseLayer, apply_noise, lc_frame
from locent.pauli import PauliString

EDGE = from_edge_list(2, [(0, 1)])
CHAIN4 = from_edge_list(4, [(0, 1), (1, 2), (2, 3)])


def random_density(n, rng):
    m = rng.normal(size=(2**n, 2**n)) + 1j * rng.normal(size=(2**n, 2**n))
    rho = m @ m.conj().T
    return rho / np.trace(rho)


def test_edge_graph_state_is_maximal():
    rho = dense.to_density(dense.graph_state(EDGE))
    assert np.isclose(negativity(rho), 1) and np.isclose(log_negativity(rho), 1)


def test_product_state():
    rho = np.kron(np.diag([1, 0]), np.full((2, 2), 0.5))
    assert negativity(rho) == 0 and log_negativity(rho) == 0


def test_skewed_gd_pair():
    rho = dense.dense_gd_state(EDGE, np.array([0.7, 0.1, 0.1, 0.1]))
    assert np.isclose(log_negativity(rho, [0]), 0.4854268271702417)


def test_pt_eigenvalues_sorted_real():
    lam = pt_eigenvalues(dense.to_density(dense.graph_state(EDGE)), [0])
    assert np.allclose(lam, [-0.5, 0.5, 0.5, 0.5])


def test_measure_lookup():
    assert get_measure("negativity") is negativity
    assert get_measure(log_negativity) is log_negativity
    with pytest.raises(ValueError):
        get_measure("concurrence")


def test_bipartition_choice_on_ghz_like_region():
    # three-qubit chain: 1|23 and 3|12 are equivalent cuts
    rho = dense.to_density(dense.graph_state(from_edge_list(3, [(0, 1), (1, 2)])))
    assert np.isclose(log_negativity(rho, [0]), log_negativity(rho, [2]))


def test_witness_term_count():
    w = local_witness(CHAIN4, [1, 2])
    assert len(w.terms) == 4
    assert w.terms[0][1] == PauliString(4) and np.isclose(w.terms[0][0], 0.25)


def test_witness_on_pure_graph_state():
    for om in ([0, 1], [1, 2, 3]):
        w = local_witness(CHAIN4, om)
        assert np.isclose(w.expectation(dense.to_density(dense.graph_state(CHAIN4))), -0.5)
        assert np.isclose(witness_expectation(GDState.pure(CHAIN4), w), -0.5)


def test_witness_needs_connected_region():
    with pytest.raises(ValueError):
        local_witness(CHAIN4, [0, 2])


def test_witness_on_maximally_mixed():
    for size, om in ((2, [0, 1]), (3, [0, 1, 2])):
        w = local_witness(CHAIN4, om)
        assert np.isclose(w.expectation(np.eye(16) / 16), 0.5 - 2.0**-size)


def test_gd_witness_shortcut():
    p = np.zeros(4)
    p[[0, 1, 2, 3]] = (0.7, 0.1, 0.1, 0.1)
    st_ = GDState(EDGE, p)
    assert np.isclose(witness_expectation(st_, local_witness(EDGE, [0, 1])), -0.2)


@settings(max_examples=20)
@given(st.integers(0, 2**32 - 1))
def test_gd_shortcut_matches_pauli_sum(seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(5, rng)
    a, b = g.edges()[0]
    st_ = gd_from_pauli_noise(g, NoiseLayer.uniform(5, str(rng.choice(["BF", "PF", "DP", "BPF"])), float(rng.uniform())))
    w = local_witness(g, [a, b])
    assert np.isclose(witness_expectation(st_, w), w.expectation(st_.to_dense()), atol=1e-10)


@settings(max_examples=15)
@given(st.integers(0, 2**32 - 1))
def test_witness_moves_with_frame(seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(4, rng)
    i = int(rng.integers(4))
    gp, layer = lc_frame(g, [i])
    rho = random_density(4, rng)
    rho_p = dense.apply_clifford_layer(rho, layer)
    for om in ([0, 1], [1, 2], [0, 3]):
        if not gp.induced(om).is_connected():
            continue
        w_new = local_witness(gp, om)
        # witness pulled back to the original frame: U^-1 W' U
        pulled = dense.apply_clifford_layer(w_new.matrix(), layer, inverse=True)
        assert np.isclose(w_new.expectation(rho_p), np.trace(rho @ pulled).real, atol=1e-10)


def test_wlb_values():
    assert wlb(-0.5) == 1 and wlb(0.3) == 0 and np.isclose(wlb(-0.2), 0.4)
    assert np.isclose(wlb(-0.2, log=True), np.log2(1.4))


def test_certificate_extremes():
    c = wlb_certificate(-0.5)
    assert (c.f, c.h, c.bound) == (2.0, 1.0, 1.0)
    c = wlb_certificate(0.1)
    assert (c.f, c.h, c.bound) == (0.0, 1.0, 0.0)


def test_family_one_scan():
    hfun, (lo, hi) = WLB_FAMILIES[0][1], WLB_FAMILIES[0][2]
    fs = np.linspace(lo, hi, 2001)
    vals = [-f * -0.3 + hfun(f) - 1 for f in fs]
    assert fs[int(np.argmax(vals))] == 2.0


def test_singular_values():
    assert d_singular_values(2, 1, 2) == (1, 1)
    assert d_singular_values(2, 1, 3) == (1, 1, 0)
    cert = wlb_certificate(-0.3, 3)
    assert max(cert.singular_values) == 1


def test_certificate_argument_checks():
    with pytest.raises(ValueError):
        wlb_certificate(0.7)
    with pytest.raises(ValueError):
        wlb_certificate(0.0, region_size=4)


def test_report_json():
    data = json.loads(witness_report(-0.25))
    assert data["wlb"] == 0.5 and data["certificate"]["f"] == 2.0


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1))
def test_wlb_is_sound(seed):
    rng = np.random.default_rng(seed)
    rho = random_density(2, rng)
    # bias towards entangled states
    rho = 0.5 * rho + 0.5 * dense.to_density(dense.graph_state(EDGE)) * rng.uniform()
    rho /= np.trace(rho)
    omega = local_witness(EDGE, [0, 1]).expectation(rho)
    assert negativity(rho, [0]) >= wlb(omega) - 1e-10


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1))
def test_wlb_tight_when_identity_dominates(seed):
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.ones(4))
    p = np.sort(p)[::-1]
    p = np.concatenate([[p[0]], rng.permutation(p[1:])])
    st_ = GDState(EDGE, p)
    m = gd_marginal(st_, [0, 1])
    omega = witness_expectation(st_, local_witness(EDGE, [0, 1]))
    assert abs(gd_region_negativity(m) - wlb(omega)) < 1e-10


def test_region_witness_acts_on_region_only():
    w = region_witness(CHAIN4, [1, 2, 3])
    assert w.n == 3
    assert np.isclose(w.expectation(dense.to_density(dense.graph_state(CHAIN4.induced([1, 2, 3])))), -0.5)


def test_noisy_state_witness_range():
    rho = apply_noise(dense.to_density(dense.graph_state(CHAIN4)), NoiseLayer.uniform(4, "AD", 0.6))
    assert -0.5 <= local_witness(CHAIN4, [0, 1]).expectation(rho) <= 0.5
