import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from locent import dense
from locent.graphs import from_edge_list, linear_chain, random_connected_graph
from locent.noise import (
    KRAUS_KINDS,
    NoiseLayer,
    apply_noise,
    conjugate_channel,
    kraus_channel,
    lc_frame,
    linear_chain_frame,
    linear_chain_table,
    linear_chain_unitaries,
    load_noise,
    make_channel,
    noise_layer_from_obj,
    pauli_channel,
    recognize,
)
from locent.pauli import PAULI, SingleQubitClifford, all_single_qubit_cliffords

KINDS = ("BF", "BPF", "PF", "DP", "AD")
PAULI_KINDS = ("BF", "BPF", "PF", "DP")


def random_qubit_state(rng):
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def test_bit_flip_probabilities():
    ch = make_channel("BF", 0.4)
    assert np.allclose(ch.probs, (0.8, 0.2, 0, 0))
    assert np.isclose(ch.flip_probability, 0.2)


def test_depolarizing_at_one():
    assert np.allclose(make_channel("DP", 1.0).probs, (0.25,) * 4)


@pytest.mark.parametrize("kind", KINDS)
def test_zero_strength_is_identity(kind):
    assert make_channel(kind, 0.0).is_identity


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("q", [0.0, 0.3, 1.0])
def test_kraus_completeness(kind, q):
    ch = make_channel(kind, q)
    total = sum(k.conj().T @ k for k in ch.kraus)
    assert np.allclose(total, np.eye(2), atol=1e-12)


def test_unknown_kind_and_bad_strength():
    with pytest.raises(ValueError):
        make_channel("XX", 0.1)
    with pytest.raises(ValueError):
        make_channel("BF", 1.5)
    with pytest.raises(ValueError):
        pauli_channel((0.5, 0.6, 0, 0))
    with pytest.raises(ValueError):
        kraus_channel([np.eye(2) * 0.5])


def test_flip_probability_needs_pauli():
    with pytest.raises(ValueError):
        make_channel("AD", 0.2).flip_probability


def test_amplitude_damping_full_strength():
    rng = np.random.default_rng(0)
    ch = make_channel("AD", 1.0)
    for _ in range(5):
        assert np.allclose(ch.apply(random_qubit_state(rng), 0), np.diag([1, 0]))


def test_phase_flip_full_dephasing_of_plus():
    plus = np.full((2, 2), 0.5, dtype=complex)
    assert np.allclose(make_channel("PF", 1.0).apply(plus, 0), np.eye(2) / 2)


def test_identity_layer_leaves_state():
    rho = dense.to_density(dense.graph_state(from_edge_list(3, [(0, 1), (1, 2)])))
    assert np.allclose(apply_noise(rho, NoiseLayer.identity(3)), rho)


def test_layer_length_checked():
    rho = np.eye(4) / 4
    with pytest.raises(ValueError):
        apply_noise(rho, NoiseLayer.identity(3))


def test_recognize_standard_channels():
    assert recognize((0.85, 0, 0.15, 0)).label() == "BPF(0.3)"
    assert recognize((0.7, 0.1, 0.1, 0.1)).kind == "DP"
    assert recognize((0.7, 0.2, 0.1, 0.0)).kind == "CustomPauli"


def _dense_conjugate(ch, c):
    u = c.matrix()
    return [u @ k @ u.conj().T for k in ch.kraus]


def _choi(kraus):
    # channel fingerprint independent of Kraus gauge
    return sum(np.kron(k, k.conj()) for k in kraus)


@pytest.mark.parametrize("kind", PAULI_KINDS)
@pytest.mark.parametrize("q", [0.1, 0.5, 1.0])
def test_conjugation_all_cliffords(kind, q):
    ch = make_channel(kind, q)
    for c in all_single_qubit_cliffords():
        got = conjugate_channel(ch, c)
        assert got.is_pauli
        assert np.allclose(_choi(got.kraus), _choi(_dense_conjugate(ch, c)), atol=1e-12)


def test_phase_flip_to_y_flip():
    # Clifford sending Z to Y (sign irrelevant at channel level)
    c = SingleQubitClifford((1, "X"), (-1, "Y"))
    got = conjugate_channel(make_channel("PF", 0.4), c)
    assert np.allclose(got.probs, (0.8, 0, 0.2, 0))


def test_conjugation_sign_is_irrelevant():
    plus = SingleQubitClifford((1, "X"), (1, "Y"))
    minus = SingleQubitClifford((1, "X"), (-1, "Y"))
    rng = np.random.default_rng(5)
    ch = make_channel("DP", 0.6)
    for _ in range(3):
        rho = random_qubit_state(rng)
        a = conjugate_channel(ch, plus).apply(rho, 0)
        b = conjugate_channel(ch, minus).apply(rho, 0)
        assert np.allclose(a, b)


def test_conjugation_by_identity():
    ch = make_channel("AD", 0.3)
    assert conjugate_channel(ch, SingleQubitClifford()) is ch


def test_amplitude_damping_conjugation_is_kraus():
    c = SingleQubitClifford((1, "Z"), (1, "X"))
    got = conjugate_channel(make_channel("AD", 0.3), c)
    assert got.kind == "CustomKraus" and not got.is_pauli
    assert np.allclose(_choi(got.kraus), _choi(_dense_conjugate(make_channel("AD", 0.3), c)))
    assert "CustomKraus" in KRAUS_KINDS


@settings(max_examples=25)
@given(st.integers(0, 2**32 - 1))
def test_pauli_noise_keeps_graph_diagonal(seed):
    rng = np.random.default_rng(seed)
    g = random_connected_graph(int(rng.integers(2, 6)), rng)
    layer = NoiseLayer(tuple(make_channel(str(rng.choice(PAULI_KINDS)), float(rng.uniform())) for _ in range(g.n)))
    rho = apply_noise(dense.to_density(dense.graph_state(g)), layer)
    b = dense.graph_basis(g)
    in_basis = b.conj().T @ rho @ b
    assert np.allclose(in_basis, np.diag(np.diag(in_basis)), atol=1e-10)


@pytest.mark.parametrize("n_l", range(1, 9))
def test_chain_table_matches_matrices(n_l):
    table = linear_chain_table(n_l)
    for key, u in linear_chain_unitaries(n_l).items():
        for letter in "XYZ":
            s, img = table[key][letter]
            assert np.allclose(u @ PAULI[letter] @ u.conj().T, s * PAULI[img], atol=1e-12)


def test_chain_table_spot_values():
    # b: X -> -Y, Z -> Z; a with even n_L: X -> (-1)^m X
    for n_l in (2, 4, 6):
        t = linear_chain_table(n_l)
        assert t["b"]["X"] == (-1, "Y") and t["b"]["Z"] == (1, "Z")
        assert t["a"]["X"] == ((-1) ** (n_l // 2), "X")


@pytest.mark.parametrize("n_l", range(1, 5))
@pytest.mark.parametrize("bulk", [False, True])
def test_chain_frame_maps_states(n_l, bulk):
    g, a, b = linear_chain(n_l, bulk=bulk)
    gp, _ = lc_frame(g, list(range(a + 1, b)))
    assert gp.has_edge(a, b)
    out = dense.apply_clifford_layer(dense.graph_state(g), linear_chain_frame(n_l).layer(bulk))
    assert dense.fidelity(out, dense.graph_state(gp)) > 1 - 1e-10


@pytest.mark.parametrize("n_l", range(1, 9))
def test_lc_frame_agrees_with_chain_frame(n_l):
    g, a, b = linear_chain(n_l)
    _, layer = lc_frame(g, list(range(a + 1, b)))
    assert layer == linear_chain_frame(n_l).layer()


def test_phase_flip_labels_on_chain():
    # each interior label is the image of Z under that qubit's frame unitary
    g, a, b = linear_chain(5, bulk=True)
    _, layer = lc_frame(g, list(range(a + 1, b)))
    u = linear_chain_unitaries(5)
    for j in range(1, 6):
        ch = conjugate_channel(make_channel("PF", 0.3), layer[a + j])
        w = u[j] @ PAULI["Z"] @ u[j].conj().T
        expect = next(L for L in "XYZ" if np.isclose(abs(np.trace(w @ PAULI[L])), 2))
        assert ch.dominant_letter == expect


def test_noise_spec_overrides(tmp_path):
    spec = {"default": {"kind": "BF", "q": 0.2}, "overrides": {"2": {"kind": "AD", "q": 0.5}}}
    layer = noise_layer_from_obj(spec, 3)
    assert [ch.kind for ch in layer.channels] == ["BF", "AD", "BF"]
    swept = noise_layer_from_obj(spec, 3, q=0.7)
    assert swept[0].q == 0.7 and swept[1].q == 0.7
    path = tmp_path / "noise.json"
    path.write_text(json.dumps(spec))
    assert load_noise(path, 3)[1].q == 0.5
    with pytest.raises(ValueError):
        noise_layer_from_obj({"overrides": {"4": {"kind": "BF"}}}, 3)


def test_custom_pauli_entry():
    layer = noise_layer_from_obj({"default": {"kind": "CustomPauli", "probs": [0.7, 0.1, 0.1, 0.1]}}, 2, q=0.3)
    assert np.allclose(layer[0].probs, (0.7, 0.1, 0.1, 0.1))
