"""The ten release criteria, each at its stated tolerance.

A one-line PASS/FAIL summary per criterion is printed at the end of the
pytest session (see ``conftest.py``).
"""

import itertools
import time

import numpy as np
import pytest

from locent import dense, entanglement, gd, localizable, noise
from locent.analytic import (
    NeighborhoodCounts,
    critical_noise,
    critical_noise_numeric,
    e0_from_counts,
    e0_pair_curve_value,
    linear_chain_e0,
    linear_graph_params,
    mixing_probabilities,
    realizing_graph,
)
from locent.cli import main as cli_main
from locent.graphs import all_connected_graphs, linear_chain, random_connected_graph
from locent.pauli import PAULI

from .conftest import record

PAULI_KINDS = ("BF", "BPF", "PF", "DP")
ALL_KINDS = PAULI_KINDS + ("AD",)


def trace_distance(a, b):
    return 0.5 * np.abs(np.linalg.eigvalsh(dense.hermitize(a - b))).sum()


def csv_rows(argv, capsys):
    import csv
    import io

    assert cli_main(argv) == 0
    return list(csv.DictReader(io.StringIO(capsys.readouterr().out)))


def test_1_critical_noise():
    t0 = time.perf_counter()
    worst = max(abs(critical_noise_numeric(NeighborhoodCounts.symmetric(n)) - (1 - 3 ** (-1 / (2 * n))))
                for n in range(1, 21))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-6 and abs(critical_noise(1) - 0.422650) < 1e-6 and elapsed < 1.0
    record(1, ok, f"critical noise: bisection vs closed form max diff {worst:.1e}, q_c(1)={critical_noise(1):.7f}, {elapsed:.2f}s")
    assert ok


def test_2_analytic_vs_dense():
    t0 = time.perf_counter()
    worst = 0.0
    for n in (1, 2):
        c = NeighborhoodCounts.symmetric(n)
        g, a, b = realizing_graph(c)
        assert g.n <= 8
        pure = dense.to_density(dense.graph_state(g))
        for kind in PAULI_KINDS:
            for q in np.round(np.arange(0, 1.0, 0.1), 10):
                ch = noise.make_channel(kind, q)
                rho = noise.apply_noise(pure, noise.NoiseLayer.uniform(g.n, kind, q))
                ref = localizable.mlb_zbasis(rho, (a, b))
                worst = max(worst, abs(e0_from_counts(c, ch.flip_probability, ch, ch) - ref))
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-10 and elapsed < 30
    record(2, ok, f"analytic vs dense E0: max diff {worst:.1e} over 80 cases, {elapsed:.1f}s")
    assert ok


def _connected_region(rng, g, size):
    while True:
        om = tuple(sorted(rng.choice(g.n, size=size, replace=False).tolist()))
        if g.induced(om).is_connected():
            return om


def test_3_hierarchy_suite():
    # negativity: log-negativity is not convex, see test_localizable
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    cfg = localizable.OptimizerConfig(restarts=1, max_iter=100, seed=0)
    failures, cases = [], 0
    for _ in range(50):
        n = int(rng.integers(3, 7))
        g = random_connected_graph(n, rng)
        om = _connected_region(rng, g, int(rng.integers(2, min(3, n - 1) + 1)))
        pure = dense.to_density(dense.graph_state(g))
        for kind in ALL_KINDS:
            for q in (0.0, 0.2, 0.5, 0.8):
                rho = noise.apply_noise(pure, noise.NoiseLayer.uniform(n, kind, q))
                rep = localizable.hierarchy_report(rho, g, om, measure="negativity", full=cfg)
                cases += 1
                chain = (rep.e_pauli >= rep.e_zero - 1e-9 and rep.e_zero >= rep.e_reduced - 1e-9
                         and rep.e_reduced >= rep.e_wlb - 1e-9 and rep.e_full >= rep.e_pauli - 1e-4)
                if not chain:
                    failures.append((g.edges(), om, kind, q))
    elapsed = time.perf_counter() - t0
    ok = not failures and elapsed < 300
    record(3, ok, f"hierarchy chain (negativity): {cases - len(failures)}/{cases} cases hold, {elapsed:.0f}s")
    assert ok, failures[:3]


def _gd_equalities():
    rng = np.random.default_rng(7)
    worst5 = worst6 = 0.0
    tested6 = 0
    for _ in range(60):
        n = int(rng.integers(3, 7))
        g = random_connected_graph(n, rng)
        a, b = g.edges()[int(rng.integers(len(g.edges())))]
        layer = noise.NoiseLayer(tuple(noise.make_channel(str(rng.choice(PAULI_KINDS)), float(rng.uniform())) for _ in range(n)))
        st = gd.gd_from_pauli_noise(g, layer)
        e0 = localizable.mlb_zbasis(st.to_dense(), (a, b))
        m = gd.gd_marginal(st, (a, b))
        worst5 = max(worst5, abs(e0 - gd.gd_region_log_negativity(m)))
        if m.p[0] >= m.p.max():
            tested6 += 1
            w = entanglement.witness_expectation(st, entanglement.local_witness(g, (a, b)))
            worst6 = max(worst6, abs(e0 - entanglement.wlb(w, log=True)))
    return worst5, worst6, tested6


def test_4_gd_equalities_and_fig3a(capsys):
    worst5, worst6, tested6 = _gd_equalities()
    rows = csv_rows(["bounds", "--preset", "fig3a"], capsys)
    fig3a = all(r["E0"] == r["E_wlb"] for r in rows)
    ok = worst5 < 1e-9 and worst6 < 1e-9 and tested6 > 0 and fig3a
    record("4a", ok, f"E0 = E(rho_GD) max diff {worst5:.1e}; E0 = E^W max diff {worst6:.1e} ({tested6} cases); fig3a E0 == E_wlb on {len(rows)} q values: {fig3a}")
    assert ok


def test_4_fig3b_gap_where_entangled(capsys):
    rows = csv_rows(["bounds", "--preset", "fig3b"], capsys)
    pos = [r for r in rows[1:] if float(r["E0"]) > 0]
    gap = all(float(r["E0"]) > float(r["E_wlb"]) for r in pos)
    zero = all(float(r["E0"]) == float(r["E_wlb"]) == 0 for r in rows[1:] if float(r["E0"]) == 0)
    ok = gap and zero and len(pos) > 0
    record("4b", ok, f"fig3b E0 > E_wlb at all {len(pos)} q > 0 with E0 > 0; both exactly 0 elsewhere")
    assert ok


@pytest.mark.xfail(strict=True, reason="E0 and E_wlb are both exactly 0 for q >= ~0.59, so a strict gap cannot hold there")
def test_4_fig3b_strict_gap_every_q(capsys):
    rows = csv_rows(["bounds", "--preset", "fig3b"], capsys)
    bad = [r["q"] for r in rows[1:] if not float(r["E0"]) > float(r["E_wlb"])]
    record("4c", not bad, f"fig3b literal 'E0 > E_wlb for all q > 0': fails at q = {', '.join(bad)} where E0 = E_wlb = 0")
    assert not bad


def _flip_oracle(sizes, pars, s):
    """Enumerate all flip patterns at once; returns weights of II, IZ, ZI, ZZ."""
    total = sum(sizes)
    pats = (np.arange(1 << total)[:, None] >> np.arange(total)[None, :]) & 1
    w = np.prod(np.where(pats == 1, s, 1 - s), axis=1)
    base = np.concatenate([[1] * p + [0] * (k - p) for k, p in zip(sizes, pars)]).astype(int) if total else np.zeros(0, int)
    ones = pats ^ base
    cuts = np.cumsum([0, *sizes])
    par = [ones[:, cuts[i]:cuts[i + 1]].sum(axis=1) % 2 for i in range(3)]
    za, zb = (par[0] + par[1]) % 2, (par[1] + par[2]) % 2
    return np.bincount(2 * za + zb, weights=w, minlength=4)


def test_5_mixing_oracle():
    t0 = time.perf_counter()
    worst = 0.0
    for sizes in itertools.product(range(7), repeat=3):
        for par_bit in (0, 1):
            pars = tuple(par_bit if k else 0 for k in sizes)
            if par_bit and not any(sizes):
                continue
            c = NeighborhoodCounts(*sizes, *pars)
            for s in (0.0, 0.1, 0.25, 0.5):
                got = mixing_probabilities(c, s).as_array()
                worst = max(worst, np.abs(got - _flip_oracle(sizes, pars, s)).max())
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-12 and elapsed < 10
    record(5, ok, f"mixing probabilities vs exhaustive enumeration: max diff {worst:.1e}, {elapsed:.1f}s")
    assert ok


def test_6_appendix_tables():
    mismatches = 0
    for n_l in range(1, 9):
        table = noise.linear_chain_table(n_l)
        for key, u in noise.linear_chain_unitaries(n_l).items():
            for letter in "XYZ":
                s, img = table[key][letter]
                if not np.allclose(u @ PAULI[letter] @ u.conj().T, s * PAULI[img], atol=1e-12):
                    mismatches += 1
    fid = 1.0
    for n_l in range(1, 5):
        for bulk in (False, True):
            g, a, b = linear_chain(n_l, bulk=bulk)
            gp = noise.lc_frame(g, list(range(a + 1, b)))[0]
            out = dense.apply_clifford_layer(dense.graph_state(g), noise.linear_chain_frame(n_l).layer(bulk))
            fid = min(fid, dense.fidelity(out, dense.graph_state(gp)))
    ok = mismatches == 0 and fid >= 1 - 1e-10
    record(6, ok, f"chain conjugation tables: {mismatches} mismatches for n_L=1..8; frame fidelity min {fid:.12f}")
    assert ok


def test_7_linear_chain():
    spread = max(np.ptp([linear_chain_e0(n_l, "BF", q) for n_l in range(3, 11)]) for q in np.linspace(0, 1, 21))
    rule = lambda n_l: (0, (n_l + 1) // 2, (n_l - 1) // 2) if n_l % 2 else (0, n_l // 2, n_l // 2)
    wrong = [n_l for n_l in range(1, 13) if linear_graph_params(n_l, "PF", 0.3).counts.as_tuple() != rule(n_l)]
    ok = spread < 1e-12 and not wrong
    record(7, ok, f"BF chain E0 spread across n_L=3..10: {spread:.1e}; PF parity rule violations: {wrong or 'none'}")
    assert ok


def test_8_wlb_certificate():
    worst = 0.0
    for omega in np.linspace(-0.5, 0.5, 1001):
        for size in (2, 3):
            worst = max(worst, abs(entanglement.wlb_certificate(omega, size).bound - max(-2 * omega, 0.0)))
    ok = worst < 1e-9
    record(8, ok, f"witness certificate vs max(-2w, 0) on 1001 points: max diff {worst:.1e}")
    assert ok


def test_9_channel_pair_groups():
    groups = (("01", "02", "03", "10", "20", "30"), ("11", "12", "21", "23", "32", "33"), ("13", "22", "31"))
    c = NeighborhoodCounts.symmetric(1)
    worst = 0.0
    for grp in groups:
        for q in np.linspace(0, 1, 101):
            worst = max(worst, np.ptp([e0_pair_curve_value(c, p, q) for p in grp]))
    ok = worst < 1e-12
    record(9, ok, f"channel-pair groups at n=1: max in-group spread {worst:.1e}")
    assert ok


def test_10_gd_fast_path():
    t0 = time.perf_counter()
    worst, count = 0.0, 0
    for n in range(2, 6):
        for g in all_connected_graphs(n):
            pure = dense.to_density(dense.graph_state(g))
            for kind in PAULI_KINDS:
                for q in (0.3, 0.7):
                    layer = noise.NoiseLayer.uniform(n, kind, q)
                    ref = noise.apply_noise(pure, layer)
                    worst = max(worst, trace_distance(ref, gd.gd_from_pauli_noise(g, layer).to_dense()))
                    count += 1
    ok = worst < 1e-10
    record(10, ok, f"GD vs dense: max trace distance {worst:.1e} over {count} cases, {time.perf_counter() - t0:.1f}s")
    assert ok
