"""Localizable entanglement and the measurement-based bounds below it.

All quantities average an entanglement measure of the region's
post-measurement states over the outcomes of a product measurement on the
rest of the system:

* ``avg_entanglement_fixed_setting``: one given setting.
* ``restricted_le``: best Pauli setting (3**m of them).
* ``le_optimize``: best-found rank-1 product setting (continuous angles).
* ``mlb_zbasis``: the all-Z setting.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from . import dense
from .entanglement import get_measure, local_witness, witness_expectation, wlb
from .gd import GDState, gd_marginal, gd_region_log_negativity, gd_region_negativity
from .graphs import Graph, as_region, complement
from .pauli import SingleQubitClifford

MAX_PAULI_MEASURED = 12
MAX_OPT_MEASURED = 6
TOL = 1e-9
TOL_FULL = 1e-4


def _local_part(omega: tuple[int, ...], part_a) -> list[int]:
    if part_a is None:
        return [0]
    pos = [omega.index(v) for v in part_a]
    if not pos or len(pos) >= len(omega):
        raise ValueError(f"bipartition {part_a} is not proper within region {omega}")
    return pos


def _batch_measure(states: np.ndarray, probs: np.ndarray, part: list[int], measure) -> float:
    ok = probs > dense.PROB_FLOOR
    if not ok.any():
        return 0.0
    states, probs = states[ok], probs[ok]
    if measure in ("log_negativity", "negativity"):
        k, d = states.shape[0], states.shape[1]
        n = dense.n_qubits(states[0])
        perm = list(range(2 * n))
        for q in part:
            perm[q], perm[n + q] = perm[n + q], perm[q]
        t = states.reshape((k,) + (2,) * (2 * n)).transpose([0] + [p + 1 for p in perm]).reshape(k, d, d)
        t = (t + t.conj().transpose(0, 2, 1)) / 2
        lam = np.linalg.eigvalsh(t)
        lam[np.abs(lam) < dense.EIG_FLOOR] = 0.0
        neg = 2 * -np.where(lam < 0, lam, 0.0).sum(axis=1)
        vals = np.log2(neg + 1) if measure == "log_negativity" else neg
    else:
        f = get_measure(measure)
        vals = np.array([f(s, part) for s in states])
    return float(np.dot(probs, vals) / probs.sum())


def avg_entanglement_fixed_setting(
    rho: np.ndarray,
    omega: Sequence[int],
    setting: dense.MeasurementSetting,
    measure="log_negativity",
    part_a: Sequence[int] | None = None,
) -> float:
    """Outcome-averaged entanglement of the region for one measurement setting.

    ``part_a`` holds the region members on the transposed side of the
    bipartition (default: the first member).
    """
    n = dense.n_qubits(rho)
    om = as_region(omega, n, min_size=2)
    rest = complement(om, n)
    if setting.m != len(rest):
        raise ValueError(f"setting covers {setting.m} qubits but {len(rest)} are measured")
    p, states = dense.measurement_ensemble(rho, rest, setting)
    return _batch_measure(states, p, _local_part(om, part_a), measure)


def restricted_le(
    rho: np.ndarray, omega: Sequence[int], measure="log_negativity", part_a: Sequence[int] | None = None
) -> tuple[float, dense.MeasurementSetting]:
    """Best Pauli-setting average; ties go to the smallest setting index."""
    n = dense.n_qubits(rho)
    m = n - len(as_region(omega, n, min_size=2))
    if m > MAX_PAULI_MEASURED:
        raise dense.CapExceeded(f"{m} measured qubits exceeds the enumeration guard of {MAX_PAULI_MEASURED}")
    best, arg = -np.inf, None
    for l in range(3**m):
        s = dense.MeasurementSetting.pauli(l, m)
        v = avg_entanglement_fixed_setting(rho, omega, s, measure, part_a)
        if v > best + 1e-12:
            best, arg = v, s
    return best, arg


@dataclass(frozen=True)
class OptimizerConfig:
    """Multistart Nelder-Mead over the measurement angles.

    Starting points are the best Pauli setting plus ``restarts - 1`` random
    points on a lattice of spacing pi/``grid`` in both angles.
    """

    restarts: int = 20
    grid: int = 4
    tol: float = 1e-6
    max_iter: int = 2000
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.tol <= 0:
            raise ValueError("tolerance must be positive")
        if self.grid < 1:
            raise ValueError("grid density must be positive")


@dataclass(frozen=True)
class OptimizerResult:
    value: float
    angles: tuple[tuple[float, float], ...]
    pauli_value: float
    evaluations: int
    improved_over_pauli: bool


def le_optimize(
    rho: np.ndarray,
    omega: Sequence[int],
    measure="log_negativity",
    cfg: OptimizerConfig = OptimizerConfig(),
    part_a: Sequence[int] | None = None,
) -> OptimizerResult:
    """Best-found average entanglement over all rank-1 product measurements.

    Never below the Pauli optimum, since the Pauli argmax is one of the
    starting points and the returned value is the best evaluation seen.
    """
    n = dense.n_qubits(rho)
    om = as_region(omega, n, min_size=2)
    m = n - len(om)
    if m > MAX_OPT_MEASURED:
        raise dense.CapExceeded(f"{m} measured qubits exceeds the optimizer guard of {MAX_OPT_MEASURED}")
    pauli_val, pauli_set = restricted_le(rho, om, measure, part_a)
    if m == 0:
        return OptimizerResult(pauli_val, (), pauli_val, 1, False)

    evals = 0
    best = [pauli_val, np.array([a for pair in pauli_set.angles for a in pair])]

    def objective(x):
        nonlocal evals
        evals += 1
        v = avg_entanglement_fixed_setting(rho, om, dense.MeasurementSetting.from_angles(x), measure, part_a)
        if v > best[0]:
            best[0], best[1] = v, np.array(x, dtype=float)
        return -v

    rng = np.random.default_rng(cfg.seed)
    step = np.pi / cfg.grid
    starts = [best[1].copy()]
    for _ in range(cfg.restarts - 1):
        theta = rng.integers(0, cfg.grid + 1, size=m) * step
        phi = rng.integers(0, 2 * cfg.grid, size=m) * step
        starts.append(np.column_stack([theta, phi]).reshape(-1))
    for x0 in starts:
        minimize(objective, x0, method="Nelder-Mead",
                 options={"xatol": cfg.tol, "fatol": cfg.tol, "maxiter": cfg.max_iter})
    x = best[1]
    angles = tuple((float(x[2 * k] % (2 * np.pi)), float(x[2 * k + 1] % (2 * np.pi))) for k in range(m))
    return OptimizerResult(float(best[0]), angles, pauli_val, evals, best[0] > pauli_val + 1e-9)


def mlb_zbasis(
    state, omega: Sequence[int], measure="log_negativity", part_a: Sequence[int] | None = None
) -> float:
    """All-Z average.  For a GD state this is the entanglement of its region marginal."""
    if isinstance(state, GDState):
        om = as_region(omega, state.n, min_size=2)
        m = gd_marginal(state, om)
        if measure == "log_negativity":
            return gd_region_log_negativity(m, part_a)
        if measure == "negativity":
            return gd_region_negativity(m, part_a)
        raise ValueError("GD shortcut supports negativity and log-negativity only")
    n = dense.n_qubits(state)
    m = n - len(as_region(omega, n, min_size=2))
    return avg_entanglement_fixed_setting(state, omega, dense.MeasurementSetting.pauli(0, m), measure, part_a)


def measure_bound(value: float, measure) -> float:
    """Express a negativity bound in the chosen measure."""
    if measure == "log_negativity":
        return float(np.log2(value + 1))
    if measure == "negativity":
        return value
    raise ValueError("witness bound is defined for negativity and log-negativity only")


# --- hierarchy ---------------------------------------------------------------


@dataclass(frozen=True)
class Frame:
    """Local Clifford layer relating the input graph to one where the region is connected."""

    graph: Graph
    layer: tuple[SingleQubitClifford, ...]
    sequence: tuple[int, ...] = ()

    @classmethod
    def from_sequence(cls, g: Graph, seq: Sequence[int]) -> "Frame":
        from .noise import lc_frame

        gp, layer = lc_frame(g, seq)
        return cls(gp, tuple(layer), tuple(seq))

    @classmethod
    def connect(cls, g: Graph, omega: Sequence[int]) -> "Frame":
        from .graphs import connect_region

        _, seq = connect_region(g, omega)
        return cls.from_sequence(g, seq)


def translated_setting(frame: Frame | None, measured: Sequence[int]) -> dense.MeasurementSetting:
    """Original-frame Pauli setting equivalent to measuring Z in the new frame."""
    axes = []
    for r in measured:
        c = frame.layer[r] if frame is not None else None
        letter = "Z" if c is None else c.inverse().conjugate("Z")[1]
        axes.append("ZXY".index(letter))
    return dense.MeasurementSetting.pauli(axes)


@dataclass
class BoundsReport:
    e_full: float | None
    e_pauli: float
    pauli_setting: str
    pauli_index: int
    e_l: float
    l_index: int
    l_setting: str
    e_zero: float
    e_reduced: float
    e_wlb: float
    omega: float
    measure: str
    optimizer: dict | None = None
    flags: dict = field(default_factory=dict)

    def check(self, tol: float = TOL, tol_full: float = TOL_FULL) -> dict:
        f = {
            "pauli_ge_l": self.e_pauli >= self.e_l - tol,
            "pauli_ge_zero": self.e_pauli >= self.e_zero - tol,
            "zero_ge_reduced": self.e_zero >= self.e_reduced - tol,
            "reduced_ge_wlb": self.e_reduced >= self.e_wlb - tol,
        }
        if self.e_full is not None:
            f["full_ge_pauli"] = self.e_full >= self.e_pauli - tol_full
        self.flags = f
        return f

    @property
    def ok(self) -> bool:
        return all(self.flags.values())

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


def hierarchy_report(
    rho: np.ndarray,
    g: Graph,
    omega: Sequence[int],
    frame: Frame | None = None,
    measure: str = "log_negativity",
    part_a: Sequence[int] | None = None,
    l: int | None = None,
    full: OptimizerConfig | None = None,
) -> BoundsReport:
    """All five quantities of the lower-bound chain for one state.

    Z-measurement and witness quantities are evaluated in ``frame`` (the
    graph in which the region is connected); Pauli and continuous optima are
    frame-independent and computed on ``rho`` itself.  ``l`` defaults to the
    original-frame setting equivalent to all-Z in the new frame.
    """
    n = g.n
    om = as_region(omega, n, min_size=2)
    if frame is None:
        if not g.induced(om).is_connected():
            raise ValueError(f"region {om} is disconnected; supply a frame from connect_region")
        gp, rho_p = g, rho
    else:
        gp = frame.graph
        if not gp.induced(om).is_connected():
            raise ValueError("frame does not connect the region")
        rho_p = dense.apply_clifford_layer(rho, list(frame.layer))
    rest = complement(om, n)
    part = _local_part(om, part_a)

    e_pauli, pset = restricted_le(rho, om, measure, part_a)
    lset = translated_setting(frame, rest) if l is None else dense.MeasurementSetting.pauli(l, len(rest))
    e_l = avg_entanglement_fixed_setting(rho, om, lset, measure, part_a)
    e_zero = mlb_zbasis(rho_p, om, measure, part_a)
    reduced = dense.reduced_region_state(rho_p, gp, om)
    e_reduced = float(get_measure(measure)(reduced, part))
    w = witness_expectation(rho_p, local_witness(gp, om))
    e_wlb = measure_bound(wlb(w), measure)

    e_full, meta = None, None
    if full is not None:
        res = le_optimize(rho, om, measure, full, part_a)
        e_full = res.value
        meta = {"angles": res.angles, "evaluations": res.evaluations,
                "improved_over_pauli": res.improved_over_pauli, "note": "best-found, lower bound by construction"}
    rep = BoundsReport(e_full, e_pauli, pset.label(), pset.index, e_l, lset.index, lset.label(),
                       e_zero, e_reduced, e_wlb, w, measure if isinstance(measure, str) else "custom", meta)
    rep.check()
    return rep
