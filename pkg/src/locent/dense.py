"""Exact state-vector and density-matrix routines for graph states.

Computational-basis index convention: qubit 0 is the most significant bit.
A state of ``n`` qubits is handled internally as a tensor with one length-2
axis per qubit (density matrices: ``n`` ket axes followed by ``n`` bra axes),
so that axis ``j`` is qubit ``j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graphs import Graph, adjacency_blocks, as_region, bits, complement
from .pauli import PauliString, SingleQubitClifford

MAX_DENSITY_QUBITS = 12
MAX_PURE_QUBITS = 20
PROB_FLOOR = 1e-12
EIG_FLOOR = 1e-12


class CapExceeded(ValueError):
    """Raised when a dense computation would exceed the configured size cap."""


def _check_pure(n: int):
    if n > MAX_PURE_QUBITS:
        raise CapExceeded(f"{n} qubits exceeds the pure-state cap of {MAX_PURE_QUBITS}")


def _check_density(n: int):
    if n > MAX_DENSITY_QUBITS:
        raise CapExceeded(f"{n} qubits exceeds the density-matrix cap of {MAX_DENSITY_QUBITS}")


def n_qubits(a: np.ndarray) -> int:
    d = a.shape[0]
    n = d.bit_length() - 1
    if 1 << n != d:
        raise ValueError(f"dimension {d} is not a power of two")
    return n


def basis_bits(n: int) -> np.ndarray:
    """``(2**n, n)`` array; row ``x`` holds the bits of ``x``, qubit 0 first."""
    idx = np.arange(1 << n)
    return (idx[:, None] >> np.arange(n - 1, -1, -1)) & 1


def index_to_mask(index: int, n: int) -> int:
    """Basis index (qubit 0 = MSB) to node-set mask (bit j = qubit j)."""
    return sum(1 << j for j in range(n) if index >> (n - 1 - j) & 1)


def mask_to_index(mask: int, n: int) -> int:
    return sum(1 << (n - 1 - j) for j in range(n) if mask >> j & 1)


def cz_phases(n: int, edges) -> np.ndarray:
    """Diagonal of the product of controlled-Z gates on ``edges``."""
    b = basis_bits(n)
    parity = np.zeros(1 << n, dtype=np.int64)
    for i, j in edges:
        parity ^= b[:, i] & b[:, j]
    return 1.0 - 2.0 * parity


def graph_state(g: Graph) -> np.ndarray:
    _check_pure(g.n)
    return cz_phases(g.n, g.edges()).astype(complex) / np.sqrt(1 << g.n)


def generator(g: Graph, i: int) -> PauliString:
    """Stabilizer generator: X on ``i`` and Z on each neighbour."""
    return PauliString(g.n, xmask=1 << i, zmask=g.adj[g._check(i)])


def z_pattern(n: int, nu: int) -> PauliString:
    """Z_nu for a basis index ``nu`` (qubit 0 = most significant bit)."""
    if not 0 <= nu < 1 << n:
        raise ValueError(f"pattern {nu} out of range for {n} qubits")
    return PauliString(n, zmask=index_to_mask(nu, n))


def graph_basis_state(g: Graph, nu: int) -> np.ndarray:
    """Z_nu |G>, the eigenstate with g_i eigenvalue (-1)**nu_i."""
    return z_pattern(g.n, nu).apply(graph_state(g))


def graph_basis(g: Graph) -> np.ndarray:
    """Matrix whose column ``nu`` is ``graph_basis_state(g, nu)``."""
    _check_density(g.n)
    b = basis_bits(g.n)
    signs = 1.0 - 2.0 * ((b @ b.T) & 1)
    return graph_state(g)[:, None] * signs


def to_density(psi: np.ndarray) -> np.ndarray:
    _check_density(n_qubits(psi))
    return np.outer(psi, psi.conj())


def fidelity(psi: np.ndarray, phi: np.ndarray) -> float:
    return float(abs(np.vdot(psi, phi)) ** 2)


def is_density(rho: np.ndarray, tol: float = 1e-10) -> bool:
    if not np.allclose(rho, rho.conj().T, atol=tol):
        return False
    if abs(np.trace(rho) - 1) > tol:
        return False
    return bool(np.linalg.eigvalsh(hermitize(rho)).min() >= -tol)


def hermitize(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2


def apply_pauli(state: np.ndarray, p: PauliString) -> np.ndarray:
    """P|psi> for vectors, P rho P^dagger for density matrices."""
    if state.ndim == 1:
        return p.apply(state)
    d = state.shape[0]
    t = p.apply(state.reshape((2,) * p.n + (d,))).reshape(d, d)
    t = p.apply(t.conj().T.reshape((2,) * p.n + (d,))).reshape(d, d)
    return t.conj().T


def _apply_1q_tensor(t: np.ndarray, u: np.ndarray, axis: int) -> np.ndarray:
    return np.moveaxis(np.tensordot(u, t, axes=([1], [axis])), 0, axis)


def apply_1q(state: np.ndarray, u: np.ndarray, qubit: int) -> np.ndarray:
    """Apply a 2x2 operator to one qubit (``u rho u^dagger`` for matrices)."""
    n = n_qubits(state)
    if not 0 <= qubit < n:
        raise ValueError(f"qubit {qubit} out of range for {n} qubits")
    if state.ndim == 1:
        t = _apply_1q_tensor(state.reshape((2,) * n), u, qubit)
        return t.reshape(-1)
    t = state.reshape((2,) * (2 * n))
    t = _apply_1q_tensor(t, u, qubit)
    t = _apply_1q_tensor(t, u.conj(), n + qubit)
    return t.reshape(state.shape)


def apply_clifford_layer(
    state: np.ndarray, layer: Sequence[SingleQubitClifford | None], inverse: bool = False
) -> np.ndarray:
    """Apply a tensor product of single-qubit Cliffords (``None`` = identity)."""
    n = n_qubits(state)
    if len(layer) != n:
        raise ValueError(f"layer has {len(layer)} entries for {n} qubits")
    for q, c in enumerate(layer):
        if c is None or c.is_identity:
            continue
        u = c.matrix()
        state = apply_1q(state, u.conj().T if inverse else u, q)
    return state


def disentangler(g: Graph, omega: Sequence[int]) -> np.ndarray:
    """Diagonal of U_gamma, the CZ product over the region's boundary links.

    ``U_gamma |G> = |G_omega> (x) |G_rest>``; the operator is diagonal and
    self-inverse, so it is returned as a vector of +-1 entries.
    """
    _check_pure(g.n)
    blocks = adjacency_blocks(g, omega)
    return cz_phases(g.n, blocks.boundary_edges)


def apply_diagonal(state: np.ndarray, diag: np.ndarray) -> np.ndarray:
    if state.ndim == 1:
        return diag * state
    return diag[:, None] * state * diag.conj()[None, :]


def partial_trace(rho: np.ndarray, keep: Sequence[int]) -> np.ndarray:
    """Reduced density matrix on ``keep`` (kept in increasing qubit order)."""
    n = n_qubits(rho)
    keep = sorted(keep)
    drop = [q for q in range(n) if q not in keep]
    t = rho.reshape((2,) * (2 * n))
    perm = keep + drop + [n + q for q in keep] + [n + q for q in drop]
    dk, dd = 1 << len(keep), 1 << len(drop)
    t = t.transpose(perm).reshape(dk, dd, dk, dd)
    return np.einsum("ajbj->ab", t)


def reduced_region_state(rho: np.ndarray, g: Graph, omega: Sequence[int]) -> np.ndarray:
    """Tr_rest(U_gamma rho U_gamma^-1)."""
    if rho.shape != (1 << g.n, 1 << g.n):
        raise ValueError("density matrix does not match the graph size")
    om = as_region(omega, g.n)
    return partial_trace(apply_diagonal(rho, disentangler(g, om)), om)


def partial_transpose(rho: np.ndarray, part_a: Sequence[int]) -> np.ndarray:
    """Transpose the qubits in ``part_a`` in the computational basis."""
    n = n_qubits(rho)
    if any(not 0 <= q < n for q in part_a) or len(set(part_a)) != len(part_a):
        raise ValueError(f"invalid subsystem {part_a} for {n} qubits")
    perm = list(range(2 * n))
    for q in part_a:
        perm[q], perm[n + q] = perm[n + q], perm[q]
    return rho.reshape((2,) * (2 * n)).transpose(perm).reshape(rho.shape)


# --- measurements ---------------------------------------------------------

PAULI_ANGLES = {0: (0.0, 0.0), 1: (np.pi / 2, 0.0), 2: (np.pi / 2, np.pi / 2)}
AXIS_NAMES = "ZXY"


def measurement_basis(theta: float, phi: float) -> np.ndarray:
    """Columns are the outcome-0 and outcome-1 vectors."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    e = np.exp(1j * phi)
    return np.array([[c, s], [e * s, -e * c]], dtype=complex)


@dataclass(frozen=True)
class MeasurementSetting:
    """Rank-1 product measurement, one (theta, phi) pair per measured qubit.

    ``axes`` holds the Pauli index (0=Z, 1=X, 2=Y) per qubit when the setting
    is a Pauli one, else ``None``.
    """

    angles: tuple[tuple[float, float], ...]
    axes: tuple[int, ...] | None = None

    @classmethod
    def pauli(cls, l: int | Sequence[int], m: int | None = None) -> "MeasurementSetting":
        """From a base-3 multi-index ``l`` (first measured qubit most significant)."""
        if isinstance(l, (int, np.integer)):
            if m is None:
                raise ValueError("qubit count needed for an integer index")
            if not 0 <= l < 3**m:
                raise ValueError(f"setting {l} out of range for {m} qubits")
            digits = [(int(l) // 3 ** (m - 1 - k)) % 3 for k in range(m)]
        else:
            digits = [int(d) for d in l]
            if any(d not in (0, 1, 2) for d in digits):
                raise ValueError(f"Pauli axes must be 0, 1 or 2: {digits}")
        return cls(tuple(PAULI_ANGLES[d] for d in digits), tuple(digits))

    @classmethod
    def from_angles(cls, flat: Sequence[float]) -> "MeasurementSetting":
        flat = list(flat)
        return cls(tuple((float(flat[2 * k]), float(flat[2 * k + 1])) for k in range(len(flat) // 2)))

    @property
    def m(self) -> int:
        return len(self.angles)

    @property
    def index(self) -> int | None:
        if self.axes is None:
            return None
        v = 0
        for d in self.axes:
            v = 3 * v + d
        return v

    def label(self) -> str:
        if self.axes is None:
            return ";".join(f"{t:.6g},{p:.6g}" for t, p in self.angles)
        return "".join(AXIS_NAMES[d] for d in self.axes)


def measurement_ensemble(
    rho: np.ndarray, measured: Sequence[int], setting: MeasurementSetting
) -> tuple[np.ndarray, np.ndarray]:
    """Outcome probabilities and normalized post-measurement states on the rest.

    Returns ``(p, states)`` with ``p`` of length ``2**m`` (outcome index base 2,
    first measured qubit most significant) and ``states`` of shape
    ``(2**m, d, d)``.  States of outcomes with ``p <= 1e-12`` are zero.
    """
    n = n_qubits(rho)
    measured = list(measured)
    if sorted(measured) != measured or len(set(measured)) != len(measured):
        raise ValueError("measured qubits must be distinct and increasing")
    if setting.m != len(measured):
        raise ValueError(f"setting covers {setting.m} qubits, {len(measured)} measured")
    keep = [q for q in range(n) if q not in measured]
    t = rho.reshape((2,) * (2 * n))
    for q, (theta, phi) in zip(measured, setting.angles):
        bdag = measurement_basis(theta, phi).conj().T
        t = _apply_1q_tensor(t, bdag, q)
        t = _apply_1q_tensor(t, bdag.conj(), n + q)
    m, dk = len(measured), 1 << len(keep)
    perm = measured + keep + [n + q for q in measured] + [n + q for q in keep]
    blocks = np.einsum("iaib->iab", t.transpose(perm).reshape(1 << m, dk, 1 << m, dk))
    p = np.real(np.einsum("iaa->i", blocks))
    p = np.where(np.abs(p) < PROB_FLOOR * 1e-3, 0.0, p)
    states = np.zeros_like(blocks)
    ok = p > PROB_FLOOR
    states[ok] = blocks[ok] / p[ok, None, None]
    return p, states


def project_measure(
    rho: np.ndarray,
    measured: Sequence[int],
    setting: MeasurementSetting,
    outcome: int,
) -> tuple[float, np.ndarray | None]:
    """Probability and post-measurement state of a single outcome.

    The state is ``None`` when the outcome has probability ``<= 1e-12``.
    """
    p, states = measurement_ensemble(rho, measured, setting)
    if not 0 <= outcome < len(p):
        raise ValueError(f"outcome {outcome} out of range")
    if p[outcome] <= PROB_FLOOR:
        return float(p[outcome]), None
    return float(p[outcome]), states[outcome]


def region_tensor_order(omega: Sequence[int], n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    om = as_region(omega, n)
    return om, complement(om, n)


def dense_gd_state(g: Graph, p: np.ndarray) -> np.ndarray:
    """sum_nu p_nu |G^nu><G^nu| for a probability vector over basis patterns."""
    b = graph_basis(g)
    return (b * np.asarray(p)[None, :]) @ b.conj().T


def neighbours_mask(g: Graph, r: int) -> list[int]:
    return bits(g.adj[r])
