"""Single-qubit noise channels and their behaviour under local Clifford frames.

Pauli channels carry a probability 4-vector over (I, X, Y, Z).  This is the
noise index convention; measurement settings use Z, X, Y = 0, 1, 2 instead
and live in :mod:`locent.dense`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .graphs import Graph, bits, local_complement
from .pauli import CLIFF_UX, CLIFF_UZ, IDENTITY, PAULI, UX, UZ, SingleQubitClifford
from . import dense

PAULI_KINDS = ("I", "BF", "BPF", "PF", "DP", "CustomPauli")
KRAUS_KINDS = ("AD", "CustomKraus")
NOISE_LETTERS = "IXYZ"
_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SingleQubitChannel:
    """A CPTP map on one qubit.

    ``probs`` is set for Pauli channels only.  ``kraus`` is always populated.
    """

    kind: str
    q: float
    kraus: tuple[np.ndarray, ...] = field(repr=False)
    probs: tuple[float, float, float, float] | None = None

    @property
    def is_pauli(self) -> bool:
        return self.probs is not None

    @property
    def flip_probability(self) -> float:
        """Chance that a Z-basis outcome is flipped, q_X + q_Y."""
        if self.probs is None:
            raise ValueError(f"{self.kind} channel has no flip probability")
        return self.probs[1] + self.probs[2]

    s = flip_probability

    @property
    def is_identity(self) -> bool:
        if self.probs is not None:
            return self.probs[0] >= 1 - _TOL
        return len(self.kraus) >= 1 and all(
            np.allclose(k, 0, atol=_TOL) for k in self.kraus[1:]
        ) and np.allclose(self.kraus[0], np.eye(2), atol=_TOL)

    @property
    def dominant_letter(self) -> str:
        """The non-identity Pauli of a single-flip channel, ``"I"`` if none."""
        if self.probs is None:
            raise ValueError("not a Pauli channel")
        nz = [k for k in (1, 2, 3) if self.probs[k] > _TOL]
        if not nz:
            return "I"
        if len(nz) > 1:
            raise ValueError(f"{self.kind} channel has several flip letters")
        return NOISE_LETTERS[nz[0]]

    def superoperator(self) -> np.ndarray:
        return sum(np.kron(k, k.conj()) for k in self.kraus)

    def apply(self, rho: np.ndarray, qubit: int) -> np.ndarray:
        return sum(dense.apply_1q(rho, k, qubit) for k in self.kraus)

    def label(self) -> str:
        if self.kind in ("AD", "BF", "BPF", "PF", "DP"):
            return f"{self.kind}({self.q:g})"
        if self.kind == "I":
            return "I"
        if self.probs is not None:
            return "Pauli(" + ",".join(f"{p:.6g}" for p in self.probs) + ")"
        return "Kraus"

    def __repr__(self):
        return f"SingleQubitChannel({self.label()})"


def _check_q(q: float):
    if not 0.0 <= q <= 1.0 or not np.isfinite(q):
        raise ValueError(f"noise strength {q} outside [0, 1]")


def _pauli_kraus(probs) -> tuple[np.ndarray, ...]:
    ks = tuple(np.sqrt(p) * PAULI[L] for p, L in zip(probs, NOISE_LETTERS) if p > 0)
    return ks or (np.eye(2, dtype=complex),)


def pauli_channel(probs: Sequence[float], kind: str = "CustomPauli", q: float = float("nan")) -> SingleQubitChannel:
    p = tuple(float(x) for x in probs)
    if len(p) != 4 or min(p) < -_TOL or abs(sum(p) - 1) > 1e-10:
        raise ValueError(f"invalid Pauli probabilities {probs}")
    p = tuple(max(x, 0.0) for x in p)
    return SingleQubitChannel(kind, q, _pauli_kraus(p), p)


def kraus_channel(kraus: Sequence[np.ndarray], kind: str = "CustomKraus", q: float = float("nan")) -> SingleQubitChannel:
    ks = tuple(np.asarray(k, dtype=complex) for k in kraus)
    total = sum(k.conj().T @ k for k in ks)
    if not np.allclose(total, np.eye(2), atol=1e-10):
        raise ValueError("Kraus operators are not trace preserving")
    return SingleQubitChannel(kind, q, ks)


def make_channel(kind: str, q: float = 0.0) -> SingleQubitChannel:
    """BF, BPF, PF, DP, AD (case-insensitive) or I, at strength ``q``."""
    k = kind.upper()
    _check_q(q)
    if k in ("I", "ID", "IDENTITY", "NONE"):
        return pauli_channel((1, 0, 0, 0), "I", 0.0)
    if k == "BF":
        return pauli_channel((1 - q / 2, q / 2, 0, 0), "BF", q)
    if k == "BPF":
        return pauli_channel((1 - q / 2, 0, q / 2, 0), "BPF", q)
    if k == "PF":
        return pauli_channel((1 - q / 2, 0, 0, q / 2), "PF", q)
    if k == "DP":
        return pauli_channel((1 - 3 * q / 4, q / 4, q / 4, q / 4), "DP", q)
    if k == "AD":
        k0 = np.array([[1, 0], [0, np.sqrt(1 - q)]], dtype=complex)
        k1 = np.array([[0, np.sqrt(q)], [0, 0]], dtype=complex)
        return SingleQubitChannel("AD", q, (k0, k1))
    raise ValueError(f"unknown channel kind {kind!r}")


def recognize(probs: Sequence[float], tol: float = 1e-12) -> SingleQubitChannel:
    """Name a Pauli probability vector after a standard channel when it is one."""
    p0, px, py, pz = probs
    if px <= tol and py <= tol and pz <= tol:
        return make_channel("I")
    for kind, idx in (("BF", 1), ("BPF", 2), ("PF", 3)):
        others = [probs[j] for j in (1, 2, 3) if j != idx]
        if max(others) <= tol and probs[idx] <= 0.5 + tol:
            return make_channel(kind, min(2 * probs[idx], 1.0))
    if abs(px - py) <= tol and abs(py - pz) <= tol and px <= 0.25 + tol:
        return make_channel("DP", min(4 * px, 1.0))
    return pauli_channel(probs)


def conjugate_channel(ch: SingleQubitChannel, c: SingleQubitClifford) -> SingleQubitChannel:
    """The channel with Kraus operators ``U K U^dagger``.

    Pauli channels stay Pauli: each probability moves to the Clifford image of
    its letter, with the sign dropped.  Kraus-only channels are conjugated
    directly and come back as ``CustomKraus``.
    """
    if c.is_identity:
        return ch
    if ch.probs is not None:
        new = [0.0] * 4
        for j, L in enumerate(NOISE_LETTERS):
            new[NOISE_LETTERS.index(c.conjugate(L)[1])] += ch.probs[j]
        return recognize(new)
    u = c.matrix()
    return kraus_channel([u @ k @ u.conj().T for k in ch.kraus])


@dataclass(frozen=True)
class NoiseLayer:
    channels: tuple[SingleQubitChannel, ...]

    @classmethod
    def uniform(cls, n: int, kind: str, q: float) -> "NoiseLayer":
        ch = make_channel(kind, q)
        return cls((ch,) * n)

    @classmethod
    def identity(cls, n: int) -> "NoiseLayer":
        return cls.uniform(n, "I", 0.0)

    def __len__(self):
        return len(self.channels)

    def __getitem__(self, i):
        return self.channels[i]

    @property
    def is_pauli(self) -> bool:
        return all(c.is_pauli for c in self.channels)

    def conjugated(self, layer: Sequence[SingleQubitClifford | None]) -> "NoiseLayer":
        if len(layer) != len(self.channels):
            raise ValueError("Clifford layer and noise layer differ in length")
        return NoiseLayer(tuple(
            ch if c is None else conjugate_channel(ch, c) for ch, c in zip(self.channels, layer)
        ))

    def with_channel(self, qubit: int, ch: SingleQubitChannel) -> "NoiseLayer":
        chans = list(self.channels)
        chans[qubit] = ch
        return NoiseLayer(tuple(chans))


def apply_noise(rho: np.ndarray, layer: NoiseLayer) -> np.ndarray:
    """sum over Kraus products; the layer acts independently on every qubit."""
    n = dense.n_qubits(rho)
    if len(layer) != n:
        raise ValueError(f"noise layer has {len(layer)} channels for {n} qubits")
    dense._check_density(n)
    for q, ch in enumerate(layer.channels):
        if not ch.is_identity:
            rho = ch.apply(rho, q)
    return rho


# --- frames from local complementation -----------------------------------


def lc_frame(g: Graph, seq: Sequence[int]) -> tuple[Graph, list[SingleQubitClifford]]:
    """Per-qubit Clifford layer U_L with ``U_L |g> = |g'>`` up to phase.

    Each step on node ``i`` contributes u^x on ``i`` and u^z on the current
    neighbours of ``i``; later steps act after earlier ones.
    """
    layer = [IDENTITY] * g.n
    cur = g
    for i in seq:
        layer[i] = layer[i].then(CLIFF_UX)
        for j in bits(cur.adj[i]):
            layer[j] = layer[j].then(CLIFF_UZ)
        cur = local_complement(cur, i)
    return cur, layer


@dataclass(frozen=True)
class ChainFrame:
    """Clifford layer turning a chain a-1-...-n_L-b into a graph with edge (a, b)."""

    n_l: int
    u_a: SingleQubitClifford
    u_b: SingleQubitClifford
    v: tuple[SingleQubitClifford, ...]  # v[j-1] acts on interior qubit j

    def layer(self, bulk: bool = False) -> list[SingleQubitClifford]:
        """Layer in :func:`locent.graphs.linear_chain` node order."""
        core = [self.u_a, *self.v, self.u_b]
        return [IDENTITY, *core, IDENTITY] if bulk else core


def _power(u: np.ndarray, k: int) -> np.ndarray:
    return np.linalg.matrix_power(u, k)


def linear_chain_unitaries(n_l: int) -> dict:
    """2x2 unitaries of the chain frame, keyed ``"a"``, ``"b"`` and 1..n_l."""
    if n_l < 1:
        raise ValueError("chain needs at least one interior qubit")
    out = {"a": _power(UZ, n_l), "b": UZ}
    out[1] = _power(UZ, n_l - 1) @ UX
    if n_l >= 2:
        out[n_l] = UX @ UZ
    for j in range(2, n_l):
        out[j] = _power(UZ, n_l - j) @ UX @ UZ
    return out


def linear_chain_frame(n_l: int) -> ChainFrame:
    u = linear_chain_unitaries(n_l)
    cl = {k: SingleQubitClifford.from_matrix(m) for k, m in u.items()}
    return ChainFrame(n_l, cl["a"], cl["b"], tuple(cl[j] for j in range(1, n_l + 1)))


def linear_chain_table(n_l: int) -> dict:
    """Closed-form images of X, Y, Z under each chain-frame unitary.

    Returns ``{key: {letter: (sign, letter)}}`` with the same keys as
    :func:`linear_chain_unitaries`.  Written out case by case, independently
    of the matrix products, so the two can be checked against each other.
    """
    if n_l < 1:
        raise ValueError("chain needs at least one interior qubit")
    m = n_l // 2
    even = n_l % 2 == 0
    t = {}
    if even:
        t["a"] = {"X": ((-1) ** m, "X"), "Y": ((-1) ** m, "Y"), "Z": (1, "Z")}
        t[1] = {"X": ((-1) ** m, "Y"), "Y": (1, "Z"), "Z": ((-1) ** m, "X")}
    else:
        t["a"] = {"X": ((-1) ** (m + 1), "Y"), "Y": ((-1) ** m, "X"), "Z": (1, "Z")}
        t[1] = {"X": ((-1) ** m, "X"), "Y": (1, "Z"), "Z": ((-1) ** (m + 1), "Y")}
    t["b"] = {"X": (-1, "Y"), "Y": (1, "X"), "Z": (1, "Z")}
    if n_l >= 2:
        t[n_l] = {"X": (-1, "Z"), "Y": (1, "X"), "Z": (-1, "Y")}
    for j in range(2, n_l):
        d = n_l - j
        mm = d // 2
        if d % 2 == 0:
            t[j] = {"X": (-1, "Z"), "Y": ((-1) ** mm, "X"), "Z": ((-1) ** (mm + 1), "Y")}
        else:
            t[j] = {"X": (-1, "Z"), "Y": ((-1) ** (mm + 1), "Y"), "Z": ((-1) ** (mm + 1), "X")}
    return t


# --- noise specification files -------------------------------------------


def _channel_from_obj(obj: Mapping) -> SingleQubitChannel:
    kind = obj.get("kind")
    if kind is None:
        raise ValueError(f"channel entry {obj} lacks a 'kind'")
    if kind == "CustomPauli":
        return pauli_channel(obj["probs"])
    return make_channel(kind, float(obj.get("q", 0.0)))


def noise_layer_from_obj(obj: Mapping, n: int, q: float | None = None) -> NoiseLayer:
    """Build a layer from ``{"default": {...}, "overrides": {"<qubit>": {...}}}``.

    Override keys are 1-based qubit labels.  When ``q`` is given it replaces
    every strength in the file, which is how sweeps reuse one spec.
    """

    def fix(entry):
        entry = dict(entry)
        if q is not None and entry.get("kind") != "CustomPauli":
            entry["q"] = q
        return _channel_from_obj(entry)

    default = fix(obj.get("default", {"kind": "I"}))
    chans = [default] * n
    for key, entry in obj.get("overrides", {}).items():
        i = int(key) - 1
        if not 0 <= i < n:
            raise ValueError(f"override for qubit {key} outside 1..{n}")
        chans[i] = fix(entry)
    return NoiseLayer(tuple(chans))


def load_noise(path: str | Path, n: int, q: float | None = None) -> NoiseLayer:
    return noise_layer_from_obj(json.loads(Path(path).read_text()), n, q)
