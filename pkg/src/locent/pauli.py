"""Pauli strings and single-qubit Clifford maps.

A :class:`PauliString` on ``n`` qubits is ``i**phase * prod_j s(x_j, z_j)``
where ``s(0,0)=I, s(1,0)=X, s(0,1)=Z, s(1,1)=Y``.  Masks follow the node-set
convention (bit ``j`` is qubit ``j``).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = {"I": I2, "X": X, "Y": Y, "Z": Z}
LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
BITS_LETTER = {v: k for k, v in LETTER_BITS.items()}

# exp(-i pi X / 4) and exp(i pi Z / 4)
UX = (I2 - 1j * X) / np.sqrt(2)
UZ = np.diag([np.exp(1j * np.pi / 4), np.exp(-1j * np.pi / 4)])


def _g(x1: int, z1: int, x2: int, z2: int) -> int:
    # exponent of i picked up by s(x1,z1) s(x2,z2)
    if x1 == 0 and z1 == 0:
        return 0
    if x1 == 1 and z1 == 1:
        return z2 - x2
    if x1 == 1:
        return z2 * (2 * x2 - 1)
    return x2 * (1 - 2 * z2)


@dataclass(frozen=True)
class PauliString:
    n: int
    xmask: int = 0
    zmask: int = 0
    phase: int = 0  # power of i

    def __post_init__(self):
        object.__setattr__(self, "phase", self.phase % 4)
        full = (1 << self.n) - 1
        if (self.xmask | self.zmask) & ~full:
            raise ValueError("Pauli mask exceeds qubit count")

    @classmethod
    def from_letters(cls, letters: str, sign: int = 1) -> "PauliString":
        """``"XZI"`` means X on qubit 0, Z on qubit 1."""
        x = z = 0
        for j, c in enumerate(letters.upper()):
            bx, bz = LETTER_BITS[c]
            x |= bx << j
            z |= bz << j
        return cls(len(letters), x, z, 0 if sign == 1 else 2)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliString":
        bx, bz = LETTER_BITS[letter]
        return cls(n, bx << qubit, bz << qubit)

    def letter(self, j: int) -> str:
        return BITS_LETTER[(self.xmask >> j & 1, self.zmask >> j & 1)]

    def letters(self) -> str:
        return "".join(self.letter(j) for j in range(self.n))

    @property
    def support(self) -> int:
        return self.xmask | self.zmask

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def sign(self) -> complex:
        return 1j**self.phase

    def __mul__(self, other: "PauliString") -> "PauliString":
        if self.n != other.n:
            raise ValueError("qubit counts differ")
        e = self.phase + other.phase
        for j in range(self.n):
            e += _g(self.xmask >> j & 1, self.zmask >> j & 1, other.xmask >> j & 1, other.zmask >> j & 1)
        return PauliString(self.n, self.xmask ^ other.xmask, self.zmask ^ other.zmask, e)

    def commutes(self, other: "PauliString") -> bool:
        s = bin(self.xmask & other.zmask).count("1") + bin(self.zmask & other.xmask).count("1")
        return s % 2 == 0

    def __str__(self):
        return {0: "+", 1: "+i", 2: "-", 3: "-i"}[self.phase] + self.letters()

    def apply(self, psi: np.ndarray) -> np.ndarray:
        """Act on a state vector (or on the leading ``n`` axes of a tensor).

        ``psi`` is either a flat vector of length ``2**n`` with qubit 0 as the
        most significant bit, or an array whose first ``n`` axes have length 2.
        """
        flat = psi.ndim == 1
        t = psi.reshape((2,) * self.n) if flat else psi
        t = t.astype(complex, copy=True)
        sign_shape = [1] * t.ndim
        for j in range(self.n):
            if self.zmask >> j & 1:
                sign_shape[j] = 2
                t = t * np.array([1, -1]).reshape(sign_shape)
                sign_shape[j] = 1
        xs = tuple(j for j in range(self.n) if self.xmask >> j & 1)
        if xs:
            t = np.flip(t, axis=xs)
        t = t * 1j ** ((self.phase + bin(self.xmask & self.zmask).count("1")) % 4)
        return t.reshape(-1) if flat else t

    def matrix(self) -> np.ndarray:
        out = np.array([[1.0 + 0j]])
        for j in range(self.n):
            out = np.kron(out, PAULI[self.letter(j)])
        return self.sign * out


def pauli_expectation(rho: np.ndarray, p: PauliString) -> complex:
    """Tr(rho P) without building the 2^n x 2^n Pauli matrix."""
    d = rho.shape[0]
    t = rho.reshape((2,) * p.n + (d,))
    return np.trace(p.apply(t).reshape(d, d))


@dataclass(frozen=True)
class SingleQubitClifford:
    """A single-qubit Clifford map, U sigma U^dagger, given by its X and Z images.

    Images are ``(sign, letter)`` pairs.  The unitary is recovered up to a
    global phase by :meth:`matrix`.
    """

    x_image: tuple[int, str] = (1, "X")
    z_image: tuple[int, str] = (1, "Z")

    def __post_init__(self):
        lx, lz = self.x_image[1], self.z_image[1]
        if lx == lz or "I" in (lx, lz) or self.x_image[0] not in (1, -1) or self.z_image[0] not in (1, -1):
            raise ValueError(f"images {self.x_image}, {self.z_image} do not anticommute")

    @classmethod
    def from_matrix(cls, u: np.ndarray) -> "SingleQubitClifford":
        return cls(_match_pauli(u @ X @ u.conj().T), _match_pauli(u @ Z @ u.conj().T))

    def matrix(self) -> np.ndarray:
        pz = self.z_image[0] * PAULI[self.z_image[1]]
        px = self.x_image[0] * PAULI[self.x_image[1]]
        w, v = np.linalg.eigh(pz)
        zero = v[:, np.argmax(w)]
        # fix the arbitrary eigenvector phase so the output is deterministic
        k = np.argmax(np.abs(zero))
        zero = zero * (abs(zero[k]) / zero[k])
        return np.column_stack([zero, px @ zero])

    def conjugate(self, letter: str) -> tuple[int, str]:
        """Signed image of a single Pauli letter."""
        if letter == "I":
            return (1, "I")
        if letter == "X":
            return self.x_image
        if letter == "Z":
            return self.z_image
        u = self.matrix()
        return _match_pauli(u @ Y @ u.conj().T)

    def then(self, other: "SingleQubitClifford") -> "SingleQubitClifford":
        """Apply ``self`` first and ``other`` afterwards (operator ``other @ self``)."""
        return SingleQubitClifford.from_matrix(other.matrix() @ self.matrix())

    def inverse(self) -> "SingleQubitClifford":
        return SingleQubitClifford.from_matrix(self.matrix().conj().T)

    @property
    def is_identity(self) -> bool:
        return self.x_image == (1, "X") and self.z_image == (1, "Z")

    def __str__(self):
        sx = "+" if self.x_image[0] > 0 else "-"
        sz = "+" if self.z_image[0] > 0 else "-"
        return f"X->{sx}{self.x_image[1]}, Z->{sz}{self.z_image[1]}"


def _match_pauli(m: np.ndarray, atol: float = 1e-9) -> tuple[int, str]:
    for letter in "XYZ":
        for s in (1, -1):
            if np.allclose(m, s * PAULI[letter], atol=atol):
                return (s, letter)
    raise ValueError("matrix is not a signed Pauli operator")


IDENTITY = SingleQubitClifford()
CLIFF_UX = SingleQubitClifford.from_matrix(UX)
CLIFF_UZ = SingleQubitClifford.from_matrix(UZ)


@lru_cache(maxsize=None)
def all_single_qubit_cliffords() -> tuple[SingleQubitClifford, ...]:
    """The 24 single-qubit Cliffords modulo phase, generated by u^x and u^z."""
    found = {IDENTITY: None}
    frontier = [IDENTITY]
    while frontier:
        nxt = []
        for c in frontier:
            for gen in (CLIFF_UX, CLIFF_UZ):
                d = c.then(gen)
                if d not in found:
                    found[d] = None
                    nxt.append(d)
        frontier = nxt
    return tuple(found)
