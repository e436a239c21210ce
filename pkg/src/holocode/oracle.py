"""Dense statevector oracle.

Index convention: the first named qubit is the most significant bit of the
amplitude index.  Everything here is brute force on purpose; it is the
independent check for the GF(2) code paths.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .circuits import CliffordCircuit
from .symplectic import PauliRow, PhasedCheckMatrix, _rref

__all__ = [
    "QubitCapError",
    "GATE_MATRICES",
    "Statevector",
    "run",
    "apply_pauli",
    "from_stabilizer",
    "reduced_entropy",
    "circuit_unitary",
    "pauli_matrix",
    "FidelityEstimate",
    "estimate_fidelity",
    "DEFAULT_CAP",
]

DEFAULT_CAP = 20
EIGEN_CLAMP = 1e-14
PHASE_TOL = 1e-10

_s2 = 1 / math.sqrt(2)
GATE_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "H": np.array([[_s2, _s2], [_s2, -_s2]], dtype=complex),
    "S": np.diag([1, 1j]),
    "Sdg": np.diag([1, -1j]),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1, -1]).astype(complex),
    "SX": 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]]),
    "SXdg": 0.5 * np.array([[1 - 1j, 1 + 1j], [1 + 1j, 1 - 1j]]),
}

_KETS = {
    "0": np.array([1, 0], dtype=complex),
    "1": np.array([0, 1], dtype=complex),
    "+": np.array([_s2, _s2], dtype=complex),
    "-": np.array([_s2, -_s2], dtype=complex),
}


class QubitCapError(RuntimeError):
    """Requested simulation exceeds the configured qubit cap."""


def pauli_matrix(row: PauliRow) -> np.ndarray:
    """Dense matrix of a signed Pauli row (qubit 0 is the leftmost factor)."""
    mat = np.array([[1.0 + 0j]])
    for j in range(row.n):
        mat = np.kron(mat, GATE_MATRICES[row.letter(j)])
    return -mat if row.sign else mat


@dataclass
class Statevector:
    data: np.ndarray
    qubits: tuple[str, ...]

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=complex).reshape(-1)
        self.qubits = tuple(str(q) for q in self.qubits)
        if self.data.size != 2 ** len(self.qubits):
            raise ValueError("amplitude count does not match the qubit list")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError("duplicate qubit names")

    @property
    def num_qubits(self) -> int:
        return len(self.qubits)

    @classmethod
    def product(cls, labels: str | Sequence[str], qubits: Sequence[str] | None = None) -> "Statevector":
        """Product of single-qubit kets from ``0 1 + -``."""
        labels = list(labels)
        if qubits is None:
            qubits = [str(i) for i in range(len(labels))]
        vec = np.array([1.0 + 0j])
        for lab in labels:
            vec = np.kron(vec, _KETS[lab])
        return cls(vec, tuple(qubits))

    @classmethod
    def random(cls, qubits: Sequence[str], rng: np.random.Generator) -> "Statevector":
        """Haar-random state."""
        v = rng.normal(size=2 ** len(qubits)) + 1j * rng.normal(size=2 ** len(qubits))
        return cls(v / np.linalg.norm(v), tuple(qubits))

    @classmethod
    def random_product(cls, qubits: Sequence[str], rng: np.random.Generator) -> "Statevector":
        vec = np.array([1.0 + 0j])
        for _ in qubits:
            v = rng.normal(size=2) + 1j * rng.normal(size=2)
            vec = np.kron(vec, v / np.linalg.norm(v))
        return cls(vec, tuple(qubits))

    def copy(self) -> "Statevector":
        return Statevector(self.data.copy(), self.qubits)

    def tensor(self, other: "Statevector") -> "Statevector":
        return Statevector(np.kron(self.data, other.data), self.qubits + other.qubits)

    def norm(self) -> float:
        return float(np.linalg.norm(self.data))

    def normalize(self) -> "Statevector":
        nrm = self.norm()
        if nrm == 0:
            raise ValueError("cannot normalise the zero vector")
        return Statevector(self.data / nrm, self.qubits)

    def reorder(self, qubits: Sequence[str]) -> "Statevector":
        qubits = tuple(str(q) for q in qubits)
        if sorted(qubits) != sorted(self.qubits):
            raise ValueError("reorder needs the same qubit names")
        perm = [self.qubits.index(q) for q in qubits]
        t = self.data.reshape((2,) * self.num_qubits).transpose(perm)
        return Statevector(t.reshape(-1), qubits)

    def inner(self, other: "Statevector") -> complex:
        """``<self|other>`` after aligning qubit order by name."""
        other = other.reorder(self.qubits)
        return complex(np.vdot(self.data, other.data))

    def fidelity(self, other: "Statevector") -> float:
        return abs(self.inner(other)) ** 2 / (self.norm() ** 2 * other.norm() ** 2)

    def equal_up_to_phase(self, other: "Statevector", tol: float = PHASE_TOL) -> bool:
        a, b = self.normalize(), other.normalize()
        return abs(a.inner(b)) >= 1 - tol

    def _axes(self, subset: Iterable[str | int]) -> list[int]:
        axes = []
        for q in subset:
            axes.append(q if isinstance(q, int) else self.qubits.index(str(q)))
        return axes

    def reduced_density(self, subset: Iterable[str | int]) -> np.ndarray:
        """Density matrix on ``subset`` (in the given order), tracing the rest."""
        keep = self._axes(subset)
        rest = [i for i in range(self.num_qubits) if i not in keep]
        t = self.data.reshape((2,) * self.num_qubits).transpose(keep + rest)
        mat = t.reshape(2 ** len(keep), -1)
        return mat @ mat.conj().T

    def expectation(self, row: PauliRow, qubits: Sequence[str] | None = None) -> float:
        """Real part of ``<psi|P|psi>`` for a row acting on ``qubits`` (default: all)."""
        vec = self if qubits is None else self.reorder(list(qubits) + [q for q in self.qubits if q not in qubits])
        full = row if row.n == vec.num_qubits else row.tensor(PauliRow.identity(vec.num_qubits - row.n))
        return float(np.real(np.vdot(vec.data, apply_pauli(full, vec.data))))

    # serialisation ---------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "qubits": list(self.qubits),
            "re": self.data.real.tolist(),
            "im": self.data.imag.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Statevector":
        vec = np.array(data["re"], dtype=float) + 1j * np.array(data["im"], dtype=float)
        return cls(vec, tuple(data["qubits"]))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_bytes(self) -> bytes:
        """Little-endian complex64 (re, im) pairs."""
        return self.data.astype("<c8").tobytes()

    @classmethod
    def from_bytes(cls, raw: bytes, qubits: Sequence[str]) -> "Statevector":
        return cls(np.frombuffer(raw, dtype="<c8").astype(complex), tuple(qubits))


def _apply_1q(t: np.ndarray, mat: np.ndarray, axis: int) -> np.ndarray:
    out = np.tensordot(mat, t, axes=([1], [axis]))
    return np.moveaxis(out, 0, axis)


def _index(m: int, fixed: dict[int, int]) -> tuple:
    return tuple(fixed.get(i, slice(None)) for i in range(m))


def run(
    circuit: CliffordCircuit,
    initial: Statevector | str,
    cap: int = DEFAULT_CAP,
) -> Statevector:
    """Apply ``circuit`` to ``initial``.

    ``initial`` is either a statevector over (a superset of) the circuit's
    qubits or a product-state string over ``circuit.qubits``.
    """
    if isinstance(initial, str):
        if len(initial) != len(circuit.qubits):
            raise ValueError("product-state string length does not match the circuit")
        if len(initial) > cap:
            raise QubitCapError(f"{len(initial)} qubits exceed the cap of {cap}")
        initial = Statevector.product(initial, circuit.qubits)
    m = initial.num_qubits
    if m > cap:
        raise QubitCapError(f"{m} qubits exceed the cap of {cap}")
    missing = [q for q in circuit.qubits if q not in initial.qubits and any(q in g.qubits for g in circuit.gates)]
    if missing:
        raise ValueError(f"initial state lacks qubits {missing}")
    pos = {q: i for i, q in enumerate(initial.qubits)}
    t = initial.data.reshape((2,) * m).copy()
    for g in circuit.gates:
        if g.name == "CZ":
            a, b = pos[g.qubits[0]], pos[g.qubits[1]]
            t[_index(m, {a: 1, b: 1})] *= -1
        elif g.name == "CX":
            c, x = pos[g.qubits[0]], pos[g.qubits[1]]
            i0, i1 = _index(m, {c: 1, x: 0}), _index(m, {c: 1, x: 1})
            tmp = t[i0].copy()
            t[i0] = t[i1]
            t[i1] = tmp
        else:
            t = _apply_1q(t, GATE_MATRICES[g.name], pos[g.qubits[0]])
    return Statevector(t.reshape(-1), initial.qubits)


def circuit_unitary(circuit: CliffordCircuit, qubits: Sequence[str] | None = None) -> np.ndarray:
    """Dense unitary of ``circuit`` (columns are images of basis states)."""
    qubits = tuple(qubits or circuit.qubits)
    dim = 2 ** len(qubits)
    cols = []
    for b in range(dim):
        e = np.zeros(dim, dtype=complex)
        e[b] = 1
        cols.append(run(circuit, Statevector(e, qubits)).data)
    return np.array(cols).T


def apply_pauli(row: PauliRow, vec: np.ndarray) -> np.ndarray:
    """``P |vec>`` for a signed Pauli row; qubit 0 is the most significant bit."""
    m = row.n
    xm = zm = 0
    for j in range(m):
        bit = 1 << (m - 1 - j)
        if (row.x >> j) & 1:
            xm |= bit
        if (row.z >> j) & 1:
            zm |= bit
    idx = np.arange(2 ** m, dtype=np.int64)
    parity = np.bitwise_count(idx & zm) & 1
    phase = (1j) ** row.num_y * (-1 if row.sign else 1)
    out = np.empty_like(vec)
    out[idx ^ xm] = phase * np.where(parity, -1, 1) * vec
    return out


def from_stabilizer(mat: PhasedCheckMatrix, qubits: Sequence[str] | None = None, cap: int = DEFAULT_CAP) -> Statevector:
    """The unique +1 common eigenvector of a pure stabilizer group."""
    if not mat.is_pure():
        raise ValueError("from_stabilizer needs a pure state (as many rows as qubits)")
    m = mat.n
    if m > cap:
        raise QubitCapError(f"{m} qubits exceed the cap of {cap}")
    # a basis state inside the support: solve the Z-type constraints
    reduced, pivots = _rref(list(mat.rows), range(2 * m))
    b = 0
    for r, col in zip(reduced, pivots):
        if r.x == 0 and r.sign:
            b |= 1 << (m - 1 - (col - m))
    vec = np.zeros(2 ** m, dtype=complex)
    vec[b] = 1
    for g in mat.rows:
        vec = 0.5 * (vec + apply_pauli(g, vec))
    nrm = np.linalg.norm(vec)
    if nrm < 1e-12:
        raise ValueError("generators are inconsistent (the group contains -1)")
    if qubits is None:
        qubits = [str(i) for i in range(m)]
    return Statevector(vec / nrm, tuple(qubits))


def reduced_entropy(state: Statevector, subset: Iterable[str | int]) -> float:
    """Von Neumann entropy in bits of the reduction to ``subset``."""
    keep = state._axes(subset)
    if not keep or len(keep) >= state.num_qubits:
        raise ValueError("subset must be a non-empty proper subset")
    rest = [i for i in range(state.num_qubits) if i not in keep]
    t = state.data.reshape((2,) * state.num_qubits).transpose(keep + rest)
    mat = t.reshape(2 ** len(keep), -1) / state.norm()
    s = np.linalg.svd(mat, compute_uv=False)
    p = s ** 2
    p = p[p > EIGEN_CLAMP]
    return float(-np.sum(p * np.log2(p)))


# --------------------------------------------------------------------------
# circuit fidelity arithmetic


def _ceil_sig(x: float) -> tuple[float, int]:
    """Round ``x`` up to one significant digit; also return its decimal place."""
    if x <= 0:
        return 0.0, 3
    decimals = -math.floor(math.log10(x))
    scale = 10 ** decimals
    return math.ceil(x * scale - 1e-9) / scale, decimals


@dataclass(frozen=True)
class FidelityEstimate:
    value: float
    uncertainty: float
    n1: int
    n2: int
    nm: int

    def rounded(self) -> tuple[float, float, int]:
        """Conservative report: uncertainty rounded up to one significant
        digit, value truncated to the same decimal place."""
        unc, decimals = _ceil_sig(self.uncertainty)
        scale = 10 ** decimals
        val = math.floor(self.value * scale + 1e-9) / scale
        return val, unc, decimals

    def __str__(self) -> str:
        val, unc, decimals = self.rounded()
        return f"{val:.{decimals}f} ± {unc:.{decimals}f}"


def estimate_fidelity(
    n1: int,
    n2: int,
    nm: int,
    f1: tuple[float, float] = (1.0, 0.0),
    f2: tuple[float, float] = (1.0, 0.0),
    fm: tuple[float, float] = (1.0, 0.0),
) -> FidelityEstimate:
    """Product of per-operation fidelities with relative errors added in quadrature.

    Each fidelity argument is ``(value, uncertainty)``.
    """
    for count in (n1, n2, nm):
        if count < 0:
            raise ValueError("operation counts must be non-negative")
    for f, _ in (f1, f2, fm):
        if not 0 < f <= 1:
            raise ValueError("fidelities must lie in (0, 1]")
    value = fm[0] ** nm * f2[0] ** n2 * f1[0] ** n1
    rel = math.sqrt(
        (n1 * f1[1] / f1[0]) ** 2 + (n2 * f2[1] / f2[0]) ** 2 + (nm * fm[1] / fm[0]) ** 2
    )
    return FidelityEstimate(value, value * rel, n1, n2, nm)
