"""Phased check-matrix algebra over GF(2).

A Pauli row stores its X-part and Z-part as packed integers (bit ``j`` is
qubit ``j``) plus one sign bit.  Only real phases are representable; any
operation that would produce an imaginary phase raises
:class:`ImaginaryPhaseError`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "DimensionError",
    "ImaginaryPhaseError",
    "PauliRow",
    "PhasedCheckMatrix",
    "Clifford1",
    "SINGLE_QUBIT_GATES",
    "commutes",
    "multiply",
    "phase_exponent",
    "conjugate_row",
    "conjugate_single_clifford",
    "row_reduce",
    "in_group",
    "same_group",
    "gf2_rank",
]


class DimensionError(ValueError):
    """Operands act on different numbers of qubits."""


class ImaginaryPhaseError(ValueError):
    """A product of Pauli rows would carry an imaginary phase."""


_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}


@dataclass(frozen=True)
class PauliRow:
    """Signed Pauli operator on ``n`` qubits."""

    n: int
    x: int = 0
    z: int = 0
    sign: int = 0

    @classmethod
    def from_string(cls, text: str) -> "PauliRow":
        text = text.strip()
        sign = 0
        if text and text[0] in "+-":
            sign = 1 if text[0] == "-" else 0
            text = text[1:]
        x = z = 0
        for j, ch in enumerate(text.upper()):
            try:
                xb, zb = _LETTER_BITS[ch]
            except KeyError:
                raise ValueError(f"invalid Pauli letter {ch!r} in {text!r}") from None
            x |= xb << j
            z |= zb << j
        return cls(len(text), x, z, sign)

    @classmethod
    def single(cls, n: int, letters: dict[int, str], sign: int = 0) -> "PauliRow":
        """Row with the given letters at the given positions, identity elsewhere."""
        x = z = 0
        for j, ch in letters.items():
            if not 0 <= j < n:
                raise DimensionError(f"qubit {j} outside 0..{n - 1}")
            xb, zb = _LETTER_BITS[ch]
            x |= xb << j
            z |= zb << j
        return cls(n, x, z, sign)

    @classmethod
    def identity(cls, n: int) -> "PauliRow":
        return cls(n)

    def letter(self, j: int) -> str:
        return _BITS_LETTER[((self.x >> j) & 1, (self.z >> j) & 1)]

    def to_string(self) -> str:
        body = "".join(self.letter(j) for j in range(self.n))
        return ("-" if self.sign else "+") + body

    def __str__(self) -> str:
        return self.to_string()

    @property
    def support(self) -> int:
        return self.x | self.z

    @property
    def weight(self) -> int:
        return self.support.bit_count()

    @property
    def num_y(self) -> int:
        return (self.x & self.z).bit_count()

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def negate(self) -> "PauliRow":
        return PauliRow(self.n, self.x, self.z, self.sign ^ 1)

    def with_sign(self, sign: int) -> "PauliRow":
        return PauliRow(self.n, self.x, self.z, sign & 1)

    def restrict(self, qubits: Sequence[int]) -> "PauliRow":
        """Keep only the listed qubits (in the listed order); the sign is kept."""
        x = z = 0
        for new, old in enumerate(qubits):
            x |= ((self.x >> old) & 1) << new
            z |= ((self.z >> old) & 1) << new
        return PauliRow(len(qubits), x, z, self.sign)

    def embed(self, n: int, qubits: Sequence[int]) -> "PauliRow":
        """Place this row's qubit ``i`` at position ``qubits[i]`` of an ``n``-qubit row."""
        if len(qubits) != self.n:
            raise DimensionError("embedding map has the wrong length")
        x = z = 0
        for old, new in enumerate(qubits):
            x |= ((self.x >> old) & 1) << new
            z |= ((self.z >> old) & 1) << new
        return PauliRow(n, x, z, self.sign)

    def tensor(self, other: "PauliRow") -> "PauliRow":
        return PauliRow(
            self.n + other.n,
            self.x | (other.x << self.n),
            self.z | (other.z << self.n),
            self.sign ^ other.sign,
        )

    def bits(self) -> int:
        """X-part in the low ``n`` bits, Z-part in the next ``n``."""
        return self.x | (self.z << self.n)


def _check_dims(r1: PauliRow, r2: PauliRow) -> None:
    if r1.n != r2.n:
        raise DimensionError(f"qubit counts differ: {r1.n} vs {r2.n}")


def commutes(r1: PauliRow, r2: PauliRow) -> bool:
    """Symplectic product test ``x1.z2 + z1.x2 == 0 (mod 2)``."""
    _check_dims(r1, r2)
    return ((r1.x & r2.z).bit_count() + (r1.z & r2.x).bit_count()) % 2 == 0


def phase_exponent(r1: PauliRow, r2: PauliRow) -> int:
    """Power of ``i`` (mod 4) picked up by the unsigned product ``P1 P2``.

    Per position: XY=iZ, YZ=iX, ZX=iY contribute +1; the reversed orders -1.
    """
    _check_dims(r1, r2)
    mask = (1 << r1.n) - 1
    x1, z1, x2, z2 = r1.x, r1.z, r2.x, r2.z
    X1, Y1, Z1 = x1 & ~z1 & mask, x1 & z1, ~x1 & z1 & mask
    X2, Y2, Z2 = x2 & ~z2 & mask, x2 & z2, ~x2 & z2 & mask
    forward = ((X1 & Y2) | (Y1 & Z2) | (Z1 & X2)).bit_count()
    backward = ((Y1 & X2) | (Z1 & Y2) | (X1 & Z2)).bit_count()
    return (forward - backward) % 4


def multiply(r1: PauliRow, r2: PauliRow) -> PauliRow:
    """Operator product ``r1 * r2``; raises if the phase would be imaginary."""
    e = phase_exponent(r1, r2)
    if e % 2:
        raise ImaginaryPhaseError(f"{r1} * {r2} has an imaginary phase")
    return PauliRow(r1.n, r1.x ^ r2.x, r1.z ^ r2.z, r1.sign ^ r2.sign ^ (e >> 1))


# --------------------------------------------------------------------------
# single-qubit Cliffords


@dataclass(frozen=True)
class Clifford1:
    """Single-qubit Clifford up to global phase, stored as images of X and Z.

    ``x_image``/``z_image`` are ``(letter, sign)`` pairs: ``C X C^dag = (-1)^s P``.
    """

    x_image: tuple[str, int]
    z_image: tuple[str, int]

    def image(self, letter: str) -> tuple[str, int]:
        if letter == "I":
            return ("I", 0)
        if letter == "X":
            return self.x_image
        if letter == "Z":
            return self.z_image
        # Y = i X Z  ->  C Y C^dag = i (C X C^dag)(C Z C^dag)
        px = PauliRow.from_string(self.x_image[0])
        pz = PauliRow.from_string(self.z_image[0])
        e = (phase_exponent(px, pz) + 1) % 4
        sign = self.x_image[1] ^ self.z_image[1] ^ (e >> 1)
        return (PauliRow(1, px.x ^ pz.x, px.z ^ pz.z).letter(0), sign)

    def then(self, other: "Clifford1") -> "Clifford1":
        """Apply ``self`` first, then ``other``."""

        def push(img: tuple[str, int]) -> tuple[str, int]:
            letter, s = other.image(img[0])
            return (letter, s ^ img[1])

        return Clifford1(push(self.x_image), push(self.z_image))

    def inverse(self) -> "Clifford1":
        for c in _CLIFFORD_GROUP:
            if self.then(c) == IDENTITY_1Q:
                return c
        raise AssertionError("Clifford group table is incomplete")

    def is_identity(self) -> bool:
        return self == IDENTITY_1Q

    def conjugate(self) -> "Clifford1":
        """Entry-wise complex conjugate of the gate (``Y`` is the only imaginary Pauli)."""

        def flip(img: tuple[str, int]) -> tuple[str, int]:
            return (img[0], img[1] ^ (img[0] == "Y"))

        return Clifford1(flip(self.x_image), flip(self.z_image))

    def transpose(self) -> "Clifford1":
        return self.inverse().conjugate()

    def gates(self) -> tuple[str, ...]:
        """Shortest gate word (time order) realising this Clifford up to phase."""
        return _SHORTEST_WORD[self]

    @classmethod
    def from_gates(cls, gates: Iterable[str]) -> "Clifford1":
        c = IDENTITY_1Q
        for g in gates:
            c = c.then(SINGLE_QUBIT_GATES[g])
        return c


IDENTITY_1Q = Clifford1(("X", 0), ("Z", 0))

SINGLE_QUBIT_GATES: dict[str, Clifford1] = {
    "I": IDENTITY_1Q,
    "H": Clifford1(("Z", 0), ("X", 0)),
    "S": Clifford1(("Y", 0), ("Z", 0)),
    "Sdg": Clifford1(("Y", 1), ("Z", 0)),
    "X": Clifford1(("X", 0), ("Z", 1)),
    "Y": Clifford1(("X", 1), ("Z", 1)),
    "Z": Clifford1(("X", 1), ("Z", 0)),
    "SX": Clifford1(("X", 0), ("Y", 1)),
    "SXdg": Clifford1(("X", 0), ("Y", 0)),
}


def _build_group() -> tuple[list[Clifford1], dict[Clifford1, tuple[str, ...]]]:
    # BFS so every element gets a shortest word over the gate alphabet.
    alphabet = ["H", "S", "Sdg", "X", "Y", "Z", "SX", "SXdg"]
    words: dict[Clifford1, tuple[str, ...]] = {IDENTITY_1Q: ()}
    frontier = [IDENTITY_1Q]
    while frontier:
        nxt = []
        for c in frontier:
            for g in alphabet:
                d = c.then(SINGLE_QUBIT_GATES[g])
                if d not in words:
                    words[d] = words[c] + (g,)
                    nxt.append(d)
        frontier = nxt
    return list(words), words


_CLIFFORD_GROUP, _SHORTEST_WORD = _build_group()
assert len(_CLIFFORD_GROUP) == 24


def conjugate_row(row: PauliRow, gate: str | Clifford1, q: int) -> PauliRow:
    """Image ``C row C^dag`` for a single-qubit Clifford ``C`` on qubit ``q``."""
    if not 0 <= q < row.n:
        raise DimensionError(f"qubit {q} outside 0..{row.n - 1}")
    if isinstance(gate, str):
        try:
            gate = SINGLE_QUBIT_GATES[gate]
        except KeyError:
            raise ValueError(f"unknown single-qubit gate {gate!r}") from None
    letter, s = gate.image(row.letter(q))
    xb, zb = _LETTER_BITS[letter]
    bit = 1 << q
    x = (row.x & ~bit) | (xb << q)
    z = (row.z & ~bit) | (zb << q)
    return PauliRow(row.n, x, z, row.sign ^ s)


# --------------------------------------------------------------------------
# check matrices


@dataclass(frozen=True)
class PhasedCheckMatrix:
    """Generators ``(A | B | omega)`` of a stabilizer group with real signs."""

    n: int
    rows: tuple[PauliRow, ...]

    def __post_init__(self):
        for r in self.rows:
            if r.n != self.n:
                raise DimensionError(f"row {r} does not act on {self.n} qubits")

    @classmethod
    def from_rows(cls, rows: Iterable[PauliRow], n: int | None = None) -> "PhasedCheckMatrix":
        rows = tuple(rows)
        if n is None:
            if not rows:
                raise ValueError("cannot infer qubit count from zero rows")
            n = rows[0].n
        return cls(n, rows)

    @classmethod
    def from_strings(cls, strings: Iterable[str], n: int | None = None) -> "PhasedCheckMatrix":
        return cls.from_rows([PauliRow.from_string(s) for s in strings], n)

    @classmethod
    def from_graph(cls, adjacency) -> "PhasedCheckMatrix":
        """``(1 | Gamma)`` with trivial signs; ``adjacency`` is a 0/1 square array."""
        n = len(adjacency)
        rows = []
        for i in range(n):
            z = 0
            for j in range(n):
                if adjacency[i][j]:
                    z |= 1 << j
            rows.append(PauliRow(n, 1 << i, z, 0))
        return cls(n, tuple(rows))

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    def is_pure(self) -> bool:
        return len(self.rows) == self.n

    def x_matrix(self):
        import numpy as np

        return np.array([[(r.x >> j) & 1 for j in range(self.n)] for r in self.rows], dtype=np.uint8).reshape(len(self.rows), self.n)

    def z_matrix(self):
        import numpy as np

        return np.array([[(r.z >> j) & 1 for j in range(self.n)] for r in self.rows], dtype=np.uint8).reshape(len(self.rows), self.n)

    def omega(self) -> tuple[int, ...]:
        return tuple(r.sign for r in self.rows)

    def tensor(self, other: "PhasedCheckMatrix") -> "PhasedCheckMatrix":
        n = self.n + other.n
        left = [r.tensor(PauliRow.identity(other.n)) for r in self.rows]
        right = [PauliRow.identity(self.n).tensor(r) for r in other.rows]
        return PhasedCheckMatrix(n, tuple(left + right))

    def permute_qubits(self, order: Sequence[int]) -> "PhasedCheckMatrix":
        """New qubit ``i`` is old qubit ``order[i]``."""
        if sorted(order) != list(range(self.n)):
            raise ValueError("order must be a permutation of the qubits")
        return PhasedCheckMatrix(self.n, tuple(r.restrict(order) for r in self.rows))

    def is_valid(self) -> bool:
        """Rows commute, are independent, and never generate -identity."""
        rows = self.rows
        for i in range(len(rows)):
            for j in range(i + 1, len(rows)):
                if not commutes(rows[i], rows[j]):
                    return False
        return gf2_rank([r.bits() for r in rows]) == len(rows)

    # serialisation ---------------------------------------------------------

    def to_text(self) -> str:
        return "".join(r.to_string() + "\n" for r in self.rows)

    @classmethod
    def from_text(cls, text: str) -> "PhasedCheckMatrix":
        rows = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rows.append(PauliRow.from_string(line))
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
        if not rows:
            raise ValueError("no generators found")
        n = rows[0].n
        for lineno, r in enumerate(rows, 1):
            if r.n != n:
                raise DimensionError(f"generator {lineno} has {r.n} qubits, expected {n}")
        return cls(n, tuple(rows))

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "rows": [
                {"x": [(r.x >> j) & 1 for j in range(self.n)],
                 "z": [(r.z >> j) & 1 for j in range(self.n)],
                 "sign": r.sign}
                for r in self.rows
            ],
            "generators": [r.to_string() for r in self.rows],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PhasedCheckMatrix":
        n = int(data["n"])
        rows = []
        for item in data["rows"]:
            x = sum(int(b) << j for j, b in enumerate(item["x"]))
            z = sum(int(b) << j for j, b in enumerate(item["z"]))
            rows.append(PauliRow(n, x, z, int(item["sign"])))
        return cls(n, tuple(rows))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_json(cls, text: str) -> "PhasedCheckMatrix":
        return cls.from_dict(json.loads(text))


def gf2_rank(vectors: Iterable[int]) -> int:
    """Rank of integer bit vectors over GF(2)."""
    basis: dict[int, int] = {}  # leading bit -> vector
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top in basis:
                v ^= basis[top]
            else:
                basis[top] = v
                break
    return len(basis)


def conjugate_single_clifford(mat: PhasedCheckMatrix, gate: str | Clifford1, q: int) -> PhasedCheckMatrix:
    if not 0 <= q < mat.n:
        raise DimensionError(f"qubit {q} outside 0..{mat.n - 1}")
    return PhasedCheckMatrix(mat.n, tuple(conjugate_row(r, gate, q) for r in mat.rows))


def _column_bit(row: PauliRow, col: int) -> int:
    if col < row.n:
        return (row.x >> col) & 1
    return (row.z >> (col - row.n)) & 1


def _rref(rows: list[PauliRow], columns: Sequence[int]) -> tuple[list[PauliRow], list[int]]:
    rows = list(rows)
    pivots: list[int] = []
    r = 0
    for col in columns:
        if r == len(rows):
            break
        piv = next((i for i in range(r, len(rows)) if _column_bit(rows[i], col)), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and _column_bit(rows[i], col):
                rows[i] = multiply(rows[i], rows[r])
        pivots.append(col)
        r += 1
    return rows, pivots


def row_reduce(mat: PhasedCheckMatrix, columns: Sequence[int] | None = None) -> PhasedCheckMatrix:
    """Reduced row-echelon form under the given column order.

    Columns ``0..n-1`` address the X-part and ``n..2n-1`` the Z-part.  The
    default order is every X column then every Z column.  Pivot ties go to
    the lowest row index; signs follow the operator products.
    """
    if columns is None:
        columns = range(2 * mat.n)
    rows, _ = _rref(list(mat.rows), list(columns))
    return PhasedCheckMatrix(mat.n, tuple(rows))


def _reduce_by(row: PauliRow, reduced: Sequence[PauliRow], pivots: Sequence[int]) -> PauliRow:
    for prow, col in zip(reduced, pivots):
        if _column_bit(row, col):
            row = multiply(row, prow)
    return row


def in_group(mat: PhasedCheckMatrix, row: PauliRow) -> bool:
    """Whether ``row`` (sign included) is an element of the generated group."""
    if row.n != mat.n:
        raise DimensionError("row and matrix act on different qubit counts")
    if not all(commutes(row, g) for g in mat.rows):
        return False
    reduced, pivots = _rref(list(mat.rows), range(2 * mat.n))
    rest = _reduce_by(row, reduced, pivots)
    return rest.is_identity() and rest.sign == 0


def same_group(m1: PhasedCheckMatrix, m2: PhasedCheckMatrix) -> bool:
    """Both matrices generate the same signed group."""
    if m1.n != m2.n:
        return False
    r1 = gf2_rank(r.bits() for r in m1.rows)
    r2 = gf2_rank(r.bits() for r in m2.rows)
    if r1 != r2:
        return False
    return all(in_group(m1, r) for r in m2.rows)


def contains_minus_identity(rows: Sequence[PauliRow]) -> bool:
    """True if the rows (assumed pairwise commuting) generate ``-1``."""
    if not rows:
        return False
    reduced, pivots = _rref(list(rows), range(2 * rows[0].n))
    return any(r.is_identity() and r.sign for r in reduced)
