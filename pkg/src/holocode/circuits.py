"""Clifford circuits over named qubits, with a line-oriented text format.

Text format::

    # holocode circuit v1
    bulk bA bB
    boundary q1 q2 q3
    H bA
    CZ q1 q2
    CX bA q3

Qubit tokens carry a role prefix (``q`` boundary, ``b`` bulk, ``c`` cut,
``a`` anything else).  Gates are listed in time order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

from .symplectic import Clifford1

__all__ = ["Gate", "CliffordCircuit", "ROLE_PREFIX", "GATE_ARITY", "local_layer"]

GATE_ARITY = {
    "H": 1, "S": 1, "Sdg": 1, "X": 1, "Y": 1, "Z": 1, "SX": 1, "SXdg": 1,
    "CZ": 2, "CX": 2,
}
_INVERSE = {"S": "Sdg", "Sdg": "S", "SX": "SXdg", "SXdg": "SX"}
# complex conjugate of each gate matrix, up to global phase
_CONJUGATE = {"S": "Sdg", "Sdg": "S", "SX": "SXdg", "SXdg": "SX"}

ROLE_PREFIX = {"boundary": "q", "bulk": "b", "cut": "c", "other": "a"}
_PREFIX_ROLE = {v: k for k, v in ROLE_PREFIX.items()}
_ROLE_ORDER = ("bulk", "cut", "boundary", "other")


@dataclass(frozen=True)
class Gate:
    name: str
    qubits: tuple[str, ...]

    def __post_init__(self):
        if self.name not in GATE_ARITY:
            raise ValueError(f"unknown gate {self.name!r}")
        if len(self.qubits) != GATE_ARITY[self.name]:
            raise ValueError(f"{self.name} takes {GATE_ARITY[self.name]} qubit(s)")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.name} on repeated qubit {self.qubits}")

    def inverse(self) -> "Gate":
        return Gate(_INVERSE.get(self.name, self.name), self.qubits)


@dataclass(frozen=True)
class CliffordCircuit:
    """Ordered gate list on named qubits; ``roles`` maps each name to its role."""

    gates: tuple[Gate, ...] = ()
    roles: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "roles", dict(self.roles))
        for g in self.gates:
            for q in g.qubits:
                if q not in self.roles:
                    raise ValueError(f"gate {g.name} references undeclared qubit {q!r}")

    @property
    def qubits(self) -> tuple[str, ...]:
        return tuple(self.roles)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def then(self, other: "CliffordCircuit") -> "CliffordCircuit":
        """``self`` followed by ``other``."""
        roles = dict(self.roles)
        for q, r in other.roles.items():
            if q in roles and roles[q] != r:
                raise ValueError(f"qubit {q!r} declared as both {roles[q]} and {r}")
            roles.setdefault(q, r)
        return CliffordCircuit(self.gates + other.gates, roles)

    def inverse(self) -> "CliffordCircuit":
        return CliffordCircuit(tuple(g.inverse() for g in reversed(self.gates)), self.roles)

    def conjugate(self) -> "CliffordCircuit":
        """Entry-wise complex conjugate (up to global phase)."""
        return CliffordCircuit(
            tuple(Gate(_CONJUGATE.get(g.name, g.name), g.qubits) for g in self.gates), self.roles
        )

    def transpose(self) -> "CliffordCircuit":
        return self.conjugate().inverse()

    def without(self, index: int) -> "CliffordCircuit":
        gates = list(self.gates)
        del gates[index]
        return CliffordCircuit(tuple(gates), self.roles)

    def relabel(self, mapping: Mapping[str, str], roles: Mapping[str, str] | None = None) -> "CliffordCircuit":
        """Rename qubits; unmapped names are kept."""
        new_roles: dict[str, str] = {}
        for q, r in self.roles.items():
            new = mapping.get(q, q)
            new_roles[new] = (roles or {}).get(new, r)
        gates = tuple(Gate(g.name, tuple(mapping.get(q, q) for q in g.qubits)) for g in self.gates)
        return CliffordCircuit(gates, new_roles)

    def count(self, arity: int | None = None) -> int:
        if arity is None:
            return len(self.gates)
        return sum(1 for g in self.gates if GATE_ARITY[g.name] == arity)

    def two_qubit_pairs(self, name: str = "CZ") -> list[tuple[str, str]]:
        return [g.qubits for g in self.gates if g.name == name]

    # text / json -----------------------------------------------------------

    def _token(self, q: str) -> str:
        return ROLE_PREFIX.get(self.roles[q], "a") + q

    def to_text(self) -> str:
        lines = ["# holocode circuit v1"]
        for role in _ROLE_ORDER:
            names = [q for q, r in self.roles.items() if r == role]
            if names:
                lines.append(role + " " + " ".join(self._token(q) for q in names))
        for g in self.gates:
            lines.append(g.name + " " + " ".join(self._token(q) for q in g.qubits))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "CliffordCircuit":
        roles: dict[str, str] = {}
        gates: list[Gate] = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head, *tokens = line.split()
            try:
                if head in ROLE_PREFIX:
                    for tok in tokens:
                        if _PREFIX_ROLE.get(tok[0]) != head:
                            raise ValueError(f"token {tok!r} does not carry the {head} prefix")
                        roles[tok[1:]] = head
                    continue
                names = []
                for tok in tokens:
                    if tok[0] not in _PREFIX_ROLE or tok[1:] not in roles:
                        raise ValueError(f"undeclared qubit {tok!r}")
                    names.append(tok[1:])
                gates.append(Gate(head, tuple(names)))
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
        return cls(tuple(gates), roles)

    def to_dict(self) -> dict:
        return {
            "qubits": [{"name": q, "role": r} for q, r in self.roles.items()],
            "gates": [[g.name, *g.qubits] for g in self.gates],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CliffordCircuit":
        roles = {item["name"]: item["role"] for item in data["qubits"]}
        gates = tuple(Gate(g[0], tuple(g[1:])) for g in data["gates"])
        return cls(gates, roles)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_json(cls, text: str) -> "CliffordCircuit":
        return cls.from_dict(json.loads(text))


def local_layer(cliffords: Mapping[str, Clifford1], roles: Mapping[str, str]) -> CliffordCircuit:
    """Circuit applying one single-qubit Clifford per named qubit."""
    gates = []
    for q, c in cliffords.items():
        gates.extend(Gate(g, (q,)) for g in c.gates())
    return CliffordCircuit(tuple(gates), roles)

