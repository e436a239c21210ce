"""Graph states and the conversion of stabilizer states into graph form.

A pure stabilizer state with real amplitudes becomes a graph state after one
layer of Hadamards followed by one layer of Z gates: row-reduce the X-part,
put H on the non-pivot qubits, and fix the remaining signs with Z.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .circuits import CliffordCircuit, Gate
from .symplectic import PauliRow, PhasedCheckMatrix, _rref, conjugate_row, same_group

__all__ = [
    "GraphState",
    "ConversionRecord",
    "NotGraphableError",
    "to_graph_state",
    "graphify_with_hadamards",
    "verify_conversion",
]

ROLES = ("boundary", "bulk", "cut", "other")
_DOT_COLORS = {"boundary": "gold", "bulk": "red", "cut": "black", "other": "gray"}


class NotGraphableError(ValueError):
    """No Hadamard+Z layer maps the state to a graph state."""


@dataclass(frozen=True)
class GraphState:
    """Graph state on named vertices.

    ``nbrs[v]`` is the neighbourhood of vertex ``v`` as a bitmask.
    ``embedding`` optionally gives each vertex an angle (in turns) on a disc.
    """

    nbrs: tuple[int, ...]
    names: tuple[str, ...]
    roles: tuple[str, ...]
    embedding: tuple[float, ...] | None = None

    def __post_init__(self):
        n = len(self.nbrs)
        if len(self.names) != n or len(self.roles) != n:
            raise ValueError("names/roles must have one entry per vertex")
        if len(set(self.names)) != n:
            raise ValueError("vertex names must be unique")
        for v, mask in enumerate(self.nbrs):
            if (mask >> v) & 1:
                raise ValueError(f"self-loop at vertex {self.names[v]}")
            if mask >> n:
                raise ValueError("neighbour mask out of range")
            for u in _bits(mask):
                if not (self.nbrs[u] >> v) & 1:
                    raise ValueError("adjacency is not symmetric")
        for r in self.roles:
            if r not in ROLES:
                raise ValueError(f"unknown role {r!r}")
        if self.embedding is not None and len(self.embedding) != n:
            raise ValueError("embedding must give one angle per vertex")

    # construction ----------------------------------------------------------

    @classmethod
    def from_edges(
        cls,
        names: Sequence[str] | int,
        edges: Iterable[tuple],
        roles: Sequence[str] | None = None,
        embedding: Sequence[float] | None = None,
    ) -> "GraphState":
        """Edges may reference vertices by index or by name."""
        if isinstance(names, int):
            names = [str(i) for i in range(names)]
        names = tuple(str(s) for s in names)
        index = {s: i for i, s in enumerate(names)}
        nbrs = [0] * len(names)
        for a, b in edges:
            u = a if isinstance(a, int) else index[str(a)]
            v = b if isinstance(b, int) else index[str(b)]
            if u == v:
                raise ValueError(f"self-loop at {a}")
            nbrs[u] |= 1 << v
            nbrs[v] |= 1 << u
        roles = tuple(roles) if roles is not None else ("other",) * len(names)
        return cls(tuple(nbrs), names, roles, tuple(embedding) if embedding is not None else None)

    @classmethod
    def from_adjacency(cls, adjacency, names=None, roles=None, embedding=None) -> "GraphState":
        adj = np.asarray(adjacency, dtype=np.uint8)
        n = adj.shape[0]
        if adj.shape != (n, n) or np.any(adj != adj.T) or np.any(np.diag(adj)):
            raise ValueError("adjacency must be symmetric with zero diagonal")
        edges = [(i, j) for i in range(n) for j in range(i + 1, n) if adj[i, j]]
        return cls.from_edges(names if names is not None else n, edges, roles, embedding)

    # queries ---------------------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.nbrs)

    def index(self, name: str) -> int:
        return self.names.index(str(name))

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in _bits(self.nbrs[u]) if u < v]

    def named_edges(self) -> list[tuple[str, str]]:
        return [(self.names[u], self.names[v]) for u, v in self.edges()]

    @property
    def num_edges(self) -> int:
        return sum(m.bit_count() for m in self.nbrs) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.nbrs[u] >> v) & 1)

    def neighbours(self, v: int) -> list[int]:
        return list(_bits(self.nbrs[v]))

    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.n, self.n), dtype=np.uint8)
        for u, v in self.edges():
            adj[u, v] = adj[v, u] = 1
        return adj

    def vertices(self, role: str) -> list[int]:
        return [v for v, r in enumerate(self.roles) if r == role]

    def check_matrix(self) -> PhasedCheckMatrix:
        """Generators ``X_v Z^{N(v)}``, all signs +."""
        n = self.n
        return PhasedCheckMatrix(n, tuple(PauliRow(n, 1 << v, self.nbrs[v]) for v in range(n)))

    def same_graph(self, other: "GraphState") -> bool:
        return self.nbrs == other.nbrs

    def chord(self, u: int, v: int) -> float:
        """Circular distance (in turns) between two vertices of the embedding."""
        if self.embedding is None:
            raise ValueError("graph has no embedding")
        d = abs(self.embedding[u] - self.embedding[v]) % 1.0
        return min(d, 1.0 - d)

    def max_chord(self) -> float:
        return max((self.chord(u, v) for u, v in self.edges()), default=0.0)

    def center_crossings(self, tol: float = 1e-9) -> int:
        """Edges whose endpoints sit at opposite points of the disc."""
        return sum(1 for u, v in self.edges() if self.chord(u, v) >= 0.5 - tol)

    # transforms ------------------------------------------------------------

    def with_nbrs(self, nbrs: Sequence[int]) -> "GraphState":
        return GraphState(tuple(nbrs), self.names, self.roles, self.embedding)

    def with_embedding(self, embedding: Sequence[float] | None) -> "GraphState":
        return GraphState(self.nbrs, self.names, self.roles, tuple(embedding) if embedding else None)

    def permute(self, perm: Sequence[int]) -> "GraphState":
        """Move the graph structure of vertex ``v`` onto vertex ``perm[v]``.

        Names, roles and embedding stay attached to the vertex slots.
        """
        nbrs = [0] * self.n
        for v in range(self.n):
            for u in _bits(self.nbrs[v]):
                nbrs[perm[v]] |= 1 << perm[u]
        return self.with_nbrs(nbrs)

    def subgraph(self, vertices: Sequence[int]) -> "GraphState":
        keep = list(vertices)
        pos = {v: i for i, v in enumerate(keep)}
        edges = [(pos[u], pos[v]) for u, v in self.edges() if u in pos and v in pos]
        emb = [self.embedding[v] for v in keep] if self.embedding is not None else None
        return GraphState.from_edges(
            [self.names[v] for v in keep], edges, [self.roles[v] for v in keep], emb
        )

    # export ----------------------------------------------------------------

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        for v in range(self.n):
            color = _DOT_COLORS[self.roles[v]]
            lines.append(f'  "{self.names[v]}" [style=filled, fillcolor={color}];')
        for u, v in self.edges():
            lines.append(f'  "{self.names[u]}" -- "{self.names[v]}";')
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        data = {
            "vertices": [{"name": s, "role": r} for s, r in zip(self.names, self.roles)],
            "edges": [list(e) for e in self.edges()],
        }
        if self.embedding is not None:
            data["embedding"] = list(self.embedding)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "GraphState":
        names = [v["name"] for v in data["vertices"]]
        roles = [v.get("role", "other") for v in data["vertices"]]
        edges = [tuple(e) for e in data["edges"]]
        return cls.from_edges(names, edges, roles, data.get("embedding"))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_json(cls, text: str) -> "GraphState":
        return cls.from_dict(json.loads(text))


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class ConversionRecord:
    """H on ``hadamard_set`` followed by Z on ``z_set`` maps the input state to the graph."""

    hadamard_set: frozenset[int]
    z_set: frozenset[int]

    def apply(self, state: PhasedCheckMatrix) -> PhasedCheckMatrix:
        rows = []
        for r in state.rows:
            for q in sorted(self.hadamard_set):
                r = conjugate_row(r, "H", q)
            for q in sorted(self.z_set):
                r = conjugate_row(r, "Z", q)
            rows.append(r)
        return PhasedCheckMatrix(state.n, tuple(rows))

    def circuit(self, names: Sequence[str], roles: Sequence[str]) -> CliffordCircuit:
        gates = [Gate("H", (names[q],)) for q in sorted(self.hadamard_set)]
        gates += [Gate("Z", (names[q],)) for q in sorted(self.z_set)]
        return CliffordCircuit(tuple(gates), dict(zip(names, roles)))

    def to_dict(self) -> dict:
        return {"hadamard": sorted(self.hadamard_set), "z": sorted(self.z_set)}

    @classmethod
    def from_dict(cls, data: dict) -> "ConversionRecord":
        return cls(frozenset(data["hadamard"]), frozenset(data["z"]))


def _default_names(m: int, names, roles):
    names = tuple(names) if names is not None else tuple(str(i) for i in range(m))
    roles = tuple(roles) if roles is not None else ("other",) * m
    return names, roles


def graphify_with_hadamards(
    state: PhasedCheckMatrix,
    hadamard_set: Iterable[int],
    names: Sequence[str] | None = None,
    roles: Sequence[str] | None = None,
) -> tuple[GraphState, ConversionRecord]:
    """Graphify using a caller-chosen Hadamard layer.

    Raises :class:`NotGraphableError` if the X-part is singular after the
    Hadamards or if a diagonal entry would be needed (a Y on a pivot).
    """
    m = state.n
    if not state.is_pure():
        raise ValueError("graphification needs a pure state")
    hs = frozenset(hadamard_set)
    staged = ConversionRecord(hs, frozenset()).apply(state)
    reduced, pivots = _rref(list(staged.rows), range(m))
    if pivots != list(range(m)):
        raise NotGraphableError("X-part is singular after the Hadamard layer")
    nbrs = []
    zs = set()
    for i, r in enumerate(reduced):
        if r.num_y % 2:
            raise NotGraphableError(
                "state has imaginary amplitudes; a phase gate would be required"
            )
        nbrs.append(r.z)
        if r.sign:
            zs.add(i)
    for i in range(m):
        if (nbrs[i] >> i) & 1:
            raise NotGraphableError("diagonal entry in the adjacency")
    names, roles = _default_names(m, names, roles)
    graph = GraphState(tuple(nbrs), names, roles)  # symmetry is checked here
    return graph, ConversionRecord(hs, frozenset(zs))


def to_graph_state(
    state: PhasedCheckMatrix,
    pivot_order: Sequence[int] | None = None,
    names: Sequence[str] | None = None,
    roles: Sequence[str] | None = None,
) -> tuple[GraphState, ConversionRecord]:
    """Map a pure stabilizer state to a graph state with one H and one Z layer.

    Pivots of the X-part are chosen in ``pivot_order`` (default: qubit
    order); the non-pivot qubits receive the Hadamards.
    """
    m = state.n
    order = list(pivot_order) if pivot_order is not None else list(range(m))
    if sorted(order) != list(range(m)):
        raise ValueError("pivot_order must be a permutation of the qubits")
    _, pivots = _rref(list(state.rows), order)
    hs = [q for q in range(m) if q not in pivots]
    return graphify_with_hadamards(state, hs, names, roles)


def verify_conversion(state: PhasedCheckMatrix, graph: GraphState, record: ConversionRecord) -> bool:
    """Whether the record's gates map ``state`` onto ``graph`` (signs included)."""
    if state.n != graph.n:
        return False
    return same_group(record.apply(state), graph.check_matrix())
