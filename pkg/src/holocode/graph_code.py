"""Graph codes: a graph state read as an isometry from bulk to boundary.

With the adjacency split into bulk/boundary blocks, the logical zero is the
boundary subgraph, ``X_r`` is ``Z`` on the boundary neighbours of bulk
vertex ``r``, and ``Z_r`` and the code generators are products of boundary
vertex generators whose bulk footprint is ``Z_r`` or trivial.  All signs
come from exact Pauli products.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graphification import GraphState
from .symplectic import PauliRow, commutes, gf2_rank, multiply

__all__ = [
    "RankError",
    "GraphCode",
    "LogicalSet",
    "partition",
    "logical_zero_edges",
    "logical_x",
    "extract_logicals",
    "reduce_weight",
    "check_relations",
]


class RankError(ValueError):
    """The bulk/boundary split is not maximally entangled (rank(B) < k)."""


@dataclass(frozen=True)
class GraphCode:
    graph: GraphState
    bulk: tuple[int, ...]
    boundary: tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.bulk)

    @property
    def n(self) -> int:
        return len(self.boundary)

    def block_b(self) -> np.ndarray:
        """k x n bulk-to-boundary incidence."""
        adj = self.graph.adjacency()
        return adj[np.ix_(self.bulk, self.boundary)]

    def block_bulk(self) -> np.ndarray:
        adj = self.graph.adjacency()
        return adj[np.ix_(self.bulk, self.bulk)]

    def block_boundary(self) -> np.ndarray:
        adj = self.graph.adjacency()
        return adj[np.ix_(self.boundary, self.boundary)]

    def bulk_names(self) -> list[str]:
        return [self.graph.names[v] for v in self.bulk]

    def boundary_names(self) -> list[str]:
        return [self.graph.names[v] for v in self.boundary]

    def bulk_edges(self) -> list[tuple[int, int]]:
        """Bulk-bulk edges as positions in ``bulk``."""
        pos = {v: i for i, v in enumerate(self.bulk)}
        return [(pos[u], pos[v]) for u, v in self.graph.edges() if u in pos and v in pos]

    def boundary_row(self, v: int) -> PauliRow:
        """Generator of graph vertex ``v`` as a full-length row."""
        g = self.graph
        return PauliRow(g.n, 1 << v, g.nbrs[v])

    def restrict_boundary(self, row: PauliRow) -> PauliRow:
        return row.restrict(self.boundary)


def partition(g: GraphState, bulk: Sequence[int | str]) -> GraphCode:
    """Split ``g`` into bulk (given order) and boundary (remaining, graph order)."""
    idx = [v if isinstance(v, int) else g.index(v) for v in bulk]
    if len(set(idx)) != len(idx):
        raise ValueError("repeated bulk vertex")
    boundary = tuple(v for v in range(g.n) if v not in idx)
    code = GraphCode(g, tuple(idx), boundary)
    b = code.block_b()
    rank = gf2_rank(int("".join(str(int(x)) for x in row) or "0", 2) for row in b)
    if rank < len(idx):
        raise RankError(f"rank(B) = {rank} < k = {len(idx)}; the partition is not a code")
    return code


def logical_zero_edges(code: GraphCode) -> list[tuple[int, int]]:
    """Boundary-boundary edges (graph vertex indices)."""
    bnd = set(code.boundary)
    return [(u, v) for u, v in code.graph.edges() if u in bnd and v in bnd]


def logical_x(code: GraphCode) -> list[PauliRow]:
    """``X_r = Z^{B_r}`` on the boundary, sign +."""
    out = []
    for r in code.bulk:
        row = PauliRow(code.graph.n, 0, code.graph.nbrs[r])
        out.append(code.restrict_boundary(row).with_sign(0))
    return out


@dataclass(frozen=True)
class LogicalSet:
    """Boundary operators of a graph code, all as signed Pauli rows on ``n`` qubits."""

    generators: tuple[PauliRow, ...]
    logical_z: tuple[PauliRow, ...]
    logical_x: tuple[PauliRow, ...]
    exhaustive: bool = True  # False if a weight search fell back to greedy descent

    @property
    def n(self) -> int:
        rows = self.generators + self.logical_z + self.logical_x
        return rows[0].n if rows else 0

    def to_text(self, bulk_names: Sequence[str] | None = None) -> str:
        lines = ["[generators]"]
        lines += [r.to_string() for r in self.generators]
        for title, rows in (("[logical_z]", self.logical_z), ("[logical_x]", self.logical_x)):
            lines.append(title)
            for i, r in enumerate(rows):
                lines.append(r.to_string() if bulk_names is None else f"{bulk_names[i]} {r.to_string()}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "LogicalSet":
        sections: dict[str, list[PauliRow]] = {"generators": [], "logical_z": [], "logical_x": []}
        current = None
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("["):
                current = line.strip("[]")
                if current not in sections:
                    raise ValueError(f"line {lineno}: unknown section {line}")
                continue
            if current is None:
                raise ValueError(f"line {lineno}: operator outside a section")
            token = line.split()[-1]
            try:
                sections[current].append(PauliRow.from_string(token))
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
        return cls(tuple(sections["generators"]), tuple(sections["logical_z"]), tuple(sections["logical_x"]))


def _solve_columns(b: np.ndarray) -> list[int]:
    """Greedy leftmost set of k linearly independent columns of ``b``."""
    chosen: list[int] = []
    basis: dict[int, int] = {}
    if b.shape[0] == 0:
        return chosen
    for c in range(b.shape[1]):
        v = int("".join(str(int(x)) for x in b[:, c]), 2)
        while v:
            top = v.bit_length() - 1
            if top in basis:
                v ^= basis[top]
            else:
                basis[top] = v
                chosen.append(c)
                break
        if len(chosen) == b.shape[0]:
            break
    return chosen


def _gf2_inverse(m: np.ndarray) -> np.ndarray:
    k = m.shape[0]
    aug = np.concatenate([m.astype(np.uint8) % 2, np.eye(k, dtype=np.uint8)], axis=1)
    for c in range(k):
        piv = next(r for r in range(c, k) if aug[r, c])
        aug[[c, piv]] = aug[[piv, c]]
        for r in range(k):
            if r != c and aug[r, c]:
                aug[r] ^= aug[c]
    return aug[:, k:]


def _product(code: GraphCode, vertices: Sequence[int]) -> PauliRow:
    row = PauliRow.identity(code.graph.n)
    for v in vertices:
        row = multiply(row, code.boundary_row(v))
    return row


def extract_logicals(code: GraphCode) -> LogicalSet:
    """Code generators and logical Z/X on the boundary.

    ``B2`` is the greedy leftmost invertible set of boundary columns; each
    ``Z_r`` is the product of the boundary generators selected by column
    ``r`` of ``B2^-1``, and each code generator pairs one non-``B2`` column
    with the ``B2`` columns that cancel its bulk footprint.
    """
    b = code.block_b()
    cols2 = _solve_columns(b)
    if len(cols2) < code.k:
        raise RankError("rank(B) < k")
    cols1 = [c for c in range(code.n) if c not in cols2]
    inv = _gf2_inverse(b[:, cols2])  # B2^-1

    zs = []
    for r in range(code.k):
        sel = [code.boundary[cols2[i]] for i in range(code.k) if inv[i, r]]
        full = _product(code, sel)
        zs.append(code.restrict_boundary(full))
    gens = []
    for c in cols1:
        y = inv @ b[:, c] % 2
        sel = [code.boundary[c]] + [code.boundary[cols2[i]] for i in range(code.k) if y[i]]
        gens.append(code.restrict_boundary(_product(code, sel)))
    return LogicalSet(tuple(gens), tuple(zs), tuple(logical_x(code)))


def check_relations(ls: LogicalSet) -> list[str]:
    """Return a list of violated commutation relations (empty when all hold)."""
    problems = []
    g, z, x = ls.generators, ls.logical_z, ls.logical_x
    for i in range(len(g)):
        for j in range(i + 1, len(g)):
            if not commutes(g[i], g[j]):
                problems.append(f"generators {i},{j} anticommute")
    for i, s in enumerate(g):
        for name, rows in (("Z", z), ("X", x)):
            for j, r in enumerate(rows):
                if not commutes(s, r):
                    problems.append(f"generator {i} anticommutes with {name}{j}")
    for i in range(len(z)):
        for j in range(len(x)):
            if (i == j) == commutes(z[i], x[j]):
                problems.append(f"Z{i}/X{j} has the wrong commutation")
        for j in range(i + 1, len(z)):
            if not commutes(z[i], z[j]):
                problems.append(f"Z{i},Z{j} anticommute")
            if not commutes(x[i], x[j]):
                problems.append(f"X{i},X{j} anticommute")
    if len(g) + len(z) > 0 and gf2_rank(r.bits() for r in g) != len(g):
        problems.append("generators are dependent")
    return problems


def _sort_key(row: PauliRow) -> tuple:
    return (row.weight, row.to_string()[1:])


def _group_elements(gens: Sequence[PauliRow]) -> list[PauliRow]:
    elems = [PauliRow.identity(gens[0].n)] if gens else []
    for g in gens:
        elems = elems + [multiply(e, g) for e in elems]
    return elems


def _descend(row: PauliRow, gens: Sequence[PauliRow]) -> PauliRow:
    improved = True
    while improved:
        improved = False
        for g in gens:
            cand = multiply(row, g)
            if _sort_key(cand) < _sort_key(row):
                row, improved = cand, True
    return row


def reduce_weight(ls: LogicalSet, exhaustive_limit: int = 16) -> LogicalSet:
    """Lowest-weight representatives modulo the code generators.

    Logicals are searched over the full generator group when it has at most
    ``2**exhaustive_limit`` elements; otherwise a greedy descent is used and
    the result is flagged.  Ties go to the lexicographically least string.
    The generators are replaced by a minimal-weight generating set.
    """
    gens = ls.generators
    if not gens:
        return ls
    if len(gens) > exhaustive_limit:
        zs = tuple(_descend(r, gens) for r in ls.logical_z)
        xs = tuple(_descend(r, gens) for r in ls.logical_x)
        return LogicalSet(gens, zs, xs, exhaustive=False)
    elems = _group_elements(gens)
    elems_sorted = sorted(elems[1:], key=_sort_key)
    new_gens: list[PauliRow] = []
    basis: list[int] = []
    for e in elems_sorted:
        if gf2_rank(basis + [e.bits()]) > len(basis):
            basis.append(e.bits())
            new_gens.append(e)
            if len(new_gens) == len(gens):
                break

    def best(row: PauliRow) -> PauliRow:
        return min((multiply(row, e) for e in elems), key=_sort_key)

    return LogicalSet(
        tuple(new_gens),
        tuple(best(r) for r in ls.logical_z),
        tuple(best(r) for r in ls.logical_x),
    )
