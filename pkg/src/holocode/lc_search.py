"""Local-complementation orbits of graph states.

Complementing at ``v`` toggles every edge inside ``N(v)``.  On states this
is the local Clifford ``SX`` on ``v`` and ``Sdg`` on each neighbour, so every
orbit member carries an exact per-vertex Clifford witness from the start
graph.

Orbits of boundary-sized graphs are far too large to enumerate, so the
searches here also use a Hadamard sweep: for every vertex subset ``S`` whose
induced adjacency block is invertible, ``H`` on ``S`` followed by Pauli
fixes lands on another graph state of the same orbit.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .circuits import CliffordCircuit, local_layer
from .graphification import GraphState, graphify_with_hadamards
from .symplectic import IDENTITY_1Q, SINGLE_QUBIT_GATES, Clifford1, _CLIFFORD_GROUP, same_group

__all__ = [
    "local_complement",
    "apply_local",
    "OrbitMember",
    "Orbit",
    "explore_orbit",
    "minimize",
    "lc_equivalent",
    "rotation_symmetries",
    "hadamard_sweep",
    "DEFAULT_BUDGET",
    "SWEEP_LIMIT",
]

DEFAULT_BUDGET = 50_000
SWEEP_LIMIT = 18  # largest vertex count for the 2^n Hadamard sweep

# Clifford group indexed 0..23 with a composition table
_GROUP = list(_CLIFFORD_GROUP)
_INDEX = {c: i for i, c in enumerate(_GROUP)}
_ID = _INDEX[IDENTITY_1Q]
_THEN = [[_INDEX[a.then(b)] for b in _GROUP] for a in _GROUP]
_INV = [_INDEX[c.inverse()] for c in _GROUP]
_SX = _INDEX[SINGLE_QUBIT_GATES["SX"]]
_SDG = _INDEX[SINGLE_QUBIT_GATES["Sdg"]]
_H = _INDEX[SINGLE_QUBIT_GATES["H"]]
_Z = _INDEX[SINGLE_QUBIT_GATES["Z"]]
_HZ = _THEN[_H][_Z]


def _lc(nbrs: Sequence[int], v: int) -> tuple[int, ...]:
    out = list(nbrs)
    hood = nbrs[v]
    m = hood
    while m:
        low = m & -m
        u = low.bit_length() - 1
        out[u] ^= hood & ~low
        m ^= low
    return tuple(out)


def _lc_witness(word: bytes, nbrs: Sequence[int], v: int) -> bytes:
    w = bytearray(word)
    w[v] = _THEN[w[v]][_SX]
    m = nbrs[v]
    while m:
        low = m & -m
        u = low.bit_length() - 1
        w[u] = _THEN[w[u]][_SDG]
        m ^= low
    return bytes(w)


def _circuit(word: bytes, g: GraphState) -> CliffordCircuit:
    layer = {g.names[q]: _GROUP[c] for q, c in enumerate(word) if c != _ID}
    return local_layer(layer, dict(zip(g.names, g.roles)))


def _compose(first: bytes, second: bytes) -> bytes:
    return bytes(_THEN[a][b] for a, b in zip(first, second))


def _invert(word: bytes) -> bytes:
    return bytes(_INV[a] for a in word)


def local_complement(g: GraphState, v: int) -> tuple[GraphState, CliffordCircuit]:
    """Complement at ``v``; the circuit maps ``|g>`` to the new graph state."""
    if not 0 <= v < g.n:
        raise ValueError(f"vertex {v} out of range")
    word = _lc_witness(bytes([_ID] * g.n), g.nbrs, v)
    return g.with_nbrs(_lc(g.nbrs, v)), _circuit(word, g)


def apply_local(g: GraphState, cliffords: Sequence[Clifford1]):
    """Conjugate the graph's generators by one Clifford per vertex."""
    from .symplectic import PhasedCheckMatrix, conjugate_row

    rows = []
    for r in g.check_matrix().rows:
        for q, c in enumerate(cliffords):
            if c != IDENTITY_1Q:
                r = conjugate_row(r, c, q)
        rows.append(r)
    return PhasedCheckMatrix(g.n, tuple(rows))


def rotation_symmetries(g: GraphState, steps: Sequence[int] | None = None, tol: float = 1e-9) -> list[tuple[int, ...]]:
    """Vertex permutations that rotate the embedding onto itself and keep roles.

    ``steps`` are the candidate rotation angles (in turns); by default every
    angle that maps some boundary vertex onto another is tried.
    """
    if g.embedding is None:
        return [tuple(range(g.n))]
    emb = g.embedding
    if steps is None:
        bnd = g.vertices("boundary") or list(range(g.n))
        steps = sorted({round((emb[u] - emb[bnd[0]]) % 1.0, 12) for u in bnd})
    perms = []
    for s in steps:
        perm = []
        for v in range(g.n):
            target = (emb[v] + s) % 1.0
            match = [
                u for u in range(g.n)
                if g.roles[u] == g.roles[v] and min(abs(emb[u] - target), 1 - abs(emb[u] - target)) < tol
            ]
            if len(match) != 1:
                break
            perm.append(match[0])
        else:
            if len(set(perm)) == g.n:
                perms.append(tuple(perm))
    return perms or [tuple(range(g.n))]


def _permute(nbrs: Sequence[int], perm: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(nbrs)
    for v, mask in enumerate(nbrs):
        m = mask
        acc = 0
        while m:
            low = m & -m
            acc |= 1 << perm[low.bit_length() - 1]
            m ^= low
        out[perm[v]] = acc
    return tuple(out)


def _canonical(nbrs: tuple[int, ...], perms: Sequence[Sequence[int]]) -> tuple[int, ...]:
    if len(perms) == 1 and list(perms[0]) == list(range(len(nbrs))):
        return nbrs
    return min(_permute(nbrs, p) for p in perms)


@dataclass(frozen=True)
class OrbitMember:
    graph: GraphState
    word: bytes  # per-vertex Clifford indices mapping the start graph to this one

    def cliffords(self) -> list[Clifford1]:
        return [_GROUP[c] for c in self.word]

    def witness(self) -> CliffordCircuit:
        return _circuit(self.word, self.graph)


@dataclass
class Orbit:
    start: GraphState
    members: dict[tuple[int, ...], OrbitMember]
    truncated: bool

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[OrbitMember]:
        return iter(self.members.values())

    def contains(self, g: GraphState) -> bool:
        return any(m.graph.nbrs == g.nbrs for m in self)

    def dump_jsonl(self, fh) -> None:
        for key, m in self.members.items():
            rec = {
                "canonical": [list(e) for e in _edges_of(key)],
                "edges": m.graph.num_edges,
                "max_range": m.graph.max_chord() if m.graph.embedding is not None else None,
                "witness": m.witness().to_text(),
            }
            fh.write(json.dumps(rec) + "\n")


def _edges_of(nbrs: Sequence[int]) -> list[tuple[int, int]]:
    return [(u, v) for u in range(len(nbrs)) for v in range(u + 1, len(nbrs)) if (nbrs[u] >> v) & 1]


def explore_orbit(
    g: GraphState,
    budget: int = DEFAULT_BUDGET,
    symmetries: Sequence[Sequence[int]] | None = None,
) -> Orbit:
    """Breadth-first search of the LC orbit, deduplicated by canonical form.

    ``symmetries`` is a list of vertex permutations (it should be closed
    under composition); two graphs related by one of them count once.
    Stops once ``budget`` distinct members are stored and flags truncation.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    perms = [tuple(p) for p in symmetries] if symmetries else [tuple(range(g.n))]
    start_word = bytes([_ID] * g.n)
    members = {_canonical(g.nbrs, perms): OrbitMember(g, start_word)}
    queue = deque([(g.nbrs, start_word)])
    truncated = False
    while queue:
        nbrs, word = queue.popleft()
        for v in range(g.n):
            if not nbrs[v]:
                continue
            new = _lc(nbrs, v)
            key = _canonical(new, perms)
            if key in members:
                continue
            if len(members) >= budget:
                truncated = True
                queue.clear()
                break
            new_word = _lc_witness(word, nbrs, v)
            members[key] = OrbitMember(g.with_nbrs(new), new_word)
            queue.append((new, new_word))
    return Orbit(g, members, truncated)


def hadamard_sweep(g: GraphState) -> dict[tuple[int, ...], int]:
    """Graphs reachable from ``g`` by ``H`` on a subset ``S`` plus Paulis.

    Returns ``{neighbour masks: S as a bit mask}``; the first subset found
    (in increasing mask order) is kept for each graph.
    """
    n = g.n
    nb = g.nbrs
    out: dict[tuple[int, ...], int] = {}
    for sub in range(1 << n):
        rows = [(((1 << v) & ~sub) | (nb[v] & sub), (nb[v] & ~sub) | ((1 << v) & sub)) for v in range(n)]
        for c in range(n):
            p = next((i for i in range(c, n) if rows[i][0] >> c & 1), None)
            if p is None:
                break
            rows[c], rows[p] = rows[p], rows[c]
            xc, zc = rows[c]
            for i in range(n):
                if i != c and rows[i][0] >> c & 1:
                    rows[i] = (rows[i][0] ^ xc, rows[i][1] ^ zc)
        else:
            key = tuple(r[1] for r in rows)
            if not any(key[v] >> v & 1 for v in range(n)):
                out.setdefault(key, sub)
    return out


def _sweep_word(g: GraphState, sub: int) -> tuple[GraphState, bytes]:
    hs = [v for v in range(g.n) if sub >> v & 1]
    h, rec = graphify_with_hadamards(g.check_matrix(), hs)
    word = bytes(
        _HZ if (v in rec.hadamard_set and v in rec.z_set)
        else _H if v in rec.hadamard_set
        else _Z if v in rec.z_set
        else _ID
        for v in range(g.n)
    )
    return g.with_nbrs(h.nbrs), word


def default_cost(g: GraphState) -> tuple:
    """Edge count, then the longest chord (when an embedding is present)."""
    if g.embedding is None:
        return (g.num_edges,)
    return (g.num_edges, round(g.max_chord(), 12))


@dataclass(frozen=True)
class MinimizeResult:
    graph: GraphState
    witness: CliffordCircuit
    cliffords: tuple[Clifford1, ...]
    truncated: bool
    explored: int


def minimize(
    g: GraphState,
    budget: int = DEFAULT_BUDGET,
    cost: Callable[[GraphState], tuple] = default_cost,
    symmetries: Sequence[Sequence[int]] | None = None,
    permutations: Iterable[Sequence[int]] = (),
    sweep: bool = True,
) -> MinimizeResult:
    """Lowest-cost LC-equivalent graph found within ``budget``.

    Seeds are ``g`` itself and (for at most ``SWEEP_LIMIT`` vertices) the
    cheapest graph of the Hadamard sweep; a breadth-first orbit search runs
    from each seed with an equal share of the budget.  Ties keep ``g``.

    ``permutations`` are optional role-preserving relabelings tried on the
    winner; a relabeled graph is accepted only if it is cheaper and
    :func:`lc_equivalent` certifies it against ``g``.
    """
    seeds = [(g, bytes([_ID] * g.n))]
    if sweep and g.n <= SWEEP_LIMIT:
        found = hadamard_sweep(g)
        best_key = min(found, key=lambda k: (cost(g.with_nbrs(k)), k))
        if best_key != g.nbrs:
            seeds.append(_sweep_word(g, found[best_key]))
    share = max(1, budget // len(seeds))
    best = None
    truncated = False
    explored = 0
    for seed, word in seeds:
        orbit = explore_orbit(seed, share, symmetries)
        truncated |= orbit.truncated
        explored += len(orbit)
        for m in orbit:
            key = (cost(m.graph), m.graph.nbrs != g.nbrs, m.graph.nbrs)
            if best is None or key < best[0]:
                best = (key, m.graph, _compose(word, m.word))
    _, graph, word = best
    result = MinimizeResult(graph, _circuit(word, g), tuple(_GROUP[c] for c in word), truncated, explored)
    for perm in permutations:
        if sorted(perm) != list(range(g.n)) or any(g.roles[v] != g.roles[perm[v]] for v in range(g.n)):
            raise ValueError("permutations must be role-preserving")
        cand = result.graph.permute(perm)
        if cost(cand) >= cost(result.graph):
            continue
        found = lc_equivalent(g, cand, budget)
        if found is not None:
            circ, cliffs = found
            result = MinimizeResult(cand, circ, cliffs, truncated, explored)
    return result


def lc_equivalent(
    g1: GraphState, g2: GraphState, budget: int = DEFAULT_BUDGET
) -> tuple[CliffordCircuit, tuple[Clifford1, ...]] | None:
    """Local Clifford mapping ``|g1>`` to ``|g2>``.

    Tries to meet in the two Hadamard sweeps first (small graphs), then runs
    a bidirectional BFS.  Returns ``(circuit, per-vertex Cliffords)`` or
    ``None`` if nothing is found within ``budget`` combined nodes.  Any
    returned map is re-checked on the stabilizer groups.
    """
    if g1.n != g2.n:
        raise ValueError("graphs have different vertex counts")
    word = None
    if g1.n <= SWEEP_LIMIT:
        s1, s2 = hadamard_sweep(g1), hadamard_sweep(g2)
        common = sorted(set(s1) & set(s2))
        if common:
            _, w1 = _sweep_word(g1, s1[common[0]])
            _, w2 = _sweep_word(g2, s2[common[0]])
            word = _compose(w1, _invert(w2))
    if word is None:
        word = _bidirectional(g1, g2, budget)
    if word is None:
        return None
    cliffs = tuple(_GROUP[c] for c in word)
    if not same_group(apply_local(g1, cliffs), g2.check_matrix()):
        raise AssertionError("LC witness failed its stabilizer check")
    return _circuit(word, g1), cliffs


def _bidirectional(g1: GraphState, g2: GraphState, budget: int) -> bytes | None:
    ident = bytes([_ID] * g1.n)
    seen = [{g1.nbrs: ident}, {g2.nbrs: ident}]
    queues = [deque([g1.nbrs]), deque([g2.nbrs])]

    def finish(key):
        return _compose(seen[0][key], _invert(seen[1][key]))

    if g1.nbrs in seen[1]:
        return finish(g1.nbrs)
    while queues[0] or queues[1]:
        side = 0 if (queues[0] and (not queues[1] or len(seen[0]) <= len(seen[1]))) else 1
        other = 1 - side
        for _ in range(len(queues[side])):
            nbrs = queues[side].popleft()
            word = seen[side][nbrs]
            for v in range(g1.n):
                if not nbrs[v]:
                    continue
                new = _lc(nbrs, v)
                if new in seen[side]:
                    continue
                seen[side][new] = _lc_witness(word, nbrs, v)
                if new in seen[other]:
                    return finish(new)
                queues[side].append(new)
            if len(seen[0]) + len(seen[1]) >= budget:
                return None
    return None
