"""End-to-end helpers: layout to graph code, encoder, and partial decoder."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit_synth import (
    local_cliffords,
    partial_recovery_check,
    recycle_qubits,
    synthesize_encoder,
    synthesize_partial_decoder,
)
from .circuits import CliffordCircuit
from .graph_code import GraphCode, partition
from .graphification import GraphState, graphify_with_hadamards, to_graph_state
from .happy_network import PentagonLayout, Region, build, build_region
from .oracle import Statevector, run
from .symplectic import Clifford1

__all__ = [
    "GraphedState",
    "graph_layout",
    "graph_region",
    "bulk_code",
    "RecoverySetup",
    "recovery_setup",
    "random_inputs",
]


@dataclass(frozen=True)
class GraphedState:
    """A graph plus the per-qubit Cliffords taking the network state to it."""

    graph: GraphState
    local: dict[str, Clifford1]


def graph_layout(layout: PentagonLayout, hadamard: Sequence[int] | None = None) -> GraphedState:
    state = build(layout)
    names, roles = layout.qubit_names(), layout.qubit_roles()
    if hadamard is None:
        g, rec = to_graph_state(state, names=names, roles=roles)
    else:
        g, rec = graphify_with_hadamards(state, hadamard, names, roles)
    g = g.with_embedding(layout.embedding())
    return GraphedState(g, local_cliffords(rec, names))


def graph_region(
    layout: PentagonLayout, region: Region | str, hadamard: Sequence[int] | None = None
) -> tuple[GraphedState, Region]:
    if isinstance(region, str):
        region = layout.regions[region]
    state, blank = build_region(layout, region)
    if hadamard is None:
        g, rec = to_graph_state(state, names=blank.names, roles=blank.roles)
    else:
        g, rec = graphify_with_hadamards(state, hadamard, blank.names, blank.roles)
    g = g.with_embedding(blank.embedding)
    return GraphedState(g, local_cliffords(rec, blank.names)), region


def bulk_code(g: GraphState, bulk: Sequence[str] | None = None) -> GraphCode:
    """Partition on the given bulk names, or on the non-boundary vertices."""
    if bulk is None:
        bulk = [g.names[v] for v in range(g.n) if g.roles[v] != "boundary"]
    return partition(g, list(bulk))


@dataclass(frozen=True)
class RecoverySetup:
    encoder: CliffordCircuit
    decoder: CliffordCircuit
    bulk: tuple[str, ...]
    region_bulk: tuple[str, ...]
    region_boundary: tuple[str, ...]

    @property
    def qubits(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(self.encoder.qubits + self.decoder.qubits))

    def deviation(self, phi_in: Statevector) -> float:
        return partial_recovery_check(self.encoder, self.decoder, phi_in, self.region_bulk)

    def encode(self, phi_in: Statevector) -> Statevector:
        rest = [q for q in self.encoder.qubits if q not in phi_in.qubits]
        return run(self.encoder, phi_in.tensor(Statevector.product("+" * len(rest), rest)))


def recovery_setup(
    layout: PentagonLayout,
    region: Region | str,
    full: GraphedState | None = None,
    sub: GraphedState | None = None,
    recycle: bool = True,
) -> RecoverySetup:
    """Encoder for the whole layout and decoder for one region.

    With ``recycle`` a cut qubit whose leg is contracted with a tensor
    outside the region reuses that tensor's bulk qubit, which is back in
    ``|+>`` after encoding.
    """
    full = full or graph_layout(layout)
    if sub is None:
        sub, region = graph_region(layout, region)
    elif isinstance(region, str):
        region = layout.regions[region]
    code = bulk_code(full.graph, layout.tensors)
    sub_code = bulk_code(sub.graph, region.order)
    region_map = {"E": region.bulk, "gamma": tuple(region.cut), "dE": region.boundary}
    encoder = synthesize_encoder(code)
    decoder = synthesize_partial_decoder((code, full.local), (sub_code, sub.local), region_map)
    if recycle:
        mapping = {}
        for name, leg in region.cut.items():
            partner = _partner(layout, leg)
            if partner and partner not in region.bulk and partner not in mapping.values():
                mapping[name] = partner
        decoder = recycle_qubits(decoder, mapping)
    return RecoverySetup(encoder, decoder, tuple(layout.tensors), tuple(region.bulk), tuple(region.boundary))


def _partner(layout: PentagonLayout, leg: tuple[str, int]) -> str | None:
    for a, b in layout.contractions:
        if a == leg:
            return b[0]
        if b == leg:
            return a[0]
    return None


def random_inputs(qubits: Sequence[str], trials: int, seed: int, product: bool = False) -> list[Statevector]:
    rng = np.random.default_rng(seed)
    make = Statevector.random_product if product else Statevector.random
    return [make(list(qubits), rng) for _ in range(trials)]
