"""Encoder and partial-decoder circuits for graph codes.

The encoder runs in three layers:

* ``U1``: CZ on every bulk-bulk and boundary-boundary edge,
* ``U2``: a controlled ``X_j`` from each bulk qubit (``Z`` strings, so plain CZs),
* ``U3``: H on the bulk, then a controlled ``Z_j`` from each bulk qubit.

On ``|phi>_bulk |+>^n`` it returns ``|+>^k`` on the bulk and the encoded
state on the boundary.  Inside each layer gates are sorted by the graph
order of their qubits.

A controlled Pauli is built from CX (X and Y letters) and CZ (Z and Y
letters).  A Y whose CZ comes before its CX carries ``-i``, one whose CZ
comes after carries ``+i``; the late-CZ set is called ``omega``.  With an
even number of Y letters a suitable omega absorbs the phase, otherwise a
phase gate on the control does.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .circuits import CliffordCircuit, Gate
from .graph_code import GraphCode, LogicalSet, extract_logicals, reduce_weight
from .graphification import ConversionRecord
from .symplectic import IDENTITY_1Q, SINGLE_QUBIT_GATES, Clifford1, PauliRow

__all__ = [
    "LabelingError",
    "ControlledPauli",
    "plan_controlled_pauli",
    "decompose_controlled_pauli",
    "synthesize_encoder",
    "encoder_layers",
    "local_cliffords",
    "synthesize_partial_decoder",
    "recycle_qubits",
    "partial_recovery_check",
]

_PHASE_GATE = {1: "S", 2: "Z", 3: "Sdg"}


class LabelingError(ValueError):
    """A region map does not match the codes it is used with."""


@dataclass(frozen=True)
class ControlledPauli:
    """Gate plan for one controlled Pauli, as target positions.

    ``v``: CZ before the CXs, ``w``: CX, ``omega``: CZ after the CXs,
    ``phase``: power of ``S`` applied to the control at the end.
    """

    v: tuple[int, ...]
    w: tuple[int, ...]
    omega: tuple[int, ...]
    phase: int


def plan_controlled_pauli(target: PauliRow, omega: Sequence[int] | None = None) -> ControlledPauli:
    """Choose the gate sets for ``controlled-target``.

    By default ``omega`` is empty or holds the first Y, whichever leaves no
    phase on the control (possible exactly when the Y count is even).  An
    explicit ``omega`` (a subset of the Y positions) is honoured and any
    leftover phase goes onto the control.
    """
    ys = [q for q in range(target.n) if target.letter(q) == "Y"]
    y, s = len(ys), target.sign
    if omega is None:
        if y % 2 == 0 and (3 * y // 2 - s) % 2:
            omega = ys[:1]
        else:
            omega = []
    omega = sorted(omega)
    if not set(omega) <= set(ys):
        raise ValueError("omega must be a subset of the Y positions")
    # produced phase on the control-1 branch is i^(3y - 2a)
    phase = (2 * s - 3 * y + 2 * len(omega)) % 4
    v = tuple(q for q in range(target.n) if target.letter(q) == "Z" or (target.letter(q) == "Y" and q not in omega))
    w = tuple(q for q in range(target.n) if target.letter(q) in "XY")
    return ControlledPauli(v, w, tuple(omega), phase)


def decompose_controlled_pauli(
    control: str,
    target: PauliRow,
    target_names: Sequence[str],
    roles: Mapping[str, str] | None = None,
    omega: Sequence[int] | None = None,
) -> CliffordCircuit:
    """CX/CZ circuit for ``|0><0| x 1 + |1><1| x target`` (exact, phase included)."""
    if len(target_names) != target.n:
        raise ValueError("need one name per target qubit")
    plan = plan_controlled_pauli(target, omega)
    gates = [Gate("CZ", (control, target_names[q])) for q in plan.v]
    gates += [Gate("CX", (control, target_names[q])) for q in plan.w]
    gates += [Gate("CZ", (control, target_names[q])) for q in plan.omega]
    if plan.phase:
        gates.append(Gate(_PHASE_GATE[plan.phase], (control,)))
    if roles is None:
        roles = {control: "other", **{q: "other" for q in target_names}}
    return CliffordCircuit(tuple(gates), roles)


def _roles(code: GraphCode) -> dict[str, str]:
    g = code.graph
    return dict(zip(g.names, g.roles))


def encoder_layers(
    code: GraphCode,
    logicals: LogicalSet | None = None,
    omegas: Mapping[str, Sequence[int]] | None = None,
) -> tuple[CliffordCircuit, CliffordCircuit, CliffordCircuit]:
    """``(U1, U2, U3)`` for ``code``; logicals default to the weight-reduced set."""
    if logicals is None:
        logicals = reduce_weight(extract_logicals(code))
    if len(logicals.logical_z) != code.k or len(logicals.logical_x) != code.k:
        raise ValueError("logical set does not match the code dimension")
    g = code.graph
    roles = _roles(code)
    bulk = set(code.bulk)
    bnames = code.boundary_names()
    omegas = omegas or {}

    u1 = [
        Gate("CZ", (g.names[u], g.names[v]))
        for u, v in g.edges()
        if (u in bulk) == (v in bulk)
    ]
    u2: list[Gate] = []
    for r, name in enumerate(code.bulk_names()):
        u2 += decompose_controlled_pauli(name, logicals.logical_x[r], bnames, roles).gates
    u3 = [Gate("H", (name,)) for name in code.bulk_names()]
    for r, name in enumerate(code.bulk_names()):
        u3 += decompose_controlled_pauli(name, logicals.logical_z[r], bnames, roles, omegas.get(name)).gates
    return tuple(CliffordCircuit(tuple(gs), roles) for gs in (u1, u2, u3))


def synthesize_encoder(
    code: GraphCode,
    logicals: LogicalSet | None = None,
    omegas: Mapping[str, Sequence[int]] | None = None,
) -> CliffordCircuit:
    """``U3 U2 U1`` as one circuit (``U1`` first in time)."""
    u1, u2, u3 = encoder_layers(code, logicals, omegas)
    return u1.then(u2).then(u3)


_H = SINGLE_QUBIT_GATES["H"]
_Z = SINGLE_QUBIT_GATES["Z"]


def local_cliffords(local, names: Sequence[str]) -> dict[str, Clifford1]:
    """Per-qubit Cliffords from a conversion record or a per-qubit sequence."""
    if isinstance(local, ConversionRecord):
        out = {}
        for q, name in enumerate(names):
            c = IDENTITY_1Q
            if q in local.hadamard_set:
                c = c.then(_H)
            if q in local.z_set:
                c = c.then(_Z)
            out[name] = c
        return out
    if isinstance(local, Mapping):
        return {name: local.get(name, IDENTITY_1Q) for name in names}
    local = list(local)
    if len(local) != len(names):
        raise ValueError("need one Clifford per qubit")
    return dict(zip(names, local))


def _layer(cliffords: Mapping[str, Clifford1], roles: Mapping[str, str]) -> list[Gate]:
    gates = []
    for name, c in cliffords.items():
        gates += [Gate(gname, (name,)) for gname in c.gates()]
    return gates


def synthesize_partial_decoder(
    full: tuple[GraphCode, object],
    sub: tuple[GraphCode, object],
    region: Mapping[str, Sequence[str]],
    sub_logicals: LogicalSet | None = None,
    omegas: Mapping[str, Sequence[int]] | None = None,
) -> CliffordCircuit:
    """Decoder that recovers the bulk region ``E`` from boundary ``dE``.

    ``full`` and ``sub`` pair each code with the local map (conversion record
    or per-qubit Cliffords) taking the contracted network state to that
    code's graph.  ``region`` has keys ``E``, ``gamma`` and ``dE``.  In time
    order the circuit applies ``V^-1`` then ``W`` on ``dE``, the inverse
    encoder of the sub code, then ``W^T`` and ``conj(V)`` on ``E``.
    """
    full_code, v_local = full
    sub_code, w_local = sub
    e, gamma, de = (tuple(region[key]) for key in ("E", "gamma", "dE"))
    sub_bulk = set(sub_code.bulk_names())
    if set(e) | set(gamma) != sub_bulk or set(e) & set(gamma):
        raise LabelingError("E and gamma must partition the sub code's bulk")
    if list(de) != sub_code.boundary_names():
        raise LabelingError("dE must list the sub code's boundary in order")
    if not set(e) <= set(full_code.bulk_names()):
        raise LabelingError("E must be part of the full bulk")
    if not set(de) <= set(full_code.boundary_names()):
        raise LabelingError("dE must be part of the full boundary")

    v = local_cliffords(v_local, full_code.graph.names)
    w = local_cliffords(w_local, sub_code.graph.names)
    roles = _roles(sub_code)

    pre = {q: v[q].inverse().then(w[q]) for q in de}
    post = {q: w[q].transpose().then(v[q].conjugate()) for q in e}
    body = synthesize_encoder(sub_code, sub_logicals, omegas).inverse()
    gates = _layer(pre, roles) + list(body.gates) + _layer(post, roles)
    return CliffordCircuit(tuple(gates), roles)


def recycle_qubits(
    circuit: CliffordCircuit, mapping: Mapping[str, str], roles: Mapping[str, str] | None = None
) -> CliffordCircuit:
    """Rename qubits (e.g. cut qubits onto freed bulk qubits)."""
    clash = set(mapping.values()) & (set(circuit.qubits) - set(mapping))
    if clash:
        raise LabelingError(f"recycled names already used: {sorted(clash)}")
    return circuit.relabel(mapping, roles)


def partial_recovery_check(
    encoder: CliffordCircuit,
    decoder: CliffordCircuit,
    phi_in,
    region_e: Sequence[str],
    cap: int = 20,
) -> float:
    """Frobenius norm of ``rho_E(input) - rho_E(decoded)``.

    ``phi_in`` is a bulk statevector; every other qubit of the two circuits
    starts in ``|+>``.
    """
    from .oracle import QubitCapError, Statevector, run

    qubits = list(dict.fromkeys(list(encoder.qubits) + list(decoder.qubits)))
    rest = [q for q in qubits if q not in phi_in.qubits]
    state = phi_in.tensor(Statevector.product("+" * len(rest), rest))
    if state.num_qubits > cap:
        raise QubitCapError(f"{state.num_qubits} qubits exceeds the cap of {cap}")
    roles = {**encoder.roles, **decoder.roles}
    out = run(CliffordCircuit(encoder.gates + decoder.gates, roles), state, cap=cap)
    want = phi_in.reduced_density(region_e)
    got = out.reduced_density(region_e)
    return float(np.linalg.norm(want - got))
