import itertools

import numpy as np
import pytest

from holocode.circuit_synth import (
    LabelingError,
    decompose_controlled_pauli,
    encoder_layers,
    local_cliffords,
    partial_recovery_check,
    plan_controlled_pauli,
    recycle_qubits,
    synthesize_encoder,
    synthesize_partial_decoder,
)
from holocode.circuits import CliffordCircuit, Gate
from holocode.graph_code import LogicalSet, extract_logicals, partition, reduce_weight
from holocode.graphification import GraphState
from holocode.happy_network import preset
from holocode.lc_search import minimize
from holocode.oracle import Statevector, circuit_unitary, pauli_matrix, run
from holocode.pipeline import bulk_code, graph_layout, graph_region, random_inputs, recovery_setup
from holocode.symplectic import PauliRow

from . import reference as ref
from .conftest import region_graph


def _controlled(row):
    dim = 2**row.n
    return np.block([[np.eye(dim), np.zeros((dim, dim))], [np.zeros((dim, dim)), pauli_matrix(row)]])


def _all_paulis(max_w):
    for n in range(1, max_w + 1):
        for letters in itertools.product("IXYZ", repeat=n):
            for sign in "+-":
                yield PauliRow.from_string(sign + "".join(letters))


def test_controlled_pauli_exact():
    for row in _all_paulis(3):
        names = [f"t{j}" for j in range(row.n)]
        circ = decompose_controlled_pauli("c", row, names)
        u = circuit_unitary(circ, ["c"] + names)
        assert np.allclose(u, _controlled(row), atol=1e-12), row.to_string()


def test_controlled_pauli_explicit_omega():
    row = PauliRow.from_string("+YYY")
    for omega in ([], [0], [0, 1], [0, 1, 2]):
        circ = decompose_controlled_pauli("c", row, ["a", "b", "d"], omega=omega)
        assert np.allclose(circuit_unitary(circ, ["c", "a", "b", "d"]), _controlled(row))
    with pytest.raises(ValueError):
        plan_controlled_pauli(PauliRow.from_string("+XY"), omega=[0])


def test_mixed_example():
    row = PauliRow.from_string("+IXZYY")
    plan = plan_controlled_pauli(row)
    assert plan.w == (1, 3, 4) and plan.phase == 0
    assert set(plan.v) | set(plan.omega) == {2, 3, 4}


def _sets(row, omega=None):
    plan = plan_controlled_pauli(row, omega)
    one = lambda qs: {q + 1 for q in qs}
    return one(plan.omega), one(plan.w), one(plan.v), plan.phase


def test_encoder_gate_sets():
    for name, z in zip(ref.BULK, ref.LOGICAL_Z):
        omega, w, v, phase = _sets(PauliRow.from_string(z))
        assert (w, v) == ref.ENCODER_SETS[name] and not omega and phase == 0


def test_region_gate_sets():
    for name, z in ref.REGION_LOGICAL_Z.items():
        row = PauliRow.from_string(z)
        want = ref.REGION_SETS[name]
        omega, w, v, phase = _sets(row, sorted(q - 1 for q in want[0]))
        assert (omega, w, v, phase) == (*want, 0)
        if name != "I":
            assert _sets(row)[:3] == want
    # for I the default keeps the first Y late instead of the second; both are exact
    row = PauliRow.from_string(ref.REGION_LOGICAL_Z["I"])
    assert _sets(row)[0] == {1}
    for omega in ([0], [1]):
        circ = decompose_controlled_pauli("c", row, list("abdef"), omega=omega)
        assert np.allclose(circuit_unitary(circ, ["c", *"abdef"]), _controlled(row))


def _golden_logicals():
    return LogicalSet((), tuple(map(PauliRow.from_string, ref.LOGICAL_Z)), tuple(map(PauliRow.from_string, ref.LOGICAL_X)))


def test_encoder_layer_counts(golden_code):
    u1, u2, u3 = encoder_layers(golden_code, _golden_logicals())
    assert u1.count(2) == 28 and set(g.name for g in u1) == {"CZ"}
    assert u2.count(2) == 20 and set(g.name for g in u2) == {"CZ"}
    assert u3.count(1) == 4 and u3.count(2) == 28


def test_encoder_without_bulk():
    g = GraphState.from_edges(3, [(0, 1), (1, 2)], roles=["boundary"] * 3)
    code = partition(g, [])
    u1, u2, u3 = encoder_layers(code)
    assert u1.count() == 2 and u2.count() == 0 and u3.count() == 0


@pytest.mark.parametrize("logicals", ["reference", "reduced"])
def test_encoder_round_trip(golden_code, golden_basis, logicals):
    ls = _golden_logicals() if logicals == "reference" else None
    enc = synthesize_encoder(golden_code, ls)
    plus = Statevector.product("+" * 4, list(ref.BULK))
    for phi in random_inputs(ref.BULK, 50 if logicals == "reference" else 10, seed=7):
        out = run(enc, phi.tensor(Statevector.product("+" * 12, list(ref.BOUNDARY))))
        want = plus.tensor(Statevector(phi.data @ golden_basis, ref.BOUNDARY))
        assert abs(out.fidelity(want) - 1) < 1e-10
        back = run(enc.inverse(), out)
        start = phi.tensor(Statevector.product("+" * 12, list(ref.BOUNDARY)))
        assert 1 - back.fidelity(start) < 1e-10


def _reference_pair():
    layout = preset("happy12")
    full = graph_layout(layout, hadamard=[6, 9, 12, 15])
    sub, region = graph_region(layout, "ab", hadamard=[7])
    return layout, full, sub, region


def test_reference_graphs_from_layout(golden):
    _, full, sub, _ = _reference_pair()
    assert full.graph.same_graph(golden)
    assert sub.graph.same_graph(region_graph())
    code = bulk_code(sub.graph, ref.REGION_BULK)
    ls = reduce_weight(extract_logicals(code))
    names = code.bulk_names()
    assert {n: r.to_string() for n, r in zip(names, ls.logical_z)} == ref.REGION_LOGICAL_Z
    assert {n: r.to_string() for n, r in zip(names, ls.logical_x)} == ref.REGION_LOGICAL_X


def test_decoder_reduces_for_reference_pair():
    layout, full, sub, region = _reference_pair()
    code = bulk_code(full.graph, layout.tensors)
    sub_code = bulk_code(sub.graph, region.order)
    region_map = {"E": region.bulk, "gamma": list(region.cut), "dE": region.boundary}
    dec = synthesize_partial_decoder((code, full.local), (sub_code, sub.local), region_map)
    body = synthesize_encoder(sub_code).inverse()
    assert dec.gates == body.gates + (Gate("Z", ("B",)),)


@pytest.mark.parametrize("recycle", [False, True])
def test_partial_recovery(recycle):
    layout, full, sub, region = _reference_pair()
    setup = recovery_setup(layout, region, full, sub, recycle=recycle)
    assert len(setup.qubits) == (17 if recycle else 19)
    for phi in random_inputs(setup.bulk, 5, seed=11):
        assert setup.deviation(phi) < 1e-10


def test_partial_recovery_default_pipeline():
    layout = preset("happy12")
    setup = recovery_setup(layout, "ab")
    for phi in random_inputs(setup.bulk, 3, seed=2):
        assert setup.deviation(phi) < 1e-10


def test_partial_recovery_after_minimize():
    layout = preset("happy12")
    start = graph_layout(layout)
    res = minimize(start.graph)
    composed = {n: start.local[n].then(c) for n, c in zip(start.graph.names, res.cliffords)}
    from holocode.pipeline import GraphedState

    full = GraphedState(res.graph, composed)
    setup = recovery_setup(layout, "ab", full=full)
    for phi in random_inputs(setup.bulk, 3, seed=4):
        assert setup.deviation(phi) < 1e-10


def test_negative_control():
    layout, full, sub, region = _reference_pair()
    setup = recovery_setup(layout, region, full, sub)
    idx = next(i for i, g in enumerate(setup.decoder.gates) if g.name == "CZ" and "A" in g.qubits)
    broken = setup.decoder.without(idx)
    phi = random_inputs(setup.bulk, 1, seed=3)[0]
    assert partial_recovery_check(setup.encoder, broken, phi, region.bulk) > 0.05


def test_identity_region_round_trip(golden_code):
    # taking the whole network as the region, the decoder is the inverse encoder
    enc = synthesize_encoder(golden_code)
    region = {"E": ref.BULK, "gamma": (), "dE": ref.BOUNDARY}
    from holocode.symplectic import IDENTITY_1Q

    local = {n: IDENTITY_1Q for n in golden_code.graph.names}
    dec = synthesize_partial_decoder((golden_code, local), (golden_code, local), region)
    for phi in random_inputs(ref.BULK, 3, seed=5):
        assert partial_recovery_check(enc, dec, phi, ref.BULK) < 1e-10


def test_labeling_errors(golden_code):
    layout, full, sub, region = _reference_pair()
    code = bulk_code(full.graph, layout.tensors)
    sub_code = bulk_code(sub.graph, region.order)
    good = {"E": region.bulk, "gamma": list(region.cut), "dE": region.boundary}
    bad_maps = [
        {**good, "gamma": ["I"]},
        {**good, "dE": list(reversed(region.boundary))},
        {**good, "E": ["A", "III"], "gamma": ["I", "II", "B"]},
    ]
    for m in bad_maps:
        with pytest.raises(LabelingError):
            synthesize_partial_decoder((code, full.local), (sub_code, sub.local), m)


def test_recycle_clash():
    circ = CliffordCircuit((Gate("CZ", ("a", "b")),), {"a": "cut", "b": "bulk"})
    with pytest.raises(LabelingError):
        recycle_qubits(circ, {"a": "b"})
    assert recycle_qubits(circ, {"a": "c"}).qubits == ("c", "b")


def test_local_cliffords_forms():
    from holocode.graphification import ConversionRecord
    from holocode.symplectic import SINGLE_QUBIT_GATES

    rec = ConversionRecord(frozenset({0}), frozenset({0, 1}))
    out = local_cliffords(rec, ["a", "b"])
    assert out["a"] == SINGLE_QUBIT_GATES["H"].then(SINGLE_QUBIT_GATES["Z"])
    assert out["b"] == SINGLE_QUBIT_GATES["Z"]
    with pytest.raises(ValueError):
        local_cliffords([out["a"]], ["a", "b"])
