import numpy as np
import pytest

from holocode.graph_code import partition
from holocode.graphification import GraphState
from holocode.happy_network import preset
from holocode.oracle import from_stabilizer

from . import reference as ref


def golden_graph() -> GraphState:
    layout = preset("happy12")
    edges = [(str(a), str(b)) for a, b in ref.BOUNDARY_EDGES]
    edges += [(t, str(v)) for t, vs in ref.BULK_EDGES.items() for v in vs]
    return GraphState.from_edges(
        list(ref.BULK + ref.BOUNDARY), edges, ("bulk",) * 4 + ("boundary",) * 12, layout.embedding()
    )


def region_graph() -> GraphState:
    names = list(ref.REGION_BULK) + [str(i) for i in range(1, 6)]
    roles = ["cut", "bulk", "cut", "cut", "bulk"] + ["boundary"] * 5
    return GraphState.from_edges(names, ref.REGION_EDGES, roles)


def logical_basis(code) -> np.ndarray:
    """Rows are the boundary states |G_i> with sum_i |i>|G_i> = |G> (unnormalised)."""
    g = code.graph
    sv = from_stabilizer(g.check_matrix(), list(g.names))
    sv = sv.reorder(code.bulk_names() + code.boundary_names())
    return sv.data.reshape(2 ** code.k, 2 ** code.n) * np.sqrt(2 ** code.k)


@pytest.fixture(scope="session")
def golden():
    return golden_graph()


@pytest.fixture(scope="session")
def golden_code(golden):
    return partition(golden, list(ref.BULK))


@pytest.fixture(scope="session")
def golden_basis(golden_code):
    return logical_basis(golden_code)


def random_stabilizer(n: int, rng: np.random.Generator):
    """Random pure stabilizer state: a random graph, local Cliffords, then Pauli signs."""
    from holocode.symplectic import _CLIFFORD_GROUP, PhasedCheckMatrix, conjugate_row

    adj = np.triu(rng.integers(0, 2, (n, n)), 1)
    rows = list(PhasedCheckMatrix.from_graph(adj + adj.T).rows)
    for q in range(n):
        c = _CLIFFORD_GROUP[rng.integers(24)]
        pauli = "IXYZ"[rng.integers(4)]
        rows = [conjugate_row(conjugate_row(r, c, q), pauli, q) for r in rows]
    return PhasedCheckMatrix(n, tuple(rows))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(mod.RESULTS):
        terminalreporter.write_line(line)
