import itertools

import numpy as np
import pytest

from holocode.graph_code import partition
from holocode.graphification import graphify_with_hadamards, to_graph_state, verify_conversion
from holocode.happy_network import PentagonLayout, Region, ame6, build, build_region, preset
from holocode.oracle import from_stabilizer, reduced_entropy
from holocode.symplectic import gf2_rank

from .conftest import golden_graph, region_graph


def test_ame6_is_perfect():
    sv = from_stabilizer(ame6().check_matrix())
    for trio in itertools.combinations(range(6), 3):
        assert abs(reduced_entropy(sv, trio) - 3.0) < 1e-10


def test_happy12_graphifies_to_golden_graph():
    layout = preset("happy12")
    state = build(layout)
    assert state.n == 16 and state.is_pure()
    g, rec = graphify_with_hadamards(state, [6, 9, 12, 15], layout.qubit_names(), layout.qubit_roles())
    assert g.same_graph(golden_graph())
    assert verify_conversion(state, g, rec)
    assert rec.z_set == {0, 1, 2, 3}


def test_region_graphifies_to_reference():
    layout = preset("happy12")
    state, blank = build_region(layout, "ab")
    g, rec = to_graph_state(state, names=blank.names, roles=blank.roles)
    assert verify_conversion(state, g, rec)
    from holocode.lc_search import lc_equivalent

    assert lc_equivalent(g, region_graph()) is not None


def test_happy36():
    layout = preset("happy36")
    assert (layout.k, layout.n) == (11, 25)
    state = build(layout)
    g, rec = to_graph_state(state, names=layout.qubit_names(), roles=layout.qubit_roles())
    assert verify_conversion(state, g, rec)
    code = partition(g, list(layout.tensors))
    b = code.block_b()
    assert gf2_rank(int("".join(map(str, row)), 2) for row in b) == 11


def test_layout_json_round_trip():
    layout = preset("happy12")
    again = PentagonLayout.from_json(layout.to_json())
    assert again == layout
    assert np.allclose(again.embedding(), layout.embedding())


def _broken(**change):
    layout = preset("happy12")
    data = layout.to_dict()
    data.update(change)
    return PentagonLayout.from_dict(data)


def test_layout_validation():
    with pytest.raises(ValueError, match="leg 0"):
        _broken(contractions=[[["A", 0], ["B", 1]]])
    with pytest.raises(ValueError, match="unknown tensor"):
        _broken(contractions=[[["Q", 5], ["B", 1]]])
    with pytest.raises(ValueError, match="boundary"):
        _broken(boundary=[])
    with pytest.raises(ValueError):
        preset("nope")


def test_region_validation():
    layout = preset("happy12")
    r = layout.regions["ab"]
    short = Region(r.bulk, {"I": r.cut["I"]}, r.boundary, ("I", "A", "B"))
    with pytest.raises(ValueError):
        build_region(layout, short)
    with pytest.raises(ValueError):
        Region.from_dict({"bulk": ["A"], "cut": {}, "boundary": [], "order": ["A", "B"]})
