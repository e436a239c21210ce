import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holocode.contraction import ZeroOverlapError, bell_contract, contract_network
from holocode.happy_network import ame6
from holocode.oracle import Statevector, from_stabilizer, reduced_entropy
from holocode.symplectic import PhasedCheckMatrix, contains_minus_identity, same_group

from .conftest import random_stabilizer


def _project(sv: Statevector, i: int, j: int) -> np.ndarray:
    t = sv.data.reshape((2,) * sv.num_qubits)
    return np.trace(t, axis1=i, axis2=j).reshape(-1)


def test_ghz_to_plus():
    ghz = PhasedCheckMatrix.from_strings(["XXX", "ZZI", "IZZ"])
    assert same_group(bell_contract(ghz, 1, 2), PhasedCheckMatrix.from_strings(["X"]))


def test_entanglement_swapping():
    pairs = PhasedCheckMatrix.from_strings(["XXII", "ZZII", "IIXX", "IIZZ"])
    assert same_group(bell_contract(pairs, 1, 2), PhasedCheckMatrix.from_strings(["XX", "ZZ"]))


def test_zero_overlap():
    with pytest.raises(ZeroOverlapError):
        bell_contract(PhasedCheckMatrix.from_strings(["XI", "-IX"]), 0, 1)


def test_yy_sign_flip():
    # <phi+| acting on a Bell pair partner: YY stabilised pair contracts to a sign flip
    state = PhasedCheckMatrix.from_strings(["XXI", "ZZI", "IIZ"])
    out = bell_contract(state.permute_qubits([0, 2, 1]), 0, 2)
    assert same_group(out, PhasedCheckMatrix.from_strings(["Z"]))


@settings(max_examples=1000, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**32 - 1), st.data())
def test_matches_statevector_projection(n, seed, data):
    state = random_stabilizer(n, np.random.default_rng(seed))
    i = data.draw(st.integers(0, n - 1))
    j = data.draw(st.integers(0, n - 1).filter(lambda v: v != i))
    projected = _project(from_stabilizer(state), i, j)
    if np.linalg.norm(projected) < 1e-9:
        with pytest.raises(ZeroOverlapError):
            bell_contract(state, i, j)
        return
    out = bell_contract(state, i, j)
    assert out.is_pure() and out.is_valid()
    assert not contains_minus_identity(list(out.rows))
    if n == 2:
        return
    want = Statevector(projected, [str(q) for q in range(n - 2)]).normalize()
    got = from_stabilizer(out, [str(q) for q in range(n - 2)])
    assert got.equal_up_to_phase(want)


def test_single_block_unchanged():
    block = ame6().check_matrix()
    assert contract_network([block], []) == block


def test_two_blocks_entropy():
    block = ame6().check_matrix()
    out = contract_network([block, block], [((0, 5), (1, 1))])
    assert out.n == 10 and out.is_valid()
    sv = from_stabilizer(out)
    for legs in (range(5), range(5, 10)):
        # the blocks share one bond, so the split between them carries one bit
        assert abs(reduced_entropy(sv, list(legs)) - 1.0) < 1e-10
        for pair in itertools.combinations(legs, 2):
            assert abs(reduced_entropy(sv, list(pair)) - 2.0) < 1e-10


def test_contraction_order_independent():
    block = ame6().check_matrix()
    pairs = [((0, 5), (1, 1)), ((1, 5), (2, 1)), ((2, 5), (0, 1))]
    a = contract_network([block] * 3, pairs)
    b = contract_network([block] * 3, pairs[::-1])
    assert same_group(a, b)


def test_contract_network_rejects_reused_leg():
    block = ame6().check_matrix()
    with pytest.raises(ValueError, match="twice"):
        contract_network([block, block], [((0, 1), (1, 1)), ((0, 1), (1, 2))])
