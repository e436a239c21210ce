"""Index contraction of pure stabilizer states by Bell projection.

Contracting legs ``i`` and ``j`` applies ``<phi+|_{ij}`` (with
``|phi+> = |00> + |11>``) and leaves a pure state on the remaining legs.
On generators: every group element commuting with ``X_iX_j`` and ``Z_iZ_j``
carries one of ``II, XX, YY, ZZ`` on the pair; stripping the pair keeps the
sign except for ``YY``, where ``<phi+| YY = -<phi+|`` flips it.
"""

from __future__ import annotations

from typing import Sequence

from .symplectic import (
    DimensionError,
    PauliRow,
    PhasedCheckMatrix,
    commutes,
    multiply,
)

__all__ = ["ZeroOverlapError", "bell_contract", "contract_network"]


class ZeroOverlapError(ValueError):
    """The Bell projection annihilates the state."""


def _strip(row: PauliRow, i: int, j: int) -> PauliRow:
    keep = [q for q in range(row.n) if q not in (i, j)]
    out = row.restrict(keep)
    if row.letter(i) == "Y" and row.letter(j) == "Y":
        out = out.negate()
    return out


def bell_contract(state: PhasedCheckMatrix, i: int, j: int) -> PhasedCheckMatrix:
    """Contract qubits ``i`` and ``j`` of a pure stabilizer state.

    The result acts on the remaining qubits in their original relative order.
    """
    m = state.n
    if not state.is_pure():
        raise ValueError("bell_contract needs a pure state")
    if i == j or not (0 <= i < m and 0 <= j < m):
        raise DimensionError(f"bad contraction pair ({i}, {j}) on {m} qubits")

    xx = PauliRow.single(m, {i: "X", j: "X"})
    zz = PauliRow.single(m, {i: "Z", j: "Z"})
    rows = list(state.rows)

    # at most one row may anticommute with XX, then at most one with ZZ
    for probe in (xx, zz):
        bad = [k for k, r in enumerate(rows) if r is not None and not commutes(r, probe)]
        if not bad:
            continue
        pivot = bad[0]
        for k in bad[1:]:
            rows[k] = multiply(rows[k], rows[pivot])
        rows[pivot] = None  # replaced by the Bell stabilizer, which strips to identity

    kept = [r for r in rows if r is not None]
    stripped = [_strip(r, i, j) for r in kept]

    # drop dependent rows, highest index first; detect -1 in the group
    chosen = _independent_prefix(stripped)
    if len(chosen) != m - 2:
        raise AssertionError("contraction lost rank; input was not a valid pure state")
    return PhasedCheckMatrix(m - 2, tuple(chosen))


def _independent_prefix(rows: list[PauliRow]) -> list[PauliRow]:
    """Keep rows in order, skipping those dependent on earlier ones.

    A dependent row that reduces to ``-1`` means the projected state is zero.
    """
    reduced: list[PauliRow] = []
    pivots: list[int] = []
    chosen: list[PauliRow] = []
    for r in rows:
        rest = r
        for prow, col in zip(reduced, pivots):
            if _bit(rest, col):
                rest = multiply(rest, prow)
        if rest.is_identity():
            if rest.sign:
                raise ZeroOverlapError("Bell projection has zero overlap with the state")
            continue
        col = _lowest_col(rest)
        # keep the reduced basis fully eliminated on the new pivot
        reduced = [multiply(p, rest) if _bit(p, col) else p for p in reduced]
        reduced.append(rest)
        pivots.append(col)
        chosen.append(r)
    return chosen


def _bit(row: PauliRow, col: int) -> int:
    if col < row.n:
        return (row.x >> col) & 1
    return (row.z >> (col - row.n)) & 1


def _lowest_col(row: PauliRow) -> int:
    if row.x:
        return (row.x & -row.x).bit_length() - 1
    return row.n + (row.z & -row.z).bit_length() - 1


def contract_network(
    blocks: Sequence[PhasedCheckMatrix],
    pairs: Sequence[tuple[tuple[int, int], tuple[int, int]]],
    free_order: Sequence[tuple[int, int]] | None = None,
) -> PhasedCheckMatrix:
    """Tensor ``blocks`` together and contract each ``((block, leg), (block, leg))`` pair.

    The output qubit order follows ``free_order`` (default: surviving legs in
    block-then-leg order).
    """
    if not blocks:
        raise ValueError("no blocks given")
    legs: list[tuple[int, int]] = [(b, l) for b, blk in enumerate(blocks) for l in range(blk.n)]
    used: set[tuple[int, int]] = set()
    for a, b in pairs:
        for leg in (a, b):
            if leg not in legs:
                raise ValueError(f"unknown leg {leg}")
            if leg in used:
                raise ValueError(f"leg {leg} is contracted twice")
            used.add(leg)
    if free_order is None:
        free_order = [leg for leg in legs if leg not in used]
    else:
        free_order = [tuple(leg) for leg in free_order]
        if sorted(free_order) != sorted(leg for leg in legs if leg not in used):
            raise ValueError("free_order must list every uncontracted leg exactly once")

    state = blocks[0]
    for blk in blocks[1:]:
        state = state.tensor(blk)
    current = list(legs)
    for a, b in pairs:
        i, j = current.index(a), current.index(b)
        state = bell_contract(state, i, j)
        current = [leg for leg in current if leg not in (a, b)]
    order = [current.index(leg) for leg in free_order]
    return state.permute_qubits(order)
