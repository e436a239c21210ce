"""Pentagon tensor networks built from six-qubit AME blocks.

Every block is the wheel graph state: leg 0 is the hub (the bulk leg) and
legs 1..5 run around the rim in order.  Each 3-qubit reduction of the wheel
is maximally mixed, which is checked in the test-suite rather than assumed.

Layout files are JSON::

    {
      "format": "holocode-layout", "version": 1,
      "tensors": ["A", "B", ...],
      "contractions": [[["A", 5], ["B", 1]], ...],
      "boundary": [{"name": "1", "leg": ["A", 2]}, ...],
      "regions": {"ab": {...}}          # optional
    }

Contractions are applied in file order.  Boundary angles on the disc are
evenly spaced in boundary order; a bulk qubit sits at the mean angle of its
tensor's boundary legs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

from .contraction import contract_network
from .graphification import GraphState
from .symplectic import PhasedCheckMatrix

__all__ = [
    "LAYOUT_FORMAT",
    "LAYOUT_VERSION",
    "ame6",
    "Region",
    "PentagonLayout",
    "build",
    "build_region",
    "preset",
    "PRESETS",
]

LAYOUT_FORMAT = "holocode-layout"
LAYOUT_VERSION = 1

_WHEEL_EDGES = [(0, i) for i in range(1, 6)] + [(i, i % 5 + 1) for i in range(1, 6)]


def ame6() -> GraphState:
    """Six-qubit AME graph state (wheel: hub 0, rim 1-2-3-4-5)."""
    return GraphState.from_edges(6, _WHEEL_EDGES)


@dataclass(frozen=True)
class Region:
    """A bulk region ``E`` with its cut legs and nearby boundary.

    ``cut`` names each leg crossed by the cut; ``order`` fixes the qubit order
    of the bulk side (members of ``E`` and cut names) in the region network.
    """

    bulk: tuple[str, ...]
    cut: dict[str, tuple[str, int]]
    boundary: tuple[str, ...]
    order: tuple[str, ...]

    def to_dict(self) -> dict:
        return {
            "bulk": list(self.bulk),
            "cut": {k: list(v) for k, v in self.cut.items()},
            "boundary": list(self.boundary),
            "order": list(self.order),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Region":
        cut = {k: (v[0], int(v[1])) for k, v in data["cut"].items()}
        order = tuple(data.get("order") or list(data["bulk"]) + list(cut))
        if sorted(order) != sorted(list(data["bulk"]) + list(cut)):
            raise ValueError("region order must list the bulk and cut names exactly once")
        return cls(tuple(data["bulk"]), cut, tuple(data["boundary"]), order)


@dataclass(frozen=True)
class PentagonLayout:
    tensors: tuple[str, ...]
    contractions: tuple[tuple[tuple[str, int], tuple[str, int]], ...]
    boundary: tuple[tuple[str, tuple[str, int]], ...]  # (label, (tensor, leg))
    regions: dict[str, Region] = field(default_factory=dict)

    def __post_init__(self):
        if len(set(self.tensors)) != len(self.tensors):
            raise ValueError("tensor names must be unique")
        used: set[tuple[str, int]] = set()
        for pair in self.contractions:
            for t, leg in pair:
                if t not in self.tensors:
                    raise ValueError(f"unknown tensor {t!r}")
                if not 1 <= leg <= 5:
                    raise ValueError(f"leg {leg} of {t} cannot be contracted (legs 1..5 only)")
                if (t, leg) in used:
                    raise ValueError(f"leg {leg} of {t} is used twice")
                used.add((t, leg))
        free = {(t, leg) for t in self.tensors for leg in range(1, 6)} - used
        declared = [leg for _, leg in self.boundary]
        if sorted(declared) != sorted(free):
            raise ValueError("boundary must list exactly the uncontracted planar legs")
        labels = [lab for lab, _ in self.boundary]
        if len(set(labels) | set(self.tensors)) != len(labels) + len(self.tensors):
            raise ValueError("qubit labels must be unique across bulk and boundary")

    @property
    def k(self) -> int:
        return len(self.tensors)

    @property
    def n(self) -> int:
        return len(self.boundary)

    def qubit_names(self) -> tuple[str, ...]:
        return self.tensors + tuple(lab for lab, _ in self.boundary)

    def qubit_roles(self) -> tuple[str, ...]:
        return ("bulk",) * self.k + ("boundary",) * self.n

    def boundary_angles(self) -> dict[tuple[str, int], float]:
        return {leg: i / self.n for i, (_, leg) in enumerate(self.boundary)}

    def leg_angle(self, tensor: str, leg: int | None = None) -> float:
        """Angle of a boundary leg, or of a tensor (mean of its boundary legs)."""
        angles = self.boundary_angles()
        if leg is not None and (tensor, leg) in angles:
            return angles[(tensor, leg)]
        own = [a for (t, _), a in angles.items() if t == tensor]
        if leg is not None and not own:
            # a contracted leg with no boundary legs nearby: use the partner tensor
            for a, b in self.contractions:
                if a == (tensor, leg):
                    return self.leg_angle(b[0])
                if b == (tensor, leg):
                    return self.leg_angle(a[0])
        return _mean_angle(own)

    def embedding(self) -> tuple[float, ...]:
        return tuple(self.leg_angle(t) for t in self.tensors) + tuple(
            i / self.n for i in range(self.n)
        )

    def empty_graph(self) -> GraphState:
        """Vertex names, roles and embedding for graphs built from this layout."""
        return GraphState((0,) * (self.k + self.n), self.qubit_names(), self.qubit_roles(), self.embedding())

    # serialisation ---------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "format": LAYOUT_FORMAT,
            "version": LAYOUT_VERSION,
            "tensors": list(self.tensors),
            "contractions": [[list(a), list(b)] for a, b in self.contractions],
            "boundary": [{"name": lab, "leg": list(leg)} for lab, leg in self.boundary],
            "regions": {k: r.to_dict() for k, r in self.regions.items()},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PentagonLayout":
        if data.get("format") != LAYOUT_FORMAT:
            raise ValueError("not a holocode layout file")
        if data.get("version") != LAYOUT_VERSION:
            raise ValueError(f"unsupported layout version {data.get('version')!r}")
        contractions = tuple(
            ((a[0], int(a[1])), (b[0], int(b[1]))) for a, b in data["contractions"]
        )
        boundary = tuple((str(item["name"]), (item["leg"][0], int(item["leg"][1]))) for item in data["boundary"])
        regions = {k: Region.from_dict(v) for k, v in data.get("regions", {}).items()}
        return cls(tuple(data["tensors"]), contractions, boundary, regions)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    @classmethod
    def from_json(cls, text: str) -> "PentagonLayout":
        return cls.from_dict(json.loads(text))


def _mean_angle(angles: Sequence[float]) -> float:
    if not angles:
        return 0.0
    x = sum(math.cos(2 * math.pi * a) for a in angles)
    y = sum(math.sin(2 * math.pi * a) for a in angles)
    if abs(x) < 1e-12 and abs(y) < 1e-12:
        return 0.0
    return (math.atan2(y, x) / (2 * math.pi)) % 1.0


def _contract(tensors: Sequence[str], pairs, free) -> PhasedCheckMatrix:
    block = ame6().check_matrix()
    idx = {t: i for i, t in enumerate(tensors)}
    return contract_network(
        [block] * len(tensors),
        [((idx[a[0]], a[1]), (idx[b[0]], b[1])) for a, b in pairs],
        [(idx[t], leg) for t, leg in free],
    )


def build(layout: PentagonLayout) -> PhasedCheckMatrix:
    """Contract the layout; qubits are the bulk legs in tensor order, then the boundary."""
    free = [(t, 0) for t in layout.tensors] + [leg for _, leg in layout.boundary]
    return _contract(layout.tensors, layout.contractions, free)


def build_region(layout: PentagonLayout, region: Region | str) -> tuple[PhasedCheckMatrix, GraphState]:
    """Contract only the tensors of a region.

    Returns the state (qubits in ``region.order`` then ``region.boundary``)
    and an edgeless graph carrying the matching names, roles and angles.
    """
    if isinstance(region, str):
        region = layout.regions[region]
    inside = set(region.bulk)
    pairs = [(a, b) for a, b in layout.contractions if a[0] in inside and b[0] in inside]
    leg_of = dict(layout.boundary)
    free = []
    roles = []
    angles = []
    for name in region.order:
        if name in inside:
            free.append((name, 0))
            roles.append("bulk")
            angles.append(layout.leg_angle(name))
        else:
            free.append(region.cut[name])
            roles.append("cut")
            angles.append(layout.leg_angle(*region.cut[name]))
    for lab in region.boundary:
        free.append(leg_of[lab])
        roles.append("boundary")
        angles.append(layout.leg_angle(*leg_of[lab]))
    touched = {leg for leg in free if leg[1] != 0}
    expected = {(t, leg) for t in inside for leg in range(1, 6)} - {x for p in pairs for x in p}
    if touched != expected:
        raise ValueError("region cut and boundary must cover every open planar leg of its tensors")
    state = _contract(sorted(inside, key=layout.tensors.index), pairs, free)
    names = tuple(region.order) + tuple(region.boundary)
    return state, GraphState((0,) * len(names), names, tuple(roles), tuple(angles))


def _happy12() -> PentagonLayout:
    # four pentagons around a shared vertex; rim legs 2,3,4 face the boundary,
    # leg 5 of each pentagon meets leg 1 of the next one clockwise
    tensors = ("A", "B", "C", "D")
    contractions = tuple(((tensors[p], 5), (tensors[(p + 1) % 4], 1)) for p in range(4))
    boundary = tuple(
        (str(3 * p + j), (tensors[p], j + 1)) for p in range(4) for j in (1, 2, 3)
    )
    ab = Region(
        bulk=("A", "B"),
        cut={"I": ("A", 1), "II": ("B", 5), "III": ("B", 4)},
        boundary=("1", "2", "3", "4", "5"),
        order=("I", "A", "III", "II", "B"),
    )
    return PentagonLayout(tensors, contractions, boundary, {"ab": ab})


def _happy36() -> PentagonLayout:
    # one central pentagon O, five edge neighbours N0..N4 and five corner
    # pentagons K0..K4 (Ki touches Ni and Ni+1).  Rim orders:
    #   Ni: 1 -> O, 2 -> K(i-1), 3,4 boundary, 5 -> Ki
    #   Ki: 1 -> N(i+1), 2,3,4 boundary, 5 -> Ni
    nbr = [f"N{i}" for i in range(5)]
    cor = [f"K{i}" for i in range(5)]
    tensors = ("O",) + tuple(nbr) + tuple(cor)
    contractions = []
    for i in range(5):
        contractions.append((("O", i + 1), (nbr[i], 1)))
    for i in range(5):
        contractions.append(((nbr[i], 5), (cor[i], 5)))
        contractions.append(((cor[i], 1), (nbr[(i + 1) % 5], 2)))
    boundary = []
    label = 1
    for i in range(5):
        for t, legs in ((nbr[i], (3, 4)), (cor[i], (2, 3, 4))):
            for leg in legs:
                boundary.append((str(label), (t, leg)))
                label += 1
    return PentagonLayout(tensors, tuple(contractions), tuple(boundary))


PRESETS = {"happy12": _happy12, "happy36": _happy36}


def preset(name: str) -> PentagonLayout:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
