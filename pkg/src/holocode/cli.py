"""``holocode`` command line.

Files are JSON except circuits and logical tables, which use the text
formats of :mod:`holocode.circuits` and :mod:`holocode.graph_code`.  A graph
file may carry a ``local`` entry: per-qubit gate words taking the contracted
network state to the graph, which the partial decoder needs.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .circuit_synth import LabelingError, local_cliffords, synthesize_encoder, synthesize_partial_decoder
from .graph_code import LogicalSet, RankError, check_relations, extract_logicals, reduce_weight
from .graphification import GraphState, NotGraphableError, graphify_with_hadamards, to_graph_state
from .happy_network import PentagonLayout, Region, ame6, build, preset
from .lc_search import DEFAULT_BUDGET, minimize, rotation_symmetries
from .oracle import QubitCapError, estimate_fidelity, from_stabilizer, reduced_entropy, run
from .pipeline import bulk_code, graph_layout, graph_region, random_inputs, recovery_setup
from .symplectic import IDENTITY_1Q, Clifford1, PhasedCheckMatrix


class CliError(Exception):
    pass


# file helpers ---------------------------------------------------------------


def _read_json(path: str) -> dict:
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        line = text.splitlines()[exc.lineno - 1] if exc.lineno <= len(text.splitlines()) else ""
        raise CliError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}\n    {line}") from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _dump(data: dict) -> str:
    return json.dumps(data, indent=1) + "\n"


def _load_layout(spec: str) -> PentagonLayout:
    if Path(spec).exists():
        try:
            return PentagonLayout.from_dict(_read_json(spec))
        except (KeyError, TypeError, ValueError) as exc:
            raise CliError(f"{spec}: bad layout: {exc}") from None
    try:
        return preset(spec)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _local_to_json(local: dict[str, Clifford1]) -> dict[str, list[str]]:
    return {q: list(c.gates()) for q, c in local.items() if c != IDENTITY_1Q}


def _local_from_json(data: dict, names: Sequence[str]) -> dict[str, Clifford1]:
    return {q: Clifford1.from_gates(data.get(q, [])) for q in names}


def _load_graph(path: str) -> tuple[GraphState, dict[str, Clifford1] | None]:
    data = _read_json(path)
    try:
        g = GraphState.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"{path}: bad graph file: {exc}") from None
    local = _local_from_json(data["local"], g.names) if "local" in data else None
    return g, local


def _graph_json(g: GraphState, local: dict[str, Clifford1] | None) -> str:
    data = g.to_dict()
    if local is not None:
        data["local"] = _local_to_json(local)
    return _dump(data)


def _names(arg: str | None) -> list[str] | None:
    return [s.strip() for s in arg.split(",") if s.strip()] if arg else None


def _circular(g: GraphState) -> GraphState:
    if g.embedding is not None:
        return g
    return g.with_embedding(tuple(i / g.n for i in range(g.n)))


# subcommands ----------------------------------------------------------------


def cmd_build(args) -> int:
    layout = _load_layout(args.layout)
    state = build(layout)
    data = {
        "state": state.to_dict(),
        "names": list(layout.qubit_names()),
        "roles": list(layout.qubit_roles()),
        "embedding": list(layout.embedding()),
    }
    _write(args.out, _dump(data))
    return 0


def cmd_graphify(args) -> int:
    data = _read_json(args.inp)
    try:
        state = PhasedCheckMatrix.from_dict(data["state"])
        names, roles = data.get("names"), data.get("roles")
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"{args.inp}: bad state file: {exc}") from None
    if args.hadamard is not None:
        names_list = names or [str(i) for i in range(state.n)]
        hs = [names_list.index(q) if q in names_list else int(q) for q in _names(args.hadamard)]
        g, rec = graphify_with_hadamards(state, hs, names, roles)
    else:
        g, rec = to_graph_state(state, names=names, roles=roles)
    if data.get("embedding"):
        g = g.with_embedding(data["embedding"])
    local = local_cliffords(rec, g.names)
    _write(args.out, g.to_dot() if str(args.out).endswith(".dot") else _graph_json(g, local))
    if args.record:
        _write(args.record, _dump(rec.to_dict()))
    return 0


def cmd_optimize(args) -> int:
    g, local = _load_graph(args.inp)
    g = _circular(g)
    res = minimize(g, budget=args.budget, symmetries=rotation_symmetries(g))
    new_local = None
    if local is not None:
        new_local = {q: local[q].then(c) for q, c in zip(g.names, res.cliffords)}
    _write(args.out, _graph_json(res.graph, new_local))
    if args.witness:
        _write(args.witness, res.witness.to_text())
    print(
        f"edges {g.num_edges} -> {res.graph.num_edges}, max chord {res.graph.max_chord():.4f}, "
        f"center crossings {res.graph.center_crossings()}, explored {res.explored}"
        + (" (truncated)" if res.truncated else ""),
        file=sys.stderr,
    )
    return 0


def _code_from_args(path: str, bulk: str | None):
    g, local = _load_graph(path)
    try:
        return bulk_code(g, _names(bulk)), local
    except (RankError, ValueError) as exc:
        raise CliError(str(exc)) from None


def cmd_extract(args) -> int:
    code, _ = _code_from_args(args.graph, args.bulk)
    ls = extract_logicals(code)
    if args.reduce_weight:
        ls = reduce_weight(ls)
    problems = check_relations(ls)
    if problems:
        raise CliError("extracted operators violate: " + "; ".join(problems))
    text = ls.to_text(code.bulk_names())
    if not ls.exhaustive:
        text = "# weight search fell back to greedy descent\n" + text
    _write(args.out, text)
    return 0


def _read_logicals(path: str | None) -> LogicalSet | None:
    if path is None:
        return None
    try:
        return LogicalSet.from_text(Path(path).read_text())
    except ValueError as exc:
        raise CliError(f"{path}: {exc}") from None


def cmd_encode(args) -> int:
    code, _ = _code_from_args(args.code, args.bulk)
    enc = synthesize_encoder(code, _read_logicals(args.logicals))
    _write(args.out, enc.to_text())
    return 0


def cmd_decode_partial(args) -> int:
    code, local = _code_from_args(args.full, args.bulk)
    if local is None:
        raise CliError(f"{args.full}: graph file has no 'local' entry (produce it with graphify)")
    spec = _read_json(args.region)
    try:
        layout = _load_layout(spec.get("layout", "happy12"))
        region = spec["region"]
        region = layout.regions[region] if isinstance(region, str) else Region.from_dict(region)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliError(f"{args.region}: bad region file: {exc}") from None
    sub, region = graph_region(layout, region, spec.get("hadamard"))
    sub_code = bulk_code(sub.graph, region.order)
    region_map = {"E": region.bulk, "gamma": tuple(region.cut), "dE": region.boundary}
    try:
        dec = synthesize_partial_decoder((code, local), (sub_code, sub.local), region_map)
    except LabelingError as exc:
        raise CliError(f"region labels: {exc}") from None
    _write(args.out, dec.to_text())
    return 0


def _suite_ame(args) -> bool:
    g = ame6()
    sv = from_stabilizer(g.check_matrix())
    values = [reduced_entropy(sv, list(t)) for t in itertools.combinations(range(6), 3)]
    ok = sum(abs(v - 3.0) < 1e-10 for v in values)
    print(f"ame: {ok}/{len(values)} reductions at 3.0 bits (min {min(values):.12f}, max {max(values):.12f})")
    return ok == len(values)


def _suite_roundtrip(args) -> bool:
    layout = _load_layout(args.layout)
    full = graph_layout(layout)
    code = bulk_code(full.graph, layout.tensors)
    enc = synthesize_encoder(code)
    worst = 0.0
    for phi in random_inputs(layout.tensors, args.trials, args.seed):
        rest = code.boundary_names()
        start = phi.tensor(type(phi).product("+" * len(rest), rest))
        out = run(enc, start)
        bulk_plus = type(phi).product("+" * code.k, code.bulk_names())
        plus_overlap = np.real(np.trace(out.reduced_density(code.bulk_names()) @ np.outer(bulk_plus.data, bulk_plus.data.conj())))
        back = run(enc.inverse(), out)
        worst = max(worst, 1 - back.fidelity(start), 1 - plus_overlap)
    print(f"roundtrip: {args.trials} trials, worst infidelity {worst:.3e}")
    return worst < 1e-10


def _suite_recovery(args) -> bool:
    layout = _load_layout(args.layout)
    if not layout.regions:
        raise CliError("layout has no regions to recover")
    name = args.region or next(iter(layout.regions))
    setup = recovery_setup(layout, name)
    devs = [setup.deviation(phi) for phi in random_inputs(layout.tensors, args.trials, args.seed)]
    print(f"recovery[{name}]: {len(setup.qubits)} qubits, {args.trials} trials, worst deviation {max(devs):.3e}")
    return max(devs) < 1e-10


def _suite_rt(args) -> bool:
    layout = _load_layout(args.layout)
    name = args.region or next(iter(layout.regions))
    region = layout.regions[name]
    setup = recovery_setup(layout, name)
    ents = [
        reduced_entropy(setup.encode(phi), list(region.boundary))
        for phi in random_inputs(layout.tensors, args.trials, args.seed, product=True)
    ]
    spread = max(ents) - min(ents)
    value = round(ents[0])
    print(f"rt-entropy[{name}]: S(dE) = {ents[0]:.6f} bits over {args.trials} inputs (spread {spread:.1e}), |gamma| = {len(region.cut)}")
    return spread < 1e-8 and abs(ents[0] - value) < 1e-8


_SUITES = {"ame": _suite_ame, "roundtrip": _suite_roundtrip, "recovery": _suite_recovery, "rt-entropy": _suite_rt}


def cmd_verify(args) -> int:
    ok = _SUITES[args.suite](args)
    print("PASS" if ok else "FAIL")
    return 0 if ok else 1


def _pair(text: str) -> tuple[float, float]:
    try:
        value, delta = text.split(":")
        return float(value), float(delta)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected value:delta, got {text!r}") from None


def cmd_fidelity(args) -> int:
    est = estimate_fidelity(args.n1, args.n2, args.nm, f1=args.f1, f2=args.f2, fm=args.fm)
    print(est)
    return 0


# entry point ----------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="holocode", description="Holographic graph-code toolkit")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("build", help="contract a pentagon layout into a stabilizer state")
    s.add_argument("--layout", required=True, help="layout JSON file or preset name")
    s.add_argument("--out")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("graphify", help="map a state file to a graph state")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--out")
    s.add_argument("--record")
    s.add_argument("--hadamard", help="comma-separated qubits for the Hadamard layer")
    s.set_defaults(func=cmd_graphify)

    s = sub.add_parser("optimize", help="LC-minimize a graph")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    s.add_argument("--embedding", choices=["circular"], default="circular")
    s.add_argument("--out")
    s.add_argument("--witness")
    s.set_defaults(func=cmd_optimize)

    s = sub.add_parser("extract", help="code generators and logical operators")
    s.add_argument("--graph", required=True)
    s.add_argument("--bulk")
    s.add_argument("--out")
    s.add_argument("--reduce-weight", action="store_true")
    s.set_defaults(func=cmd_extract)

    s = sub.add_parser("encode", help="encoder circuit")
    s.add_argument("--code", required=True)
    s.add_argument("--bulk")
    s.add_argument("--logicals")
    s.add_argument("--out")
    s.set_defaults(func=cmd_encode)

    s = sub.add_parser("decode-partial", help="partial decoder circuit for a region")
    s.add_argument("--full", required=True)
    s.add_argument("--region", required=True)
    s.add_argument("--bulk")
    s.add_argument("--out")
    s.set_defaults(func=cmd_decode_partial)

    s = sub.add_parser("verify", help="oracle checks")
    s.add_argument("--suite", choices=sorted(_SUITES), required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--trials", type=int, default=10)
    s.add_argument("--layout", default="happy12")
    s.add_argument("--region")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("fidelity", help="circuit fidelity estimate")
    s.add_argument("--n1", type=int, default=0)
    s.add_argument("--n2", type=int, default=0)
    s.add_argument("--nm", type=int, default=0)
    s.add_argument("--f1", type=_pair, default=(1.0, 0.0))
    s.add_argument("--f2", type=_pair, default=(1.0, 0.0))
    s.add_argument("--fm", type=_pair, default=(1.0, 0.0))
    s.set_defaults(func=cmd_fidelity)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except QubitCapError as exc:
        print(f"holocode: oracle cap exceeded: {exc}", file=sys.stderr)
        return 3
    except (CliError, NotGraphableError, RankError, FileNotFoundError) as exc:
        print(f"holocode: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
