"""
Command-line surface of the workbench.

Every command is a thin wrapper over one library operation and prints JSON
(or DOT) on stdout; logs go to stderr. Exit codes: 0 success, 1 invalid
input or usage, 2 capacity, 3 internal consistency failure.
"""
import argparse
import json
import logging
import os
import sys
from typing import Callable, Dict, List, Optional

from src.config import config_info, get_wpl2_window, setup_logging
from src.core_lattice import QuiverSpec, parse_quiver, require_type_a
from src.errors import ConsistencyError, InvalidInputError, SodLabError
from src.exceptional import enumerate_full_exceptional_sequences, left_mutate, parse_sequence, right_mutate
from src.hn_filtration import hn_filtration, normalize_tower
from src.mutation_graph import (
    build_graph,
    check_braid_relations,
    check_connectedness_criterion,
    component_graph,
    export_dot,
    filtration_graph,
    is_connected,
    reduction_decomposition,
    tstability_graph,
)
from src.objects import DerivedObject, parse_intervals, parse_object, split_top_level
from src.serialization import (
    DerivedObjectRecord,
    FiltrationRecord,
    GraphRecord,
    HNRecord,
    SequenceRecord,
    SodRecord,
    Wpl2SequenceRecord,
    dump,
    dump_list,
)
from src.sod_tstab import (
    LEFT,
    RIGHT,
    chi,
    chi_inv,
    enumerate_all_sods,
    eta,
    finer_map,
    left_chain,
    parse_sod,
    parse_tstability,
    refine_to_finest,
    xi,
)
from src.typea_engine import ar_quiver, hom_degrees, hom_dim, perp, project_quotient, tau, thick_closure
from src.complexes import cone, hom_basis, present
from src.wpl2 import (
    LEFT as WPL2_LEFT,
    parse_wpl2_object,
    parse_wpl2_sequence,
    wpl2_enumerate_sequences,
    wpl2_hom_degrees,
    wpl2_hom_dim,
    wpl2_mutate,
    wpl2_windowed_graph,
)

logger = logging.getLogger(__name__)

DEFAULT_WPL2_SEED = "(O(-2),O,S10)"


class _Parser(argparse.ArgumentParser):
    """Usage errors become InvalidInputError so they map onto exit code 1."""

    def error(self, message):
        raise InvalidInputError(f"{self.prog}: {message}")


def _json(data) -> str:
    return json.dumps(data, separators=(",", ":"))


def _type_a(args) -> int:
    return require_type_a(parse_quiver(args.quiver), args.command)


def _degrees_json(degrees: Dict[int, int]) -> str:
    return _json({str(k): v for k, v in degrees.items()})


def cmd_hom(args) -> str:
    n = _type_a(args)
    X, Y = parse_object(n, args.x), parse_object(n, args.y)
    if args.degree is not None:
        return _json({"degree": args.degree, "dim": hom_dim(X, Y, args.degree)})
    return _degrees_json(hom_degrees(X, Y))


def cmd_exc_seqs(args) -> str:
    sequences = enumerate_full_exceptional_sequences(parse_quiver(args.quiver))
    return dump_list([SequenceRecord.from_sequence(s) for s in sequences])


def cmd_mutate(args) -> str:
    n = _type_a(args)
    seq = parse_sequence(n, args.sequence)
    step = left_mutate if args.direction == LEFT else right_mutate
    return dump(SequenceRecord.from_sequence(step(seq, args.index)))


def cmd_sods(args) -> str:
    sods = enumerate_all_sods(parse_quiver(args.quiver), finest_only=args.finest)
    return dump_list([SodRecord.from_sod(s) for s in sods])


def _tower(n: int, text: str):
    body = text.strip()
    if body.startswith("[") and body.endswith("]") and "@" in body:
        body = body[1:-1]
    factors = []
    for part in split_top_level(body, ","):
        obj, sep, phase = part.rpartition("@")
        if not sep:
            raise InvalidInputError(f"Tower factor {part!r} needs the form object@phase")
        try:
            factors.append((parse_object(n, obj), int(phase)))
        except ValueError:
            raise InvalidInputError(f"Bad phase in tower factor {part!r}")
    return factors


def cmd_hn(args) -> str:
    n = _type_a(args)
    t = parse_tstability(n, args.tstab)
    return dump(HNRecord.from_result(hn_filtration(t, parse_object(n, args.object))))


def cmd_normalize_tower(args) -> str:
    n = _type_a(args)
    t = parse_tstability(n, args.tstab)
    result = normalize_tower(t, parse_object(n, args.object), _tower(n, args.tower))
    return dump(HNRecord.from_result(result))


def cmd_xi(args) -> str:
    n = _type_a(args)
    return dump(FiltrationRecord.from_filtration(xi(parse_sod(n, args.sod))))


def cmd_left_chain(args) -> str:
    n = _type_a(args)
    return dump(FiltrationRecord.from_filtration(left_chain(xi(parse_sod(n, args.sod)))))


def cmd_eta(args) -> str:
    n = _type_a(args)
    return dump(SodRecord.from_sod(eta(parse_tstability(n, args.tstab))))


def cmd_chi(args) -> str:
    n = _type_a(args)
    if args.sod is not None:
        seq = chi_inv(parse_sod(n, args.sod))
        return _json(None) if seq is None else dump(SequenceRecord.from_sequence(seq))
    if args.sequence is None:
        raise InvalidInputError("chi needs --sequence or --sod")
    return dump(SodRecord.from_sod(chi(parse_sequence(n, args.sequence))))


def cmd_finer(args) -> str:
    n = _type_a(args)
    mapping = finer_map(parse_sod(n, args.a), parse_sod(n, args.b))
    return _json({"finer": mapping is not None, "map": list(mapping) if mapping else None})


def cmd_refine(args) -> str:
    n = _type_a(args)
    return dump(SodRecord.from_sod(refine_to_finest(parse_sod(n, args.sod))))


def _graph_output(g, args, name: str) -> str:
    if args.dot:
        return export_dot(g, name).rstrip("\n")
    return dump(GraphRecord.from_graph(g))


def cmd_graph(args) -> str:
    q = parse_quiver(args.quiver)
    builders: Dict[str, Callable[[QuiverSpec], object]] = {
        "sod": build_graph,
        "filtration": filtration_graph,
        "tstability": tstability_graph,
    }
    return _graph_output(builders[args.view](q), args, f"{args.view}_graph")


def cmd_reduce(args) -> str:
    g = build_graph(parse_quiver(args.quiver))
    decomposition = reduction_decomposition(g)
    groups = [
        {"last": U.name(), "quotient": decomposition.quotients[U].name(), "vertices": members}
        for U, members in decomposition.groups.items()
    ]
    return _json({"sizes": decomposition.sizes(), "groups": groups})


def cmd_component_graph(args) -> str:
    g = build_graph(parse_quiver(args.quiver))
    return _graph_output(component_graph(g), args, "component_graph")


def cmd_check_braid(args) -> str:
    return _json(check_braid_relations(parse_quiver(args.quiver)))


def cmd_check_criterion(args) -> str:
    n = _type_a(args)
    q = parse_quiver(args.quiver)
    result = check_connectedness_criterion(q)
    connected = is_connected(build_graph(q))
    if result.holds != connected:
        raise ConsistencyError(f"Connectedness criterion says {result.holds}, the mutation graph says {connected}")
    chains = [
        {"from": u.label(n), "to": v.label(n), "chain": None if chain is None else [w.label(n) for w in chain]}
        for (u, v), chain in sorted(result.witness_chains.items(), key=lambda item: item[0])
    ]
    return _json({"criterion": result.holds, "connected": connected, "witness_chains": chains})


def cmd_ar_quiver(args) -> str:
    n = _type_a(args)
    graph = ar_quiver(parse_quiver(args.quiver))
    vertices = sorted(graph.nodes)
    position = {x: k for k, x in enumerate(vertices)}
    return _json({
        "vertices": [x.label(n) for x in vertices],
        "tau": [graph.nodes[x]["tau"] for x in vertices],
        "edges": sorted([position[u], position[v]] for u, v in graph.edges),
    })


def cmd_tau(args) -> str:
    n = _type_a(args)
    translates = []
    for x in parse_intervals(n, args.object):
        image = tau(n, x)
        translates.append(image.label(n) if image else None)
    return _json(translates)


def cmd_perp(args) -> str:
    n = _type_a(args)
    S = thick_closure(parse_intervals(n, args.gens), n)
    return _json(perp(S, args.side).member_names())


def cmd_closure(args) -> str:
    n = _type_a(args)
    return _json(thick_closure(parse_intervals(n, args.gens), n).member_names())


def cmd_project(args) -> str:
    n = _type_a(args)
    U = thick_closure(parse_intervals(n, args.subcat), n)
    return dump(DerivedObjectRecord.from_object(project_quotient(U, parse_object(n, args.object))))


def cmd_cone(args) -> str:
    n = _type_a(args)
    X, Y = present(parse_object(n, args.x)), present(parse_object(n, args.y))
    basis = hom_basis(X, Y, args.degree)
    if not 0 <= args.index < len(basis):
        raise InvalidInputError(f"Hom in degree {args.degree} has {len(basis)} basis maps, index {args.index} given")
    result: DerivedObject = cone(basis[args.index])
    return dump(DerivedObjectRecord.from_object(result))


def cmd_wpl2_hom(args) -> str:
    X, Y = parse_wpl2_object(args.x), parse_wpl2_object(args.y)
    if args.degree is not None:
        return _json({"degree": args.degree, "dim": wpl2_hom_dim(X, Y, args.degree)})
    return _degrees_json(wpl2_hom_degrees(X, Y))


def cmd_wpl2_seqs(args) -> str:
    return dump_list([Wpl2SequenceRecord.from_sequence(s) for s in wpl2_enumerate_sequences(args.bound)])


def cmd_wpl2_mutate(args) -> str:
    seq = parse_wpl2_sequence(args.sequence)
    return dump(Wpl2SequenceRecord.from_sequence(wpl2_mutate(seq, args.index, args.direction, args.window)))


def cmd_wpl2_graph(args) -> str:
    g = wpl2_windowed_graph(parse_wpl2_sequence(args.seed), args.radius, args.window)
    return _graph_output(g, args, "wpl2_graph")


def cmd_config(args) -> str:
    return _json({**config_info(), "wpl2_window": args.window})


def _add_quiver(p):
    p.add_argument("--quiver", required=True, help='QuiverSpec JSON, e.g. {"kind":"typeA","n":3}')


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sodlab", description="SODs, t-stabilities and mutation graphs on D^b(A_n) and X(2).")
    parser.add_argument("--verbose", action="store_true", help="Debug logging on stderr")
    parser.add_argument("--threads", type=int, default=None, help="Worker threads (overrides SODLAB_THREADS)")
    parser.add_argument("--window", type=int, default=None, help="X(2) line bundle window (overrides SODLAB_WPL2_WINDOW)")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def command(name: str, handler, help_text: str, quiver: bool = True):
        p = sub.add_parser(name, help=help_text)
        if quiver:
            _add_quiver(p)
        p.set_defaults(handler=handler)
        return p

    command("config", cmd_config, "Effective settings", quiver=False)

    p = command("hom", cmd_hom, "Graded Hom dimensions")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--degree", type=int, default=None)

    command("exc-seqs", cmd_exc_seqs, "Full exceptional sequences")

    p = command("mutate", cmd_mutate, "Mutate an exceptional sequence")
    p.add_argument("--sequence", required=True)
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--direction", choices=[LEFT, RIGHT], default=LEFT)

    p = command("sods", cmd_sods, "All nontrivial SODs")
    p.add_argument("--finest", action="store_true")

    for name, handler in (("hn", cmd_hn), ("normalize-tower", cmd_normalize_tower)):
        p = command(name, handler, "HN filtration" if name == "hn" else "Normalize a semistable tower")
        p.add_argument("--tstab", required=True, help="Pieces by increasing phase, e.g. '(P1|S2|I2)'")
        p.add_argument("--object", required=True)
        if name == "normalize-tower":
            p.add_argument("--tower", required=True, help="Factors top-down, e.g. '[I2[-1]@3, P1@1]'")

    for name, handler in (("xi", cmd_xi), ("left-chain", cmd_left_chain), ("refine", cmd_refine)):
        p = command(name, handler, f"{name} of an SOD")
        p.add_argument("--sod", required=True)

    p = command("eta", cmd_eta, "SOD of a t-stability")
    p.add_argument("--tstab", required=True)

    p = command("chi", cmd_chi, "SOD of a sequence, or the sequence of a finest SOD")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--sequence")
    group.add_argument("--sod")

    p = command("finer", cmd_finer, "Is SOD a finer than SOD b")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)

    p = command("graph", cmd_graph, "Mutation graph of finest SODs")
    p.add_argument("--view", choices=["sod", "filtration", "tstability"], default="sod")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--dot", action="store_true")
    fmt.add_argument("--json", action="store_true")

    command("reduce", cmd_reduce, "Reduction decomposition by last block")
    p = command("component-graph", cmd_component_graph, "Graph of reduction groups")
    p.add_argument("--dot", action="store_true")
    command("check-braid", cmd_check_braid, "Braid and commutation relations of rho")
    command("check-criterion", cmd_check_criterion, "Connectedness criterion against direct connectivity")
    command("ar-quiver", cmd_ar_quiver, "Auslander-Reiten quiver")

    p = command("tau", cmd_tau, "Auslander-Reiten translates")
    p.add_argument("--object", required=True, help="Comma separated interval tokens")

    p = command("perp", cmd_perp, "Perpendicular category of the closure of generators")
    p.add_argument("--gens", required=True)
    p.add_argument("--side", choices=[RIGHT, LEFT], default=RIGHT)

    p = command("closure", cmd_closure, "Thick closure of generators")
    p.add_argument("--gens", required=True)

    p = command("project", cmd_project, "Image of an object in D/U")
    p.add_argument("--subcat", required=True, help="Generators of U")
    p.add_argument("--object", required=True)

    p = command("cone", cmd_cone, "Cone of a basis map of Hom(X, Y[k])")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--degree", type=int, default=0)
    p.add_argument("--index", type=int, default=0)

    w = command("wpl2", None, "Weighted projective line X(2)", quiver=False)
    wsub = w.add_subparsers(dest="wpl2_command", parser_class=_Parser)
    p = wsub.add_parser("hom", help="Graded Hom dimensions")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--degree", type=int, default=None)
    p.set_defaults(handler=cmd_wpl2_hom)
    p = wsub.add_parser("seqs", help="Full exceptional triples in a degree window")
    p.add_argument("--bound", type=int, default=2, help="Line bundles O(m) with |m| <= bound")
    p.set_defaults(handler=cmd_wpl2_seqs)
    p = wsub.add_parser("mutate", help="Mutate a triple")
    p.add_argument("--sequence", required=True)
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--direction", choices=[WPL2_LEFT, RIGHT], default=WPL2_LEFT)
    p.set_defaults(handler=cmd_wpl2_mutate)
    p = wsub.add_parser("graph", help="Windowed mutation graph")
    p.add_argument("--seed", default=DEFAULT_WPL2_SEED)
    p.add_argument("--radius", type=int, default=4)
    p.add_argument("--dot", action="store_true")
    p.set_defaults(handler=cmd_wpl2_graph)
    return parser


def run(argv: Optional[List[str]] = None) -> str:
    """Parse argv and return the command output; errors propagate."""
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose)
    if args.threads is not None:
        if args.threads < 1:
            raise InvalidInputError("--threads must be at least 1")
        os.environ["SODLAB_THREADS"] = str(args.threads)
    if args.window is None:
        args.window = get_wpl2_window()
    if getattr(args, "handler", None) is None:
        raise InvalidInputError(parser.format_usage().strip())
    return args.handler(args)


def main(argv: Optional[List[str]] = None) -> int:
    try:
        output = run(argv)
    except SodLabError as e:
        print(f"Error: {e}", file=sys.stderr)
        return e.exit_code
    print(output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
