"""Command-line front end: ``workbench <subcommand> --p <odd prime> ...``.

Exit status 0 on success, 1 when an internal invariant fails, 2 on usage
errors.  JSON reports carry ``"schema": 1`` and decimal-string numbers;
the run manifest (with wall time) goes to a ``.manifest.json`` sidecar when
``--json`` is given and to stderr otherwise, so reports stay byte-stable.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .finite_lie import InvariantError, is_prime

SCHEMA = 1
SL3_PARABOLICS = ("B", "P1", "P2")
SP4_PARABOLICS = ("G0", "G1", "G2")


def odd_prime(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if p < 3 or not is_prime(p):
        raise argparse.ArgumentTypeError(f"{p} is not an odd prime")
    return p


def field_char(text: str) -> int:
    try:
        q = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if q != 0 and not is_prime(q):
        raise argparse.ArgumentTypeError(f"{q} is neither 0 nor a prime")
    return q


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="workbench", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, help_, group=True, json_out=True):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--p", type=odd_prime, required=True, help="odd prime level")
        if group:
            sp.add_argument("--group", choices=("sl3", "sp4"), default="sl3")
        if json_out:
            sp.add_argument("--json", type=Path, metavar="PATH", help="write a JSON report")
        return sp

    add("orders", "group orders, stabilizer orders and orbit counts")
    b = add("building", "mod-p building: counts, H_1 rank, exports")
    b.add_argument("--edge-list", type=Path, metavar="PATH", help="write 'u v' edge lines")
    b.add_argument("--quotient", action="store_true", help="use the Gamma(p)-quotient graph instead")
    add("generators", "free generators of Gamma_2(p)", group=False)
    par = add("parabolic", "cohomology of a parabolic meet Gamma(p)")
    par.add_argument("--which", choices=SL3_PARABOLICS + SP4_PARABOLICS, required=True)
    les = add("les", "rank table of the equivariant long exact sequence")
    les.add_argument("--field-char", type=field_char, default=0, metavar="Q")
    add("bounds", "Betti lower bound (beta_3 for sl3, beta_4 for sp4)")
    add("verify-all", "run every cross-check at this level", group=False)
    return ap


# --------------------------------------------------------------------------
# subcommands: each returns (text, json payload)


def _orders(args):
    from .finite_lie import sl3_double_coset_counts, sp4_indices
    rep = sl3_double_coset_counts(args.p) if args.group == "sl3" else sp4_indices(args.p)
    lines = [f"|{rep.group}(F_{rep.p})| = {rep.group_order}"]
    lines += [f"|{k}(p)| = {v}" for k, v in rep.stabilizer_orders.items()]
    lines += [f"{k} = {v}" for k, v in rep.indices.items()]
    return "\n".join(lines), rep.to_json()


def _building(args):
    from .building import build_building, congruence_quotient_graph, graph_homology
    g = congruence_quotient_graph(args.p, args.group) if args.quotient else build_building(args.group, args.p)
    h0, h1 = graph_homology(g)
    if args.edge_list:
        args.edge_list.write_text(g.edge_list())
    payload = g.to_json()
    payload["homology"] = {"h0": str(h0), "h1": str(h1)}
    kind = "Gamma(p)-quotient of the building" if g.quotient else "building"
    text = (f"{g.kind} {kind}, p = {g.p}: {len(g.left_vertices)} + {len(g.right_vertices)} vertices, "
            f"{len(g.edges)} edges, connected, rank H_0 = {h0}, rank H_1 = {h1}")
    return text, payload


def _generators(args):
    from .congruence import congruence_generators, format_word
    g = congruence_generators(args.p)
    lines = [f"Gamma_2({g.p}) is free of rank {g.rank}"]
    for m, w in zip(g.generators, g.schreier_words):
        lines.append(f"  {m.tolist()}   {format_word(w)}")
    return "\n".join(lines), g.to_json()


def _parabolic(args):
    from .cohomology import parabolic_cohomology
    allowed = SL3_PARABOLICS if args.group == "sl3" else SP4_PARABOLICS
    if args.which not in allowed:
        raise UsageError(f"--which {args.which} is not a parabolic of {args.group}")
    h = parabolic_cohomology(args.group, args.p, args.which)
    return h.table(), h.to_json()


def _les(args):
    from .assembly import build_les, forced_h1_dimension
    from .cohomology import h1_natural_plus_dual
    if args.field_char == args.p:
        raise UsageError("--field-char must differ from --p")
    rep = build_les(args.p, args.group, args.field_char)
    payload = rep.to_json()
    text = rep.table()
    if args.group == "sl3":
        x = forced_h1_dimension(args.p, args.field_char)
        h1 = h1_natural_plus_dual(args.p)
        payload["forced_h1_dimension"] = str(x)
        payload["h1_natural_plus_dual"] = h1.to_json()
        text += f"\n  dim H^1(Gamma_2(p), M + M*) forced by chi = 0: {x}"
        text += f"\n  H^1(Gamma_2(p), M + M*) over Z: {h1}"
    return text, payload


def _bounds(args):
    from .assembly import betti3_lower_bound, betti4_lower_bound
    if args.group == "sl3":
        value, what = betti3_lower_bound(args.p), "beta_3"
    else:
        value, what = betti4_lower_bound(args.p), "beta_4"
    return str(value), {"group": args.group, "p": str(args.p), "quantity": what, "lower_bound": str(value)}


def _verify_all(args):
    from .verify import run_checks
    results = run_checks(args.p)
    lines = []
    failed = False
    for r in results:
        lines.append(r.line())
        failed |= r.status == "FAIL"
    payload = {"p": str(args.p), "checks": [r.to_json() for r in results]}
    if failed:
        raise CheckFailure("\n".join(lines), payload)
    return "\n".join(lines), payload


COMMANDS = {
    "orders": _orders,
    "building": _building,
    "generators": _generators,
    "parabolic": _parabolic,
    "les": _les,
    "bounds": _bounds,
    "verify-all": _verify_all,
}


class UsageError(Exception):
    pass


class CheckFailure(Exception):
    def __init__(self, text, payload):
        super().__init__(text)
        self.text = text
        self.payload = payload


def _emit(args, text, payload, started) -> None:
    print(text)
    manifest = {
        "command": args.command,
        "p": str(args.p),
        "group": getattr(args, "group", None),
        "output_path": str(args.json) if getattr(args, "json", None) else None,
        "tool_version": __version__,
        "wall_time": f"{time.perf_counter() - started:.3f}",
    }
    if getattr(args, "json", None):
        doc = {"schema": SCHEMA, "command": args.command, "result": payload}
        args.json.write_text(json.dumps(doc, sort_keys=True, indent=1) + "\n")
        Path(str(args.json) + ".manifest.json").write_text(json.dumps(manifest, sort_keys=True) + "\n")
    else:
        print("manifest: " + json.dumps(manifest, sort_keys=True), file=sys.stderr)


def main(argv=None) -> int:
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:         # argparse already printed usage
        return int(exc.code or 0)
    started = time.perf_counter()
    try:
        text, payload = COMMANDS[args.command](args)
    except UsageError as exc:
        ap.print_usage(sys.stderr)
        print(f"workbench: error: {exc}", file=sys.stderr)
        return 2
    except CheckFailure as exc:
        _emit(args, exc.text, exc.payload, started)
        return 1
    except InvariantError as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return 1
    _emit(args, text, payload, started)
    return 0


def run(command_line: str | list[str]) -> int:
    argv = command_line.split() if isinstance(command_line, str) else list(command_line)
    if argv and argv[0] == "workbench":
        argv = argv[1:]
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
