"""Batch command-line front end.

One subcommand per counting problem, plus `reduce` for the instance
transforms and `selftest` for the cross-oracle property battery.  On
success a single JSON report goes to stdout with the exact count as a
decimal string; diagnostics go to stderr.  Exit codes: 0 success, 1 domain
error (stable error name on stderr), 2 usage error.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from . import bp as bpm
from . import cnf as cnfm
from . import fo as fom
from . import homs as homm
from . import pdet as pdm
from . import reductions as redm
from . import walks as wkm
from .errors import CountingError
from .graphs import DEFAULT_LIMIT, graph_from_json, graph_to_json
from .selftest import run_selftest


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError:
        raise CountingError("file-not-found", path)
    except json.JSONDecodeError as exc:
        raise CountingError("malformed-json", f"{path}: {exc}")


def _digest(payload) -> str:
    return hashlib.sha256(
        json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    ).hexdigest()[:16]


def _report(value: int, gate_applied: bool, started: float, payload, key="count"):
    print(
        json.dumps(
            {
                key: str(value),
                "gateApplied": bool(gate_applied),
                "elapsedMs": int((time.monotonic() - started) * 1000),
                "instanceDigest": _digest(payload),
            }
        )
    )


def _endpoints(parts: dict, args, need_t=True) -> tuple[int, int]:
    s = args.s if args.s is not None else parts.get("s")
    t = args.t if args.t is not None else parts.get("t")
    if s is None or (need_t and t is None):
        raise CountingError("missing-endpoint", "supply --s/--t or file fields")
    return int(s), int(t if t is not None else 0)


def _load_cnf(parts: dict, args) -> cnfm.EdgeCNF:
    inline = parts.get("clauses")
    if args.cnf and inline is not None:
        raise CountingError("two-cnf-sources", "use --cnf or inline clauses, not both")
    if args.cnf:
        with open(args.cnf, "r", encoding="utf-8") as handle:
            return cnfm.parse_dimacs(handle.read())
    if inline is not None:
        return cnfm.EdgeCNF.from_dimacs_literals(inline)
    return cnfm.EdgeCNF.empty()


def _parse_bits(text: str, width: int, what: str) -> list[int]:
    if len(text) != width or any(c not in "01" for c in text):
        raise CountingError(
            "width-mismatch", f"{what} must be {width} bits of 0/1, got {text!r}"
        )
    return [int(c) for c in text]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paracount", description="Exact parameterised counting at desk scale."
    )
    parser.add_argument(
        "--limit",
        type=int,
        default=int(os.environ.get("PARACOUNT_LIMIT", DEFAULT_LIMIT)),
        help="cap on exhaustive enumeration states",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_command(name, help_text, *, s_t=True, a=False, k=True, b=False, cnf=False):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--graph", required=True)
        if s_t:
            cmd.add_argument("--s", type=int)
            cmd.add_argument("--t", type=int)
        if a:
            cmd.add_argument("--a", type=int, required=True)
        if k:
            cmd.add_argument("--k", type=int, required=True)
        if b:
            cmd.add_argument("--b", type=int, default=2)
        if cnf:
            cmd.add_argument("--cnf", help="DIMACS file; else inline 'clauses'")
        return cmd

    graph_command("reach", "s-t walks with exactly k vertices")
    graph_command("logreach", "s-t walks of a edges under the log gate", a=True, b=True)
    graph_command("logwalk", "all walks of a edges under the log gate", s_t=False, a=True, b=True)
    graph_command("reachcolour", "colour-respecting s-t walks")
    graph_command("reach2cnf", "CNF-constrained s-t walks of a edges", a=True, cnf=True)
    graph_command("cyclecover2cnf", "CNF-constrained cycle covers", s_t=False, a=True, cnf=True)

    mc = sub.add_parser("mc", help="satisfying assignments of a quantifier-free formula")
    mc.add_argument("--formula", required=True)
    mc.add_argument("--structure", required=True)
    mc.add_argument("--k", type=int, required=True)
    mc.add_argument("--local", action="store_true", help="use the locality sweep")
    mc.add_argument("--r", type=int, help="locality bound (default: computed)")
    mc.add_argument("--arity", type=int, help="arity bound (default: computed)")

    hom = sub.add_parser("hom", help="homomorphisms from the starred path")
    hom.add_argument("--n", type=int, required=True)
    hom.add_argument("--target", required=True)
    hom.add_argument("--k", type=int, required=True)
    hom.add_argument("--oracle", action="store_true", help="exhaustive map oracle")

    det = sub.add_parser("pdet", help="parameterised determinant of a 0/1 matrix")
    det.add_argument("--matrix", required=True)
    det.add_argument("--k", type=int, required=True)
    det.add_argument("--method", choices=["direct", "clow"], default="direct")

    bp = sub.add_parser("bp", help="branching-program acceptance and counting")
    bp.add_argument("--program", required=True)
    bp.add_argument("--x", required=True, help="ordinary input bits, e.g. 1011")
    bp.add_argument("--y", help="nondeterministic bits: report acceptance instead")
    bp.add_argument("--method", choices=["acc", "fast"], default="acc")

    red = sub.add_parser("reduce", help="run a count-preserving instance transform")
    red.add_argument("--name", required=True, choices=sorted(redm.standard_records()))
    red.add_argument("--in", dest="infile", required=True)
    red.add_argument("--out", dest="outfile", required=True)

    st = sub.add_parser("selftest", help="cross-oracle property battery")
    st.add_argument("--seed", type=int, default=7)
    st.add_argument("--scale", choices=["smoke", "full"], default="smoke")
    return parser


def _run(args) -> int:
    started = time.monotonic()

    if args.command == "selftest":
        results = run_selftest(args.seed, args.scale)
        ok = True
        for name, passed, failures in results:
            print(f"{'PASS' if passed else 'FAIL'}  {name}")
            for failure in failures[:5]:
                print(f"      {failure}", file=sys.stderr)
            ok = ok and passed
        print(f"{'OK' if ok else 'FAILED'}  seed={args.seed} scale={args.scale}")
        return 0 if ok else 1

    if args.command == "reduce":
        obj = _load_json(args.infile)
        name = args.name
        if name == "hom-to-reach":
            target = fom.structure_from_json(obj["target"])
            graph, s, t, kp = redm.reduce_hom_to_reach(int(obj["n"]), target, int(obj["k"]))
            out = graph_to_json(graph, s=s, t=t)
            sidecar = {"name": name, "kPrime": kp}
        elif name == "reachcolour-to-hom":
            parts = graph_from_json(obj["graph"])
            pattern, target, kp = redm.reduce_reach_colour_to_hom(
                parts["colouring"], int(obj["s"]), int(obj["t"]), int(obj["k"])
            )
            out = fom.structure_to_json(target)
            sidecar = {"name": name, "kPrime": kp, "patternN": pattern.n}
        elif name == "reach-to-mc":
            parts = graph_from_json(obj["graph"])
            phi, structure, kp = redm.reduce_reach_to_mc(
                parts["graph"], int(obj["s"]), int(obj["t"]), int(obj["k"])
            )
            out = {
                "formula": fom.formula_node_to_json(phi.root),
                "structure": fom.structure_to_json(structure),
            }
            sidecar = {"name": name, "kPrime": kp}
        else:  # reach-to-pdet
            parts = graph_from_json(obj["graph"])
            matrix, kp, sign = redm.reduce_reach_to_pdet(
                parts["graph"], int(obj["s"]), int(obj["t"]), int(obj["k"])
            )
            out = pdm.matrix_to_json(matrix)
            sidecar = {"name": name, "kPrime": kp, "recoverySign": sign}
        with open(args.outfile, "w", encoding="utf-8") as handle:
            json.dump(out, handle, indent=1, sort_keys=True)
            handle.write("\n")
        with open(args.outfile + ".record.json", "w", encoding="utf-8") as handle:
            json.dump(sidecar, handle, indent=1, sort_keys=True)
            handle.write("\n")
        print(json.dumps({**sidecar, "out": args.outfile}))
        return 0

    if args.command in ("reach", "logreach", "logwalk", "reachcolour",
                        "reach2cnf", "cyclecover2cnf"):
        extra = {"clauses"} if args.command.endswith("cnf") else set()
        obj = _load_json(args.graph)
        parts = graph_from_json(obj, extra_fields=extra)
        g = parts["graph"]
        payload = {"command": args.command, "instance": obj, "k": args.k}
        if args.command == "reach":
            s, t = _endpoints(parts, args)
            _report(wkm.count_reach(g, s, t, args.k), False, started, payload)
        elif args.command == "logreach":
            s, t = _endpoints(parts, args)
            gate = not wkm.log_gate_passes(args.a, args.k, g.n)
            count = wkm.count_log_reach_b(g, s, t, args.a, args.k, args.b)
            _report(count, gate, started, {**payload, "a": args.a, "b": args.b})
        elif args.command == "logwalk":
            gate = not wkm.log_gate_passes(args.a, args.k, g.n)
            count = wkm.count_log_walk_b(g, args.a, args.k, args.b)
            _report(count, gate, started, {**payload, "a": args.a, "b": args.b})
        elif args.command == "reachcolour":
            if "colouring" not in parts:
                raise CountingError("colouring-incomplete", "instance has no colours")
            s, t = _endpoints(parts, args)
            vc = parts["colouring"]
            count = wkm.count_reach_colour(vc, s, t, args.k)
            _report(count, vc.m != args.k, started, payload)
        elif args.command == "reach2cnf":
            s, t = _endpoints(parts, args)
            phi = _load_cnf(parts, args)
            gate = not cnfm.reach2cnf_gate_passes(g, phi, args.a, args.k)
            count = cnfm.count_log_reach2_cnf(g, s, t, phi, args.a, args.k)
            _report(count, gate, started,
                    {**payload, "a": args.a, "cnf": phi.to_dimacs_literals()})
        else:  # cyclecover2cnf
            phi = _load_cnf(parts, args)
            gate = not cnfm.cyclecover_gate_passes(g, phi, args.a)
            count = cnfm.count_cycle_cover2_cnf(g, phi, args.a, args.k)
            _report(count, gate, started,
                    {**payload, "a": args.a, "cnf": phi.to_dimacs_literals()})
        return 0

    if args.command == "mc":
        phi = fom.formula_from_json(_load_json(args.formula))
        structure = fom.structure_from_json(_load_json(args.structure))
        if args.local:
            r = args.r if args.r is not None else fom.locality_radius(phi)
            arity = args.arity if args.arity is not None else fom.max_arity(phi)
            count = fom.count_mc_local(phi, structure, args.k, r, arity)
        else:
            count = fom.count_mc(phi, structure, args.k)
        payload = {"formula": fom.formula_node_to_json(phi.root),
                   "structure": fom.structure_to_json(structure), "k": args.k}
        _report(count, args.k != phi.size, started, payload)
        return 0

    if args.command == "hom":
        target = fom.structure_from_json(_load_json(args.target))
        if args.oracle:
            pattern = homm.make_path_star(args.n).structure
            count = (
                homm.count_hom_oracle(pattern, target, args.limit)
                if args.n <= args.k
                else 0
            )
        else:
            count = homm.count_hom_path_star(args.n, target, args.k)
        payload = {"n": args.n, "k": args.k,
                   "target": fom.structure_to_json(target)}
        _report(count, args.n > args.k, started, payload)
        return 0

    if args.command == "pdet":
        matrix = pdm.matrix_from_json(_load_json(args.matrix))
        if args.method == "clow":
            value = pdm.pdet_clow(matrix, args.k, args.limit)
        else:
            value = pdm.pdet_direct(matrix, args.k)
        payload = {"matrix": pdm.matrix_to_json(matrix), "k": args.k,
                   "method": args.method}
        _report(value, False, started, payload, key="value")
        return 0

    if args.command == "bp":
        program = bpm.bp_from_json(_load_json(args.program))
        x = _parse_bits(args.x, program.num_x, "--x")
        payload = {"program": bpm.bp_to_json(program), "x": args.x, "y": args.y}
        if args.y is not None:
            y = _parse_bits(args.y, program.num_y, "--y")
            _report(int(bpm.bp_accepts(program, x, y)), False, started, payload)
        elif args.method == "fast":
            _report(bpm.bp_count_fast(program, x), False, started, payload)
        else:
            _report(bpm.bp_count_acc(program, x), False, started, payload)
        return 0

    raise CountingError("unknown-command", args.command)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args)
    except CountingError as exc:
        print(f"error: {exc.code}: {exc.message}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: io-error: {exc}", file=sys.stderr)
        return 1
    except (TypeError, ValueError, KeyError) as exc:
        print(f"error: malformed-instance: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
