"""Command-line entry point: ``orderlab <subcommand> ...``.

Every run prints one JSON envelope.  Exit codes: 0 pass, 1 fail (a
certificate or a violated invariant), 2 inconclusive (a bounded search ran
out), 3 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from importlib import resources

from . import __version__

EXIT = {"pass": 0, "fail": 1, "inconclusive": 2}
USAGE = 3

SUBCOMMANDS = ("decompose", "decompose-stats", "order-check", "witte", "realize", "euler",
               "coboundary", "orbits", "holder", "navas-check")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- input helpers ---------------------------------------------------------------

def _load_json(path):
    if path is None:
        raise UsageError("missing input file")
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: malformed JSON: {exc.msg}") from None


def _need(args, *names):
    for nm in names:
        if getattr(args, nm) is None:
            raise UsageError(f"--{nm.replace('_', '-')} is required")


def _q(x) -> str:
    return str(x)


def _sign(text):
    from .certificates import Sign
    for s in Sign:
        if text == s.value or text.lower() == s.name.lower():
            return s
    raise UsageError(f"bad sign {text!r}; use '+', '-' or '0'")


def _matrix_group(gens_json):
    from .exact import MatrixGroup, matrix_from_json
    if not isinstance(gens_json, dict) or not gens_json:
        raise UsageError('"generators" must be a non-empty object of matrices')
    return MatrixGroup({str(k): matrix_from_json(v) for k, v in gens_json.items()})


def _table_cone(data, group=None):
    from .exact import GroupWord
    from .orders import TableCone
    if group is None:
        group = _matrix_group(data.get("generators"))
    entries = {}
    for item in data.get("entries", []):
        w = GroupWord.parse(item["word"])
        entries[group.evaluate(w).rows] = _sign(item["sign"])
    default = data.get("default", "lex")
    if default not in ("lex", "positive", "negative", "reject"):
        raise UsageError(f"unknown default rule {default!r}")
    return TableCone(group, entries, default)


# -- subcommands --------------------------------------------------------------------

def cmd_decompose(args):
    from .decomposition import decompose, minimal_decomposition, SearchBudgetExceeded
    from .exact import matrix_from_json, SpecialLinearElement
    _need(args, "input")
    data = _load_json(args.input)
    m = matrix_from_json(data.get("matrix", data) if isinstance(data, dict) else data)
    if not isinstance(m, SpecialLinearElement):
        raise UsageError("matrix must have determinant 1")
    if args.ring == "z" and not m.is_integral():
        raise UsageError("ring z needs an integer matrix")
    dec = decompose(m, args.ring)
    result = dec.to_json()
    result["roundTrip"] = dec.product() == m
    verdict = "pass" if result["roundTrip"] else "fail"
    if args.minimal:
        try:
            best = minimal_decomposition(m, args.coeff_bound, args.length_bound, args.node_budget)
        except SearchBudgetExceeded as exc:
            result["minimal"] = {"status": "budget-exceeded", "reason": str(exc)}
            return result, "inconclusive"
        result["minimal"] = ({"status": "none-within-bound"} if best is None else
                             {"status": "found", "count": best.count,
                              "factors": [f.to_json() for f in best.factors]})
        if best is None and verdict == "pass":
            verdict = "inconclusive"
    return result, verdict


def cmd_decompose_stats(args):
    from .decomposition import decomposition_stats
    stats = decomposition_stats(args.n, args.samples, args.word_length, args.seed,
                                args.ring, args.coeff_bound)
    result = stats.to_json()
    verdict = "pass"
    if args.max_count is not None:
        result["maxCountBound"] = args.max_count
        verdict = "pass" if stats.max_count <= args.max_count else "fail"
    return result, verdict


def cmd_order_check(args):
    from .certificates import UndecidableQuery, ViolationFound
    from .orders import check_cone_axioms, word_ball
    _need(args, "cone")
    table = _table_cone(_load_json(args.cone))
    ball = word_ball(table.group, args.ball_radius)
    try:
        rep = check_cone_axioms(table.cone(), ball)
    except UndecidableQuery as exc:
        return {"passed": None, "undecided": str(exc.word), "reason": exc.reason}, "inconclusive"
    except ViolationFound as exc:
        rep = exc.certificate
    if hasattr(rep, "violation"):
        return {"passed": False, "elements": len(ball), "certificate": rep.to_json()}, "fail"
    return {"passed": True, "elements": rep.elements, "pairsChecked": rep.pairs_checked,
            "certificate": None}, "pass"


def _witte_oracle(spec, k, seed):
    from .circle.line import PLLineMap
    from .orders import ActionOrder, ConeOrder, GreedyOracle
    from .witte import WitteSystem
    group = WitteSystem(k).group()
    kind, _, path = spec.partition(":")
    if kind == "greedy":
        s = seed if not path else int(path)
        return lambda: GreedyOracle(group, seed=s)
    if kind == "cone" and path:
        data = _load_json(path)
        if "generators" in data:
            supplied = _matrix_group(data["generators"])
            if supplied.generators != group.generators:
                raise UsageError("cone file generators do not match the hexagon matrices")
        table = _table_cone(data, group)
        return lambda: ConeOrder(table.cone())
    if kind == "action" and path:
        data = _load_json(path)
        gens = data.get("generators", {})
        if set(gens) != set(group.generators):
            raise UsageError("action file must give maps for a1 .. a6")
        action = {g: PLLineMap([Fraction(str(x)) for x in v["breakpoints"]],
                               [Fraction(str(y)) for y in v["values"]]) for g, v in gens.items()}
        depth = int(data.get("depth", 64))
        return lambda: ActionOrder(action, group, depth)
    raise UsageError(f"bad oracle {spec!r}; use greedy, greedy:SEED, cone:FILE or action:FILE")


def cmd_witte(args):
    from .certificates import ViolationCertificate
    from .witte import witte_pipeline
    make = _witte_oracle(args.oracle, args.k, args.seed)
    res = witte_pipeline(args.k, make(), args.witness_bound)
    if isinstance(res, ViolationCertificate):
        return {"outcome": "ViolationCertificate", "kind": res.kind,
                "replayed": res.replay(make()), "certificate": res.to_json()}, "fail"
    return {"outcome": "Inconclusive", "inconclusive": res.to_json()}, "inconclusive"


def cmd_realize(args):
    from .certificates import UndecidableQuery, ViolationFound
    from .orders import ConeOrder, OrderError, dynamical_realization, sort_ball, word_ball
    _need(args, "cone")
    table = _table_cone(_load_json(args.cone))
    ball = word_ball(table.group, args.ball_radius)
    try:
        ordered = sort_ball(ConeOrder(table.cone()), ball)
        real = dynamical_realization(table.group, ordered)
    except (OrderError, ViolationFound) as exc:
        cert = getattr(exc, "certificate", None)
        return {"error": str(exc), "certificate": cert.to_json() if cert else None}, "fail"
    except UndecidableQuery as exc:
        return {"undecided": str(exc.word), "reason": exc.reason}, "inconclusive"
    pts = [{"word": str(w), "position": _q(real.position(table.group, w))} for w in ordered]
    return {"points": pts, "maps": {g: m.to_json() for g, m in real.maps.items()}}, "pass"


def _circle_generators(path):
    from .circle.maps import parse_generators
    try:
        return parse_generators(_load_json(path))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"{path}: bad generator file: {exc}") from None


def cmd_euler(args):
    from .circle.cohomology import check_cocycle_identity, euler_table
    from .circle.maps import element_ball
    _need(args, "generators")
    entries = element_ball(_circle_generators(args.generators), args.ball)
    words = {g: w for w, g in entries}
    elems = [g for _, g in entries]
    table = euler_table(elems)
    inside = set(elems)
    triples = [(a, b, c) for a in elems for b in elems if a * b in inside
               for c in elems if b * c in inside]
    rep = check_cocycle_identity(table, triples)
    rows = [{"g": str(words[g]), "h": str(words[h]), "z": v} for (g, h), v in table.values.items()]
    result = {"ballSize": len(elems), "table": rows, "allZero": table.is_zero(),
              "cocycle": {"passed": rep.passed, "checked": rep.checked,
                          "failure": None if rep.failure is None
                          else [str(words[x]) for x in rep.failure]}}
    return result, "pass" if rep.passed else "fail"


def cmd_coboundary(args):
    from .circle.cohomology import (OrbitEscape, SearchBudgetExceeded, coboundary_search,
                                    fixed_point_from_coboundary)
    from .circle.maps import point_to_json
    _need(args, "generators")
    gens = _circle_generators(args.generators)
    try:
        res = coboundary_search(gens, args.ball, args.phi_bound, args.node_budget)
    except SearchBudgetExceeded as exc:
        return {"status": "budget-exceeded", "reason": str(exc)}, "inconclusive"
    out = {"status": res.status, "ballSize": len(res.ball), "constraints": res.constraints,
           "nodes": res.nodes, "phiBound": res.phi_bound, "phi": None, "fixedPoint": None}
    if not res.found:
        out["note"] = "no primitive within the bound; this does not show the Euler class is nonzero"
        return out, "inconclusive"
    out["phi"] = [{"word": str(w), "value": res.phi(g)} for w, g in zip(res.words, res.ball)]
    try:
        fp = fixed_point_from_coboundary(res.phi, gens)
        out["fixedPoint"] = {"point": point_to_json(fp.point), "exact": fp.exact,
                             "orbitSize": fp.orbit_size}
    except OrbitEscape as exc:
        out["fixedPoint"] = {"error": str(exc)}
        return out, "fail"
    return out, "pass"


def cmd_orbits(args):
    from .circle.maps import point_to_json
    from .circle.orbits import finite_orbit_search
    _need(args, "generators")
    res = finite_orbit_search(_circle_generators(args.generators), args.max_orbit, args.max_word)
    if res is None:
        return {"found": False, "orbit": None, "size": None, "seed": None}, "inconclusive"
    return {"found": True, "orbit": [point_to_json(p) for p in res.points], "size": res.size,
            "seed": point_to_json(res.seed)}, "pass"


def cmd_holder(args):
    from .circle.maps import point_to_json
    from .circle.orbits import holder_witness
    _need(args, "generators")
    res = holder_witness(_circle_generators(args.generators), args.max_word)
    out = {"status": res.status, "word": None, "element": None, "point": None}
    if res.found:
        out.update(word=str(res.word), element=res.element.to_json(),
                   point=point_to_json(res.point))
        return out, "pass"
    if res.status == "abelian":
        out["note"] = "generators commute; nothing to witness"
    return out, "inconclusive"


def cmd_navas_check(args):
    from .navas import KernelGrid, NonInvertibleMap, boundedness_probe, parse_map
    _need(args, "map")
    try:
        g = parse_map(_load_json(args.map))
    except NonInvertibleMap as exc:
        raise UsageError(f"{args.map}: {exc}") from None
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{args.map}: bad map file: {exc}") from None
    sched = KernelGrid.standard(args.levels, args.base_n, args.band_cells)
    rep = boundedness_probe(g, sched)
    out = rep.to_json()
    verdict = {"stabilized": "pass", "growing": "fail", "unresolved": "inconclusive"}[out["verdict"]]
    return out, verdict


# -- parser -----------------------------------------------------------------------------

def build_parser():
    p = _Parser(prog="orderlab", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="subcommand", parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--output", default=None, help="write the envelope here instead of stdout")
        sp.add_argument("--schema", action="store_true", help="print the output JSON schema")
        sp.add_argument("--deterministic", action="store_true",
                        help="report wallTimeMs as 0 so identical runs are byte-identical")
        return sp

    sp = add("decompose", cmd_decompose, "write a matrix as a product of elementary matrices")
    sp.add_argument("--ring", choices=("z", "q"), default="z")
    sp.add_argument("--input")
    sp.add_argument("--minimal", action="store_true", help="also run the bounded BFS")
    sp.add_argument("--coeff-bound", type=int, default=1)
    sp.add_argument("--length-bound", type=int, default=4)
    sp.add_argument("--node-budget", type=int, default=10 ** 6)

    sp = add("decompose-stats", cmd_decompose_stats, "factor counts over random matrices")
    sp.add_argument("--ring", choices=("z", "q"), default="z")
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--word-length", type=int, default=20)
    sp.add_argument("--coeff-bound", type=int, default=3)
    sp.add_argument("--max-count", type=int, default=None)

    sp = add("order-check", cmd_order_check, "check positive-cone axioms on a word ball")
    sp.add_argument("--cone")
    sp.add_argument("--ball-radius", type=int, default=4)

    sp = add("witte", cmd_witte, "refute a sign oracle on the six hexagon matrices")
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--oracle", default="greedy")
    sp.add_argument("--witness-bound", type=int, default=50)

    sp = add("realize", cmd_realize, "embed an ordered word ball into Q with PL generator maps")
    sp.add_argument("--cone")
    sp.add_argument("--ball-radius", type=int, default=2)

    sp = add("euler", cmd_euler, "Euler cocycle table and cocycle identity on a ball")
    sp.add_argument("--generators")
    sp.add_argument("--ball", type=int, default=2)

    sp = add("coboundary", cmd_coboundary, "bounded search for phi with delta phi = z")
    sp.add_argument("--generators")
    sp.add_argument("--ball", type=int, default=2)
    sp.add_argument("--phi-bound", type=int, default=1)
    sp.add_argument("--node-budget", type=int, default=10 ** 6)

    sp = add("orbits", cmd_orbits, "search for a finite orbit")
    sp.add_argument("--generators")
    sp.add_argument("--max-orbit", type=int, default=16)
    sp.add_argument("--max-word", type=int, default=5)

    sp = add("holder", cmd_holder, "nonidentity element with a fixed point")
    sp.add_argument("--generators")
    sp.add_argument("--max-word", type=int, default=4)

    sp = add("navas-check", cmd_navas_check, "sup of |Phi^g - Phi| over refining grids")
    sp.add_argument("--map")
    sp.add_argument("--levels", type=int, default=5)
    sp.add_argument("--base-n", type=int, default=256)
    sp.add_argument("--band-cells", type=int, default=4)
    return p


def load_schema(subcommand: str) -> dict:
    root = resources.files("orderlab") / "schemas"
    env = json.loads((root / "envelope.json").read_text(encoding="utf-8"))
    res = json.loads((root / f"{subcommand}.json").read_text(encoding="utf-8"))
    env["title"] = f"orderlab {subcommand}"
    env["properties"]["subcommand"] = {"const": subcommand}
    env["properties"]["result"] = res
    return env


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.subcommand is None:
            raise UsageError(f"choose a subcommand: {', '.join(SUBCOMMANDS)}")
        if args.schema:
            _emit(_dump(load_schema(args.subcommand)), args.output)
            return 0
        config = {k: v for k, v in vars(args).items()
                  if k not in ("func", "schema", "output", "subcommand", "deterministic")}
        t0 = time.perf_counter()
        result, verdict = args.func(args)
        wall = 0 if args.deterministic else int(round((time.perf_counter() - t0) * 1000))
    except UsageError as exc:
        sys.stderr.write(_dump({"error": "usage", "message": str(exc)}))
        return USAGE
    env = {"toolVersion": __version__, "subcommand": args.subcommand, "config": config,
           "result": result, "verdict": verdict, "wallTimeMs": wall}
    _emit(_dump(env), args.output)
    return EXIT[verdict]


if __name__ == "__main__":
    sys.exit(main())
