"""Command-line front end.

Every subcommand prints one report (JSON by default) and exits with
0 = ok / witnessed, 1 = refuted, 2 = undetermined, 3 = input or usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import graph as gc
from . import pwmap, sofic, tower
from .errors import InputError, StateLimitError
from .intervals import IntervalSet, fmt, rat

EXIT_CODES = {"ok": 0, "refuted": 1, "undetermined": 2, "error": 3}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _parse_json_arg(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{what}: invalid JSON ({exc})") from None


def _load_shift(path: str):
    data = _load_json(path)
    if isinstance(data, dict) and "forbidden" in data:
        return sofic.ForbiddenWordSFT.from_json(data)
    if isinstance(data, dict) and "labels" in data:
        return sofic.LabeledAutomaton.from_json(data)
    if isinstance(data, dict) and "edges" in data:
        return sofic.vertex_shift(gc.Graph.from_json(data))
    raise InputError(f"{path}: expected an automaton, SFT or graph JSON object")


def _as_automaton(s):
    return sofic.sft_automaton(s) if isinstance(s, sofic.ForbiddenWordSFT) else s


def _load_map(ref: str) -> pwmap.PiecewiseSetMap:
    if os.path.exists(ref):
        return pwmap.PiecewiseSetMap.from_json(_load_json(ref))
    return pwmap.builtin(ref)


def _load_partition(F, args) -> pwmap.Partition:
    chosen = [x is not None for x in (args.partition, args.dyadic, args.cylinders)]
    if sum(chosen) != 1:
        raise InputError("give exactly one of --partition, --dyadic, --cylinders")
    if args.partition is not None:
        return pwmap.Partition.from_json(_load_json(args.partition))
    if args.dyadic is not None:
        return pwmap.dyadic_partition(F, args.dyadic)
    return pwmap.cantor_partition(F, args.cylinders)


def _write_dot(g: gc.Graph, path: str | None):
    if not path:
        return
    try:
        with open(path, "w") as fh:
            fh.write(g.to_dot())
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from None


def _vset(g: gc.Graph, A) -> list:
    return [g.names[v] for v in sorted(A)]


def _iset(S: IntervalSet) -> dict:
    return {"intervals": S.to_json(), "text": str(S), "empty": S.empty}


def _report(status, payload, summary):
    return status, payload, summary


# --- graph ---------------------------------------------------------------------

def cmd_graph_check(args):
    data = _load_json(args.graph)
    try:
        names = [str(v) for v in data["vertices"]]
        edges = [(int(u), int(v)) for u, v in data["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed graph JSON: {exc}") from None
    n = len(names)
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise InputError(f"edge ({u}, {v}) uses an undeclared vertex")
    has_succ = {u for u, _ in edges}
    dead = [names[u] for u in range(n) if u not in has_succ]
    payload = {"vertices": n, "edges": len(set(edges)), "total": not dead, "no_successor": dead}
    if dead:
        return _report("refuted", payload, f"not total: {', '.join(dead)} have no successor")
    g = gc.Graph(names, edges)
    _write_dot(g, args.dot)
    return _report("ok", payload, f"total graph with {n} vertices and {len(g.edges)} edges")


def cmd_graph_hom(args):
    data = _load_json(args.hom)
    try:
        h = gc.GraphHom(gc.Graph.from_json(data["source"]), gc.Graph.from_json(data["target"]),
                        tuple(data["map"]))
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed homomorphism JSON: {exc}") from None
    flags = gc.check_hom(h)
    status = "ok" if flags.homomorphism else "refuted"
    kind = "cover" if flags.cover else ("homomorphism" if flags.homomorphism else "not a homomorphism")
    return _report(status, flags.to_json(), kind)


def cmd_graph_discriminant(args):
    g = gc.Graph.from_json(_load_json(args.graph))
    pattern = [g.vertex_set(A) for A in _parse_json_arg(args.pattern, "--pattern")]
    if args.cycle is not None:
        cycle = [g.vertex_set(A) for A in _parse_json_arg(args.cycle, "--cycle")]
        S = gc.periodic_discriminant(g, pattern, cycle)
    else:
        S = gc.tuple_discriminant(g, pattern)
    payload = {"discriminant": _vset(g, S)}
    return _report("ok" if S else "refuted", payload,
                   f"{len(S)} admissible start vertices" if S else "no walk follows the pattern")


# --- shift ---------------------------------------------------------------------

def cmd_shift_equal(args):
    a = _as_automaton(_load_shift(args.a))
    b = _as_automaton(_load_shift(args.b))
    eq = sofic.language_equal(a, b)
    da, db = sofic.allowed_words_dfa(a), sofic.allowed_words_dfa(b)
    payload = {"equal": eq, "dfa_states": [len(da), len(db)],
               "a_subset_b": sofic.dfa_subset(da, db), "b_subset_a": sofic.dfa_subset(db, da)}
    return _report("ok" if eq else "refuted", payload,
                   "languages are equal" if eq else "languages differ")


def cmd_shift_recode(args):
    s = _load_shift(args.sft)
    if not isinstance(s, sofic.ForbiddenWordSFT):
        raise InputError("shift recode expects an SFT JSON object")
    g, decoder = sofic.recode_to_1step(s)
    _write_dot(g, args.dot)
    payload = {"graph": g.to_json(), "decoder": list(decoder)}
    return _report("ok", payload, f"{len(g)} vertices, {len(g.edges)} edges")


def cmd_shift_is_sft(args):
    a = _as_automaton(_load_shift(args.shift))
    result = sofic.is_k_step_sft(a, args.k)
    return _report("ok" if result else "refuted", {"k": args.k, "is_k_step_sft": result},
                   f"{'is' if result else 'is not'} a {args.k}-step SFT")


# --- tower ---------------------------------------------------------------------

def _tower_args(t, args):
    n = t.first_level if args.level is None else args.level
    D = t.last_level if args.depth is None else args.depth
    return n, D


def cmd_tower_ml(args):
    t = tower.Tower.from_json(_load_json(args.tower))
    n, D = _tower_args(t, args)
    rep = tower.vertex_ml(t, n, D)
    return _report("ok", rep.to_json(t.level(n)),
                   f"vertex images stable from level {rep.witnessed_at}")


def cmd_tower_shadowing(args):
    t = tower.Tower.from_json(_load_json(args.tower))
    n, D = _tower_args(t, args)
    if args.all_levels:
        # a level closer than the margin to D can never be witnessed
        top = D if t.eventually_constant and D == t.last_level else D - args.margin
        if top < t.first_level:
            raise InputError(f"depth {D} leaves no level with margin {args.margin}")
        reports = [tower.shadowing_status(t, k, D, args.margin)
                   for k in range(t.first_level, top + 1)]
        payload = {"levels": [r.to_json() for r in reports]}
        witnessed = all(r.witnessed for r in reports)
    else:
        rep = tower.shadowing_status(t, n, D, args.margin)
        payload = rep.to_json()
        witnessed = rep.witnessed
        reports = [rep]
    if witnessed:
        summary = "; ".join(f"level {r.level}: witnessed at {r.witnessed_at}" for r in reports)
        return _report("ok", payload, summary)
    summary = "; ".join(
        f"level {r.level}: " + ("witnessed" if r.witnessed else
                                f"undetermined (last strict decrease at {r.last_strict_decrease})")
        for r in reports)
    return _report("undetermined", payload, summary)


def cmd_tower_from_shift(args):
    t = tower.subshift_tower(_load_shift(args.shift), args.depth)
    return _report("ok", {"tower": t.to_json(), "level_sizes": [len(g) for g in t.levels]},
                   "level sizes " + ", ".join(str(len(g)) for g in t.levels))


# --- map -----------------------------------------------------------------------

def cmd_map_eval(args):
    F = _load_map(args.map)
    vals = F.values(rat(args.x))
    return _report("ok", {"x": fmt(rat(args.x)), "values": [fmt(v) for v in vals]},
                   "F(" + fmt(rat(args.x)) + ") = {" + ", ".join(fmt(v) for v in vals) + "}")


def _set_arg(text):
    return IntervalSet.from_json(_parse_json_arg(text, "--set"))


def cmd_map_image(args):
    F = _load_map(args.map)
    S = pwmap.image_set(F, _set_arg(args.set))
    return _report("ok", {"image": _iset(S)}, str(S))


def cmd_map_preimage(args):
    F = _load_map(args.map)
    S = pwmap.preimage_set(F, _set_arg(args.set))
    return _report("ok", {"preimage": _iset(S)}, str(S))


def _parse_balls(F, text):
    balls = []
    for item in text.split(","):
        try:
            x, r = item.split(":")
        except ValueError:
            raise InputError(f"--balls entries look like x:radius, got {item!r}") from None
        balls.append(pwmap.ball(F, rat(x), rat(r)))
    return balls


def cmd_map_discriminant(args):
    F = _load_map(args.map)
    if (args.pattern is None) == (args.balls is None):
        raise InputError("give exactly one of --pattern, --balls")
    if args.pattern is not None:
        raw = _parse_json_arg(args.pattern, "--pattern")
        pattern = [IntervalSet.from_json(A) for A in raw]
    else:
        pattern = _parse_balls(F, args.balls)
    S = pwmap.tuple_discriminant(F, pattern)
    return _report("ok" if S else "refuted", {"discriminant": _iset(S)}, str(S))


def cmd_map_pseudo_check(args):
    F = _load_map(args.map)
    po = pwmap.PseudoOrbit.from_json(_load_json(args.pseudo_orbit))
    jumps = pwmap.jump_sizes(F, po.points)
    ok = all(d < po.delta for d in jumps)
    payload = {"is_pseudo_orbit": ok, "delta": fmt(po.delta), "jumps": [fmt(d) for d in jumps],
               "max_jump": fmt(max(jumps)) if jumps else "0"}
    return _report("ok" if ok else "refuted", payload,
                   f"{'is' if ok else 'is not'} a {fmt(po.delta)}-pseudo-orbit")


def cmd_map_shadow_search(args):
    F = _load_map(args.map)
    po = pwmap.PseudoOrbit.from_json(_load_json(args.pseudo_orbit))
    res = pwmap.shadow_search(F, po, rat(args.epsilon))
    payload = {"epsilon": fmt(rat(args.epsilon)), "witness_set": _iset(res.witness_set),
               "orbit": None if res.orbit is None else [fmt(z) for z in res.orbit]}
    if res.found:
        return _report("ok", payload, f"shadowed; witness set {res.witness_set}")
    return _report("refuted", payload, "no orbit shadows the pseudo-orbit")


def cmd_map_quotient(args):
    F = _load_map(args.map)
    P = _load_partition(F, args)
    g = pwmap.quotient_graph(F, P)
    _write_dot(g, args.dot)
    return _report("ok", {"graph": g.to_json()}, f"{len(g)} cells, {len(g.edges)} edges")


def cmd_map_snap(args):
    F = _load_map(args.map)
    P = _load_partition(F, args)
    snapped = pwmap.snap_to_shadowing(F, P)
    payload = snapped.to_json()
    payload["mesh"] = fmt(P.mesh())
    return _report("ok", payload, f"{len(snapped.regions)} regions of constant cell pattern")


def cmd_map_ball_criterion(args):
    F = _load_map(args.map)
    res = pwmap.check_ball_criterion(F, rat(args.epsilon), rat(args.delta))
    summary = "criterion holds" if res.holds else f"criterion fails on {res.violation_set}"
    return _report("ok" if res.holds else "refuted", res.to_json(), summary)


# --- examples ------------------------------------------------------------------

def _examples():
    return {
        "doubling_sv": lambda: pwmap.doubling_sv().to_json(),
        "doubling_nonclosed": lambda: pwmap.doubling_nonclosed().to_json(),
        "cantor_ternary": lambda: pwmap.cantor_ternary(3).to_json(),
        "climb_pseudo_orbit": lambda: pwmap.climb_pseudo_orbit().to_json(),
        "trap_pseudo_orbit": lambda: pwmap.trap_pseudo_orbit().to_json(),
        "golden_mean": lambda: sofic.golden_mean().to_json(),
        "even_shift": lambda: sofic.even_shift().to_json(),
        "full_shift": lambda: sofic.full_shift().to_json(),
        "golden_mean_sft": lambda: sofic.ForbiddenWordSFT(("0", "1"), 2,
                                                          frozenset({("1", "1")})).to_json(),
        "golden_mean_tower": lambda: tower.subshift_tower(sofic.golden_mean(), 5).to_json(),
        "even_shift_tower": lambda: tower.subshift_tower(sofic.even_shift(), 6).to_json(),
    }


def cmd_example(args):
    examples = _examples()
    if args.name not in examples:
        raise InputError(f"unknown example {args.name!r}; choose from {sorted(examples)}")
    return _report("ok", examples[args.name](), f"example {args.name}")


# --- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="svdyn", description=__doc__.strip().splitlines()[0])
    p.add_argument("--format", choices=("json", "text"), default="json")
    top = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)

    g = top.add_parser("graph").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    sp = g.add_parser("check"); common(sp)
    sp.add_argument("graph"); sp.add_argument("--dot")
    sp.set_defaults(func=cmd_graph_check)
    sp = g.add_parser("hom"); common(sp)
    sp.add_argument("hom", help='JSON {"source": graph, "target": graph, "map": [...]}')
    sp.set_defaults(func=cmd_graph_hom)
    sp = g.add_parser("discriminant"); common(sp)
    sp.add_argument("graph")
    sp.add_argument("--pattern", required=True, help="JSON list of vertex lists")
    sp.add_argument("--cycle", help="JSON list of vertex lists repeated forever after --pattern")
    sp.set_defaults(func=cmd_graph_discriminant)

    s = top.add_parser("shift").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    sp = s.add_parser("equal"); common(sp)
    sp.add_argument("a"); sp.add_argument("b")
    sp.set_defaults(func=cmd_shift_equal)
    sp = s.add_parser("recode"); common(sp)
    sp.add_argument("sft"); sp.add_argument("--dot")
    sp.set_defaults(func=cmd_shift_recode)
    sp = s.add_parser("is-sft"); common(sp)
    sp.add_argument("shift"); sp.add_argument("--k", type=int, default=1)
    sp.set_defaults(func=cmd_shift_is_sft)

    t = top.add_parser("tower").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name, func in (("ml", cmd_tower_ml), ("shadowing", cmd_tower_shadowing)):
        sp = t.add_parser(name); common(sp)
        sp.add_argument("tower")
        sp.add_argument("--level", type=int)
        sp.add_argument("--depth", type=int)
        if name == "shadowing":
            sp.add_argument("--margin", type=int, default=tower.DEFAULT_MARGIN)
            sp.add_argument("--all-levels", action="store_true",
                            help="check every level from the first up to depth minus margin")
        sp.set_defaults(func=func)
    sp = t.add_parser("from-shift"); common(sp)
    sp.add_argument("shift"); sp.add_argument("--depth", type=int, required=True)
    sp.set_defaults(func=cmd_tower_from_shift)

    m = top.add_parser("map").add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def map_parser(name, func):
        sp = m.add_parser(name); common(sp)
        sp.add_argument("map", help="map JSON file or built-in name")
        sp.set_defaults(func=func)
        return sp

    map_parser("eval", cmd_map_eval).add_argument("--x", required=True)
    map_parser("image", cmd_map_image).add_argument("--set", required=True)
    map_parser("preimage", cmd_map_preimage).add_argument("--set", required=True)
    sp = map_parser("discriminant", cmd_map_discriminant)
    sp.add_argument("--pattern", help="JSON list of interval sets")
    sp.add_argument("--balls", help="comma-separated x:radius closed balls")
    map_parser("pseudo-check", cmd_map_pseudo_check).add_argument("pseudo_orbit")
    sp = map_parser("shadow-search", cmd_map_shadow_search)
    sp.add_argument("pseudo_orbit"); sp.add_argument("--epsilon", required=True)
    for name, func in (("quotient", cmd_map_quotient), ("snap", cmd_map_snap)):
        sp = map_parser(name, func)
        sp.add_argument("--partition", help="partition JSON file")
        sp.add_argument("--dyadic", type=int, help="cells of length 2**-M")
        sp.add_argument("--cylinders", type=int, help="ternary cylinder depth")
        if name == "quotient":
            sp.add_argument("--dot")
    sp = map_parser("ball-criterion", cmd_map_ball_criterion)
    sp.add_argument("--epsilon", required=True); sp.add_argument("--delta", required=True)

    sp = top.add_parser("example"); common(sp)
    sp.add_argument("name")
    sp.set_defaults(func=cmd_example)
    return p


def _render(command, status, payload, summary, fmt_name) -> str:
    if fmt_name == "text":
        return f"{command}: {status}\n{summary}\n"
    report = {"command": command, "status": status, "payload": payload, "summary": summary}
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    fmt_name = "text" if "--format=text" in argv or _flag_value(argv, "--format") == "text" \
        else "json"
    command = "svdyn"
    try:
        args = build_parser().parse_args(argv)
        command = f"{args.group} {args.cmd}" if getattr(args, "cmd", None) else args.group
        fmt_name = args.format
        status, payload, summary = args.func(args)
    except (UsageError, InputError, StateLimitError) as exc:
        print(f"svdyn: error: {exc}", file=sys.stderr)
        out.write(_render(command, "error", {"error": str(exc)}, str(exc), fmt_name))
        return EXIT_CODES["error"]
    out.write(_render(command, status, payload, summary, fmt_name))
    return EXIT_CODES[status]


def _flag_value(argv, flag):
    for i, a in enumerate(argv[:-1]):
        if a == flag:
            return argv[i + 1]
    return None


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
