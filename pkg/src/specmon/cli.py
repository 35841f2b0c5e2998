"""Command-line entry point: ``specmon <command> <presentation> ...``.

The presentation argument is a fixture name, a path to a ``.mon`` file, or
inline text starting with ``Mon<`` or ``Gp<``.  Exit status: 0 on success,
1 when a question cannot be decided within budget, 2 on bad usage or input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .fixtures import Fixture, load_fixture
from .graph import IncompleteEnd
from .groups import group_fixture
from .pieces import BiprefixViolation, UndecidedCut, UndecidedEquality, compute_piece_table, compute_unit_presentation
from .pieces import default_strategy
from .presentations import PresentationError, check_no_unit_proper_subword, parse_presentation
from .rewriting import Bounded, CompleteRS, common_ancestor, deletion_path, word_problem
from .units import HorizonTooSmall

log = logging.getLogger("specmon")



class UsageError(Exception):
    pass


class NoCompleteSystem(RuntimeError):
    pass


DOMAIN_ERRORS = (UndecidedEquality, UndecidedCut, HorizonTooSmall, IncompleteEnd, BiprefixViolation, NoCompleteSystem)


def _load(arg: str) -> Fixture:
    text = arg.strip()
    if text.startswith("Gp"):
        return group_fixture(text)
    if text.startswith("Mon") or (":" in text and "<" in text):
        return Fixture(parse_presentation(text))
    try:
        return load_fixture(arg)
    except FileNotFoundError:
        raise UsageError(f"no fixture or file named {arg!r}") from None


def _strategy(fx: Fixture, args):
    if args.strategy == "bounded":
        return Bounded(args.max_len, args.max_steps, fx.images)
    st = default_strategy(fx, max_len=args.max_len, max_steps=args.max_steps)
    if args.strategy == "complete" and not isinstance(st, CompleteRS):
        raise NoCompleteSystem("completion did not finish within budget")
    return st


def _emit(args, data: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(data, ensure_ascii=False, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


def _dot(args, text: str) -> None:
    if args.dot:
        Path(args.dot).write_text(text, encoding="utf-8")


# --- commands -------------------------------------------------------------------------------


def cmd_pieces(args, fx: Fixture) -> int:
    p = fx.presentation
    pt = compute_piece_table(p, _strategy(fx, args))
    data = pt.to_json()
    data["unit_presentation"] = compute_unit_presentation(pt).to_text()
    lines = [p.to_text(), f"pieces:  {', '.join(data['lambda'])}", f"classes: {data['classes']}  (κ = {pt.kappa})",
             f"Ξ:       {', '.join(data['xi'])}", f"𝔓:       {', '.join(data['frak_p']) or '∅'}",
             f"units:   {data['unit_presentation']}"]
    _emit(args, data, lines)
    return 0


def cmd_wp(args, fx: Fixture) -> int:
    p = fx.presentation
    u, v = p.word(args.u), p.word(args.v)
    verdict = word_problem(u, v, p, _strategy(fx, args))
    data = {"status": verdict.status.value, "u": p.render(u), "v": p.render(v)}
    lines = [f"{p.render(u)} vs {p.render(v)}: {verdict.status.value}"]
    if verdict.derivation is not None:
        d = verdict.derivation
        data["derivation"] = d.to_json(p.render)
        lines.append("  " + " → ".join(p.render(w) for w in d.words()))
        w = common_ancestor(d, p)
        ok = deletion_path(w, u, p) is not None and deletion_path(w, v, p) is not None
        data["common_ancestor"] = {"word": p.render(w), "verified": ok}
        lines.append(f"  common ancestor {p.render(w)} (deletions verified: {ok})")
    elif verdict.certificate is not None:
        data["certificate"] = repr(verdict.certificate)
        lines.append(f"  certificate: {verdict.certificate!r}")
    _emit(args, data, lines)
    return 0 if not verdict.unknown else 1


def cmd_units(args, fx: Fixture) -> int:
    from .units import build_units_graph, hairy

    p = fx.presentation
    st = _strategy(fx, args)
    pt = compute_piece_table(p, st)
    u = build_units_graph(p, pt, args.radius, st)
    if args.hairs:
        u = hairy(u, p.letters)
    data = u.to_json(p.render)
    data["locally_invertible"] = sorted(u.locally_invertible)
    lines = [f"units graph ball of radius {args.radius}: {len(u.graph)} vertices, {u.graph.num_edges} edges",
             f"locally invertible: {len(u.locally_invertible)}, other: {len(u.n_set)}, hairs: {len(u.hair_tips)}"]
    lines += [f"  {o} -{p.render(a)}-> {t}" for o, a, t in sorted(u.graph.edges())][:60]
    _dot(args, u.graph.to_dot("U", highlight=u.locally_invertible))
    _emit(args, data, lines)
    return 0


def _r1(args, fx: Fixture, method: str):
    from .schutz import r1_ball_via_tree, r1_via_cayley, stephen_ball

    p = fx.presentation
    if method == "stephen":
        return stephen_ball(p, args.radius)
    st = _strategy(fx, args)
    if method == "tree":
        return r1_ball_via_tree(p, compute_piece_table(p, st), args.radius, st)
    return r1_via_cayley(p, args.radius, st)


def cmd_schutz(args, fx: Fixture) -> int:
    from .graph import rooted_iso

    methods = ["stephen", "tree", "cayley"] if args.method == "all" else [args.method]
    balls = {m: _r1(args, fx, m) for m in methods}
    data = {m: b.to_json() for m, b in balls.items()}
    lines = [f"{m}: {len(b.graph)} vertices, {b.graph.num_edges} edges, {b.saturation}" for m, b in balls.items()]
    if len(balls) > 1:
        first = balls[methods[0]].graph
        agree = all(rooted_iso(first, b.graph) is not None for b in balls.values())
        data["agree"] = agree
        lines.append(f"rooted-isomorphic: {agree}")
    _dot(args, balls[methods[0]].graph.to_dot("R1"))
    _emit(args, data, lines)
    return 0


def cmd_cayley(args, fx: Fixture) -> int:
    from .schutz import cayley_ball, condensation

    p = fx.presentation
    cb = cayley_ball(p, args.radius, _strategy(fx, args))
    cond = condensation(cb)
    data = cb.to_json(p.render)
    data["condensation"] = cond.to_json()
    lines = [f"Cayley ball of radius {args.radius}: {len(cb.graph)} vertices, {cb.graph.num_edges} edges",
             f"strong components: {cond.dag.number_of_nodes()}, acyclic: {cond.acyclic}, "
             f"interior components with one entering edge: {cond.unique_entry}"]
    _dot(args, cb.graph.to_dot("C", vertex_label=lambda v: p.render(cb.words[v])))
    _emit(args, data, lines)
    return 0


def cmd_ends(args, fx: Fixture) -> int:
    from .probe import GRAPHS, context_free_probe

    p = fx.presentation
    graphs = GRAPHS if args.graph == "all" else (args.graph,)
    report = context_free_probe(p, args.radius, args.depth, _strategy(fx, args), graphs=graphs)
    lines = [f"verdict: {report.verdict}"]
    for name, r in report.reports.items():
        lines.append(f"  {name}: counts {r.counts[args.depth]}, stabilized {r.stabilized(args.depth)}")
    for name, err in report.errors.items():
        lines.append(f"  {name}: skipped ({err})")
    _emit(args, report.to_json(), lines)
    return 0


def cmd_check(args, fx: Fixture) -> int:
    """Hypotheses of the pipeline on one presentation, each reported separately."""
    from .graph import distances, rooted_iso
    from .pieces import check_biprefix
    from .schutz import r1_ball_via_tree, r1_via_cayley, stephen_ball
    from .treecons import check_bounded_folding
    from .units import build_units_graph, embed_in_R1_check

    p = fx.presentation
    st = _strategy(fx, args)
    results: dict[str, object] = {}
    violations = check_no_unit_proper_subword(p, max_len=min(args.max_len, 8))
    results["no_unit_proper_subword"] = not violations
    if violations:
        _emit(args, results, [f"no_unit_proper_subword: False ({len(violations)} found)"])
        return 0
    pt = compute_piece_table(p, st)
    results["biprefix"] = check_biprefix(pt.pieces)[0]
    reach = max(args.radius, pt.max_piece_length)  # the root's class must fit inside
    u = build_units_graph(p, pt, reach + args.max_len, st)
    inner = {v for v, d in distances(u.graph).items() if d <= reach}
    report = check_bounded_folding(u.graph, u.class_of(), u.n_set, args.max_len, overlap_starts=inner,
                                   within=inner - u.graph.horizon)
    results["bounded_folding"] = report.to_json()
    s = stephen_ball(p, args.radius)
    results["embedding"] = embed_in_R1_check(build_units_graph(p, pt, args.radius, st), s.graph, args.radius - 1)
    t = r1_ball_via_tree(p, pt, args.radius, st)
    agree = rooted_iso(s.graph, t.graph) is not None
    if isinstance(st, CompleteRS):
        agree = agree and rooted_iso(s.graph, r1_via_cayley(p, args.radius, st).graph) is not None
    results["oracles_agree"] = agree
    lines = [f"{k}: {v}" for k, v in results.items()]
    _emit(args, results, lines)
    return 0


def cmd_rational(args, fx: Fixture) -> int:
    from .rational import Nfa, compile_regex, rational_member

    p = fx.presentation
    if Path(args.language).exists():
        nfa = Nfa.load(args.language, p)
    else:
        nfa = compile_regex(args.language, p)
    res = rational_member(p, nfa, p.word(args.word), args.radius, _strategy(fx, args))
    lines = [f"{res.status}" + (f" (witness {p.render(res.witness)})" if res.witness is not None else ""),
             *([res.detail] if res.detail else [])]
    _emit(args, res.to_json(p.render), lines)
    return 1 if res.status == "aborted" else 0


def cmd_export(args, fx: Fixture) -> int:
    from .schutz import cayley_ball
    from .units import build_units_graph

    p = fx.presentation
    st = _strategy(fx, args)
    if args.what == "units":
        g = build_units_graph(p, compute_piece_table(p, st), args.radius, st).graph
    elif args.what == "schutz":
        g = _r1(args, fx, "stephen").graph
    else:
        g = cayley_ball(p, args.radius, st).graph
    text = g.to_dot(args.what) if args.format == "dot" else json.dumps(g.to_json(), ensure_ascii=False, indent=2)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        print(text)
    return 0


# --- argument parsing --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--radius", type=int, default=3)
    common.add_argument("--depth", type=int, default=3)
    common.add_argument("--max-len", type=int, default=12)
    common.add_argument("--max-steps", type=int, default=200_000)
    common.add_argument("--strategy", choices=["auto", "complete", "bounded"], default="auto")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--dot", metavar="PATH", help="also write a DOT rendering")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="specmon", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.add_argument("presentation", help="fixture name, .mon path, or inline Mon<...>/Gp<...>")
        sp.set_defaults(func=func)
        return sp

    add("pieces", cmd_pieces, "factor relators into invertible pieces")
    sp = add("wp", cmd_wp, "decide whether two words are equal")
    sp.add_argument("u")
    sp.add_argument("v")
    sp = add("units", cmd_units, "ball of the units graph")
    sp.add_argument("--hairs", action="store_true", help="add hairs for missing letters")
    sp = add("schutz", cmd_schutz, "ball of the Schützenberger graph of 1")
    sp.add_argument("--method", choices=["stephen", "tree", "cayley", "all"], default="all")
    add("cayley", cmd_cayley, "Cayley-graph ball and its strong components")
    sp = add("ends", cmd_ends, "end-class probe")
    sp.add_argument("--graph", choices=["cayley", "units", "stephen", "all"], default="all")
    add("check", cmd_check, "check the pipeline's hypotheses on a presentation")
    sp = add("rational", cmd_rational, "bounded rational-subset membership")
    sp.add_argument("language", help="automaton JSON file or regular expression")
    sp.add_argument("word")
    sp = add("export", cmd_export, "export a graph as DOT or JSON")
    sp.add_argument("--what", choices=["units", "schutz", "cayley"], default="schutz")
    sp.add_argument("--format", choices=["dot", "json"], default="dot")
    sp.add_argument("-o", "--output")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        fx = _load(args.presentation)
        return args.func(args, fx)
    except (UsageError, PresentationError) as exc:
        print(f"specmon: {exc}", file=sys.stderr)
        return 2
    except DOMAIN_ERRORS as exc:
        print(f"specmon: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
