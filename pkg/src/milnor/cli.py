"""Command-line front end: ``milnor <command> ...``.

Every command prints a table (or, with ``--format json``, the structured
report) and can write the report to ``--report FILE``.  Exit status: 0 on
success, 1 on an input error, 2 when a verification fails.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import corpus, fileio, kernels
from .bundles import (
    CocycleError,
    gauge_equivalent,
    holonomy,
    is_cocycle,
    pullback,
    pushforward,
    validate_cocycle,
)
from .classifying import (
    classify_bundles,
    classifying_stage,
    counit,
    milnor_join,
    omega_on_map,
    verify_naturality,
)
from .complex import ComplexError
from .fileio import InputError, element_name
from .groups import (
    FiniteGroup,
    GroupError,
    are_conjugate,
    compose_homs,
    conjugacy_classes_of_homs,
    enumerate_homs,
    format_word,
)
from .loops import PathError, edge_path_group

OK, INPUT_ERROR, VERIFY_FAIL = 0, 1, 2
JOIN_BUILD_LIMIT = 200_000


@dataclass
class Outcome:
    report: dict
    lines: list = field(default_factory=list)
    status: int = OK


def _table(headers, rows) -> list[str]:
    rows = [[str(x) for x in r] for r in rows]
    widths = [max([len(h)] + [len(r[i]) for r in rows]) for i, h in enumerate(headers)]
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    out = [fmt.format(*headers), fmt.format(*("-" * w for w in widths))]
    out.extend(fmt.format(*r) for r in rows)
    return out


def _hom_text(a) -> str:
    S, T = a.source, a.target
    gens = S.generators if hasattr(S, "generators") else [S.names[x] for x in S]
    return ", ".join(f"{g}->{element_name(T, y)}" for g, y in zip(gens, a.images)) or "(no generators)"


def _hom_json(a) -> dict:
    S = a.source
    gens = S.generators if hasattr(S, "generators") else [S.names[x] for x in S]
    return {g: element_name(a.target, y) for g, y in zip(gens, a.images)}


def _cocycle_json(c) -> list:
    G = c.group
    return [[str(u), str(v), element_name(G, x)] for u, v, x in c.triples() if x != G.identity]


def _group_label(G) -> str:
    return G.name or (f"order {G.order}" if isinstance(G, FiniteGroup) else "presented group")


# ---------------------------------------------------------------------------
# commands


def cmd_classify(args, base: Path) -> Outcome:
    X = fileio.load_complex(args.complex, base)
    G = fileio.load_group(args.group, base)
    if not isinstance(G, FiniteGroup):
        raise InputError("classify needs a finite group")
    cl = classify_bundles(X, G, oracle=not args.no_oracle)
    rows = []
    for row in cl.rows:
        phi = row.classifying_map
        rows.append({
            "hom": _hom_json(row.hom),
            "class_size": row.class_size,
            "cocycle": _cocycle_json(row.cocycle),
            "levels": {str(v): phi.level(v) for v in X.vertices},
            "shifts": {str(v): G.names[phi.shift(v)] for v in X.vertices},
        })
    counts = {
        "homs": cl.n_homs,
        "hom_classes": cl.n_hom_classes,
        "cocycles": cl.n_cocycles,
        "gauge_classes": cl.n_gauge_classes,
        "pullback_classes": cl.n_pullback_classes,
    }
    report = {"counts": counts, "consistent": cl.consistent, "rows": rows, "findings": list(cl.findings)}
    lines = [f"bundles over {args.complex} with group {_group_label(G)}: {cl.n_hom_classes} classes"]
    lines += _table(["#", "holonomy", "size", "cocycle"],
                    [[k, _hom_text(r.hom), r.class_size,
                      " ".join(f"{u}{v}:{x}" for u, v, x in _cocycle_json(r.cocycle)) or "trivial"]
                     for k, r in enumerate(cl.rows)])
    lines.append("counts: " + ", ".join(f"{k}={v}" for k, v in counts.items() if v is not None))
    lines += [f"finding: {f}" for f in cl.findings]
    return Outcome(report, lines, OK if cl.consistent else VERIFY_FAIL)


def cmd_join(args, base: Path) -> Outcome:
    G = fileio.load_group(args.group, base)
    J = milnor_join(G, args.n)
    fv = list(J.f_vector)
    report = {"group": _group_label(G), "stage": args.n, "f_vector": fv, "built": False}
    status = OK
    if sum(fv) <= JOIN_BUILD_LIMIT:
        K = J.complex
        act = J.action()
        report.update(built=True, built_f_vector=list(K.f_vector), free=act.is_free)
        if list(K.f_vector) != fv or not act.is_free:
            status = VERIFY_FAIL
    lines = [f"join stage {args.n} of {_group_label(G)}"]
    lines += _table(["dim", "simplices"], list(enumerate(fv)))
    if report["built"]:
        lines.append(f"built and checked: f-vector {'matches' if status == OK else 'MISMATCH'}, "
                     f"action {'free' if report['free'] else 'NOT free'}")
    return Outcome(report, lines, status)


def cmd_bstage(args, base: Path) -> Outcome:
    G = fileio.load_group(args.group, base)
    B = classifying_stage(G, args.n)
    pi = edge_path_group(B.delta)
    eps = counit(G, args.n, tuple(corpus.groups().values()))
    valid = is_cocycle(B.universal)
    report = {
        "group": _group_label(G),
        "stage": args.n,
        "f_vector": list(B.delta.f_vector),
        "pi1_generators": len(pi.generators),
        "pi1_relators": len(pi.relators),
        "universal_valid": valid,
        "counit": _hom_json(eps.hom),
        "counit_isomorphism": eps.is_isomorphism,
        "reason": eps.reason,
    }
    ok = valid and (eps.is_isomorphism or args.n < 2)
    lines = [f"classifying stage {args.n} of {_group_label(G)} (cells up to dimension 2)"]
    lines += _table(["dim", "cells"], list(enumerate(B.delta.f_vector)))
    lines.append(f"edge-path group: {len(pi.generators)} generators, {len(pi.relators)} relators")
    lines.append(f"universal values satisfy the triangle condition: {valid}")
    lines.append(f"counit isomorphism: {eps.is_isomorphism} ({eps.reason})")
    return Outcome(report, lines, OK if ok else VERIFY_FAIL)


def cmd_pi1(args, base: Path) -> Outcome:
    X = fileio.load_complex(args.complex, base)
    pi = edge_path_group(X)
    gens = {g: list(X.one_cells[e][0]) for g, e in zip(pi.generators, pi.generator_edges)}
    rels = [format_word(r) for r in pi.relators]
    report = {"generators": gens, "relators": rels, "targets": {}}
    lines = [f"edge-path group of {args.complex} at {X.require_basepoint()}: "
             f"{len(pi.generators)} generators, {len(pi.relators)} relators"]
    lines += _table(["generator", "edge"], [[g, "-".join(map(str, e))] for g, e in gens.items()])
    for ref in args.into or []:
        G = fileio.load_group(ref, base)
        homs = enumerate_homs(pi, G)
        ncl = len(conjugacy_classes_of_homs(pi, G, homs))
        report["targets"][ref] = {"homs": len(homs), "classes": ncl}
        lines.append(f"into {ref}: {len(homs)} homomorphisms, {ncl} conjugacy classes")
    return Outcome(report, lines)


def _load_valid_cocycle(ref, base):
    try:
        return validate_cocycle(fileio.load_cocycle(ref, base))
    except CocycleError as exc:
        raise InputError(f"{ref}: {exc}") from None


def cmd_holonomy(args, base: Path) -> Outcome:
    c = _load_valid_cocycle(args.cocycle, base)
    h = holonomy(c)
    report = {"holonomy": _hom_json(h)}
    lines = ["holonomy: " + _hom_text(h)]
    return Outcome(report, lines)


def _save_cocycle(c, path, base):
    if path:
        fileio.dump(fileio.cocycle_to_dict(c), base / path if not Path(path).is_absolute() else path)


def cmd_push(args, base: Path) -> Outcome:
    a = fileio.load_hom(args.hom, base)
    c = _load_valid_cocycle(args.cocycle, base)
    d = pushforward(a, c)
    ok = holonomy(d) == compose_homs(a, holonomy(c)) and is_cocycle(d)
    _save_cocycle(d, args.output, base)
    report = {"cocycle": _cocycle_json(d), "holonomy": _hom_json(holonomy(d)), "holonomy_natural": ok}
    lines = ["pushed-forward cocycle: " + (" ".join(f"{u}{v}:{x}" for u, v, x in report["cocycle"]) or "trivial"),
             "holonomy: " + _hom_text(holonomy(d)),
             f"holonomy equals a after the old holonomy: {ok}"]
    return Outcome(report, lines, OK if ok else VERIFY_FAIL)


def cmd_pull(args, base: Path) -> Outcome:
    f = fileio.load_map(args.map, base)
    c = _load_valid_cocycle(args.cocycle, base)
    d = pullback(f, c)
    ok = is_cocycle(d)
    report = {"cocycle": _cocycle_json(d)}
    lines = ["pulled-back cocycle: " + (" ".join(f"{u}{v}:{x}" for u, v, x in report["cocycle"]) or "trivial")]
    if f.pointed and c.is_finite:
        natural = are_conjugate(holonomy(d), compose_homs(holonomy(c), omega_on_map(f))) is not None
        report["holonomy_natural"] = natural
        lines.append(f"holonomy conjugate to the old holonomy after the loop map: {natural}")
        ok = ok and natural
    _save_cocycle(d, args.output, base)
    return Outcome(report, lines, OK if ok else VERIFY_FAIL)


def cmd_equiv(args, base: Path) -> Outcome:
    c1 = _load_valid_cocycle(args.first, base)
    c2 = _load_valid_cocycle(args.second, base)
    if not c1.is_finite:
        raise InputError("equivalence is decided for finite structure groups")
    t = gauge_equivalent(c1, c2, oracle=args.oracle)
    conj = are_conjugate(holonomy(c1), holonomy(c2))
    agree = (t is None) == (conj is None)
    G = c1.group
    report = {
        "equivalent": t is not None,
        "witness": None if t is None else {str(v): G.names[x] for v, x in zip(c1.base.vertices, t)},
        "method": "exhaustive" if args.oracle else "tree normalisation",
        "holonomies_conjugate": conj is not None,
        "agree": agree,
    }
    lines = [f"equivalent: {t is not None} ({report['method']})"]
    if t is not None:
        lines += _table(["vertex", "gauge"], list(report["witness"].items()))
    lines.append(f"holonomies conjugate: {conj is not None}")
    return Outcome(report, lines, OK if agree else VERIFY_FAIL)


def cmd_naturality(args, base: Path) -> Outcome:
    sq = fileio.load_square(args.square, base)
    rep = verify_naturality(sq["X"], sq["Y"], sq["map"], sq["G"], sq["H"], sq["hom"], sq.get("stage", 2))
    summary: dict = {}
    for ch in rep.checks:
        s = summary.setdefault(ch.name, {"passed": 0, "failed": 0})
        s["passed" if ch.passed else "failed"] += 1
    report = {
        "passed": rep.passed,
        "checks": summary,
        "failures": [{"check": ch.name, "detail": ch.detail} for ch in rep.failures],
    }
    lines = _table(["check", "passed", "failed"], [[k, v["passed"], v["failed"]] for k, v in summary.items()])
    lines.append("all squares commute" if rep.passed else f"{len(rep.failures)} failures")
    return Outcome(report, lines, OK if rep.passed else VERIFY_FAIL)


def cmd_corpus(args, base: Path) -> Outcome:
    cx = corpus.complexes()
    gs = corpus.groups()
    report = {
        "complexes": {k: list(K.f_vector) for k, K in cx.items()},
        "groups": {k: G.order for k, G in gs.items()},
        "maps": sorted(corpus.maps()),
        "homs": sorted(corpus.homs()),
    }
    lines = _table(["complex", "f-vector"], [[k, list(K.f_vector)] for k, K in cx.items()])
    lines += [""] + _table(["group", "order"], [[k, G.order] for k, G in gs.items()])
    if args.export:
        out = base / args.export if not Path(args.export).is_absolute() else Path(args.export)
        for k, K in cx.items():
            fileio.dump(fileio.complex_to_dict(K), out / f"{k}.cx")
        for k, G in gs.items():
            fileio.dump(fileio.group_to_dict(G), out / f"{k}.grp")
        report["exported"] = str(args.export)
        lines.append(f"exported {len(cx)} complexes and {len(gs)} groups to {args.export}")
    return Outcome(report, lines)


def cmd_run(args, base: Path) -> Outcome:
    path = base / args.manifest if not Path(args.manifest).is_absolute() else Path(args.manifest)
    data = fileio.read_json(path)
    jobs = fileio._require(data, "jobs", "manifest")
    if not isinstance(jobs, list):
        raise InputError("manifest jobs must be a list")
    where = path.parent
    results, lines, status = [], [], OK
    for k, job in enumerate(jobs):
        if not isinstance(job, dict) or "command" not in job:
            raise InputError(f"job {k} needs a 'command'")
        if job["command"] not in COMMANDS or job["command"] == "run":
            raise InputError(f"job {k}: unknown command {job['command']!r}")
        argv = [job["command"], *[str(a) for a in job.get("args", [])]]
        for key, val in job.get("options", {}).items():
            flag = "--" + key.replace("_", "-")
            if val is True:
                argv.append(flag)
            elif isinstance(val, list):
                for item in val:
                    argv += [flag, str(item)]
            elif val not in (False, None):
                argv += [flag, str(val)]
        outcome = execute(argv, where)
        entry = {"job": k, "command": job["command"], "args": job.get("args", []),
                 "status": outcome.status, "report": outcome.report}
        if job.get("output"):
            fileio.dump(outcome.report, where / job["output"])
            entry["output"] = job["output"]
        results.append(entry)
        status = max(status, outcome.status)
        lines.append(f"[{'ok' if outcome.status == OK else 'FAIL'}] job {k}: {' '.join(argv)}")
    lines.append(f"{len(jobs)} jobs, {sum(r['status'] == OK for r in results)} succeeded")
    return Outcome({"jobs": results}, lines, status)


COMMANDS = {
    "classify": cmd_classify,
    "join": cmd_join,
    "bstage": cmd_bstage,
    "pi1": cmd_pi1,
    "holonomy": cmd_holonomy,
    "push": cmd_push,
    "pull": cmd_pull,
    "equiv": cmd_equiv,
    "naturality": cmd_naturality,
    "run": cmd_run,
    "corpus": cmd_corpus,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["table", "json"], default="table")
    common.add_argument("--report", metavar="FILE", help="also write the JSON report here")
    p = argparse.ArgumentParser(prog="milnor", description="Classify principal bundles with finite structure group.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", parents=[common], help="classification table of G-bundles over a complex")
    s.add_argument("complex")
    s.add_argument("group")
    s.add_argument("--no-oracle", action="store_true", help="skip the brute-force enumeration")

    for name, helptext in (("join", "stage n of the join model"), ("bstage", "stage n of the classifying space")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("group")
        s.add_argument("n", type=int)

    s = sub.add_parser("pi1", parents=[common], help="edge-path presentation of the fundamental group")
    s.add_argument("complex")
    s.add_argument("--into", action="append", metavar="GROUP", help="count homomorphisms into GROUP")

    s = sub.add_parser("holonomy", parents=[common], help="holonomy of a cocycle")
    s.add_argument("cocycle")

    s = sub.add_parser("push", parents=[common], help="push a cocycle forward along a homomorphism")
    s.add_argument("hom")
    s.add_argument("cocycle")
    s.add_argument("--output", metavar="FILE", help="write the resulting cocycle")

    s = sub.add_parser("pull", parents=[common], help="pull a cocycle back along a simplicial map")
    s.add_argument("map")
    s.add_argument("cocycle")
    s.add_argument("--output", metavar="FILE", help="write the resulting cocycle")

    s = sub.add_parser("equiv", parents=[common], help="decide gauge equivalence of two cocycles")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--oracle", action="store_true", help="search every vertex gauge")

    s = sub.add_parser("naturality", parents=[common], help="check the naturality squares of a bundle square")
    s.add_argument("square")

    s = sub.add_parser("run", parents=[common], help="run the jobs of a manifest")
    s.add_argument("manifest")

    s = sub.add_parser("corpus", parents=[common], help="list (or export) the built-in corpus")
    s.add_argument("--export", metavar="DIR")
    return p


def execute(argv, base: Path = Path(".")) -> Outcome:
    """Parse and run one command; input problems become status-1 outcomes."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return Outcome({"error": "invalid command line"}, [], INPUT_ERROR if exc.code else OK)
    try:
        outcome = COMMANDS[args.command](args, Path(base))
    except (InputError, ComplexError, GroupError, CocycleError, PathError) as exc:
        outcome = Outcome({"error": str(exc)}, [f"error: {exc}"], INPUT_ERROR)
    except kernels.SearchLimitExceeded as exc:
        outcome = Outcome({"error": str(exc)}, [f"error: {exc}"], INPUT_ERROR)
    outcome.report = {"command": args.command, "status": outcome.status, **outcome.report}
    outcome.args = args
    return outcome


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    outcome = execute(argv)
    args = getattr(outcome, "args", None)
    if args is None:
        return outcome.status
    text = json.dumps(outcome.report, indent=2, ensure_ascii=False)
    if args.format == "json":
        print(text)
    else:
        print("\n".join(outcome.lines))
    if args.report:
        Path(args.report).parent.mkdir(parents=True, exist_ok=True)
        Path(args.report).write_text(text + "\n", encoding="utf-8")
    return outcome.status


if __name__ == "__main__":
    sys.exit(main())
