"""The ``orw`` command line.

Exit status: 0 when every check passed, 1 when a check failed (witnesses are
printed), 2 on usage, parse or load errors.
"""

from __future__ import annotations

import argparse
import collections
import json
import os
import sys

from . import automaton
from .branchings import (classify_family, compile_families, complete, gs_trivial, iter_critical_pairs,
                         joinable, match_completion_targets, order_key)
from .enumerate import MonomialSpace
from .measures import NAMED, check_termination, named_measure
from .presets import NAMES, export_preset, load_preset
from .resolution import Contraction, UnsupportedDimension, boundary, check_reduced, squier_generators
from .rewrite import NonTermination
from .syntax import ParseError, parse_monomial, parse_polynomial
from .systemfile import SystemFileError, load_system, parse_lambda


class UsageError(Exception):
    pass


class Output:
    """Human text or JSON lines."""

    def __init__(self, as_json: bool, stream=None):
        self.json = as_json
        self.stream = stream or sys.stdout

    def record(self, obj: dict, text: str | None = None) -> None:
        if self.json:
            print(json.dumps(obj, ensure_ascii=False, sort_keys=True), file=self.stream)
        elif text is not None:
            print(text, file=self.stream)

    def summary(self, obj: dict, text: str) -> None:
        self.record(dict(obj, summary=True), text)


# ---------------------------------------------------------------------------
# argument handling

def _gens(text: str | None):
    if text is None:
        return None
    gens = [g for g in text.replace(",", " ").split() if g]
    if not gens:
        raise UsageError("--gens needs at least one generator")
    return gens


def _system(args, required: bool = True):
    if args.preset and args.system:
        raise UsageError("give either --preset or --system, not both")
    lam = parse_lambda(args.lam) if args.lam is not None else None
    if args.preset:
        if args.preset not in NAMES:
            raise UsageError(f"unknown preset {args.preset!r}; expected one of {', '.join(NAMES)}")
        return load_preset(args.preset, _gens(args.gens), lam if lam is not None else 1)
    if args.system:
        with open(args.system, encoding="utf-8") as fh:
            text = fh.read()

        def resolver(name, gens, lam_):
            return load_preset(name, gens, lam_)

        return load_system(text, name=os.path.basename(args.system), resolver=resolver,
                           gens=_gens(args.gens), lam=lam)
    if required:
        raise UsageError("a system is required: --preset NAME or --system FILE")
    return None


def _alphabet(args):
    system = _system(args, required=False)
    if system is not None:
        return system, list(system.gens), list(system.ops)
    gens = _gens(args.gens) or ["x"]
    ops = [o for o in (args.ops or "D,P").replace(",", " ").split() if o]
    return None, gens, ops


def _pairs(system, bound):
    return iter_critical_pairs(system, bound)


# ---------------------------------------------------------------------------
# commands

def cmd_normalize(args, out: Output) -> int:
    system = _system(args)
    p = parse_polynomial(args.term, system.gens, system.ops, system.lam, system.nf_marker)
    nf, path = system.normalize(p, strategy=args.strategy, seed=args.seed, fuel=args.fuel)
    rec = {"term": args.term, "normal_form": system.fmt(nf)}
    if args.trace:
        rec["path"] = path.to_dict()
    text = system.fmt(nf)
    if args.trace and not out.json:
        lines = [f"  {c} * {s.label()}" for c, s in path.steps]
        text = "\n".join(lines + [text])
    out.record(rec, text)
    return 0


def cmd_flatten(args, out: Output) -> int:
    _, gens, ops = _alphabet(args)
    m = parse_monomial(args.term, gens, ops)
    w = automaton.flatten(m)
    out.record({"term": str(m), "word": list(w)}, automaton.format_word(w) or "eps")
    return 0


def cmd_unflatten(args, out: Output) -> int:
    _, gens, _ = _alphabet(args)
    w = automaton.parse_word(args.word)
    m = automaton.unflatten(w, gens)
    out.record({"word": list(w), "term": str(m)}, str(m))
    return 0


def cmd_pda_accept(args, out: Output) -> int:
    _, gens, ops = _alphabet(args)
    if args.machine == "anbn":
        pda = automaton.anbn_pda()
    else:
        pda = automaton.preset_pda(args.machine, gens, ops)
    w = automaton.parse_word(args.word)
    if args.machine == "anbn" and len(w) == 1 and w[0] not in pda.input_alphabet:
        w = tuple(w[0])     # letters may be run together: aabb
    res = automaton.pda_run(pda, w)
    rec = {"machine": args.machine, "word": list(w), "accepted": res.accepted,
           "stacks": res.stacks(), "diagnostic": res.diagnostic}
    text = "accepted" if res.accepted else f"rejected: {res.diagnostic}"
    if res.accepted and args.trace:
        text += "\n" + " -> ".join(res.stacks())
    out.record(rec, text)
    return 0 if res.accepted else 1


def _measure(args, system):
    name = args.measure or system.measure_name
    if name is None:
        raise UsageError("the system bundles no measure; pass --measure")
    if os.path.exists(name):
        with open(name, encoding="utf-8") as fh:
            name = fh.read().strip()
    try:
        return named_measure(name, system)
    except ValueError as e:
        raise UsageError(str(e))


def cmd_check(args, out: Output) -> int:
    system = _system(args)
    red = check_reduced(system, args.bound)
    status = 0
    out.record({"check": "reduced", "left": red.left, "right": red.right,
                "left_witness": None if red.left else red.left_witness.label(),
                "right_witness": None if red.right else red.right_witness.label()},
               f"left-reduced: {red.left}" + ("" if red.left else f" ({red.left_witness.label()})")
               + f"\nright-reduced: {red.right}"
               + ("" if red.right else f" ({red.right_witness.label()})"))
    if system.measure_name:
        rep = check_termination(system, named_measure(system.measure_name, system), args.bound)
        out.record(dict(rep.to_dict(), check="termination"),
                   f"termination ({rep.measure}, bound {rep.bound}): {'PASS' if rep.passed else 'FAIL'}"
                   + ("" if rep.passed else f"\n  {rep.counterexample}"))
        status = 0 if rep.passed else 1
    else:
        out.record({"check": "termination", "passed": None, "note": "no bundled measure"},
                   "termination: no bundled measure")
    return status


def cmd_term_check(args, out: Output) -> int:
    system = _system(args)
    spec = _measure(args, system)
    rep = check_termination(system, spec, args.bound)
    out.record(rep.to_dict(), f"{'PASS' if rep.passed else 'FAIL'}: {rep.measure} at bound {rep.bound}, "
               f"{rep.checked} instances" + ("" if rep.passed else f"\n  {rep.counterexample}"))
    return 0 if rep.passed else 1


def cmd_cp(args, out: Output) -> int:
    system = _system(args)
    templates = None
    if args.classify_families:
        templates = compile_families(system)
        if not templates:
            raise UsageError(f"system {system.name} has no family templates")
    counts = collections.Counter()
    total = bad = unclassified = 0
    for cb in _pairs(system, args.bound):
        total += 1
        j = joinable(system, cb)
        rec = dict(cb.to_dict(), joinable=j.joinable)
        fam = None
        if templates is not None:
            fam = classify_family(cb, templates)
            rec["family"] = fam
            counts[fam] += 1
            if fam is None:
                unclassified += 1
        if not j.joinable:
            bad += 1
            rec["left_nf"] = system.fmt(j.left_nf)
            rec["right_nf"] = system.fmt(j.right_nf)
        if args.all or not j.joinable or (templates is not None and fam is None):
            text = f"{cb.kind} {cb.source}: {cb.left.label()} / {cb.right.label()}"
            text += f"  joinable={j.joinable}"
            if templates is not None:
                text += f"  family={fam}"
            out.record(rec, text)
        elif out.json:
            out.record(rec)
    summ = {"pairs": total, "nonjoinable": bad}
    text = f"{total} critical pairs, {bad} non-joinable"
    if templates is not None:
        summ["unclassified"] = unclassified
        summ["families"] = {str(k): v for k, v in sorted(counts.items(), key=lambda kv: str(kv[0]))}
        text += f", {unclassified} unclassified"
        for k, v in sorted(counts.items(), key=lambda kv: str(kv[0])):
            text += f"\n  {k}: {v}"
    out.summary(summ, text)
    return 0 if bad == 0 and unclassified == 0 else 1


def cmd_confluence(args, out: Output) -> int:
    system = _system(args)
    total = bad = 0
    for cb in _pairs(system, args.bound):
        total += 1
        j = joinable(system, cb)
        if not j.joinable:
            bad += 1
            out.record(dict(cb.to_dict(), left_nf=system.fmt(j.left_nf), right_nf=system.fmt(j.right_nf)),
                       f"non-joinable {cb.source}: {cb.left.label()} / {cb.right.label()}\n"
                       f"  {system.fmt(j.left_nf)}  vs  {system.fmt(j.right_nf)}")
    out.summary({"pairs": total, "nonjoinable": bad, "bound": args.bound},
                f"{total} critical pairs up to size {args.bound}: "
                + ("all joinable" if bad == 0 else f"{bad} non-joinable"))
    return 0 if bad == 0 else 1


def cmd_gs_check(args, out: Output) -> int:
    system = _system(args)
    key = order_key(system)
    cache: dict = {}
    total = trivial = disagree = 0
    for cb in _pairs(system, args.bound):
        total += 1
        g = gs_trivial(system, cb, key, cache)
        j = joinable(system, cb).joinable
        trivial += g.trivial
        if g.trivial != j:
            disagree += 1
            out.record(dict(cb.to_dict(), gs_trivial=g.trivial, joinable=j, witness=g.witness),
                       f"disagreement at {cb.source}: gs_trivial={g.trivial} joinable={j} {g.witness}")
    out.summary({"pairs": total, "gs_trivial": trivial, "disagreements": disagree},
                f"{total} critical pairs, {trivial} trivial compositions, {disagree} disagreements "
                "between triviality and joinability")
    return 0 if disagree == 0 else 1


def cmd_complete(args, out: Output) -> int:
    system = _system(args)
    done, rep = complete(system, args.bound, args.rounds)
    names = dict(match_completion_targets(done, rep)) if "D" in system.ops and "P" in system.ops \
        else {}
    unmatched = 0
    for a in rep.added:
        kind = names.get(str(a.rule.lhs))
        if names and kind is None:
            unmatched += 1
        out.record({"round": a.round, "lhs": str(a.rule.lhs), "rhs": done.fmt(a.rule.rhs),
                    "origin": a.origin, "instance_of": kind},
                   f"[{a.round}] {a.rule.lhs} -> {done.fmt(a.rule.rhs)}"
                   + (f"   ({kind})" if kind else ""))
    kinds = collections.Counter(names.values()) if names else {}
    out.summary({"rounds": rep.rounds, "converged": rep.converged, "sound": rep.sound,
                 "added": len(rep.added), "instance_counts": dict(kinds), "unmatched": unmatched},
                f"{len(rep.added)} rules added in {rep.rounds} round(s); converged={rep.converged}, "
                f"sound={rep.sound}" + (f"; instances {dict(kinds)}, unmatched {unmatched}"
                                        if names else ""))
    return 0 if rep.converged and rep.sound and unmatched == 0 else 1


def cmd_basis(args, out: Output) -> int:
    system = _system(args)
    if args.compare_phi and system.phi is None:
        raise UsageError(f"system {system.name} declares no normal-form predicate")
    space = MonomialSpace(system.gens, system.ops)
    n = mism = 0
    for m in space.up_to(args.bound):
        nf = system.is_normal_form(m)
        if not nf:
            continue
        n += 1
        if args.list:
            out.record({"normal_form": str(m)}, str(m))
    if args.compare_phi:
        for m in space.up_to(args.bound):
            a, b = system.is_normal_form(m), bool(system.phi(m))
            if a != b:
                mism += 1
                out.record({"monomial": str(m), "normal_form": a, "phi": b},
                           f"mismatch {m}: normal form={a}, {system.phi_name}={b}")
    summ = {"bound": args.bound, "normal_forms": n}
    text = f"{n} normal forms up to size {args.bound}"
    if args.compare_phi:
        summ["mismatches"] = mism
        text += f"; {mism} mismatches against {system.phi_name}"
    out.summary(summ, text)
    return 0 if mism == 0 else 1


def cmd_squier(args, out: Output) -> int:
    system = _system(args)
    tuples = squier_generators(system, args.n, args.bound)
    sig = Contraction(system)
    open_ = 0
    for t in tuples:
        rec = {"tuple": str(t), "dimension": t.dimension}
        text = str(t)
        if args.boundaries:
            b = boundary(system, t, sig)
            rec["boundary"] = b.to_dict(system)
            if t.dimension == 1:
                text += f"   : {b.source} -> {system.fmt(b.target)}"
            else:
                text += f"   : {len(b.left)} / {len(b.right)} steps, " \
                        f"{'closed' if b.closed else 'OPEN'} at {system.fmt(b.right.end)}"
            if not b.closed:
                open_ += 1
        out.record(rec, text)
    out.summary({"n": args.n, "bound": args.bound, "count": len(tuples), "open": open_},
                f"{len(tuples)} generators of dimension {args.n} up to size {args.bound}"
                + (f"; {open_} open boundaries" if args.boundaries else ""))
    return 0 if open_ == 0 else 1


def cmd_export(args, out: Output) -> int:
    if args.preset:
        lam = parse_lambda(args.lam) if args.lam is not None else 1
        text = export_preset(args.preset, _gens(args.gens), lam)
    else:
        text = _system(args).describe()
    if out.json:
        out.record({"text": text})
    else:
        sys.stdout.write(text)
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    src = argparse.ArgumentParser(add_help=False)
    g = src.add_argument_group("system")
    g.add_argument("--preset", choices=None, help=f"one of {', '.join(NAMES)}")
    g.add_argument("--system", metavar="FILE", help="system file")
    g.add_argument("--gens", help="generators, comma or space separated")
    g.add_argument("--lambda", dest="lam", help="the weight lambda (rational)")
    g.add_argument("--json", action="store_true", help="JSON lines output")
    g.add_argument("--jobs", type=int, default=1, help="worker cap (work currently runs in-process)")

    p = argparse.ArgumentParser(prog="orw", description="Operated rewriting systems.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[src], help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("normalize", cmd_normalize, "normal form of a term")
    sp.add_argument("term")
    sp.add_argument("--strategy", choices=("deterministic", "random"), default="deterministic")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--fuel", type=int)
    sp.add_argument("--trace", action="store_true")

    for name, func, arg in (("flatten", cmd_flatten, "term"), ("unflatten", cmd_unflatten, "word")):
        sp = add(name, func, f"{name} a {arg}")
        sp.add_argument(arg)
        sp.add_argument("--ops", help="operators when no system is given (default D,P)")

    sp = add("pda-accept", cmd_pda_accept, "run a pushdown automaton")
    sp.add_argument("word")
    sp.add_argument("--machine", default="A_Omega",
                    choices=list(automaton.PRESET_PDAS) + ["anbn"])
    sp.add_argument("--ops", help="operators for A_Omega without a system (default D,P)")
    sp.add_argument("--trace", action="store_true")

    sp = add("check", cmd_check, "reducedness and bundled termination")
    sp.add_argument("--bound", type=int, default=6)

    sp = add("term-check", cmd_term_check, "termination under a measure")
    sp.add_argument("--measure", help=f"{', '.join(NAMED)}, count:PATTERN, or a file holding one")
    sp.add_argument("--bound", type=int, default=6)

    sp = add("cp", cmd_cp, "critical pairs")
    sp.add_argument("--bound", type=int, required=True)
    sp.add_argument("--classify-families", action="store_true")
    sp.add_argument("--all", action="store_true", help="print every pair, not only failures")

    sp = add("confluence", cmd_confluence, "joinability of all critical pairs")
    sp.add_argument("--bound", type=int, required=True)

    sp = add("gs-check", cmd_gs_check, "composition triviality against joinability")
    sp.add_argument("--bound", type=int, required=True)

    sp = add("complete", cmd_complete, "bounded completion")
    sp.add_argument("--bound", type=int, required=True)
    sp.add_argument("--rounds", type=int, default=3)

    sp = add("basis", cmd_basis, "normal forms up to a size")
    sp.add_argument("--bound", type=int, required=True)
    sp.add_argument("--compare-phi", action="store_true")
    sp.add_argument("--list", action="store_true")

    sp = add("squier", cmd_squier, "Squier generators")
    sp.add_argument("-n", type=int, required=True)
    sp.add_argument("--bound", type=int, required=True)
    sp.add_argument("--boundaries", action="store_true")

    add("export", cmd_export, "print a system file")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    out = Output(args.json)
    try:
        return args.func(args, out)
    except (UsageError, ParseError, SystemFileError, automaton.MalformedWord,
            automaton.PdaError, UnsupportedDimension, OSError) as e:
        print(f"orw: error: {e}", file=sys.stderr)
        return 2
    except NonTermination as e:
        print(f"orw: error: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"orw: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
