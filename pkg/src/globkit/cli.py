"""Command-line front end: tower scripts, models, groupoids, reports.

Exit codes: 0 success, 1 check/assertion failure, 2 parse error, 3 file error.
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys

from . import coherator as coh
from . import dsl
from . import gpd
from . import groups
from . import homotopy as hmt
from . import model as mdl
from .coherator import InadmissibleError, PregroupoidBundle, TermError
from .globe import GlobeError, Table, disk
from .theta0 import MatchingError


class CliError(Exception):
    def __init__(self, code, msg):
        self.code = code
        super().__init__(msg)


def _read(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise CliError(3, "cannot read %s: %s" % (path, e))


def _read_json(path):
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as e:
        raise CliError(3, "bad JSON in %s: %s" % (path, e))


def _load_tower(path, trunc=None):
    text = _read(path)
    try:
        return dsl.parse_tower(text, trunc)
    except dsl.ParseError as e:
        raise CliError(2, "%s: %s" % (path, e))
    except dsl.CheckError as e:
        raise CliError(1, "%s: %s" % (path, e))


def _bundle_for(tower):
    """Collect the stdlib-named structural generators present in a tower."""
    comp, unit, inv = {}, {}, {}
    for name in tower.names():
        m = re.match(r"^comp(\d+)_(\d+)$", name)
        if m:
            comp[(int(m.group(1)), int(m.group(2)))] = name
        m = re.match(r"^unit(\d+)$", name)
        if m:
            unit[int(m.group(1))] = name
        m = re.match(r"^inv(\d+)_(\d+)$", name)
        if m:
            inv[(int(m.group(1)), int(m.group(2)))] = name
    return PregroupoidBundle(comp, unit, inv)


def _group_by_name(name):
    try:
        return groups.by_name(name)
    except KeyError as e:
        raise CliError(2, str(e))


def _xmod_from_json(data):
    base = _group_by_name(data["base"])
    fiber = _group_by_name(data["fiber"])
    try:
        return groups.CrossedModule(base, fiber,
                                    tuple(data["boundary"]),
                                    tuple(tuple(r) for r in data["action"]))
    except AssertionError:
        raise CliError(1, "crossed module data violates its laws")


def _model_spec_from(args, tower):
    if getattr(args, "kg1", None):
        return mdl.KG1(_group_by_name(args.kg1))
    if getattr(args, "kan", None):
        name, n = args.kan.rsplit(",", 1)
        return mdl.KAn(_group_by_name(name), int(n))
    if getattr(args, "discrete", None) is not None:
        return mdl.Discrete(args.discrete)
    if getattr(args, "xmod", None):
        return mdl.XMod(_xmod_from_json(_read_json(args.xmod)))
    return None


def _load_model(args, tower, bundle):
    spec = _model_spec_from(args, tower)
    if spec is not None:
        try:
            return mdl.build_strict(spec, tower, bundle)
        except mdl.FillerError as e:
            raise CliError(1, str(e))
    if getattr(args, "model", None):
        try:
            return mdl.model_from_json(_read_json(args.model), tower)
        except mdl.ModelError as e:
            raise CliError(1, str(e))
    raise CliError(3, "no model given: pass a model file or a builtin flag")


def _parse_term_arg(tower, text, target_text=None):
    if target_text:
        try:
            target = _parse_table_arg(target_text)
        except GlobeError as e:
            raise CliError(2, str(e))
        script_target = target
    else:
        script_target = _infer_target(tower, text)
    try:
        p = dsl._Parser(text)
        term = dsl._parse_term(p, tower, script_target)
        if p.peek().kind != "eof":
            t = p.peek()
            raise dsl.ParseError(t.line, t.col, "trailing input %r" % t.value)
        return term
    except dsl.ParseError as e:
        raise CliError(2, str(e))


def _infer_target(tower, text):
    try:
        toks = dsl.tokenize(text)
    except dsl.ParseError as e:
        raise CliError(2, str(e))
    for t in toks:
        if t.kind == "name":
            if t.value in tower:
                return tower[t.value].target
            m = dsl._WORD_RE.match(t.value)
            if m:
                return disk(int(m.group(2)))
        break
    raise CliError(2, "cannot infer the term's target; pass --target")


def _parse_table_arg(text):
    try:
        parts = text.split()
        upper = [int(parts[0].lstrip("D"))]
        lower = []
        i = 1
        while i < len(parts):
            lower.append(int(parts[i].lstrip("+")))
            upper.append(int(parts[i + 1].lstrip("D")))
            i += 2
        return Table(tuple(upper), tuple(lower))
    except (ValueError, IndexError, GlobeError) as e:
        raise CliError(2, "bad table %r: %s" % (text, e))


def _group_report(grp):
    return {
        "name": groups.recognize(grp),
        "order": grp.order,
        "abelian": grp.is_abelian(),
        "table": [list(r) for r in grp.mult],
    }


def _emit(args, report, text):
    if args.format == "json":
        print(json.dumps(report, indent=2, default=str))
    else:
        print(text)


# ---------------------------------------------------------------------------
# Verbs

def cmd_check(args):
    tower = _load_tower(args.tower, args.dim)
    levels = [g.level for g in tower.gens()]
    rep = {"generators": len(tower), "levels": [min(levels), max(levels)] if levels else []}
    text = "%d generators, levels %d-%d, all admissible" % (
        len(tower), min(levels, default=0), max(levels, default=0))
    _emit(args, rep, text)
    return 0


def cmd_stdlib(args):
    tower, _ = coh.stdlib(args.dim if args.dim is not None else 4)
    text = dsl.emit_tower(tower)
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as e:
            raise CliError(3, str(e))
        _emit(args, {"generators": len(tower), "out": args.out},
              "wrote %d generators to %s" % (len(tower), args.out))
    else:
        print(text, end="")
    return 0


def cmd_normalize(args):
    tower = _load_tower(args.tower)
    term = _parse_term_arg(tower, args.term, args.target)
    nf = coh.normalize(term)
    _emit(args, {"normal_form": dsl.term_str(nf)}, dsl.term_str(nf))
    return 0


def cmd_admissible(args):
    tower = _load_tower(args.tower)
    f = _parse_term_arg(tower, args.src, args.target)
    g = _parse_term_arg(tower, args.tgt, args.target)
    verdict = coh.admissible(f, g)
    rep = {"admissible": verdict.ok, "reason": verdict.reason}
    if verdict.ok:
        _emit(args, rep, "admissible")
        return 0
    _emit(args, rep, "not admissible: %s" % verdict.reason)
    return 1


def cmd_model_check(args):
    tower = _load_tower(args.tower)
    bundle = _bundle_for(tower)
    model = _load_model(args, tower, bundle)
    bad = model.check()
    if bad:
        lines = ["violation at %s on input %s (%s: expected %s, got %s)" % v
                 for v in bad[:10]]
        _emit(args, {"violations": [list(map(str, v)) for v in bad]}, "\n".join(lines))
        return 1
    _emit(args, {"violations": []}, "model checks clean (%d generators)" % len(tower))
    return 0


def cmd_pi(args):
    tower = _load_tower(args.tower)
    bundle = _bundle_for(tower)
    model = _load_model(args, tower, bundle)
    try:
        if args.n == 0:
            _, classes = hmt.pi0(model)
            rep = {"pi0": len(classes), "classes": [list(c) for c in classes]}
            _emit(args, rep, "pi_0 = %d classes" % len(classes))
            return 0
        grp, _, _ = hmt.pi_n(model, bundle, args.n, args.base)
        rep = {"n": args.n, "group": _group_report(grp)}
        text = "pi_%d = %s (order %d, %s)" % (
            args.n, groups.recognize(grp), grp.order,
            "abelian" if grp.is_abelian() else "nonabelian")
        _emit(args, rep, text)
        return 0
    except (hmt.HomotopyError, mdl.ModelError) as e:
        raise CliError(1, str(e))


def cmd_weq(args):
    tower = _load_tower(args.tower)
    bundle = _bundle_for(tower)
    data = _read_json(args.morphism)

    def load_side(spec):
        ns = argparse.Namespace(kg1=None, kan=None, discrete=None, xmod=None, model=None)
        if "kg1" in spec:
            ns.kg1 = spec["kg1"]
        elif "kan" in spec:
            ns.kan = "%s,%d" % (spec["kan"][0], spec["kan"][1])
        elif "discrete" in spec:
            ns.discrete = spec["discrete"]
        elif "xmod" in spec:
            return mdl.build_strict(mdl.XMod(_xmod_from_json(spec["xmod"])), tower, bundle)
        elif "file" in spec:
            ns.model = spec["file"]
        else:
            raise CliError(2, "morphism file: unknown model spec %s" % spec)
        return _load_model(ns, tower, bundle)

    src = load_side(data["source"])
    tgt = load_side(data["target"])
    try:
        morph = mdl.morphism_from_dims(src, tgt, [tuple(r) for r in data["map"]])
        report = hmt.weak_equiv(morph, bundle)
    except (mdl.ModelError, hmt.HomotopyError, AssertionError) as e:
        raise CliError(1, str(e))
    rep = {"conditions": [report.cond1, report.cond2, report.cond3, report.cond4],
           "weak_equivalence": report.is_weak_equivalence}
    text = "\n".join([
        "condition 1 (pi_0 + pi_n at objects):   %s" % report.cond1,
        "condition 2 (pi_n at all cells):        %s" % report.cond2,
        "condition 3 (Pi_1 equivalence + bijections): %s" % report.cond3,
        "condition 4 (full + surjections):       %s" % report.cond4,
        "weak equivalence: %s" % report.is_weak_equivalence,
    ])
    _emit(args, rep, text)
    return 0


def cmd_fundamental(args):
    data = _read_json(args.groupoid)
    try:
        X = gpd.groupoid_from_json(data)
    except gpd.GroupoidError as e:
        raise CliError(1, str(e))
    tower, bundle = coh.stdlib(args.dim if args.dim is not None else 4)
    try:
        report = gpd.compare(X, tower, bundle, check=args.check)
    except gpd.GroupoidError as e:
        raise CliError(1, str(e))
    rep = {
        "pi0": report.pi0_model,
        "pi1": {str(x): names[0] for x, names in report.pi1.items()},
        "higher_trivial": report.higher_trivial,
    }
    lines = ["pi_0 = %d" % report.pi0_model]
    for x, (a, _) in sorted(report.pi1.items()):
        lines.append("pi_1 at object %d = %s" % (x, a))
    lines.append("pi_n = 0 for 2 <= n <= %d" % (tower.trunc - 1))
    lines.append("comparison with the groupoid-side pipeline: agree")
    _emit(args, rep, "\n".join(lines))
    return 0


def cmd_gpd_pi(args):
    data = _read_json(args.groupoid)
    try:
        X = gpd.groupoid_from_json(data)
    except gpd.GroupoidError as e:
        raise CliError(1, str(e))
    if args.n == 0:
        n = gpd.pi0_gpd(X)
        _emit(args, {"pi0": n}, "pi_0 = %d" % n)
        return 0
    try:
        grp = gpd.quillen_pi_n(X, args.x, args.n)
    except gpd.GroupoidError as e:
        raise CliError(1, str(e))
    text = "pi_%d = %s (order %d, %s)" % (
        args.n, groups.recognize(grp), grp.order,
        "abelian" if grp.is_abelian() else "nonabelian")
    _emit(args, {"n": args.n, "group": _group_report(grp)}, text)
    return 0


def cmd_divide(args):
    tower = _load_tower(args.tower)
    bundle = _bundle_for(tower)
    model = _load_model(args, tower, bundle)
    try:
        res = hmt.divide(model, bundle, args.n, args.i, args.gamma, args.u, args.v,
                         side=args.side)
    except (hmt.HomotopyError, mdl.ModelError, InadmissibleError) as e:
        raise CliError(1, str(e))
    rep = {
        "forward": {str(k): v for k, v in res.forward.items()},
        "backward": {str(k): v for k, v in res.backward.items()},
        "classes_forward": {str(k): v for k, v in res.fwd_classes.items()},
        "verified": True,
    }
    lines = ["forward:  %s" % res.forward,
             "backward: %s" % res.backward,
             "both composites are the identity on homotopy classes"]
    _emit(args, rep, "\n".join(lines))
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--dim", type=int, default=None,
                        help="truncation override (defaults to the script's "
                             "dim statement, or 4 for generated towers)")
    ap = argparse.ArgumentParser(prog="globkit", parents=[common],
                                 description="coherence towers, finite models, "
                                             "homotopy groups, groupoid comparison")
    sub = ap.add_subparsers(dest="verb", required=True, parser_class=lambda **kw:
                            argparse.ArgumentParser(parents=[common], **kw))

    p = sub.add_parser("check", help="replay and validate a tower script")
    p.add_argument("tower")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("stdlib", help="emit the standard tower")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_stdlib)

    p = sub.add_parser("normalize", help="normal form of a term")
    p.add_argument("tower")
    p.add_argument("--term", required=True)
    p.add_argument("--target")
    p.set_defaults(fn=cmd_normalize)

    p = sub.add_parser("admissible", help="admissibility verdict for a pair")
    p.add_argument("tower")
    p.add_argument("--src", required=True)
    p.add_argument("--tgt", required=True)
    p.add_argument("--target")
    p.set_defaults(fn=cmd_admissible)

    def model_flags(p):
        p.add_argument("model", nargs="?")
        p.add_argument("--kg1")
        p.add_argument("--kan")
        p.add_argument("--discrete", type=int)
        p.add_argument("--xmod")

    p = sub.add_parser("model-check", help="check a model of a tower")
    p.add_argument("tower")
    model_flags(p)
    p.set_defaults(fn=cmd_model_check)

    p = sub.add_parser("pi", help="homotopy group of a model")
    p.add_argument("tower")
    model_flags(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--base", type=int, default=0)
    p.set_defaults(fn=cmd_pi)

    p = sub.add_parser("weq", help="four-condition weak equivalence report")
    p.add_argument("tower")
    p.add_argument("morphism")
    p.set_defaults(fn=cmd_weq)

    p = sub.add_parser("fundamental", help="fundamental model of a groupoid + comparison")
    p.add_argument("groupoid")
    p.add_argument("--check", action="store_true")
    p.set_defaults(fn=cmd_fundamental)

    p = sub.add_parser("gpd-pi", help="groupoid-side homotopy groups")
    p.add_argument("groupoid")
    p.add_argument("--x", type=int, default=0)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(fn=cmd_gpd_pi)

    p = sub.add_parser("divide", help="division construction with verification")
    p.add_argument("tower")
    model_flags(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--i", type=int, required=True)
    p.add_argument("--gamma", type=int, required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--side", choices=("left", "right"), default="left")
    p.set_defaults(fn=cmd_divide)

    return ap


def run(argv):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    random.seed(args.seed)
    try:
        return args.fn(args)
    except CliError as e:
        print("error: %s" % e, file=sys.stderr)
        return e.code
    except dsl.ParseError as e:
        print("error: %s" % e, file=sys.stderr)
        return 2
    except dsl.CheckError as e:
        print("error: %s" % e, file=sys.stderr)
        return 1
    except (InadmissibleError, TermError, MatchingError, GlobeError,
            hmt.HomotopyError, mdl.ModelError, gpd.GroupoidError) as e:
        print("error: %s" % e, file=sys.stderr)
        return 1
    except OSError as e:
        print("error: %s" % e, file=sys.stderr)
        return 3


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
