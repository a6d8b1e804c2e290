"""Finite models of a tower: carriers, evaluation, checking, strict builders.

A model is a truncated globular set together with an interpretation of every
generator of the tower as a function from the fiber product over its target
table to cells one dimension up.  Evaluation of an arbitrary term is
structurally recursive; the fiber products themselves realize the gluing
condition, so the concrete layer acts by boundary words through the canonical
presentations of the target's realization.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import coherator as coh
from . import groups
from .coherator import BaseT, TupleT
from .globe import GlobularSet, realize_sum


class ModelError(Exception):
    pass


class FillerError(ModelError):
    """A generator cannot be interpreted by the requested filler policy."""

    def __init__(self, gen_name, witness, got=None, want=None):
        self.gen_name = gen_name
        self.witness = witness
        msg = "no degenerate filler for %r at input %s" % (gen_name, (witness,))
        if got is not None:
            msg += ": boundary sides evaluate to %s vs %s" % (got, want)
        super().__init__(msg)


@dataclass
class Model:
    """A carrier plus (possibly lazy) generator interpretations."""

    tower: Tower
    carrier: GlobularSet
    interp: dict = field(default_factory=dict)
    filler: object = None  # callable (model, gen) -> dict, for missing generators
    units: tuple = None    # units[d][c] = degenerate (d+1)-cell over cell c
    label: str = ""

    def __post_init__(self):
        self._fibers = {}

    @property
    def trunc(self):
        return self.carrier.dim

    def cells(self, table):
        """The fiber product of carrier cells over a table of dimensions."""
        if table in self._fibers:
            return self._fibers[table]
        combos = [(c,) for c in range(self.carrier.count(table.upper[0]))]
        for k, j in enumerate(table.lower):
            m_next = table.upper[k + 1]
            ext = []
            for t in combos:
                lo = self.iter_src(table.upper[k], t[-1], j)
                for c in range(self.carrier.count(m_next)):
                    if self.iter_tgt(m_next, c, j) == lo:
                        ext.append(t + (c,))
            combos = ext
        combos = tuple(combos)
        self._fibers[table] = combos
        return combos

    def iter_src(self, d, c, j):
        while d > j:
            c = self.carrier.source(d, c)
            d -= 1
        return c

    def iter_tgt(self, d, c, j):
        while d > j:
            c = self.carrier.target(d, c)
            d -= 1
        return c

    def boundary(self, word, c):
        if word.is_identity:
            return c
        d = word.tgt
        while d > word.src + 1:
            c = self.carrier.source(d, c)
            d -= 1
        return self.carrier.source(d, c) if word.kind == "s" else self.carrier.target(d, c)

    def interp_for(self, gen):
        if gen.name not in self.interp:
            if self.filler is None:
                raise ModelError("generator %r is uninterpreted" % gen.name)
            self.interp[gen.name] = self.filler(self, gen)
        return self.interp[gen.name]

    def eval(self, term, x):
        """Evaluate a term on an element of the fiber product of its target.

        Returns a tuple indexed by the term's source table; use `eval1` for
        disk-sourced terms.
        """
        x = tuple(x)
        if isinstance(term, BaseT):
            return self._eval_gmap(term.gmap, x)
        if isinstance(term, TupleT):
            return tuple(self.eval1(c, x) for c in term.comps)
        y = self.eval(term.tail, x)
        z = self.interp_for(term.gen)[y]
        return self.eval(term.arg, (z,))

    def eval1(self, term, x):
        out = self.eval(term, x)
        assert len(out) == 1
        return out[0]

    def _eval_gmap(self, gm, x):
        treal = realize_sum(gm.target)
        sreal = realize_sum(gm.source)
        out = []
        for k in range(gm.source.width):
            m = gm.source.upper[k]
            top = sreal.legs[k][m][0]
            image = gm.maps[m][top]
            k2, w = treal.presentation(m, image)
            out.append(self.boundary(w, x[k2]))
        return tuple(out)

    def degenerate(self, d, c):
        if self.units is None:
            raise ModelError("model has no degeneracy structure")
        return self.units[d][c]

    def check(self, gens=None):
        """Verify the two boundary equations of each generator on every input."""
        report = []
        for gen in (gens if gens is not None else self.tower.gens()):
            table = self.interp_for(gen)
            for x in self.cells(gen.target):
                v = table[x]
                want_s = self.eval1(gen.fsrc, x)
                want_t = self.eval1(gen.gtgt, x)
                got_s = self.carrier.source(gen.dim, v)
                got_t = self.carrier.target(gen.dim, v)
                if got_s != want_s:
                    report.append((gen.name, x, "src", want_s, got_s))
                if got_t != want_t:
                    report.append((gen.name, x, "tgt", want_t, got_t))
        return report


def unit_filler(model, gen):
    """Fill a generator degenerately when its two boundary sides agree."""
    out = {}
    for x in model.cells(gen.target):
        a = model.eval1(gen.fsrc, x)
        b = model.eval1(gen.gtgt, x)
        if a != b:
            raise FillerError(gen.name, x, a, b)
        out[x] = model.degenerate(gen.dim - 1, a)
    return out


# ---------------------------------------------------------------------------
# Builtin strict models

@dataclass(frozen=True)
class Discrete:
    points: int


@dataclass(frozen=True)
class KG1:
    group: groups.Group


@dataclass(frozen=True)
class KAn:
    group: groups.Group
    n: int

    def __post_init__(self):
        assert self.n >= 2 and self.group.is_abelian()


@dataclass(frozen=True)
class XMod:
    xm: groups.CrossedModule


def _strict_carrier(spec, trunc):
    if isinstance(spec, Discrete):
        counts = [spec.points] * (trunc + 1)
        ident = lambda d: tuple(range(counts[d]))
        src = ((),) + tuple(ident(d) for d in range(1, trunc + 1))
        units = tuple(tuple(range(spec.points)) for _ in range(trunc))
        return GlobularSet(tuple(counts), src, src), units
    if isinstance(spec, KG1):
        n = spec.group.order
        counts = [1] + [n] * trunc
        src = [()] + [tuple(0 for _ in range(n))]
        for d in range(2, trunc + 1):
            src.append(tuple(range(n)))
        units = tuple([tuple([0])] + [tuple(range(n)) for _ in range(1, trunc)])
        gs = GlobularSet(tuple(counts), tuple(src), tuple(src))
        return gs, units
    if isinstance(spec, KAn):
        n, a = spec.n, spec.group.order
        counts = [1] * n + [a] * (trunc - n + 1)
        src = [()]
        for d in range(1, n):
            src.append((0,))
        src.append(tuple(0 for _ in range(a)))
        for d in range(n + 1, trunc + 1):
            src.append(tuple(range(a)))
        units = []
        for d in range(trunc):
            if d < n - 1:
                units.append((0,))
            elif d == n - 1:
                units.append((0,))
            else:
                units.append(tuple(range(a)))
        gs = GlobularSet(tuple(counts), tuple(src), tuple(src))
        return gs, tuple(units)
    if isinstance(spec, XMod):
        xm = spec.xm
        G, A = xm.grp, xm.agrp
        ng, na = G.order, A.order
        counts = [1, ng] + [ng * na] * (trunc - 1)
        src = [(), tuple(0 for _ in range(ng))]
        tgt = [(), tuple(0 for _ in range(ng))]
        # 2-cells (g, a) : g -> d(a)g, encoded as g*|A| + a
        src.append(tuple(g for g in range(ng) for _ in range(na)))
        tgt.append(tuple(G.op(xm.boundary[a], g) for g in range(ng) for a in range(na)))
        for d in range(3, trunc + 1):
            src.append(tuple(range(ng * na)))
            tgt.append(tuple(range(ng * na)))
        units = [tuple([0]), tuple(g * na for g in range(ng))]
        for d in range(2, trunc):
            units.append(tuple(range(ng * na)))
        gs = GlobularSet(tuple(counts), tuple(src), tuple(tgt))
        return gs, tuple(units)
    raise ModelError("unknown strict model spec %r" % (spec,))


class _StrictOps:
    """Composition, unit, and inverse operations of a strict structure."""

    def __init__(self, spec):
        self.spec = spec

    def comp(self, i, j, v, u):
        s = self.spec
        if isinstance(s, Discrete):
            return v
        if isinstance(s, KG1):
            return s.group.op(v, u) if j == 0 else v
        if isinstance(s, KAn):
            if i < s.n:
                return 0
            return s.group.op(v, u) if j < s.n else v
        xm = s.xm
        G, A, na = xm.grp, xm.agrp, xm.agrp.order
        if i == 1:
            return G.op(v, u)
        if j >= 2:
            return v
        gv, av = divmod(v, na)
        gu, au = divmod(u, na)
        if j == 0:
            return G.op(gv, gu) * na + A.op(av, xm.act(gv, au))
        return gu * na + A.op(av, au)

    def unit(self, i, c):
        s = self.spec
        if isinstance(s, (Discrete,)):
            return c
        if isinstance(s, KG1):
            return 0 if i == 0 else c
        if isinstance(s, KAn):
            return 0 if i < s.n else c
        na = s.xm.agrp.order
        if i == 0:
            return 0
        if i == 1:
            return c * na
        return c

    def inv(self, i, j, c):
        s = self.spec
        if isinstance(s, Discrete):
            return c
        if isinstance(s, KG1):
            return s.group.inv(c) if j == 0 else c
        if isinstance(s, KAn):
            if i < s.n:
                return 0
            return s.group.inv(c) if j < s.n else c
        xm = s.xm
        G, A, na = xm.grp, xm.agrp, xm.agrp.order
        if i == 1:
            return G.inv(c)
        if j >= 2:
            return c
        g, a = divmod(c, na)
        if j == 0:
            gi = G.inv(g)
            return gi * na + xm.act(gi, A.inv(a))
        return G.op(xm.boundary[a], g) * na + A.inv(a)


_BUNDLE_RE = None


def build_strict(spec, tower, bundle, extra_bundles=(), label=""):
    """Strict model: pregroupoid generators get the strict operations, every
    other generator is filled degenerately (or the build fails with a witness).

    Generators named by any bundle in `extra_bundles` are also interpreted by
    the strict operations, so alternative declared choices of composition,
    unit, or inverse receive the same interpretation as the primary ones.
    """
    carrier, units = _strict_carrier(spec, tower.trunc)
    ops = _StrictOps(spec)
    comp_names, unit_names, inv_names = {}, {}, {}
    for b in (bundle,) + tuple(extra_bundles):
        comp_names.update({name: ij for ij, name in b.comp.items()})
        unit_names.update({name: i for i, name in b.unit.items()})
        inv_names.update({name: ij for ij, name in b.inv.items()})

    def filler(model, gen):
        if gen.name in comp_names:
            i, j = comp_names[gen.name]
            return {x: ops.comp(i, j, x[0], x[1]) for x in model.cells(gen.target)}
        if gen.name in unit_names:
            i = unit_names[gen.name]
            return {x: ops.unit(i, x[0]) for x in model.cells(gen.target)}
        if gen.name in inv_names:
            i, j = inv_names[gen.name]
            return {x: ops.inv(i, j, x[0]) for x in model.cells(gen.target)}
        return unit_filler(model, gen)

    tower.seal()
    model = Model(tower, carrier, {}, filler, units,
                  label or spec.__class__.__name__)
    for gen in tower.gens():
        model.interp_for(gen)
    return model


# ---------------------------------------------------------------------------
# Restriction along tower functors

def restrict(model, functor):
    """Inverse image of a model along a validated tower functor."""

    def filler(m, gen):
        img = functor.assignment.get(gen.name)
        if img is None:
            img = functor.translate(coh.gen_term(gen))
        return {x: model.eval1(img, x) for x in m.cells(gen.target)}

    out = Model(functor.source, model.carrier, {}, filler, model.units,
                model.label + "|restricted")
    return out


# ---------------------------------------------------------------------------
# Model files

def model_to_json(model):
    data = {
        "dimension": model.trunc,
        "cells": [{"count": model.carrier.count(0)}] + [
            {"src": list(model.carrier.src[d]), "tgt": list(model.carrier.tgt[d])}
            for d in range(1, model.trunc + 1)
        ],
        "interp": {
            gen.name: [{"in": list(x), "out": v}
                       for x, v in sorted(model.interp_for(gen).items())]
            for gen in model.tower.gens()
        },
    }
    return data


def model_from_json(data, tower):
    trunc = data["dimension"]
    if trunc != tower.trunc:
        raise ModelError("model dimension %d does not match tower truncation %d"
                         % (trunc, tower.trunc))
    cells = [data["cells"][0]["count"]]
    src = [()]
    tgt = [()]
    for d in range(1, trunc + 1):
        entry = data["cells"][d]
        cells.append(len(entry["src"]))
        src.append(tuple(entry["src"]))
        tgt.append(tuple(entry["tgt"]))
    carrier = GlobularSet(tuple(cells), tuple(src), tuple(tgt))
    interp = {}
    for name, rows in data.get("interp", {}).items():
        if name not in tower:
            raise ModelError("interpretation for unknown generator %r" % name)
        interp[name] = {tuple(r["in"]): r["out"] for r in rows}
    model = Model(tower, carrier, interp, None, None, data.get("label", "file"))
    for gen in tower.gens():
        if gen.name not in interp:
            raise ModelError("missing interpretation for generator %r" % gen.name)
        if set(interp[gen.name]) != set(model.cells(gen.target)):
            raise ModelError("interpretation of %r does not cover the fiber product"
                             % gen.name)
    return model


# ---------------------------------------------------------------------------
# Morphisms of models

@dataclass
class ModelMorphism:
    source: Model
    target: Model
    maps: tuple  # maps[d][c]

    def apply(self, d, c):
        return self.maps[d][c]

    def validate(self):
        ms, mt = self.source, self.target
        assert ms.tower is mt.tower, "morphisms require a common tower"
        assert len(self.maps) == ms.trunc + 1
        for d in range(ms.trunc + 1):
            assert len(self.maps[d]) == ms.carrier.count(d)
            for c in range(ms.carrier.count(d)):
                assert 0 <= self.maps[d][c] < mt.carrier.count(d)
        for d in range(1, ms.trunc + 1):
            for c in range(ms.carrier.count(d)):
                if mt.carrier.source(d, self.maps[d][c]) != self.maps[d - 1][ms.carrier.source(d, c)]:
                    raise ModelError("morphism does not commute with src at dim %d" % d)
                if mt.carrier.target(d, self.maps[d][c]) != self.maps[d - 1][ms.carrier.target(d, c)]:
                    raise ModelError("morphism does not commute with tgt at dim %d" % d)
        for gen in ms.tower.gens():
            fsrc = ms.interp_for(gen)
            ftgt = mt.interp_for(gen)
            for x, v in fsrc.items():
                fx = tuple(self.maps[gen.target.upper[k]][x[k]] for k in range(len(x)))
                if ftgt[fx] != self.maps[gen.dim][v]:
                    raise ModelError("morphism does not commute with %r at %s"
                                     % (gen.name, (x,)))
        return self


def morphism_from_dims(source, target, dim_maps):
    """Build a morphism from maps given up to some dimension, repeating the top."""
    maps = []
    for d in range(source.trunc + 1):
        row = dim_maps[d] if d < len(dim_maps) else dim_maps[-1]
        maps.append(tuple(row))
    return ModelMorphism(source, target, tuple(maps)).validate()
