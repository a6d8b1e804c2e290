"""Free extensions of the disk calculus by declared lifting generators.

A tower starts from the concrete maps of `theta0` and freely adds, level by
level, generators h : D_{n+1} -> S whose two boundary equations h.s = f and
h.t = g are the only new relations.  Morphisms are kept in a normal form
built from concrete maps, generator chains, and tuples over amalgamated
sums; the smart constructors below orient the relations as rewrites:

  * a concrete map out of a disk into a sum collapses against a tuple
    through its canonical (leg, word) presentation;
  * a generator post-composed with a word of its top dimension reduces to
    the declared f or g;
  * a tuple whose components are all concrete recombines into one concrete
    map.

`normalize` evaluates an arbitrary syntax tree through these constructors;
a separate small-step engine (`reduce_steps`) drives the same rules one
redex at a time under selectable strategies, which is what the confluence
and termination checks exercise.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import theta0
from .globe import DEFAULT_TRUNC, Table, Word, disk, idword, sword, tword
from .theta0 import GMap, MatchingError


class TermError(Exception):
    pass


class InadmissibleError(TermError):
    def __init__(self, verdict):
        self.verdict = verdict
        super().__init__(verdict.reason)


@dataclass(frozen=True)
class Gen:
    """A declared lifting generator h : D_dim -> target with boundaries (fsrc, gtgt)."""

    name: str
    dim: int
    target: Table
    fsrc: "Term"
    gtgt: "Term"
    level: int

    def __repr__(self):
        return "Gen(%s)" % self.name


@dataclass(frozen=True)
class BaseT:
    """A morphism lying in the concrete layer."""

    gmap: GMap

    @property
    def source(self):
        return self.gmap.source

    @property
    def target(self):
        return self.gmap.target


@dataclass(frozen=True)
class Chain:
    """tail ∘ gen ∘ arg with arg a disk-to-disk morphism in normal form."""

    tail: "Term"
    gen: Gen
    arg: "Term"

    @property
    def source(self):
        return self.arg.source

    @property
    def target(self):
        return self.tail.target


@dataclass(frozen=True)
class TupleT:
    """A morphism out of a sum, by its tuple of disk-sourced components."""

    src_table: Table
    comps: tuple

    @property
    def source(self):
        return self.src_table

    @property
    def target(self):
        return self.comps[0].target


Term = (BaseT, Chain, TupleT)


def base(gmap):
    return BaseT(gmap)


def identity(table):
    return BaseT(theta0.identity_gmap(table))


def wordt(kind, j, i):
    """The word map s/t from D_j to D_i as a term."""
    w = Word(j, i, None if i == j else kind)
    return BaseT(theta0.globe_functor(w))


def eps(table, k):
    """The k-th cocone leg as a term (0-indexed)."""
    return BaseT(theta0.leg_gmap(table, k))


def legs_base(target_table, ks, src_table):
    """Pairing of cocone legs as a single concrete map."""
    return BaseT(theta0.legs_pair_gmap(target_table, tuple(ks), src_table))


def gen_term(gen):
    return Chain(identity(gen.target), gen, identity(disk(gen.dim)))


def _gmap_word(gm):
    """Recover the word of a disk-to-disk concrete map."""
    m = gm.source.upper[0]
    i = gm.target.upper[0]
    if m == i:
        return idword(m)
    return Word(m, i, "s" if gm.maps[m][0] == 0 else "t")


def _make_chain(tail, gen, arg):
    """Chain constructor applying the generator's boundary equations."""
    if isinstance(arg, BaseT) and not arg.gmap.is_identity:
        w = _gmap_word(arg.gmap)
        m = w.src
        if m == gen.dim - 1:
            side = gen.fsrc if w.kind == "s" else gen.gtgt
            return compose(tail, side)
        # peel the (canonicalized) top letter; lower letters keep the kind
        rest = Word(m, gen.dim - 1, w.kind)
        return compose(tail, compose(gen.fsrc, BaseT(theta0.globe_functor(rest))))
    return Chain(tail, gen, arg)


def tuple_term(comps, src_table):
    """Tuple constructor: checks gluing, recombines all-concrete tuples."""
    comps = tuple(comps)
    if len(comps) != src_table.width:
        raise TermError("expected %d components, got %d" % (src_table.width, len(comps)))
    target = comps[0].target
    for k, c in enumerate(comps):
        if c.source != disk(src_table.upper[k]):
            raise TermError("component %d has source %s, expected D%d"
                            % (k, c.source, src_table.upper[k]))
        if c.target != target:
            raise TermError("component %d has target %s, expected %s"
                            % (k, c.target, target))
    for k, j in enumerate(src_table.lower):
        left = compose(comps[k], wordt("s", j, src_table.upper[k]))
        right = compose(comps[k + 1], wordt("t", j, src_table.upper[k + 1]))
        if left != right:
            raise MatchingError(k, j)
    if all(isinstance(c, BaseT) for c in comps):
        return BaseT(theta0.pair(tuple(c.gmap for c in comps), src_table))
    return TupleT(src_table, comps)


def compose(t2, t1):
    """Normal form of t2 ∘ t1 (t1 applied first)."""
    if t1.target != t2.source:
        raise TermError("cannot compose: %s then %s" % (t1.target, t2.source))
    if isinstance(t2, BaseT) and isinstance(t1, BaseT):
        return BaseT(theta0.compose(t2.gmap, t1.gmap))
    if isinstance(t1, TupleT):
        return tuple_term([compose(t2, c) for c in t1.comps], t1.src_table)
    if isinstance(t1, BaseT):
        if t1.source.width > 1:
            comps = [compose(t2, BaseT(theta0.compose(t1.gmap, theta0.leg_gmap(t1.source, k))))
                     for k in range(t1.source.width)]
            return tuple_term(comps, t1.source)
        if isinstance(t2, TupleT):
            k, w = theta0.decompose(t1.gmap)
            return compose(t2.comps[k], BaseT(theta0.globe_functor(w)))
        # t2 is a Chain
        return _make_chain(t2.tail, t2.gen, compose(t2.arg, t1))
    # t1 is a Chain
    return _make_chain(compose(t2, t1.tail), t1.gen, t1.arg)


def glob_source(t):
    """Normal form of t ∘ s_n for a term out of D_n, n >= 1."""
    n = _disk_dim(t)
    if n == 0:
        raise TermError("0-dimensional terms have no globular source")
    return compose(t, wordt("s", n - 1, n))


def glob_target(t):
    n = _disk_dim(t)
    if n == 0:
        raise TermError("0-dimensional terms have no globular target")
    return compose(t, wordt("t", n - 1, n))


def _disk_dim(t):
    if not t.source.is_disk:
        raise TermError("term is not disk-sourced")
    return t.source.upper[0]


def parallel(f, g):
    """Globular parallelism of two terms out of the same disk."""
    if f.source != g.source or f.target != g.target:
        raise TermError("terms are not co-spanned: %s/%s vs %s/%s"
                        % (f.source, f.target, g.source, g.target))
    n = _disk_dim(f)
    if n == 0:
        return True
    return glob_source(f) == glob_source(g) and glob_target(f) == glob_target(g)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str | None = None

    def __bool__(self):
        return self.ok


def admissible(f, g):
    """Admissibility verdict for a pair of terms out of D_n."""
    try:
        n = _disk_dim(f)
        if not f.source.is_disk or not g.source.is_disk:
            return Verdict(False, "pair is not disk-sourced")
        if f.source != g.source or f.target != g.target:
            return Verdict(False, "pair members have different spans")
    except TermError as e:
        return Verdict(False, str(e))
    if not parallel(f, g):
        return Verdict(False, "pair is not globularly parallel")
    if f.target.dimension > n + 1:
        return Verdict(False, "dimension of target exceeds n+1 (%d > %d)"
                       % (f.target.dimension, n + 1))
    return Verdict(True)


def mentioned_gens(t, acc=None):
    if acc is None:
        acc = {}
    if isinstance(t, Chain):
        acc[t.gen.name] = t.gen
        mentioned_gens(t.gen.fsrc, acc)
        mentioned_gens(t.gen.gtgt, acc)
        mentioned_gens(t.tail, acc)
        mentioned_gens(t.arg, acc)
    elif isinstance(t, TupleT):
        for c in t.comps:
            mentioned_gens(c, acc)
    return acc


class Tower:
    """An append-only, level-stratified list of lifting generators."""

    def __init__(self, trunc=DEFAULT_TRUNC):
        self.trunc = trunc
        self._gens = {}
        self._order = []
        self._sealed = False
        self.div_cache = {}

    def __contains__(self, name):
        return name in self._gens

    def __getitem__(self, name):
        return self._gens[name]

    def __len__(self):
        return len(self._order)

    def gens(self):
        return [self._gens[n] for n in self._order]

    def names(self):
        return list(self._order)

    def seal(self):
        self._sealed = True
        return self

    @property
    def sealed(self):
        return self._sealed

    def declare(self, name, fsrc, gtgt, auto=False):
        """Add a lifting of (fsrc, gtgt); the pair must be admissible."""
        if self._sealed and not auto:
            raise TermError("tower is sealed")
        if name in self._gens:
            raise TermError("duplicate generator name %r" % name)
        verdict = admissible(fsrc, gtgt)
        if not verdict:
            raise InadmissibleError(verdict)
        dim = _disk_dim(fsrc) + 1
        if dim > self.trunc:
            raise TermError("generator dimension %d exceeds truncation %d"
                            % (dim, self.trunc))
        deps = mentioned_gens(fsrc)
        mentioned_gens(gtgt, deps)
        level = 1 + max((g.level for g in deps.values()), default=0)
        gen = Gen(name, dim, fsrc.target, fsrc, gtgt, level)
        self._gens[name] = gen
        self._order.append(name)
        return gen

    def term(self, name):
        return gen_term(self._gens[name])

    def max_level(self):
        return max((g.level for g in self.gens()), default=0)


# ---------------------------------------------------------------------------
# The standard library of structural generators

@dataclass(frozen=True)
class PregroupoidBundle:
    """Named selections of composition, unit, and inverse generators."""

    comp: dict
    unit: dict
    inv: dict

    def comp_name(self, i, j):
        if (i, j) not in self.comp:
            raise TermError("the tower has no composition generator at (%d, %d)" % (i, j))
        return self.comp[(i, j)]

    def unit_name(self, i):
        if i not in self.unit:
            raise TermError("the tower has no unit generator at dimension %d" % i)
        return self.unit[i]

    def inv_name(self, i, j):
        if (i, j) not in self.inv:
            raise TermError("the tower has no inverse generator at (%d, %d)" % (i, j))
        return self.inv[(i, j)]


def comp_name(i, j):
    return "comp%d_%d" % (i, j)


def unit_name(i):
    return "unit%d" % i


def inv_name(i, j):
    return "inv%d_%d" % (i, j)


def glue2(i, j):
    return Table((i, i), (j,))


def stdlib(trunc=4):
    """Generate the standard tower of structural generators up to `trunc`.

    Level 1: codimension-1 compositions, units, codimension-1 inverses.
    Level c >= 2: codimension-c compositions and inverses (by the two-case
    boundary formulas), and at level 2 the associativity, unit, and inverse
    constraints.  Level 3: pentagon, exchange, and triangle constraints.
    """
    if trunc < 2:
        raise TermError("stdlib needs truncation >= 2")
    tw = Tower(trunc)

    def g(name):
        return tw.term(name)

    # codimension 1 compositions, units, inverses
    for i in range(1, trunc + 1):
        t2 = glue2(i, i - 1)
        tw.declare(comp_name(i, i - 1),
                   compose(eps(t2, 1), wordt("s", i - 1, i)),
                   compose(eps(t2, 0), wordt("t", i - 1, i)))
    for i in range(0, trunc):
        tw.declare(unit_name(i), identity(disk(i)), identity(disk(i)))
    for i in range(1, trunc + 1):
        tw.declare(inv_name(i, i - 1), wordt("t", i - 1, i), wordt("s", i - 1, i))

    # higher codimension by the case formulas
    for c in range(2, trunc + 1):
        for i in range(c, trunc + 1):
            j = i - c
            t2 = glue2(i, j)
            t2lo = glue2(i - 1, j)
            # (s ∐ s) and (t ∐ t): pairs of eps_k ∘ s_i / eps_k ∘ t_i over the lower sum
            smap = BaseT(theta0.pair(
                (theta0.compose(theta0.leg_gmap(t2, 0), theta0.globe_functor(sword(i - 1, i))),
                 theta0.compose(theta0.leg_gmap(t2, 1), theta0.globe_functor(sword(i - 1, i)))),
                t2lo))
            tmap = BaseT(theta0.pair(
                (theta0.compose(theta0.leg_gmap(t2, 0), theta0.globe_functor(tword(i - 1, i))),
                 theta0.compose(theta0.leg_gmap(t2, 1), theta0.globe_functor(tword(i - 1, i)))),
                t2lo))
            tw.declare(comp_name(i, j),
                       compose(smap, g(comp_name(i - 1, j))),
                       compose(tmap, g(comp_name(i - 1, j))))
            tw.declare(inv_name(i, j),
                       compose(wordt("s", i - 1, i), g(inv_name(i - 1, j))),
                       compose(wordt("t", i - 1, i), g(inv_name(i - 1, j))))

    # associativity, unit, and inverse constraints
    for i in range(1, trunc):
        t2 = glue2(i, i - 1)
        t3 = Table((i, i, i), (i - 1, i - 1))
        nab = g(comp_name(i, i - 1))
        e12 = legs_base(t3, (0, 1), t2)
        e23 = legs_base(t3, (1, 2), t2)
        tw.declare("assoc%d" % i,
                   compose(tuple_term([compose(e12, nab), eps(t3, 2)], t2), nab),
                   compose(tuple_term([eps(t3, 0), compose(e23, nab)], t2), nab))
        unit_lo = g(unit_name(i - 1))
        tw.declare("runit%d" % i,
                   compose(tuple_term([identity(disk(i)),
                                       compose(wordt("s", i - 1, i), unit_lo)], t2), nab),
                   identity(disk(i)))
        tw.declare("lunit%d" % i,
                   compose(tuple_term([compose(wordt("t", i - 1, i), unit_lo),
                                       identity(disk(i))], t2), nab),
                   identity(disk(i)))
        om = g(inv_name(i, i - 1))
        tw.declare("rinv%d" % i,
                   compose(tuple_term([identity(disk(i)), om], t2), nab),
                   compose(wordt("t", i - 1, i), unit_lo))
        tw.declare("linv%d" % i,
                   compose(tuple_term([om, identity(disk(i))], t2), nab),
                   compose(wordt("s", i - 1, i), unit_lo))

    # pentagon constraints
    for i in range(1, trunc - 1):
        tw.declare("pent%d" % i, *pentagon_pair(tw, i))

    # exchange constraints
    for i in range(2, trunc):
        tw.declare("exch%d" % i, *exchange_pair(tw, i))

    # triangle constraints
    for i in range(1, trunc - 1):
        tw.declare("tri%d" % i, *triangle_pair(tw, i))

    bundle = PregroupoidBundle(
        comp={(i, j): comp_name(i, j) for i in range(1, trunc + 1) for j in range(i)},
        unit={i: unit_name(i) for i in range(0, trunc)},
        inv={(i, j): inv_name(i, j) for i in range(1, trunc + 1) for j in range(i)},
    )
    return tw, bundle


def pentagon_pair(tw, i):
    """The two sides (c3, c2) of the pentagon for the codim-1 composition."""
    g = tw.term
    q4 = Table((i, i, i, i), (i - 1, i - 1, i - 1))
    t3 = Table((i, i, i), (i - 1, i - 1))
    t2 = glue2(i, i - 1)
    t2up = glue2(i + 1, i)
    t2wide = glue2(i + 1, i - 1)
    t3up = Table((i + 1, i + 1, i + 1), (i, i))
    nab, nab_up = g(comp_name(i, i - 1)), g(comp_name(i + 1, i))
    nab_wide = g(comp_name(i + 1, i - 1))
    al, ka = g("assoc%d" % i), g(unit_name(i))

    dda = tuple_term([eps(q4, 0), eps(q4, 1),
                      compose(legs_base(q4, (2, 3), t2), nab)], t3)
    add = tuple_term([compose(legs_base(q4, (0, 1), t2), nab),
                      eps(q4, 2), eps(q4, 3)], t3)
    c2 = compose(tuple_term([compose(dda, al), compose(add, al)], t2up), nab_up)

    x1 = compose(tuple_term([compose(eps(q4, 0), ka),
                             compose(legs_base(q4, (1, 2, 3), t3), al)], t2wide),
                 nab_wide)
    x2 = compose(tuple_term([eps(q4, 0),
                             compose(legs_base(q4, (1, 2), t2), nab),
                             eps(q4, 3)], t3), al)
    x3 = compose(tuple_term([compose(legs_base(q4, (0, 1, 2), t3), al),
                             compose(eps(q4, 3), ka)], t2wide),
                 nab_wide)
    mid = tuple_term([compose(legs_base(t3up, (0, 1), t2up), nab_up),
                      eps(t3up, 2)], t2up)
    c3 = compose(tuple_term([x1, x2, x3], t3up), compose(mid, nab_up))
    return c3, c2


def exchange_pair(tw, i):
    """The two sides of the exchange constraint between codim 1 and codim 2."""
    g = tw.term
    e4 = Table((i, i, i, i), (i - 1, i - 2, i - 1))
    t2 = glue2(i, i - 1)
    t2c2 = glue2(i, i - 2)
    nab, nab2 = g(comp_name(i, i - 1)), g(comp_name(i, i - 2))
    f = compose(tuple_term([compose(legs_base(e4, (0, 2), t2c2), nab2),
                            compose(legs_base(e4, (1, 3), t2c2), nab2)], t2), nab)
    gg = compose(tuple_term([compose(legs_base(e4, (0, 1), t2), nab),
                             compose(legs_base(e4, (2, 3), t2), nab)], t2c2), nab2)
    return f, gg


def triangle_pair(tw, i):
    """The two sides (d2, d1) of the triangle constraint."""
    g = tw.term
    t2 = glue2(i, i - 1)
    t3 = Table((i, i, i), (i - 1, i - 1))
    t2up = glue2(i + 1, i)
    t2wide = glue2(i + 1, i - 1)
    nab, nab_up, nab_wide = g(comp_name(i, i - 1)), g(comp_name(i + 1, i)), g(comp_name(i + 1, i - 1))
    ka, ka_lo = g(unit_name(i)), g(unit_name(i - 1))
    al, rho, lam = g("assoc%d" % i), g("runit%d" % i), g("lunit%d" % i)

    d1 = compose(tuple_term([compose(eps(t2, 0), rho),
                             compose(eps(t2, 1), ka)], t2wide), nab_wide)
    left = compose(tuple_term([compose(eps(t2, 0), ka),
                               compose(eps(t2, 1), lam)], t2wide), nab_wide)
    right = compose(tuple_term([eps(t2, 0),
                                compose(compose(eps(t2, 0), wordt("s", i - 1, i)), ka_lo),
                                eps(t2, 1)], t3), al)
    d2 = compose(tuple_term([left, right], t2up), nab_up)
    return d2, d1


def verify_bundle(tower, bundle, trunc=None):
    """Check the two-case boundary formulas of a pregroupoid bundle."""
    trunc = trunc if trunc is not None else tower.trunc
    g = tower.term
    for (i, j), name in bundle.comp.items():
        if i > trunc:
            continue
        t2 = glue2(i, j)
        if j == i - 1:
            want_s = compose(eps(t2, 1), wordt("s", i - 1, i))
            want_t = compose(eps(t2, 0), wordt("t", i - 1, i))
        else:
            t2lo = glue2(i - 1, j)
            smap = BaseT(theta0.pair(
                (theta0.compose(theta0.leg_gmap(t2, 0), theta0.globe_functor(sword(i - 1, i))),
                 theta0.compose(theta0.leg_gmap(t2, 1), theta0.globe_functor(sword(i - 1, i)))),
                t2lo))
            tmap = BaseT(theta0.pair(
                (theta0.compose(theta0.leg_gmap(t2, 0), theta0.globe_functor(tword(i - 1, i))),
                 theta0.compose(theta0.leg_gmap(t2, 1), theta0.globe_functor(tword(i - 1, i)))),
                t2lo))
            want_s = compose(smap, g(bundle.comp_name(i - 1, j)))
            want_t = compose(tmap, g(bundle.comp_name(i - 1, j)))
        if glob_source(g(name)) != want_s or glob_target(g(name)) != want_t:
            raise TermError("bundle composition %s violates its case formula" % name)
    for i, name in bundle.unit.items():
        if i + 1 > trunc:
            continue
        if glob_source(g(name)) != identity(disk(i)) or glob_target(g(name)) != identity(disk(i)):
            raise TermError("bundle unit %s violates its formula" % name)
    for (i, j), name in bundle.inv.items():
        if i > trunc:
            continue
        if j == i - 1:
            want_s, want_t = wordt("t", i - 1, i), wordt("s", i - 1, i)
        else:
            want_s = compose(wordt("s", i - 1, i), g(bundle.inv_name(i - 1, j)))
            want_t = compose(wordt("t", i - 1, i), g(bundle.inv_name(i - 1, j)))
        if glob_source(g(name)) != want_s or glob_target(g(name)) != want_t:
            raise TermError("bundle inverse %s violates its case formula" % name)
    return True


# ---------------------------------------------------------------------------
# Tower functors

@dataclass(frozen=True)
class TowerFunctor:
    source: Tower
    target: Tower
    assignment: dict  # generator name -> Term in the target tower

    def translate(self, t):
        if isinstance(t, BaseT):
            return t
        if isinstance(t, TupleT):
            return tuple_term([self.translate(c) for c in t.comps], t.src_table)
        img = self.assignment[t.gen.name]
        return compose(self.translate(t.tail), compose(img, self.translate(t.arg)))


def tower_functor(source, assignment, target):
    """Validated morphism of towers: each generator goes to a lifting of its pair."""
    full = {}
    for gen in source.gens():
        img = assignment.get(gen.name)
        if img is None:
            if gen.name not in target:
                raise TermError("no assignment for generator %r" % gen.name)
            img = target.term(gen.name)
        full[gen.name] = img
    fn = TowerFunctor(source, target, full)
    for gen in source.gens():
        img = full[gen.name]
        if img.source != disk(gen.dim) or img.target != gen.target:
            raise TermError("image of %r has the wrong span" % gen.name)
        if glob_source(img) != fn.translate(gen.fsrc):
            raise TermError("image of %r violates its source equation" % gen.name)
        if glob_target(img) != fn.translate(gen.gtgt):
            raise TermError("image of %r violates its target equation" % gen.name)
    return fn


# ---------------------------------------------------------------------------
# Raw syntax trees and the small-step rewriting engine

@dataclass(frozen=True)
class RBase:
    gmap: GMap

    @property
    def source(self):
        return self.gmap.source

    @property
    def target(self):
        return self.gmap.target


@dataclass(frozen=True)
class RGen:
    gen: Gen

    @property
    def source(self):
        return disk(self.gen.dim)

    @property
    def target(self):
        return self.gen.target


@dataclass(frozen=True)
class RTuple:
    src_table: Table
    comps: tuple

    @property
    def source(self):
        return self.src_table

    @property
    def target(self):
        return self.comps[0].target


@dataclass(frozen=True)
class RComp:
    outer: "Raw"
    inner: "Raw"

    @property
    def source(self):
        return self.inner.source

    @property
    def target(self):
        return self.outer.target


Raw = (RBase, RGen, RTuple, RComp)


def term_to_raw(t):
    if isinstance(t, BaseT):
        return RBase(t.gmap)
    if isinstance(t, TupleT):
        return RTuple(t.src_table, tuple(term_to_raw(c) for c in t.comps))
    raw = RGen(t.gen)
    if not (isinstance(t.arg, BaseT) and t.arg.gmap.is_identity):
        raw = RComp(raw, term_to_raw(t.arg))
    if not (isinstance(t.tail, BaseT) and t.tail.gmap.is_identity):
        raw = RComp(term_to_raw(t.tail), raw)
    return raw


def normalize(raw):
    """Normal form of a raw syntax tree (or of an already-normal term)."""
    if isinstance(raw, Term):
        raw = term_to_raw(raw)
    return _eval_raw(raw)


def _eval_raw(raw):
    if isinstance(raw, RBase):
        return BaseT(raw.gmap)
    if isinstance(raw, RGen):
        return gen_term(raw.gen)
    if isinstance(raw, RTuple):
        return tuple_term([_eval_raw(c) for c in raw.comps], raw.src_table)
    return compose(_eval_raw(raw.outer), _eval_raw(raw.inner))


def raw_size(raw):
    """Size measure; generators weigh their defining pair so substitution pays."""
    if isinstance(raw, RBase):
        return 1
    if isinstance(raw, RGen):
        return _gen_weight(raw.gen)
    if isinstance(raw, RTuple):
        return 1 + sum(raw_size(c) for c in raw.comps)
    return raw_size(raw.outer) + raw_size(raw.inner)


_GEN_WEIGHTS = {}


def _gen_weight(gen):
    if gen.name not in _GEN_WEIGHTS:
        _GEN_WEIGHTS[gen.name] = 1
        _GEN_WEIGHTS[gen.name] = (1 + raw_size(term_to_raw(gen.fsrc))
                                  + raw_size(term_to_raw(gen.gtgt)))
    return _GEN_WEIGHTS[gen.name]


def _spine(raw):
    """Flatten nested compositions into [outermost, ..., innermost]."""
    if isinstance(raw, RComp):
        return _spine(raw.outer) + _spine(raw.inner)
    return [raw]


def _unspine(factors):
    out = factors[-1]
    for f in reversed(factors[:-1]):
        out = RComp(f, out)
    return out


def _pair_redex(x, y):
    """Reduct of the adjacent pair x ∘ y, or None."""
    if isinstance(y, RBase) and y.gmap.is_identity:
        return [x]
    if isinstance(x, RBase) and x.gmap.is_identity:
        return [y]
    if isinstance(x, RBase) and isinstance(y, RBase):
        return [RBase(theta0.compose(x.gmap, y.gmap))]
    if isinstance(y, RTuple):
        comps = tuple(RComp(x, c) for c in y.comps)
        return [RTuple(y.src_table, comps)]
    if isinstance(y, RBase) and y.source.is_disk:
        if isinstance(x, RTuple):
            k, w = theta0.decompose(y.gmap)
            rest = [] if w.is_identity else [RBase(theta0.globe_functor(w))]
            return _spine(x.comps[k]) + rest
        if isinstance(x, RGen):
            gen = x.gen
            w = _gmap_word(y.gmap)
            if w.src == gen.dim - 1:
                side = gen.fsrc if w.kind == "s" else gen.gtgt
                return _spine(term_to_raw(side))
            rest = Word(w.src, gen.dim - 1, w.kind)
            return _spine(term_to_raw(gen.fsrc)) + [RBase(theta0.globe_functor(rest))]
    if isinstance(y, RBase) and y.source.width > 1 and not isinstance(x, RBase):
        comps = tuple(
            RComp(x, RBase(theta0.compose(y.gmap, theta0.leg_gmap(y.source, k))))
            for k in range(y.source.width))
        return [RTuple(y.source, comps)]
    return None


def _tuple_collapse(t):
    """Reduct of a lone tuple factor whose components are all concrete."""
    if all(isinstance(c, RBase) for c in t.comps):
        return RBase(theta0.pair(tuple(c.gmap for c in t.comps), t.src_table))
    return None


def _redexes(raw, path=()):
    """All redex positions in a deterministic depth-first order.

    A position is (path, index, 'pair' | 'collapse'), the path descending
    through tuple components as (factor index, component index) steps.
    """
    out = []
    factors = _spine(raw)
    for idx, f in enumerate(factors):
        if isinstance(f, RTuple):
            for ci, c in enumerate(f.comps):
                out.extend(_redexes(c, path + ((idx, ci),)))
            if _tuple_collapse(f) is not None:
                out.append((path, idx, "collapse"))
        if idx + 1 < len(factors):
            if _pair_redex(factors[idx], factors[idx + 1]) is not None:
                out.append((path, idx, "pair"))
    return out


def reduce_steps(raw, strategy="inner", max_steps=None):
    """Drive single-step reduction to normal form; returns (term, steps).

    strategy 'inner' picks the last redex in depth-first order (innermost),
    'outer' picks the first.  The step count is asserted against ten times
    the weighted size of the input.
    """
    bound = max_steps if max_steps is not None else 10 * raw_size(raw)
    steps = 0
    while True:
        reds = _redexes(raw)
        if not reds:
            break
        pos = reds[-1] if strategy == "inner" else reds[0]
        raw = _apply_pos(raw, pos)
        steps += 1
        if steps > bound:
            raise TermError("reduction exceeded %d steps" % bound)
    nf = _eval_raw(raw)
    return nf, steps


def _apply_pos(raw, pos):
    path, idx, kind = pos
    factors = _spine(raw)
    if path:
        fidx, ci = path[0]
        t = factors[fidx]
        comps = list(t.comps)
        comps[ci] = _apply_pos(comps[ci], (path[1:], idx, kind))
        factors[fidx] = RTuple(t.src_table, tuple(comps))
    elif kind == "collapse":
        factors[idx] = _tuple_collapse(factors[idx])
    else:
        factors[idx:idx + 2] = _pair_redex(factors[idx], factors[idx + 1])
    return _unspine(factors)


# ---------------------------------------------------------------------------
# Seeded random well-typed raw terms (for the confluence/termination suite)

def random_raw(tower, rng, budget=8):
    """A random well-typed raw term over a tower."""
    gens = tower.gens()
    pool_tables = sorted({g.target for g in gens} | {disk(m) for m in range(tower.trunc + 1)},
                         key=str)
    target = rng.choice(pool_tables)
    return _random_into(tower, rng, target, budget)


def _random_into(tower, rng, target, budget):
    gens = tower.gens()
    opts = ["base"]
    if budget > 0:
        opts += ["gen", "gen", "pool", "wrap"]
    kind = rng.choice(opts)
    if kind == "gen":
        cands = [g for g in gens if g.target == target]
        if cands:
            g = rng.choice(cands)
            inner = _random_into(tower, rng, disk(g.dim), budget - 1)
            return RComp(RGen(g), inner)
        kind = "base"
    if kind == "pool":
        cands = [g for g in gens if g.fsrc.target == target]
        if cands:
            g = rng.choice(cands)
            t = rng.choice([g.fsrc, g.gtgt])
            inner = _random_into(tower, rng, t.source, budget - 1)
            return RComp(term_to_raw(t), inner)
        kind = "base"
    if kind == "wrap":
        homs = [h for m in range(target.dimension + 1)
                for h in theta0.enumerate_homs(disk(m), target)]
        if homs:
            h = rng.choice(homs)
            inner = _random_into(tower, rng, h.source, budget - 1)
            return RComp(RBase(h), inner)
        kind = "base"
    # a random concrete map out of a random small source
    sources = [disk(m) for m in range(target.dimension + 1)] + [target]
    rng.shuffle(sources)
    for s in sources:
        homs = theta0.enumerate_homs(s, target)
        if homs:
            return RBase(rng.choice(homs))
    return RBase(theta0.identity_gmap(target))
