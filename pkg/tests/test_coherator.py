"""The term kernel: normalization, admissibility, the structural library."""

import random

import pytest

from globkit import coherator as C
from globkit import theta0
from globkit.coherator import (
    InadmissibleError, TermError, Tower, admissible, compose, eps, gen_term,
    glob_source, glob_target, identity, legs_base, normalize, parallel,
    reduce_steps, stdlib, term_to_raw, tuple_term, verify_bundle, wordt,
)
from globkit.globe import Table, disk
from globkit.theta0 import MatchingError


def test_normalize_projection_law(std3):
    tower, _ = std3
    # a concrete map through the second leg collapses against a tuple
    t2 = C.glue2(1, 0)
    ka = tower.term("unit0")          # D1 -> D0
    tup = tuple_term([ka, ka], t2)
    picked = compose(tup, theta0_cell(t2, 1, "s"))
    assert picked == compose(ka, wordt("s", 0, 1))
    assert picked == identity(disk(0))


def theta0_cell(table, leg, kind):
    """The concrete map picking an endpoint of a leg, as a term."""
    w = wordt(kind, 0, table.upper[leg])
    return compose(eps(table, leg), w)


def test_boundary_equations_are_rewrites(std3):
    tower, _ = std3
    for gen in tower.gens():
        h = tower.term(gen.name)
        assert glob_source(h) == gen.fsrc, gen.name
        assert glob_target(h) == gen.gtgt, gen.name


def test_normalize_idempotent_and_raw_round_trip(std3):
    tower, _ = std3
    rng = random.Random(7)
    for _ in range(200):
        raw = C.random_raw(tower, rng, budget=6)
        nf = normalize(raw)
        assert normalize(nf) == nf
        assert normalize(term_to_raw(nf)) == nf


def test_two_strategy_confluence_and_termination(std3):
    tower, _ = std3
    rng = random.Random(42)
    for _ in range(300):
        raw = C.random_raw(tower, rng, budget=6)
        nf0 = normalize(raw)
        nf1, s1 = reduce_steps(raw, "inner")
        nf2, s2 = reduce_steps(raw, "outer")
        assert nf0 == nf1 == nf2
        bound = 10 * C.raw_size(raw)
        assert s1 <= bound and s2 <= bound


def test_adversarial_composites_normalize(std4):
    tower, _ = std4
    # the pentagon against a full word chain down to the point
    pent = tower.term("pent2")
    t = compose(pent, wordt("s", 3, 4))
    for d in (2, 1, 0):
        t = compose(t, wordt("t" if d % 2 else "s", d, d + 1))
        raw = term_to_raw(t)
        nf1, s1 = reduce_steps(raw, "inner")
        nf2, s2 = reduce_steps(raw, "outer")
        assert nf1 == nf2 == t
        assert max(s1, s2) <= 10 * C.raw_size(raw)
    # a deep alternating inverse/word chain, reduced from both ends
    om1, om2, om3 = (tower.term(n) for n in ("inv1_0", "inv2_0", "inv3_0"))
    chain = compose(om3, compose(wordt("s", 2, 3),
                                 compose(om2, compose(wordt("s", 1, 2), om1))))
    assert chain.source == disk(1) and chain.target == disk(3)
    # its bottom boundary peels through all three inverse generators: each
    # flip swaps the word kind once, for an odd number of flips overall
    assert compose(chain, wordt("s", 0, 1)) == wordt("t", 0, 3)
    assert compose(chain, wordt("t", 0, 1)) == wordt("s", 0, 3)
    raw = term_to_raw(chain)
    nf1, _ = reduce_steps(raw, "inner")
    nf2, _ = reduce_steps(raw, "outer")
    assert nf1 == nf2 == chain


def test_glob_source_examples(std3):
    tower, _ = std3
    t2 = C.glue2(1, 0)
    nab = tower.term("comp1_0")
    assert glob_source(nab) == compose(eps(t2, 1), wordt("s", 0, 1))
    assert glob_target(nab) == compose(eps(t2, 0), wordt("t", 0, 1))
    ka = tower.term("unit0")
    assert glob_source(ka) == identity(disk(0)) == glob_target(ka)
    om = tower.term("inv1_0")
    assert glob_source(om) == wordt("t", 0, 1)
    assert glob_target(om) == wordt("s", 0, 1)


def test_unit_collapse_composites(std3):
    tower, _ = std3
    ka = tower.term("unit0")
    # unit . s1 and unit . t1 are the identity of the point
    assert compose(ka, wordt("s", 0, 1)) == identity(disk(0))
    assert compose(ka, wordt("t", 0, 1)) == identity(disk(0))
    # the inverse against its top cotarget gives the source word
    om = tower.term("inv1_0")
    assert compose(om, wordt("t", 0, 1)) == wordt("s", 0, 1)


def test_parallel_examples(std3):
    tower, _ = std3
    t2 = C.glue2(1, 0)
    f = compose(eps(t2, 1), wordt("s", 0, 1))
    g = compose(eps(t2, 0), wordt("t", 0, 1))
    assert parallel(f, g)
    s1 = wordt("s", 0, 1)
    assert parallel(s1, s1)
    assert parallel(s1, wordt("t", 0, 1))  # 0-dimensional sources always parallel


def test_admissible_examples(std3):
    tower, _ = std3
    for i in (1, 2, 3):
        t2 = C.glue2(i, i - 1)
        f = compose(eps(t2, 1), wordt("s", i - 1, i))
        g = compose(eps(t2, 0), wordt("t", i - 1, i))
        assert admissible(f, g)
    # the exchange pair at i = 2
    f, g = C.exchange_pair(tower, 2)
    assert admissible(f, g)
    # dimension clause violation
    v = admissible(compose(wordt("s", 1, 2), wordt("s", 0, 1)),
                   compose(wordt("t", 1, 2), wordt("t", 0, 1)))
    assert not v and "exceeds n+1" in v.reason


def test_declare_levels(std3):
    tower, _ = std3
    assert tower["comp1_0"].level == 1
    assert tower["comp2_0"].level == 2
    assert tower["pent1"].level == 3
    assert tower["exch2"].level == 3
    assert tower["tri1"].level == 3
    assert tower["comp3_0"].level == 3
    assert tower["assoc2"].level == 2


def test_declare_rejects_duplicates_and_inadmissible():
    tower = Tower(3)
    f = wordt("t", 0, 1)
    g = wordt("s", 0, 1)
    tower.declare("w", f, g)
    with pytest.raises(TermError):
        tower.declare("w", f, g)
    with pytest.raises(InadmissibleError):
        tower.declare("bad", compose(wordt("s", 1, 2), wordt("s", 0, 1)),
                      compose(wordt("t", 1, 2), wordt("t", 0, 1)))


def test_truncation_bound():
    tower = Tower(2)
    with pytest.raises(TermError):
        # a level-1 lifting at dimension 3 exceeds the truncation
        t2 = C.glue2(3, 2)
        tower.declare("too_high",
                      compose(eps(t2, 1), wordt("s", 2, 3)),
                      compose(eps(t2, 0), wordt("t", 2, 3)))


# --- the displayed derivations of the structural library -------------------

def test_codim1_composition_derivation_chain():
    # e2.s.s = e2.t.s = e1.s.s = e1.t.s (and the target-side chain)
    for i in (2, 3):
        t2 = C.glue2(i, i - 1)
        chains = [
            compose(compose(eps(t2, 1), wordt("s", i - 1, i)), wordt("s", i - 2, i - 1)),
            compose(compose(eps(t2, 1), wordt("t", i - 1, i)), wordt("s", i - 2, i - 1)),
            compose(compose(eps(t2, 0), wordt("s", i - 1, i)), wordt("s", i - 2, i - 1)),
            compose(compose(eps(t2, 0), wordt("t", i - 1, i)), wordt("s", i - 2, i - 1)),
        ]
        assert len(set(chains)) == 1
        chains_t = [
            compose(compose(eps(t2, 1), wordt("s", i - 1, i)), wordt("t", i - 2, i - 1)),
            compose(compose(eps(t2, 0), wordt("t", i - 1, i)), wordt("t", i - 2, i - 1)),
        ]
        assert len(set(chains_t)) == 1


def test_codim2_composition_derivation(std4):
    tower, _ = std4
    for i in (2, 3):
        nab2 = tower.term(C.comp_name(i, i - 2))
        t2 = C.glue2(i, i - 2)
        # boundary of the codim-2 composition ends at the glued boundary word
        lhs = compose(glob_source(nab2), wordt("s", i - 2, i - 1))
        rhs = compose(compose(eps(t2, 1), wordt("s", i - 1, i)), wordt("s", i - 2, i - 1))
        assert lhs == rhs


def test_codim2_inverse_derivation(std4):
    tower, _ = std4
    for i in (2, 3):
        om2 = tower.term(C.inv_name(i, i - 2))
        om1 = tower.term(C.inv_name(i - 1, i - 2))
        assert glob_source(om2) == compose(wordt("s", i - 1, i), om1)
        assert glob_target(om2) == compose(wordt("t", i - 1, i), om1)
        # the parallelism chain: s.w.s = s.t = t.t = t.w.s
        lhs = compose(glob_source(om2), wordt("s", i - 2, i - 1))
        rhs = compose(glob_target(om2), wordt("s", i - 2, i - 1))
        assert lhs == rhs


def test_associativity_boundaries(std4):
    tower, _ = std4
    for i in (1, 2, 3):
        al = tower.term("assoc%d" % i)
        t2 = C.glue2(i, i - 1)
        t3 = Table((i, i, i), (i - 1, i - 1))
        nab = tower.term(C.comp_name(i, i - 1))
        want_s = compose(tuple_term([compose(legs_base(t3, (0, 1), t2), nab),
                                     eps(t3, 2)], t2), nab)
        want_t = compose(tuple_term([eps(t3, 0),
                                     compose(legs_base(t3, (1, 2), t2), nab)], t2), nab)
        assert glob_source(al) == want_s
        assert glob_target(al) == want_t


def test_unit_constraint_boundaries(std4):
    tower, _ = std4
    for i in (1, 2, 3):
        t2 = C.glue2(i, i - 1)
        nab = tower.term(C.comp_name(i, i - 1))
        ka = tower.term(C.unit_name(i - 1))
        rho = tower.term("runit%d" % i)
        lam = tower.term("lunit%d" % i)
        assert glob_source(rho) == compose(
            tuple_term([identity(disk(i)), compose(wordt("s", i - 1, i), ka)], t2), nab)
        assert glob_target(rho) == identity(disk(i))
        assert glob_source(lam) == compose(
            tuple_term([compose(wordt("t", i - 1, i), ka), identity(disk(i))], t2), nab)
        assert glob_target(lam) == identity(disk(i))


def test_inverse_constraint_boundaries(std4):
    tower, _ = std4
    for i in (1, 2, 3):
        t2 = C.glue2(i, i - 1)
        nab = tower.term(C.comp_name(i, i - 1))
        ka = tower.term(C.unit_name(i - 1))
        om = tower.term(C.inv_name(i, i - 1))
        rinv = tower.term("rinv%d" % i)
        linv = tower.term("linv%d" % i)
        assert glob_source(rinv) == compose(
            tuple_term([identity(disk(i)), om], t2), nab)
        assert glob_target(rinv) == compose(wordt("t", i - 1, i), ka)
        assert glob_source(linv) == compose(
            tuple_term([om, identity(disk(i))], t2), nab)
        assert glob_target(linv) == compose(wordt("s", i - 1, i), ka)


def test_pentagon_derivation(std4):
    tower, _ = std4
    for i in (1, 2):
        pent = tower.term("pent%d" % i)
        c3, c2 = C.pentagon_pair(tower, i)
        assert glob_source(pent) == c3
        assert glob_target(pent) == c2
        # the displayed calculation: c3.s = (nab + D + D)(nab + D)nab
        q4 = Table((i,) * 4, (i - 1,) * 3)
        t3 = Table((i, i, i), (i - 1, i - 1))
        t2 = C.glue2(i, i - 1)
        nab = tower.term(C.comp_name(i, i - 1))
        ndd = tuple_term([compose(legs_base(q4, (0, 1), t2), nab),
                          eps(q4, 2), eps(q4, 3)], t3)
        nd = tuple_term([compose(legs_base(t3, (0, 1), t2), nab), eps(t3, 2)], t2)
        assert compose(c3, wordt("s", i, i + 1)) == compose(ndd, compose(nd, nab))
        # c2.s equals the same composite, and the targets agree
        assert compose(c2, wordt("s", i, i + 1)) == compose(ndd, compose(nd, nab))
        dd_n = tuple_term([eps(q4, 0), eps(q4, 1),
                           compose(legs_base(q4, (2, 3), t2), nab)], t3)
        d_n = tuple_term([eps(t3, 0), compose(legs_base(t3, (1, 2), t2), nab)], t2)
        assert compose(c3, wordt("t", i, i + 1)) == compose(dd_n, compose(d_n, nab))
        assert compose(c2, wordt("t", i, i + 1)) == compose(dd_n, compose(d_n, nab))


def test_exchange_derivation(std4):
    tower, _ = std4
    for i in (2, 3):
        ex = tower.term("exch%d" % i)
        f, g = C.exchange_pair(tower, i)
        assert glob_source(ex) == f
        assert glob_target(ex) == g
        # the displayed boundary chain: f.s = (e2.s, e4.s) nab_{i-1}
        e4 = Table((i, i, i, i), (i - 1, i - 2, i - 1))
        t2lo = C.glue2(i - 1, i - 2)
        nab_lo = tower.term(C.comp_name(i - 1, i - 2))
        want = compose(tuple_term(
            [compose(eps(e4, 1), wordt("s", i - 1, i)),
             compose(eps(e4, 3), wordt("s", i - 1, i))], t2lo), nab_lo)
        assert compose(f, wordt("s", i - 1, i)) == want
        assert compose(g, wordt("s", i - 1, i)) == want
        want_t = compose(tuple_term(
            [compose(eps(e4, 0), wordt("t", i - 1, i)),
             compose(eps(e4, 2), wordt("t", i - 1, i))], t2lo), nab_lo)
        assert compose(f, wordt("t", i - 1, i)) == want_t
        assert compose(g, wordt("t", i - 1, i)) == want_t


def test_triangle_derivation(std4):
    tower, _ = std4
    for i in (1, 2):
        tri = tower.term("tri%d" % i)
        d2, d1 = C.triangle_pair(tower, i)
        assert glob_source(tri) == d2
        assert glob_target(tri) == d1
        t2 = C.glue2(i, i - 1)
        nab = tower.term(C.comp_name(i, i - 1))
        ka_lo = tower.term(C.unit_name(i - 1))
        # d2.s = d1.s = (e1 (id, s.unit) nab, e2) nab
        inner = compose(tuple_term(
            [identity(disk(i)), compose(wordt("s", i - 1, i), ka_lo)], t2), nab)
        want = compose(tuple_term([compose(eps(t2, 0), inner), eps(t2, 1)], t2), nab)
        assert compose(d2, wordt("s", i, i + 1)) == want
        assert compose(d1, wordt("s", i, i + 1)) == want
        # d2.t = d1.t = nab
        assert compose(d2, wordt("t", i, i + 1)) == nab
        assert compose(d1, wordt("t", i, i + 1)) == nab


def test_bundle_case_formulas(std4):
    tower, bundle = std4
    assert verify_bundle(tower, bundle)


def test_stdlib_families_present(std3):
    tower, _ = std3
    names = set(tower.names())
    expected = {"comp1_0", "comp2_1", "comp3_2", "comp2_0", "comp3_1", "comp3_0",
                "unit0", "unit1", "unit2",
                "inv1_0", "inv2_1", "inv3_2", "inv2_0", "inv3_1", "inv3_0",
                "assoc1", "assoc2", "runit1", "runit2", "lunit1", "lunit2",
                "rinv1", "rinv2", "linv1", "linv2", "pent1", "exch2", "tri1"}
    assert names == expected


# --- tower functors ---------------------------------------------------------

def test_tower_functor_identity(std3):
    tower, _ = std3
    fn = C.tower_functor(tower, {}, tower)
    for gen in tower.gens():
        assert fn.translate(gen.fsrc) == gen.fsrc


def level1_tower(trunc=3):
    """Codimension-1 compositions, units, and inverses only."""
    tower = Tower(trunc)
    for i in range(1, trunc + 1):
        t2 = C.glue2(i, i - 1)
        tower.declare(C.comp_name(i, i - 1),
                      compose(eps(t2, 1), wordt("s", i - 1, i)),
                      compose(eps(t2, 0), wordt("t", i - 1, i)))
    for i in range(0, trunc):
        tower.declare(C.unit_name(i), identity(disk(i)), identity(disk(i)))
    for i in range(1, trunc + 1):
        tower.declare(C.inv_name(i, i - 1), wordt("t", i - 1, i), wordt("s", i - 1, i))
    return tower


def test_tower_functor_to_primed_choice(std3):
    # swapping a composition for a second declared lifting of the same pair
    # is a valid functor out of the tower of primary operations
    small = level1_tower(3)
    primed = stdlib(3)[0]
    t2 = C.glue2(1, 0)
    primed.declare("comp1_0p",
                   compose(eps(t2, 1), wordt("s", 0, 1)),
                   compose(eps(t2, 0), wordt("t", 0, 1)))
    fn = C.tower_functor(small, {"comp1_0": primed.term("comp1_0p")}, primed)
    assert fn.translate(small.term("comp1_0")) == primed.term("comp1_0p")
    # but the same swap does not extend identically over generators whose
    # boundary pairs mention the swapped one
    with pytest.raises(TermError):
        C.tower_functor(std3[0], {"comp1_0": primed.term("comp1_0p")}, primed)


def test_tower_functor_rejects_non_lifting(std3):
    tower, _ = std3
    target = stdlib(3)[0]
    with pytest.raises(TermError) as exc:
        C.tower_functor(tower, {"unit0": target.term("inv1_0")}, target)
    assert "unit0" in str(exc.value)
