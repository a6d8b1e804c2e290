"""Finite groups as multiplication tables, plus isomorphism search.

Elements are dense integers, the identity is always element 0.  This is
enough group theory for building strict models and naming the homotopy
groups that come out of the quotient constructions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass


@dataclass(frozen=True)
class Group:
    name: str
    mult: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        n = len(self.mult)
        assert n >= 1
        assert all(len(row) == n for row in self.mult)
        assert all(self.mult[0][a] == a and self.mult[a][0] == a for a in range(n))
        for a, b, c in itertools.product(range(n), repeat=3):
            assert self.mult[self.mult[a][b]][c] == self.mult[a][self.mult[b][c]]
        for a in range(n):
            assert any(self.mult[a][b] == 0 for b in range(n))

    @property
    def order(self):
        return len(self.mult)

    def op(self, a, b):
        return self.mult[a][b]

    def inv(self, a):
        return next(b for b in range(self.order) if self.mult[a][b] == 0)

    def is_abelian(self):
        n = self.order
        return all(self.mult[a][b] == self.mult[b][a] for a in range(n) for b in range(n))

    def element_order(self, a):
        k, x = 1, a
        while x != 0:
            x = self.mult[x][a]
            k += 1
        return k


def cyclic(n):
    mult = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
    return Group("Z%d" % n, mult)


def product(g, h, name=None):
    pairs = [(a, b) for a in range(g.order) for b in range(h.order)]
    index = {p: i for i, p in enumerate(pairs)}
    mult = tuple(
        tuple(index[(g.op(a1, a2), h.op(b1, b2))] for (a2, b2) in pairs)
        for (a1, b1) in pairs
    )
    return Group(name or "%sx%s" % (g.name, h.name), mult)


def symmetric(n):
    assert 2 <= n <= 4
    perms = sorted(itertools.permutations(range(n)))
    ident = tuple(range(n))
    perms.remove(ident)
    perms.insert(0, ident)
    index = {p: i for i, p in enumerate(perms)}

    def compose(p, q):  # (p∘q)(x) = p(q(x))
        return tuple(p[q[x]] for x in range(n))

    mult = tuple(tuple(index[compose(p, q)] for q in perms) for p in perms)
    return Group("S%d" % n, mult)


def dihedral(n):
    """Symmetries of the regular n-gon: 2n elements (rot k, flip f)."""
    elems = [(k, f) for f in (0, 1) for k in range(n)]
    elems.remove((0, 0))
    elems.insert(0, (0, 0))
    index = {e: i for i, e in enumerate(elems)}

    def op(x, y):
        (k1, f1), (k2, f2) = x, y
        k = (k1 + k2) % n if f1 == 0 else (k1 - k2) % n
        return (k, f1 ^ f2)

    mult = tuple(tuple(index[op(x, y)] for y in elems) for x in elems)
    return Group("D%d" % n, mult)


def quaternion8():
    # elements: 1, -1, i, -i, j, -j, k, -k  encoded as (axis, sign)
    names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]

    def op(a, b):
        table = {
            ("1", x): x for x in "1ijk"
        }
        # quaternion unit products with signs
        prod = {
            ("i", "i"): ("1", -1), ("j", "j"): ("1", -1), ("k", "k"): ("1", -1),
            ("i", "j"): ("k", 1), ("j", "i"): ("k", -1),
            ("j", "k"): ("i", 1), ("k", "j"): ("i", -1),
            ("k", "i"): ("j", 1), ("i", "k"): ("j", -1),
            ("1", "1"): ("1", 1), ("1", "i"): ("i", 1), ("1", "j"): ("j", 1),
            ("1", "k"): ("k", 1), ("i", "1"): ("i", 1), ("j", "1"): ("j", 1),
            ("k", "1"): ("k", 1),
        }
        sa = -1 if a.startswith("-") else 1
        sb = -1 if b.startswith("-") else 1
        ua, ub = a.lstrip("-"), b.lstrip("-")
        u, s = prod[(ua, ub)]
        s *= sa * sb
        return ("" if s == 1 else "-") + u

    index = {x: i for i, x in enumerate(names)}
    mult = tuple(tuple(index[op(a, b)] for b in names) for a in names)
    return Group("Q8", mult)


def klein4():
    return product(cyclic(2), cyclic(2), "V4")


_NAMED = {}


def by_name(name):
    """Look up a group by a short name like Z3, S3, V4, D4, Q8, Z2xZ4."""
    if not _NAMED:
        for n in range(1, 13):
            g = cyclic(n)
            _NAMED[g.name] = g
        _NAMED["V4"] = klein4()
        _NAMED["Z2xZ2"] = _NAMED["V4"]
        _NAMED["Z2xZ4"] = product(cyclic(2), cyclic(4))
        _NAMED["Z2xZ2xZ2"] = product(cyclic(2), klein4(), "Z2xZ2xZ2")
        for n in (2, 3, 4):
            g = symmetric(n)
            _NAMED[g.name] = g
        _NAMED["D4"] = dihedral(4)
        _NAMED["Q8"] = quaternion8()
    if name not in _NAMED:
        raise KeyError("unknown group name %r" % name)
    return _NAMED[name]


def find_isomorphism(a, b):
    """Backtracking search for a group isomorphism a -> b, or None."""
    if a.order != b.order:
        return None
    n = a.order
    orders_a = [a.element_order(x) for x in range(n)]
    orders_b = [b.element_order(x) for x in range(n)]
    if sorted(orders_a) != sorted(orders_b):
        return None
    phi = [None] * n
    phi[0] = 0
    used = {0}

    def extend(x):
        if x == n:
            return True
        if phi[x] is not None:
            return extend(x + 1)
        for y in range(n):
            if y in used or orders_b[y] != orders_a[x]:
                continue
            # tentatively map x -> y and close under known products
            trail = []
            ok = True
            phi[x] = y
            used.add(y)
            trail.append(x)
            pending = [x]
            while pending and ok:
                u = pending.pop()
                for v in range(n):
                    if phi[v] is None:
                        continue
                    for (p, q) in ((u, v), (v, u)):
                        w = a.mult[p][q]
                        img = b.mult[phi[p]][phi[q]]
                        if phi[w] is None:
                            if img in used:
                                ok = False
                                break
                            phi[w] = img
                            used.add(img)
                            trail.append(w)
                            pending.append(w)
                        elif phi[w] != img:
                            ok = False
                            break
                    if not ok:
                        break
            if ok and extend(x + 1):
                return True
            for t in trail:
                used.discard(phi[t])
                phi[t] = None
        return False

    if extend(0):
        return tuple(phi)
    return None


_CATALOGUE = [
    "Z1", "Z2", "Z3", "Z4", "V4", "Z5", "Z6", "S3", "Z7", "Z8", "Z2xZ4",
    "Z2xZ2xZ2", "D4", "Q8", "Z9", "Z10", "Z11", "Z12", "S4",
]


def recognize(group):
    """Catalogue name for a group, or a generic descriptor."""
    for name in _CATALOGUE:
        cand = by_name(name)
        if cand.order == group.order and find_isomorphism(group, cand) is not None:
            return cand.name
    return "group of order %d" % group.order


@dataclass(frozen=True)
class CrossedModule:
    """A boundary map d : A -> G with a G-action on A.

    Satisfies equivariance d(g.a) = g d(a) g^-1 and the Peiffer rule
    d(a).b = a b a^-1; both are checked on construction.
    """

    grp: Group       # G, the base group
    agrp: Group      # A, the fiber group
    boundary: tuple[int, ...]          # d : A -> G
    action: tuple[tuple[int, ...], ...]  # action[g][a] = g.a

    def __post_init__(self):
        G, A, d, act = self.grp, self.agrp, self.boundary, self.action
        assert len(d) == A.order and len(self.action) == G.order
        assert d[0] == 0
        for a, b in itertools.product(range(A.order), repeat=2):
            assert d[A.op(a, b)] == G.op(d[a], d[b])
        for g in range(G.order):
            assert act[g][0] == 0
            for a, b in itertools.product(range(A.order), repeat=2):
                assert act[g][A.op(a, b)] == A.op(act[g][a], act[g][b])
        for g, h in itertools.product(range(G.order), repeat=2):
            for a in range(A.order):
                assert act[G.op(g, h)][a] == act[g][act[h][a]]
        for g in range(G.order):
            for a in range(A.order):
                assert d[act[g][a]] == G.op(G.op(g, d[a]), G.inv(g))
        for a, b in itertools.product(range(A.order), repeat=2):
            assert act[d[a]][b] == A.op(A.op(a, b), A.inv(a))

    def act(self, g, a):
        return self.action[g][a]


def trivial_xmod(grp, agrp):
    """Crossed module with zero boundary and trivial action; needs A central-ish data only."""
    assert agrp.is_abelian()
    boundary = tuple(0 for _ in range(agrp.order))
    action = tuple(tuple(range(agrp.order)) for _ in range(grp.order))
    return CrossedModule(grp, agrp, boundary, action)


def inclusion_xmod(grp):
    """The identity boundary G -> G acting by conjugation."""
    boundary = tuple(range(grp.order))
    action = tuple(
        tuple(grp.op(grp.op(g, a), grp.inv(g)) for a in range(grp.order))
        for g in range(grp.order)
    )
    return CrossedModule(grp, grp, boundary, action)
