"""Concrete maps between realized sums of disks.

Objects are tables of dimensions; a morphism is a dimension-wise cell map
between the realized carriers that commutes with source and target.  This
gives composition, cocone pairing, and the embedding of globe-category
words, all with decidable equality.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .globe import (
    GlobeError, Table, disk, disk_cell_word, disk_gset, realize_sum, sword, tword,
)


class MatchingError(GlobeError):
    """A family of disk maps fails the gluing condition of a table."""

    def __init__(self, k, dim, msg=None):
        self.k = k
        self.dim = dim
        super().__init__(msg or "matching condition fails at gluing %d, dimension %d" % (k, dim))


@dataclass(frozen=True)
class GMap:
    """A map of realized sums, given cell-wise per dimension."""

    source: Table
    target: Table
    maps: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        sreal = realize_sum(self.source)
        treal = realize_sum(self.target)
        sc, tc = sreal.carrier, treal.carrier
        assert len(self.maps) == sc.dim + 1
        for d in range(sc.dim + 1):
            assert len(self.maps[d]) == sc.count(d)
            for c in range(sc.count(d)):
                assert 0 <= self.maps[d][c] < tc.count(d)
        for d in range(1, sc.dim + 1):
            for c in range(sc.count(d)):
                if tc.source(d, self.maps[d][c]) != self.maps[d - 1][sc.source(d, c)]:
                    raise GlobeError("map does not commute with src at dim %d" % d)
                if tc.target(d, self.maps[d][c]) != self.maps[d - 1][sc.target(d, c)]:
                    raise GlobeError("map does not commute with tgt at dim %d" % d)

    @property
    def is_identity(self):
        return self.source == self.target and \
            all(row == tuple(range(len(row))) for row in self.maps)


@lru_cache(maxsize=None)
def identity_gmap(table):
    real = realize_sum(table)
    maps = tuple(tuple(range(real.carrier.count(d)))
                 for d in range(real.carrier.dim + 1))
    return GMap(table, table, maps)


def compose(g, f):
    """g after f, cell-wise."""
    if f.target != g.source:
        raise GlobeError("object mismatch: cannot compose %s after %s"
                         % (g.source, f.target))
    maps = tuple(
        tuple(g.maps[d][c] for c in f.maps[d])
        for d in range(len(f.maps))
    )
    return GMap(f.source, g.target, maps)


@lru_cache(maxsize=None)
def leg_gmap(table, k):
    """The k-th cocone leg D_{i_k} -> sum (0-indexed)."""
    real = realize_sum(table)
    m = table.upper[k]
    return GMap(disk(m), table, real.legs[k])


@lru_cache(maxsize=None)
def cell_gmap(table, m, cell):
    """The map D_m -> sum picking a given m-cell of the carrier (Yoneda)."""
    real = realize_sum(table)
    g = disk_gset(m)
    maps = []
    for d in range(m + 1):
        row = []
        for c in range(g.count(d)):
            w = disk_cell_word(m, d, c)
            row.append(real.carrier.boundary(w, cell))
        maps.append(tuple(row))
    return GMap(disk(m), table, tuple(maps))


def globe_functor(word):
    """The map of representables induced by a globe-category word."""
    return cell_gmap(disk(word.tgt), word.src,
                     realize_sum(disk(word.tgt)).carrier.boundary(word, 0))


def decompose(gmap):
    """Write a disk-sourced map as (leg k, word) via the canonical presentation."""
    assert gmap.source.is_disk
    m = gmap.source.upper[0]
    real = realize_sum(gmap.target)
    k, w = real.presentation(m, gmap.maps[m][0])
    return k, w


def pair(components, source_table):
    """The unique map out of a sum restricting to the given legs.

    components[k] must be a map out of the k-th disk of `source_table`; the
    gluing conditions are checked and violations report the failing gluing
    index and dimension.
    """
    width = source_table.width
    if len(components) != width:
        raise GlobeError("expected %d components, got %d" % (width, len(components)))
    target = components[0].target
    for k, comp in enumerate(components):
        if comp.source != disk(source_table.upper[k]):
            raise GlobeError("component %d has source %s, expected D%d"
                             % (k, comp.source, source_table.upper[k]))
        if comp.target != target:
            raise GlobeError("component %d has a different target" % k)
    for k, j in enumerate(source_table.lower):
        left = compose(components[k], globe_functor(sword(j, source_table.upper[k])))
        right = compose(components[k + 1], globe_functor(tword(j, source_table.upper[k + 1])))
        if left != right:
            dim = next(d for d in range(j + 1)
                       if left.maps[d] != right.maps[d])
            raise MatchingError(k, dim)
    real = realize_sum(source_table)
    maps = []
    for d in range(real.carrier.dim + 1):
        row = []
        for (k, w) in real.presentations(d):
            row.append(components[k].maps[d][_disk_cell_index(source_table.upper[k], d, w)])
        maps.append(tuple(row))
    return GMap(source_table, target, tuple(maps))


def _disk_cell_index(m, d, word):
    """Index of the disk cell presented by a word D_d -> D_m."""
    if d == m:
        return 0
    return 0 if word.kind == "s" else 1


def legs_pair_gmap(target_table, ks, source_table):
    """Pairing of several cocone legs of `target_table` over `source_table`."""
    return pair(tuple(leg_gmap(target_table, k) for k in ks), source_table)


@lru_cache(maxsize=None)
def enumerate_homs(source_table, target_table):
    """All maps source -> target, as matching tuples of disk maps."""
    real = realize_sum(target_table)
    out = []
    choices = [range(real.carrier.count(m)) for m in source_table.upper]
    for combo in itertools.product(*choices):
        ok = True
        for k, j in enumerate(source_table.lower):
            left = real.carrier.boundary(sword(j, source_table.upper[k]), combo[k])
            right = real.carrier.boundary(tword(j, source_table.upper[k + 1]), combo[k + 1])
            if left != right:
                ok = False
                break
        if ok:
            comps = tuple(cell_gmap(target_table, source_table.upper[k], combo[k])
                          for k in range(source_table.width))
            out.append(pair(comps, source_table))
    return tuple(out)
