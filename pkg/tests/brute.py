"""Brute-force models of nominal notions over a five-atom universe.

An element of ``[[C, S]]`` is modelled as the frozenset of injections it
identifies, written as image tuples.  The symmetry group is modelled by its
restrictions to the universe: every injection into the universe plus two
fresh atoms (equality), or every monotone injection into a grid with a
midpoint in each gap (total order).  Supports, stabilisers, isomorphism and
the orbit order are then decided straight from their definitions.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from nomtree.symmetry import SymmetryKind

UNIVERSE = (0, 1, 2, 3, 4)


@lru_cache(maxsize=None)
def group(kind: SymmetryKind, universe: tuple = UNIVERSE) -> tuple:
    if kind is SymmetryKind.EQUALITY:
        target = universe + tuple(max(universe) + 1 + i for i in range(2))
        return tuple(dict(zip(universe, img)) for img in itertools.permutations(target, len(universe)))
    grid = sorted(set(universe) | {Fraction(2 * a - 1, 2) for a in universe} | {Fraction(2 * max(universe) + 1, 2)})
    return tuple(dict(zip(universe, img)) for img in itertools.combinations(grid, len(universe)))


def elem(spec, witness) -> tuple:
    """The element ``[i -> witness[i]]`` of ``spec`` as a set of injections."""
    d = spec.degree
    return (spec.name, frozenset(tuple(witness[s[i]] for i in range(d)) for s in spec.sym.members))


def from_element(x) -> tuple:
    return elem(x.orbit, x.witness)


def act(bx: tuple, g: dict) -> tuple:
    name, injs = bx
    return (name, frozenset(tuple(g[a] for a in t) for t in injs))


def act_value(bv, g):
    """Acts on a brute element or on a tuple of them."""
    if isinstance(bv[0], str):
        return act(bv, g)
    return tuple(act(b, g) for b in bv)


def all_elements(spec, kind: SymmetryKind, universe: tuple = UNIVERSE) -> list:
    out = set()
    for w in itertools.permutations(universe, spec.degree):
        if kind is SymmetryKind.TOTAL_ORDER and list(w) != sorted(w):
            continue
        out.add(elem(spec, w))
    return sorted(out, key=repr)


@lru_cache(maxsize=None)
def stab(bv, kind: SymmetryKind) -> frozenset:
    """Indices of the modelled group elements fixing ``bv``."""
    return frozenset(i for i, g in enumerate(group(kind)) if act_value(bv, g) == bv)


@lru_cache(maxsize=None)
def _fixers(C: frozenset, kind: SymmetryKind) -> frozenset:
    return frozenset(i for i, g in enumerate(group(kind)) if all(g[c] == c for c in C))


def supports(C, bv, kind: SymmetryKind) -> bool:
    return _fixers(frozenset(C), kind) <= stab(bv, kind)


def least_support(bv, kind: SymmetryKind) -> frozenset:
    """The smallest supporting subset of the universe, checked to lie inside every support."""
    found = [frozenset(C) for r in range(len(UNIVERSE) + 1)
             for C in itertools.combinations(UNIVERSE, r) if supports(C, bv, kind)]
    least = min(found, key=len)
    assert all(least <= C for C in found), (bv, found)
    return least


def isomorphic(X, Y, kind: SymmetryKind) -> bool:
    """An equivariant bijection sends the base point of X to an element with
    the same support and the same stabiliser."""
    x0 = elem(X, UNIVERSE[: X.degree])
    sx, lx = stab(x0, kind), least_support(x0, kind)
    return any(stab(y, kind) == sx and least_support(y, kind) == lx for y in all_elements(Y, kind))


def below(Y, X, kind: SymmetryKind) -> bool:
    """Some equivariant map X -> Y exists (necessarily onto, Y being one orbit)."""
    x0 = elem(X, UNIVERSE[: X.degree])
    sx = stab(x0, kind)
    return any(sx <= stab(y, kind) for y in all_elements(Y, kind))


def _atoms(bv) -> list:
    return sorted({a for b in bv for t in b[1] for a in t})


def _partial_maps(src: list, kind: SymmetryKind, universe: tuple = UNIVERSE):
    for img in itertools.permutations(universe, len(src)):
        if kind is SymmetryKind.TOTAL_ORDER and list(img) != sorted(img):
            continue
        yield dict(zip(src, img))


def product_orbit_count(X, Y, kind: SymmetryKind) -> int:
    """Number of orbits of ``X x Y`` met inside the universe.

    Two pairs share an orbit iff an admissible partial bijection of the
    universe carries one onto the other (such maps extend to the group).
    """
    seen, count = set(), 0
    for x in all_elements(X, kind):
        for y in all_elements(Y, kind):
            p = (x, y)
            if p in seen:
                continue
            count += 1
            for g in _partial_maps(_atoms(p), kind):
                seen.add(act_value(p, g))
    return count


def subgroups(d: int) -> list[frozenset]:
    """Every subgroup of Sym(d), as sets of image tuples (d <= 3)."""
    perms = list(itertools.permutations(range(d)))
    ident = tuple(range(d))
    out = set()
    for r in range(len(perms) + 1):
        for sub in itertools.combinations(perms, r):
            s = set(sub) | {ident}
            if all(tuple(q[p[i]] for i in range(d)) in s for p in s for q in s):
                out.add(frozenset(s))
    return sorted(out, key=lambda s: (len(s), sorted(s)))
