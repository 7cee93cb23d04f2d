"""Random atoms, group elements, trees and contexts for the test batteries."""

from __future__ import annotations

import random
from fractions import Fraction

from nomtree.nominal import ATOM_ORBIT
from nomtree.symmetry import SymmetryKind
from nomtree.trees import HOLE, Tree


def atom_pool(kind: SymmetryKind, n: int) -> list:
    if kind is SymmetryKind.EQUALITY:
        return list(range(n))
    return [Fraction(i, 2) for i in range(n)]


def random_group_element(rng: random.Random, atoms, kind: SymmetryKind) -> dict:
    """A random admissible injection on ``atoms`` (the restriction of some group element)."""
    atoms = sorted(set(atoms))
    if kind is SymmetryKind.EQUALITY:
        pool = list(range(len(atoms) + 4))
        return dict(zip(atoms, rng.sample(pool, len(atoms))))
    imgs = sorted(rng.sample(range(-20, 40), len(atoms)))
    return {a: Fraction(v, 3) for a, v in zip(atoms, imgs)}


def random_tree(rng: random.Random, atoms, m: int, depth: int) -> Tree:
    a = ATOM_ORBIT.element((rng.choice(atoms),))
    if depth == 0 or rng.random() < 0.3:
        return Tree(a, ())
    k = rng.randint(0, m)
    return Tree(a, tuple(random_tree(rng, atoms, m, depth - 1) for _ in range(k)))


def random_context(rng: random.Random, atoms, m: int, depth: int):
    """A one-hole context; the hole sits somewhere along a random path."""
    if depth == 0 or rng.random() < 0.25:
        return HOLE
    a = ATOM_ORBIT.element((rng.choice(atoms),))
    k = rng.randint(1, m)
    hole_at = rng.randrange(k)
    kids = [random_context(rng, atoms, m, depth - 1) if i == hole_at else random_tree(rng, atoms, m, depth - 1)
            for i in range(k)]
    return Tree(a, tuple(kids))
