"""Random valid automata, for property tests and benchmark drivers."""

from __future__ import annotations

import random

from nomtree.automaton import DBNTA, Rule, validate
from nomtree.nominal import (
    ATOM_ORBIT,
    LocalSymmetry,
    OrbitFiniteSet,
    OrbitSpec,
    enumerate_elements,
    product_reps,
    stabilizer,
    support,
)
from nomtree.symmetry import SymmetryKind


def random_states(rng: random.Random, kind: SymmetryKind, max_orbits: int = 3, max_degree: int = 2) -> OrbitFiniteSet:
    n = rng.randint(1, max_orbits)
    orbits = []
    for i in range(n):
        d = rng.randint(0, max_degree)
        sym = LocalSymmetry.trivial(d)
        if kind is SymmetryKind.EQUALITY and d == 2 and rng.random() < 0.3:
            sym = LocalSymmetry.full(2)
        orbits.append(OrbitSpec(f"s{i}", d, sym))
    return OrbitFiniteSet(tuple(orbits))


def random_automaton(rng: random.Random, kind: SymmetryKind, max_arity: int = 2,
                     max_orbits: int = 3, max_degree: int = 2, p_accept: float = 0.4) -> DBNTA:
    """A random DBNTA over the atom alphabet, built one transition per input orbit.

    Each output is drawn from the state elements supported by the input and
    fixed by its stabiliser, so the table is equivariant by construction.
    """
    alphabet = OrbitFiniteSet((ATOM_ORBIT,))
    while True:
        Q = random_states(rng, kind, max_orbits, max_degree)
        choices = _output_choices(alphabet, Q, max_arity, kind)
        if all(outs for _, outs in choices):
            break
    acc = frozenset(o.name for o in Q if rng.random() < p_accept)
    A = DBNTA(kind, alphabet, max_arity, Q, acc, [])
    A.rules = [Rule(len(x) - 1, x[0], tuple(x[1:]), rng.choice(outs)) for x, outs in choices]
    defects = validate(A)
    assert not defects, defects
    return A


def _output_choices(alphabet, Q, m, kind) -> list:
    out = []
    for k in range(m + 1):
        for combo in product_reps([alphabet.reps()] + [Q.reps()] * k, kind):
            x = combo.values
            stab = stabilizer(x, kind)
            outs = [q for q in enumerate_elements(Q, support(x), kind)
                    if all(q.act(s) == q for s in stab)]
            out.append((x, outs))
    return out
