"""Orbit-finite nominal sets, nominal tree automata, and an active learner for them."""

from nomtree.symmetry import SymmetryKind, FinInjection
from nomtree.nominal import LocalSymmetry, OrbitSpec, Element, OrbitFiniteSet, EquivariantMap
from nomtree.trees import Tree, HOLE, parse_term, print_term
from nomtree.automaton import DBNTA, parse_automaton, serialize
from nomtree.teacher import Teacher
from nomtree.learner import learn

__all__ = [
    "SymmetryKind", "FinInjection",
    "LocalSymmetry", "OrbitSpec", "Element", "OrbitFiniteSet", "EquivariantMap",
    "Tree", "HOLE", "parse_term", "print_term",
    "DBNTA", "parse_automaton", "serialize",
    "Teacher", "learn",
]
