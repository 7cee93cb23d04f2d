"""Data trees, one-hole contexts, and their orbits.

Trees are immutable terms ``a(t1,...,tk)`` whose labels are alphabet
:class:`~nomtree.nominal.Element` values.  A context is a tree with exactly
one leaf :data:`HOLE`.  Positions are available on demand via
:meth:`Tree.positions`.
"""

from __future__ import annotations

import re
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass

from nomtree.nominal import (
    ATOM_ORBIT,
    Element,
    OrbitFiniteSet,
    OrbitSpec,
    canonical,
    orbit_of_value,
    product_reps,
)
from nomtree.symmetry import SymmetryKind, extends_to_G, parse_atom


class _Hole:
    """The hole ``x`` of a context; invariant under every atom map."""

    __slots__ = ()
    children = ()
    label = None

    def atoms(self):
        return []

    def act(self, pi):
        return self

    def key(self):
        return (1,)

    def symmetric(self):
        return False

    def is_context(self):
        return True

    def __str__(self):
        return "x"

    __repr__ = __str__

    def __reduce__(self):
        return "HOLE"


HOLE = _Hole()


class Tree:
    __slots__ = ("label", "children", "_hash", "_key")

    def __init__(self, label: Element, children: Iterable = ()):
        self.label = label
        self.children = children if type(children) is tuple else tuple(children)
        self._hash = None
        self._key = None

    def atoms(self) -> list:
        out = list(self.label.witness)
        for c in self.children:
            out.extend(c.atoms())
        return out

    def act(self, pi: Mapping) -> Tree:
        return Tree(self.label.act(pi), tuple([c.act(pi) for c in self.children]))

    def key(self) -> tuple:
        if self._key is None:
            self._key = (2, self.label.key(), tuple(c.key() for c in self.children))
        return self._key

    def symmetric(self) -> bool:
        return self.label.symmetric() or any(c.symmetric() for c in self.children)

    def is_context(self) -> bool:
        return any(c is HOLE or (isinstance(c, Tree) and c.is_context()) for c in self.children)

    @property
    def arity(self) -> int:
        return len(self.children)

    def size(self) -> int:
        return 1 + sum(c.size() if isinstance(c, Tree) else 1 for c in self.children)

    def depth(self) -> int:
        """Height with leaves at depth 0."""
        return 1 + max((c.depth() if isinstance(c, Tree) else 0 for c in self.children), default=-1)

    def positions(self) -> dict:
        """The tree as a function from positions (tuples over 1..m) to labels."""
        out = {(): self.label}
        for i, c in enumerate(self.children, 1):
            if c is HOLE:
                out[(i,)] = HOLE
                continue
            for p, a in c.positions().items():
                out[(i,) + p] = a
        return out

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Tree):
            return NotImplemented
        return hash(self) == hash(other) and self.key() == other.key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.label, self.children))
        return self._hash

    def __lt__(self, other) -> bool:
        return self.key() < other.key()

    def __str__(self) -> str:
        return print_term(self)

    def __repr__(self) -> str:
        return f"Tree({print_term(self)})"


def leaf(label: Element) -> Tree:
    return Tree(label, ())


# ---------------------------------------------------------------------------
# textual syntax

class TermSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(-?\d+(?:/\d+)?)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        if m.group(1) is not None:
            out.append(("atom", m.group(1), m.start(1)))
        elif m.group(2) is not None:
            out.append(("name", m.group(2), m.start(2)))
        elif m.group(3) is not None:
            if not m.group(3).isspace():
                out.append(("sym", m.group(3), m.start(3)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text, alphabet, kind):
        self.toks = _tokens(text)
        self.i = 0
        self.alphabet = alphabet
        self.kind = kind
        self.bare = next((o for o in alphabet if o.bare), None)

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        t = self.toks[self.i]
        if (kind and t[0] != kind) or (value and t[1] != value):
            want = value or kind
            raise TermSyntaxError(f"expected {want!r}, found {t[1] or 'end of input'!r}", t[2])
        self.i += 1
        return t

    def atom(self):
        t = self.take("atom")
        try:
            return parse_atom(t[1], self.kind)
        except ValueError as e:
            raise TermSyntaxError(str(e), t[2]) from None

    def label(self):
        t = self.peek()
        if t[0] == "atom":
            if self.bare is None:
                raise TermSyntaxError("bare atom label but the alphabet has no atom orbit", t[2])
            return self.bare.element((self.atom(),))
        if t[0] == "name":
            self.take()
            if t[1] == "x":
                return HOLE
            orbit = self.alphabet.get(t[1])
            if orbit is None:
                raise TermSyntaxError(f"unknown letter orbit {t[1]!r}", t[2])
            args = []
            if self.peek()[1] == "[":
                self.take()
                args.append(self.atom())
                while self.peek()[1] == ",":
                    self.take()
                    args.append(self.atom())
                self.take("sym", "]")
            if len(args) != orbit.degree:
                raise TermSyntaxError(f"{t[1]} takes {orbit.degree} atoms, got {len(args)}", t[2])
            if not extends_to_G(dict(enumerate(args)), self.kind):
                raise TermSyntaxError(f"{t[1]}{args} is not an admissible witness", t[2])
            return orbit.element(args)
        raise TermSyntaxError(f"unexpected {t[1] or 'end of input'!r}", t[2])

    def tree(self):
        start = self.peek()[2]
        lab = self.label()
        if lab is HOLE:
            if self.peek()[1] == "(":
                raise TermSyntaxError("the hole x must be a leaf", self.peek()[2])
            return HOLE
        kids = []
        if self.peek()[1] == "(":
            self.take()
            kids.append(self.tree())
            while self.peek()[1] == ",":
                self.take()
                kids.append(self.tree())
            self.take("sym", ")")
        holes = sum(1 for k in kids if k is HOLE or k.is_context())
        if holes > 1:
            raise TermSyntaxError("a context has exactly one hole", start)
        return Tree(lab, kids)


def parse_term(text: str, alphabet: OrbitFiniteSet | None = None,
               kind: SymmetryKind = SymmetryKind.EQUALITY):
    """Parse ``LABEL`` / ``LABEL(TREE, ...)``; the bare token ``x`` is the hole."""
    if alphabet is None:
        alphabet = OrbitFiniteSet((ATOM_ORBIT,))
    p = _Parser(text, alphabet, kind)
    t = p.tree()
    p.take("end")
    return t


def print_term(t) -> str:
    if t is HOLE:
        return "x"
    lab = str(t.label)
    if not t.children:
        return lab
    return f"{lab}({','.join(print_term(c) for c in t.children)})"


# ---------------------------------------------------------------------------
# operations

def substitute(c, t):
    """``c[t]``: the hole of context ``c`` replaced by ``t``."""
    if c is HOLE:
        return t
    if not c.is_context():
        raise ValueError(f"{print_term(c)} is not a context")
    return Tree(c.label, (substitute(k, t) if (k is HOLE or k.is_context()) else k for k in c.children))


def subtrees(t: Tree) -> list[Tree]:
    """Distinct subtrees, in preorder of first occurrence."""
    out, seen = [], set()

    def walk(s):
        if s in seen:
            return
        seen.add(s)
        out.append(s)
        for c in s.children:
            walk(c)

    walk(t)
    return out


def act_tree(t, pi: Mapping, kind: SymmetryKind):
    supp = set(t.atoms())
    missing = supp - set(pi)
    if missing:
        raise ValueError(f"map undefined on {sorted(missing)}")
    if not extends_to_G({a: pi[a] for a in supp}, kind):
        raise ValueError(f"{dict(pi)} does not extend to the group")
    return t.act(pi)


@dataclass(frozen=True)
class TreeOrbit:
    rep: object  # canonical Tree or context
    spec: OrbitSpec

    @property
    def degree(self) -> int:
        return self.spec.degree

    def __str__(self) -> str:
        return f"Orbit({print_term(self.rep)})"


def tree_orbit(t, kind: SymmetryKind, name: str | None = None) -> TreeOrbit:
    rep = canonical(t, kind)[0]
    return TreeOrbit(rep, orbit_of_value(rep, name or print_term(rep), kind))


def same_tree_orbit(t1, t2, kind: SymmetryKind) -> bool:
    return canonical(t1, kind)[0] == canonical(t2, kind)[0]


def next_orbits(S: Sequence, alphabet: OrbitFiniteSet, m: int, kind: SymmetryKind) -> list[TreeOrbit]:
    """Orbits of one-layer extensions ``a(t1..tk)``, ``1 <= k <= m``, not in ``S``.

    ``S`` holds canonical tree representatives (or :class:`TreeOrbit`).
    """
    reps = [s.rep if isinstance(s, TreeOrbit) else s for s in S]
    inside = {canonical(s, kind)[0] for s in reps}
    out, seen = [], set()
    if not reps:
        return out
    labels = alphabet.reps()
    for k in range(1, m + 1):
        for vals, _, _ in product_reps([labels] + [reps] * k, kind):
            t = canonical(Tree(vals[0], vals[1:]), kind)[0]
            if t in inside or t in seen:
                continue
            seen.add(t)
            out.append(tree_orbit(t, kind))
    return out


def check_subtree_closed(S: Sequence, kind: SymmetryKind) -> bool:
    reps = [s.rep if isinstance(s, TreeOrbit) else s for s in S]
    inside = {canonical(s, kind)[0] for s in reps}
    return all(canonical(u, kind)[0] in inside for s in reps for u in subtrees(s))


def split_context(c) -> tuple:
    """For ``c != x`` return ``(c', a, i, siblings)`` with ``c = c'[a(..x at i..)]``."""

    def walk(node):
        for i, k in enumerate(node.children):
            if k is HOLE:
                sibs = tuple(s for j, s in enumerate(node.children) if j != i)
                return HOLE, node.label, i, sibs
            if k.is_context():
                parent, a, idx, sibs = walk(k)
                kids = list(node.children)
                kids[i] = parent
                return Tree(node.label, kids), a, idx, sibs
        raise ValueError("not a context")

    return walk(c)


def check_x_prefix_closed(E: Sequence, S: Sequence, kind: SymmetryKind) -> bool:
    ctx = [e.rep if isinstance(e, TreeOrbit) else e for e in E]
    trees = [s.rep if isinstance(s, TreeOrbit) else s for s in S]
    c_in = {canonical(c, kind)[0] for c in ctx}
    s_in = {canonical(s, kind)[0] for s in trees}
    if HOLE not in c_in:
        return False
    for c in ctx:
        if c is HOLE:
            continue
        parent, _, _, sibs = split_context(c)
        if canonical(parent, kind)[0] not in c_in:
            return False
        if any(canonical(b, kind)[0] not in s_in for b in sibs):
            return False
    return True
