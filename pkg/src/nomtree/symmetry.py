"""Atoms, finite injections and the two supported data symmetries.

Atoms are plain Python numbers: ``int`` for the equality symmetry and
:class:`fractions.Fraction` (or ``int``) for the total order symmetry.  Values
are always exact.
"""

from __future__ import annotations

import itertools
import re
from collections.abc import Iterable, Iterator, Mapping
from enum import Enum
from fractions import Fraction
from typing import Union

Atom = Union[int, Fraction]
AtomSet = tuple  # sorted, duplicate-free tuple of atoms

_ATOM_RE = re.compile(r"^-?\d+(/\d+)?$")


class SymmetryKind(Enum):
    EQUALITY = "equality"
    TOTAL_ORDER = "total-order"

    @classmethod
    def parse(cls, text: str) -> SymmetryKind:
        for kind in cls:
            if kind.value == text:
                return kind
        raise ValueError(f"unknown symmetry {text!r} (expected 'equality' or 'total-order')")


def parse_atom(text: str, kind: SymmetryKind) -> Atom:
    text = text.strip()
    if not _ATOM_RE.match(text):
        raise ValueError(f"bad atom literal {text!r}")
    if kind is SymmetryKind.EQUALITY:
        if "/" in text or text.startswith("-"):
            raise ValueError(f"equality atoms are natural numbers, got {text!r}")
        return int(text)
    value = Fraction(text)
    return int(value) if value.denominator == 1 else value


def format_atom(a: Atom) -> str:
    return str(a)


def atom_set(atoms: Iterable[Atom]) -> AtomSet:
    return tuple(sorted(set(atoms)))


class FinInjection(Mapping):
    """A finite injective map between atoms.  Immutable and hashable."""

    __slots__ = ("_pairs", "_hash")

    def __init__(self, pairs: Mapping | Iterable = ()):
        d = dict(pairs)
        if len(set(d.values())) != len(d):
            raise ValueError(f"not injective: {d}")
        self._pairs = d
        self._hash = None

    def __getitem__(self, key):
        return self._pairs[key]

    def __iter__(self) -> Iterator:
        return iter(self._pairs)

    def __len__(self) -> int:
        return len(self._pairs)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._pairs.items()))
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, FinInjection):
            return self._pairs == other._pairs
        if isinstance(other, Mapping):
            return self._pairs == dict(other)
        return NotImplemented

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}->{v}" for k, v in sorted(self._pairs.items()))
        return f"FinInjection({{{inner}}})"

    @property
    def domain(self) -> AtomSet:
        return atom_set(self._pairs)

    @property
    def image(self) -> AtomSet:
        return atom_set(self._pairs.values())

    def as_dict(self) -> dict:
        return dict(self._pairs)


def extends_to_G(f: Mapping, kind: SymmetryKind) -> bool:
    """Whether ``f`` is the restriction of some permutation in the symmetry group."""
    if len(set(f.values())) != len(f):
        return False
    if kind is SymmetryKind.EQUALITY:
        return True
    dom = sorted(f)
    return all(f[a] < f[b] for a, b in zip(dom, dom[1:]))


def compose(f: Mapping, g: Mapping) -> FinInjection:
    """Diagrammatic composition: ``x -> g(f(x))`` on ``{x | f(x) in dom(g)}``."""
    return FinInjection({x: g[y] for x, y in f.items() if y in g})


def invert(f: Mapping) -> FinInjection:
    return FinInjection({v: k for k, v in f.items()})


def identity(atoms: Iterable[Atom]) -> FinInjection:
    return FinInjection({a: a for a in atoms})


def fresh_atoms(n: int, avoid: Iterable[Atom], kind: SymmetryKind) -> AtomSet:
    """The ``n`` smallest natural numbers outside ``avoid``."""
    avoid = set(avoid)
    out = []
    a = 0
    while len(out) < n:
        if a not in avoid:
            out.append(a)
        a += 1
    return tuple(out)


def canonical_support(k: int, kind: SymmetryKind) -> AtomSet:
    return tuple(range(k))


def admissible_perms(k: int, kind: SymmetryKind) -> Iterator[tuple]:
    """Image tuples of the bijections of ``range(k)`` that extend to the group."""
    if kind is SymmetryKind.TOTAL_ORDER:
        yield tuple(range(k))
        return
    yield from itertools.permutations(range(k))


def admissible_bijections(src: Iterable[Atom], dst: Iterable[Atom], kind: SymmetryKind) -> Iterator[dict]:
    src = sorted(src)
    dst = sorted(dst)
    if len(src) != len(dst):
        return
    if kind is SymmetryKind.TOTAL_ORDER:
        yield dict(zip(src, dst))
        return
    for img in itertools.permutations(dst):
        yield dict(zip(src, img))


def admissible_injections(src: Iterable[Atom], dst: Iterable[Atom], kind: SymmetryKind) -> Iterator[dict]:
    src = sorted(src)
    dst = sorted(dst)
    if kind is SymmetryKind.TOTAL_ORDER:
        for img in itertools.combinations(dst, len(src)):
            yield dict(zip(src, img))
        return
    for img in itertools.permutations(dst, len(src)):
        yield dict(zip(src, img))


def gap_slots(base: Iterable[Atom], per_gap: int) -> list[list[Fraction]]:
    """``per_gap`` increasing rationals inside each gap of ``base`` (total order).

    Gap 0 lies below every base atom, gap ``i`` between the ``i``-th and
    ``i+1``-th, and the last gap above all of them.
    """
    base = sorted(base)
    if not base:
        return [[Fraction(j) for j in range(per_gap)]]
    gaps = [[Fraction(base[0]) - per_gap + j for j in range(per_gap)]]
    for lo, hi in zip(base, base[1:]):
        step = Fraction(hi - lo, per_gap + 1)
        gaps.append([lo + step * (j + 1) for j in range(per_gap)])
    gaps.append([Fraction(base[-1]) + 1 + j for j in range(per_gap)])
    return [[_tidy(a) for a in g] for g in gaps]


def _tidy(a: Fraction) -> Atom:
    return int(a) if a.denominator == 1 else a


def extend_map(pi: Mapping, atoms: Iterable[Atom], kind: SymmetryKind) -> dict:
    """Extend ``pi`` to an admissible injection defined on ``atoms`` too.

    Atoms outside ``dom(pi)`` go to values outside ``image(pi)``; for the total
    order they are interpolated so the result stays monotone.
    """
    atoms = sorted(set(atoms) | set(pi))
    extra = [a for a in atoms if a not in pi]
    out = dict(pi)
    if not extra:
        return out
    if kind is SymmetryKind.EQUALITY:
        taken = set(pi.values())
        nxt = max(taken | set(atoms), default=-1) + 1
        for a in extra:
            while nxt in taken:
                nxt += 1
            out[a] = nxt
            nxt += 1
        return out
    dom = sorted(pi)
    # group extra atoms by the pi-domain gap they fall into
    groups: dict[int, list] = {}
    for a in extra:
        gi = sum(1 for d in dom if d < a)
        groups.setdefault(gi, []).append(a)
    for gi, members in groups.items():
        n = len(members)
        if not dom:
            vals = [Fraction(j) for j in range(n)]
        elif gi == 0:
            top = Fraction(pi[dom[0]])
            vals = [top - n + j for j in range(n)]
        elif gi == len(dom):
            bot = Fraction(pi[dom[-1]])
            vals = [bot + 1 + j for j in range(n)]
        else:
            lo, hi = Fraction(pi[dom[gi - 1]]), Fraction(pi[dom[gi]])
            step = (hi - lo) / (n + 1)
            vals = [lo + step * (j + 1) for j in range(n)]
        for a, v in zip(members, vals):
            out[a] = _tidy(v)
    return out


def move_one(atom: Atom, support: Iterable[Atom], kind: SymmetryKind) -> dict:
    """An admissible map on ``support`` that moves only ``atom`` to a new value.

    Equality: swap with the smallest fresh atom.  Total order: shift ``atom``
    halfway towards its upper neighbour (or by one past the maximum).
    """
    support = sorted(set(support))
    if kind is SymmetryKind.EQUALITY:
        f = fresh_atoms(1, support, kind)[0]
        pi = {a: a for a in support}
        pi[atom] = f
        return pi
    idx = support.index(atom)
    if idx + 1 < len(support):
        new = Fraction(atom + support[idx + 1]) / 2
    else:
        new = Fraction(atom) + 1
    pi = {a: a for a in support}
    pi[atom] = _tidy(new)
    return pi
