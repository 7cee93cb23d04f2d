"""Orbit-finite nominal sets through support representations.

A single-orbit set is described by an :class:`OrbitSpec`: a degree ``k``
(the size of the canonical support ``{0..k-1}``) and a :class:`LocalSymmetry`
group permuting that support.  An :class:`Element` is the class of an
injection ``w`` from the canonical support into the atoms; it is stored by the
image tuple ``(w(0), ..., w(k-1))`` in its least form over the local symmetry.

Every nominal value in the package (elements, trees, contexts, and tuples of
them) follows a small duck-typed protocol: ``atoms()`` lists the atoms in a
fixed traversal order, ``act(pi)`` applies an atom map, ``key()`` returns a
totally ordered encoding and ``symmetric()`` tells whether a non-trivial
local symmetry occurs inside.  The generic helpers below (:func:`support`,
:func:`act`, :func:`canonical`, :func:`stabilizer`, :func:`product_reps`)
work on anything following it.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

from nomtree.symmetry import (
    Atom,
    AtomSet,
    FinInjection,
    SymmetryKind,
    admissible_bijections,
    admissible_injections,
    admissible_perms,
    atom_set,
    compose,
    extends_to_G,
    fresh_atoms,
    gap_slots,
    move_one,
)


class NominalError(ValueError):
    """Raised for ill-formed nominal data (bad witnesses, maps, ...)."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


# ---------------------------------------------------------------------------
# local symmetries, orbits, elements


@dataclass(frozen=True)
class LocalSymmetry:
    degree: int
    members: frozenset  # of image tuples over range(degree)

    @classmethod
    def trivial(cls, degree: int) -> LocalSymmetry:
        return cls(degree, frozenset([tuple(range(degree))]))

    @classmethod
    def full(cls, degree: int) -> LocalSymmetry:
        return cls(degree, frozenset(itertools.permutations(range(degree))))

    @classmethod
    def of(cls, degree: int, perms: Iterable[Sequence[int]]) -> LocalSymmetry:
        perms = [tuple(p) for p in perms]
        if not perms:
            return cls.trivial(degree)
        return cls(degree, frozenset(perms))

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def is_trivial(self) -> bool:
        return self.members == frozenset([tuple(range(self.degree))])

    def defects(self, kind: SymmetryKind) -> list[str]:
        """Reasons this member list is not a group of admissible permutations."""
        out = []
        k = self.degree
        ident = tuple(range(k))
        for p in sorted(self.members):
            if len(p) != k or sorted(p) != list(ident):
                out.append(f"{p} is not a permutation of 0..{k - 1}")
        if out:
            return out
        if ident not in self.members:
            out.append("identity missing")
        for p, q in itertools.product(sorted(self.members), repeat=2):
            pq = tuple(q[p[i]] for i in range(k))
            if pq not in self.members:
                out.append(f"not closed under composition: {p} then {q} gives {pq}")
                break
        for p in sorted(self.members):
            if not extends_to_G(dict(enumerate(p)), kind):
                out.append(f"{p} does not extend to the symmetry group")
        return out


@dataclass(frozen=True)
class OrbitSpec:
    name: str
    degree: int
    sym: LocalSymmetry = None
    bare: bool = False  # printed as a bare atom (the `atoms` alphabet)

    def __post_init__(self):
        if self.sym is None:
            object.__setattr__(self, "sym", LocalSymmetry.trivial(self.degree))
        if self.sym.degree != self.degree:
            raise NominalError("BAD_SYM", f"orbit {self.name}: sym degree {self.sym.degree} != {self.degree}")

    def element(self, witness: Sequence[Atom]) -> Element:
        witness = tuple(witness)
        if len(witness) != self.degree or len(set(witness)) != len(witness):
            raise NominalError("BAD_WITNESS", f"orbit {self.name} needs {self.degree} distinct atoms, got {witness}")
        return Element(self, _least_witness(self.sym.members, witness))

    def canonical_element(self) -> Element:
        return self.element(range(self.degree))

    def describe(self) -> str:
        perms = " ; ".join(" ".join(map(str, p)) for p in sorted(self.sym.members)) if not self.sym.is_trivial else ""
        return f"orbit {self.name} degree {self.degree} sym {{ {perms} }}".replace("{  }", "{ }")


def _least_witness(members, witness):
    if len(members) == 1:
        return witness
    return min(tuple(witness[s[i]] for i in range(len(witness))) for s in members)


ATOM_ORBIT = OrbitSpec("atom", 1, LocalSymmetry.trivial(1), bare=True)


class Element:
    """A point of an orbit: the class of the injection ``i -> witness[i]``."""

    __slots__ = ("orbit", "witness", "_hash")

    def __init__(self, orbit: OrbitSpec, witness: tuple):
        self.orbit = orbit
        self.witness = witness
        self._hash = hash((orbit.name, witness))

    def atoms(self) -> list:
        return list(self.witness)

    def act(self, pi: Mapping) -> Element:
        w = tuple([pi[a] for a in self.witness])
        if len(set(w)) != len(w):
            raise NominalError("NOT_INJECTIVE", f"{pi} collapses {self.witness}")
        members = self.orbit.sym.members
        return Element(self.orbit, w if len(members) == 1 else _least_witness(members, w))

    def key(self) -> tuple:
        return (0, self.orbit.name, self.witness)

    def symmetric(self) -> bool:
        return len(self.orbit.sym.members) > 1

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Element):
            return NotImplemented
        return self._hash == other._hash and self.witness == other.witness and self.orbit == other.orbit

    def __hash__(self) -> int:
        return self._hash

    def __reduce__(self):
        return (Element, (self.orbit, self.witness))

    def __str__(self) -> str:
        if self.orbit.bare:
            return str(self.witness[0])
        if not self.witness:
            return self.orbit.name
        return f"{self.orbit.name}[{','.join(map(str, self.witness))}]"

    __repr__ = __str__


def element_eq(a: Element, b: Element) -> bool:
    return a.orbit == b.orbit and a.witness == b.witness


def act_element(x: Element, pi: Mapping, kind: SymmetryKind) -> Element:
    missing = [a for a in x.witness if a not in pi]
    if missing:
        raise NominalError("NOT_DEFINED", f"map undefined on {missing}")
    if not extends_to_G({a: pi[a] for a in x.witness}, kind):
        raise NominalError("NOT_IN_G", f"{pi} does not extend to the group")
    return x.act(pi)


def least_support(x) -> AtomSet:
    return atom_set(atoms_of(x))


@dataclass(frozen=True)
class OrbitFiniteSet:
    orbits: tuple

    def __post_init__(self):
        names = [o.name for o in self.orbits]
        if len(set(names)) != len(names):
            raise NominalError("DUP_ORBIT", f"duplicate orbit names in {names}")

    def __iter__(self):
        return iter(self.orbits)

    def __len__(self):
        return len(self.orbits)

    def get(self, name: str) -> OrbitSpec | None:
        for o in self.orbits:
            if o.name == name:
                return o
        return None

    def contains(self, x: Element) -> bool:
        return any(o == x.orbit for o in self.orbits)

    def reps(self) -> list[Element]:
        return [o.canonical_element() for o in self.orbits]


def measure(X: Iterable[OrbitSpec]) -> Counter:
    """Multiset of ``(degree, |local symmetry|)`` over the orbits of ``X``."""
    return Counter((o.degree, o.sym.order) for o in X)


def format_measure(m: Counter) -> str:
    return "[" + ",".join(f"({d},{s})" * n for (d, s), n in sorted(m.items())) + "]"


# ---------------------------------------------------------------------------
# the generic value protocol


def atoms_of(v) -> list:
    if isinstance(v, tuple):
        out = []
        for x in v:
            out.extend(atoms_of(x))
        return out
    return v.atoms()


def support(v) -> frozenset:
    return frozenset(atoms_of(v))


def act(v, pi: Mapping):
    if isinstance(v, tuple):
        return tuple(act(x, pi) for x in v)
    return v.act(pi)


def key(v):
    if isinstance(v, tuple):
        return (3, tuple(key(x) for x in v))
    return v.key()


def symmetric(v) -> bool:
    if isinstance(v, tuple):
        return any(symmetric(x) for x in v)
    return v.symmetric()


@lru_cache(maxsize=400_000)
def canonical(v, kind: SymmetryKind):
    """Least relabelling of ``v`` onto ``{0..n-1}``; returns ``(value, sigma)``.

    ``sigma`` maps ``support(v)`` onto ``range(n)`` and ``act(v, sigma)`` is
    the returned value.  Two values lie in one orbit iff their canonical
    values coincide.
    """
    seq = atoms_of(v)
    if kind is SymmetryKind.TOTAL_ORDER:
        sigma = {a: i for i, a in enumerate(sorted(set(seq)))}
        return act(v, sigma), sigma
    if not symmetric(v):
        sigma = {}
        for a in seq:
            if a not in sigma:
                sigma[a] = len(sigma)
        return act(v, sigma), sigma
    supp = sorted(set(seq))
    best = None
    for perm in itertools.permutations(range(len(supp))):
        sigma = dict(zip(supp, perm))
        w = act(v, sigma)
        k = key(w)
        if best is None or k < best[0]:
            best = (k, w, sigma)
    return best[1], best[2]


def canon(v, kind: SymmetryKind):
    return canonical(v, kind)[0]


def same_orbit(a, b, kind: SymmetryKind) -> bool:
    return canon(a, kind) == canon(b, kind)


@lru_cache(maxsize=100_000)
def stabilizer(cv, kind: SymmetryKind) -> tuple:
    """Admissible bijections of ``support(cv)`` fixing ``cv``, as dicts (tuple)."""
    supp = sorted(support(cv))
    if not symmetric(cv):
        # every atom sits at a fixed position, so only the identity fixes cv
        return ({a: a for a in supp},)
    out = []
    for img in admissible_perms(len(supp), kind):
        sigma = {supp[i]: supp[img[i]] for i in range(len(supp))}
        if act(cv, sigma) == cv:
            out.append(sigma)
    return tuple(out)


def transporters(src, dst, kind: SymmetryKind) -> list[dict]:
    """All admissible ``pi`` on ``support(src)`` with ``act(src, pi) == dst``."""
    cs, ss = canonical(src, kind)
    cd, sd = canonical(dst, kind)
    if cs != cd:
        return []
    inv_d = {v: k for k, v in sd.items()}
    return [{a: inv_d[tau[ss[a]]] for a in ss} for tau in stabilizer(cs, kind)]


def instances_relative(base: Iterable[Atom], rep, kind: SymmetryKind, slack: int = 0) -> tuple:
    """Instances ``rep.pi`` covering every orbit of ``rep`` under the group fixing ``base``.

    Returns ``(instance, pi)`` pairs.  The images of ``pi`` lie in ``base``
    plus fresh atoms; instances differing only by a renaming of fresh atoms
    are enumerated once (fresh atoms appear in increasing order).
    """
    return _instances_relative(tuple(sorted(set(base))), rep, kind, slack)


@lru_cache(maxsize=200_000)
def _instances_relative(base: tuple, rep, kind: SymmetryKind, slack: int) -> tuple:
    supp = sorted(support(rep))
    d = len(supp)
    if kind is SymmetryKind.EQUALITY:
        images = _eq_images(base, fresh_atoms(d + slack, base, kind), d)
    else:
        images = _order_images(base, gap_slots(base, d + slack), d)
    out = []
    seen = set()
    for img in images:
        pi = dict(zip(supp, img))
        inst = act(rep, pi)
        if inst not in seen:
            seen.add(inst)
            out.append((inst, pi))
    return tuple(out)


def _eq_images(base, fresh, d) -> list:
    """Injections of ``d`` slots into ``base`` plus fresh atoms, fresh ones taken in order."""
    out = []

    def rec(acc, used, nf):
        if len(acc) == d:
            out.append(tuple(acc))
            return
        for b in base:
            if b not in used:
                used.add(b)
                acc.append(b)
                rec(acc, used, nf)
                acc.pop()
                used.discard(b)
        if nf < len(fresh):
            acc.append(fresh[nf])
            rec(acc, used, nf + 1)
            acc.pop()

    rec([], set(), 0)
    return out


def _order_images(base, gaps, d) -> list:
    """Increasing ``d``-tuples over ``base`` and gap slots, slots of a gap used from the bottom."""
    out = []
    nb = len(base)

    def rec(acc, j, g, used):
        # j: least base index still available; g, used: gap of the last fresh atom and slots taken
        if len(acc) == d:
            out.append(tuple(acc))
            return
        for jj in range(j, nb):
            acc.append(base[jj])
            rec(acc, jj + 1, -1, 0)
            acc.pop()
        for gg in range(j, nb + 1):
            u = used if gg == g else 0
            if u < len(gaps[gg]):
                acc.append(gaps[gg][u])
                rec(acc, gg, gg, u + 1)
                acc.pop()

    rec([], 0, -1, 0)
    return out


class Combo(NamedTuple):
    values: tuple
    pis: list
    choices: tuple


def product_reps(factors: Sequence[Sequence], kind: SymmetryKind, base: tuple | None = None) -> list[Combo]:
    """Representatives of the orbits of ``X_1 x ... x X_n``.

    Each factor is a list of orbit representatives.  Returns :class:`Combo`
    records: ``values`` is the tuple, ``pis[i]`` maps the support of the chosen
    representative of factor ``i`` onto its instance and ``choices[i]`` is the
    index of that representative.  Without ``base`` the tuples are canonical
    and orbit-distinct.  With ``base`` (a tuple of values kept fixed) the
    extension is enumerated relative to it: every orbit under the pointwise
    stabiliser of ``support(base)`` is hit at least once.
    """
    relative = base is not None
    partials = [(tuple(base) if relative else (), [], ())]
    nb = len(base) if relative else 0
    for factor in factors:
        nxt = []
        seen = set()
        for vals, pis, idx in partials:
            atoms = support(vals)
            for j, rep in enumerate(factor):
                for inst, pi in instances_relative(atoms, rep, kind):
                    nv = vals + (inst,)
                    if relative:
                        if (nv, idx + (j,)) in seen:
                            continue
                        seen.add((nv, idx + (j,)))
                        nxt.append((nv, pis + [pi], idx + (j,)))
                        continue
                    cv, sigma = canonical(nv, kind)
                    if cv in seen:
                        continue
                    seen.add(cv)
                    npis = [{a: sigma[b] for a, b in p.items()} for p in pis + [pi]]
                    nxt.append((cv, npis, idx + (j,)))
        partials = nxt
    return [Combo(vals[nb:], pis, idx) for vals, pis, idx in partials]


# ---------------------------------------------------------------------------
# equivariant maps between single orbits


def _us(u: Mapping, s: Sequence[int]) -> tuple:
    """The map ``d -> s(u(d))`` as an image tuple over ``sorted(dom u)``."""
    return tuple(s[u[d]] for d in sorted(u))


def _tu(u: Mapping, t: Sequence[int]) -> tuple:
    """The map ``d -> u(t(d))`` as an image tuple over ``sorted(dom u)``."""
    return tuple(u[t[d]] for d in sorted(u))


def us_subset_tu(u: Mapping, S: LocalSymmetry, T: LocalSymmetry) -> bool:
    tus = {_tu(u, t) for t in T.members}
    return all(_us(u, s) in tus for s in S.members)


def us_equals_tu(u: Mapping, S: LocalSymmetry, T: LocalSymmetry) -> bool:
    return {_us(u, s) for s in S.members} == {_tu(u, t) for t in T.members}


@dataclass(frozen=True)
class MapEntry:
    domain: OrbitSpec
    target: OrbitSpec
    u: FinInjection  # canonical support of target -> canonical support of domain


@dataclass(frozen=True)
class EquivariantMap:
    entries: tuple

    def entry(self, orbit: OrbitSpec) -> MapEntry | None:
        for e in self.entries:
            if e.domain == orbit:
                return e
        return None

    def __call__(self, x: Element) -> Element:
        return apply_map(self, x)


def make_equivariant_map(entries: Iterable, kind: SymmetryKind) -> EquivariantMap:
    built = []
    for dom, tgt, u in entries:
        u = FinInjection(u)
        if sorted(u) != list(range(tgt.degree)) or any(not 0 <= c < dom.degree for c in u.values()):
            raise NominalError("BAD_TYPE", f"u must map 0..{tgt.degree - 1} into 0..{dom.degree - 1}: {u}")
        if not extends_to_G(u, kind):
            raise NominalError("NOT_IN_G", f"{u} does not extend to the group")
        if not us_subset_tu(u, dom.sym, tgt.sym):
            raise NominalError("US_NOT_IN_TU", f"entry {dom.name} -> {tgt.name} with u={u} is ill-defined")
        built.append(MapEntry(dom, tgt, u))
    return EquivariantMap(tuple(built))


def apply_map(f: EquivariantMap, x: Element) -> Element:
    e = f.entry(x.orbit)
    if e is None:
        raise NominalError("NO_ENTRY", f"no entry for orbit {x.orbit.name}")
    return e.target.element(tuple(x.witness[e.u[d]] for d in range(e.target.degree)))


# ---------------------------------------------------------------------------
# isomorphism and the order on orbit-finite sets


def orbits_isomorphic(X: OrbitSpec, Y: OrbitSpec, kind: SymmetryKind) -> FinInjection | None:
    """A bijection ``u`` from Y's support to X's with ``uS = Tu``, if any."""
    if X.degree != Y.degree or X.sym.order != Y.sym.order:
        return None
    for u in admissible_bijections(range(Y.degree), range(X.degree), kind):
        if us_equals_tu(u, X.sym, Y.sym):
            return FinInjection(u)
    return None


def orbit_leq(Y: OrbitSpec, X: OrbitSpec, kind: SymmetryKind) -> FinInjection | None:
    """Witness ``u: supp(Y) -> supp(X)`` of an equivariant surjection ``X -> Y``."""
    if Y.degree > X.degree:
        return None
    for u in admissible_injections(range(Y.degree), range(X.degree), kind):
        if us_subset_tu(u, X.sym, Y.sym):
            return FinInjection(u)
    return None


def _matching(left: Sequence, right: Sequence, ok) -> dict | None:
    """Injective assignment ``left[i] -> right[j]`` with ``ok(i, j)`` (augmenting paths)."""
    match_r: dict[int, int] = {}

    def try_assign(i, seen):
        for j in range(len(right)):
            if j in seen or not ok(i, j):
                continue
            seen.add(j)
            if j not in match_r or try_assign(match_r[j], seen):
                match_r[j] = i
                return True
        return False

    for i in range(len(left)):
        if not try_assign(i, set()):
            return None
    return {i: j for j, i in match_r.items()}


def set_compare(Y: Iterable[OrbitSpec], X: Iterable[OrbitSpec], kind: SymmetryKind) -> str:
    """``'isomorphic'``, ``'strictly_below'`` (Y < X) or ``'above_or_incomparable'``."""
    Y, X = list(Y), list(X)
    if len(Y) == len(X):
        iso = _matching(Y, X, lambda i, j: orbits_isomorphic(X[j], Y[i], kind) is not None)
        if iso is not None:
            return "isomorphic"
    leq = _matching(Y, X, lambda i, j: orbit_leq(Y[i], X[j], kind) is not None)
    return "strictly_below" if leq is not None else "above_or_incomparable"


def sets_isomorphic(Y, X, kind) -> dict | None:
    """Orbit pairing with isomorphism witnesses: ``{name_of_Y_orbit: (name_of_X_orbit, u)}``."""
    Y, X = list(Y), list(X)
    if len(Y) != len(X):
        return None
    m = _matching(Y, X, lambda i, j: orbits_isomorphic(X[j], Y[i], kind) is not None)
    if m is None:
        return None
    return {Y[i].name: (X[j].name, orbits_isomorphic(X[j], Y[i], kind)) for i, j in m.items()}


def chain_cap(X: Iterable[OrbitSpec]) -> int:
    """Bound on strict extensions of a chain below ``X``: one step to add each
    orbit plus, per orbit, its degree and the prime factors of ``degree!``."""
    return sum(1 + o.degree + _omega(math.factorial(o.degree)) for o in X)


def _omega(n: int) -> int:
    count, p = 0, 2
    while n > 1 and p * p <= n:
        while n % p == 0:
            n //= p
            count += 1
        p += 1
    return count + (1 if n > 1 else 0)


# ---------------------------------------------------------------------------
# products and enumeration


def orbit_of_value(cv, name: str, kind: SymmetryKind) -> OrbitSpec:
    """``[[{0..n-1}, Stab(cv)]]`` for a canonical value ``cv``."""
    n = len(support(cv))
    members = [tuple(s[i] for i in range(n)) for s in stabilizer(cv, kind)]
    return OrbitSpec(name, n, LocalSymmetry.of(n, members))


def product_orbits(X: OrbitFiniteSet, Y: OrbitFiniteSet, kind: SymmetryKind):
    """Orbit decomposition of ``X x Y`` with its two projections.

    Returns ``(P, proj_x, proj_y, reps)``; ``reps[name]`` is the canonical
    pair represented by the orbit ``name`` at witness ``0..n-1``.
    """
    orbits, ex, ey, reps = [], [], [], {}
    for i, ((x, y), _, _) in enumerate(product_reps([X.reps(), Y.reps()], kind)):
        o = orbit_of_value((x, y), f"{x.orbit.name}*{y.orbit.name}#{i}", kind)
        orbits.append(o)
        reps[o.name] = (x, y)
        ex.append((o, x.orbit, {d: x.witness[d] for d in range(x.orbit.degree)}))
        ey.append((o, y.orbit, {d: y.witness[d] for d in range(y.orbit.degree)}))
    return (OrbitFiniteSet(tuple(orbits)), make_equivariant_map(ex, kind),
            make_equivariant_map(ey, kind), reps)


def enumerate_elements(X: Iterable[OrbitSpec], atoms: Iterable[Atom], kind: SymmetryKind) -> list[Element]:
    atoms = sorted(set(atoms))
    out, seen = [], set()
    for o in X:
        for pi in admissible_injections(range(o.degree), atoms, kind):
            e = o.element(tuple(pi[i] for i in range(o.degree)))
            if e not in seen:
                seen.add(e)
                out.append(e)
    return out


# ---------------------------------------------------------------------------
# equivalence classes of an equivariant equivalence, as orbits


def class_least_support(y, equiv, kind: SymmetryKind) -> AtomSet:
    """Least support of the class of ``y`` under an equivariant equivalence."""
    supp = sorted(support(y))
    return tuple(a for a in supp if not equiv(y, act(y, move_one(a, supp, kind))))


def class_stabilizer(y, L: Sequence[Atom], equiv, kind: SymmetryKind) -> list[dict]:
    """Admissible permutations of ``L`` that fix the class of ``y``."""
    supp = sorted(support(y))
    out = []
    for sigma in admissible_bijections(L, L, kind):
        full = {a: sigma.get(a, a) for a in supp}
        if all(sigma[a] == a for a in L) or equiv(y, act(y, full)):
            out.append(sigma)
    return out


@dataclass
class ClassOrbit:
    """An orbit of classes: representative value, its class support and orbit spec."""

    rep: object
    least: AtomSet
    spec: OrbitSpec


@dataclass
class Quotient:
    """Orbits of ``V / equiv`` for an equivariant equivalence on a nominal set ``V``."""

    kind: SymmetryKind
    equiv: object
    classes: list = field(default_factory=list)
    prefix: str = "q"

    def add(self, y) -> tuple[ClassOrbit, bool]:
        """Register ``y``'s class; returns its orbit and whether it was new."""
        L = class_least_support(y, self.equiv, self.kind)
        for c in self.classes:
            if self._match(c, y, L) is not None:
                return c, False
        stab = class_stabilizer(y, L, self.equiv, self.kind)
        idx = {a: i for i, a in enumerate(L)}
        members = [tuple(idx[s[L[i]]] for i in range(len(L))) for s in stab]
        spec = OrbitSpec(f"{self.prefix}{len(self.classes)}", len(L), LocalSymmetry.of(len(L), members))
        c = ClassOrbit(y, tuple(L), spec)
        self.classes.append(c)
        return c, True

    def _match(self, c: ClassOrbit, y, L) -> dict | None:
        if len(L) != len(c.least):
            return None
        rep_supp = support(c.rep)
        for pi in admissible_bijections(c.least, L, self.kind):
            full = _extend_avoiding(pi, rep_supp, support(y), self.kind)
            if self.equiv(act(c.rep, full), y):
                return pi
        return None

    def classify(self, y) -> Element:
        L = class_least_support(y, self.equiv, self.kind)
        for c in self.classes:
            pi = self._match(c, y, L)
            if pi is not None:
                return c.spec.element(tuple(pi[a] for a in c.least))
        raise LookupError(f"no class orbit matches {y}")

    def section(self, e: Element, avoid: Iterable[Atom] = ()):
        """A value whose class is the element ``e``."""
        c = next(c for c in self.classes if c.spec == e.orbit)
        pi = {c.least[i]: e.witness[i] for i in range(len(c.least))}
        return act(c.rep, _extend_avoiding(pi, support(c.rep), avoid, self.kind))

    @property
    def specs(self) -> list[OrbitSpec]:
        return [c.spec for c in self.classes]


def _extend_avoiding(pi: Mapping, atoms, avoid, kind: SymmetryKind) -> dict:
    from nomtree.symmetry import extend_map

    atoms = set(atoms)
    if kind is SymmetryKind.EQUALITY:
        taken = set(pi.values()) | set(avoid)
        out = dict(pi)
        nxt = max(taken | atoms | {-1}) + 1
        for a in sorted(atoms - set(pi)):
            out[a] = nxt
            nxt += 1
        return out
    return extend_map(pi, atoms, kind)


def injection_as_map(witness: Sequence[Atom]) -> FinInjection:
    return FinInjection(dict(enumerate(witness)))


__all__ = [
    "LocalSymmetry", "OrbitSpec", "Element", "OrbitFiniteSet", "EquivariantMap", "MapEntry",
    "ATOM_ORBIT", "NominalError", "element_eq", "act_element", "least_support",
    "make_equivariant_map", "apply_map", "orbits_isomorphic", "orbit_leq", "set_compare",
    "sets_isomorphic", "product_orbits", "enumerate_elements", "measure", "chain_cap",
    "canonical", "canon", "stabilizer", "transporters", "instances_relative", "product_reps",
    "support", "act", "key", "Quotient", "compose",
]
