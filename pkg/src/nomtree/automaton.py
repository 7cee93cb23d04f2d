"""Deterministic bottom-up nominal tree automata.

Transitions are written as instance rules ``(label, q1, ..., qk) -> q`` that
stand for their whole orbit under the group.  :func:`validate` checks them
against the orbit decomposition of ``A x Q^k`` and compiles a lookup table
keyed by canonical tuples, which :meth:`DBNTA.step` uses to evaluate a node.
"""

from __future__ import annotations

import itertools
import logging
import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from nomtree.nominal import (
    ATOM_ORBIT,
    Combo,
    Element,
    LocalSymmetry,
    NominalError,
    OrbitFiniteSet,
    OrbitSpec,
    Quotient,
    act,
    canonical,
    key,
    product_reps,
    stabilizer,
    support,
)
from nomtree.symmetry import SymmetryKind, extend_map, extends_to_G, parse_atom
from nomtree.trees import HOLE, Tree, print_term

log = logging.getLogger(__name__)


class _Wild:
    """The ``_`` pattern: matches any state element."""

    __slots__ = ()

    def atoms(self):
        return []

    def act(self, pi):
        return self

    def key(self):
        return (4,)

    def symmetric(self):
        return False

    def __str__(self):
        return "_"

    __repr__ = __str__


WILD = _Wild()


class AutomatonError(ValueError):
    def __init__(self, code: str, message: str, defects: Sequence = ()):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.defects = list(defects)


@dataclass(frozen=True)
class Defect:
    code: str  # UNCOVERED | CONFLICT | NOT_EQUIVARIANT | BAD_SYM | BAD_ACCEPTING | BAD_OTHERWISE
    where: str
    message: str

    def __str__(self) -> str:
        return f"{self.code} {self.where}: {self.message}"


@dataclass(frozen=True)
class Rule:
    arity: int
    label: Element | None  # None for an `otherwise` rule
    args: tuple  # Elements or WILD
    target: Element
    line: int | None = None

    @property
    def otherwise(self) -> bool:
        return self.label is None

    def lhs(self) -> tuple:
        return (self.label,) + self.args


@dataclass
class RunResult:
    state: Element
    accepted: bool


@dataclass
class DBNTA:
    kind: SymmetryKind
    alphabet: OrbitFiniteSet
    max_arity: int
    states: OrbitFiniteSet
    accepting: frozenset
    rules: list
    witnesses: dict = field(default_factory=dict)
    _table: list | None = field(default=None, repr=False)

    # -- evaluation -------------------------------------------------------

    @property
    def valid(self) -> bool:
        return self._table is not None

    def compile(self) -> DBNTA:
        if self._table is None:
            defects = validate(self)
            if defects:
                raise AutomatonError("INVALID", "; ".join(map(str, defects[:5])), defects)
        return self

    def step(self, label: Element, args: Sequence[Element]) -> Element:
        self.compile()
        tup = (label,) + tuple(args)
        cv, sigma = canonical(tup, self.kind)
        out = self._table[len(args)][cv]
        inv = {v: k for k, v in sigma.items()}
        return out.act(inv)

    def is_accepting(self, q: Element) -> bool:
        return q.orbit.name in self.accepting

    def state_reps(self) -> list[Element]:
        return self.states.reps()

    def rules_of(self, k: int) -> list[Rule]:
        return [r for r in self.rules if r.arity == k]


# ---------------------------------------------------------------------------
# validation


def _lhs_orbits(A: DBNTA, k: int) -> list[Combo]:
    return product_reps([A.alphabet.reps()] + [A.state_reps()] * k, A.kind)


def _rule_matcher(rules: Sequence[Rule], kind: SymmetryKind):
    """Index non-otherwise rules by (wildcard mask, canonical non-wild lhs)."""
    index: dict = {}
    for r in rules:
        if r.otherwise:
            continue
        lhs = r.lhs()
        mask = tuple(v is WILD for v in lhs)
        proj = tuple(v for v in lhs if v is not WILD)
        cv, sigma = canonical(proj, kind)
        index.setdefault(mask, {}).setdefault(cv, []).append((r, sigma))
    return index


def _matches(index, x: tuple, kind: SymmetryKind):
    """Yield ``(rule, output)`` for every way a rule instance covers ``x``."""
    for mask, table in index.items():
        proj = tuple(v for v, w in zip(x, mask) if not w)
        cx, sx = canonical(proj, kind)
        hits = table.get(cx)
        if not hits:
            continue
        inv_x = {v: k for k, v in sx.items()}
        for rule, sr in hits:
            for tau in stabilizer(cx, kind):
                pi = {a: inv_x[tau[sr[a]]] for a in sr}
                yield rule, rule.target.act(pi)


def _fmt_tuple(x: tuple) -> str:
    return "(" + ", ".join(str(v) for v in x) + ")"


def validate(A: DBNTA) -> list[Defect]:
    """Defects of ``A``; an empty list means ``A`` is a well-defined DBNTA.

    On success the transition lookup table is compiled into ``A``.
    """
    defects: list[Defect] = []
    for o in list(A.alphabet) + list(A.states):
        for msg in o.sym.defects(A.kind):
            defects.append(Defect("BAD_SYM", f"orbit {o.name}", msg))
        if A.kind is SymmetryKind.TOTAL_ORDER and not o.sym.is_trivial:
            log.warning("orbit %s: non-trivial local symmetry under the total order symmetry", o.name)
    if defects:
        return defects
    names = {o.name for o in A.states}
    for f in sorted(A.accepting):
        if f not in names:
            defects.append(Defect("BAD_ACCEPTING", f"accepting {f}", "not a state orbit"))
    for r in A.rules:
        where = f"line {r.line}" if r.line else f"delta{r.arity} rule"
        if r.otherwise:
            if r.target.orbit.degree != 0:
                defects.append(Defect("BAD_OTHERWISE", where, "otherwise must target a degree-0 state"))
            continue
        if not A.alphabet.contains(r.label):
            defects.append(Defect("BAD_RULE", where, f"label {r.label} is not in the alphabet"))
        for q in list(r.args) + [r.target]:
            if q is not WILD and not A.states.contains(q):
                defects.append(Defect("BAD_RULE", where, f"{q} is not a state"))
        if not set(r.target.witness) <= support(r.lhs()):
            defects.append(Defect("NOT_EQUIVARIANT", where,
                                  f"target {r.target} uses atoms outside the rule input"))
    if defects:
        return defects

    table = []
    for k in range(A.max_arity + 1):
        rules = A.rules_of(k)
        index = _rule_matcher(rules, A.kind)
        fallback = next((r for r in rules if r.otherwise), None)
        tk = {}
        for combo in _lhs_orbits(A, k):
            x = combo.values
            outs: dict = {}
            for rule, out in _matches(index, x, A.kind):
                outs.setdefault(out, []).append(rule)
            if not outs:
                if fallback is None:
                    defects.append(Defect("UNCOVERED", f"delta{k} orbit of {_fmt_tuple(x)}",
                                          "no rule covers this orbit"))
                    continue
                tk[x] = fallback.target
                continue
            if len(outs) > 1:
                rules_hit = {id(r): r for rs in outs.values() for r in rs}
                shown = ", ".join(sorted(str(o) for o in outs))
                if len(rules_hit) == 1:
                    defects.append(Defect("NOT_EQUIVARIANT", f"delta{k} orbit of {_fmt_tuple(x)}",
                                          f"one rule yields several targets {shown} under the input's symmetry"))
                else:
                    lines = sorted(r.line or 0 for r in rules_hit.values())
                    lhss = {r.lhs() for r in rules_hit.values()}
                    # distinct instances of one lhs orbit: the rule set is not closed under G
                    same_orbit_only = len(lhss) > 1 and len({canonical(l, A.kind)[0] for l in lhss}) == 1
                    code = "NOT_EQUIVARIANT" if same_orbit_only else "CONFLICT"
                    what = "rule pair instances of one orbit disagree" if same_orbit_only else "rules disagree"
                    defects.append(Defect(code, f"delta{k} orbit of {_fmt_tuple(x)}",
                                          f"{what} (lines {lines}): {shown}"))
                continue
            tk[x] = next(iter(outs))
        table.append(tk)
    if not defects:
        A._table = table
    return defects


# ---------------------------------------------------------------------------
# running


def run(A: DBNTA, t: Tree) -> RunResult:
    A.compile()

    def ev(s):
        if s is HOLE or not isinstance(s, Tree):
            raise AutomatonError("MALFORMED_TREE", "contexts cannot be run")
        if s.arity > A.max_arity:
            raise AutomatonError("MALFORMED_TREE", f"arity {s.arity} exceeds {A.max_arity}")
        if not A.alphabet.contains(s.label):
            raise AutomatonError("MALFORMED_TREE", f"label {s.label} not in the alphabet")
        return A.step(s.label, [ev(c) for c in s.children])

    q = ev(t)
    return RunResult(q, A.is_accepting(q))


def accepts(A: DBNTA, t: Tree) -> bool:
    return run(A, t).accepted


# ---------------------------------------------------------------------------
# closures: reachability and equivalence


def _transport_tree(tree, pi, kind):
    return act(tree, extend_map(pi, support(tree), kind))


def _explore(automata: Sequence[DBNTA], stop=None):
    """Reachable orbits of joint states, each with a witness tree.

    Values are tuples with one state per automaton.  Works in rounds: round
    ``r`` only combines values found before it, so each orbit's witness has
    minimal depth.  ``stop(value)`` may end the search after a round.
    """
    first = automata[0]
    kind, m = first.kind, first.max_arity
    labels = first.alphabet.reps()
    reached: dict = {}
    order: list = []

    def add(vals, tree, bucket):
        cz, sigma = canonical(vals, kind)
        if cz in reached:
            return
        tc = _transport_tree(tree, sigma, kind)
        reached[cz] = tc
        bucket.append(cz)

    new: list = []
    for a in labels:
        add(tuple(A.step(a, ()) for A in automata), Tree(a, ()), new)
    while new:
        order.extend(new)
        if stop is not None and any(stop(v) for v in new):
            break
        frontier = set(new)
        snapshot = list(order)
        trees = [reached[v] for v in snapshot]
        new = []
        for k in range(1, m + 1):
            for combo in product_reps([labels] + [snapshot] * k, kind):
                if not any(snapshot[j] in frontier for j in combo.choices[1:]):
                    continue
                a, args = combo.values[0], combo.values[1:]
                kids = [_transport_tree(trees[j], pi, kind)
                        for j, pi in zip(combo.choices[1:], combo.pis[1:])]
                z = tuple(A.step(a, [v[i] for v in args]) for i, A in enumerate(automata))
                add(z, Tree(a, kids), new)
    return reached, order


def reachable(A: DBNTA) -> DBNTA:
    """Restriction of ``A`` to its reachable state orbits, with witness trees."""
    A.compile()
    reached, order = _explore([A])
    names = []
    witnesses = {}
    for v in order:
        q = v[0]
        if q.orbit.name not in witnesses:
            witnesses[q.orbit.name] = reached[v]
            names.append(q.orbit.name)
    keep = [o for o in A.states if o.name in witnesses]
    R = DBNTA(A.kind, A.alphabet, A.max_arity, OrbitFiniteSet(tuple(keep)),
              frozenset(f for f in A.accepting if f in witnesses), [], witnesses)
    R.rules = _rules_from(A, R)
    R.compile()
    return R


def _rules_from(src: DBNTA, dst: DBNTA) -> list[Rule]:
    rules = []
    for k in range(dst.max_arity + 1):
        for combo in _lhs_orbits(dst, k):
            x = combo.values
            rules.append(Rule(k, x[0], tuple(x[1:]), src.step(x[0], x[1:])))
    return rules


def equivalent(A: DBNTA, B: DBNTA):
    """``None`` if ``L(A) = L(B)``, else a least-depth counterexample tree."""
    A.compile()
    B.compile()
    if (A.kind is not B.kind or A.max_arity != B.max_arity
            or [o.name for o in A.alphabet] != [o.name for o in B.alphabet]):
        raise AutomatonError("ALPHABET_MISMATCH", "automata over different alphabets or arities")

    def bad(v):
        return A.is_accepting(v[0]) != B.is_accepting(v[1])

    reached, order = _explore([A, B], stop=bad)
    witnesses = [canonical(reached[v], A.kind)[0] for v in order if bad(v)]
    if not witnesses:
        return None
    depth = min(t.depth() for t in witnesses)
    return min((t for t in witnesses if t.depth() == depth), key=print_term)


# ---------------------------------------------------------------------------
# minimisation


def _pair_relation(R: DBNTA) -> set:
    """Canonical pairs ``(p, q)`` of reachable states with the same language."""
    kind, m = R.kind, R.max_arity
    reps = R.state_reps()
    labels = R.alphabet.reps()
    rel = {c.values for c in product_reps([reps, reps], kind)
           if R.is_accepting(c.values[0]) == R.is_accepting(c.values[1])}

    def stable(pair):
        p, q = pair
        if p == q:
            return True
        for k in range(1, m + 1):
            for combo in product_reps([labels] + [reps] * (k - 1), kind, base=pair):
                a, sibs = combo.values[0], list(combo.values[1:])
                for i in range(k):
                    zp = R.step(a, sibs[:i] + [p] + sibs[i:])
                    zq = R.step(a, sibs[:i] + [q] + sibs[i:])
                    if canonical((zp, zq), kind)[0] not in rel:
                        return False
        return True

    changed = True
    while changed:
        changed = False
        for pair in sorted(rel, key=key):
            if not stable(pair):
                rel.discard(pair)
                changed = True
    return rel


def build_from_quotient(kind, alphabet, m, Q: Quotient, accepting_rep, step) -> DBNTA:
    """Automaton on the class orbits of ``Q``.

    ``accepting_rep(y)`` decides acceptance of a representative value and
    ``step(a, ys)`` returns a value whose class is the successor class.
    """
    states = OrbitFiniteSet(tuple(Q.specs))
    acc = frozenset(c.spec.name for c in Q.classes if accepting_rep(c.rep))
    H = DBNTA(kind, alphabet, m, states, acc, [])
    rules = []
    for k in range(m + 1):
        for combo in _lhs_orbits(H, k):
            a, es = combo.values[0], combo.values[1:]
            avoid = set(support(combo.values))
            ys = []
            for e in es:
                y = Q.section(e, avoid)
                avoid |= support(y)
                ys.append(y)
            rules.append(Rule(k, a, tuple(es), Q.classify(step(a, ys))))
    H.rules = rules
    return H


def minimize(A: DBNTA) -> DBNTA:
    """The syntactic (minimum) automaton of ``L(A)``."""
    R = reachable(A)
    rel = _pair_relation(R)
    kind = R.kind

    def equiv(p, q):
        return canonical((p, q), kind)[0] in rel

    Q = Quotient(kind, equiv, prefix="m")
    for q in R.state_reps():
        Q.add(q)
    M = build_from_quotient(kind, R.alphabet, R.max_arity, Q, R.is_accepting,
                            lambda a, ys: R.step(a, ys))
    M.compile()
    return M


# ---------------------------------------------------------------------------
# file format

_LINE = re.compile(r"^\s*(\S+)\s*(.*?)\s*$")
_SYM = re.compile(r"^orbit\s+|^letter\s+")


class _Vars:
    """Assigns atoms to rule metavariables."""

    def __init__(self, kind, order):
        self.kind = kind
        self.order = order
        self.names: list[str] = []
        self.literals: set = set()

    def note(self, tok):
        if re.fullmatch(r"-?\d+(/\d+)?", tok):
            self.literals.add(parse_atom(tok, self.kind))
        elif tok not in self.names:
            self.names.append(tok)

    def assignments(self, lineno) -> list[dict]:
        if self.kind is SymmetryKind.EQUALITY:
            if self.order:
                raise AutomatonError("SYNTAX", f"line {lineno}: where-clauses need the total-order symmetry")
            base = max(self.literals, default=-1) + 1
            return [{n: base + i for i, n in enumerate(self.names)}]
        if self.names and self.literals:
            raise AutomatonError("SYNTAX", f"line {lineno}: total-order rules use either metavariables or literals")
        for lo, hi in self.order:
            if lo not in self.names or hi not in self.names:
                raise AutomatonError("SYNTAX", f"line {lineno}: where-clause names an unknown metavariable")
        if len(self.names) > 1 and not self.order:
            raise AutomatonError("SYNTAX", f"line {lineno}: total-order rules must order their metavariables")
        exts = _linear_extensions(self.names, self.order)
        if not exts:
            raise AutomatonError("SYNTAX", f"line {lineno}: where-clause is cyclic")
        return [{n: i for i, n in enumerate(ext)} for ext in exts]


def _linear_extensions(names, pairs) -> list[tuple]:
    """Orderings of ``names`` (least first) compatible with every ``lo < hi`` pair."""
    out = []
    for perm in itertools.permutations(names):
        pos = {n: i for i, n in enumerate(perm)}
        if all(pos[lo] < pos[hi] for lo, hi in pairs):
            out.append(perm)
    return out


def _parse_sym(text, degree, lineno):
    m = re.fullmatch(r"\{(.*)\}", text.strip())
    if not m:
        raise AutomatonError("SYNTAX", f"line {lineno}: expected sym {{ ... }}")
    body = m.group(1).strip()
    if not body:
        return LocalSymmetry.trivial(degree)
    perms = []
    for chunk in body.split(";"):
        nums = chunk.split()
        try:
            perms.append(tuple(int(n) for n in nums))
        except ValueError:
            raise AutomatonError("SYNTAX", f"line {lineno}: bad permutation {chunk!r}") from None
    return LocalSymmetry(degree, frozenset(perms))


def _parse_orbit_decl(rest, lineno):
    m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)\s+degree\s+(\d+)\s+sym\s*(\{.*\})", rest)
    if not m:
        raise AutomatonError("SYNTAX", f"line {lineno}: expected NAME degree K sym {{ ... }}")
    name, degree = m.group(1), int(m.group(2))
    if name in ("x", "_", "otherwise", "where"):
        raise AutomatonError("SYNTAX", f"line {lineno}: reserved name {name!r}")
    return OrbitSpec(name, degree, _parse_sym(m.group(3), degree, lineno))


def _split_top(text):
    out, depth, cur = [], 0, []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            out.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    if "".join(cur).strip():
        out.append("".join(cur).strip())
    return out


_ITEM = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*|-?\d+(?:/\d+)?)(?:\[(.*)\])?$")


def parse_automaton(text: str, check: bool = True) -> DBNTA:
    """Parse the line-oriented automaton format; validates unless ``check`` is false."""
    kind = SymmetryKind.EQUALITY
    m = None
    alphabet_mode = None
    letters: list[OrbitSpec] = []
    orbits: list[OrbitSpec] = []
    accepting: list[str] = []
    raw_rules = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        head, rest = _LINE.match(line).groups()
        if head == "symmetry":
            try:
                kind = SymmetryKind.parse(rest)
            except ValueError as e:
                raise AutomatonError("SYNTAX", f"line {lineno}: {e}") from None
        elif head == "max_arity":
            if not rest.isdigit():
                raise AutomatonError("SYNTAX", f"line {lineno}: max_arity needs a number")
            m = int(rest)
        elif head == "alphabet":
            if rest not in ("atoms", "letters"):
                raise AutomatonError("SYNTAX", f"line {lineno}: alphabet is 'atoms' or 'letters'")
            alphabet_mode = rest
        elif head == "letter":
            letters.append(_parse_orbit_decl(rest, lineno))
        elif head == "orbit":
            orbits.append(_parse_orbit_decl(rest, lineno))
        elif head == "accepting":
            accepting.extend(rest.split())
        elif re.fullmatch(r"delta\d+", head):
            raw_rules.append((lineno, int(head[5:]), rest))
        else:
            raise AutomatonError("SYNTAX", f"line {lineno}: unknown directive {head!r}")
    if m is None:
        raise AutomatonError("SYNTAX", "missing max_arity")
    if alphabet_mode is None:
        raise AutomatonError("SYNTAX", "missing alphabet")
    if alphabet_mode == "atoms":
        if letters:
            raise AutomatonError("SYNTAX", "letter declarations need 'alphabet letters'")
        alphabet = OrbitFiniteSet((ATOM_ORBIT,))
    else:
        if not letters:
            raise AutomatonError("SYNTAX", "'alphabet letters' needs letter declarations")
        alphabet = OrbitFiniteSet(tuple(letters))
    states = OrbitFiniteSet(tuple(orbits))
    rules = [r for lineno, k, rest in raw_rules for r in _parse_rule(lineno, k, rest, kind, alphabet, states, m)]
    A = DBNTA(kind, alphabet, m, states, frozenset(accepting), rules)
    if check:
        defects = validate(A)
        if defects:
            raise AutomatonError("INVALID", "; ".join(map(str, defects[:5])), defects)
    return A


def _parse_rule(lineno, k, rest, kind, alphabet, states, m):
    if k > m:
        raise AutomatonError("SYNTAX", f"line {lineno}: delta{k} exceeds max_arity {m}")
    if "->" not in rest:
        raise AutomatonError("SYNTAX", f"line {lineno}: rule needs '->'")
    lhs, rhs = rest.split("->", 1)
    order = []
    if " where " in f" {rhs} ":
        rhs, where = re.split(r"\bwhere\b", rhs, maxsplit=1)
        for clause in where.split(","):
            parts = [p.strip() for p in clause.split("<")]
            if len(parts) < 2 or not all(parts):
                raise AutomatonError("SYNTAX", f"line {lineno}: bad where clause {clause!r}")
            order.extend(zip(parts, parts[1:]))
    lhs, rhs = lhs.strip(), rhs.strip()
    if lhs == "otherwise":
        return [Rule(k, None, (), _state_item(rhs, {}, states, kind, lineno), lineno)]
    items = _split_top(lhs)
    if len(items) != k + 1:
        raise AutomatonError("SYNTAX", f"line {lineno}: delta{k} needs a label and {k} states")
    vars_ = _Vars(kind, order)
    for it in items + [rhs]:
        mm = _ITEM.match(it)
        if not mm:
            if it != "_":
                raise AutomatonError("SYNTAX", f"line {lineno}: bad item {it!r}")
            continue
        if alphabet.get("atom") is ATOM_ORBIT and it is items[0] and mm.group(2) is None:
            vars_.note(mm.group(1))
        if mm.group(2) is not None:
            for a in _split_top(mm.group(2)):
                vars_.note(a)
    out = []
    for env in vars_.assignments(lineno):
        label = _label_item(items[0], env, alphabet, kind, lineno)
        args = tuple(_state_item(it, env, states, kind, lineno) for it in items[1:])
        target = _state_item(rhs, env, states, kind, lineno)
        if target is WILD:
            raise AutomatonError("SYNTAX", f"line {lineno}: '_' cannot be a target")
        out.append(Rule(k, label, args, target, lineno))
    return out


def _atom(tok, env, kind, lineno):
    if tok in env:
        return env[tok]
    try:
        return parse_atom(tok, kind)
    except ValueError as e:
        raise AutomatonError("SYNTAX", f"line {lineno}: {e}") from None


def _make(orbit: OrbitSpec, atoms, kind, lineno):
    if len(atoms) != orbit.degree:
        raise AutomatonError("SYNTAX", f"line {lineno}: {orbit.name} takes {orbit.degree} atoms")
    if not extends_to_G(dict(enumerate(atoms)), kind):
        raise AutomatonError("SYNTAX", f"line {lineno}: {orbit.name}{list(atoms)} is not an admissible witness")
    try:
        return orbit.element(atoms)
    except NominalError as e:
        raise AutomatonError("SYNTAX", f"line {lineno}: {e}") from None


def _label_item(it, env, alphabet, kind, lineno):
    mm = _ITEM.match(it)
    if not mm:
        raise AutomatonError("SYNTAX", f"line {lineno}: bad label {it!r}")
    name, args = mm.group(1), mm.group(2)
    bare = alphabet.get("atom")
    if bare is ATOM_ORBIT and args is None:
        return _make(bare, (_atom(name, env, kind, lineno),), kind, lineno)
    orbit = alphabet.get(name)
    if orbit is None:
        raise AutomatonError("SYNTAX", f"line {lineno}: unknown letter {name!r}")
    atoms = tuple(_atom(a, env, kind, lineno) for a in _split_top(args)) if args else ()
    return _make(orbit, atoms, kind, lineno)


def _state_item(it, env, states, kind, lineno):
    if it == "_":
        return WILD
    mm = _ITEM.match(it)
    if not mm:
        raise AutomatonError("SYNTAX", f"line {lineno}: bad state {it!r}")
    orbit = states.get(mm.group(1))
    if orbit is None:
        raise AutomatonError("SYNTAX", f"line {lineno}: unknown state orbit {mm.group(1)!r}")
    atoms = tuple(_atom(a, env, kind, lineno) for a in _split_top(mm.group(2))) if mm.group(2) else ()
    return _make(orbit, atoms, kind, lineno)


_METAVARS = "defghijklmnopqrstuvwyz"


def _metavar_text(values: tuple, kind: SymmetryKind) -> tuple[list[str], str]:
    """Render canonical values with metavariables; returns (items, where-suffix)."""
    atoms = sorted(support(values))
    if len(atoms) > len(_METAVARS):
        return [str(v) for v in values], ""
    names = {a: _METAVARS[i] for i, a in enumerate(atoms)}
    items = [_render(v, names) for v in values]
    where = ""
    if kind is SymmetryKind.TOTAL_ORDER and len(atoms) > 1:
        where = " where " + " < ".join(names[a] for a in atoms)
    return items, where


def _render(v, names) -> str:
    if v is WILD:
        return "_"
    if v.orbit.bare:
        return names[v.witness[0]]
    if not v.witness:
        return v.orbit.name
    return f"{v.orbit.name}[{','.join(names[a] for a in v.witness)}]"


def serialize(A: DBNTA) -> str:
    """Text in the automaton file format; transitions are listed per input orbit."""
    A.compile()
    lines = [f"symmetry {A.kind.value}", f"max_arity {A.max_arity}"]
    if A.alphabet.get("atom") is ATOM_ORBIT:
        lines.append("alphabet atoms")
    else:
        lines.append("alphabet letters")
        lines.extend("letter " + o.describe()[len("orbit "):] for o in A.alphabet)
    lines.extend(o.describe() for o in A.states)
    lines.append(("accepting " + " ".join(o.name for o in A.states if o.name in A.accepting)).rstrip())
    for k in range(A.max_arity + 1):
        entries = sorted(A._table[k].items(), key=lambda kv: key(kv[0]))
        counts: dict = {}
        for _, out in entries:
            if out.orbit.degree == 0:
                counts[out] = counts.get(out, 0) + 1
        default = max(counts, key=lambda q: (counts[q], q.orbit.name), default=None)
        if default is not None and counts[default] < 2:
            default = None
        for x, out in entries:
            if out == default:
                continue
            items, where = _metavar_text(x + (out,), A.kind)
            lines.append(f"delta{k} " + ", ".join(items[:-1]) + f" -> {items[-1]}{where}")
        if default is not None:
            lines.append(f"delta{k} otherwise -> {default}")
    return "\n".join(lines) + "\n"


def orbit_inventory(A: DBNTA) -> list[tuple[str, int, int, bool]]:
    return [(o.name, o.degree, o.sym.order, o.name in A.accepting) for o in A.states]


def load(path) -> DBNTA:
    with open(path) as fh:
        return parse_automaton(fh.read())
