"""Active learning of nominal tree automata with an observation table.

The table keeps orbit representatives only: ``S`` holds canonical trees, ``E``
canonical one-hole contexts, and ``T`` maps canonical filled trees ``e[s]`` to
membership bits.  Rows are never materialised.  Two trees have equal rows when
every context instance built over their joint support (plus fresh atoms) gives
the same bit, which is enough because ``T`` is equivariant.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field

from nomtree.automaton import DBNTA, build_from_quotient, validate
from nomtree.nominal import (
    Quotient,
    act,
    canonical,
    class_least_support,
    format_measure,
    instances_relative,
    measure,
    product_reps,
    set_compare,
    support,
)
from nomtree.symmetry import admissible_bijections, extend_map
from nomtree.trees import HOLE, Tree, next_orbits, print_term, substitute, subtrees

log = logging.getLogger(__name__)


class GuardViolation(RuntimeError):
    """The row measure failed to grow strictly at a table extension."""


class LearnerError(RuntimeError):
    pass


@dataclass
class RowSignature:
    """Bits of ``row(s)`` per context orbit and alignment, with the row's least support."""

    tree: object
    bits: dict  # context instance over supp(s) + fresh atoms -> bit
    least: tuple


@dataclass
class Event:
    kind: str  # consistency | closedness | counterexample
    added: str
    measure: Counter
    strict: bool

    def __str__(self) -> str:
        return f"EXTEND {self.kind} added={self.added} measure={format_measure(self.measure)}"


@dataclass
class RunLog:
    events: list = field(default_factory=list)
    hypotheses: list = field(default_factory=list)  # (DBNTA, counterexample or None)
    lines: list = field(default_factory=list)
    snapshots: list = field(default_factory=list)

    @property
    def extensions(self) -> int:
        return len(self.events)

    def text(self) -> str:
        return "".join(line + "\n" for line in self.lines)


@dataclass
class _RowOrbit:
    least: tuple  # least support of the row of a canonical tree
    vectors: dict  # alignment of ``least`` -> bit vector


class ObservationTable:
    def __init__(self, teacher, dump: bool = False):
        self.teacher = teacher
        self.kind = teacher.kind
        self.alphabet = teacher.alphabet
        self.m = teacher.max_arity
        self.labels = self.alphabet.reps()
        self.S: list = [canonical(Tree(a, ()), self.kind)[0] for a in self.labels]
        self.E: list = [HOLE]
        self.T: dict = {}
        self._rows: dict = {}  # canonical tree -> _RowOrbit
        self._filled: dict = {}  # (context instance, tree) -> bit
        self._next = None
        self._quotient = None

    # -- the answer store -------------------------------------------------

    def bit(self, t) -> int:
        cv = canonical(t, self.kind)[0]
        b = self.T.get(cv)
        if b is None:
            b = self.teacher.membership(cv)
            self.T[cv] = b
        return b

    def filled_bit(self, e, s) -> int:
        """``T(e[s])``."""
        k = (e, s)
        b = self._filled.get(k)
        if b is None:
            b = self._filled[k] = self.bit(substitute(e, s))
        return b

    @property
    def next(self) -> list:
        if self._next is None:
            self._next = [o.rep for o in next_orbits(self.S, self.alphabet, self.m, self.kind)]
        return self._next

    def fill(self) -> None:
        """Query every orbit of ``E[S u Next(S)]`` not yet in ``T``."""
        for s in self.S + self.next:
            base = support(s)
            for e in self.E:
                for inst, _ in instances_relative(base, e, self.kind):
                    self.filled_bit(inst, s)

    def _changed(self, contexts: bool) -> None:
        self._next = None
        self._quotient = None
        if contexts:
            self._rows.clear()

    # -- rows -------------------------------------------------------------

    def row_difference(self, s, t):
        """A context instance separating the rows of ``s`` and ``t``, or ``None``."""
        base = support((s, t))
        for e in self.E:
            for inst, _ in instances_relative(base, e, self.kind):
                if self.filled_bit(inst, s) != self.filled_bit(inst, t):
                    return inst
        return None

    def _rows_equal_direct(self, s, t) -> bool:
        return s == t or self.row_difference(s, t) is None

    def _orbit_row(self, cs) -> _RowOrbit:
        rec = self._rows.get(cs)
        if rec is None:
            least = class_least_support(cs, self._rows_equal_direct, self.kind)
            rec = self._rows[cs] = _RowOrbit(least, {})
        return rec

    def _vector(self, cs, rec: _RowOrbit, tau: tuple) -> tuple:
        """Bits of ``row(cs) . pi`` on contexts over ``{0..n-1}`` and fresh atoms, where
        ``pi`` sends the row's least support onto ``tau``."""
        vec = rec.vectors.get(tau)
        if vec is None:
            pi = extend_map(dict(zip(rec.least, tau)), support(cs), self.kind)
            moved = act(cs, pi)
            base = range(len(tau))
            vec = tuple(self.filled_bit(inst, moved)
                        for e in self.E for inst, _ in instances_relative(base, e, self.kind))
            rec.vectors[tau] = vec
        return vec

    def row_key(self, s) -> tuple:
        """``(least support of row(s), bits of row(s) read on it)``.

        Two trees have equal rows iff their keys are equal.
        """
        cs, kappa = canonical(s, self.kind)
        rec = self._orbit_row(cs)
        back = {v: k for k, v in kappa.items()}
        least = sorted(back[a] for a in rec.least)
        rank = {a: i for i, a in enumerate(least)}
        tau = tuple(rank[back[a]] for a in rec.least)
        return tuple(least), self._vector(cs, rec, tau)

    def rows_equal(self, s, t) -> bool:
        return s == t or self.row_key(s) == self.row_key(t)

    def quotient(self) -> Quotient:
        """Orbits of ``row(S)``, one class orbit per distinct row orbit."""
        if self._quotient is None:
            q = Quotient(self.kind, self.rows_equal, prefix="q")
            for s in self.S:
                q.add(s)
            self._quotient = q
        return self._quotient

    def row_signature(self, s) -> RowSignature:
        bits = {}
        for e in self.E:
            for inst, _ in instances_relative(support(s), e, self.kind):
                bits[inst] = self.bit(substitute(inst, s))
        return RowSignature(s, bits, self.row_key(s)[0])

    def rows_match(self, s, t):
        """A bijection between the rows' least supports carrying row(s) to row(t)."""
        ls = self.row_key(s)[0]
        lt = self.row_key(t)[0]
        if len(ls) != len(lt):
            return None
        for pi in admissible_bijections(ls, lt, self.kind):
            full = _extend_fresh(pi, support(s), support(t), self.kind)
            if self.rows_equal(act(s, full), t):
                return pi
        return None

    # -- closedness and consistency --------------------------------------

    def is_closed(self):
        """``None`` if closed, else the first ``Next(S)`` representative without a matching row."""
        q = self.quotient()
        for t in self.next:
            try:
                q.classify(t)
            except LookupError:
                return t
        return None

    def is_consistent(self):
        """``None`` if consistent, else ``(s1, s2, a, i, siblings, e)``."""
        for combo in product_reps([self.S, self.S], self.kind):
            s1, s2 = combo.values
            if s1 == s2 or not self.rows_equal(s1, s2):
                continue
            for k in range(1, self.m + 1):
                for wrap in product_reps([self.labels] + [self.S] * (k - 1), self.kind, base=(s1, s2)):
                    a, sibs = wrap.values[0], list(wrap.values[1:])
                    for i in range(k):
                        w1 = Tree(a, sibs[:i] + [s1] + sibs[i:])
                        w2 = Tree(a, sibs[:i] + [s2] + sibs[i:])
                        if self.rows_equal(w1, w2):
                            continue
                        e = self.row_difference(w1, w2)
                        if e is not None:
                            return s1, s2, a, i, tuple(sibs), e
        return None

    # -- extensions -------------------------------------------------------

    def add_context(self, c) -> str:
        cv = canonical(c, self.kind)[0]
        if cv in self.E:
            raise LearnerError(f"context orbit {print_term(cv)} is already in E")
        self.E.append(cv)
        self._changed(contexts=True)
        self.fill()
        return print_term(cv)

    def add_tree(self, t) -> bool:
        cv = canonical(t, self.kind)[0]
        if cv in self.S:
            return False
        self.S.append(cv)
        self._changed(contexts=False)
        return True

    def fix_consistency(self, witness) -> str:
        s1, s2, a, i, sibs, e = witness
        c = substitute(e, Tree(a, list(sibs[:i]) + [HOLE] + list(sibs[i:])))
        return self.add_context(c)

    def fix_closedness(self, t) -> str:
        if not self.add_tree(t):
            raise LearnerError(f"{print_term(t)} is already in S")
        self.fill()
        return print_term(canonical(t, self.kind)[0])

    def process_counterexample(self, t) -> str:
        added = []
        for u in reversed(subtrees(t)):
            if self.add_tree(u):
                added.append(print_term(canonical(u, self.kind)[0]))
        if not added:
            raise LearnerError(f"counterexample {print_term(t)} adds nothing to S")
        self.fill()
        return ",".join(added)

    # -- hypothesis -------------------------------------------------------

    def build_hypothesis(self, checked: bool = False) -> DBNTA:
        """The automaton ``A(S, E, T)``; ``checked`` skips re-testing closedness and consistency."""
        if not checked and self.is_consistent() is not None:
            raise LearnerError("TABLE_NOT_CONSISTENT")
        if not checked and self.is_closed() is not None:
            raise LearnerError("TABLE_NOT_CLOSED")
        q = self.quotient()
        H = build_from_quotient(self.kind, self.alphabet, self.m, q,
                                lambda s: self.bit(s) == 1, lambda a, ys: Tree(a, ys))
        defects = validate(H)
        if defects:
            raise LearnerError("hypothesis ill-defined: " + "; ".join(map(str, defects[:3])))
        return H

    def measure(self) -> Counter:
        return measure(self.quotient().specs)

    def row_orbits(self) -> list:
        return list(self.quotient().specs)

    # -- display ----------------------------------------------------------

    def dump(self) -> str:
        """Rows are ``S`` then ``Next(S)`` representatives, columns the ``E`` representatives."""
        cols = [print_term(e) for e in self.E]
        rows = [(print_term(s), s) for s in self.S] + [(print_term(t), t) for t in self.next]
        width = max(len(r) for r, _ in rows)
        out = ["S".ljust(width) + " | " + " | ".join(cols)]
        for n, (name, s) in enumerate(rows):
            if n == len(self.S):
                out.append("-" * width + "-+-")
            cells = []
            for e in self.E:
                insts = instances_relative(support(s), e, self.kind)
                if len(insts) == 1:
                    cells.append(str(self.bit(substitute(insts[0][0], s))))
                else:
                    cells.append(" ".join(f"{print_term(i)}:{self.bit(substitute(i, s))}" for i, _ in insts))
            out.append(name.ljust(width) + " | " + " | ".join(cells))
        return "\n".join(out) + "\n"


def _extend_fresh(pi, atoms, avoid, kind):
    from nomtree.nominal import _extend_avoiding

    return _extend_avoiding(pi, atoms, avoid, kind)


def init_table(teacher) -> ObservationTable:
    tab = ObservationTable(teacher)
    tab.fill()
    return tab


def learn(teacher, max_rounds: int | None = None, dump_tables: bool = False,
          strict_counterexample: bool = False) -> tuple[DBNTA, RunLog]:
    """Run the learner to completion; returns the final hypothesis and its log.

    Every extension must make ``row(S)`` strictly larger.  This is a hard
    check for consistency and closedness steps.  Counterexample steps only
    need to keep ``row(S)`` from shrinking, unless ``strict_counterexample``
    is set; whether they grew is recorded in the log either way.
    """
    tab = init_table(teacher)
    runlog = RunLog()

    def snapshot():
        if dump_tables:
            runlog.snapshots.append(tab.dump())

    def extend(kind, action):
        before = tab.row_orbits()
        added = action()
        after = tab.row_orbits()
        rel = set_compare(before, after, tab.kind)
        strict = rel == "strictly_below"
        ev = Event(kind, added, measure(after), strict)
        runlog.events.append(ev)
        runlog.lines.append(str(ev))
        log.info("%s", ev)
        snapshot()
        ok = strict or (kind == "counterexample" and not strict_counterexample and rel == "isomorphic")
        if not ok:
            raise GuardViolation(
                f"{kind} extension adding {added}: row(S) went from {format_measure(measure(before))} "
                f"to {format_measure(measure(after))} ({rel})")

    snapshot()
    rounds = 0
    while True:
        while True:
            w = tab.is_consistent()
            if w is not None:
                extend("consistency", lambda: tab.fix_consistency(w))
            t = tab.is_closed()
            if t is not None:
                extend("closedness", lambda: tab.fix_closedness(t))
            if w is None and t is None:
                break
        H = tab.build_hypothesis(checked=True)
        cex = teacher.equivalence(H)
        runlog.hypotheses.append((H, cex))
        line = f"HYPOTHESIS orbits={len(H.states)} result=" + ("yes" if cex is None else f"cex {print_term(cex)}")
        runlog.lines.append(line)
        log.info("%s", line)
        if cex is None:
            return H, runlog
        rounds += 1
        if max_rounds is not None and rounds > max_rounds:
            raise LearnerError(f"no convergence after {max_rounds} equivalence queries")
        extend("counterexample", lambda: tab.process_counterexample(cex))
