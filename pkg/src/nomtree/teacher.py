"""An exact teacher answering membership and equivalence queries from a hidden automaton."""

from __future__ import annotations

from typing import NamedTuple, TextIO

from nomtree.automaton import DBNTA, equivalent, run
from nomtree.nominal import canonical
from nomtree.trees import print_term


class TeacherStats(NamedTuple):
    membership_distinct: int
    membership_total: int
    equivalence: int

    def __str__(self) -> str:
        return f"membership {self.membership_distinct}/{self.membership_total}, equivalence {self.equivalence}"


class Teacher:
    def __init__(self, reference: DBNTA, trace: TextIO | None = None):
        self._reference = reference.compile()
        self._cache: dict = {}
        self._total = 0
        self._equiv = 0
        self._trace = trace

    @property
    def alphabet(self):
        return self._reference.alphabet

    @property
    def max_arity(self) -> int:
        return self._reference.max_arity

    @property
    def kind(self):
        return self._reference.kind

    def membership(self, t) -> int:
        self._total += 1
        cv = canonical(t, self.kind)[0]
        bit = self._cache.get(cv)
        if bit is None:
            bit = int(run(self._reference, cv).accepted)
            self._cache[cv] = bit
            if self._trace is not None:
                self._trace.write(f"M {print_term(cv)} {bit}\n")
        return bit

    def equivalence(self, H: DBNTA):
        """``None`` for yes, otherwise a counterexample tree."""
        self._equiv += 1
        cex = equivalent(self._reference, H)
        if self._trace is not None:
            self._trace.write("E yes\n" if cex is None else f"E {print_term(cex)}\n")
        return cex

    def stats(self) -> TeacherStats:
        return TeacherStats(len(self._cache), self._total, self._equiv)
