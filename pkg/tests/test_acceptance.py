"""Acceptance criteria 1-8, each printing one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v``; the criterion lines are
printed even when output capturing is on.
"""

from __future__ import annotations

import functools
from collections import Counter
import itertools
import random
from pathlib import Path

import pytest

import brute
from helpers import random_context, random_group_element, random_tree
from nomtree import cli
from nomtree.automaton import AutomatonError, equivalent, minimize, parse_automaton, run
from nomtree.generate import random_automaton
from nomtree.learner import learn
from nomtree.nominal import (
    ATOM_ORBIT,
    LocalSymmetry,
    OrbitFiniteSet,
    OrbitSpec,
    chain_cap,
    element_eq,
    format_measure,
    least_support,
    make_equivariant_map,
    measure,
    orbit_leq,
    orbits_isomorphic,
    product_orbits,
    set_compare,
    sets_isomorphic,
    us_equals_tu,
)
from nomtree.symmetry import SymmetryKind, admissible_injections
from nomtree.teacher import Teacher
from nomtree.trees import HOLE, Tree, next_orbits, parse_term, print_term, substitute

EQ, TO = SymmetryKind.EQUALITY, SymmetryKind.TOTAL_ORDER
DATA = Path(cli.resolve("ddd.aut")).parent
MUTANTS = Path(__file__).parent / "mutants"
RANDOM_TARGETS = 25


def report(capsys, n: int, failures: list, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if not failures else 'FAIL'} {detail}"
    with capsys.disabled():
        print("\n" + line)
        for f in failures[:10]:
            print("    " + str(f))
    assert not failures, line


def load(name: str):
    return parse_automaton((DATA / name).read_text())


# ---------------------------------------------------------------------------
# shared runs


@functools.cache
def learned(name: str):
    A = load(name)
    teacher = Teacher(A)
    H, runlog = learn(teacher)
    return A, H, runlog, teacher


@functools.cache
def random_runs() -> tuple:
    """25 learning runs on random targets with a non-trivial minimal automaton,
    alternating the two symmetries."""
    out, seed = [], 0
    while len(out) < RANDOM_TARGETS:
        kind = EQ if len(out) % 2 == 0 else TO
        A = random_automaton(random.Random(1000 + seed), kind, max_arity=1)
        seed += 1
        if len(minimize(A).states) < 2:
            continue
        teacher = Teacher(A)
        H, runlog = learn(teacher)
        out.append((f"random-{seed - 1}-{kind.value}", A, H, runlog))
    return tuple(out)


def all_runs():
    named = [(n, *learned(n)[:3]) for n in ("u-depth3.aut", "ddd.aut")]
    return named + list(random_runs())


# ---------------------------------------------------------------------------
# 1. golden membership bits


def test_criterion_1_golden_bits(capsys):
    teacher = Teacher(load("u-depth3.aut"))
    a, b = 0, 1
    T = lambda text: teacher.membership(parse_term(text, teacher.alphabet, EQ))  # noqa: E731
    expected = {
        f"{a}": 1, f"{a}({b})": 0, f"{a}({a})": 1,
        f"{a}({a},{a})": 0, f"{a}({a},{b})": 0, f"{a}({b},{a})": 0, f"{a}({b},{b})": 0,
        f"{a}({a}({a}))": 1,
    }
    failures = [f"T({t}) = {T(t)}, expected {v}" for t, v in expected.items() if T(t) != v]
    # the c(x) column, for every c in a four-atom universe
    for c in range(4):
        cx = lambda s: f"{c}({s})"  # noqa: E731
        rows = {f"{a}": int(c == a), f"{a}({a})": int(c == a), f"{a}({b})": 0, f"{a}({a}({a}))": 0,
                f"{a}({a},{a})": 0, f"{a}({a},{b})": 0, f"{a}({b},{a})": 0, f"{a}({b},{b})": 0}
        failures += [f"T({cx(s)}) = {T(cx(s))}, expected {v}" for s, v in rows.items() if T(cx(s)) != v]
    # every other Next(S3) row reads 0 under both contexts
    S3 = [parse_term(t, teacher.alphabet, EQ) for t in (f"{a}", f"{a}({b})", f"{a}({a}({a}))")]
    listed = {f"{a}({a})", f"{a}({a},{a})", f"{a}({a},{b})", f"{a}({b},{a})", f"{a}({b},{b})"}
    others = [o.rep for o in next_orbits(S3, teacher.alphabet, 2, EQ) if print_term(o.rep) not in listed]
    c_ctx = Tree(ATOM_ORBIT.element((7,)), (HOLE,))
    for t in others:
        for c in (c_ctx,) + tuple(Tree(ATOM_ORBIT.element((x,)), (HOLE,)) for x in sorted(set(t.atoms()))):
            if teacher.membership(t) or teacher.membership(substitute(c, t)):
                failures.append(f"'others' row {print_term(t)} has a 1")
    report(capsys, 1, failures, f"{len(expected) + 32} printed entries and {len(others)} 'others' rows match")


# ---------------------------------------------------------------------------
# 2. end-to-end learning of U


def in_U(t: Tree) -> bool:
    """Literal definition: a chain of one to three nodes all carrying the same atom."""
    labels = []
    node = t
    while True:
        labels.append(node.label.witness[0])
        if not node.children:
            break
        if len(node.children) != 1:
            return False
        node = node.children[0]
    return len(labels) <= 3 and len(set(labels)) == 1


def u_summary(a, kids: tuple):
    """The part of a tree that decides membership in U, computed from its children's."""
    if not kids:
        return ("chain", 1, a)
    if len(kids) == 1 and kids[0][0] == "chain" and kids[0][2] == a and kids[0][1] < 3:
        return ("chain", kids[0][1] + 1, a)
    return ("other",)


def all_trees(atoms, m: int, depth: int) -> list:
    if depth < 0:
        return []
    smaller = all_trees(atoms, m, depth - 1)
    out = []
    for a in atoms:
        lab = ATOM_ORBIT.element((a,))
        out.append(Tree(lab, ()))
        for k in range(1, m + 1):
            for kids in itertools.product(smaller, repeat=k):
                out.append(Tree(lab, kids))
    return out


def test_criterion_2_learn_U(capsys, tmp_path):
    out = tmp_path / "learned.aut"
    code = cli.main(["learn", "u-depth3.aut", "-o", str(out), "--log", str(tmp_path / "log.txt")])
    failures = [] if code == 0 else [f"learn exited {code}"]
    ref = load("u-depth3.aut")
    H = parse_automaton(out.read_text())
    cex = equivalent(ref, H)
    if cex is not None:
        failures.append(f"learned automaton differs on {print_term(cex)}")
    atoms = [0, 1, 2, 3]

    # literal enumeration of every tree of depth <= 2, against the definition
    small = all_trees(atoms, 2, 2)
    for t in small:
        if run(H, t).accepted != in_U(t):
            failures.append(f"depth<=2 tree {print_term(t)}")
        if (_summary(t)[0] == "chain") != in_U(t):
            failures.append(f"summary disagrees with the definition at {print_term(t)}")

    # every tree of depth <= 4, grouped by (state of H, summary) with multiplicities
    groups: dict = {}
    for d in range(5):
        nxt: dict = {}
        for a in atoms:
            lab = ATOM_ORBIT.element((a,))
            key0 = (H.step(lab, ()), u_summary(a, ()))
            nxt[key0] = nxt.get(key0, 0) + 1
            for k in range(1, 3):
                for kids in itertools.product(groups.items(), repeat=k):
                    state = H.step(lab, tuple(g[0][0] for g in kids))
                    summ = u_summary(a, tuple(g[0][1] for g in kids))
                    n = 1
                    for g in kids:
                        n *= g[1]
                    nxt[(state, summ)] = nxt.get((state, summ), 0) + n
        groups = nxt
    total = sum(groups.values())
    n_expected = 0
    for _ in range(5):
        n_expected = 4 * (1 + n_expected + n_expected ** 2)
    if total != n_expected:
        failures.append(f"grouped enumeration covers {total} trees, expected {n_expected}")
    for (state, summ), n in groups.items():
        if H.is_accepting(state) != (summ[0] == "chain"):
            failures.append(f"{n} trees with summary {summ} end in {state}")
    report(capsys, 2, failures,
           f"equivalent to the reference; {len(small)} trees checked literally, all {total} trees of depth <= 4 by group")


def _summary(t: Tree):
    return u_summary(t.label.witness[0], tuple(_summary(c) for c in t.children))


# ---------------------------------------------------------------------------
# 3. end-to-end learning of {d(d,d)}


def test_criterion_3_learn_ddd(capsys, tmp_path):
    out = tmp_path / "ddd-learned.aut"
    failures = []
    if cli.main(["learn", "ddd.aut", "-o", str(out), "--log", str(tmp_path / "log.txt")]) != 0:
        failures.append("learn failed")
    ref = load("ddd.aut")
    H = parse_automaton(out.read_text())
    M = minimize(ref)
    pairing = sets_isomorphic(H.states, M.states, EQ)
    shown = ""
    if pairing is None:
        failures.append(f"{format_measure(measure(H.states))} is not isomorphic to {format_measure(measure(M.states))}")
    else:
        for hname, (mname, u) in pairing.items():
            ho, mo = H.states.get(hname), M.states.get(mname)
            if not us_equals_tu(u, mo.sym, ho.sym):
                failures.append(f"witness {u} for {hname} -> {mname} fails uS = Tu")
        shown = ", ".join(f"{h}->{m} u={dict(u)}" for h, (m, u) in sorted(pairing.items()))
    if equivalent(ref, H) is not None:
        failures.append("learned automaton is not equivalent to the reference")
    report(capsys, 3, failures, f"orbit-wise isomorphic to the minimal automaton: {shown}")


# ---------------------------------------------------------------------------
# 4-5. guard and minimality over all runs


def test_criterion_4_strict_growth_and_cap(capsys):
    failures, total = [], 0
    for name, A, H, runlog in all_runs():
        cap = chain_cap(minimize(A).states)
        total += runlog.extensions
        for ev in runlog.events:
            if not ev.strict:
                failures.append(f"{name}: non-strict {ev}")
        if runlog.extensions > cap:
            failures.append(f"{name}: {runlog.extensions} extensions exceed the cap {cap}")
    lax = Counter(ev.kind for _, _, _, runlog in all_runs() for ev in runlog.events if not ev.strict)
    detail = f"{len(all_runs())} runs, {total} extensions; non-strict by event kind: {dict(lax) or 'none'}"
    report(capsys, 4, failures, detail)


def test_criterion_5_minimality(capsys):
    failures, count = [], 0
    for name, A, H, runlog in all_runs():
        M = minimize(A)
        for i, (Hi, _) in enumerate(runlog.hypotheses):
            count += 1
            rel = set_compare(Hi.states, M.states, A.kind)
            if rel not in ("isomorphic", "strictly_below"):
                failures.append(f"{name}: hypothesis {i} is {rel}")
        final = set_compare(H.states, M.states, A.kind)
        if final != "isomorphic":
            failures.append(f"{name}: final hypothesis is {final}")
    report(capsys, 5, failures, f"{count} hypotheses below or isomorphic to the minimal automaton, finals isomorphic")


# ---------------------------------------------------------------------------
# 6. nominal operations against brute force


def generated_specs():
    specs = []
    for d in range(4):
        for i, sub in enumerate(brute.subgroups(d)):
            specs.append((EQ, OrbitSpec(f"e{d}_{i}", d, LocalSymmetry(d, sub))))
        specs.append((TO, OrbitSpec(f"t{d}", d)))
    return specs


def test_criterion_6_nominal_oracle(capsys):
    rng = random.Random(6)
    failures, checks = [], 0
    specs = generated_specs()
    for kind, X in specs:
        G = brute.group(kind)
        elems = [X.element(w) for w in _witnesses(X, kind)]
        for x in elems:
            bx = brute.from_element(x)
            checks += 1
            if set(least_support(x)) != brute.least_support(bx, kind):
                failures.append(f"least_support {x}")
            for g in rng.sample(G, 12):
                checks += 1
                if brute.from_element(x.act(g)) != brute.act(bx, g):
                    failures.append(f"act {x} by {g}")
            for y in rng.sample(elems, min(6, len(elems))):
                g = rng.choice(G)
                checks += 1
                by = brute.from_element(y)
                if element_eq(x.act(g), y) != (brute.act(bx, g) == by):
                    failures.append(f"element_eq {x}.{g} vs {y}")
    for (k1, X), (k2, Y) in itertools.product(specs, repeat=2):
        if k1 is not k2:
            continue
        checks += 2
        if (orbits_isomorphic(X, Y, k1) is not None) != brute.isomorphic(X, Y, k1):
            failures.append(f"orbits_isomorphic {X.name} {Y.name}")
        u = orbit_leq(Y, X, k1)
        if (u is not None) != brute.below(Y, X, k1):
            failures.append(f"orbit_leq {Y.name} <= {X.name}")
        if u is not None:
            f = make_equivariant_map([(X, Y, u)], k1)
            x0 = X.canonical_element()
            if not brute.stab(brute.from_element(x0), k1) <= brute.stab(brute.from_element(f(x0)), k1):
                failures.append(f"orbit_leq witness {u} for {Y.name} <= {X.name}")
        if X.degree + Y.degree <= 5:
            checks += 1
            failures += _check_product(X, Y, k1)
    report(capsys, 6, failures, f"{checks} checks over {len(specs)} orbit specs agree with brute force")


def _witnesses(X, kind):
    return [w for w in itertools.permutations(brute.UNIVERSE, X.degree)
            if kind is EQ or list(w) == sorted(w)]


def _check_product(X, Y, kind) -> list:
    P, px, py, reps = product_orbits(OrbitFiniteSet((X,)), OrbitFiniteSet((Y,)), kind)
    out = []
    if len(P) != brute.product_orbit_count(X, Y, kind):
        out.append(f"product {X.name} x {Y.name}: {len(P)} orbits")
    for o in P:
        x, y = reps[o.name]
        e = o.canonical_element()
        pair = (brute.from_element(x), brute.from_element(y))
        if brute.stab(pair, kind) != brute.stab(brute.from_element(e), kind):
            out.append(f"product orbit {o.name}: local symmetry")
        if not (element_eq(px(e), x) and element_eq(py(e), y)):
            out.append(f"product orbit {o.name}: projections")
    return out


# ---------------------------------------------------------------------------
# 7. equivariance battery


def _random_maps(rng, kind, n):
    """Random well-defined equivariant maps between generated orbit specs."""
    specs = [X for k, X in generated_specs() if k is kind]
    made = []
    while len(made) < n:
        X, Y = rng.choice(specs), rng.choice(specs)
        cands = list(admissible_injections(range(Y.degree), range(X.degree), kind))
        rng.shuffle(cands)
        for u in cands:
            try:
                made.append((X, make_equivariant_map([(X, Y, u)], kind)))
                break
            except ValueError:
                continue
    return made


def test_criterion_7_equivariance(capsys):
    rng = random.Random(7)
    failures = []
    counts = dict.fromkeys(("map", "substitution", "run", "membership"), 0)
    automata = [load(n) for n in ("ddd.aut", "u-depth3.aut", "increasing.aut")]
    automata += [random_automaton(random.Random(s), EQ if s % 2 else TO) for s in range(4)]
    for kind in (EQ, TO):
        for X, f in _random_maps(rng, kind, 500):
            w = rng.choice(_witnesses(X, kind)) if X.degree else ()
            x = X.element(w)
            pi = random_group_element(rng, w, kind)
            counts["map"] += 1
            if f(x.act(pi)) != f(x).act(pi):
                failures.append(f"map {f} at {x} by {pi}")
    for i in range(1000):
        A = automata[i % len(automata)]
        atoms = [0, 1, 2, 3]
        t = random_tree(rng, atoms, A.max_arity, 3)
        c = random_context(rng, atoms, A.max_arity, 3)
        pi = random_group_element(rng, set(t.atoms()) | set(c.atoms()), A.kind)
        counts["substitution"] += 1
        if substitute(c, t).act(pi) != substitute(c.act(pi), t.act(pi)):
            failures.append(f"substitution {print_term(c)}[{print_term(t)}]")
        pi_t = {a: pi[a] for a in t.atoms()}
        r, r_moved = run(A, t), run(A, t.act(pi_t))
        counts["run"] += 1
        if r_moved.state != r.state.act(pi_t) or r_moved.accepted != r.accepted:
            failures.append(f"run {print_term(t)} by {pi_t}")
        teacher = Teacher(A)
        counts["membership"] += 1
        if teacher.membership(t) != teacher.membership(t.act(pi_t)):
            failures.append(f"membership {print_term(t)}")
    report(capsys, 7, failures, ", ".join(f"{k} {v}" for k, v in counts.items()))


# ---------------------------------------------------------------------------
# 8. validator sensitivity

MUTANT_DEFECTS = {
    "01-ddd-no-otherwise.aut": ("UNCOVERED", "delta2 orbit of (0, val[0], val[1])"),
    "02-u-no-unary-otherwise.aut": ("UNCOVERED", "delta1 orbit of (0, one[1])"),
    "03-increasing-no-binary-otherwise.aut": ("UNCOVERED", "delta2 orbit of (0, leaf[0], leaf[0])"),
    "04-ddd-two-targets.aut": ("CONFLICT", "delta2 orbit of (0, val[0], val[0])"),
    "05-u-two-targets.aut": ("CONFLICT", "delta1 orbit of (0, one[0])"),
    "06-increasing-two-targets.aut": ("CONFLICT", "delta1 orbit of (0, leaf[1])"),
    "07-ddd-sym-without-identity.aut": ("BAD_SYM", "orbit pair"),
    "08-u-sym-not-closed.aut": ("BAD_SYM", "orbit triple"),
    "09-u-literal-rules-disagree.aut": ("NOT_EQUIVARIANT", "delta1 orbit of (0, one[0])"),
    "10-increasing-literal-rules-disagree.aut": ("NOT_EQUIVARIANT", "delta0 orbit of (0)"),
}


def test_criterion_8_validator(capsys):
    failures = []
    files = sorted(MUTANTS.glob("*.aut"))
    if len(files) != len(MUTANT_DEFECTS):
        failures.append(f"expected {len(MUTANT_DEFECTS)} mutants, found {len(files)}")
    for path in files:
        code, where = MUTANT_DEFECTS[path.name]
        try:
            parse_automaton(path.read_text())
        except AutomatonError as e:
            if not any(d.code == code and d.where == where for d in e.defects):
                failures.append(f"{path.name}: no {code} at {where}; got {[str(d) for d in e.defects[:3]]}")
            continue
        failures.append(f"{path.name}: accepted")
    report(capsys, 8, failures, f"{len(files)} mutated automata rejected with the offending orbit named")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
