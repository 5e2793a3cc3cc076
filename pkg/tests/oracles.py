"""Random knowledge-base generators and brute-force oracles for the tests.

Nothing here calls the production normalizer or ``subsumes``.  The subsumption
oracle unfolds concept names into atom lists and checks each atom of the
subsumer for entailment by the subsumee directly; placement and individual
classification are derived from it by all-pairs scans.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from itertools import combinations

from termlex.kr import (
    BOTTOM,
    TOP,
    All,
    And,
    AtLeast,
    AtMost,
    ConceptDefinition,
    Fills,
    ForwardRule,
    KnowledgeBase,
    Prim,
    Ref,
    Test,
)

FUNCTIONAL = ("f", "g")
MULTI = ("m", "n")
ATTRIBUTES = FUNCTIONAL + MULTI
INDIVIDUAL_NAMES = ("i1", "i2", "i3")
TEST_NAMES = ("t1", "t2")
GROUPS = ("g0", "g1")


# -- generators -------------------------------------------------------------------


@dataclass
class TBoxSpec:
    definitions: list = field(default_factory=list)  # ConceptDefinition, in dependency order
    disjoint: dict = field(default_factory=dict)  # group -> names; declared after all concepts

    @property
    def names(self) -> list:
        return [d.name for d in self.definitions]

    @property
    def groups(self) -> dict:
        out = {d.name: d.group for d in self.definitions if d.group is not None}
        for g, names in self.disjoint.items():
            for n in names:
                out[n] = g
        return out


def random_expr(rng: random.Random, names: list, prims: list, depth: int, width: int = 3) -> And:
    atoms = []
    for _ in range(rng.randint(0, width)):
        roll = rng.random()
        if roll < 0.3 and names:
            atoms.append(Ref(rng.choice(names)))
        elif roll < 0.38 and prims:
            atoms.append(Prim(rng.choice(prims)))
        elif roll < 0.5:
            atoms.append(AtLeast(rng.randint(0, 2), rng.choice(ATTRIBUTES)))
        elif roll < 0.62:
            atoms.append(AtMost(rng.randint(0, 2), rng.choice(ATTRIBUTES)))
        elif roll < 0.7:
            atoms.append(Fills(rng.choice(ATTRIBUTES), rng.choice(INDIVIDUAL_NAMES)))
        elif roll < 0.75:
            atoms.append(Test(rng.choice(TEST_NAMES)))
        elif depth > 1:
            atoms.append(All(rng.choice(ATTRIBUTES), random_expr(rng, names, prims, depth - 1, width)))
        elif names:
            atoms.append(Ref(rng.choice(names)))
    return And(tuple(atoms))


def random_tbox(rng: random.Random, max_concepts: int = 20, depth: int = 3) -> TBoxSpec:
    """At most ``max_concepts`` concepts, expression nesting at most ``depth``."""
    spec = TBoxSpec()
    names: list = []
    prims: list = []
    for i in range(rng.randint(1, max_concepts)):
        primitive = rng.random() < 0.4
        name = f"{'P' if primitive else 'D'}{i}"
        # few top-level atoms keep the generated hierarchy interesting
        expr = random_expr(rng, names, prims, depth, width=2 if primitive else 3)
        group = rng.choice(GROUPS + (None, None)) if primitive else None
        spec.definitions.append(ConceptDefinition(name, "primitive" if primitive else "defined", expr, group))
        names.append(name)
        if primitive:
            prims.append(name)
    ungrouped = [d.name for d in spec.definitions if d.kind == "primitive" and d.group is None]
    if len(ungrouped) >= 2 and rng.random() < 0.5:
        spec.disjoint["late"] = rng.sample(ungrouped, 2)
    return spec


def build_kb(spec: TBoxSpec, order: list | None = None) -> KnowledgeBase:
    """Declare ``spec`` in ``order`` (a permutation respecting references is not
    required: definitions are inserted in any order once their names resolve)."""
    kb = KnowledgeBase()
    for a in FUNCTIONAL:
        kb.declare_attribute(a)
    for a in MULTI:
        kb.declare_attribute(a, multivalued=True)
    for t in TEST_NAMES:
        kb.register_test(t, lambda ind, kb: False)
    defs = spec.definitions if order is None else [spec.definitions[i] for i in order]
    for d in defs:
        kb.classify_concept(d)
    for g, names in spec.disjoint.items():
        kb.declare_disjoint(g, names)
    return kb


def dependency_orders(spec: TBoxSpec, rng: random.Random, count: int) -> list:
    """Up to ``count`` distinct random topological orders of the definitions."""
    deps = []
    index = {n: i for i, n in enumerate(spec.names)}
    for d in spec.definitions:
        deps.append({index[n] for n in referenced(d.expression)})
    orders = []
    seen = set()
    for _ in range(count * 5):
        done: set = set()
        order = []
        while len(order) < len(deps):
            ready = [i for i in range(len(deps)) if i not in done and deps[i] <= done]
            i = rng.choice(ready)
            order.append(i)
            done.add(i)
        if tuple(order) not in seen:
            seen.add(tuple(order))
            orders.append(order)
        if len(orders) == count:
            break
    return orders


def referenced(expr: And) -> set:
    out = set()
    for a in expr.atoms:
        if isinstance(a, (Ref, Prim)):
            out.add(a.name)
        elif isinstance(a, All):
            out |= referenced(a.concept)
    return out


# -- subsumption oracle ---------------------------------------------------------------


def merge(atoms) -> tuple:
    """Combine value restrictions on one attribute into a single ``All``."""
    bodies: dict = {}
    flat = []
    for a in atoms:
        if isinstance(a, All):
            if a.attribute not in bodies:
                bodies[a.attribute] = []
                flat.append(a.attribute)
            bodies[a.attribute].extend(a.concept.atoms)
        else:
            flat.append(a)
    out = (All(x, And(merge(bodies[x]))) if isinstance(x, str) else x for x in flat)
    return tuple(dict.fromkeys(out))


class Oracle:
    """Atom-by-atom entailment over fully unfolded expressions."""

    def __init__(self, definitions, groups: dict, caps: dict):
        self.defs = {d.name: d for d in definitions}
        self.groups = groups
        self.caps = caps
        self._memo: dict = {}  # answers between concept names, which never change

    def unfold(self, expr) -> tuple:
        if isinstance(expr, str):
            key = ("unfold", expr)
            if key not in self._memo:
                self._memo[key] = self.unfold(And((Ref(expr),)))
            return self._memo[key]
        out = []
        for a in expr.atoms:
            if isinstance(a, (Ref, Prim)):
                if a.name == TOP:
                    continue
                d = self.defs[a.name]
                if d.kind == "primitive":
                    out.append(Prim(a.name))
                out.extend(self.unfold(d.expression))
            elif isinstance(a, All):
                out.append(All(a.attribute, And(self.unfold(a.concept))))
            else:
                out.append(a)
        return merge(out)

    # bounds and values of an unfolded atom list

    def lower(self, atoms, r) -> int:
        lo = max([a.n for a in atoms if isinstance(a, AtLeast) and a.attribute == r], default=0)
        return max(lo, len(self.fillers(atoms, r)))

    def upper(self, atoms, r):
        his = [a.n for a in atoms if isinstance(a, AtMost) and a.attribute == r]
        if self.caps.get(r) is not None:
            his.append(self.caps[r])
        if self.incoherent(self.values(atoms, r)):
            his.append(0)
        return min(his) if his else None

    @staticmethod
    def fillers(atoms, r) -> set:
        return {a.individual for a in atoms if isinstance(a, Fills) and a.attribute == r}

    @staticmethod
    def values(atoms, r) -> tuple:
        return merge(x for a in atoms if isinstance(a, All) and a.attribute == r for x in a.concept.atoms)

    def incoherent(self, atoms) -> bool:
        seen = {}
        for a in atoms:
            if isinstance(a, Prim):
                g = self.groups.get(a.name)
                if g is not None:
                    if seen.setdefault(g, a.name) != a.name:
                        return True
        for r in {a.attribute for a in atoms if hasattr(a, "attribute")}:
            hi = self.upper(atoms, r)
            if hi is not None and self.lower(atoms, r) > hi:
                return True
        return False

    def entails(self, atoms, a) -> bool:
        if isinstance(a, Prim):
            return a in atoms
        if isinstance(a, Test):
            return a in atoms
        if isinstance(a, Fills):
            return a in atoms
        if isinstance(a, AtLeast):
            return self.lower(atoms, a.attribute) >= a.n
        if isinstance(a, AtMost):
            hi = self.upper(atoms, a.attribute)
            return hi is not None and hi <= a.n
        if isinstance(a, All):
            if self.upper(atoms, a.attribute) == 0:
                return True
            return self.atoms_subsume(a.concept.atoms, self.values(atoms, a.attribute))
        raise TypeError(a)

    def atoms_subsume(self, general, specific) -> bool:
        if self.incoherent(specific):
            return True
        if self.incoherent(general):
            return False
        return all(self.entails(specific, a) for a in general)

    def subsumes(self, a, b) -> bool:
        if isinstance(a, str) and isinstance(b, str):
            key = ("subsumes", a, b)
            if key not in self._memo:
                self._memo[key] = self.atoms_subsume(self.unfold(a), self.unfold(b))
            return self._memo[key]
        return self.atoms_subsume(self.unfold(a), self.unfold(b))

    def coherent(self, x) -> bool:
        return not self.incoherent(self.unfold(x))


def oracle_for(spec: TBoxSpec, kb: KnowledgeBase | None = None) -> Oracle:
    caps = {a: 1 for a in FUNCTIONAL}
    caps.update({a: None for a in MULTI})
    if kb is not None:
        caps = {a: kb.attribute_cap(a) for a in kb.attributes}
    return Oracle(spec.definitions, spec.groups, caps)


def oracle_edges(oracle: Oracle, names: list) -> frozenset:
    """Transitive reduction of strict subsumption over equivalence classes of
    ``names`` plus TOP and BOTTOM."""
    universe = [TOP, BOTTOM] + list(names)

    def sub(a, b):
        if a == TOP or b == BOTTOM:
            return True
        if a == BOTTOM:
            return not oracle.coherent(b)
        if b == TOP:
            return oracle.subsumes(a, And(()))
        return oracle.subsumes(a, b)

    rel = {(a, b): sub(a, b) for a in universe for b in universe}
    classes: list = []
    for n in universe:
        for c in classes:
            if rel[(n, c[0])] and rel[(c[0], n)]:
                c.append(n)
                break
        else:
            classes.append([n])
    reps = [c[0] for c in classes]
    below = {(x, y) for x in reps for y in reps if x != y and rel[(x, y)]}
    edges = set()
    for x, y in below:
        if not any((x, z) in below and (z, y) in below for z in reps):
            edges.add((x, y))
    members = {c[0]: frozenset(c) for c in classes}
    return frozenset((members[x], members[y]) for x, y in edges)


def oracle_placement(oracle: Oracle, existing: list, name: str) -> tuple:
    """(parents, children, equivalents) of ``name`` among ``existing`` by pairwise tests."""
    if not oracle.coherent(name):
        return (), (), tuple(sorted([n for n in existing if not oracle.coherent(n)] + [BOTTOM]))
    ups = [n for n in existing if oracle.subsumes(n, name)]
    downs = [n for n in existing if oracle.subsumes(name, n)]
    equivalents = sorted(set(ups) & set(downs))
    if oracle.subsumes(name, And(())):
        equivalents.append(TOP)
    strict_up = [n for n in ups if n not in equivalents]
    strict_down = [n for n in downs if n not in equivalents and oracle.coherent(n)]

    def minimal(cands):
        return [c for c in cands if not any(d != c and oracle.subsumes(c, d) and not oracle.subsumes(d, c)
                                            for d in cands)]

    def maximal(cands):
        return [c for c in cands if not any(d != c and oracle.subsumes(d, c) and not oracle.subsumes(c, d)
                                            for d in cands)]

    parents = {_rep(oracle, existing, p) for p in minimal(strict_up)} or {TOP}
    children = {_rep(oracle, existing, c) for c in maximal(strict_down)} or {BOTTOM}
    if TOP in equivalents:
        parents = set()
    return tuple(sorted(parents)), tuple(sorted(children)), tuple(sorted(equivalents))


def _rep(oracle: Oracle, existing: list, n: str) -> str:
    if oracle.subsumes(n, And(())):
        return TOP
    return min(m for m in existing if oracle.subsumes(n, m) and oracle.subsumes(m, n))


# -- individuals ----------------------------------------------------------------------


@dataclass
class ABoxSpec:
    assertions: dict  # individual -> [And, ...]
    fillers: dict  # individual -> {attribute: [individual, ...]}


def random_abox(rng: random.Random, spec: TBoxSpec, max_individuals: int = 15) -> ABoxSpec:
    names = list(INDIVIDUAL_NAMES) + [f"x{i}" for i in range(rng.randint(1, max_individuals - 3))]
    concepts = spec.names
    prims = [d.name for d in spec.definitions if d.kind == "primitive"]
    assertions, fillers = {}, {}
    for n in names:
        assertions[n] = [random_expr(rng, concepts, prims, 2) for _ in range(rng.randint(0, 2))]
        fillers[n] = {}
        for a in ATTRIBUTES:
            if rng.random() < 0.3:
                k = 1 if a in FUNCTIONAL else rng.randint(1, 2)
                fillers[n][a] = rng.sample(names, k)
    return ABoxSpec(assertions, fillers)


def load_abox(kb: KnowledgeBase, spec: ABoxSpec):
    for n in spec.assertions:
        kb.abox.ensure(n)
    for n in spec.assertions:
        for e in spec.assertions[n]:
            kb.abox.assert_concept(n, e)
        for a, fs in spec.fillers[n].items():
            for f in fs:
                kb.abox.add_filler(n, a, f)


CONTRADICTION = (AtLeast(1, FUNCTIONAL[0]), AtMost(0, FUNCTIONAL[0]))


class MembershipOracle:
    """Membership by scanning known atoms, with value restrictions pushed to fillers."""

    def __init__(self, oracle: Oracle, abox: ABoxSpec, names: list, tests: dict | None = None):
        self.o = oracle
        self.tests = tests or {}
        inds = set(abox.assertions)
        for fs in abox.fillers.values():
            for vs in fs.values():
                inds |= set(vs)
        self.fill = {n: {a: set(v) for a, v in abox.fillers.get(n, {}).items()} for n in inds}
        base = {}
        for n in inds:
            atoms = []
            for e in abox.assertions.get(n, []):
                atoms.extend(oracle.unfold(e))
            for a, vs in self.fill[n].items():
                atoms.extend(Fills(a, v) for v in sorted(vs))
            base[n] = merge(atoms)
        parts = {n: [oracle.unfold(e) for e in abox.assertions.get(n, [])] for n in inds}
        known = dict(base)
        incoming: dict = {n: set() for n in inds}
        changed = True
        while changed:
            changed = False
            for n in sorted(inds):
                if oracle.incoherent(known[n]):
                    # consistent pieces still name fillers and restrict them;
                    # the contradiction itself reaches every such filler
                    pieces = [x for x in parts[n] + sorted(incoming[n], key=str) if not oracle.incoherent(x)]
                    for a in ATTRIBUTES:
                        named = set(self.fill[n].get(a, ()))
                        sent = {CONTRADICTION}
                        for piece in pieces:
                            named |= oracle.fillers(piece, a)
                            if oracle.values(piece, a):
                                sent.add(oracle.values(piece, a))
                        for f in named:
                            for v in sent:
                                if v not in incoming[f]:
                                    incoming[f].add(v)
                                    changed = True
                    continue
                for a in ATTRIBUTES:
                    vals = oracle.values(known[n], a)
                    if not vals:
                        continue
                    for f in sorted(oracle.fillers(known[n], a)):
                        if vals not in incoming[f]:
                            incoming[f].add(vals)
                            changed = True
            for n in inds:
                extra = [x for v in sorted(incoming[n], key=str) for x in v]
                known[n] = merge(base[n] + tuple(extra))
        self.known = known
        self.names = names

    def member(self, x: str, concept) -> bool:
        atoms = self.known[x]
        if self.o.incoherent(atoms):
            return True
        target = self.o.unfold(concept)
        if self.o.incoherent(target):
            return False
        return all(self._atom(x, atoms, a) for a in target)

    def _atom(self, x, atoms, a) -> bool:
        if isinstance(a, Test) and a not in atoms:
            return bool(self.tests.get(a.name, lambda x: False)(x))
        if self.o.entails(atoms, a):
            return True
        if isinstance(a, All) and not self.o.incoherent(a.concept.atoms):
            fs = self.o.fillers(atoms, a.attribute)
            hi = self.o.upper(atoms, a.attribute)
            if hi is not None and len(fs) == hi:
                return all(self.member(f, a.concept) for f in sorted(fs))
        return False

    def most_specific(self, x: str) -> frozenset:
        if self.o.incoherent(self.known[x]):
            return frozenset({BOTTOM})
        hits = [n for n in self.names if self.member(x, n)]
        o = self.o
        top_equiv = [n for n in hits if o.subsumes(n, And(()))]
        rest = [n for n in hits if n not in top_equiv]
        out = set()
        for n in rest:
            if not any(o.subsumes(n, m) and not o.subsumes(m, n) for m in rest):
                out.add(min(m for m in self.names if o.subsumes(n, m) and o.subsumes(m, n)))
        return frozenset(out) or frozenset({TOP})


def antichain(oracle: Oracle, names) -> bool:
    names = list(names)
    return not any(oracle.subsumes(a, b) or oracle.subsumes(b, a) for a, b in combinations(names, 2))


# -- forward rules --------------------------------------------------------------------


@dataclass(frozen=True)
class RuleSpec:
    trigger: str
    member: And | None = None
    fill: tuple | None = None  # (attribute, individual)

    def consequent(self, ind, kb):
        from termlex.kr import Assertion

        out = []
        if self.member is not None:
            out.append(Assertion.member(ind.name, self.member))
        if self.fill is not None:
            out.append(Assertion.fill(ind.name, *self.fill))
        return out


def random_rules(rng: random.Random, spec: TBoxSpec, count: int) -> list:
    names = spec.names
    prims = [d.name for d in spec.definitions if d.kind == "primitive"]
    rules = []
    for _ in range(count):
        member = random_expr(rng, names, prims, 1, width=2) if rng.random() < 0.7 else None
        fill = (rng.choice(MULTI), rng.choice(INDIVIDUAL_NAMES)) if member is None or rng.random() < 0.4 else None
        rules.append(RuleSpec(rng.choice(names), member, fill))
    return rules


def abox_state(abox) -> dict:
    """Comparable snapshot: asserted concepts as sets, fillers as sorted lists."""
    out = {}
    for n in abox.names():
        ind = abox.get(n)
        out[n] = (frozenset(ind.asserted), {a: sorted(fs) for a, fs in sorted(ind.fillers.items())})
    return out


def random_kb_with_exprs(seed, n=3):
    rng = random.Random(seed)
    spec = random_tbox(rng)
    prims = [d.name for d in spec.definitions if d.kind == "primitive"]
    exprs = [random_expr(rng, spec.names, prims, 3) for _ in range(n)]
    return spec, build_kb(spec), exprs


def rule_fixpoints(seed):
    """Final ABox states after firing the same random rules in every order."""
    rng = random.Random(seed)
    spec = random_tbox(rng, max_concepts=10)
    rules = random_rules(rng, spec, rng.randint(1, 3))
    ab = random_abox(rng, spec, max_individuals=5)
    start = rng.choice(sorted(ab.assertions))
    states = []
    for order in itertools.permutations(range(len(rules))):
        kb = build_kb(spec)
        load_abox(kb, ab)
        for i in order:
            kb.add_rule(ForwardRule(rules[i].trigger, rules[i].consequent))
        scratch = kb.scratch()
        kb.fire_rules(start, scratch)
        states.append(abox_state(scratch))
    return states


# -- lexicon-level oracles --------------------------------------------------------------


def lexicon_oracle(lexicon) -> Oracle:
    kb = lexicon.kb
    return Oracle(kb.definitions.values(), dict(kb.groups), {a: kb.attribute_cap(a) for a in kb.attributes})


def noun_satisfies(oracle: Oracle, lexicon, lemma: str, restriction) -> bool:
    """A noun individual carries only its denotation, so membership is
    subsumption of the denotation."""
    return oracle.subsumes(restriction, And((Ref("entity"),) + lexicon.nouns[lemma].denotation.atoms))


def linking_oracle(oracle: Oracle, lexicon, verb: str, fillers: tuple, restriction=None) -> tuple:
    """Every sense of ``verb`` with each slot checked one by one."""
    out = []
    for sense in lexicon.verbs[verb].senses:
        ev = lexicon.events[sense]
        if restriction is not None and not oracle.subsumes(restriction, sense):
            continue
        padded = list(fillers) + [None] * max(0, len(ev.slots) - len(fillers))
        if any(f is not None for f in padded[len(ev.slots):]):
            continue
        ok = all(
            (f is None and not slot.required) or (f is not None and noun_satisfies(oracle, lexicon, f, slot.restriction))
            for slot, f in zip(ev.slots, padded)
        )
        if ok:
            out.append(sense)
    return tuple(out)


# -- random sentences over the bundled lexicon ------------------------------------------

NOUNS = ("Mary", "Tina", "John", "a glass of milk", "milk", "water", "paint", "the glass", "a book")
PREPS = ("for", "to", "into", "with")


def random_sentence(rng: random.Random, verbs=("pour", "give"), id="r"):
    from termlex.sentence import AnalyzedSentence

    gfs = [("subj", rng.choice(NOUNS))]
    for g in ("obj", "io"):
        if rng.random() < 0.5:
            gfs.append((g, rng.choice(NOUNS)))
    if rng.random() < 0.5:
        gfs.append((f"ppo:{rng.choice(PREPS)}", rng.choice(NOUNS)))
    rng.shuffle(gfs)
    return AnalyzedSentence(id, rng.choice(verbs), tuple(gfs))


def sentences(verbs=("pour", "give")):
    from hypothesis import strategies as st

    return st.randoms(use_true_random=False).map(lambda r: random_sentence(r, verbs))


def workspace_with_alternation_order(order):
    """The bundled knowledge base with its alternations declared in ``order``."""
    from termlex.cli import data_path
    from termlex.formats import KBDocument, build_workspace, read_kb

    doc = read_kb(data_path("pour.kb"))
    alts = [d for d in doc.declarations if d.keyword == "alternation"]
    rest = [d for d in doc.declarations if d.keyword != "alternation"]
    # alternations must precede the class declarations that mention them
    cut = next(i for i, d in enumerate(rest) if d.keyword == "class")
    decls = rest[:cut] + [alts[i] for i in order] + rest[cut:]
    return build_workspace(KBDocument(tuple(decls), doc.source))


# -- grammar oracle ----------------------------------------------------------------------

NONTERMINALS = ("S", "A", "B", "C")
TERMINALS = ("x", "y")
GRAMMAR_FEATURES = ("f1", "f2", "f3")


def random_grammar(rng: random.Random, max_rules: int = 8, features=GRAMMAR_FEATURES) -> list:
    from termlex.grammarcheck import FeatureEquation, GrammarRule, PathRef

    rules = []
    for i in range(1, rng.randint(1, max_rules) + 1):
        lhs = rng.choice(NONTERMINALS)
        rhs = tuple(rng.choice(NONTERMINALS + TERMINALS) for _ in range(rng.randint(1, 3)))
        syms = (lhs,) + rhs
        eqs = []
        for _ in range(rng.randint(0, 4)):
            a, b = rng.randrange(len(syms)), rng.randrange(len(syms))
            kind = rng.choice(("value", "value", "path", "projection"))
            if kind == "value":
                eqs.append(FeatureEquation(PathRef(syms[a], a, rng.choice(features)), rng.choice(("+", "-"))))
            elif kind == "path":
                eqs.append(FeatureEquation(PathRef(syms[a], a, rng.choice(features)),
                                           PathRef(syms[b], b, rng.choice(features))))
            else:
                eqs.append(FeatureEquation(PathRef(syms[a], a), PathRef(syms[b], b)))
        rules.append(GrammarRule(str(i), lhs, rhs, tuple(eqs)))
    return rules


def grammar_oracle(rules, features) -> dict:
    """{(rule id, feature): "error" | "warning"} at depth 1, by trying every
    combination of one-level expansions and propagating values edge by edge."""
    by_lhs: dict = {}
    for r in rules:
        by_lhs.setdefault(r.lhs, []).append(r)

    def node_of(path, r, ref):
        i = r.symbols.index(ref.symbol) if ref.index is None else ref.index
        return path if i == 0 else path + (i,)

    out = {}
    for rule in rules:
        choices = [by_lhs.get(sym) or [None] for sym in rule.rhs]
        combos = 0
        clash_count: dict = {}
        for combo in _product(choices):
            combos += 1
            apps = [((), rule)] + [((i,), sub) for i, sub in enumerate(combo, 1) if sub is not None]
            edges, values = [], []
            for path, r in apps:
                for e in r.equations:
                    left = node_of(path, r, e.left)
                    if isinstance(e.right, str):
                        values.append(((left, e.left.feature), e.right))
                        continue
                    right = node_of(path, r, e.right)
                    if e.left.feature is not None:
                        edges.append(((left, e.left.feature), (right, e.right.feature)))
                    else:
                        edges.extend(((left, f), (right, f)) for f in features)
            top = [()] + [(i,) for i in range(1, len(rule.rhs) + 1)]
            for f in features:
                if any({v for var, v in values if var in _reachable((node, f), edges)} == {"+", "-"} for node in top):
                    clash_count[f] = clash_count.get(f, 0) + 1
        for f, n in clash_count.items():
            out[(rule.id, f)] = "error" if n == combos else "warning"
    return out


def _product(choices):
    if not choices:
        yield ()
        return
    for head in choices[0]:
        for rest in _product(choices[1:]):
            yield (head,) + rest


def _reachable(start, edges) -> set:
    seen = {start}
    changed = True
    while changed:
        changed = False
        for a, b in edges:
            if a in seen and b not in seen:
                seen.add(b)
                changed = True
            elif b in seen and a not in seen:
                seen.add(a)
                changed = True
    return seen
