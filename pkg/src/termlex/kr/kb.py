"""A Classic-style knowledge base: TBox, taxonomy, ABox, test hooks and rules."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterable

from ..errors import (
    CyclicDefinition,
    DuplicateName,
    DuplicateTestName,
    KBFrozen,
    RuleLimitExceeded,
    UnknownName,
    UnregisteredTest,
)
from .expr import (
    BOTTOM_NF,
    TOP_NF,
    All,
    And,
    AtLeast,
    AtMost,
    ExprLike,
    Fills,
    NormalForm,
    Prim,
    Ref,
    Restriction,
    Test,
    conj,
    subsumes as nf_subsumes,
)
from .taxonomy import BOTTOM, TOP, Placement, Taxonomy

log = logging.getLogger(__name__)

DEFAULT_RULE_LIMIT = 100


@dataclass(frozen=True)
class ConceptDefinition:
    name: str
    kind: str  # "primitive" | "defined"
    expression: And = And(())
    group: str | None = None

    def __post_init__(self):
        if self.kind not in ("primitive", "defined"):
            raise ValueError(f"concept kind must be 'primitive' or 'defined', not {self.kind!r}")
        if not isinstance(self.expression, And):
            object.__setattr__(self, "expression", conj(self.expression))
        if self.group is not None and self.kind != "primitive":
            raise ValueError("only primitive concepts can belong to a disjointness group")


@dataclass
class Individual:
    name: str
    asserted: list = field(default_factory=list)
    fillers: dict = field(default_factory=dict)

    def copy(self) -> "Individual":
        return Individual(self.name, list(self.asserted), {a: set(f) for a, f in self.fillers.items()})

    def filler(self, attribute: str) -> str | None:
        """The single filler of a functional attribute, or None."""
        fs = self.fillers.get(attribute)
        if not fs:
            return None
        return min(fs)


@dataclass(frozen=True)
class Assertion:
    """One additive fact produced by a forward rule."""
    individual: str
    concept: And | None = None
    attribute: str | None = None
    filler: str | None = None

    @classmethod
    def member(cls, individual: str, concept: ExprLike) -> "Assertion":
        return cls(individual, concept=conj(concept))

    @classmethod
    def fill(cls, individual: str, attribute: str, filler: str) -> "Assertion":
        return cls(individual, attribute=attribute, filler=filler)


@dataclass(frozen=True)
class ForwardRule:
    trigger: str
    consequent: Callable[[Individual, "KnowledgeBase"], Iterable[Assertion]]
    name: str = ""


class _Acc:
    __slots__ = ("prims", "tests", "attrs", "bottom")

    def __init__(self):
        self.prims: set[str] = set()
        self.tests: set[str] = set()
        self.attrs: dict[str, list] = {}  # attr -> [min, max, fillers, values]
        self.bottom = False

    def attr(self, name):
        a = self.attrs.get(name)
        if a is None:
            a = self.attrs[name] = [0, None, set(), []]
        return a

    def add_nf(self, nf: NormalForm):
        if not nf.coherent:
            self.bottom = True
            return
        self.prims |= nf.primitives
        self.tests |= nf.tests
        for attr, r in nf.attributes:
            a = self.attr(attr)
            a[0] = max(a[0], r.min)
            if r.max is not None:
                a[1] = r.max if a[1] is None else min(a[1], r.max)
            a[2] |= r.fillers
            if r.value is not None:
                a[3].append(r.value)


class KnowledgeBase:
    """Terminology, taxonomy and assertions.

    Construction is single-writer.  After :meth:`freeze` every mutator raises
    :class:`KBFrozen`; queries and scratch ABoxes are safe to use from several
    threads.
    """

    def __init__(self, rule_limit: int = DEFAULT_RULE_LIMIT):
        self.rule_limit = rule_limit
        self.attributes: dict[str, bool] = {}  # name -> multivalued
        self.definitions: dict[str, ConceptDefinition] = {}
        self.groups: dict[str, str] = {}
        self.tests: dict[str, Callable] = {}
        self.rules: list[ForwardRule] = []
        self.taxonomy = Taxonomy()
        self.abox = ABox(self)
        self.frozen = False
        self._concept_nf: dict[str, NormalForm] = {}
        self._expr_nf: dict[And, NormalForm] = {}

    # -- declarations --------------------------------------------------------

    def _check_mutable(self):
        if self.frozen:
            raise KBFrozen("knowledge base is frozen")

    def declare_attribute(self, name: str, multivalued: bool = False):
        self._check_mutable()
        if name in self.attributes:
            raise DuplicateName(f"attribute {name!r} already declared")
        self.attributes[name] = multivalued

    def attribute_cap(self, name: str) -> int | None:
        try:
            return None if self.attributes[name] else 1
        except KeyError:
            raise UnknownName(name, "attribute") from None

    def declare_primitive(self, name: str, expression: ExprLike = And(()), group: str | None = None) -> Placement:
        return self.classify_concept(ConceptDefinition(name, "primitive", conj(expression), group))

    def define_concept(self, name: str, expression: ExprLike) -> Placement:
        return self.classify_concept(ConceptDefinition(name, "defined", conj(expression)))

    def classify_concept(self, definition: ConceptDefinition) -> Placement:
        """Store a definition and insert it into the taxonomy below its most
        specific subsumers and above its most general subsumees."""
        self._check_mutable()
        name = definition.name
        if name in self.definitions or name in (TOP, BOTTOM):
            raise DuplicateName(f"concept {name!r} already defined")
        if name in _referenced_names(definition.expression):
            raise CyclicDefinition(f"concept {name!r} refers to itself")
        self.definitions[name] = definition
        if definition.group is not None:
            self.groups[name] = definition.group
        try:
            nf = self.concept_nf(name)
        except Exception:
            del self.definitions[name]
            self.groups.pop(name, None)
            raise
        placement = self.taxonomy.insert(name, nf, nf_subsumes)
        self.abox._invalidate()
        if not placement.coherent:
            log.info("concept %s is incoherent", name)
        return placement

    def declare_disjoint(self, group: str, names: Iterable[str]):
        """Put existing primitives into one disjointness group and reclassify."""
        self._check_mutable()
        names = list(names)
        for n in names:
            d = self.definitions.get(n)
            if d is None:
                raise UnknownName(n, "concept")
            if d.kind != "primitive":
                raise ValueError(f"{n!r} is not primitive and cannot be declared disjoint")
            if self.groups.get(n, group) != group:
                raise ValueError(f"{n!r} already belongs to disjointness group {self.groups[n]!r}")
        for n in names:
            self.groups[n] = group
        self._rebuild()

    def _rebuild(self):
        self._concept_nf.clear()
        self._expr_nf.clear()
        self.taxonomy = Taxonomy()
        for name in self.definitions:
            self.taxonomy.insert(name, self.concept_nf(name), nf_subsumes)
        self.abox._invalidate()

    def register_test(self, name: str, procedure: Callable[[Individual, "KnowledgeBase"], bool]):
        self._check_mutable()
        if name in self.tests:
            raise DuplicateTestName(f"test {name!r} already registered")
        self.tests[name] = procedure

    def add_rule(self, rule: ForwardRule):
        self._check_mutable()
        if rule.trigger not in self.definitions:
            raise UnknownName(rule.trigger, "concept")
        self.rules.append(rule)

    def add_individual(self, name: str, concepts: Iterable[ExprLike] = (), fillers: dict | None = None) -> Individual:
        return self.abox.add_individual(name, concepts, fillers)

    def freeze(self):
        self.abox.effective_all()
        self.frozen = True

    def scratch(self) -> "ABox":
        """A private, mutable ABox layered over the knowledge base's own."""
        return ABox(self, parent=self.abox)

    # -- normalization -------------------------------------------------------

    def concept_nf(self, name: str, _stack: tuple = ()) -> NormalForm:
        if name == TOP:
            return TOP_NF
        if name == BOTTOM:
            return BOTTOM_NF
        nf = self._concept_nf.get(name)
        if nf is not None:
            return nf
        if name in _stack:
            raise CyclicDefinition(" -> ".join(_stack + (name,)))
        d = self.definitions.get(name)
        if d is None:
            raise UnknownName(name, "concept")
        nf = self._normalize(d.expression, _stack + (name,))
        if d.kind == "primitive":
            acc = _Acc()
            acc.add_nf(nf)
            acc.prims.add(name)
            nf = self._finish(acc)
        self._concept_nf[name] = nf
        return nf

    def normalize(self, expr: ExprLike | NormalForm) -> NormalForm:
        if isinstance(expr, NormalForm):
            return expr
        expr = conj(expr)
        nf = self._expr_nf.get(expr)
        if nf is None:
            nf = self._normalize(expr, ())
            self._expr_nf[expr] = nf
        return nf

    def _normalize(self, expr: And, stack: tuple) -> NormalForm:
        acc = _Acc()
        for atom in expr.atoms:
            if isinstance(atom, (Ref, Prim)):
                if isinstance(atom, Prim):
                    d = self.definitions.get(atom.name)
                    if d is None or d.kind != "primitive":
                        raise UnknownName(atom.name, "primitive concept")
                acc.add_nf(self.concept_nf(atom.name, stack))
            elif isinstance(atom, All):
                self.attribute_cap(atom.attribute)
                acc.attr(atom.attribute)[3].append(self._normalize(atom.concept, stack))
            elif isinstance(atom, AtLeast):
                self.attribute_cap(atom.attribute)
                a = acc.attr(atom.attribute)
                a[0] = max(a[0], atom.n)
            elif isinstance(atom, AtMost):
                self.attribute_cap(atom.attribute)
                a = acc.attr(atom.attribute)
                a[1] = atom.n if a[1] is None else min(a[1], atom.n)
            elif isinstance(atom, Fills):
                self.attribute_cap(atom.attribute)
                acc.attr(atom.attribute)[2].add(atom.individual)
            elif isinstance(atom, Test):
                acc.tests.add(atom.name)
            else:
                raise TypeError(f"not a concept atom: {atom!r}")
        return self._finish(acc)

    def _finish(self, acc: _Acc) -> NormalForm:
        if acc.bottom:
            return BOTTOM_NF
        seen_groups: set[str] = set()
        for p in acc.prims:
            g = self.groups.get(p)
            if g is not None:
                if g in seen_groups:
                    return BOTTOM_NF
                seen_groups.add(g)
        entries = []
        for attr, (lo, hi, fillers, values) in acc.attrs.items():
            cap = self.attribute_cap(attr)
            if cap is not None:
                hi = cap if hi is None else min(hi, cap)
            lo = max(lo, len(fillers))
            value = None
            if values:
                if len(values) == 1:
                    value = values[0]
                else:
                    inner = _Acc()
                    for v in values:
                        inner.add_nf(v)
                    value = self._finish(inner)
                if not value.coherent:
                    hi = 0
                    value = None
                elif value == TOP_NF:
                    value = None
            if hi is not None and lo > hi:
                return BOTTOM_NF
            if hi == 0:
                value = None
            if lo == 0 and hi == cap and not fillers and value is None:
                continue
            entries.append((attr, Restriction(lo, hi, frozenset(fillers), value)))
        entries.sort(key=lambda e: e[0])
        return NormalForm(frozenset(acc.prims), tuple(entries), frozenset(acc.tests), True)

    # -- queries -------------------------------------------------------------

    def _as_nf(self, x) -> NormalForm:
        if isinstance(x, NormalForm):
            return x
        if isinstance(x, str):
            return self.concept_nf(x)
        return self.normalize(x)

    def subsumes(self, a, b) -> bool:
        """Does ``a`` subsume ``b``?  Arguments may be names, expressions or normal forms."""
        return nf_subsumes(self._as_nf(a), self._as_nf(b))

    def is_coherent(self, x) -> bool:
        return self._as_nf(x).coherent

    def _abox(self, abox):
        return self.abox if abox is None else abox

    def is_instance(self, individual: str, concept, abox: "ABox | None" = None) -> bool:
        abox = self._abox(abox)
        abox.get(individual)
        return self._member(abox, individual, self._as_nf(concept))

    def _member(self, abox: "ABox", name: str, nf: NormalForm) -> bool:
        desc = abox.effective(name)
        if not desc.coherent:
            return True
        if not nf.coherent:
            return False
        if not nf.primitives <= desc.primitives:
            return False
        for attr, r in nf.attributes:
            d = desc.restriction(attr)
            if d is None:
                d = Restriction(0, self.attribute_cap(attr))
            if r.min > d.min:
                return False
            if r.max is not None and (d.max is None or d.max > r.max):
                return False
            if not r.fillers <= d.fillers:
                return False
            if r.value is not None and d.max != 0:
                if d.value is not None and nf_subsumes(r.value, d.value):
                    continue
                closed = d.max is not None and len(d.fillers) == d.max
                if closed and all(self._member(abox, f, r.value) for f in sorted(d.fillers)):
                    continue
                return False
        for t in sorted(nf.tests - desc.tests):
            if not self._run_test(abox, name, t):
                return False
        return True

    def _run_test(self, abox: "ABox", name: str, test: str) -> bool:
        proc = self.tests.get(test)
        if proc is None:
            raise UnregisteredTest(f"test {test!r} is not registered")
        return bool(proc(abox.view(name), self))

    def classify_individual(self, individual: str, abox: "ABox | None" = None) -> frozenset:
        """Most specific stored concepts the individual provably belongs to.

        Each taxonomy node is reported by its representative name, so the result
        is an antichain under subsumption.
        """
        abox = self._abox(abox)
        abox.get(individual)
        if not abox.effective(individual).coherent:
            return frozenset({BOTTOM})
        tax = self.taxonomy
        memo: dict[int, bool] = {}

        def member(node):
            k = id(node)
            if k not in memo:
                memo[k] = self._member(abox, individual, node.nf)
            return memo[k]

        result = set()
        stack = [tax.top]
        seen = {id(tax.top)}
        while stack:
            node = stack.pop()
            positive = [c for c in node.children if c is not tax.bottom and member(c)]
            if not positive:
                result.add(node.rep)
            for c in positive:
                if id(c) not in seen:
                    seen.add(id(c))
                    stack.append(c)
        return frozenset(result)

    def instance_of(self, individual: str, abox: "ABox | None" = None) -> frozenset:
        """Every stored concept name (synonyms included) the individual belongs to."""
        out: set[str] = set()
        for rep in self.classify_individual(individual, abox):
            out |= self.taxonomy.ancestors(rep)
        return frozenset(out)

    def fire_rules(self, individual: str, abox: "ABox | None" = None) -> Individual:
        """Apply every rule whose trigger the individual satisfies, to a fixpoint."""
        abox = self._abox(abox)
        abox.get(individual)
        for _ in range(self.rule_limit):
            added = False
            members = self.instance_of(individual, abox)
            for rule in self.rules:
                if rule.trigger not in members:
                    continue
                for assertion in rule.consequent(abox.view(individual), self):
                    added |= abox.apply(assertion)
            if not added:
                return abox.get(individual)
        raise RuleLimitExceeded(f"rules on {individual!r} did not reach a fixpoint in {self.rule_limit} rounds")


def _mentioned_fillers(nf: NormalForm) -> set[str]:
    out: set[str] = set()
    for _attr, r in nf.attributes:
        out |= r.fillers
        if r.value is not None:
            out |= _mentioned_fillers(r.value)
    return out


def _referenced_names(expr: And) -> set[str]:
    out: set[str] = set()
    for atom in expr.atoms:
        if isinstance(atom, (Ref, Prim)):
            out.add(atom.name)
        elif isinstance(atom, All):
            out |= _referenced_names(atom.concept)
    return out


class ABox:
    """Individuals and their fillers.  An ABox with a parent is a copy-on-write overlay."""

    def __init__(self, kb: KnowledgeBase, parent: "ABox | None" = None):
        self.kb = kb
        self.parent = parent
        self._own: dict[str, Individual] = {}
        self._eff: dict[str, NormalForm] | None = None

    def _check_mutable(self):
        if self.parent is None and self.kb.frozen:
            raise KBFrozen("knowledge base is frozen; use a scratch ABox")

    def _invalidate(self):
        self._eff = None

    def __contains__(self, name):
        return name in self._own or (self.parent is not None and name in self.parent)

    def names(self) -> list[str]:
        out = set(self._own)
        if self.parent is not None:
            out |= set(self.parent.names())
        return sorted(out)

    def get(self, name: str) -> Individual:
        ind = self._own.get(name)
        if ind is None and self.parent is not None and name in self.parent:
            return self.parent.get(name)
        if ind is None:
            raise UnknownName(name, "individual")
        return ind

    def view(self, name: str) -> Individual:
        return self.get(name).copy()

    def _writable(self, name: str) -> Individual:
        self._check_mutable()
        ind = self._own.get(name)
        if ind is None:
            if self.parent is not None and name in self.parent:
                ind = self.parent.get(name).copy()
            else:
                ind = Individual(name)
            self._own[name] = ind
        return ind

    def add_individual(self, name: str, concepts: Iterable[ExprLike] = (), fillers: dict | None = None) -> Individual:
        self._check_mutable()
        if name in self:
            raise DuplicateName(f"individual {name!r} already exists")
        self._writable(name)
        for c in concepts:
            self.assert_concept(name, c)
        for attr, fs in (fillers or {}).items():
            for f in [fs] if isinstance(fs, str) else fs:
                self.add_filler(name, attr, f)
        return self.get(name)

    def ensure(self, name: str) -> Individual:
        if name not in self:
            self._writable(name)
            self._invalidate()
        return self.get(name)

    def assert_concept(self, name: str, concept: ExprLike) -> bool:
        expr = conj(concept)
        nf = self.kb.normalize(expr)  # validates names
        ind = self.get(name) if name in self else None
        if ind is not None and expr in ind.asserted:
            return False
        self._writable(name).asserted.append(expr)
        for f in sorted(_mentioned_fillers(nf)):
            self.ensure(f)
        self._invalidate()
        return True

    def add_filler(self, name: str, attribute: str, filler: str) -> bool:
        self.kb.attribute_cap(attribute)
        ind = self.get(name) if name in self else None
        if ind is not None and filler in ind.fillers.get(attribute, ()):
            return False
        self.ensure(filler)
        self._writable(name).fillers.setdefault(attribute, set()).add(filler)
        self._invalidate()
        return True

    def apply(self, assertion: Assertion) -> bool:
        changed = False
        if assertion.individual not in self:
            self.ensure(assertion.individual)
            changed = True
        if assertion.concept is not None:
            changed |= self.assert_concept(assertion.individual, assertion.concept)
        if assertion.attribute is not None:
            changed |= self.add_filler(assertion.individual, assertion.attribute, assertion.filler)
        return changed

    # -- derived descriptions ------------------------------------------------

    def effective(self, name: str) -> NormalForm:
        return self.effective_all()[name]

    def effective_all(self) -> dict[str, NormalForm]:
        """Descriptions of every individual, including value restrictions
        propagated along fillers, computed to a fixpoint."""
        if self._eff is not None:
            return self._eff
        kb = self.kb
        names = self.names()
        own = {n: self.get(n) for n in names}

        def base_expr(ind: Individual) -> And:
            parts = list(ind.asserted)
            for attr in sorted(ind.fillers):
                parts.extend(Fills(attr, f) for f in sorted(ind.fillers[attr]))
            return conj(parts)

        base = {n: kb.normalize(base_expr(ind)) for n, ind in own.items()}
        eff = dict(base)
        incoming: dict[str, set] = {n: set() for n in names}

        def forwarded(n: str) -> dict:
            """What an incoherent individual passes on, per attribute: its fillers
            and the value restrictions of each of its consistent pieces."""
            pieces = [p for p in [kb.normalize(e) for e in own[n].asserted] + list(incoming[n]) if p.coherent]
            out = {a: (set(fs), set()) for a, fs in own[n].fillers.items()}
            for p in pieces:
                for a, r in p.attributes:
                    fs, vals = out.setdefault(a, (set(), set()))
                    fs |= r.fillers
                    if r.value is not None:
                        vals.add(r.value)
            return out

        changed = True
        while changed:
            changed = False
            for n in names:
                nf = eff[n]
                if not nf.coherent:
                    # an inconsistent individual entails anything about its fillers
                    for fs, vals in forwarded(n).values():
                        for f in fs:
                            for v in vals | {BOTTOM_NF}:
                                if v not in incoming[f]:
                                    incoming[f].add(v)
                                    changed = True
                    continue
                for _attr, r in nf.attributes:
                    if r.value is None:
                        continue
                    for f in r.fillers:
                        if r.value not in incoming[f]:
                            incoming[f].add(r.value)
                            changed = True
            if changed:
                for n in names:
                    if incoming[n]:
                        acc = _Acc()
                        acc.add_nf(base[n])
                        for v in incoming[n]:
                            acc.add_nf(v)
                        eff[n] = kb._finish(acc)
        self._eff = eff
        return eff
