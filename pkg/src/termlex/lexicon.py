"""World and lexical knowledge: semantic features, nouns, events and verbs.

Everything here is stored in a :class:`~termlex.kr.KnowledgeBase`.  Features
are primitive concepts under ``entity``; events are primitive concepts under
``event`` whose argument slots are the functional attributes ``arg1 ... argN``;
every noun lemma becomes an individual carrying its denotation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DuplicateEvent,
    DuplicateLemma,
    IncoherentDenotation,
    UnknownEvent,
    UnknownFeature,
    UnknownLemma,
    UnknownName,
    UnknownVerb,
)
from .kr import All, And, AtLeast, KnowledgeBase, conj

ENTITY = "entity"
EVENT = "event"
SORT_GROUP = "sort"


def arg_attribute(position: int) -> str:
    """Attribute holding the filler of the 1-based event argument ``position``."""
    return f"arg{position}"


def verb_individual(lemma: str) -> str:
    return f"verb:{lemma}"


@dataclass(frozen=True)
class SemanticFeature:
    name: str
    parents: tuple = (ENTITY,)
    group: str | None = None


@dataclass(frozen=True)
class NounEntry:
    lemma: str
    denotation: And

    def __post_init__(self):
        object.__setattr__(self, "denotation", conj(self.denotation))


@dataclass(frozen=True)
class Slot:
    label: str
    restriction: And
    required: bool = True

    def __post_init__(self):
        object.__setattr__(self, "restriction", conj(self.restriction))


@dataclass(frozen=True)
class EventType:
    name: str
    slots: tuple = ()
    isa: And = And(())

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(self.slots))
        object.__setattr__(self, "isa", conj(self.isa))

    @property
    def arity(self) -> int:
        return len(self.slots)

    def definition(self) -> And:
        parts: list = [EVENT, self.isa]
        for i, slot in enumerate(self.slots, 1):
            if slot.required:
                parts.append(AtLeast(1, arg_attribute(i)))
            if slot.restriction.atoms:
                parts.append(All(arg_attribute(i), slot.restriction))
        return conj(parts)


@dataclass(frozen=True)
class VerbEntry:
    lemma: str
    senses: tuple

    def __post_init__(self):
        object.__setattr__(self, "senses", tuple(self.senses))


class Lexicon:
    def __init__(self, kb: KnowledgeBase | None = None):
        self.kb = kb if kb is not None else KnowledgeBase()
        self.features: dict[str, SemanticFeature] = {}
        self.nouns: dict[str, NounEntry] = {}
        self.events: dict[str, EventType] = {}
        self.verbs: dict[str, VerbEntry] = {}
        if ENTITY not in self.kb.definitions:
            self.kb.declare_primitive(ENTITY, group=SORT_GROUP)
        if EVENT not in self.kb.definitions:
            self.kb.declare_primitive(EVENT, group=SORT_GROUP)

    def freeze(self):
        self.kb.freeze()

    def ensure_arg_attributes(self, n: int):
        for i in range(1, n + 1):
            if arg_attribute(i) not in self.kb.attributes:
                self.kb.declare_attribute(arg_attribute(i))

    # -- declarations --------------------------------------------------------

    def add_feature(self, feature: SemanticFeature):
        kb = self.kb
        for p in feature.parents:
            if p not in kb.definitions:
                raise UnknownFeature(p)
        parents = conj(feature.parents or (ENTITY,))
        if not kb.subsumes(ENTITY, parents):
            raise ValueError(f"feature {feature.name!r} is not classified under {ENTITY!r}")
        kb.declare_primitive(feature.name, parents, group=feature.group)
        self.features[feature.name] = feature

    def add_noun(self, entry: NounEntry):
        if entry.lemma in self.nouns or entry.lemma in self.kb.abox:
            raise DuplicateLemma(f"noun {entry.lemma!r} already in the lexicon")
        denotation = conj(ENTITY, entry.denotation)
        if not self.kb.normalize(denotation).coherent:
            raise IncoherentDenotation(f"denotation of {entry.lemma!r} is incoherent: {entry.denotation}")
        self.kb.add_individual(entry.lemma, [denotation])
        self.nouns[entry.lemma] = entry

    def add_event(self, ev: EventType):
        kb = self.kb
        if ev.name in self.events or ev.name in kb.definitions:
            raise DuplicateEvent(f"event {ev.name!r} already defined")
        labels = [s.label for s in ev.slots]
        if len(set(labels)) != len(labels):
            raise ValueError(f"event {ev.name!r} repeats a slot label")
        for slot in ev.slots:
            try:
                nf = kb.normalize(slot.restriction)
            except UnknownName as e:
                raise UnknownFeature(e.name) from None
            if not nf.coherent:
                raise IncoherentDenotation(f"slot {slot.label!r} of {ev.name!r} has an incoherent restriction")
        self.ensure_arg_attributes(ev.arity)
        kb.declare_primitive(ev.name, ev.definition())
        self.events[ev.name] = ev

    def add_verb(self, verb: VerbEntry):
        if verb.lemma in self.verbs:
            raise DuplicateLemma(f"verb {verb.lemma!r} already in the lexicon")
        if not verb.senses:
            raise ValueError(f"verb {verb.lemma!r} needs at least one sense")
        for s in verb.senses:
            if s not in self.events:
                raise UnknownEvent(s)
        self.kb.add_individual(verb_individual(verb.lemma))
        self.verbs[verb.lemma] = verb

    # -- queries -------------------------------------------------------------

    def verb(self, lemma: str) -> VerbEntry:
        try:
            return self.verbs[lemma]
        except KeyError:
            raise UnknownVerb(lemma) from None

    def senses(self, lemma: str) -> tuple:
        return self.verb(lemma).senses

    def event(self, name: str) -> EventType:
        try:
            return self.events[name]
        except KeyError:
            raise UnknownEvent(name) from None

    def noun(self, lemma: str) -> NounEntry:
        try:
            return self.nouns[lemma]
        except KeyError:
            raise UnknownLemma(lemma) from None

    def satisfies(self, lemma: str, restriction) -> bool:
        """Does the noun's individual classify under ``restriction``?"""
        self.noun(lemma)
        return self.kb.is_instance(lemma, restriction)


def add_noun(lexicon: Lexicon, entry: NounEntry):
    lexicon.add_noun(entry)


def add_event(lexicon: Lexicon, ev: EventType):
    lexicon.add_event(ev)


def add_verb(lexicon: Lexicon, verb: VerbEntry):
    lexicon.add_verb(verb)


def satisfies(lexicon: Lexicon, lemma: str, restriction) -> bool:
    return lexicon.satisfies(lemma, restriction)
