"""Classification of GF-marked sentences by subcategorization and alternation type.

A sentence becomes a scratch individual whose grammatical-function attributes
are filled by noun individuals.  Subcategorizations are defined concepts over
those attributes; an alternation is its subcategorization conjoined with a
``legal-linking`` test atom, and carries a forward rule that builds the event
instance the sentence denotes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import (
    DuplicateName,
    MalformedSentence,
    NoSubcategorization,
    UnknownAlternation,
    UnknownSubcategorization,
)
from .kr import ABox, And, Assertion, AtLeast, AtMost, Fills, ForwardRule, Test, conj
from .lexicon import SORT_GROUP, Lexicon, arg_attribute, verb_individual

SENTENCE = "sentence"
GF_INVENTORY = ("subj", "obj", "io", "ppo")
PREP = "prep"
VERB = "verb"
DENOTES = "denotes"


def split_gf(tag: str) -> tuple[str, str | None]:
    """``'ppo:for'`` -> ``('ppo', 'for')``; ``'subj'`` -> ``('subj', None)``."""
    base, _, prep = tag.partition(":")
    return base, (prep or None)


def prep_individual(prep: str) -> str:
    return f"prep:{prep}"


def linking_test_name(alternation: str) -> str:
    return f"legal-linking:{alternation}"


@dataclass(frozen=True)
class AnalyzedSentence:
    id: str
    verb: str
    gfs: tuple = ()  # ((gf tag, noun lemma), ...)
    text: str = ""

    def __post_init__(self):
        gfs = self.gfs.items() if isinstance(self.gfs, Mapping) else self.gfs
        object.__setattr__(self, "gfs", tuple((str(g), str(n)) for g, n in gfs))

    @property
    def gf_map(self) -> dict[str, str]:
        return dict(self.gfs)

    @property
    def tags(self) -> frozenset:
        return frozenset(g for g, _ in self.gfs)

    def filler(self, base_gf: str) -> str | None:
        for g, n in self.gfs:
            if split_gf(g)[0] == base_gf:
                return n
        return None

    @property
    def preposition(self) -> str | None:
        for g, _ in self.gfs:
            base, prep = split_gf(g)
            if base == "ppo":
                return prep
        return None


@dataclass(frozen=True)
class SubcategorizationType:
    name: str
    gfs: frozenset

    def __post_init__(self):
        object.__setattr__(self, "gfs", frozenset(self.gfs))

    @property
    def base_gfs(self) -> frozenset:
        return frozenset(split_gf(g)[0] for g in self.gfs)

    @property
    def preposition(self) -> str | None:
        for g in self.gfs:
            base, prep = split_gf(g)
            if base == "ppo":
                return prep
        return None

    def matches(self, tags: frozenset) -> bool:
        """GF-set equality, where a bare ``ppo`` accepts any preposition."""
        if self.base_gfs != frozenset(split_gf(t)[0] for t in tags):
            return False
        want = self.preposition
        if want is None:
            return True
        return any(split_gf(t) == ("ppo", want) for t in tags)


@dataclass(frozen=True)
class LinkingPattern:
    """GFs in event-argument order: ``gfs[i]`` fills argument ``i+1``; None leaves it empty."""
    gfs: tuple

    def __post_init__(self):
        gfs = tuple(None if g in (None, "-") else split_gf(g)[0] for g in self.gfs)
        present = [g for g in gfs if g is not None]
        if len(set(present)) != len(present):
            raise ValueError(f"linking pattern {self.gfs!r} is not injective")
        object.__setattr__(self, "gfs", gfs)

    def fillers(self, gf_fillers: Mapping[str, str | None]) -> tuple:
        return tuple(None if g is None else gf_fillers.get(g) for g in self.gfs)


@dataclass(frozen=True)
class AlternationType:
    name: str
    subcategorization: str
    pattern: LinkingPattern
    restriction: And | None = None  # senses must be subsumed by this

    def __post_init__(self):
        if not isinstance(self.pattern, LinkingPattern):
            object.__setattr__(self, "pattern", LinkingPattern(tuple(self.pattern)))
        if self.restriction is not None:
            r = conj(self.restriction)
            object.__setattr__(self, "restriction", r if r.atoms else None)


@dataclass(frozen=True)
class EventReading:
    alternation: str
    instance: str
    senses: tuple
    concepts: tuple
    arguments: tuple  # ((arg attribute, noun lemma), ...)
    roles: tuple = ()  # ((sense, ((slot label, noun lemma), ...)), ...)

    def role_map(self, sense: str) -> dict[str, str]:
        return dict(dict(self.roles)[sense])

    def to_dict(self) -> dict:
        return {
            "alternation": self.alternation,
            "instance": self.instance,
            "senses": list(self.senses),
            "concepts": list(self.concepts),
            "arguments": {a: n for a, n in self.arguments},
            "roles": {s: {label: n for label, n in rs} for s, rs in self.roles},
        }


@dataclass(frozen=True)
class SentenceReport:
    sentence: str
    verb: str
    subcategorization: str
    alternations: tuple = ()
    concepts: tuple = ()
    events: tuple = ()
    text: str = ""

    @property
    def bare(self) -> bool:
        """Classified only as its subcategorization, with no alternation."""
        return not self.alternations

    def to_dict(self) -> dict:
        return {
            "sentence": self.sentence,
            "verb": self.verb,
            "text": self.text,
            "subcategorization": self.subcategorization,
            "alternations": list(self.alternations),
            "concepts": list(self.concepts),
            "events": [e.to_dict() for e in self.events],
        }


class SentenceClassifier:
    def __init__(self, lexicon: Lexicon, gf_inventory: Iterable[str] = GF_INVENTORY):
        self.lexicon = lexicon
        self.kb = lexicon.kb
        self.gf_inventory: list[str] = []
        self.subcategorizations: dict[str, SubcategorizationType] = {}
        self.alternations: dict[str, AlternationType] = {}
        kb = self.kb
        if SENTENCE not in kb.definitions:
            kb.declare_primitive(SENTENCE, group=SORT_GROUP)
        for attr in (PREP, VERB):
            if attr not in kb.attributes:
                kb.declare_attribute(attr)
        if DENOTES not in kb.attributes:
            kb.declare_attribute(DENOTES, multivalued=True)
        for gf in gf_inventory:
            self.add_gf(gf)

    def freeze(self):
        self.kb.freeze()

    # -- declarations --------------------------------------------------------

    def add_gf(self, gf: str):
        """Extend the GF inventory; only allowed before any subcategorization exists."""
        if ":" in gf:
            raise ValueError(f"grammatical function {gf!r} may not carry a preposition")
        if self.subcategorizations:
            raise ValueError("grammatical functions must be declared before subcategorizations")
        if gf in self.gf_inventory:
            raise DuplicateName(f"grammatical function {gf!r} already declared")
        if gf not in self.kb.attributes:
            self.kb.declare_attribute(gf)
        self.gf_inventory.append(gf)

    def _check_tags(self, tags: Iterable[str], what: str):
        bases = []
        for t in tags:
            base, prep = split_gf(t)
            if base not in self.gf_inventory:
                raise MalformedSentence(f"{what}: unknown grammatical function {t!r}")
            if prep is not None and base != "ppo":
                raise MalformedSentence(f"{what}: only ppo carries a preposition, got {t!r}")
            bases.append(base)
        if len(set(bases)) != len(bases):
            raise MalformedSentence(f"{what}: a grammatical function is bound twice")

    def subcategorization_concept(self, sc: SubcategorizationType) -> And:
        parts: list = [SENTENCE]
        bases = sc.base_gfs
        for g in self.gf_inventory:
            parts.append(AtLeast(1, g) if g in bases else AtMost(0, g))
        if sc.preposition is not None:
            parts.append(Fills(PREP, prep_individual(sc.preposition)))
        return conj(parts)

    def add_subcategorization(self, sc: SubcategorizationType):
        if sc.name in self.subcategorizations or sc.name in self.kb.definitions:
            raise DuplicateName(f"subcategorization {sc.name!r} already defined")
        self._check_tags(sc.gfs, f"subcategorization {sc.name}")
        if "subj" in self.gf_inventory and "subj" not in sc.base_gfs:
            raise ValueError(f"subcategorization {sc.name!r} lacks a subject")
        for other in self.subcategorizations.values():
            if other.gfs == sc.gfs:
                raise ValueError(f"subcategorizations {other.name!r} and {sc.name!r} have the same GF set")
        if sc.preposition is not None:
            self.kb.abox.ensure(prep_individual(sc.preposition))
        self.kb.define_concept(sc.name, self.subcategorization_concept(sc))
        self.subcategorizations[sc.name] = sc

    def add_alternation(self, alt: AlternationType):
        kb = self.kb
        if alt.name in self.alternations or alt.name in kb.definitions:
            raise DuplicateName(f"alternation {alt.name!r} already defined")
        sc = self.subcategorization(alt.subcategorization)
        extra = {g for g in alt.pattern.gfs if g is not None} - sc.base_gfs
        if extra:
            raise ValueError(f"alternation {alt.name!r} links GFs {sorted(extra)} absent from {sc.name!r}")
        if alt.restriction is not None:
            kb.normalize(alt.restriction)
        self.lexicon.ensure_arg_attributes(len(alt.pattern.gfs))
        test = linking_test_name(alt.name)
        kb.register_test(test, self._linking_test(alt))
        kb.define_concept(alt.name, conj(sc.name, Test(test)))
        kb.add_rule(ForwardRule(alt.name, self._linking_rule(alt), name=f"link:{alt.name}"))
        self.alternations[alt.name] = alt

    def _pattern_fillers(self, alt: AlternationType, ind) -> tuple[str | None, tuple]:
        verb = ind.filler(VERB)
        lemma = verb[len("verb:"):] if verb and verb.startswith("verb:") else None
        return lemma, alt.pattern.fillers({g: ind.filler(g) for g in self.gf_inventory})

    def _linking_test(self, alt: AlternationType):
        def legal(ind, kb) -> bool:
            lemma, fillers = self._pattern_fillers(alt, ind)
            if lemma is None or lemma not in self.lexicon.verbs:
                return False
            return bool(self.legal_linking(lemma, fillers, alt.restriction))
        return legal

    def _linking_rule(self, alt: AlternationType):
        def link(ind, kb):
            lemma, fillers = self._pattern_fillers(alt, ind)
            senses = self.legal_linking(lemma, fillers, alt.restriction)
            event = event_instance_name(ind.name, alt.name)
            out = [Assertion.fill(ind.name, DENOTES, event), Assertion.member(event, conj(senses))]
            for i, f in enumerate(fillers, 1):
                if f is not None:
                    out.append(Assertion.fill(event, arg_attribute(i), f))
            return out
        return link

    # -- lookups -------------------------------------------------------------

    def subcategorization(self, name: str) -> SubcategorizationType:
        try:
            return self.subcategorizations[name]
        except KeyError:
            raise UnknownSubcategorization(name) from None

    def alternation(self, name: str) -> AlternationType:
        try:
            return self.alternations[name]
        except KeyError:
            raise UnknownAlternation(name) from None

    # -- operations ----------------------------------------------------------

    def check_sentence(self, s: AnalyzedSentence):
        if not s.gfs:
            raise MalformedSentence(f"sentence {s.id}: no grammatical functions")
        self._check_tags(s.tags, f"sentence {s.id}")
        if "subj" in self.gf_inventory and s.filler("subj") is None:
            raise MalformedSentence(f"sentence {s.id}: no subject")
        self.lexicon.verb(s.verb)
        for _, lemma in s.gfs:
            self.lexicon.noun(lemma)

    def detect_subcategorization(self, s: AnalyzedSentence) -> SubcategorizationType:
        self._check_tags(s.tags, f"sentence {s.id}")
        found = [sc for sc in self.subcategorizations.values() if sc.matches(s.tags)]
        if not found:
            raise NoSubcategorization(f"sentence {s.id}: no subcategorization for {sorted(s.tags)}")
        # a preposition-constrained frame refines the bare one
        found.sort(key=lambda sc: (sc.preposition is None, sc.name))
        return found[0]

    def legal_linking(self, verb: str, fillers: Iterable[str | None], restriction=None) -> tuple:
        """Senses of ``verb`` whose required slots are all filled by nouns
        satisfying the slot restrictions, in sense declaration order."""
        lex = self.lexicon
        fillers = tuple(fillers)
        senses = lex.senses(verb)
        for f in fillers:
            if f is not None:
                lex.noun(f)
        out = []
        for sense in senses:
            ev = lex.event(sense)
            if restriction is not None and not self.kb.subsumes(restriction, sense):
                continue
            if any(f is not None for f in fillers[ev.arity:]):
                continue
            ok = True
            for i, slot in enumerate(ev.slots):
                f = fillers[i] if i < len(fillers) else None
                if f is None:
                    if slot.required:
                        ok = False
                        break
                elif not lex.satisfies(f, slot.restriction):
                    ok = False
                    break
            if ok:
                out.append(sense)
        return tuple(out)

    def sentence_individual(self, s: AnalyzedSentence, abox: ABox) -> str:
        name = f"sentence:{s.id}"
        bound = {split_gf(t)[0] for t in s.tags}
        closed = [AtMost(0, g) for g in self.gf_inventory if g not in bound]
        fillers: dict[str, list] = {VERB: [verb_individual(s.verb)]}
        for tag, lemma in s.gfs:
            base, prep = split_gf(tag)
            fillers[base] = [lemma]
            if prep is not None:
                fillers[PREP] = [prep_individual(prep)]
        abox.add_individual(name, [conj(SENTENCE, closed)], fillers)
        return name

    def classify_sentence(self, s: AnalyzedSentence) -> SentenceReport:
        self.check_sentence(s)
        sc = self.detect_subcategorization(s)
        kb = self.kb
        abox = kb.scratch()
        name = self.sentence_individual(s, abox)
        kb.fire_rules(name, abox)
        members = kb.instance_of(name, abox)
        alternations = tuple(sorted(a for a in self.alternations if a in members))
        concepts = tuple(sorted(kb.classify_individual(name, abox)))
        events = []
        denoted = abox.get(name).fillers.get(DENOTES, set())
        for alt in alternations:
            inst = event_instance_name(name, alt)
            if inst not in denoted:
                continue
            events.append(self._reading(alt, inst, abox, self.lexicon.senses(s.verb)))
        return SentenceReport(
            sentence=s.id,
            verb=s.verb,
            subcategorization=sc.name,
            alternations=alternations,
            concepts=concepts,
            events=tuple(events),
            text=s.text,
        )

    def _reading(self, alt: str, inst: str, abox: ABox, verb_senses: tuple) -> EventReading:
        kb, lex = self.kb, self.lexicon
        ind = abox.get(inst)
        members = kb.instance_of(inst, abox)
        senses = tuple(s for s in verb_senses if s in members)
        args = []
        i = 1
        while arg_attribute(i) in kb.attributes:
            f = ind.filler(arg_attribute(i))
            if f is not None:
                args.append((arg_attribute(i), f))
            i += 1
        filled = dict(args)
        roles = []
        for sense in senses:
            ev = lex.event(sense)
            roles.append((sense, tuple(
                (slot.label, filled[arg_attribute(k)])
                for k, slot in enumerate(ev.slots, 1)
                if arg_attribute(k) in filled
            )))
        return EventReading(
            alternation=alt,
            instance=inst,
            senses=senses,
            concepts=tuple(sorted(kb.classify_individual(inst, abox))),
            arguments=tuple(args),
            roles=tuple(roles),
        )


def event_instance_name(sentence_individual: str, alternation: str) -> str:
    return f"event:{sentence_individual.removeprefix('sentence:')}:{alternation}"
