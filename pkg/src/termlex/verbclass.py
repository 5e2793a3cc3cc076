"""Verb classes defined by good and bad alternations, and the corpus tests
that place a verb in them.

Both membership tests are closed-world over the supplied sentences only.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .errors import EmptyCorpusWarning, UnknownAlternation
from .sentence import SentenceClassifier, SentenceReport


@dataclass(frozen=True)
class VerbClass:
    name: str
    good: frozenset = frozenset()
    bad: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "good", frozenset(self.good))
        object.__setattr__(self, "bad", frozenset(self.bad))

    @property
    def alternations(self) -> frozenset:
        return self.good | self.bad


@dataclass(frozen=True)
class Corpus:
    lemma: str
    good: tuple = ()
    bad: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "good", tuple(self.good))
        object.__setattr__(self, "bad", tuple(self.bad))
        for s in self.good + self.bad:
            if s.verb != self.lemma:
                raise ValueError(f"sentence {s.id} has verb {s.verb!r}, corpus is for {self.lemma!r}")


def _reports(classifier: SentenceClassifier, sentences) -> Iterable[SentenceReport]:
    for s in sentences:
        yield s if isinstance(s, SentenceReport) else classifier.classify_sentence(s)


def have_instances_of(classifier: SentenceClassifier, sentences: Sequence, alternation: str) -> bool:
    """Is at least one sentence classified under ``alternation``?

    ``sentences`` may hold :class:`AnalyzedSentence` objects or precomputed
    :class:`SentenceReport` objects.
    """
    classifier.alternation(alternation)
    return any(alternation in r.alternations for r in _reports(classifier, sentences))


def have_no_instances_of(classifier: SentenceClassifier, bad_sentences: Sequence, subcategorization: str) -> bool:
    """Is at least one bad sentence classified as ``subcategorization`` and
    nothing more specific, i.e. under no alternation?"""
    classifier.subcategorization(subcategorization)
    return any(
        r.subcategorization == subcategorization and r.bare
        for r in _reports(classifier, bad_sentences)
    )


@dataclass(frozen=True)
class ClassProposal:
    """Observed behaviour of a verb, ready to become a new class definition."""
    good: tuple = ()
    bad: tuple = ()
    bad_subcategorizations: tuple = ()

    def as_class(self, name: str) -> VerbClass:
        return VerbClass(name, frozenset(self.good), frozenset(self.bad))

    def to_dict(self) -> dict:
        return {
            "good": list(self.good),
            "bad": list(self.bad),
            "bad_subcategorizations": list(self.bad_subcategorizations),
        }


@dataclass(frozen=True)
class VerbClassification:
    lemma: str
    matches: tuple
    proposal: ClassProposal
    failures: tuple = ()  # ((class name, (reason, ...)), ...)
    good_reports: tuple = field(default=(), compare=False)
    bad_reports: tuple = field(default=(), compare=False)

    @property
    def new_class(self) -> bool:
        return not self.matches

    def to_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "matches": list(self.matches),
            "new_class": self.new_class,
            "proposal": self.proposal.to_dict(),
            "failures": {c: list(rs) for c, rs in self.failures},
        }


def class_failures(classifier: SentenceClassifier, vc: VerbClass, good: Sequence, bad: Sequence) -> tuple:
    """Reasons ``vc`` does not fit the classified corpus; empty when it matches."""
    reasons = []
    for a in sorted(vc.good):
        if not have_instances_of(classifier, good, a):
            reasons.append(f"no good sentence exhibits {a}")
    for b in sorted(vc.bad):
        if have_instances_of(classifier, good, b):
            reasons.append(f"good sentences exhibit prohibited {b}")
            continue
        base = classifier.alternation(b).subcategorization
        if any(r.subcategorization == base for r in bad):
            if not (have_instances_of(classifier, bad, b) or have_no_instances_of(classifier, bad, base)):
                reasons.append(f"bad {base} sentences do not evidence the prohibition of {b}")
    return tuple(reasons)


def classify_verb(classifier: SentenceClassifier, corpus: Corpus, classes: Iterable[VerbClass]) -> VerbClassification:
    classes = list(classes)
    for vc in classes:
        for a in sorted(vc.alternations):
            classifier.alternation(a)
    if not corpus.good and not corpus.bad:
        warnings.warn(f"corpus for {corpus.lemma!r} has no sentences", EmptyCorpusWarning, stacklevel=2)
    good = tuple(_reports(classifier, corpus.good))
    bad = tuple(_reports(classifier, corpus.bad))
    failures = {}
    matches = []
    for vc in classes:
        reasons = class_failures(classifier, vc, good, bad)
        if reasons:
            failures[vc.name] = reasons
        else:
            matches.append(vc.name)
    seen_good = {a for r in good for a in r.alternations}
    seen_bad = {a for r in bad for a in r.alternations} - seen_good
    bare_bad = {r.subcategorization for r in bad if r.bare}
    return VerbClassification(
        lemma=corpus.lemma,
        matches=tuple(sorted(set(matches))),
        proposal=ClassProposal(tuple(sorted(seen_good)), tuple(sorted(seen_bad)), tuple(sorted(bare_bad))),
        failures=tuple(sorted(failures.items())),
        good_reports=good,
        bad_reports=bad,
    )


@dataclass(frozen=True)
class ClassIssue:
    kind: str  # "overlap" | "duplicate" | "refines"
    severity: str  # "error" | "note"
    classes: tuple
    alternations: tuple = ()

    @property
    def message(self) -> str:
        if self.kind == "overlap":
            return f"{self.classes[0]} lists {', '.join(self.alternations)} as both good and bad"
        if self.kind == "duplicate":
            return f"{self.classes[0]} and {self.classes[1]} have identical signatures"
        return (f"{self.classes[0]} refines {self.classes[1]} "
                f"(additional good: {', '.join(self.alternations)})")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "severity": self.severity,
            "classes": list(self.classes),
            "alternations": list(self.alternations),
            "message": self.message,
        }


_KIND_ORDER = {"overlap": 0, "duplicate": 1, "refines": 2}


def check_class_consistency(classes: Iterable[VerbClass], alternations: Iterable[str] | None = None) -> list[ClassIssue]:
    """Flag contradictory, duplicated and refining class definitions.

    With ``alternations`` given, every name a class uses must be among them.
    """
    classes = sorted(classes, key=lambda c: c.name)
    if alternations is not None:
        known = set(alternations)
        for vc in classes:
            for a in sorted(vc.alternations):
                if a not in known:
                    raise UnknownAlternation(a)
    issues = []
    for vc in classes:
        both = vc.good & vc.bad
        if both:
            issues.append(ClassIssue("overlap", "error", (vc.name,), tuple(sorted(both))))
    for a, b in combinations(classes, 2):
        if a.good == b.good and a.bad == b.bad:
            issues.append(ClassIssue("duplicate", "error", (a.name, b.name)))
    for a in classes:
        for b in classes:
            if a is b:
                continue
            if a.good > b.good and not (a.good & b.bad) and not (a.bad & b.good):
                issues.append(ClassIssue("refines", "note", (a.name, b.name), tuple(sorted(a.good - b.good))))
    issues.sort(key=lambda i: (_KIND_ORDER[i.kind], i.classes))
    return issues
