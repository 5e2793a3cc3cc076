"""Exception hierarchy shared by every termlex module."""

from __future__ import annotations


class TermlexError(Exception):
    """Base class for all termlex errors."""


class UnknownName(TermlexError):
    """A concept, attribute, individual or lexical name was used before it was declared."""

    def __init__(self, name: str, kind: str = "name", line: int | None = None, col: int | None = None):
        self.name = name
        self.kind = kind
        self.line = line
        self.col = col
        where = f" at {line}:{col}" if line is not None else ""
        super().__init__(f"unknown {kind} {name!r}{where}")


class DuplicateName(TermlexError):
    pass


class CyclicDefinition(TermlexError):
    pass


class KBFrozen(TermlexError):
    """Raised on any attempt to mutate a frozen knowledge base."""


class UnregisteredTest(TermlexError):
    pass


class DuplicateTestName(TermlexError):
    pass


class RuleLimitExceeded(TermlexError):
    pass


# lexicon

class DuplicateLemma(DuplicateName):
    pass


class DuplicateEvent(DuplicateName):
    pass


class IncoherentDenotation(TermlexError):
    pass


class UnknownFeature(UnknownName):
    def __init__(self, name: str, **kw):
        super().__init__(name, kind="feature", **kw)


class UnknownEvent(UnknownName):
    def __init__(self, name: str, **kw):
        super().__init__(name, kind="event", **kw)


class UnknownLemma(UnknownName):
    def __init__(self, name: str, **kw):
        super().__init__(name, kind="lemma", **kw)


class UnknownVerb(UnknownName):
    def __init__(self, name: str, **kw):
        super().__init__(name, kind="verb", **kw)


# sentences and verb classes

class MalformedSentence(TermlexError):
    pass


class NoSubcategorization(TermlexError):
    pass


class UnknownSubcategorization(UnknownName):
    def __init__(self, name: str, **kw):
        super().__init__(name, kind="subcategorization", **kw)


class UnknownAlternation(UnknownName):
    def __init__(self, name: str, **kw):
        super().__init__(name, kind="alternation", **kw)


class EmptyCorpusWarning(UserWarning):
    pass


# grammar checking

class UnknownSymbol(UnknownName):
    def __init__(self, name: str, **kw):
        super().__init__(name, kind="symbol", **kw)


class MalformedEquation(TermlexError):
    pass


# file formats

class KBSyntaxError(TermlexError):
    def __init__(self, message: str, line: int, col: int, source: str | None = None):
        self.message = message
        self.line = line
        self.col = col
        self.source = source
        prefix = f"{source}:" if source else ""
        super().__init__(f"{prefix}{line}:{col}: {message}")
