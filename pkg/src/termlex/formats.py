"""Line-oriented declaration files: knowledge bases, sentence corpora and grammars.

Knowledge-base and sentence files share one syntax, one declaration per line
with ``#`` comments::

    attribute NAME [multi]
    gf NAME
    feature NAME [< PARENT, ...]
    disjoint GROUP: NAME, NAME, ...
    concept NAME = EXPR                  # defined
    concept NAME < EXPR                  # primitive, EXPR gives necessary conditions
    event NAME [< EXPR]: label[EXPR], label[EXPR]?, ...   # ? marks an optional slot
    noun LEMMA = EXPR
    verb LEMMA: SENSE, SENSE, ...
    subcat NAME: GF, GF, ...             # ppo:for constrains the preposition
    alternation NAME: SUBCAT (GF GF - GF) [with EXPR]
    class NAME: good ALT, ALT; bad ALT, ...
    good | bad                           # section header for following sentences
    sentence [good|bad] ID VERB GF=LEMMA ... ["display text"]

Expressions are ``&``-joined atoms: ``NAME``, ``prim NAME``, ``all ATTR (EXPR)``,
``atleast N ATTR``, ``atmost N ATTR``, ``fills ATTR IND``, ``test NAME`` or ``TOP``.
Names containing spaces are double-quoted.

Grammar files hold rules followed by their equations::

    feature feature1
    rule 1: S -> NP VP
      <NP feature1> = <VP feature1>
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .errors import KBSyntaxError, TermlexError, UnknownName
from .grammarcheck import FeatureEquation, GrammarRule, PathRef
from .kr import All, And, AtLeast, AtMost, ConceptDefinition, Fills, Prim, Ref, Test
from .kr.expr import quote_name
from .lexicon import ENTITY, EVENT, EventType, Lexicon, NounEntry, SemanticFeature, Slot, VerbEntry
from .sentence import (
    DENOTES,
    GF_INVENTORY,
    PREP,
    SENTENCE,
    VERB,
    AlternationType,
    AnalyzedSentence,
    LinkingPattern,
    SentenceClassifier,
    SubcategorizationType,
    split_gf,
)
from .verbclass import VerbClass

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#.*)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<arrow>->)
  | (?P<word>[A-Za-z0-9_][\w\-+.'/]*(?::[\w][\w\-+.'/]*)*)
  | (?P<punct>[:,&()\[\]=?;<>+\-−])
""", re.X)

KEYWORDS = ("attribute", "gf", "feature", "disjoint", "concept", "event", "noun", "verb",
            "subcat", "alternation", "class", "sentence", "good", "bad")
LABELS = ("good", "bad")


@dataclass(frozen=True)
class Token:
    kind: str  # word | string | punct
    text: str
    line: int
    col: int

    @property
    def value(self) -> str:
        if self.kind == "string":
            return re.sub(r"\\(.)", r"\1", self.text[1:-1])
        if self.text == "−":
            return "-"
        return self.text


def tokenize(line: str, lineno: int, source: str | None = None) -> list[Token]:
    out = []
    pos = 0
    while pos < len(line):
        m = _TOKEN.match(line, pos)
        if m is None:
            raise KBSyntaxError(f"unexpected character {line[pos]!r}", lineno, pos + 1, source)
        kind = m.lastgroup
        if kind == "comment":
            break
        if kind != "ws":
            out.append(Token("punct" if kind == "arrow" else kind, m.group(), lineno, pos + 1))
        pos = m.end()
    return out


class _Line:
    def __init__(self, tokens: list[Token], lineno: int, length: int, source):
        self.tokens = tokens
        self.i = 0
        self.lineno = lineno
        self.end_col = length + 1
        self.source = source

    def error(self, msg, tok: Token | None = None):
        if tok is None:
            tok = self.peek()
        col = tok.col if tok is not None else self.end_col
        return KBSyntaxError(msg, self.lineno, col, self.source)

    def peek(self, k: int = 0) -> Token | None:
        j = self.i + k
        return self.tokens[j] if j < len(self.tokens) else None

    def at(self, text: str) -> bool:
        t = self.peek()
        return t is not None and t.kind != "string" and t.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        t = self.peek()
        if not self.at(text):
            raise self.error(f"expected {text!r}" + (f", found {t.text!r}" if t else " at end of line"))
        self.i += 1
        return t

    def name(self, what: str = "name") -> Token:
        t = self.peek()
        if t is None or t.kind == "punct":
            raise self.error(f"expected {what}" + (f", found {t.text!r}" if t else " at end of line"))
        self.i += 1
        return t

    def integer(self) -> int:
        t = self.name("number")
        if not t.text.isdigit():
            raise self.error(f"expected a non-negative integer, found {t.text!r}", t)
        return int(t.text)

    def done(self) -> bool:
        return self.i >= len(self.tokens)

    def end(self):
        if not self.done():
            raise self.error(f"unexpected {self.peek().text!r}")


@dataclass(frozen=True)
class Declaration:
    keyword: str
    value: object
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass
class KBDocument:
    declarations: list = field(default_factory=list)
    source: str | None = None

    def of(self, keyword: str) -> list:
        return [d.value for d in self.declarations if d.keyword == keyword]

    def __eq__(self, other):
        return isinstance(other, KBDocument) and self.declarations == other.declarations


class _Scope:
    """Names declared so far, for rejecting forward references."""

    def __init__(self):
        self.concepts = {"TOP", "BOTTOM", ENTITY, EVENT, SENTENCE}
        self.primitives = {ENTITY, EVENT, SENTENCE}
        self.attributes = {PREP, VERB, DENOTES, *GF_INVENTORY}
        self.gfs = set(GF_INVENTORY)
        self.events: set[str] = set()
        self.subcats: set[str] = set()
        self.alternations: set[str] = set()
        self.verbs: set[str] = set()
        self.nouns: set[str] = set()
        self.max_arg = 0

    def add_args(self, n):
        for i in range(1, n + 1):
            self.attributes.add(f"arg{i}")


class _Parser:
    def __init__(self, source: str | None, scope: _Scope | None):
        self.source = source
        self.scope = scope
        self.section: str | None = None

    # -- names -----------------------------------------------------------------

    def _use(self, ln: _Line, tok: Token, table: set, kind: str):
        if self.scope is not None and tok.value not in table:
            raise UnknownName(tok.value, kind, line=ln.lineno, col=tok.col)
        return tok.value

    def _new(self, ln: _Line, tok: Token, table: set | None, kind: str):
        name = tok.value
        if name in KEYWORDS and tok.kind != "string" and kind != "lemma":
            raise ln.error(f"{name!r} is a keyword and cannot name a {kind}", tok)
        if self.scope is not None and table is not None and name in table:
            raise ln.error(f"{kind} {name!r} already declared", tok)
        return name

    # -- expressions -------------------------------------------------------------

    def expr(self, ln: _Line) -> And:
        if ln.at("TOP") and (ln.peek(1) is None or ln.peek(1).text not in ("&",)):
            ln.i += 1
            return And(())
        atoms = list(self.atom(ln).atoms)
        while ln.accept("&"):
            atoms.extend(self.atom(ln).atoms)
        return And(tuple(atoms))

    def atom(self, ln: _Line) -> And:
        sc = self.scope
        if ln.accept("("):
            e = self.expr(ln)
            ln.expect(")")
            return e
        t = ln.name("concept expression")
        word = t.text if t.kind == "word" else None
        if word == "all":
            attr = self._use(ln, ln.name("attribute"), sc.attributes if sc else set(), "attribute")
            if ln.accept("("):
                inner = self.expr(ln)
                ln.expect(")")
            else:
                inner = self.atom(ln)
            return And((All(attr, inner),))
        if word in ("atleast", "atmost"):
            n = ln.integer()
            attr = self._use(ln, ln.name("attribute"), sc.attributes if sc else set(), "attribute")
            return And(((AtLeast if word == "atleast" else AtMost)(n, attr),))
        if word == "fills":
            attr = self._use(ln, ln.name("attribute"), sc.attributes if sc else set(), "attribute")
            return And((Fills(attr, ln.name("individual").value),))
        if word == "test":
            return And((Test(ln.name("test name").value),))
        if word == "prim":
            tok = ln.name("primitive concept")
            return And((Prim(self._use(ln, tok, sc.primitives if sc else set(), "primitive concept")),))
        if t.kind == "word" and t.text == "TOP":
            return And(())
        return And((Ref(self._use(ln, t, sc.concepts if sc else set(), "concept")),))

    def name_list(self, ln: _Line, what: str) -> list[Token]:
        out = [ln.name(what)]
        while ln.accept(","):
            out.append(ln.name(what))
        return out

    # -- declarations ------------------------------------------------------------

    def parse_line(self, ln: _Line) -> Declaration | None:
        head = ln.name("declaration keyword")
        kw = head.text if head.kind == "word" else None
        method = getattr(self, f"_d_{kw}", None) if kw in KEYWORDS else None
        if method is None:
            raise ln.error(f"unknown declaration {head.text!r}", head)
        value = method(ln)
        ln.end()
        if value is None:
            return None
        return Declaration(kw, value, ln.lineno, head.col)

    def _d_attribute(self, ln):
        name = self._new(ln, ln.name("attribute"), self.scope and self.scope.attributes, "attribute")
        multi = False
        if not ln.done():
            t = ln.name("'multi'")
            if t.text != "multi":
                raise ln.error(f"expected 'multi', found {t.text!r}", t)
            multi = True
        if self.scope:
            self.scope.attributes.add(name)
        return (name, multi)

    def _d_gf(self, ln):
        tok = ln.name("grammatical function")
        name = self._new(ln, tok, self.scope and self.scope.gfs, "grammatical function")
        if ":" in name:
            raise ln.error("a grammatical function may not carry a preposition", tok)
        if self.scope:
            self.scope.gfs.add(name)
            self.scope.attributes.add(name)
        return name

    def _d_feature(self, ln):
        sc = self.scope
        name = self._new(ln, ln.name("feature"), sc and sc.concepts, "feature")
        parents: tuple = (ENTITY,)
        if ln.accept("<"):
            parents = tuple(self._use(ln, t, sc.concepts if sc else set(), "feature")
                            for t in self.name_list(ln, "parent feature"))
        if sc:
            sc.concepts.add(name)
            sc.primitives.add(name)
        return SemanticFeature(name, parents)

    def _d_disjoint(self, ln):
        sc = self.scope
        group = ln.name("group label").value
        ln.expect(":")
        names = tuple(self._use(ln, t, sc.primitives if sc else set(), "primitive concept")
                      for t in self.name_list(ln, "primitive concept"))
        return (group, names)

    def _d_concept(self, ln):
        sc = self.scope
        name = self._new(ln, ln.name("concept"), sc and sc.concepts, "concept")
        if ln.accept("="):
            kind = "defined"
        elif ln.accept("<"):
            kind = "primitive"
        else:
            raise ln.error("expected '=' (defined) or '<' (primitive)")
        expr = self.expr(ln) if not ln.done() else And(())
        if sc:
            sc.concepts.add(name)
            if kind == "primitive":
                sc.primitives.add(name)
        return ConceptDefinition(name, kind, expr)

    def _d_event(self, ln):
        sc = self.scope
        name = self._new(ln, ln.name("event"), sc and sc.concepts, "event")
        isa = And(())
        if ln.accept("<"):
            isa = self.expr(ln)
        slots = []
        if ln.accept(":") and not ln.done():
            while True:
                label = ln.name("slot label").value
                ln.expect("[")
                restriction = self.expr(ln) if not ln.at("]") else And(())
                ln.expect("]")
                required = not ln.accept("?")
                slots.append(Slot(label, restriction, required))
                if not ln.accept(","):
                    break
        if sc:
            sc.concepts.add(name)
            sc.primitives.add(name)
            sc.events.add(name)
            sc.add_args(len(slots))
        return EventType(name, tuple(slots), isa)

    def _d_noun(self, ln):
        sc = self.scope
        lemma = self._new(ln, ln.name("noun lemma"), sc and sc.nouns, "lemma")
        ln.expect("=")
        denotation = self.expr(ln)
        if sc:
            sc.nouns.add(lemma)
        return NounEntry(lemma, denotation)

    def _d_verb(self, ln):
        sc = self.scope
        lemma = self._new(ln, ln.name("verb lemma"), sc and sc.verbs, "lemma")
        ln.expect(":")
        senses = tuple(self._use(ln, t, sc.events if sc else set(), "event")
                       for t in self.name_list(ln, "event"))
        if sc:
            sc.verbs.add(lemma)
        return VerbEntry(lemma, senses)

    def _gf_tag(self, ln, tok: Token) -> str:
        tag = tok.value
        base, _ = split_gf(tag)
        if self.scope is not None and base not in self.scope.gfs:
            raise UnknownName(tag, "grammatical function", line=ln.lineno, col=tok.col)
        return tag

    def _d_subcat(self, ln):
        sc = self.scope
        name = self._new(ln, ln.name("subcategorization"), sc and sc.concepts, "subcategorization")
        ln.expect(":")
        gfs = frozenset(self._gf_tag(ln, t) for t in self.name_list(ln, "grammatical function"))
        if sc:
            sc.concepts.add(name)
            sc.subcats.add(name)
        return SubcategorizationType(name, gfs)

    def _d_alternation(self, ln):
        sc = self.scope
        name = self._new(ln, ln.name("alternation"), sc and sc.concepts, "alternation")
        ln.expect(":")
        base = self._use(ln, ln.name("subcategorization"), sc.subcats if sc else set(), "subcategorization")
        ln.expect("(")
        gfs = []
        while not ln.accept(")"):
            if ln.accept("-"):
                gfs.append(None)
            else:
                gfs.append(self._gf_tag(ln, ln.name("grammatical function")))
        restriction = None
        if ln.at("with"):
            ln.i += 1
            restriction = self.expr(ln)
        try:
            pattern = LinkingPattern(tuple(gfs))
        except ValueError as e:
            raise ln.error(str(e)) from None
        if sc:
            sc.concepts.add(name)
            sc.alternations.add(name)
            sc.add_args(len(gfs))
        return AlternationType(name, base, pattern, restriction)

    def _d_class(self, ln):
        sc = self.scope
        name = ln.name("class").value
        ln.expect(":")
        parts = {"good": [], "bad": []}
        while True:
            t = ln.name("'good' or 'bad'")
            if t.text not in parts:
                raise ln.error(f"expected 'good' or 'bad', found {t.text!r}", t)
            if not ln.at(";") and not ln.done():
                parts[t.text].extend(
                    self._use(ln, a, sc.alternations if sc else set(), "alternation")
                    for a in self.name_list(ln, "alternation"))
            if not ln.accept(";"):
                break
        return VerbClass(name, frozenset(parts["good"]), frozenset(parts["bad"]))

    def _d_good(self, ln):
        ln.accept(":")
        self.section = "good"
        return None

    def _d_bad(self, ln):
        ln.accept(":")
        self.section = "bad"
        return None

    def _d_sentence(self, ln):
        label = self.section
        t = ln.peek()
        if t is not None and t.kind == "word" and t.text in LABELS and ln.peek(1) is not None \
                and ln.peek(1).kind != "punct":
            label = t.text
            ln.i += 1
        sid = ln.name("sentence id").value
        verb = ln.name("verb lemma").value
        gfs = []
        text = ""
        while not ln.done():
            t = ln.name("grammatical function or display text")
            if t.kind == "string" and not ln.at("="):
                text = t.value
                continue
            ln.expect("=")
            value = ln.name("noun lemma").value
            if t.value == "text":
                text = value
            else:
                gfs.append((self._gf_tag(ln, t), value))
        return (label, AnalyzedSentence(sid, verb, tuple(gfs), text))


def _parse(text: str, source: str | None, scope: _Scope | None, allowed: tuple | None) -> KBDocument:
    parser = _Parser(source, scope)
    doc = KBDocument(source=source)
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = tokenize(raw, lineno, source)
        if not tokens:
            continue
        ln = _Line(tokens, lineno, len(raw), source)
        head = tokens[0]
        if allowed is not None and head.text not in allowed:
            raise ln.error(f"{head.text!r} declarations are not allowed here", head)
        try:
            decl = parser.parse_line(ln)
        except UnknownName as e:
            if source and e.line is not None:
                e.args = (f"{source}:{e.line}:{e.col}: unknown {e.kind} {e.name!r}",)
            raise
        if decl is not None:
            doc.declarations.append(decl)
    return doc


def parse_kb(text: str, source: str | None = None, check_names: bool = True) -> KBDocument:
    """Parse a knowledge-base file, rejecting forward references."""
    return _parse(text, source, _Scope() if check_names else None, None)


def parse_sentences(text: str, source: str | None = None) -> list[tuple]:
    """Parse a sentence file into ``(label, AnalyzedSentence)`` pairs; label may be None."""
    doc = _parse(text, source, None, ("sentence", "good", "bad"))
    return [d.value for d in doc.declarations]


def read_kb(path) -> KBDocument:
    p = Path(path)
    return parse_kb(p.read_text(encoding="utf-8"), source=str(p))


def read_sentences(path) -> list[tuple]:
    p = Path(path)
    return parse_sentences(p.read_text(encoding="utf-8"), source=str(p))


# -- pretty printing -------------------------------------------------------------


def _q(name: str) -> str:
    return quote_name(name)


def format_declaration(d: Declaration) -> str:
    kw, v = d.keyword, d.value
    if kw == "attribute":
        return f"attribute {_q(v[0])}" + (" multi" if v[1] else "")
    if kw == "gf":
        return f"gf {_q(v)}"
    if kw == "feature":
        if tuple(v.parents) == (ENTITY,):
            return f"feature {_q(v.name)}"
        return f"feature {_q(v.name)} < {', '.join(_q(p) for p in v.parents)}"
    if kw == "disjoint":
        return f"disjoint {_q(v[0])}: {', '.join(_q(n) for n in v[1])}"
    if kw == "concept":
        op = "=" if v.kind == "defined" else "<"
        return f"concept {_q(v.name)} {op} {v.expression}"
    if kw == "event":
        head = f"event {_q(v.name)}"
        if v.isa.atoms:
            head += f" < {v.isa}"
        if not v.slots:
            return head
        slots = ", ".join(f"{_q(s.label)}[{s.restriction if s.restriction.atoms else ''}]"
                          + ("" if s.required else "?") for s in v.slots)
        return f"{head}: {slots}"
    if kw == "noun":
        return f"noun {_q(v.lemma)} = {v.denotation}"
    if kw == "verb":
        return f"verb {_q(v.lemma)}: {', '.join(_q(s) for s in v.senses)}"
    if kw == "subcat":
        return f"subcat {_q(v.name)}: {', '.join(sorted(v.gfs))}"
    if kw == "alternation":
        pattern = " ".join("-" if g is None else g for g in v.pattern.gfs)
        out = f"alternation {_q(v.name)}: {_q(v.subcategorization)} ({pattern})"
        if v.restriction is not None:
            out += f" with {v.restriction}"
        return out
    if kw == "class":
        parts = []
        if v.good:
            parts.append("good " + ", ".join(_q(a) for a in sorted(v.good)))
        if v.bad:
            parts.append("bad " + ", ".join(_q(a) for a in sorted(v.bad)))
        return f"class {_q(v.name)}: " + ("; ".join(parts) if parts else "good")
    if kw == "sentence":
        label, s = v
        out = "sentence " + (f"{label} " if label else "") + f"{_q(s.id)} {_q(s.verb)}"
        for g, n in s.gfs:
            out += f" {g}={_q(n)}"
        if s.text:
            out += " " + '"' + s.text.replace("\\", "\\\\").replace('"', '\\"') + '"'
        return out
    raise ValueError(f"unknown declaration keyword {kw!r}")


def format_document(doc: KBDocument) -> str:
    return "".join(format_declaration(d) + "\n" for d in doc.declarations)


# -- loading -----------------------------------------------------------------------


@dataclass
class Workspace:
    """A loaded knowledge base with its lexicon, sentence classifier and verb classes."""
    lexicon: Lexicon
    classifier: SentenceClassifier
    classes: dict = field(default_factory=dict)
    sentences: list = field(default_factory=list)

    @property
    def kb(self):
        return self.lexicon.kb

    def freeze(self) -> "Workspace":
        self.kb.freeze()
        return self


class LoadError(TermlexError):
    def __init__(self, message: str, line: int, col: int, source: str | None = None):
        self.line, self.col, self.source = line, col, source
        prefix = f"{source}:" if source else ""
        super().__init__(f"{prefix}{line}:{col}: {message}")


def build_workspace(doc: KBDocument, freeze: bool = True) -> Workspace:
    lexicon = Lexicon()
    classifier = SentenceClassifier(lexicon, gf_inventory=())
    ws = Workspace(lexicon, classifier)
    kb = lexicon.kb
    gfs_done = False

    def finish_gfs():
        nonlocal gfs_done
        if not gfs_done:
            for g in GF_INVENTORY:
                if g not in classifier.gf_inventory:
                    classifier.add_gf(g)
            gfs_done = True

    for d in doc.declarations:
        kw, v = d.keyword, d.value
        try:
            if kw == "gf":
                if gfs_done:
                    raise ValueError("gf declarations must precede subcategorizations and sentences")
                classifier.add_gf(v)
                continue
            if kw in ("subcat", "alternation", "sentence"):
                finish_gfs()
            if kw == "attribute":
                kb.declare_attribute(v[0], multivalued=v[1])
            elif kw == "feature":
                lexicon.add_feature(v)
            elif kw == "disjoint":
                kb.declare_disjoint(v[0], v[1])
            elif kw == "concept":
                kb.classify_concept(v)
            elif kw == "event":
                lexicon.add_event(v)
            elif kw == "noun":
                lexicon.add_noun(v)
            elif kw == "verb":
                lexicon.add_verb(v)
            elif kw == "subcat":
                classifier.add_subcategorization(v)
            elif kw == "alternation":
                classifier.add_alternation(v)
            elif kw == "class":
                if v.name in ws.classes:
                    raise ValueError(f"class {v.name!r} already declared")
                ws.classes[v.name] = v
            elif kw == "sentence":
                ws.sentences.append(v)
        except (TermlexError, ValueError) as e:
            if isinstance(e, LoadError):
                raise
            raise LoadError(str(e), d.line, d.col, doc.source) from e
    finish_gfs()
    if freeze:
        ws.freeze()
    return ws


def load_kb(path) -> Workspace:
    return build_workspace(read_kb(path))


# -- grammar files -------------------------------------------------------------------


@dataclass
class GrammarDocument:
    rules: list = field(default_factory=list)
    features: tuple | None = None
    source: str | None = None


def _path_ref(ln: _Line) -> PathRef:
    ln.expect("<")
    sym = ln.name("category").value
    index = None
    if ln.accept("["):
        index = ln.integer()
        ln.expect("]")
    feature = None
    if not ln.at(">"):
        feature = ln.name("feature").value
    ln.expect(">")
    return PathRef(sym, index, feature)


def _equation(ln: _Line) -> FeatureEquation:
    from .errors import MalformedEquation

    start = ln.peek()
    left = _path_ref(ln)
    ln.expect("=")
    if ln.at("<"):
        right = _path_ref(ln)
    elif ln.at("+") or ln.at("-"):
        right = ln.peek().value
        ln.i += 1
    else:
        raise ln.error("expected <path> or a value + / -")
    try:
        return FeatureEquation(left, right)
    except MalformedEquation as e:
        raise KBSyntaxError(str(e), ln.lineno, start.col, ln.source) from None


def parse_grammar(text: str, source: str | None = None) -> GrammarDocument:
    """Parse ``rule``/``feature`` declarations; equations follow their rule,
    either on their own lines or after ``;`` on the rule line."""
    doc = GrammarDocument(source=source)
    features: list[str] = []
    rules: list = []  # [id, lhs, rhs, equations]
    for lineno, raw in enumerate(text.splitlines(), 1):
        tokens = tokenize(raw, lineno, source)
        if not tokens:
            continue
        ln = _Line(tokens, lineno, len(raw), source)
        if ln.at("<"):
            if not rules:
                raise ln.error("equation outside of a rule")
            rules[-1][3].append(_equation(ln))
            while ln.accept(";"):
                rules[-1][3].append(_equation(ln))
            ln.end()
            continue
        head = ln.name("'rule' or 'feature'")
        if head.text == "feature":
            features.extend(t.value for t in ln.tokens[ln.i:] if t.text != ",")
            if any(t.kind == "punct" and t.text != "," for t in ln.tokens[ln.i:]):
                raise ln.error("feature names must be separated by commas")
            continue
        if head.text != "rule":
            raise ln.error(f"unknown grammar declaration {head.text!r}", head)
        rid = ln.name("rule id").value
        ln.expect(":")
        lhs = ln.name("category").value
        ln.expect("->")
        rhs = []
        while not ln.done() and not ln.at(";"):
            rhs.append(ln.name("category").value)
        rules.append([rid, lhs, rhs, []])
        while ln.accept(";"):
            rules[-1][3].append(_equation(ln))
        ln.end()
    doc.rules = [GrammarRule(rid, lhs, tuple(rhs), tuple(eqs)) for rid, lhs, rhs, eqs in rules]
    doc.features = tuple(features) if features else None
    return doc


def read_grammar(path) -> GrammarDocument:
    p = Path(path)
    return parse_grammar(p.read_text(encoding="utf-8"), source=str(p))


def format_grammar(doc: GrammarDocument) -> str:
    lines = []
    if doc.features:
        lines.append("feature " + ", ".join(doc.features))
    for r in doc.rules:
        lines.append(f"rule {r.id}: {r.lhs} -> {' '.join(r.rhs)}")
        lines.extend(f"  {e}" for e in r.equations)
    return "".join(line + "\n" for line in lines)
