"""Concept expressions of the terminological language and their normal forms.

An expression is always a conjunction (:class:`And`) of atoms.  Bare atoms
and names are accepted wherever an expression is expected and are wrapped by
:func:`conj`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Union

_BARE = re.compile(r"^[A-Za-z_][\w\-+.']*(?::[\w][\w\-]*)?$")
RESERVED = frozenset({"all", "atleast", "atmost", "fills", "test", "prim"})


def quote_name(name: str) -> str:
    if _BARE.match(name) and name not in RESERVED:
        return name
    return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'


@dataclass(frozen=True)
class Prim:
    """Reference to a primitive concept; checked to be primitive on normalization."""
    name: str

    def __str__(self):
        return f"prim {quote_name(self.name)}"


@dataclass(frozen=True)
class Ref:
    name: str

    def __str__(self):
        return quote_name(self.name)


@dataclass(frozen=True)
class All:
    attribute: str
    concept: "And"

    def __post_init__(self):
        if not isinstance(self.concept, And):
            object.__setattr__(self, "concept", conj(self.concept))

    def __str__(self):
        return f"all {quote_name(self.attribute)} ({self.concept})"


@dataclass(frozen=True)
class AtLeast:
    n: int
    attribute: str

    def __post_init__(self):
        _check_bound(self.n)

    def __str__(self):
        return f"atleast {self.n} {quote_name(self.attribute)}"


@dataclass(frozen=True)
class AtMost:
    n: int
    attribute: str

    def __post_init__(self):
        _check_bound(self.n)

    def __str__(self):
        return f"atmost {self.n} {quote_name(self.attribute)}"


@dataclass(frozen=True)
class Fills:
    attribute: str
    individual: str

    def __str__(self):
        return f"fills {quote_name(self.attribute)} {quote_name(self.individual)}"


@dataclass(frozen=True)
class Test:
    name: str

    def __str__(self):
        return f"test {quote_name(self.name)}"


Atom = Union[Prim, Ref, All, AtLeast, AtMost, Fills, Test]
ATOM_TYPES = (Prim, Ref, All, AtLeast, AtMost, Fills, Test)


@dataclass(frozen=True)
class And:
    atoms: tuple = ()

    def __str__(self):
        if not self.atoms:
            return "TOP"
        return " & ".join(str(a) for a in self.atoms)

    def __iter__(self):
        return iter(self.atoms)


def _check_bound(n):
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ValueError(f"number restriction bound must be a non-negative integer, got {n!r}")


ExprLike = Union[And, Atom, str]


def conj(*parts: ExprLike | Iterable[ExprLike]) -> And:
    """Flatten names, atoms and conjunctions into a single :class:`And`."""
    atoms: list = []

    def add(p):
        if isinstance(p, And):
            atoms.extend(p.atoms)
        elif isinstance(p, ATOM_TYPES):
            atoms.append(p)
        elif isinstance(p, str):
            atoms.append(Ref(p))
        elif isinstance(p, NormalForm):
            atoms.extend(denormalize(p).atoms)
        else:
            for q in p:
                add(q)

    for p in parts:
        add(p)
    return And(tuple(atoms))


TOP_EXPR = And(())


# ---------------------------------------------------------------------------
# normal forms


@dataclass(frozen=True)
class Restriction:
    """Merged constraints on one attribute.  ``max is None`` means unbounded,
    ``value is None`` means the value restriction is TOP."""
    min: int = 0
    max: int | None = None
    fillers: frozenset = frozenset()
    value: "NormalForm | None" = None


@dataclass(frozen=True)
class NormalForm:
    primitives: frozenset = frozenset()
    attributes: tuple = ()  # sorted ((attribute, Restriction), ...)
    tests: frozenset = frozenset()
    coherent: bool = True
    _index: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def restriction(self, attribute: str) -> Restriction | None:
        idx = self._index
        if idx is None:
            idx = dict(self.attributes)
            object.__setattr__(self, "_index", idx)
        return idx.get(attribute)

    @property
    def attribute_names(self):
        return tuple(a for a, _ in self.attributes)

    def __str__(self):
        return str(denormalize(self))


BOTTOM_NF = NormalForm(coherent=False)
TOP_NF = NormalForm()


def denormalize(nf: NormalForm) -> And:
    """Render a normal form back into an expression; ``normalize`` inverts it."""
    if not nf.coherent:
        return And((Ref("BOTTOM"),))
    atoms: list = [Ref(p) for p in sorted(nf.primitives)]
    for attr, r in nf.attributes:
        if r.min > len(r.fillers):
            atoms.append(AtLeast(r.min, attr))
        if r.max is not None:
            atoms.append(AtMost(r.max, attr))
        atoms.extend(Fills(attr, f) for f in sorted(r.fillers))
        if r.value is not None:
            atoms.append(All(attr, denormalize(r.value)))
    atoms.extend(Test(t) for t in sorted(nf.tests))
    return And(tuple(atoms))


def subsumes(a: NormalForm, b: NormalForm) -> bool:
    """True iff every instance of ``b`` is an instance of ``a``.

    Both arguments must come from the same knowledge base.  An absent attribute
    entry in ``b`` is the attribute's unconstrained default, which never
    satisfies a non-trivial entry of ``a`` (trivial entries are never stored).
    """
    if not b.coherent:
        return True
    if not a.coherent:
        return False
    if not a.primitives <= b.primitives or not a.tests <= b.tests:
        return False
    for attr, ra in a.attributes:
        rb = b.restriction(attr)
        if rb is None:
            return False
        if ra.min > rb.min:
            return False
        if ra.max is not None and (rb.max is None or rb.max > ra.max):
            return False
        if not ra.fillers <= rb.fillers:
            return False
        if ra.value is not None and rb.max != 0:
            if rb.value is None or not subsumes(ra.value, rb.value):
                return False
    return True
