"""The classified concept DAG.

Nodes are equivalence classes of concept names; a concept that normalizes to
the same form as an existing one joins that node instead of creating a cycle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .expr import BOTTOM_NF, TOP_NF, NormalForm

TOP = "TOP"
BOTTOM = "BOTTOM"


class Node:
    __slots__ = ("names", "nf", "parents", "children")

    def __init__(self, name: str, nf: NormalForm):
        self.names = {name}
        self.nf = nf
        self.parents: set[Node] = set()
        self.children: set[Node] = set()

    @property
    def rep(self) -> str:
        if TOP in self.names:
            return TOP
        if BOTTOM in self.names:
            return BOTTOM
        return min(self.names)

    def __repr__(self):
        return f"Node({self.rep})"


@dataclass(frozen=True)
class Placement:
    name: str
    parents: tuple = ()
    children: tuple = ()
    equivalents: tuple = ()
    coherent: bool = True


class Taxonomy:
    def __init__(self):
        self.top = Node(TOP, TOP_NF)
        self.bottom = Node(BOTTOM, BOTTOM_NF)
        self.top.children.add(self.bottom)
        self.bottom.parents.add(self.top)
        self._by_name: dict[str, Node] = {TOP: self.top, BOTTOM: self.bottom}

    def __contains__(self, name):
        return name in self._by_name

    def node(self, name: str) -> Node:
        return self._by_name[name]

    def nodes(self):
        seen = {}
        for n in self._by_name.values():
            seen[id(n)] = n
        return list(seen.values())

    def insert(self, name: str, nf: NormalForm, subsumes: Callable[[NormalForm, NormalForm], bool]) -> Placement:
        if not nf.coherent:
            self._join(name, self.bottom)
            return Placement(name, equivalents=tuple(sorted(self.bottom.names - {name})), coherent=False)
        memo: dict[tuple[int, bool], bool] = {}

        def above(node):  # node subsumes nf
            key = (id(node), True)
            if key not in memo:
                memo[key] = subsumes(node.nf, nf)
            return memo[key]

        def below(node):  # nf subsumes node
            key = (id(node), False)
            if key not in memo:
                memo[key] = subsumes(nf, node.nf)
            return memo[key]

        parents = self._top_search(above)
        for p in parents:
            if below(p):
                self._join(name, p)
                return self._placement(name, p)
        children = self._bottom_search(below)
        node = Node(name, nf)
        for p in parents:
            for c in children:
                if c in p.children:
                    p.children.discard(c)
                    c.parents.discard(p)
        for p in parents:
            p.children.add(node)
            node.parents.add(p)
        for c in children:
            c.parents.add(node)
            node.children.add(c)
        self._by_name[name] = node
        return self._placement(name, node)

    def _top_search(self, above) -> list[Node]:
        result, visited = [], set()
        stack = [self.top]
        visited.add(id(self.top))
        while stack:
            node = stack.pop()
            positive = [c for c in node.children if c is not self.bottom and above(c)]
            if not positive:
                result.append(node)
            for c in positive:
                if id(c) not in visited:
                    visited.add(id(c))
                    stack.append(c)
        return result

    def _bottom_search(self, below) -> list[Node]:
        result, visited = [], set()
        stack = [self.bottom]
        visited.add(id(self.bottom))
        while stack:
            node = stack.pop()
            positive = [p for p in node.parents if p is not self.top and below(p)]
            if not positive:
                result.append(node)
            for p in positive:
                if id(p) not in visited:
                    visited.add(id(p))
                    stack.append(p)
        return result

    def _join(self, name, node):
        node.names.add(name)
        self._by_name[name] = node

    def _placement(self, name, node) -> Placement:
        return Placement(
            name=name,
            parents=tuple(sorted(p.rep for p in node.parents)),
            children=tuple(sorted(c.rep for c in node.children)),
            equivalents=tuple(sorted(node.names - {name})),
        )

    # -- queries -------------------------------------------------------------

    def parents(self, name: str) -> tuple:
        return tuple(sorted(p.rep for p in self._by_name[name].parents))

    def children(self, name: str) -> tuple:
        return tuple(sorted(c.rep for c in self._by_name[name].children))

    def synonyms(self, name: str) -> tuple:
        return tuple(sorted(self._by_name[name].names))

    def ancestors(self, name: str, include_self: bool = True) -> set[str]:
        start = self._by_name[name]
        out: set[str] = set()
        stack = [start]
        seen = {id(start)}
        while stack:
            n = stack.pop()
            if n is not start or include_self:
                out |= n.names
            for p in n.parents:
                if id(p) not in seen:
                    seen.add(id(p))
                    stack.append(p)
        return out

    def descendants(self, name: str, include_self: bool = True) -> set[str]:
        start = self._by_name[name]
        out: set[str] = set()
        stack = [start]
        seen = {id(start)}
        while stack:
            n = stack.pop()
            if n is not start or include_self:
                out |= n.names
            for c in n.children:
                if id(c) not in seen:
                    seen.add(id(c))
                    stack.append(c)
        return out

    def edges(self) -> frozenset:
        """Direct links as (parent names, child names) pairs; comparable across rebuilds."""
        out = set()
        for n in self.nodes():
            for c in n.children:
                out.add((frozenset(n.names), frozenset(c.names)))
        return frozenset(out)

    def incoherent(self) -> tuple:
        return tuple(sorted(self.bottom.names - {BOTTOM}))

    def to_dict(self) -> dict:
        return {
            n.rep: {
                "synonyms": sorted(n.names - {n.rep}),
                "parents": sorted(p.rep for p in n.parents),
                "children": sorted(c.rep for c in n.children),
            }
            for n in sorted(self.nodes(), key=lambda n: n.rep)
        }
