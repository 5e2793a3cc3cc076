"""Consistency checking for unification-grammar rules.

Each rule is expanded by substituting every right-hand-side nonterminal with
each of its own rules, down to a depth bound.  Feature equations of all rules
in an expansion are solved by union-find over ``(node, feature)`` variables
with values from the two-point lattice ``{+, -}``; a class holding both
values is a clash.  A clash is an error for a rule when it occurs under every
choice of expansions, and a warning when only some choices clash.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import MalformedEquation, UnknownSymbol

VALUES = ("+", "-")


@dataclass(frozen=True)
class PathRef:
    symbol: str
    index: int | None = None  # position in the rule: 0 = LHS, 1.. = RHS
    feature: str | None = None

    def __str__(self):
        sym = self.symbol if self.index is None else f"{self.symbol}[{self.index}]"
        return f"<{sym}>" if self.feature is None else f"<{sym} {self.feature}>"


@dataclass(frozen=True)
class FeatureEquation:
    left: PathRef
    right: PathRef | str

    def __post_init__(self):
        if isinstance(self.right, str):
            if self.right not in VALUES:
                raise MalformedEquation(f"value must be + or -, got {self.right!r}")
            if self.left.feature is None:
                raise MalformedEquation(f"cannot assign a value to a whole category: {self}")
        elif (self.left.feature is None) != (self.right.feature is None):
            raise MalformedEquation(f"mixes a feature path with a whole category: {self}")

    @property
    def kind(self) -> str:
        if isinstance(self.right, str):
            return "value"
        return "projection" if self.left.feature is None else "path"

    def features(self) -> set[str]:
        out = {self.left.feature}
        if isinstance(self.right, PathRef):
            out.add(self.right.feature)
        return {f for f in out if f is not None}

    def __str__(self):
        return f"{self.left} = {self.right}"


@dataclass(frozen=True)
class GrammarRule:
    id: str
    lhs: str
    rhs: tuple
    equations: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "rhs", tuple(self.rhs))
        object.__setattr__(self, "equations", tuple(self.equations))

    @property
    def symbols(self) -> tuple:
        return (self.lhs,) + self.rhs

    def position(self, ref: PathRef) -> int:
        syms = self.symbols
        if ref.index is not None:
            if not 0 <= ref.index < len(syms) or syms[ref.index] != ref.symbol:
                raise UnknownSymbol(f"{ref.symbol}[{ref.index}]")
            return ref.index
        hits = [i for i, s in enumerate(syms) if s == ref.symbol]
        if not hits:
            raise UnknownSymbol(ref.symbol)
        if len(hits) > 1:
            raise MalformedEquation(
                f"rule {self.id}: {ref.symbol} occurs {len(hits)} times; write {ref.symbol}[i]")
        return hits[0]

    def __str__(self):
        return f"{self.lhs} -> {' '.join(self.rhs)}"


@dataclass(frozen=True)
class Source:
    """Where a clashing value comes from."""
    rule: str
    equation: str
    value: str
    via: str  # the checked rule's category the value reaches it through

    def to_dict(self) -> dict:
        return {"rule": self.rule, "equation": self.equation, "value": self.value, "via": self.via}


@dataclass(frozen=True)
class InconsistencyReport:
    rule: str
    feature: str
    positive: Source
    negative: Source
    severity: str = "error"  # "error" when every expansion clashes, else "warning"
    clashing: int = 1
    expansions: int = 1

    @property
    def message(self) -> str:
        p, n = self.positive, self.negative
        return (f"rule {self.rule}: {self.feature} of {p.via} is + (rule {p.rule}: {p.equation}) "
                f"but {self.feature} of {n.via} is - (rule {n.rule}: {n.equation})")

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "feature": self.feature,
            "severity": self.severity,
            "positive": self.positive.to_dict(),
            "negative": self.negative.to_dict(),
            "clashing_expansions": self.clashing,
            "expansions": self.expansions,
        }


def rule_sort_key(rule_id: str):
    return (0, int(rule_id), "") if rule_id.isdigit() else (1, 0, rule_id)


def feature_inventory(rules: Iterable[GrammarRule]) -> tuple:
    return tuple(sorted({f for r in rules for e in r.equations for f in e.features()}))


def validate(rules: list[GrammarRule], features: Iterable[str] | None = None):
    ids = [r.id for r in rules]
    if len(set(ids)) != len(ids):
        raise MalformedEquation("duplicate rule identifiers")
    inventory = set(features) if features is not None else None
    for r in rules:
        for e in r.equations:
            r.position(e.left)
            if isinstance(e.right, PathRef):
                r.position(e.right)
            if inventory is not None:
                unknown = e.features() - inventory
                if unknown:
                    raise MalformedEquation(f"rule {r.id}: undeclared feature {sorted(unknown)[0]!r}")


Application = tuple  # (node path, rule)


def expansions(rule: GrammarRule, by_lhs: dict, depth: int) -> Iterator[list]:
    """Every choice of sub-rules for ``rule``'s nonterminals down to ``depth``;
    each choice is a list of (node path, rule) applications in DFS order."""

    def expand(path: tuple, r: GrammarRule, left: int) -> Iterator[list]:
        options = []
        for i, sym in enumerate(r.rhs, 1):
            subs = by_lhs.get(sym, []) if left > 0 else []
            if not subs:
                options.append([[]])
            else:
                options.append([app for sub in subs for app in expand(path + (i,), sub, left - 1)])
        for combo in itertools.product(*options):
            yield [(path, r)] + [a for part in combo for a in part]

    yield from expand((), rule, depth)


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        if p != x:
            p = self.parent[x] = self.find(p)
        return p

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def solve(applications: list, inventory: tuple, rule: GrammarRule) -> dict:
    """Clashes touching ``rule``'s own categories: feature -> (positive, negative)."""
    uf = _UnionFind()
    assigned: list = []  # (var, value, rule id, equation)
    for path, r in applications:
        for e in r.equations:
            left = path + (r.position(e.left),) if r.position(e.left) else path
            if e.kind == "value":
                var = (left, e.left.feature)
                uf.find(var)
                assigned.append((var, e.right, r.id, str(e)))
                continue
            right = path + (r.position(e.right),) if r.position(e.right) else path
            if e.kind == "path":
                uf.union((left, e.left.feature), (right, e.right.feature))
            else:
                for f in inventory:
                    uf.union((left, f), (right, f))
    values: dict = {}
    for var, value, rid, eq in assigned:
        values.setdefault(uf.find(var), {}).setdefault(value, (var, rid, eq))
    top_vars: dict = {}
    for var in list(uf.parent):
        node, feature = var
        if len(node) <= 1:
            top_vars.setdefault(uf.find(var), []).append(var)
    clashes: dict = {}
    for root, vals in values.items():
        if len(vals) < 2 or root not in top_vars:
            continue
        pair = []
        for value in VALUES:
            var, rid, eq = vals[value]
            node = var[0]
            via = rule.lhs if not node else rule.rhs[node[0] - 1]
            pair.append(Source(rid, eq, value, via))
        # every feature of the rule's own categories in the class is forced both ways
        for feature in sorted({f for _, f in top_vars[root]}):
            clashes.setdefault(feature, tuple(pair))
    return clashes


def check_rule(rule: GrammarRule, by_lhs: dict, depth: int, inventory: tuple) -> list[InconsistencyReport]:
    total = 0
    seen: dict = {}
    counts: dict = {}
    for apps in expansions(rule, by_lhs, depth):
        total += 1
        for feature, pair in solve(apps, inventory, rule).items():
            seen.setdefault(feature, pair)
            counts[feature] = counts.get(feature, 0) + 1
    out = []
    for feature in sorted(seen):
        pos, neg = seen[feature]
        out.append(InconsistencyReport(
            rule=rule.id,
            feature=feature,
            positive=pos,
            negative=neg,
            severity="error" if counts[feature] == total else "warning",
            clashing=counts[feature],
            expansions=total,
        ))
    return out


def check_grammar(rules: Iterable[GrammarRule], depth: int = 1,
                  features: Iterable[str] | None = None) -> list[InconsistencyReport]:
    """Errors and warnings for every rule, sorted by rule id then feature."""
    if depth < 1:
        raise ValueError("depth must be at least 1")
    rules = list(rules)
    validate(rules, features)
    inventory = tuple(sorted(features)) if features is not None else feature_inventory(rules)
    by_lhs: dict = {}
    for r in sorted(rules, key=lambda r: rule_sort_key(r.id)):
        by_lhs.setdefault(r.lhs, []).append(r)
    reports = []
    for r in sorted(rules, key=lambda r: rule_sort_key(r.id)):
        reports.extend(check_rule(r, by_lhs, depth, inventory))
    return reports


def errors(reports: Iterable[InconsistencyReport]) -> list[InconsistencyReport]:
    return [r for r in reports if r.severity == "error"]
