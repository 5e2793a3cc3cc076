"""Terminological reasoning core: normalization, structural subsumption,
taxonomy classification, individual classification, test hooks and rules."""

from .expr import (
    BOTTOM_NF,
    TOP_EXPR,
    TOP_NF,
    All,
    And,
    AtLeast,
    AtMost,
    Fills,
    NormalForm,
    Prim,
    Ref,
    Restriction,
    Test,
    conj,
    denormalize,
    subsumes,
)
from .kb import (
    ABox,
    Assertion,
    ConceptDefinition,
    ForwardRule,
    Individual,
    KnowledgeBase,
)
from .taxonomy import BOTTOM, TOP, Placement, Taxonomy


def normalize(expr, kb: KnowledgeBase) -> NormalForm:
    return kb.normalize(expr)


def classify_concept(kb: KnowledgeBase, definition: ConceptDefinition) -> Placement:
    return kb.classify_concept(definition)


def classify_individual(kb: KnowledgeBase, individual: str, abox: ABox | None = None) -> frozenset:
    return kb.classify_individual(individual, abox)


def fire_rules(kb: KnowledgeBase, individual: str, abox: ABox | None = None) -> Individual:
    return kb.fire_rules(individual, abox)


__all__ = [
    "ABox", "All", "And", "Assertion", "AtLeast", "AtMost", "BOTTOM", "BOTTOM_NF",
    "ConceptDefinition", "Fills", "ForwardRule", "Individual", "KnowledgeBase",
    "NormalForm", "Placement", "Prim", "Ref", "Restriction", "TOP", "TOP_EXPR",
    "TOP_NF", "Taxonomy", "Test", "classify_concept", "classify_individual", "conj",
    "denormalize", "fire_rules", "normalize", "subsumes",
]
