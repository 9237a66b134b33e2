"""Crossed-module invariants of knotted-surface complements.

Count morphisms from a presented crossed module, or colorings of a
knot-with-bands diagram, into a finite crossed module.
"""
from .algebra import (
    CrossedModuleError,
    FiniteCrossedModule,
    FiniteGroup,
    GroupHom,
    GroupTableError,
    act,
    boundary,
    evaluate_group_word,
    make_conjugation,
    make_crossed_module,
    make_cyclic,
    make_direct_product,
    make_from_table,
    make_symmetric,
    make_trivial_boundary,
    parse_crossed_module,
    serialize_crossed_module,
    validate_crossed_module,
)
from .corpus import coefficient, list_examples, load_example
from .kwb import (
    KwbDiagram,
    check_consistency,
    count_colorings,
    extract_presentation,
    invariant_from_diagram,
    parse_diagram,
    serialize_diagram,
)
from .presentation import (
    CrossedModulePresentation,
    PrincipalTerm,
    TwoRelation,
    count_homs,
    free_product,
    invariant,
    parse_presentation,
    serialize,
    stabilize,
)

__version__ = "0.1.0"

__all__ = [
    "coefficient",
    "list_examples",
    "load_example",
    "CrossedModuleError",
    "FiniteCrossedModule",
    "FiniteGroup",
    "GroupHom",
    "GroupTableError",
    "act",
    "boundary",
    "evaluate_group_word",
    "make_conjugation",
    "make_crossed_module",
    "make_cyclic",
    "make_direct_product",
    "make_from_table",
    "make_symmetric",
    "make_trivial_boundary",
    "parse_crossed_module",
    "serialize_crossed_module",
    "validate_crossed_module",
    "KwbDiagram",
    "check_consistency",
    "count_colorings",
    "extract_presentation",
    "invariant_from_diagram",
    "parse_diagram",
    "serialize_diagram",
    "CrossedModulePresentation",
    "PrincipalTerm",
    "TwoRelation",
    "count_homs",
    "free_product",
    "invariant",
    "parse_presentation",
    "serialize",
    "stabilize",
]
