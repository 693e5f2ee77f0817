"""Equivalence of higher-order context-free session types.

The pipeline validates a signature, kinds both types, translates them to one
simple grammar and decides bisimilarity of the two start words. Two
independent oracles cross-check it: bounded bisimulation on the type-level
transition system, and proof search over the syntactic equivalence rules.
"""

from types import ModuleType as _ModuleType

from .decider import (
    BisimVerdict,
    Certificate,
    Equivalent,
    InputNotSimple,
    NotEquivalent,
    ResourceExhausted,
    bounded_word_bisim,
    decide,
    verify_certificate,
)
from .grammar import (
    BOTTOM,
    ContractivityViolation,
    Grammar,
    Nonterminal,
    Production,
    build_grammar,
    dump_grammar,
    is_simple,
    norms,
    to_gnf,
    word_step,
)
from .kinding import (
    Diagnostic,
    KindError,
    check_kind,
    is_contractive,
    is_terminated,
    kind_of,
    subterms,
    validate_signature,
)
from .lts import TransitionLabel, distinguishing_trace, k_bisimilar, step
from .pipeline import CheckReport, Error, type_equiv
from .syntactic import Derivation, Proven, Refuted, Unknown, syntactic_check
from .syntax import ParseError, parse_signature, parse_type, pretty
from .types import (
    EMPTY_CONTEXT,
    EMPTY_SIGNATURE,
    Arrow,
    Base,
    Choice,
    DuplicateIdent,
    Ident,
    Index,
    Kind,
    KindContext,
    Labeled,
    Message,
    Polarity,
    Quant,
    Quantifier,
    Seq,
    Shape,
    Signature,
    Skip,
    TypeExpr,
    UnboundIdentifier,
    Unit,
    View,
)

__version__ = "0.1.0"

__all__ = [n for n, v in list(globals().items()) if not n.startswith("_") and not isinstance(v, _ModuleType)]
