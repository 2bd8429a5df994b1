"""Graded modal dependent type theory.

Type checking, principal usage inference, erasure to an untyped target,
evaluation, and randomized audit suites over a resource-annotated core
calculus.  All operations take source text and keyword configuration
(``modality=``, ``mode=``, ``erased_matches=``, ...); custom grade lattices
are named ``"lattice:<path>"``.
"""

from ._gtt import (
    ParseError,
    TypeError,
    UsageError,
    __version__,
    check,
    evaluate,
    extract,
    laws,
    modality,
    run,
    suite,
    usage,
)

__all__ = [
    "ParseError",
    "TypeError",
    "UsageError",
    "__version__",
    "check",
    "evaluate",
    "extract",
    "laws",
    "modality",
    "run",
    "suite",
    "usage",
]
