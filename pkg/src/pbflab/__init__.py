"""pbflab: a laboratory for partial Boolean functions.

Computes combinatorial query-complexity measures (sensitivity, block
sensitivity, certificates, decision-tree depth, critical measures),
polynomial degrees via LP, structured-promise characterizations
(symmetric functions, slices), completion constructions, and the
perturbation-finding hardness pipeline.
"""

from pbflab.boolfn import (
    ONE,
    UNDEF,
    ZERO,
    PartialAssignment,
    PartialFunction,
    flip,
    make_slice,
    make_symmetric,
)

__version__ = "0.1.0"

__all__ = [
    "ZERO",
    "ONE",
    "UNDEF",
    "PartialFunction",
    "PartialAssignment",
    "flip",
    "make_symmetric",
    "make_slice",
    "__version__",
]
