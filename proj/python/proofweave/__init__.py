"""Locally colored graphs, Yeo-style splitting theorems, and proof net
sequentialization for unit-free MLL and MALL."""

from ._proofweave import (  # noqa: F401
    BuildError,
    CorollaryError,
    DerivError,
    MallError,
    PsError,
    corollary,
    generate,
    graph_split,
    has_cuspfree_cycle,
    mall_check,
    mall_desequentialize,
    mall_sequentialize,
    mll_check,
    mll_desequentialize,
    mll_iso,
    mll_sequentialize,
    splitting_vertices,
)
