"""fixlab: fixed points of progressive and monotone maps on chain-complete posets.

The engines follow the classical existence proofs step by step, each
result is returned as a verified witness, and brute-force oracles are
provided for cross-checking on small instances.
"""

from __future__ import annotations

from .caps import Caps, current_caps
from .engines import (
    build_fpo,
    aggregate_family,
    dacar_reduction,
    iterative_fix_oracle,
    kt_via_bw,
    pataraia_fix,
    tarski_lfp,
)
from .errors import FixlabError
from .iteration import bw_fix_by_iteration, injectivity_scan, transfinite_iterate
from .order import (
    EndoMap,
    FinitePoset,
    FixedPointWitness,
    OmegaPlusOne,
    PowersetLattice,
    ProductPoset,
    check_chain_complete,
    check_complete_lattice,
    check_directed_complete,
    classify_map,
)
from .ordinals import Ordinal, parse_ordinal

__version__ = "0.1.0"

__all__ = [
    "Caps",
    "EndoMap",
    "FinitePoset",
    "FixedPointWitness",
    "FixlabError",
    "OmegaPlusOne",
    "Ordinal",
    "PowersetLattice",
    "ProductPoset",
    "aggregate_family",
    "build_fpo",
    "bw_fix_by_iteration",
    "check_chain_complete",
    "check_complete_lattice",
    "check_directed_complete",
    "classify_map",
    "current_caps",
    "dacar_reduction",
    "injectivity_scan",
    "iterative_fix_oracle",
    "kt_via_bw",
    "parse_ordinal",
    "pataraia_fix",
    "tarski_lfp",
    "transfinite_iterate",
]
