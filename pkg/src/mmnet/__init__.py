"""Multimode network parameter conversion by state-space change of basis.

Models two-sided networks with M modes per side, converts their parameter
matrices between the S, T, ABCD, Z, Y and h families for arbitrary complex
mode impedances, cascades sections, and reads/writes frequency-swept data
(Touchstone v1 and a native text format).
"""

__version__ = "0.1.0"

from .network import BlockMatrix, ModeSpec, NetworkMatrix, ParamKind
from .statespace import Basis, CoordSystem, coord_system, express_in, seed_basis
from .convert import (
    CONDITION_LIMIT,
    ConversionReport,
    SingularLowerHalf,
    convert,
    convert_direct,
    defining_relation_residual,
)
from .cascade import InterfaceMismatch, cascade
from .fileio import (
    ParseError,
    Sweep,
    UnsupportedExport,
    UnsupportedParameterType,
    UnsupportedTopology,
    parse_native,
    parse_touchstone,
    write_native,
    write_touchstone,
)
from .reference import (
    GenerationFailed,
    ReferenceInapplicable,
    SingularJunction,
    monomode_convert,
    random_network,
    redheffer_star,
    sample_states,
)

__all__ = [
    "__version__",
    "BlockMatrix",
    "ModeSpec",
    "NetworkMatrix",
    "ParamKind",
    "Basis",
    "CoordSystem",
    "coord_system",
    "express_in",
    "seed_basis",
    "CONDITION_LIMIT",
    "ConversionReport",
    "SingularLowerHalf",
    "convert",
    "convert_direct",
    "defining_relation_residual",
    "InterfaceMismatch",
    "cascade",
    "ParseError",
    "Sweep",
    "UnsupportedExport",
    "UnsupportedParameterType",
    "UnsupportedTopology",
    "parse_native",
    "parse_touchstone",
    "write_native",
    "write_touchstone",
    "GenerationFailed",
    "ReferenceInapplicable",
    "SingularJunction",
    "monomode_convert",
    "random_network",
    "redheffer_star",
    "sample_states",
]
