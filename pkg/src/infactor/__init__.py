"""Executable finite prefixes of countable graph factorizations.

Modules: :mod:`~infactor.graphs` (oracle graphs and digit-rule Rado graphs),
:mod:`~infactor.engine` (back-and-forth factorization engine),
:mod:`~infactor.stars` (k-star orbit factorizations) and
:mod:`~infactor.resolution` (decompositions and resolution classes).
"""

from .errors import (
    ConfigError,
    InfactorError,
    InputError,
    OracleError,
    OracleMissing,
    SearchExhausted,
    Unsupported,
    WitnessImpossible,
)
from .graphs import (
    ComputableGraph,
    DigitSet,
    builtin_family,
    complete_graph,
    edge_index,
    edge_pair,
    pad_with_isolated,
    parse_host,
    rado_graph,
    rado_star_witness,
    rado_undominated,
)

__version__ = "0.1.0"
