"""Random cluster graphs: Erdos-Renyi graphs conditioned on every component being a clique.

The model puts weight w**m(G) on each cluster graph G, where w = p/(1-p) and
m(G) is its edge count.  The normaliser is the generalised Bell polynomial
B_n(w), and most of the package is built on a log-domain table of it.
"""

from clustergraph.bellcore import (
    BellTable,
    CapacityError,
    EdgeBias,
    LogValue,
    build_bell_table,
    log_bell_ratio,
    log_binomial,
)
from clustergraph.oracle import Partition, BellPolynomial, bell_polynomial, enumerate_partitions

__all__ = [
    "BellTable",
    "BellPolynomial",
    "CapacityError",
    "EdgeBias",
    "LogValue",
    "Partition",
    "bell_polynomial",
    "build_bell_table",
    "enumerate_partitions",
    "log_bell_ratio",
    "log_binomial",
]

__version__ = "0.1.0"
