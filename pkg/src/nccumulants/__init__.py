"""Exact noncrossing-partition combinatorics for free cumulants.

Set and noncrossing partition lattices, their Möbius functions and the
Kreweras complement; multiplicative functions and their convolution;
exact power series, resultants and root isolation; moment/cumulant
transforms with formal identity checks; counting sequences, growth
constants and symmetrization bounds.
"""

from .errors import DomainError, MissingDataError, NCError, OrderError, SizeLimitError, SolverError
from .incidence import MultiplicativeFunction, convolve_nc, mobius, mobius_nc, mobius_set, mult_eval
from .partitions import (
    Partition,
    enumerate_partitions,
    interweave,
    is_noncrossing,
    kernel,
    kreweras,
    lattice_meet_join,
)
from .series import BivariatePolynomial, Polynomial, PowerSeries

__version__ = "0.1.0"

__all__ = [
    "BivariatePolynomial",
    "DomainError",
    "MissingDataError",
    "MultiplicativeFunction",
    "NCError",
    "OrderError",
    "Partition",
    "Polynomial",
    "PowerSeries",
    "SizeLimitError",
    "SolverError",
    "convolve_nc",
    "enumerate_partitions",
    "interweave",
    "is_noncrossing",
    "kernel",
    "kreweras",
    "lattice_meet_join",
    "mobius",
    "mobius_nc",
    "mobius_set",
    "mult_eval",
]
