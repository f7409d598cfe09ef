"""Finite binary string numbers R_n, the scale-sectioned space built on
them, and a toy inflation / Hubble-expansion model driven by the successor
map."""

from rnspace.numbers import (
    Rounding,
    StringNumber,
    add,
    compare,
    mul,
    parse,
    predecessor,
    round_to,
    spacing,
    successor,
    value_of,
)

__all__ = [
    "Rounding",
    "StringNumber",
    "add",
    "compare",
    "mul",
    "parse",
    "predecessor",
    "round_to",
    "spacing",
    "successor",
    "value_of",
]

__version__ = "0.1.0"
