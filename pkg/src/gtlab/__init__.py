"""Desk-scale workbench for Borel cardinal invariant properties."""

from gtlab.sequences import (
    AlmostVerdict,
    EPDFun,
    SpaceMismatch,
    UPSet,
    almost_compare,
    epd_pointwise_max,
    gap_cover_function,
    increasing_enumeration,
    pair_decode,
    pair_encode,
    up_boolean,
    up_is_infinite,
)

__version__ = "0.1.0"

__all__ = [
    "AlmostVerdict",
    "EPDFun",
    "SpaceMismatch",
    "UPSet",
    "almost_compare",
    "epd_pointwise_max",
    "gap_cover_function",
    "increasing_enumeration",
    "pair_decode",
    "pair_encode",
    "up_boolean",
    "up_is_infinite",
]
