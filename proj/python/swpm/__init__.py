"""Weighted-particle Boltzmann solver with moment-preserving reduction."""

from ._swpm import (
    equilibrium,
    moments,
    normal_quantile,
    reduce_group,
    sample_mixture,
    simulate,
)

__all__ = [
    "equilibrium",
    "moments",
    "normal_quantile",
    "reduce_group",
    "sample_mixture",
    "simulate",
]
