"""Decide and construct reconfiguration sequences of disjoint matroid basis sequences."""

from basis_reconf.matroids import (
    DirectSum, DualMatroid, GraphicMatroid, MatroidSpec, OracleMatroid, PartitionMatroid, UniformMatroid,
)
from basis_reconf.reconfig_engine import decide, solve, verify

__all__ = [
    'DirectSum', 'DualMatroid', 'GraphicMatroid', 'MatroidSpec', 'OracleMatroid', 'PartitionMatroid',
    'UniformMatroid', 'decide', 'solve', 'verify',
]
