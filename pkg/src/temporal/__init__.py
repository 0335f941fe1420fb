"""Temporal Partition Module"""
from .partition import (
    ShiftHistory, TemporalPartition, shift_value, pattern_oracle, neuron_partition,
    temporal_bound, tight_initial_potential, distinct_shift_values,
)
from .shifts import ShiftTrajectory, shift_trajectory

__all__ = [
    'ShiftHistory', 'TemporalPartition', 'shift_value', 'pattern_oracle', 'neuron_partition',
    'temporal_bound', 'tight_initial_potential', 'distinct_shift_values',
    'ShiftTrajectory', 'shift_trajectory',
]
