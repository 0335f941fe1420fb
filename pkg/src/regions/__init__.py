"""Region Geometry Module"""
from .bounds import count_bound, r_regions_closed, r_regions_recursive
from .families import ParallelFamily, first_layer_families
from .arrangement import (
    Line, Cell, CellComplex2D, make_line, family_lines, incremental_count, enclosing_box,
    build_cell_complex, count_exact_2d,
)
from .counting import CountReport, constant_regions_2d, sample_patterns, sample_points
from .general_position import GeneralPositionBuilder, general_position_layer, in_general_position

__all__ = [
    'count_bound', 'r_regions_closed', 'r_regions_recursive',
    'ParallelFamily', 'first_layer_families',
    'Line', 'Cell', 'CellComplex2D', 'make_line', 'family_lines', 'incremental_count', 'enclosing_box',
    'build_cell_complex', 'count_exact_2d',
    'CountReport', 'constant_regions_2d', 'sample_patterns', 'sample_points',
    'GeneralPositionBuilder', 'general_position_layer', 'in_general_position',
]
